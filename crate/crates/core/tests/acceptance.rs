//! One check per acceptance criterion. Every criterion prints a PASS or FAIL
//! line; the run fails when the set of failing criteria differs from
//! `KNOWN_RED`.

mod common;

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use blueforge::arith::{self, ArchIdeal, CurveOpen, Place};
use blueforge::blueprint::{for_each_point, PointTarget};
use blueforge::catalog;
use blueforge::complexes::{
    building_type_a, coxeter_complex, isomorphism, point_ranks, q_factorial, standard_seed, tilde_complex,
    weyl_orbit_complex, CoxeterType,
};
use blueforge::congruence::{absorbing_ideal, cspec, cspec_to_spec, Partition};
use blueforge::kzero::{is_projective, k0, universe, BlueModule};
use blueforge::quiver::{IntegralRep, Quiver};
use blueforge::{Blueprint, Elem, Error, Rational};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SPEC_TIME_LIMIT: Duration = Duration::from_secs(5);
const COUNT_TIME_LIMIT: Duration = Duration::from_secs(30);
const QUIVER_TIME_LIMIT: Duration = Duration::from_secs(120);
const MAX_AFFINE_DIM: usize = 10;
const MAX_PROJ_DIM: usize = 6;
const MAX_COUNT_DIM: usize = 4;
const FIELD_ORDERS: [u32; 4] = [2, 3, 4, 5];
const TREE_INSTANCES: usize = 50;
const SHEAF_SAMPLES: usize = 10_000;
const DERIVED_RELATIONS: usize = 10_000;
const GLOBAL_BUDGET_SCALE: usize = 10;
const SEED: u64 = 0x5eed;

/// Criteria that cannot hold as stated, with the reason.
const KNOWN_RED: &[(usize, &str)] = &[(
    4,
    "no relation of the two-field blueprint mixes its components, so the union of the two maximal ideals is \
     prime; Spec B is a local 3-point space, Γ(Spec B) = B and the ring-product relation stays underivable",
)];

type Check = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn within(start: Instant, limit: Duration, what: &str) -> Result<(), String> {
    let t = start.elapsed();
    ensure!(t < limit, "{what} took {t:?}, limit {limit:?}");
    Ok(())
}

fn spectra() -> Check {
    let start = Instant::now();
    for n in 0..=MAX_AFFINE_DIM {
        let s = catalog::affine_space(n).unwrap().spec().unwrap();
        ensure!(s.complete && s.len() == 1 << n, "A^{n}: {} points", s.len());
        let sets: BTreeSet<&Vec<usize>> = s.points.iter().map(|p| &p.generators).collect();
        ensure!(sets.len() == 1 << n, "A^{n}: repeated primes");
        for i in 0..s.len() {
            for j in 0..s.len() {
                let subset = s.points[i].generators.iter().all(|g| s.points[j].generators.contains(g));
                ensure!(s.order.leq(i, j) == subset, "A^{n}: order differs from inclusion at ({i}, {j})");
            }
        }
    }
    within(start, SPEC_TIME_LIMIT, "spectra of A^0..A^10")?;
    let line = Blueprint::free(blueforge::Coefficients::f1(), &["T"], &[]).unwrap().spec().unwrap();
    ensure!(line.labels() == ["(0)", "(T)"] && line.order.lt(0, 1), "Spec F1[T] = {:?}", line.labels());
    Ok(format!("2^n points with inclusion order for n ≤ {MAX_AFFINE_DIM} in {:?}", start.elapsed()))
}

fn sl2() -> Check {
    let s = catalog::sl2().spec().unwrap();
    let labels: BTreeSet<String> = s.labels().into_iter().collect();
    let expected: BTreeSet<String> =
        ["(0)", "(T1)", "(T2)", "(T3)", "(T4)", "(T1, T4)", "(T2, T3)"].into_iter().map(String::from).collect();
    ensure!(s.complete && labels == expected, "primes {labels:?}");
    let closed: BTreeSet<&str> = s.closed_points().iter().map(|&i| s.points[i].label.as_str()).collect();
    ensure!(closed == BTreeSet::from(["(T1, T4)", "(T2, T3)"]), "closed points {closed:?}");
    let w = s.weyl_extension().unwrap();
    ensure!(w.points.len() == 2, "Weyl extension of size {}", w.points.len());
    ensure!(w.hypothesis_holds(), "a closure is not a split torus");
    let mut fields = Vec::new();
    for c in &w.certificates {
        let t = c.torus.as_ref().ok_or("closure without torus certificate")?;
        ensure!(c.rank == 1 && t.rank == 1 && t.split, "closure certificate {c:?}");
        fields.push(t.coefficient_field.clone().unwrap_or_default());
    }
    Ok(format!("7 primes, 2 closed points, rank-1 split tori over {}", fields.join(" and ")))
}

fn projective_spaces() -> Check {
    for n in 0..=MAX_PROJ_DIM {
        let (obj, _) = catalog::lookup(&format!("catalog:proj:{n}")).unwrap();
        let s = obj.space().unwrap();
        ensure!(s.len() == (1 << (n + 1)) - 1, "|P^{n}| = {}", s.len());
    }
    let p1 = catalog::lookup("catalog:P1").unwrap().0.space().unwrap();
    ensure!(p1.generic_points().len() == 1 && p1.closed_points().len() == 2, "P^1 shape {:?}", p1.labels());
    let p2 = catalog::lookup("catalog:P2").unwrap().0.space().unwrap();
    ensure!(p2.len() == 7, "|P^2| = {}", p2.len());
    Ok(format!("|P^n| = 2^(n+1) - 1 for n ≤ {MAX_PROJ_DIM}"))
}

fn globalization() -> Check {
    let b = catalog::two_fields();
    let s = b.spec().unwrap();
    let g = b.globalize().unwrap();
    let gs = g.spec().unwrap();
    let product = g.relation("1 + 1 = c").unwrap();
    let derivable = g.derive(&product, g.budget().scaled(GLOBAL_BUDGET_SCALE)).unwrap().is_proved();
    let discrete = s.len() == 2 && s.closed_points().len() == 2;
    ensure!(
        discrete && derivable && s.order.is_isomorphic(&gs.order),
        "Spec B has {} points ({} closed), Γ B = B: {}, product relation derivable in Γ B: {derivable}",
        s.len(),
        s.closed_points().len(),
        g == b
    );
    Ok("Spec Γ B ≅ Spec B discrete, product relation derivable".into())
}

fn counting() -> Check {
    let start = Instant::now();
    for n in 0..=MAX_COUNT_DIM {
        let (obj, _) = catalog::lookup(&format!("catalog:proj:{n}")).unwrap();
        for q in FIELD_ORDERS {
            let expected: u64 = (0..=n as u32).map(|i| (q as u64).pow(i)).sum();
            let got = obj.count_points(q).unwrap();
            ensure!(got == expected, "|P^{n}(F_{q})| = {got}, expected {expected}");
        }
    }
    let poly = |r: &str| catalog::lookup(r).unwrap().0.counting_polynomial(None).unwrap();
    let sl2 = poly("catalog:sl2");
    ensure!(sl2.coefficients == [0, -1, 0, 1], "SL2 counts {sl2}");
    let gr = poly("catalog:gr:2,4");
    ensure!(gr.coefficients == [1, 1, 2, 1, 1] && gr.eval(1) == 6, "Gr(2,4) counts {gr}");
    let point = poly("catalog:f1").zeta().to_string();
    let line = poly("catalog:A1").zeta().to_string();
    ensure!(point == "s" && line == "s - 1", "zeta functions {point:?}, {line:?}");
    within(start, COUNT_TIME_LIMIT, "point counts")?;
    Ok(format!("{sl2}; {gr}; ζ = {point}, {line}; {:?}", start.elapsed()))
}

fn complexes() -> Check {
    use CoxeterType::*;
    let (p2, _) = catalog::lookup("catalog:P2").unwrap();
    let space = p2.space().unwrap();
    let ranks = point_ranks(&space, true).unwrap();
    let tilde = tilde_complex(&space, &ranks, &space.generic_points()).unwrap();
    let a2 = coxeter_complex(A, 2).unwrap().complex;
    ensure!(tilde.f_vector() == [6, 6], "Δ̃(P^2) f-vector {:?}", tilde.f_vector());
    ensure!(isomorphism(&tilde, &a2, true).unwrap().is_witness(), "Δ̃(P^2) is not the A2 complex");
    for n in 1..=5 {
        let chambers = coxeter_complex(A, n).unwrap().complex.chambers().len();
        ensure!(chambers == (1..=n + 1).product::<usize>(), "A{n} has {chambers} chambers");
    }
    for ty in [A, B, C, D] {
        for n in 1..=4 {
            if ty == D && n < 2 {
                continue;
            }
            ensure!(coxeter_complex(ty, n).unwrap().complex.is_thin(), "{ty}{n} is not thin");
        }
    }
    for ty in [B, C, D] {
        for n in 2..=3 {
            let orbit = weyl_orbit_complex(ty, n, &standard_seed(ty, n, true)).unwrap().complex;
            let abstract_complex = coxeter_complex(ty, n).unwrap().complex;
            ensure!(isomorphism(&orbit, &abstract_complex, true).unwrap().is_witness(), "{ty}{n} orbit");
        }
    }
    let plain = weyl_orbit_complex(D, 3, &standard_seed(D, 3, false)).unwrap().complex;
    let d3 = coxeter_complex(D, 3).unwrap().complex;
    ensure!(!plain.is_thick() && !plain.is_thin(), "non-oriflamme D3 orbit has uniform panels");
    ensure!(!isomorphism(&plain, &d3, false).unwrap().is_witness(), "non-oriflamme D3 orbit matches D3");
    Ok("Δ̃(P^2) ≅ A2, (n+1)! chambers, thin, orbits match, D3 needs the oriflamme".into())
}

fn buildings() -> Check {
    for (n, q) in [(1, 2), (1, 3), (2, 2), (2, 3)] {
        let b = building_type_a(n, q).unwrap();
        let chambers = b.complex.chambers().len() as u64;
        ensure!(chambers == q_factorial(n + 1, q as u64), "A{n}(F_{q}) has {chambers} chambers");
        let sizes: BTreeSet<usize> = b.complex.panels().into_values().collect();
        ensure!(sizes == BTreeSet::from([q as usize + 1]), "A{n}(F_{q}) panel sizes {sizes:?}");
        let apartment = b.standard_apartment().unwrap();
        let coxeter = coxeter_complex(CoxeterType::A, n).unwrap().complex;
        ensure!(isomorphism(&apartment, &coxeter, true).unwrap().is_witness(), "A{n}(F_{q}) apartment");
    }
    Ok("q-factorial chambers, q+1 chambers per panel, apartments ≅ A_n".into())
}

fn quiver_grassmannians() -> Check {
    let start = Instant::now();
    let scaled = IntegralRep::new(Quiver::linear(2), vec![2, 2], vec![vec![vec![2, 0], vec![0, 2]]]).unwrap();
    let naive = scaled.naive_f1_points(&[1, 1]).unwrap().len();
    let chi = scaled.euler_characteristic(&[1, 1]).unwrap();
    ensure!(naive == 0 && chi == 2, "diag(2,2): {naive} naive points, χ = {chi}");
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    for k in 0..TREE_INSTANCES {
        let (rep, e) = common::random_identity_tree(&mut rng);
        let naive = rep.naive_f1_points(&e).unwrap().len() as i128;
        let weyl = rep.weyl_count(&e).unwrap() as i128;
        let chi = rep.euler_characteristic(&e).unwrap();
        ensure!(naive == weyl && weyl == chi, "identity tree {k} {:?} e = {e:?}: {naive}, {weyl}, {chi}", rep.dims);
    }
    for k in 0..TREE_INSTANCES {
        let (rep, e) = common::random_diagonal_tree(&mut rng);
        let weyl = rep.weyl_count(&e).unwrap() as i128;
        let chi = rep.euler_characteristic(&e).unwrap();
        ensure!(weyl == chi, "diagonal tree {k} {:?} e = {e:?}: {weyl}, {chi}", rep.dims);
    }
    within(start, QUIVER_TIME_LIMIT, "quiver Grassmannians")?;
    Ok(format!("diag(2,2): 0 naive, χ = 2; {} random trees agree in {:?}", 2 * TREE_INSTANCES, start.elapsed()))
}

fn random_rational(rng: &mut impl Rng) -> Rational {
    let d = [1i64, 2, 3, 4, 5, 6, 7, 9, 10, 12, 14, 15, 25, 49][rng.gen_range(0..14)];
    Rational::new(rng.gen_range(-60..=60), d)
}

fn random_open(rng: &mut impl Rng) -> CurveOpen {
    if rng.gen_ratio(1, 20) {
        return CurveOpen::Empty;
    }
    let places = [Place::Finite(2), Place::Finite(3), Place::Finite(5), Place::Finite(7), Place::Infinity];
    CurveOpen::complement(places.into_iter().filter(|_| rng.gen_bool(0.4))).unwrap()
}

fn arithmetic_curve() -> Check {
    let global = arith::global_sections();
    let f1sq = catalog::f1_squared();
    ensure!(
        global.coefficients().table == f1sq.coefficients().table && global.monoid().ngens() == 0,
        "global sections are not F1²"
    );
    ensure!(arith::global_carrier(30).len() == 3, "global carrier {:?}", arith::global_carrier(30));
    let primes = arith::arch_stalk_primes();
    let expected = [ArchIdeal::closed(Rational::from_integer(0)).unwrap(), ArchIdeal::open(Rational::from_integer(1)).unwrap()];
    ensure!(primes == expected, "archimedean stalk primes {primes:?}");
    let (dim, chain) = arith::surface_dimension(3);
    ensure!(dim == 2 && chain.len() == 3, "surface dimension {dim} via {chain:?}");
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    for _ in 0..SHEAF_SAMPLES {
        let (a, b) = (random_rational(&mut rng), random_rational(&mut rng));
        let (u, v) = (random_open(&mut rng), random_open(&mut rng));
        // gluing and locality
        ensure!(
            u.union(&v).is_regular(&a) == (u.is_regular(&a) && v.is_regular(&a)),
            "sections of {a} over {u:?} and {v:?} do not glue"
        );
        // restriction
        if u.is_regular(&a) {
            ensure!(u.intersection(&v).is_regular(&a), "{a} does not restrict from {u:?}");
        }
        // sections form a monoid containing 0 and ±1
        if u.is_regular(&a) && u.is_regular(&b) {
            ensure!(u.is_regular(&(a * b)), "{a}·{b} not regular on {u:?}");
        }
    }
    Ok(format!("Γ ≅ F1², stalk primes {{{}, {}}}, dim 2 via {}", primes[0], primes[1], chain.join(" > ")))
}

fn congruences() -> Check {
    let budget = blueforge::Budget::default();
    let f1 = cspec(&catalog::f1(), budget).unwrap();
    ensure!(f1.complete && f1.len() == 1, "cspec(F1) has {} points", f1.len());
    let f1sq = catalog::f1_squared();
    let cs = cspec(&f1sq, budget).unwrap();
    let labels = cs.labels();
    ensure!(cs.complete, "cspec(F1²) left {} partitions undecided", cs.undecided.len());
    for want in ["{0}{1}{-1}", "{0}{1,-1}"] {
        ensure!(labels.iter().any(|l| l == want), "cspec(F1²) lacks {want}: {labels:?}");
    }
    let finite = ["f1", "f1sq", "f1n", "f1n:4", "b1", "idempotent", "twofields"];
    for name in finite {
        let b = catalog::lookup(&format!("catalog:{name}")).unwrap().0.blueprint().clone();
        let cs = cspec(&b, budget).unwrap();
        ensure!(cs.complete, "cspec({name}) incomplete");
        for p in &cs.points {
            let ideal = absorbing_ideal(&b, p).unwrap();
            ensure!(b.is_prime_ideal(&ideal).unwrap() == Some(true), "{name}: ideal of {:?} not prime", p);
        }
        let spec = b.spec().unwrap();
        let image: BTreeSet<usize> = cspec_to_spec(&cs, &spec).unwrap().into_iter().collect();
        ensure!(image.len() == spec.len(), "{name}: cspec → spec hits {} of {}", image.len(), spec.len());
    }
    let total = Partition::all(3).len();
    Ok(format!("cspec(F1) = 1 point, {total} partitions of F1² checked, {} finite blueprints", finite.len()))
}

fn k_theory() -> Check {
    for (name, b, bound) in [("F1", catalog::f1(), 6), ("f1n(3)", catalog::f1n(3).unwrap(), 7)] {
        let k = k0(&b, bound).unwrap();
        ensure!(k.group().is_infinite_cyclic(), "K0({name}) = {}", k.group());
        let one = k.rank_one.ok_or(format!("{name}: free module of rank one missing"))?;
        ensure!(k.generated_by(one), "K0({name}) is not generated by the free rank-one class");
    }
    let e = catalog::idempotent();
    let u = universe(&e, 4).unwrap();
    let ideal = BlueModule::regular(&e).unwrap().restrict(&[0, 2]).unwrap().source;
    ensure!(ideal.names() == ["*", "e"], "ideal points {:?}", ideal.names());
    ensure!(is_projective(&ideal, &u).unwrap(), "{{0, e}} is not projective");
    ensure!(!ideal.is_free().unwrap(), "{{0, e}} is free");
    Ok("K0(F1) ≅ K0(f1n(3)) ≅ Z on [B]; {0, e} projective, not free".into())
}

fn soundness() -> Check {
    let blueprints = common::catalog_blueprints();
    let points: Vec<_> = blueprints.iter().map(|(_, b)| common::fq_points(b, &FIELD_ORDERS)).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let (mut proved, mut tried, mut evaluations) = (0, 0, 0u64);
    'outer: loop {
        for ((name, b), pts) in blueprints.iter().zip(&points) {
            if proved == DERIVED_RELATIONS {
                break 'outer;
            }
            let r = common::random_relation(b, &mut rng);
            tried += 1;
            if !b.derive(&r, b.budget()).unwrap().is_proved() {
                continue;
            }
            proved += 1;
            for (target, ps) in pts {
                for p in ps {
                    evaluations += 1;
                    ensure!(p.satisfies(target, &r), "{name}: derived {} fails over F_{}", r.render(b.monoid()), target.order());
                }
            }
        }
    }
    let (mut quotients, mut unsupported, mut localizations, mut rank_pairs, mut unranked) = (0, 0, 0, 0, 0);
    for (name, b) in &blueprints {
        let s = b.spec().unwrap();
        // points of B/p are the points of B killing p
        for p in &s.points {
            let quotient = match b.quotient_by_ideal(&p.ideal) {
                Ok(quotient) => quotient,
                Err(Error::Unsupported(_)) => {
                    unsupported += 1;
                    continue;
                }
                Err(e) => return Err(format!("{name}: no quotient by {}: {e}", p.label)),
            };
            for q in FIELD_ORDERS {
                let target = PointTarget::field(q).unwrap();
                let mut killing = 0u64;
                for_each_point(b, &target, None, |pt| {
                    if p.ideal.generators.iter().all(|g: &Elem| pt.eval(&target, g) == Some(0)) {
                        killing += 1;
                    }
                    true
                })
                .unwrap();
                let through = quotient.count_points(q).unwrap();
                ensure!(killing == through, "{name}/{}: {killing} points kill it, {through} factor over F_{q}", p.label);
            }
            quotients += 1;
        }
        // Spec of a localization is the set of primes avoiding it
        let m = b.monoid();
        let mut multipliers: Vec<Elem> = (0..m.ngens()).filter(|&i| !m.invertible()[i]).map(|i| m.gen(i)).collect();
        multipliers.extend(m.coeffs().nonzero().filter(|&c| !m.coeffs().is_unit(c)).map(|c| m.constant(c)));
        for f in multipliers {
            let avoiding: Vec<usize> =
                (0..s.len()).filter(|&i| !s.points[i].ideal.contains(m, &f)).collect();
            let local = b.localize(std::slice::from_ref(&f)).unwrap().blueprint().unwrap().spec().unwrap();
            ensure!(
                local.len() == avoiding.len() && local.order.is_isomorphic(&s.order.induced(&avoiding)),
                "{name}: Spec of the localization at {} has {} points, {} primes avoid it",
                m.fmt_elem(&f),
                local.len(),
                avoiding.len()
            );
            localizations += 1;
        }
    }
    for r in catalog::entries().iter().map(|e| format!("catalog:{}", e.name)) {
        let obj = catalog::lookup(&r).unwrap().0;
        let s = obj.space().unwrap();
        let mut ranks = Vec::new();
        for i in 0..s.len() {
            ranks.push(match s.rank_of_point(i) {
                Ok(c) => Some(c.rank),
                Err(Error::Unsupported(_)) => {
                    unranked += 1;
                    None
                }
                Err(e) => return Err(format!("{r}: no rank at {}: {e}", s.points[i].label)),
            });
        }
        for i in 0..s.len() {
            for j in 0..s.len() {
                if let (true, Some(low), Some(high)) = (s.order.leq(i, j), ranks[j], ranks[i]) {
                    ensure!(low <= high, "{r}: rank rises from {} to {}", s.points[i].label, s.points[j].label);
                    rank_pairs += 1;
                }
            }
        }
    }
    Ok(format!(
        "{proved} of {tried} random relations proved, {evaluations} point checks; {quotients} quotients \
         ({unsupported} beyond the monoid backend), {localizations} localizations, {rank_pairs} specializations ({unranked} points unranked)"
    ))
}

fn main() {
    if std::env::args().any(|a| a == "--list") {
        return;
    }
    let criteria: [(usize, &str, fn() -> Check); 12] = [
        (1, "spectra of affine spaces", spectra),
        (2, "SL2 over F1", sl2),
        (3, "projective spaces", projective_spaces),
        (4, "globalization of the two-field example", globalization),
        (5, "point counts and zeta functions", counting),
        (6, "Coxeter and orbit complexes", complexes),
        (7, "buildings of type A", buildings),
        (8, "quiver Grassmannians", quiver_grassmannians),
        (9, "arithmetic curve", arithmetic_curve),
        (10, "congruence spectra", congruences),
        (11, "K0 of blue fields and the idempotent example", k_theory),
        (12, "soundness properties", soundness),
    ];
    let mut red = BTreeSet::new();
    for (n, name, check) in criteria {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(check).unwrap_or_else(|e| {
            Err(e.downcast_ref::<String>().cloned().or(e.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_default())
        });
        let t = start.elapsed();
        match outcome {
            Ok(detail) => println!("criterion {n:>2} PASS {name} ({t:.2?}): {detail}"),
            Err(why) => {
                red.insert(n);
                println!("criterion {n:>2} FAIL {name} ({t:.2?}): {why}");
                if let Some((_, reason)) = KNOWN_RED.iter().find(|(k, _)| *k == n) {
                    println!("             known: {reason}");
                }
            }
        }
    }
    let known: BTreeSet<usize> = KNOWN_RED.iter().map(|(k, _)| *k).collect();
    if red != known {
        eprintln!("failing criteria {red:?} differ from the documented ones {known:?}");
        std::process::exit(1);
    }
    println!("failing criteria match the documented ones: {known:?}");
}
