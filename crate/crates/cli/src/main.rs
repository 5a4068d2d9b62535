use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use blueforge::arith::{self, CurveOpen, Place};
use blueforge::catalog::{self, CatalogObject};
use blueforge::complexes::{
    building_type_a, coxeter_complex, point_ranks, standard_seed, tilde_complex, weyl_orbit_complex, CoxeterType,
    TypedComplex,
};
use blueforge::congruence::cspec;
use blueforge::counting::fq_samples;
use blueforge::kzero::k0;
use blueforge::quiver::IntegralRep;
use blueforge::schemes::{proj, GradedBlueprint};
use blueforge::spectra::SpecSpace;
use blueforge::{Blueprint, Budget, Error, Rational};
use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "blueforge", version, about = "Blueprints, their spectra and the combinatorics around them")]
struct Cli {
    #[command(flatten)]
    opts: Opts,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Opts {
    /// Machine-readable JSON output.
    #[arg(long, global = true, conflicts_with = "dot")]
    json: bool,
    /// Graph output in DOT.
    #[arg(long, global = true)]
    dot: bool,
    /// Derivation budget as deg,terms,steps; defaults to BLUEFORGE_BUDGET.
    #[arg(long, global = true, value_parser = parse_budget)]
    budget: Option<Budget>,
    /// Worker threads.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Field sizes to sample, e.g. 2,3,5.
    #[arg(long, global = true, value_delimiter = ',')]
    q: Vec<u32>,
}

#[derive(Subcommand)]
enum Command {
    /// List catalog entries or build one.
    Catalog {
        #[command(subcommand)]
        action: CatalogAction,
    },
    /// Prime spectrum of a blueprint; of the underlying blueprint if graded.
    Spec { input: String },
    /// Homogeneous spectrum of a graded blueprint.
    Proj { input: String },
    /// Hasse diagram of the spectrum in DOT.
    Hasse { input: String },
    /// Number of F_q-points for each q.
    Count { input: String },
    /// Counting polynomial interpolated from F_q-point counts.
    Polyfit {
        input: String,
        #[arg(long)]
        deg: Option<usize>,
    },
    /// Zeta function from the counting polynomial.
    Zeta {
        input: String,
        #[arg(long)]
        deg: Option<usize>,
    },
    /// Order complex of the spectrum, typed by rank.
    Complex {
        input: String,
        /// Keep the generic points.
        #[arg(long)]
        all: bool,
    },
    /// Abstract Coxeter complex of type A, B, C or D.
    Coxeter { kind: String, n: usize },
    /// Weyl orbit of the standard seed flag.
    Orbit {
        kind: String,
        n: usize,
        #[arg(long)]
        oriflamme: bool,
    },
    /// Building of flags in F_q^(n+1).
    Building { n: usize, q: u32 },
    /// Quiver Grassmannian invariants.
    Qgrass {
        #[command(subcommand)]
        action: QgrassAction,
    },
    /// Queries on the arithmetic curve.
    Arith {
        #[command(subcommand)]
        action: ArithAction,
    },
    /// Congruence spectrum of a finite blueprint.
    Cspec { input: String },
    /// Grothendieck group of projective modules.
    K0 {
        input: String,
        #[arg(long, default_value_t = 6)]
        bound: usize,
    },
}

#[derive(Subcommand)]
enum CatalogAction {
    List,
    /// Emit the blueprint JSON of an entry.
    Build { name: String, params: Option<String> },
}

#[derive(Args)]
struct QgrassInput {
    file: PathBuf,
    /// Dimension vector; defaults to the one in the file.
    #[arg(long, value_delimiter = ',')]
    e: Vec<usize>,
}

#[derive(Subcommand)]
enum QgrassAction {
    /// Euler characteristic.
    Chi(QgrassInput),
    /// Coordinate subrepresentations.
    Naive(QgrassInput),
    /// Coordinate families closed under diagonal maps of a tree quiver.
    Weyl(QgrassInput),
    /// Subrepresentation counts over F_q.
    Count(QgrassInput),
}

#[derive(Subcommand)]
enum ArithAction {
    /// Whether a rational is regular away from the removed places.
    Member {
        value: String,
        #[arg(long, value_delimiter = ',')]
        remove: Vec<String>,
    },
    /// Ideal of the archimedean stalk generated by the given rationals.
    ClassifyIdeal {
        #[arg(value_delimiter = ',', required = true)]
        generators: Vec<String>,
    },
    /// Dimension of the self-product of the curve truncated to k primes.
    SurfaceDim {
        #[arg(long, default_value_t = 3)]
        primes: usize,
    },
    /// Dimension of the curve truncated to k primes.
    CurveDim {
        #[arg(long, default_value_t = 3)]
        primes: usize,
    },
}

fn parse_budget(s: &str) -> Result<Budget, String> {
    Budget::parse(s).map_err(|e| e.to_string())
}

enum Failure {
    Usage(String),
    Domain(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Domain(e)
    }
}

type Outcome = Result<String, Failure>;

struct Ctx {
    json: bool,
    dot: bool,
    budget: Budget,
    q: Vec<u32>,
}

impl Ctx {
    fn emit(&self, value: Value, text: impl FnOnce() -> String) -> String {
        if self.json {
            let mut s = serde_json::to_string_pretty(&value).expect("json values serialize");
            s.push('\n');
            s
        } else {
            text()
        }
    }

    fn orders(&self) -> Vec<u32> {
        if self.q.is_empty() {
            vec![2, 3, 4, 5]
        } else {
            self.q.clone()
        }
    }

    fn load(&self, input: &str) -> Result<CatalogObject, Failure> {
        let obj = if input.starts_with("catalog:") {
            catalog::lookup(input)?.0
        } else {
            let text = std::fs::read_to_string(input)
                .map_err(|e| Failure::Domain(Error::InvalidInput(format!("cannot read {input}: {e}"))))?;
            match Blueprint::from_json(&text) {
                Ok(b) => CatalogObject::Affine(b),
                Err(first) => GradedBlueprint::from_json(&text)
                    .map(CatalogObject::Projective)
                    .map_err(|_| Failure::Domain(first))?,
            }
        };
        Ok(match obj {
            CatalogObject::Affine(b) => CatalogObject::Affine(b.with_budget(self.budget)),
            CatalogObject::Projective(mut g) => {
                g.blueprint = g.blueprint.with_budget(self.budget);
                CatalogObject::Projective(g)
            }
        })
    }

    fn load_affine(&self, input: &str) -> Result<Blueprint, Failure> {
        match self.load(input)? {
            CatalogObject::Affine(b) => Ok(b),
            CatalogObject::Projective(_) => {
                Err(Failure::Domain(Error::InvalidInput(format!("{input} is graded; an affine blueprint is needed"))))
            }
        }
    }

    fn space(&self, space: SpecSpace) -> String {
        if self.dot {
            space.to_dot()
        } else {
            self.emit(space.to_json(), || space_text(&space))
        }
    }

    fn complex(&self, c: &TypedComplex) -> String {
        if self.dot {
            c.to_dot()
        } else {
            self.emit(c.to_json(), || c.facet_list())
        }
    }
}

fn space_text(space: &SpecSpace) -> String {
    let mut s = String::new();
    for (i, label) in space.labels().iter().enumerate() {
        writeln!(s, "{i}: {label}").unwrap();
    }
    let closed: Vec<String> = space.closed_points().iter().map(|&i| space.points[i].label.clone()).collect();
    writeln!(s, "closed: {}", closed.join(" ")).unwrap();
    if !space.complete {
        writeln!(s, "incomplete: some candidates were undecided within the budget").unwrap();
    }
    s
}

fn rational(s: &str) -> Result<Rational, Failure> {
    s.trim().parse::<Rational>().map_err(|_| Failure::Usage(format!("bad rational {s:?}")))
}

fn run(cmd: Command, ctx: &Ctx) -> Outcome {
    Ok(match cmd {
        Command::Catalog { action: CatalogAction::List } => {
            let entries = catalog::entries();
            let rows: Vec<Value> =
                entries.iter().map(|e| json!({"name": e.name, "params": e.params, "summary": e.summary})).collect();
            ctx.emit(Value::Array(rows), || {
                let mut s = String::new();
                for e in &entries {
                    let name = if e.params.is_empty() { e.name.to_string() } else { format!("{}:{}", e.name, e.params) };
                    writeln!(s, "{name:<16}{}", e.summary).unwrap();
                }
                s
            })
        }
        Command::Catalog { action: CatalogAction::Build { name, params } } => {
            let name = name.strip_prefix("catalog:").unwrap_or(&name);
            let reference = match params {
                Some(p) => format!("catalog:{name}:{p}"),
                None => format!("catalog:{name}"),
            };
            let mut s = ctx.load(&reference)?.to_json();
            s.push('\n');
            s
        }
        Command::Hasse { input } => ctx.load(&input)?.space()?.to_dot(),
        Command::Spec { input } => ctx.space(ctx.load(&input)?.blueprint().spec()?),
        Command::Proj { input } => ctx.space(match ctx.load(&input)? {
            CatalogObject::Projective(g) => proj(&g)?,
            CatalogObject::Affine(b) => proj(&GradedBlueprint::standard(b)?)?,
        }),
        Command::Count { input } => {
            let obj = ctx.load(&input)?;
            let orders = ctx.orders();
            let counts = match &obj {
                CatalogObject::Affine(b) => fq_samples(b, &orders)?,
                CatalogObject::Projective(_) => fq_samples(&obj.scheme()?, &orders)?,
            };
            ctx.emit(json!(counts.iter().map(|&(q, n)| json!({"q": q, "points": n})).collect::<Vec<_>>()), || {
                counts.iter().map(|(q, n)| format!("{q} {n}\n")).collect()
            })
        }
        Command::Polyfit { input, deg } => {
            let p = ctx.load(&input)?.counting_polynomial(deg)?;
            ctx.emit(json!({"coefficients": p.coefficients, "samples": p.samples, "held_out": p.held_out}), || {
                format!("{p}\n")
            })
        }
        Command::Zeta { input, deg } => {
            let z = ctx.load(&input)?.counting_polynomial(deg)?.zeta();
            ctx.emit(json!({"factors": z.factors}), || format!("{z}\n"))
        }
        Command::Complex { input, all } => {
            let obj = ctx.load(&input)?;
            let space = obj.space()?;
            let ranks = point_ranks(&space, matches!(obj, CatalogObject::Projective(_)))?;
            let drop = if all { vec![] } else { space.generic_points() };
            ctx.complex(&tilde_complex(&space, &ranks, &drop)?)
        }
        Command::Coxeter { kind, n } => ctx.complex(&coxeter_complex(kind.parse::<CoxeterType>()?, n)?.complex),
        Command::Orbit { kind, n, oriflamme } => {
            let ty = kind.parse::<CoxeterType>()?;
            ctx.complex(&weyl_orbit_complex(ty, n, &standard_seed(ty, n, oriflamme))?.complex)
        }
        Command::Building { n, q } => ctx.complex(&building_type_a(n, q)?.complex),
        Command::Qgrass { action } => qgrass(action, ctx)?,
        Command::Arith { action } => arith_query(action, ctx)?,
        Command::Cspec { input } => {
            let cs = cspec(&ctx.load_affine(&input)?, ctx.budget)?;
            ctx.emit(cs.to_json(), || cs.to_string())
        }
        Command::K0 { input, bound } => {
            let k = k0(&ctx.load_affine(&input)?, bound)?;
            let value = serde_json::to_value(&k).expect("presentation serializes");
            ctx.emit(value, || {
                let mut s = format!("K0 = {}\n", k.group());
                for (i, g) in k.generators.iter().enumerate() {
                    let tag = if k.free[i] { " free" } else { "" };
                    writeln!(s, "[{i}]{tag} {g}").unwrap();
                }
                if let Some(i) = k.rank_one {
                    let verb = if k.generated_by(i) { "generates" } else { "does not generate" };
                    writeln!(s, "the free module of rank one [{i}] {verb} K0").unwrap();
                }
                s
            })
        }
    })
}

fn qgrass(action: QgrassAction, ctx: &Ctx) -> Outcome {
    let (QgrassAction::Chi(input) | QgrassAction::Naive(input) | QgrassAction::Weyl(input) | QgrassAction::Count(input)) =
        &action;
    let text = std::fs::read_to_string(&input.file)
        .map_err(|e| Failure::Domain(Error::InvalidInput(format!("cannot read {}: {e}", input.file.display()))))?;
    let (rep, from_file) = IntegralRep::from_json(&text)?;
    let e = if !input.e.is_empty() {
        input.e.clone()
    } else {
        from_file.ok_or_else(|| Failure::Usage("no dimension vector: pass --e or set \"e\" in the file".into()))?
    };
    rep.check_dim_vector(&e)?;
    Ok(match action {
        QgrassAction::Chi(_) => {
            let chi = rep.euler_characteristic(&e)?;
            ctx.emit(json!({"chi": chi.to_string()}), || format!("{chi}\n"))
        }
        QgrassAction::Naive(_) => {
            let points = rep.naive_f1_points(&e)?;
            ctx.emit(json!({"count": points.len(), "points": points}), || format!("{}\n", points.len()))
        }
        QgrassAction::Weyl(_) => {
            let n = rep.weyl_count(&e)?;
            ctx.emit(json!({"count": n}), || format!("{n}\n"))
        }
        QgrassAction::Count(_) => {
            let counts =
                ctx.orders().into_iter().map(|q| Ok((q, rep.subrep_count(&e, q)?))).collect::<Result<Vec<_>, Error>>()?;
            ctx.emit(json!(counts.iter().map(|&(q, n)| json!({"q": q, "points": n})).collect::<Vec<_>>()), || {
                counts.iter().map(|(q, n)| format!("{q} {n}\n")).collect()
            })
        }
    })
}

fn arith_query(action: ArithAction, ctx: &Ctx) -> Outcome {
    Ok(match action {
        ArithAction::Member { value, remove } => {
            let a = rational(&value)?;
            let places = remove.iter().map(|p| p.parse::<Place>()).collect::<Result<Vec<_>, Error>>()?;
            let open = if places.is_empty() { CurveOpen::whole() } else { CurveOpen::complement(places)? };
            let member = open.is_regular(&a);
            ctx.emit(json!({"value": a.to_string(), "member": member}), || format!("{member}\n"))
        }
        ArithAction::ClassifyIdeal { generators } => {
            let gens = generators.iter().map(|g| rational(g)).collect::<Result<Vec<_>, _>>()?;
            let ideal = arith::classify_arch_ideal(&gens)?;
            let mut value = ideal.to_json();
            value["prime"] = json!(ideal.is_prime());
            ctx.emit(value, || {
                let prime = if ideal.is_prime() { "prime" } else { "not prime" };
                format!("{ideal} ({prime})\n")
            })
        }
        ArithAction::SurfaceDim { primes } | ArithAction::CurveDim { primes } if primes > 64 => {
            return Err(Failure::Usage(format!("--primes {primes} exceeds 64")));
        }
        ArithAction::SurfaceDim { primes } => {
            let (d, chain) = arith::surface_dimension(primes);
            ctx.emit(json!({"dimension": d, "chain": chain}), || format!("{d}\n{}\n", chain.join(" > ")))
        }
        ArithAction::CurveDim { primes } => {
            let (d, chain) = arith::curve_dimension(primes);
            ctx.emit(json!({"dimension": d, "chain": chain}), || format!("{d}\n{}\n", chain.join(" > ")))
        }
    })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let budget = match cli.opts.budget.map_or_else(Budget::from_env, Ok) {
        Ok(b) => b,
        Err(e) => {
            eprintln!("error: BLUEFORGE_BUDGET: {e}");
            return ExitCode::from(2);
        }
    };
    if let Some(n) = cli.opts.threads {
        if n == 0 || rayon::ThreadPoolBuilder::new().num_threads(n).build_global().is_err() {
            eprintln!("error: cannot start {n} worker threads");
            return ExitCode::from(2);
        }
    }
    let ctx = Ctx { json: cli.opts.json, dot: cli.opts.dot, budget, q: cli.opts.q };
    match run(cli.command, &ctx) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Domain(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
