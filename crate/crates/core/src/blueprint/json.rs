//! JSON description files for blueprints.
//!
//! ```json
//! { "coefficients": "F1", "generators": ["T1", "T2"], "inverted": [],
//!   "relations": [[["T1*T2"], ["1", "T1"]]] }
//! ```
//!
//! Emission is canonical, so emitting a parsed emission reproduces it
//! byte for byte.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::coeff::CoeffTable;
use super::monoid::Monoid;
use super::sum::{FormalSum, Relation};
use super::{Blueprint, Coefficients};
use crate::error::{Error, Result};

/// An explicit coefficient table: element symbols (`0` and `1` first), the
/// multiplication table in symbols, and relation generators.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableJson {
    pub elements: Vec<String>,
    pub mul: Vec<Vec<String>>,
    #[serde(default)]
    pub relations: Vec<[Vec<String>; 2]>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CoefficientsJson {
    Named(String),
    Table(TableJson),
}

/// `T^exponents = character`, over the invertible generators.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdentificationJson {
    pub exponents: Vec<i64>,
    pub character: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BlueprintJson {
    pub coefficients: CoefficientsJson,
    #[serde(default)]
    pub generators: Vec<String>,
    #[serde(default)]
    pub inverted: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub identifications: Vec<IdentificationJson>,
    #[serde(default)]
    pub relations: Vec<[Vec<String>; 2]>,
}

impl BlueprintJson {
    pub fn from_blueprint(b: &Blueprint) -> Self {
        let m = b.monoid();
        let c = m.coeffs();
        let coefficients = match b.coefficients().spec_string() {
            Some(s) => CoefficientsJson::Named(s),
            None => CoefficientsJson::Table(TableJson {
                elements: c.names().to_vec(),
                mul: c.symbol_table(),
                relations: b
                    .coefficients()
                    .relations
                    .iter()
                    .map(|(l, r)| {
                        let names = |v: &Vec<u16>| v.iter().map(|&x| c.name(x).to_string()).collect();
                        [names(l), names(r)]
                    })
                    .collect(),
            }),
        };
        let inverted = m
            .generators()
            .iter()
            .zip(m.invertible())
            .filter(|(_, &inv)| inv)
            .map(|(g, _)| g.clone())
            .collect();
        let identifications = m
            .identifications()
            .generators
            .iter()
            .map(|(d, chi)| IdentificationJson { exponents: d.clone(), character: c.name(*chi).to_string() })
            .collect();
        let relations = b
            .relations()
            .iter()
            .map(|r| [r.lhs.term_strings(m), r.rhs.term_strings(m)])
            .collect();
        BlueprintJson {
            coefficients,
            generators: m.generators().to_vec(),
            inverted,
            identifications,
            relations,
        }
    }

    pub fn to_blueprint(&self) -> Result<Blueprint> {
        let coefficients = match &self.coefficients {
            CoefficientsJson::Named(s) => Coefficients::parse_spec(s)?,
            CoefficientsJson::Table(t) => {
                let idx = |s: &String| {
                    t.elements
                        .iter()
                        .position(|e| e == s)
                        .map(|i| i as u16)
                        .ok_or_else(|| Error::MalformedBackend(format!("unknown coefficient {s}")))
                };
                let table = t
                    .mul
                    .iter()
                    .map(|row| row.iter().map(idx).collect::<Result<Vec<_>>>())
                    .collect::<Result<Vec<_>>>()?;
                let table = CoeffTable::new(t.elements.clone(), table)?;
                let rels = t
                    .relations
                    .iter()
                    .map(|[l, r]| {
                        let side = |v: &Vec<String>| -> Result<Vec<u16>> {
                            let mut out = v.iter().map(idx).collect::<Result<Vec<_>>>()?;
                            out.retain(|&x| x != 0);
                            out.sort();
                            Ok(out)
                        };
                        Ok((side(l)?, side(r)?))
                    })
                    .collect::<Result<Vec<_>>>()?;
                Coefficients::table(table, rels)
            }
        };
        for g in &self.inverted {
            if !self.generators.contains(g) {
                return Err(Error::MalformedBackend(format!("inverted generator {g} is unknown")));
            }
        }
        let inv = self.generators.iter().map(|g| self.inverted.contains(g)).collect();
        let table: Arc<CoeffTable> = coefficients.table.clone();
        let mut idents = Vec::new();
        for id in &self.identifications {
            let chi = table
                .index_of(&id.character)
                .ok_or_else(|| Error::MalformedBackend(format!("unknown character {}", id.character)))?;
            idents.push((id.exponents.clone(), chi));
        }
        let monoid = Monoid::new(table, self.generators.clone(), inv, idents)?;
        let rels = self
            .relations
            .iter()
            .map(|[l, r]| Ok(Relation::new(FormalSum::parse_terms(&monoid, l)?, FormalSum::parse_terms(&monoid, r)?)))
            .collect::<Result<Vec<_>>>()?;
        Blueprint::new(coefficients, monoid, rels)
    }

    pub fn parse(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn emit(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data serializes")
    }
}

impl Blueprint {
    pub fn to_json(&self) -> String {
        BlueprintJson::from_blueprint(self).emit()
    }

    pub fn from_json(s: &str) -> Result<Blueprint> {
        BlueprintJson::parse(s)?.to_blueprint()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_named_coefficients() {
        let b = Blueprint::parse(Coefficients::f1(), &["T1", "T2", "T3", "T4"], &[], &["T1*T4 = T2*T3 + 1"]).unwrap();
        let s = b.to_json();
        let back = Blueprint::from_json(&s).unwrap();
        assert_eq!(back, b);
        assert_eq!(back.to_json(), s);
    }

    #[test]
    fn round_trip_table_and_identifications() {
        let src = r#"{
  "coefficients": {
    "elements": ["0", "1", "e"],
    "mul": [["0", "0", "0"], ["0", "1", "e"], ["0", "e", "e"]],
    "relations": [[["e", "e"], ["e"]]]
  },
  "generators": ["S", "T"],
  "inverted": ["S", "T"],
  "identifications": [{"exponents": [1, 1], "character": "1"}],
  "relations": []
}"#;
        let b = Blueprint::from_json(src).unwrap();
        let s = b.to_json();
        assert_eq!(Blueprint::from_json(&s).unwrap().to_json(), s);
        assert_eq!(b.fmt_elem(&b.elem("S*T").unwrap()), "1");
    }

    #[test]
    fn rejects_unknown_fields_and_symbols() {
        assert!(Blueprint::from_json(r#"{"coefficients": "F1", "bogus": 1}"#).is_err());
        assert!(Blueprint::from_json(r#"{"coefficients": "F7"}"#).is_err());
        assert!(Blueprint::from_json(r#"{"coefficients": "F1", "relations": [[["X"], ["1"]]]}"#).is_err());
    }
}
