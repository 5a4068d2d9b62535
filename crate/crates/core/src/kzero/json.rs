//! JSON description files for blue modules.
//!
//! ```json
//! { "blueprint": { "coefficients": "F1" }, "points": ["*", "x"],
//!   "action": { "1": ["*", "x"] }, "relations": [] }
//! ```
//!
//! Rows for `0` and `1` may be omitted.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::BlueModule;
use crate::blueprint::BlueprintJson;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModuleJson {
    pub blueprint: BlueprintJson,
    pub points: Vec<String>,
    pub action: BTreeMap<String, Vec<String>>,
    #[serde(default)]
    pub relations: Vec<[Vec<String>; 2]>,
}

impl ModuleJson {
    pub fn from_module(m: &BlueModule) -> Self {
        let b = m.blueprint();
        let coeffs = b.monoid().coeffs().names();
        let action = coeffs
            .iter()
            .enumerate()
            .skip(2)
            .map(|(a, name)| (name.clone(), m.action()[a].iter().map(|&x| m.names()[x].clone()).collect()))
            .collect();
        let side = |s: &[usize]| s.iter().map(|&x| m.names()[x].clone()).collect();
        ModuleJson {
            blueprint: BlueprintJson::from_blueprint(b),
            points: m.names().to_vec(),
            action,
            relations: m.extra_relations().iter().map(|(l, r)| [side(l), side(r)]).collect(),
        }
    }

    pub fn to_module(&self) -> Result<BlueModule> {
        let b = self.blueprint.to_blueprint()?;
        if !b.is_finite_table() {
            return Err(Error::Unsupported("blue modules need a finite-table blueprint".into()));
        }
        let coeffs = b.monoid().coeffs().names().to_vec();
        let n = self.points.len();
        let point = |s: &str| {
            self.points.iter().position(|p| p == s).ok_or_else(|| Error::Parse(format!("unknown point {s:?}")))
        };
        if n == 0 || point("*")? != 0 {
            return Err(Error::Parse("the first point must be the base point *".into()));
        }
        for key in self.action.keys() {
            if !coeffs.contains(key) {
                return Err(Error::Parse(format!("unknown blueprint element {key:?}")));
            }
        }
        let mut action = Vec::with_capacity(coeffs.len());
        for (a, name) in coeffs.iter().enumerate() {
            let row = match (a, self.action.get(name)) {
                (_, Some(row)) => {
                    if row.len() != n {
                        return Err(Error::Parse(format!("action row of {name} needs {n} entries")));
                    }
                    row.iter().map(|s| point(s)).collect::<Result<Vec<_>>>()?
                }
                (0, None) => vec![0; n],
                (1, None) => (0..n).collect(),
                (_, None) => return Err(Error::Parse(format!("missing action row for {name}"))),
            };
            action.push(row);
        }
        let side = |s: &[String]| s.iter().map(|x| point(x)).collect::<Result<Vec<_>>>();
        let extra = self.relations.iter().map(|[l, r]| Ok((side(l)?, side(r)?))).collect::<Result<Vec<_>>>()?;
        BlueModule::new(&b, self.points.clone(), action, extra)
    }

    pub fn parse(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn emit(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable") + "\n"
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    #[test]
    fn round_trip() {
        let m = BlueModule::free(&catalog::f1_squared(), 2).unwrap();
        let j = ModuleJson::from_module(&m);
        let text = j.emit();
        let back = ModuleJson::parse(&text).unwrap().to_module().unwrap();
        assert_eq!(back, m);
        assert_eq!(ModuleJson::from_module(&back).emit(), text);
    }

    #[test]
    fn defaults_for_zero_and_one() {
        let text = r#"{"blueprint": {"coefficients": "F1"}, "points": ["*", "x", "y"], "action": {}}"#;
        let m = ModuleJson::parse(text).unwrap().to_module().unwrap();
        assert!(m.is_free().unwrap());
    }
}
