//! The polynomial file format.
//!
//! ```json
//! {
//!   "base": ["*"],
//!   "constructors": {"*": ["zero", "eta"]},
//!   "arities": {"zero": [], "eta": ["x0"]},
//!   "reindex": {"x0": "*"},
//!   "reductions": ["x0"]
//! }
//! ```
//!
//! A listed reduction gives its arity element a single witness, so files
//! describe normalized polynomials.

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fin::{Fam, Fin};

use super::{PolyRed, TableAlgebra};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolyFile {
    pub base: Vec<String>,
    pub constructors: IndexMap<String, Vec<String>>,
    pub arities: IndexMap<String, Vec<String>>,
    pub reindex: IndexMap<String, String>,
    pub reductions: Vec<String>,
}

impl PolyFile {
    pub fn to_poly(&self) -> Result<PolyRed> {
        let base = Fin::new(self.base.iter().cloned())?;
        let mut cons = Fam::empty(base.len());
        for (z, ys) in &self.constructors {
            let zi = base.lookup("base element", z)?;
            for y in ys {
                cons.push(y.clone(), zi)?;
            }
        }
        // constructors must be grouped by base in the file, but the order in
        // which base keys appear is free; re-lay them in base order
        let mut ordered = Fam::empty(base.len());
        for z in 0..base.len() {
            for &y in cons.fibre(z) {
                ordered.push(cons.name(y), z)?;
            }
        }
        let cons = ordered;
        for y in self.arities.keys() {
            cons.total().lookup("constructor", y)?;
        }
        let mut arity = Fam::empty(cons.len());
        let mut reindex = Vec::new();
        for y in 0..cons.len() {
            let Some(xs) = self.arities.get(cons.name(y)) else {
                continue;
            };
            for x in xs {
                arity.push(x.clone(), y)?;
                let target = self.reindex.get(x).ok_or_else(|| {
                    Error::malformed(format!("arity element `{x}` has no reindex entry"))
                })?;
                reindex.push(base.lookup("base element", target)?);
            }
        }
        for x in self.reindex.keys() {
            arity.total().lookup("arity element", x)?;
        }
        let mut red = Fam::empty(arity.len());
        for x in &self.reductions {
            red.push(x.clone(), arity.total().lookup("arity element", x)?)?;
        }
        PolyRed::new(base, cons, arity, reindex, red)
    }

    pub fn from_poly(p: &PolyRed) -> Self {
        let base = p.base().names().to_vec();
        let constructors = (0..base.len())
            .map(|z| {
                let ys = p.constructors().fibre(z);
                (base[z].clone(), ys.iter().map(|&y| p.cons_name(y).to_string()).collect())
            })
            .collect();
        let arities = (0..p.constructors().len())
            .map(|y| {
                let xs = p.arity_of(y).iter().map(|&x| p.arity_name(x).to_string());
                (p.cons_name(y).to_string(), xs.collect())
            })
            .collect();
        let reindex = (0..p.arities().len())
            .map(|x| {
                (
                    p.arity_name(x).to_string(),
                    p.base_name(p.reindex(x)).to_string(),
                )
            })
            .collect();
        let reductions = (0..p.arities().len())
            .filter(|&x| p.has_reduction(x))
            .map(|x| p.arity_name(x).to_string())
            .collect();
        PolyFile {
            base,
            constructors,
            arities,
            reindex,
            reductions,
        }
    }
}

pub fn parse(text: &str) -> Result<PolyRed> {
    serde_json::from_str::<PolyFile>(text)?.to_poly()
}

/// Pretty JSON with a trailing newline.
pub fn to_string(p: &PolyRed) -> String {
    let mut s = serde_json::to_string_pretty(&PolyFile::from_poly(p)).expect("serializable");
    s.push('\n');
    s
}

/// One target algebra: `carrier` lists elements per base element, and each
/// op entry gives `c(cons, args) = value` with arguments in arity order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraFile {
    pub carrier: IndexMap<String, Vec<String>>,
    #[serde(default)]
    pub ops: Vec<OpEntry>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OpEntry {
    pub cons: String,
    #[serde(default)]
    pub args: Vec<String>,
    pub value: String,
}

impl AlgebraFile {
    pub fn to_algebra(&self, p: &PolyRed) -> Result<TableAlgebra> {
        let mut carrier = Fam::empty(p.base().len());
        for z in 0..p.base().len() {
            for e in self.carrier.get(p.base_name(z)).into_iter().flatten() {
                carrier.push(e.clone(), z)?;
            }
        }
        for z in self.carrier.keys() {
            p.base().lookup("base element", z)?;
        }
        let mut alg = TableAlgebra::new(carrier.clone());
        for op in &self.ops {
            let y = p.constructors().total().lookup("constructor", &op.cons)?;
            if op.args.len() != p.arity_of(y).len() {
                return Err(Error::malformed(format!("`{}` takes {} arguments", op.cons, p.arity_of(y).len())));
            }
            let args = op
                .args
                .iter()
                .map(|a| carrier.total().lookup("carrier element", a))
                .collect::<Result<Vec<_>>>()?;
            alg.set(y, args, carrier.total().lookup("carrier element", &op.value)?);
        }
        Ok(alg)
    }
}

/// A list of target algebras.
pub fn parse_algebras(text: &str, p: &PolyRed) -> Result<Vec<TableAlgebra>> {
    let files: Vec<AlgebraFile> = serde_json::from_str(text)?;
    files.iter().map(|f| f.to_algebra(p)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn round_trip_fixtures() {
        for (name, p) in fixtures::all_polynomials() {
            let text = to_string(&p);
            let q = parse(&text).unwrap();
            assert_eq!(q, p.normalize_reductions(), "{name}");
            assert_eq!(to_string(&q), text, "{name}");
        }
    }

    #[test]
    fn unknown_field_rejected() {
        let text = r#"{"base":[],"constructors":{},"arities":{},"reindex":{},"reductions":[],"extra":1}"#;
        assert!(matches!(parse(text), Err(Error::Json(_))));
    }

    #[test]
    fn dangling_reduction_rejected() {
        let text = r#"{"base":["*"],"constructors":{"*":["z"]},"arities":{"z":[]},"reindex":{},"reductions":["x"]}"#;
        assert!(matches!(parse(text), Err(Error::UnknownName { .. })));
    }

    #[test]
    fn missing_reindex_rejected() {
        let text = r#"{"base":["*"],"constructors":{"*":["s"]},"arities":{"s":["x"]},"reindex":{},"reductions":[]}"#;
        assert!(matches!(parse(text), Err(Error::Malformed(_))));
    }
}
