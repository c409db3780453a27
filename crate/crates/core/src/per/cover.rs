//! Two-level cover bases for a family of arities.
//!
//! Arity elements are addressed by their position inside the fibre of their
//! constructor, so a cover base only depends on the fibre sizes and can be
//! transported along maps of constructor sets.

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::PolyRed;

/// A surjection `q: A -> X_y`, as the table of `q`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cover {
    pub q: Vec<usize>,
}

impl Cover {
    pub fn len(&self) -> usize {
        self.q.len()
    }

    pub fn is_empty(&self) -> bool {
        self.q.is_empty()
    }
}

/// A map `t: B -> A_i ×_X A_{i'}`, listing `t(b)` for each `b`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairCover {
    pub t: Vec<(usize, usize)>,
}

/// The covers of one arity fibre and, for each ordered pair of covers,
/// the covers of their fibred product.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConsCovers {
    pub covers: Vec<Cover>,
    /// `pairs[i][i']` is the list `(B_j)_{j ∈ J_{i,i'}}`.
    pub pairs: Vec<Vec<Vec<PairCover>>>,
}

impl ConsCovers {
    pub fn identity(n: usize) -> Self {
        ConsCovers {
            covers: vec![Cover { q: (0..n).collect() }],
            pairs: vec![vec![vec![PairCover {
                t: (0..n).map(|a| (a, a)).collect(),
            }]]],
        }
    }

    /// The full fibred product `A_i ×_X A_{i'}` in lexicographic order.
    pub fn fibred_product(&self, i: usize, i2: usize) -> Vec<(usize, usize)> {
        let (qa, qb) = (&self.covers[i].q, &self.covers[i2].q);
        let mut out = Vec::new();
        for (a, &xa) in qa.iter().enumerate() {
            for (b, &xb) in qb.iter().enumerate() {
                if xa == xb {
                    out.push((a, b));
                }
            }
        }
        out
    }

    fn check(&self, n: usize) -> std::result::Result<(), String> {
        if self.covers.is_empty() {
            return Err("no covers".into());
        }
        for (i, c) in self.covers.iter().enumerate() {
            if let Some(&x) = c.q.iter().find(|&&x| x >= n) {
                return Err(format!("cover {i} maps to position {x} outside the fibre"));
            }
            let mut hit = vec![false; n];
            for &x in &c.q {
                hit[x] = true;
            }
            if let Some(x) = hit.iter().position(|h| !h) {
                return Err(format!("cover {i} misses position {x}"));
            }
        }
        let k = self.covers.len();
        if self.pairs.len() != k || self.pairs.iter().any(|row| row.len() != k) {
            return Err("pair table is not square in the covers".into());
        }
        for i in 0..k {
            for i2 in 0..k {
                let product = self.fibred_product(i, i2);
                let js = &self.pairs[i][i2];
                if js.is_empty() {
                    return Err(format!("no covers of the product of covers {i} and {i2}"));
                }
                for (j, b) in js.iter().enumerate() {
                    if let Some(bad) = b.t.iter().find(|pair| !product.contains(pair)) {
                        return Err(format!(
                            "pair cover {j} of ({i},{i2}) sends to {bad:?} outside the product"
                        ));
                    }
                    if let Some(miss) = product.iter().find(|pair| !b.t.contains(pair)) {
                        return Err(format!("pair cover {j} of ({i},{i2}) misses {miss:?}"));
                    }
                }
            }
        }
        Ok(())
    }
}

/// A two-level cover base for a family whose fibre sizes are `fibre_sizes`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwoCoverBase {
    pub fibre_sizes: Vec<usize>,
    pub per: Vec<ConsCovers>,
}

impl TwoCoverBase {
    pub fn identity(fibre_sizes: Vec<usize>) -> Self {
        let per = fibre_sizes.iter().map(|&n| ConsCovers::identity(n)).collect();
        TwoCoverBase { fibre_sizes, per }
    }

    pub fn for_poly(p: &PolyRed) -> Self {
        Self::identity(Self::arity_sizes(p))
    }

    fn arity_sizes(p: &PolyRed) -> Vec<usize> {
        (0..p.constructors().len())
            .map(|y| p.arity_of(y).len())
            .collect()
    }

    /// Surjectivity of every cover on both levels.
    pub fn check(&self) -> Result<()> {
        if self.per.len() != self.fibre_sizes.len() {
            return Err(Error::ShapeMismatch("cover base indexed by the wrong set".into()));
        }
        for (y, (cc, &n)) in self.per.iter().zip(&self.fibre_sizes).enumerate() {
            cc.check(n)
                .map_err(|e| Error::ShapeMismatch(format!("fibre {y}: {e}")))?;
        }
        Ok(())
    }

    pub fn check_for(&self, p: &PolyRed) -> Result<()> {
        if self.fibre_sizes != Self::arity_sizes(p) {
            return Err(Error::ShapeMismatch(
                "cover base does not match the arities of the polynomial".into(),
            ));
        }
        self.check()
    }

    /// Pullback along `along: new index -> old index`.
    pub fn pullback(&self, along: &[usize]) -> Result<Self> {
        if let Some(&k) = along.iter().find(|&&k| k >= self.per.len()) {
            return Err(Error::ShapeMismatch(format!("pullback index {k} out of range")));
        }
        Ok(TwoCoverBase {
            fibre_sizes: along.iter().map(|&k| self.fibre_sizes[k]).collect(),
            per: along.iter().map(|&k| self.per[k].clone()).collect(),
        })
    }

    /// Coproduct: the fibres of `self` followed by those of `other`.
    pub fn coprod(&self, other: &TwoCoverBase) -> Self {
        let mut out = self.clone();
        out.fibre_sizes.extend(&other.fibre_sizes);
        out.per.extend(other.per.iter().cloned());
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PairEntry {
    pub left: usize,
    pub right: usize,
    /// Each inner list is one `B_j`, given as its image pairs.
    pub covers: Vec<Vec<(usize, usize)>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConsEntry {
    /// Each inner list is one cover, given as the arity element each of
    /// its points maps to.
    pub covers: Vec<Vec<String>>,
    #[serde(default)]
    pub pairs: Vec<PairEntry>,
}

/// Cover-base file: constructor name to its covers. Constructors left out
/// get the identity cover, and pairs left out are covered by the full
/// fibred product.
pub type CoverFile = IndexMap<String, ConsEntry>;

pub fn parse(text: &str, p: &PolyRed) -> Result<TwoCoverBase> {
    let file: CoverFile = serde_json::from_str(text)?;
    from_file(&file, p)
}

pub fn from_file(file: &CoverFile, p: &PolyRed) -> Result<TwoCoverBase> {
    let mut cb = TwoCoverBase::for_poly(p);
    for (name, entry) in file {
        let y = p.constructors().total().lookup("constructor", name)?;
        let xs = p.arity_of(y);
        let mut covers = Vec::new();
        for cover in &entry.covers {
            let q = cover
                .iter()
                .map(|x| {
                    let gx = p.arities().total().lookup("arity element", x)?;
                    xs.iter().position(|&e| e == gx).ok_or_else(|| {
                        Error::ShapeMismatch(format!("`{x}` is not an arity of `{name}`"))
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            covers.push(Cover { q });
        }
        let k = covers.len();
        let mut cc = ConsCovers {
            covers,
            pairs: vec![vec![Vec::new(); k]; k],
        };
        for pe in &entry.pairs {
            if pe.left >= k || pe.right >= k {
                return Err(Error::ShapeMismatch(format!(
                    "pair ({},{}) of `{name}` names a missing cover",
                    pe.left, pe.right
                )));
            }
            cc.pairs[pe.left][pe.right] = pe
                .covers
                .iter()
                .map(|t| PairCover { t: t.clone() })
                .collect();
        }
        for i in 0..k {
            for i2 in 0..k {
                if cc.pairs[i][i2].is_empty() {
                    cc.pairs[i][i2] = vec![PairCover {
                        t: cc.fibred_product(i, i2),
                    }];
                }
            }
        }
        cb.per[y] = cc;
    }
    cb.check_for(p)?;
    Ok(cb)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn identity_shapes() {
        let cb = TwoCoverBase::for_poly(&fixtures::ex_nat());
        assert_eq!(cb.per[1].covers[0].q, vec![0]);
        assert_eq!(cb.per[1].pairs[0][0][0].t, vec![(0, 0)]);
        let cb = TwoCoverBase::for_poly(&fixtures::ex_collapse());
        assert_eq!(cb.per[1].covers[0].q, vec![0, 1]);
        assert_eq!(cb.per[1].pairs[0][0][0].t, vec![(0, 0), (1, 1)]);
        assert!(cb.check().is_ok());
    }

    #[test]
    fn transport_keeps_identity_shape() {
        let cb = TwoCoverBase::identity(vec![0, 2, 1]);
        let pb = cb.pullback(&[2, 2, 1]).unwrap();
        assert_eq!(pb, TwoCoverBase::identity(vec![1, 1, 2]));
        let sum = cb.coprod(&TwoCoverBase::identity(vec![3]));
        assert_eq!(sum, TwoCoverBase::identity(vec![0, 2, 1, 3]));
        assert!(pb.check().is_ok() && sum.check().is_ok());
    }

    #[test]
    fn non_surjective_rejected() {
        let mut cb = TwoCoverBase::identity(vec![2]);
        cb.per[0].covers[0].q = vec![0, 0];
        assert!(cb.check().is_err());
        let mut cb = TwoCoverBase::identity(vec![2]);
        cb.per[0].pairs[0][0][0].t.pop();
        assert!(cb.check().is_err());
    }

    #[test]
    fn parse_two_to_one_cover() {
        let p = fixtures::ex_one_red();
        let text = r#"{"eta": {"covers": [["x0", "x0"]]}}"#;
        let cb = parse(text, &p).unwrap();
        assert_eq!(cb.per[1].covers[0].q, vec![0, 0]);
        assert_eq!(cb.per[1].pairs[0][0][0].t.len(), 4);
        let bad = r#"{"eta": {"covers": [[]]}}"#;
        assert!(parse(bad, &p).is_err());
    }
}
