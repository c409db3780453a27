//! Polynomials with reductions over finite sets.
//!
//! A [`PolyRed`] is the data `R --k--> X --f--> Y --g--> Z` together with a
//! reindexing map `h: X -> Z`, stored as families: constructors over the
//! base, arity elements over constructors, reduction witnesses over arity
//! elements. Coherence (`g∘f∘k = h∘k`) is not enforced on construction so
//! that it can be checked and reported.

mod algebra;
mod functor;
pub mod json;
mod tree;

pub use algebra::{
    arg_choices, check_algebra, enumerate_algebras, homomorphisms, is_homomorphism, Algebra,
    AlgebraReport, AlgebraViolation, FnAlgebra, TableAlgebra, DEFAULT_ALGEBRA_CAP,
};
pub use functor::{eval_functor, Cell, FunctorValue};
pub use tree::{enumerate_trees, enumerate_trees_within, Head, Levels, Node, TreeId, TreePool};
pub(crate) use tree::{saturate_levels, Signature};

use crate::error::{Error, Result};
use crate::fin::{Fam, Fin};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyRed {
    base: Fin,
    cons: Fam,
    arity: Fam,
    reindex: Vec<usize>,
    red: Fam,
}

/// Which of the three constructions applies.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Classification {
    NoReductions,
    Decidable,
    General,
}

impl std::fmt::Display for Classification {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Classification::NoReductions => "NoReductions",
            Classification::Decidable => "Decidable",
            Classification::General => "General",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoherenceReport {
    /// Arity elements with a reduction whose reindexing leaves the fibre.
    pub violations: Vec<usize>,
}

impl CoherenceReport {
    pub fn passes(&self) -> bool {
        self.violations.is_empty()
    }
}

impl PolyRed {
    pub fn new(base: Fin, cons: Fam, arity: Fam, reindex: Vec<usize>, red: Fam) -> Result<Self> {
        if cons.base_len() != base.len() {
            return Err(Error::malformed("constructor family not based on the context"));
        }
        if arity.base_len() != cons.len() {
            return Err(Error::malformed("arity family not based on the constructors"));
        }
        if reindex.len() != arity.len() {
            return Err(Error::malformed("reindexing map not total on arities"));
        }
        if let Some(x) = reindex.iter().position(|&z| z >= base.len()) {
            return Err(Error::malformed(format!(
                "arity element `{}` reindexed outside the context",
                arity.name(x)
            )));
        }
        if red.base_len() != arity.len() {
            return Err(Error::malformed("reduction family not based on the arities"));
        }
        Ok(PolyRed {
            base,
            cons,
            arity,
            reindex,
            red,
        })
    }

    pub fn builder<I, S>(base: I) -> PolyBuilder
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        PolyBuilder {
            base: base.into_iter().map(Into::into).collect(),
            cons: Vec::new(),
            arity: Vec::new(),
            red: Vec::new(),
        }
    }

    pub fn base(&self) -> &Fin {
        &self.base
    }

    pub fn constructors(&self) -> &Fam {
        &self.cons
    }

    pub fn arities(&self) -> &Fam {
        &self.arity
    }

    pub fn reductions(&self) -> &Fam {
        &self.red
    }

    pub fn reindex(&self, x: usize) -> usize {
        self.reindex[x]
    }

    pub fn reindex_table(&self) -> &[usize] {
        &self.reindex
    }

    /// Base element a constructor lives over.
    pub fn cons_base(&self, y: usize) -> usize {
        self.cons.over(y)
    }

    /// Constructor an arity element belongs to.
    pub fn arity_cons(&self, x: usize) -> usize {
        self.arity.over(x)
    }

    pub fn arity_of(&self, y: usize) -> &[usize] {
        self.arity.fibre(y)
    }

    pub fn has_reduction(&self, x: usize) -> bool {
        !self.red.fibre(x).is_empty()
    }

    /// Arity elements of `y` carrying a reduction, in declared order.
    pub fn reduction_places(&self, y: usize) -> Vec<usize> {
        self.arity_of(y)
            .iter()
            .copied()
            .filter(|&x| self.has_reduction(x))
            .collect()
    }

    pub fn cons_name(&self, y: usize) -> &str {
        self.cons.name(y)
    }

    pub fn base_name(&self, z: usize) -> &str {
        self.base.name(z)
    }

    pub fn arity_name(&self, x: usize) -> &str {
        self.arity.name(x)
    }

    pub fn check_coherence(&self) -> CoherenceReport {
        let violations = (0..self.arity.len())
            .filter(|&x| self.has_reduction(x))
            .filter(|&x| self.reindex[x] != self.cons_base(self.arity_cons(x)))
            .collect();
        CoherenceReport { violations }
    }

    pub fn require_coherent(&self) -> Result<()> {
        let report = self.check_coherence();
        if report.passes() {
            Ok(())
        } else {
            Err(Error::Incoherent(
                report
                    .violations
                    .iter()
                    .map(|&x| self.arity_name(x).to_string())
                    .collect(),
            ))
        }
    }

    /// Replace the reductions by their image in the arities: every nonempty
    /// reduction fibre keeps only its first witness.
    pub fn normalize_reductions(&self) -> PolyRed {
        let mut red = Fam::empty(self.arity.len());
        for x in 0..self.arity.len() {
            if let Some(&r) = self.red.fibre(x).first() {
                red.push(self.red.name(r), x)
                    .expect("names already distinct");
            }
        }
        PolyRed {
            red,
            ..self.clone()
        }
    }

    pub fn is_normalized(&self) -> bool {
        (0..self.arity.len()).all(|x| self.red.fibre(x).len() <= 1)
    }

    pub fn classify(&self) -> Classification {
        let mut class = Classification::NoReductions;
        for y in 0..self.cons.len() {
            match self.reduction_places(y).len() {
                0 => {}
                1 => class = class.max(Classification::Decidable),
                _ => return Classification::General,
            }
        }
        class
    }

    /// The pointed polynomial with no arities and no reductions whose
    /// constructors are the elements of `extra`; it sends `W` to `W + extra`.
    pub fn seed(base: &Fin, extra: &Fam) -> Result<PolyRed> {
        if extra.base_len() != base.len() {
            return Err(Error::BaseMismatch(
                "seed family is not based on the context".into(),
            ));
        }
        let cons = extra.clone();
        let arity = Fam::empty(cons.len());
        let red = Fam::empty(0);
        PolyRed::new(base.clone(), cons, arity, Vec::new(), red)
    }

    /// Disjoint union of constructors, arities and reductions over a shared
    /// context. Constructors of `self` come first. Names are kept when the
    /// two sides do not clash and prefixed with `inl.`/`inr.` otherwise.
    pub fn coprod(&self, other: &PolyRed) -> Result<PolyRed> {
        if self.base != other.base {
            return Err(Error::BaseMismatch(
                "coproduct of polynomials over different contexts".into(),
            ));
        }
        let clash = |a: &Fin, b: &Fin| a.names().iter().any(|n| b.position(n).is_some());
        let tagged = clash(self.cons.total(), other.cons.total())
            || clash(self.arity.total(), other.arity.total())
            || clash(self.red.total(), other.red.total());
        let tag = |side: &str, name: &str| {
            if tagged {
                format!("{side}.{name}")
            } else {
                name.to_string()
            }
        };

        let mut cons = Fam::empty(self.base.len());
        let mut arity = Fam::empty(self.cons.len() + other.cons.len());
        let mut reindex = Vec::with_capacity(self.arity.len() + other.arity.len());
        let mut red = Fam::empty(self.arity.len() + other.arity.len());
        let (y_off, x_off) = (self.cons.len(), self.arity.len());
        for (side, p, yo, xo) in [("inl", self, 0, 0), ("inr", other, y_off, x_off)] {
            for y in 0..p.cons.len() {
                cons.push(tag(side, p.cons.name(y)), p.cons.over(y))?;
            }
            for x in 0..p.arity.len() {
                arity.push(tag(side, p.arity.name(x)), yo + p.arity.over(x))?;
                reindex.push(p.reindex[x]);
            }
            for r in 0..p.red.len() {
                red.push(tag(side, p.red.name(r)), xo + p.red.over(r))?;
            }
        }
        PolyRed::new(self.base.clone(), cons, arity, reindex, red)
    }

    /// The same polynomial with every reduction removed.
    pub fn underlying(&self) -> PolyRed {
        PolyRed {
            red: Fam::empty(self.arity.len()),
            ..self.clone()
        }
    }
}

/// Name-based construction of a [`PolyRed`].
#[derive(Clone, Debug)]
pub struct PolyBuilder {
    base: Vec<String>,
    cons: Vec<(String, String)>,
    arity: Vec<(String, String, String)>,
    red: Vec<(String, usize)>,
}

impl PolyBuilder {
    pub fn constructor(mut self, name: impl Into<String>, over: impl Into<String>) -> Self {
        self.cons.push((name.into(), over.into()));
        self
    }

    /// Add arity element `name` to constructor `cons`, reindexed to `target`.
    pub fn arity(
        mut self,
        name: impl Into<String>,
        cons: impl Into<String>,
        target: impl Into<String>,
    ) -> Self {
        self.arity.push((name.into(), cons.into(), target.into()));
        self
    }

    /// Give arity element `x` a reduction fibre with one witness.
    pub fn reduction(self, x: impl Into<String>) -> Self {
        self.reductions(x, 1)
    }

    /// Give arity element `x` a reduction fibre with `count` witnesses.
    pub fn reductions(mut self, x: impl Into<String>, count: usize) -> Self {
        self.red.push((x.into(), count));
        self
    }

    pub fn build(self) -> Result<PolyRed> {
        let base = Fin::new(self.base)?;
        let mut cons = Fam::empty(base.len());
        for (name, over) in &self.cons {
            cons.push(name.clone(), base.lookup("base element", over)?)?;
        }
        let mut arity = Fam::empty(cons.len());
        let mut reindex = Vec::new();
        for (name, y, target) in &self.arity {
            arity.push(name.clone(), cons.total().lookup("constructor", y)?)?;
            reindex.push(base.lookup("base element", target)?);
        }
        let mut red = Fam::empty(arity.len());
        for (x, count) in &self.red {
            let xi = arity.total().lookup("arity element", x)?;
            for k in 0..*count {
                let name = if *count == 1 {
                    x.clone()
                } else {
                    format!("{x}#{k}")
                };
                red.push(name, xi)?;
            }
        }
        PolyRed::new(base, cons, arity, reindex, red)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn fixture_coherence() {
        for (name, p) in fixtures::all_polynomials() {
            assert!(p.check_coherence().passes(), "{name}");
        }
    }

    #[test]
    fn redirected_reindex_breaks_coherence() {
        let p = PolyRed::builder(["*", "fresh"])
            .constructor("zero", "*")
            .constructor("eta", "*")
            .arity("x0", "eta", "fresh")
            .reduction("x0")
            .build()
            .unwrap();
        let report = p.check_coherence();
        assert_eq!(report.violations, vec![0]);
        assert!(matches!(p.require_coherent(), Err(Error::Incoherent(v)) if v == ["x0"]));
    }

    #[test]
    fn unknown_references_are_structural_errors() {
        let err = PolyRed::builder(["*"])
            .constructor("zero", "nowhere")
            .build()
            .unwrap_err();
        assert!(matches!(err, Error::UnknownName { kind: "base element", .. }));
        let err = PolyRed::builder(["*"])
            .constructor("eta", "*")
            .arity("x0", "eta", "*")
            .reduction("x9")
            .build()
            .unwrap_err();
        assert!(matches!(err, Error::UnknownName { kind: "arity element", .. }));
    }

    #[test]
    fn normalize_shrinks_fibres_to_one() {
        let p = PolyRed::builder(["*"])
            .constructor("zero", "*")
            .constructor("eta", "*")
            .arity("x0", "eta", "*")
            .reductions("x0", 3)
            .build()
            .unwrap();
        assert_eq!(p.reductions().fibre(0).len(), 3);
        let n = p.normalize_reductions();
        assert_eq!(n.reductions().fibre(0).len(), 1);
        assert!(n.is_normalized());
        assert_eq!(n.normalize_reductions(), n);
        let nat = fixtures::ex_nat();
        assert_eq!(nat.normalize_reductions(), nat);
    }

    #[test]
    fn classification_of_fixtures() {
        assert_eq!(fixtures::ex_nat().classify(), Classification::NoReductions);
        assert_eq!(fixtures::ex_btree().classify(), Classification::NoReductions);
        assert_eq!(fixtures::ex_one_red().classify(), Classification::Decidable);
        assert_eq!(fixtures::ex_collapse().classify(), Classification::General);
        assert_eq!(fixtures::ex_empty().classify(), Classification::General);
    }

    #[test]
    fn coprod_tags_on_clash_and_classifies_pointwise_worst() {
        let s = fixtures::ex_nat().coprod(&fixtures::ex_one_red()).unwrap();
        assert_eq!(s.classify(), Classification::Decidable);
        assert_eq!(s.constructors().len(), 4);
        assert_eq!(s.cons_name(0), "inl.zero");
        assert!(s.check_coherence().passes());
        let t = fixtures::ex_nat().coprod(&fixtures::ex_collapse()).unwrap();
        assert_eq!(t.classify(), Classification::General);
    }

    #[test]
    fn coprod_base_mismatch() {
        let other = PolyRed::builder(["a", "b"]).build().unwrap();
        assert!(matches!(
            fixtures::ex_nat().coprod(&other),
            Err(Error::BaseMismatch(_))
        ));
    }

    #[test]
    fn seed_has_no_reductions() {
        let base = Fin::new(["a", "b"]).unwrap();
        let extra = Fam::new(2, [("p", 0), ("q", 0), ("r", 1)]).unwrap();
        let s = PolyRed::seed(&base, &extra).unwrap();
        assert_eq!(s.classify(), Classification::NoReductions);
        assert!(s.arities().is_empty());
    }
}
