//! Initial algebras by closed sets.
//!
//! For `C ⊆ Z`, `W^C` is the plain W-type of the polynomial that has a
//! single nullary constructor `∗` over each `z ∈ C` and only the
//! reduction-free constructors over `z ∉ C`. A set is closed when it absorbs
//! every `z` carrying a constructor that reduces in two places and has an
//! argument family in `W^C`. The least closed set `C0` gives the initial
//! algebra `W^{C0}`.

use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::fin::Fam;
use crate::poly::{
    check_algebra, homomorphisms, saturate_levels, Algebra, Head, Levels, Node, PolyRed,
    Signature, TreeId,
};
use crate::{Budget, Status};

/// A subset of the context, as a membership table.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ClosedSet {
    members: Vec<bool>,
}

impl ClosedSet {
    pub fn empty(base_len: usize) -> Self {
        ClosedSet {
            members: vec![false; base_len],
        }
    }

    pub fn from_members(members: Vec<bool>) -> Self {
        ClosedSet { members }
    }

    pub fn from_indices(base_len: usize, indices: impl IntoIterator<Item = usize>) -> Self {
        let mut c = Self::empty(base_len);
        for z in indices {
            c.members[z] = true;
        }
        c
    }

    pub fn contains(&self, z: usize) -> bool {
        self.members[z]
    }

    pub fn members(&self) -> &[bool] {
        &self.members
    }

    pub fn indices(&self) -> Vec<usize> {
        (0..self.members.len()).filter(|&z| self.members[z]).collect()
    }

    pub fn is_subset(&self, other: &ClosedSet) -> bool {
        self.members
            .iter()
            .zip(&other.members)
            .all(|(&a, &b)| !a || b)
    }

    pub fn names(&self, p: &PolyRed) -> Vec<String> {
        self.indices()
            .into_iter()
            .map(|z| p.base_name(z).to_string())
            .collect()
    }
}

/// Which fibres of `W^C` are inhabited (least fixpoint).
pub fn inhabited_fibres(p: &PolyRed, c: &ClosedSet) -> Vec<bool> {
    let mut marked = c.members.clone();
    loop {
        let mut changed = false;
        for y in 0..p.constructors().len() {
            let z = p.cons_base(y);
            if marked[z] || !p.reduction_places(y).is_empty() {
                continue;
            }
            if p.arity_of(y).iter().all(|&x| marked[p.reindex(x)]) {
                marked[z] = true;
                changed = true;
            }
        }
        if !changed {
            return marked;
        }
    }
}

/// The base elements that closedness forces into `C` given `W^C`.
fn forced(p: &PolyRed, c: &ClosedSet) -> Vec<usize> {
    let inhabited = inhabited_fibres(p, c);
    let mut out: Vec<usize> = (0..p.constructors().len())
        .filter(|&y| p.reduction_places(y).len() >= 2)
        .filter(|&y| p.arity_of(y).iter().all(|&x| inhabited[p.reindex(x)]))
        .map(|y| p.cons_base(y))
        .collect();
    out.sort_unstable();
    out.dedup();
    out
}

pub fn is_closed(p: &PolyRed, c: &ClosedSet) -> bool {
    forced(p, c).into_iter().all(|z| c.contains(z))
}

/// The least closed set, by iterating the closure step from `∅`.
pub fn compute_c0(p: &PolyRed) -> ClosedSet {
    let mut c = ClosedSet::empty(p.base().len());
    loop {
        let add: Vec<usize> = forced(p, &c)
            .into_iter()
            .filter(|&z| !c.contains(z))
            .collect();
        if add.is_empty() {
            return c;
        }
        for z in add {
            c.members[z] = true;
        }
    }
}

/// `W^C` truncated to the budget, with its elements laid out as a family.
#[derive(Clone, Debug)]
pub struct WcCarrier {
    pub closed: ClosedSet,
    pub levels: Levels,
    carrier: Fam,
    elems: Vec<TreeId>,
    index: HashMap<TreeId, usize>,
}

impl WcCarrier {
    pub fn status(&self) -> Status {
        self.levels.status
    }

    pub fn carrier(&self) -> &Fam {
        &self.carrier
    }

    pub fn tree(&self, e: usize) -> TreeId {
        self.elems[e]
    }

    pub fn element(&self, t: TreeId) -> Option<usize> {
        self.index.get(&t).copied()
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    fn require_finite(&self) -> Result<()> {
        match self.status() {
            Status::Finite => Ok(()),
            Status::Truncated { depth } => Err(Error::NotFinite(depth)),
        }
    }
}

fn wc_signature(p: &PolyRed, c: &ClosedSet) -> Signature {
    let mut sig = Signature::new(p.base().len());
    for z in 0..p.base().len() {
        if c.contains(z) {
            sig.push(Head::Star(z), z, Vec::new());
            continue;
        }
        for &y in p.constructors().fibre(z) {
            if p.reduction_places(y).is_empty() {
                let args = p.arity_of(y).iter().map(|&x| p.reindex(x)).collect();
                sig.push(Head::Cons(y), z, args);
            }
        }
    }
    sig
}

pub fn build_wc(p: &PolyRed, c: &ClosedSet, budget: Budget) -> Result<WcCarrier> {
    p.require_coherent()?;
    if c.members.len() != p.base().len() {
        return Err(Error::BaseMismatch("closed set not a subset of the context".into()));
    }
    let levels = saturate_levels(&wc_signature(p, c), budget);
    let mut carrier = Fam::empty(p.base().len());
    let mut elems = Vec::new();
    let mut index = HashMap::new();
    for z in 0..p.base().len() {
        for &t in &levels.fibres[z] {
            let e = carrier.push(levels.pool.render(t, p), z)?;
            elems.push(t);
            index.insert(t, e);
        }
    }
    Ok(WcCarrier {
        closed: c.clone(),
        levels,
        carrier,
        elems,
        index,
    })
}

/// The algebra structure `d` on a finite `W^C`.
#[derive(Clone, Debug)]
pub struct DAlgebra {
    poly: PolyRed,
    wc: WcCarrier,
}

pub fn algebra_d(p: &PolyRed, wc: &WcCarrier) -> Result<DAlgebra> {
    wc.require_finite()?;
    let inhabited = inhabited_fibres(p, &wc.closed);
    for y in 0..p.constructors().len() {
        let z = p.cons_base(y);
        if !wc.closed.contains(z)
            && p.reduction_places(y).len() >= 2
            && p.arity_of(y).iter().all(|&x| inhabited[p.reindex(x)])
        {
            return Err(Error::InternalContradiction(format!(
                "`{}` reduces twice over `{}` with an argument family, but `{}` is not in C",
                p.cons_name(y),
                p.base_name(z),
                p.base_name(z)
            )));
        }
    }
    Ok(DAlgebra {
        poly: p.clone(),
        wc: wc.clone(),
    })
}

impl DAlgebra {
    pub fn wc(&self) -> &WcCarrier {
        &self.wc
    }
}

impl Algebra for DAlgebra {
    fn carrier(&self) -> &Fam {
        &self.wc.carrier
    }

    fn apply(&self, cons: usize, args: &[usize]) -> Option<usize> {
        let p = &self.poly;
        let z = p.cons_base(cons);
        if self.wc.closed.contains(z) {
            return self.wc.carrier.fibre(z).first().copied();
        }
        let xs = p.arity_of(cons);
        let places: Vec<usize> = (0..xs.len()).filter(|&k| p.has_reduction(xs[k])).collect();
        match places.as_slice() {
            [] => {
                let children = args.iter().map(|&a| self.wc.elems[a]).collect();
                let node = Node {
                    head: Head::Cons(cons),
                    children,
                };
                self.wc.element(self.wc.levels.pool.get(&node)?)
            }
            [k] => Some(args[*k]),
            _ => None,
        }
    }
}

fn star_target(t: &dyn Algebra, z: usize, p: &PolyRed) -> Result<usize> {
    match t.carrier().fibre(z) {
        [e] => Ok(*e),
        other => Err(Error::NotAnAlgebra(format!(
            "fibre over `{}` must have exactly one element, found {}",
            p.base_name(z),
            other.len()
        ))),
    }
}

/// The structure-preserving map `W^{C0} -> T` by recursion on trees.
pub fn initial_hom(p: &PolyRed, wc: &WcCarrier, t: &dyn Algebra) -> Result<Vec<usize>> {
    wc.require_finite()?;
    if t.carrier().base_len() != p.base().len() {
        return Err(Error::BaseMismatch("target not based on the context".into()));
    }
    let mut j = vec![usize::MAX; wc.len()];
    let mut order: Vec<usize> = (0..wc.len()).collect();
    order.sort_by_key(|&e| wc.levels.pool.height(wc.elems[e]));
    for e in order {
        let node = wc.levels.pool.node(wc.elems[e]);
        j[e] = match node.head {
            Head::Star(z) => star_target(t, z, p)?,
            Head::Cons(y) => {
                let args: Vec<usize> = node
                    .children
                    .iter()
                    .map(|&c| j[wc.index[&c]])
                    .collect();
                t.apply(y, &args).ok_or_else(|| {
                    Error::NotAnAlgebra(format!("operation undefined at `{}`", p.cons_name(y)))
                })?
            }
            Head::Cover { .. } => unreachable!("classical trees carry no covers"),
        };
    }
    Ok(j)
}

/// The canonical map `W^C -> W^{C'}` for `C ⊆ C'`.
pub fn comparison_map(from: &WcCarrier, to: &WcCarrier) -> Result<Vec<usize>> {
    if !from.closed.is_subset(&to.closed) {
        return Err(Error::ShapeMismatch("source closed set not contained in target".into()));
    }
    let mut out = vec![usize::MAX; from.len()];
    let mut order: Vec<usize> = (0..from.len()).collect();
    order.sort_by_key(|&e| from.levels.pool.height(from.elems[e]));
    for e in order {
        let tree = from.elems[e];
        let z = from.levels.pool.base(tree);
        let node = from.levels.pool.node(tree);
        out[e] = if to.closed.contains(z) {
            to.carrier.fibre(z)[0]
        } else {
            let children = node
                .children
                .iter()
                .map(|&c| to.elems[out[from.index[&c]]])
                .collect();
            let image = Node {
                head: node.head,
                children,
            };
            to.levels
                .pool
                .get(&image)
                .and_then(|t| to.element(t))
                .ok_or_else(|| {
                    Error::IllDefined(format!(
                        "image of `{}` beyond the target truncation",
                        from.carrier.name(e)
                    ))
                })?
        };
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TargetOutcome {
    /// Exactly one homomorphism, equal to the recursive one.
    Unique(Vec<usize>),
    /// The number of homomorphisms found was not one, or the unique one
    /// differs from the recursive map.
    Failed { homs: usize },
    NotAnAlgebra(Vec<String>),
    Skipped(String),
}

impl TargetOutcome {
    pub fn passes(&self) -> bool {
        matches!(self, TargetOutcome::Unique(_))
    }
}

impl fmt::Display for TargetOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TargetOutcome::Unique(_) => f.write_str("unique homomorphism"),
            TargetOutcome::Failed { homs } => write!(f, "{homs} homomorphisms"),
            TargetOutcome::NotAnAlgebra(v) => write!(f, "not an algebra: {}", v.join("; ")),
            TargetOutcome::Skipped(why) => write!(f, "skipped: {why}"),
        }
    }
}

/// Brute-force initiality check of `source` against one target.
pub fn check_target(
    p: &PolyRed,
    source: &dyn Algebra,
    recursive: impl FnOnce() -> Result<Vec<usize>>,
    target: &dyn Algebra,
    cap: u128,
) -> Result<TargetOutcome> {
    let report = match check_algebra(p, target, cap) {
        Ok(r) => r,
        Err(Error::CapExceeded { what, needed, cap }) => {
            return Ok(TargetOutcome::Skipped(format!("{what} needs {needed} > {cap}")))
        }
        Err(e) => return Err(e),
    };
    if !report.passes() {
        return Ok(TargetOutcome::NotAnAlgebra(report.describe(p, target.carrier())));
    }
    let homs = match homomorphisms(p, source, target, cap) {
        Ok(h) => h,
        Err(Error::CapExceeded { what, needed, cap }) => {
            return Ok(TargetOutcome::Skipped(format!("{what} needs {needed} > {cap}")))
        }
        Err(e) => return Err(e),
    };
    if homs.len() != 1 {
        return Ok(TargetOutcome::Failed { homs: homs.len() });
    }
    let j = recursive()?;
    if j == homs[0] {
        Ok(TargetOutcome::Unique(j))
    } else {
        Ok(TargetOutcome::Failed { homs: 1 })
    }
}

/// Initiality of `W^{C0}` against each target, by exhaustive search.
pub fn verify_initial(
    p: &PolyRed,
    wc: &WcCarrier,
    targets: &[&dyn Algebra],
    cap: u128,
) -> Result<Vec<TargetOutcome>> {
    let d = algebra_d(p, wc)?;
    targets
        .iter()
        .map(|&t| check_target(p, &d, || initial_hom(p, wc, t), t, cap))
        .collect()
}

/// `C0`, `W^{C0}` and its algebra structure.
#[derive(Clone, Debug)]
pub struct ClassicalInitial {
    pub c0: ClosedSet,
    pub algebra: Option<DAlgebra>,
    pub wc: WcCarrier,
}

pub fn build_initial(p: &PolyRed, budget: Budget) -> Result<ClassicalInitial> {
    let p = p.normalize_reductions();
    let c0 = compute_c0(&p);
    let wc = build_wc(&p, &c0, budget)?;
    let algebra = match wc.status() {
        Status::Finite => Some(algebra_d(&p, &wc)?),
        Status::Truncated { .. } => None,
    };
    Ok(ClassicalInitial { c0, algebra, wc })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::poly::{enumerate_algebras, enumerate_trees, FnAlgebra, DEFAULT_ALGEBRA_CAP};

    fn set(p: &PolyRed, zs: &[usize]) -> ClosedSet {
        ClosedSet::from_indices(p.base().len(), zs.iter().copied())
    }

    #[test]
    fn inhabited_examples() {
        let nat = fixtures::ex_nat();
        assert_eq!(inhabited_fibres(&nat, &set(&nat, &[])), vec![true]);
        let e = fixtures::ex_empty();
        assert_eq!(inhabited_fibres(&e, &set(&e, &[])), vec![false]);
        assert_eq!(inhabited_fibres(&e, &set(&e, &[0])), vec![true]);
    }

    #[test]
    fn c0_examples() {
        assert!(compute_c0(&fixtures::ex_nat()).indices().is_empty());
        assert_eq!(compute_c0(&fixtures::ex_collapse()).indices(), vec![0]);
        assert!(compute_c0(&fixtures::ex_empty()).indices().is_empty());
        assert!(compute_c0(&fixtures::ex_one_red()).indices().is_empty());
    }

    #[test]
    fn wc_examples() {
        let p = fixtures::ex_collapse();
        let wc = build_wc(&p, &set(&p, &[0]), Budget::default()).unwrap();
        assert_eq!(wc.status(), Status::Finite);
        assert_eq!(wc.carrier().total().names(), ["∗"]);

        let p = fixtures::ex_one_red();
        let wc = build_wc(&p, &set(&p, &[]), Budget::default()).unwrap();
        assert_eq!(wc.status(), Status::Finite);
        assert_eq!(wc.carrier().total().names(), ["zero"]);

        let p = fixtures::ex_nat();
        let budget = Budget {
            max_depth: 3,
            ..Budget::default()
        };
        let wc = build_wc(&p, &set(&p, &[]), budget).unwrap();
        assert_eq!(wc.status(), Status::Truncated { depth: 3 });
        let plain = enumerate_trees(&p, 3).unwrap();
        assert_eq!(wc.carrier().total().names(), plain.render_fibre(0, &p));
    }

    #[test]
    fn d_clauses() {
        let p = fixtures::ex_one_red();
        let init = build_initial(&p, Budget::default()).unwrap();
        let d = init.algebra.unwrap();
        assert_eq!(d.apply(1, &[0]), Some(0));
        assert_eq!(d.apply(0, &[]), Some(0));
        assert!(check_algebra(&p, &d, DEFAULT_ALGEBRA_CAP).unwrap().passes());

        let p = fixtures::ex_collapse();
        let d = build_initial(&p, Budget::default()).unwrap().algebra.unwrap();
        assert_eq!(d.apply(1, &[0, 0]), Some(0));

        let p = fixtures::two_nullary();
        let d = build_initial(&p, Budget::default()).unwrap().algebra.unwrap();
        assert_eq!(d.carrier().name(d.apply(0, &[]).unwrap()), "zero");
    }

    #[test]
    fn corrupted_c0_is_detected() {
        let p = fixtures::ex_collapse();
        let wc = build_wc(&p, &set(&p, &[]), Budget::default()).unwrap();
        assert!(matches!(algebra_d(&p, &wc), Err(Error::InternalContradiction(_))));
    }

    #[test]
    fn initial_hom_examples() {
        let p = fixtures::ex_one_red();
        let init = build_initial(&p, Budget::default()).unwrap();
        let carrier = Fam::new(1, [("a", 0), ("b", 0)]).unwrap();
        let t = FnAlgebra::new(carrier, |y, args: &[usize]| Some(if y == 0 { 0 } else { args[0] }));
        assert_eq!(initial_hom(&p, &init.wc, &t).unwrap(), vec![0]);

        let p = fixtures::ex_collapse();
        let init = build_initial(&p, Budget::default()).unwrap();
        let two = Fam::new(1, [("a", 0), ("b", 0)]).unwrap();
        let bogus = FnAlgebra::new(two, |_, _: &[usize]| Some(0));
        assert!(matches!(
            initial_hom(&p, &init.wc, &bogus),
            Err(Error::NotAnAlgebra(_))
        ));
    }

    #[test]
    fn verify_against_small_carriers() {
        for p in [fixtures::ex_one_red(), fixtures::ex_collapse(), fixtures::two_nullary()] {
            let init = build_initial(&p, Budget::default()).unwrap();
            for n in 1..=2 {
                let carrier = Fam::new(1, (0..n).map(|k| (format!("t{k}"), 0))).unwrap();
                let algs = enumerate_algebras(&p, &carrier, DEFAULT_ALGEBRA_CAP).unwrap();
                let refs: Vec<&dyn Algebra> = algs.iter().map(|a| a as &dyn Algebra).collect();
                let out = verify_initial(&p, &init.wc, &refs, DEFAULT_ALGEBRA_CAP).unwrap();
                assert!(out.iter().all(TargetOutcome::passes));
            }
        }
    }

    #[test]
    fn non_algebra_target_reported() {
        let p = fixtures::ex_one_red();
        let init = build_initial(&p, Budget::default()).unwrap();
        let carrier = Fam::new(1, [("a", 0), ("b", 0)]).unwrap();
        let t = FnAlgebra::new(carrier, |_, _: &[usize]| Some(0));
        let out = verify_initial(&p, &init.wc, &[&t], DEFAULT_ALGEBRA_CAP).unwrap();
        assert!(matches!(out[0], TargetOutcome::NotAnAlgebra(_)));
    }

    #[test]
    fn comparison_into_bigger_closed_set() {
        let p = PolyRed::builder(["a", "b"])
            .constructor("pa", "a")
            .constructor("pb", "b")
            .constructor("f", "b")
            .arity("fx", "f", "a")
            .build()
            .unwrap();
        let small = build_wc(&p, &set(&p, &[]), Budget::default()).unwrap();
        let big = build_wc(&p, &set(&p, &[1]), Budget::default()).unwrap();
        let m = comparison_map(&small, &big).unwrap();
        for (e, &v) in m.iter().enumerate() {
            assert_eq!(small.carrier().over(e), big.carrier().over(v));
        }
        assert!(comparison_map(&big, &small).is_err());
    }
}
