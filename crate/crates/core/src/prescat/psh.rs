//! Polynomials with reductions in diagram categories, and the natural
//! families that serve as their arguments.

use std::collections::HashMap;
use std::sync::Arc;

use super::{check_diagram, check_natural, DiagMap, Diagram, FinCat};
use crate::error::{Error, Result};
use crate::fin::Fin;
use crate::poly::PolyRed;

/// `R -k-> X -f-> Y -g-> Z` with `h: X -> Z`, all diagrams over one category.
#[derive(Clone, Debug)]
pub struct PshPolyRed {
    pub cat: Arc<FinCat>,
    pub z: Diagram,
    pub y: Diagram,
    pub x: Diagram,
    pub r: Diagram,
    pub g: DiagMap,
    pub f: DiagMap,
    pub k: DiagMap,
    pub h: DiagMap,
    /// `arity[c][y]`: the arity elements over `y` at `c`.
    arity: Vec<Vec<Vec<usize>>>,
    /// `reducing[c][x]`: whether `x` is in the image of `k` at `c`.
    reducing: Vec<Vec<bool>>,
}

/// One argument position of a constructor at `c`: a morphism `σ: c -> d`
/// and an arity element over the image of the constructor at `d`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Slot {
    pub mor: usize,
    pub x: usize,
}

impl PshPolyRed {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        z: Diagram,
        y: Diagram,
        x: Diagram,
        r: Diagram,
        g: DiagMap,
        f: DiagMap,
        k: DiagMap,
        h: DiagMap,
    ) -> Result<Self> {
        let cat = z.cat.clone();
        for (what, d) in [("base", &z), ("constructors", &y), ("arities", &x), ("reductions", &r)] {
            if !d.cat.same(&cat) {
                return Err(Error::ShapeMismatch(format!("{what} over another category")));
            }
            let rep = check_diagram(d);
            if !rep.passes() {
                return Err(Error::malformed(format!("{what} diagram: {rep}")));
            }
        }
        for (what, m, s, t) in [("g", &g, &y, &z), ("f", &f, &x, &y), ("k", &k, &r, &x), ("h", &h, &x, &z)] {
            let rep = check_natural(m, s, t);
            if !rep.passes() {
                return Err(Error::malformed(format!("map {what}: {rep}")));
            }
        }
        let n = cat.object_count();
        let mut arity = Vec::with_capacity(n);
        let mut reducing = Vec::with_capacity(n);
        let mut bad = Vec::new();
        for c in 0..n {
            let mut by_y = vec![Vec::new(); y.components[c].len()];
            for xe in 0..x.components[c].len() {
                by_y[f.apply(c, xe)].push(xe);
            }
            let mut red = vec![false; x.components[c].len()];
            for re in 0..r.components[c].len() {
                red[k.apply(c, re)] = true;
            }
            for (xe, _) in red.iter().enumerate().filter(|(_, &b)| b) {
                if h.apply(c, xe) != g.apply(c, f.apply(c, xe)) {
                    bad.push(format!("{}@{}", x.components[c].name(xe), cat.objects().name(c)));
                }
            }
            arity.push(by_y);
            reducing.push(red);
        }
        if !bad.is_empty() {
            return Err(Error::Incoherent(bad));
        }
        Ok(PshPolyRed {
            cat,
            z,
            y,
            x,
            r,
            g,
            f,
            k,
            h,
            arity,
            reducing,
        })
    }

    /// A polynomial over finite sets, seen over the one-object category.
    pub fn from_poly(p: &PolyRed) -> Result<Self> {
        let cat = Arc::new(FinCat::trivial());
        let one = |fin: &Fin| Diagram::from_fn(cat.clone(), vec![fin.clone()], |_, e| e);
        let map = |t: Vec<usize>| DiagMap { tables: vec![t] };
        let p = p.normalize_reductions();
        let reds = p.reductions();
        PshPolyRed::new(
            one(p.base()),
            one(p.constructors().total()),
            one(p.arities().total()),
            one(reds.total()),
            map(p.constructors().projection().to_vec()),
            map(p.arities().projection().to_vec()),
            map(reds.projection().to_vec()),
            map(p.reindex_table().to_vec()),
        )
    }

    pub fn arity(&self, c: usize, y: usize) -> &[usize] {
        &self.arity[c][y]
    }

    pub fn reduces(&self, c: usize, x: usize) -> bool {
        self.reducing[c][x]
    }

    /// The first reduction place of `y` at `c`.
    pub fn reduction_place(&self, c: usize, y: usize) -> Option<usize> {
        self.arity[c][y].iter().copied().find(|&x| self.reducing[c][x])
    }

    /// Constructors at `c` that do not reduce there.
    pub fn normal_constructors(&self, c: usize) -> Vec<usize> {
        (0..self.y.components[c].len())
            .filter(|&y| self.reduction_place(c, y).is_none())
            .collect()
    }

    /// Every constructor has at most one reduction place at every object.
    pub fn check_locally_decidable(&self) -> bool {
        (0..self.cat.object_count()).all(|c| {
            self.arity[c]
                .iter()
                .all(|xs| xs.iter().filter(|&&x| self.reducing[c][x]).count() <= 1)
        })
    }

    /// Whether the reductions are injective into the arities at each object.
    pub fn reductions_monic(&self) -> bool {
        self.k.is_injective()
    }

    /// The argument slots of `y` at `c`, by morphism then arity element.
    pub fn slots(&self, c: usize, y: usize) -> Vec<Slot> {
        let mut out = Vec::new();
        for &mor in self.cat.outgoing(c) {
            let d = self.cat.cod(mor);
            for &x in self.arity(d, self.y.act(mor, y)) {
                out.push(Slot { mor, x });
            }
        }
        out
    }

    pub fn object_name(&self, c: usize) -> &str {
        self.cat.objects().name(c)
    }
}

/// A diagram over `Z`, as much of it as natural families need.
pub trait PshTarget {
    /// Elements at `obj` lying over `z ∈ Z(obj)`, in a fixed order.
    fn fibre(&self, obj: usize, z: usize) -> Vec<usize>;
    /// Action of `mor` on an element at its domain.
    fn act(&self, mor: usize, e: usize) -> usize;
}

/// A diagram with its map to `Z`.
#[derive(Clone, Copy, Debug)]
pub struct Over<'a> {
    pub diagram: &'a Diagram,
    pub to_base: &'a DiagMap,
}

impl PshTarget for Over<'_> {
    fn fibre(&self, obj: usize, z: usize) -> Vec<usize> {
        (0..self.diagram.components[obj].len())
            .filter(|&e| self.to_base.apply(obj, e) == z)
            .collect()
    }

    fn act(&self, mor: usize, e: usize) -> usize {
        self.diagram.act(mor, e)
    }
}

/// All natural families for `y ∈ Y(c)` with values in `target`, listed as
/// the value at each slot of [`PshPolyRed::slots`].
pub fn pi_families(pp: &PshPolyRed, target: &dyn PshTarget, c: usize, y: usize) -> Vec<Vec<usize>> {
    let slots = pp.slots(c, y);
    let index: HashMap<Slot, usize> = slots.iter().enumerate().map(|(i, &s)| (s, i)).collect();
    // links[i]: (τ, j) with slot j = (τ∘σ_i, X(τ)x_i)
    let links: Vec<Vec<(usize, usize)>> = slots
        .iter()
        .map(|s| {
            let d = pp.cat.cod(s.mor);
            pp.cat
                .outgoing(d)
                .iter()
                .map(|&tau| {
                    let comp = pp.cat.compose(tau, s.mor).expect("composable");
                    let j = index[&Slot {
                        mor: comp,
                        x: pp.x.act(tau, s.x),
                    }];
                    (tau, j)
                })
                .collect()
        })
        .collect();
    let choices: Vec<Vec<usize>> = slots
        .iter()
        .map(|s| {
            let d = pp.cat.cod(s.mor);
            target.fibre(d, pp.h.apply(d, s.x))
        })
        .collect();
    let mut out = Vec::new();
    let mut current = vec![None; slots.len()];
    search(&links, &choices, target, &mut current, 0, &mut out);
    out
}

fn search(
    links: &[Vec<(usize, usize)>],
    choices: &[Vec<usize>],
    target: &dyn PshTarget,
    current: &mut Vec<Option<usize>>,
    from: usize,
    out: &mut Vec<Vec<usize>>,
) {
    let Some(i) = (from..current.len()).find(|&i| current[i].is_none()) else {
        out.push(current.iter().map(|v| v.expect("assigned")).collect());
        return;
    };
    for &v in &choices[i] {
        let saved = current.clone();
        if assign(links, choices, target, current, i, v) {
            search(links, choices, target, current, i + 1, out);
        }
        *current = saved;
    }
}

/// Set slot `i` to `v` and propagate along the naturality links.
fn assign(
    links: &[Vec<(usize, usize)>],
    choices: &[Vec<usize>],
    target: &dyn PshTarget,
    current: &mut [Option<usize>],
    i: usize,
    v: usize,
) -> bool {
    let mut stack = vec![(i, v)];
    while let Some((i, v)) = stack.pop() {
        match current[i] {
            Some(w) if w == v => continue,
            Some(_) => return false,
            None => {}
        }
        if !choices[i].contains(&v) {
            return false;
        }
        current[i] = Some(v);
        for &(tau, j) in &links[i] {
            stack.push((j, target.act(tau, v)));
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn fin<const N: usize>(names: [&str; N]) -> Fin {
        Fin::new(names).unwrap()
    }

    #[test]
    fn trivial_category_counts_dependent_products() {
        let p = fixtures::ex_btree();
        let pp = PshPolyRed::from_poly(&p).unwrap();
        let cat = pp.cat.clone();
        let a = Diagram::from_fn(cat, vec![fin(["u", "v", "w"])], |_, e| e);
        let to_z = DiagMap { tables: vec![vec![0; 3]] };
        let t = Over { diagram: &a, to_base: &to_z };
        assert_eq!(pi_families(&pp, &t, 0, 0), vec![Vec::<usize>::new()]);
        let fams = pi_families(&pp, &t, 0, 1);
        assert_eq!(fams.len(), 9);
        assert_eq!(fams[1], vec![0, 1]);
        assert!(pp.check_locally_decidable());
    }

    #[test]
    fn collapse_is_not_locally_decidable() {
        let pp = PshPolyRed::from_poly(&fixtures::ex_collapse()).unwrap();
        assert!(!pp.check_locally_decidable());
        assert!(PshPolyRed::from_poly(&fixtures::ex_one_red()).unwrap().check_locally_decidable());
    }

    /// One constructor at `c` and `d` with a single arity at `d` only, so
    /// the slots at `c` are `(σ, x)` and at `d` are `(id, x)`.
    fn arrow_unary() -> PshPolyRed {
        let cat = Arc::new(FinCat::arrow());
        let z = Diagram::terminal(cat.clone());
        let y = Diagram::from_fn(cat.clone(), vec![fin(["y"]), fin(["y"])], |_, _| 0);
        let x = Diagram::from_fn(cat.clone(), vec![fin([]), fin(["x"])], |_, _| 0);
        let r = Diagram::empty(cat);
        let zero = |a: &Diagram| DiagMap {
            tables: a.components.iter().map(|c| vec![0; c.len()]).collect(),
        };
        PshPolyRed::new(
            z,
            y.clone(),
            x.clone(),
            r.clone(),
            zero(&y),
            zero(&x),
            zero(&r),
            zero(&x),
        )
        .unwrap()
    }

    #[test]
    fn naturality_filter_is_strict() {
        let pp = arrow_unary();
        assert_eq!(pp.slots(0, 0), vec![Slot { mor: 2, x: 0 }]);
        // target: A(c) = {p}, A(d) = {q0, q1}, σ sends p to q1
        let a = Diagram::from_fn(pp.cat.clone(), vec![fin(["p"]), fin(["q0", "q1"])], |m, e| {
            if m == 2 {
                1
            } else {
                e
            }
        });
        let to_z = DiagMap { tables: vec![vec![0], vec![0, 0]] };
        let t = Over { diagram: &a, to_base: &to_z };
        // at c the only slot lives at d and is unconstrained by identities
        assert_eq!(pi_families(&pp, &t, 0, 0).len(), 2);
        // at d the slot (id_d, x) is free too
        assert_eq!(pi_families(&pp, &t, 1, 0), vec![vec![0], vec![1]]);
    }

    #[test]
    fn composite_slots_are_linked() {
        // c -σ-> d with arity at both objects and X(σ) the identity on names
        let cat = Arc::new(FinCat::arrow());
        let z = Diagram::terminal(cat.clone());
        let y = Diagram::from_fn(cat.clone(), vec![fin(["y"]), fin(["y"])], |_, _| 0);
        let x = Diagram::from_fn(cat.clone(), vec![fin(["x"]), fin(["x"])], |_, _| 0);
        let r = Diagram::empty(cat.clone());
        let zero = |a: &Diagram| DiagMap {
            tables: a.components.iter().map(|c| vec![0; c.len()]).collect(),
        };
        let pp = PshPolyRed::new(z, y.clone(), x.clone(), r.clone(), zero(&y), zero(&x), zero(&r), zero(&x)).unwrap();
        // slots at c: (id_c, x) and (σ, x), linked by σ
        assert_eq!(pp.slots(0, 0).len(), 2);
        let a = Diagram::from_fn(cat, vec![fin(["p0", "p1"]), fin(["q0", "q1"])], |m, e| {
            if m == 2 {
                0
            } else {
                e
            }
        });
        let to_z = DiagMap { tables: vec![vec![0, 0], vec![0, 0]] };
        let t = Over { diagram: &a, to_base: &to_z };
        let fams = pi_families(&pp, &t, 0, 0);
        assert_eq!(fams, vec![vec![0, 0], vec![1, 0]]);
        // the hand-built family sending (σ, x) to q1 is excluded
        assert!(!fams.contains(&vec![0, 1]));
    }

    #[test]
    fn incoherent_reduction_rejected() {
        let cat = Arc::new(FinCat::trivial());
        let d = |names: &[&str]| Diagram::from_fn(cat.clone(), vec![Fin::new(names.iter().copied()).unwrap()], |_, e| e);
        let m = |t: Vec<usize>| DiagMap { tables: vec![t] };
        let err = PshPolyRed::new(
            d(&["z0", "z1"]),
            d(&["y"]),
            d(&["x"]),
            d(&["r"]),
            m(vec![0]),
            m(vec![0]),
            m(vec![0]),
            m(vec![1]),
        );
        assert!(matches!(err, Err(Error::Incoherent(_))));
    }
}
