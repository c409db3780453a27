//! Initial algebras as quotients of cover-indexed terms by a partial
//! equivalence relation.
//!
//! Terms are `cons(y, i, α)` with `α` indexed by a cover `A_i` of the
//! arity. The relation `~` is the least one closed under transitivity,
//! the two reduction rules (guarded by a witness that `α` agrees with
//! itself through a pair cover) and extensionality through pair covers.
//! Well defined terms are those with `w ~ w`; their classes carry the
//! initial algebra.

pub mod cover;

use std::collections::HashMap;
use std::fmt;

use crate::classical::{self, ClassicalInitial};
use crate::error::{Error, Result};
use crate::fin::{Assignments, Fam};
use crate::poly::{saturate_levels, Algebra, Head, Levels, PolyRed, Signature, TableAlgebra, TreeId};
use crate::{Budget, Status};

pub use cover::{ConsCovers, Cover, PairCover, TwoCoverBase};

fn term_signature(p: &PolyRed, cb: &TwoCoverBase) -> Signature {
    let mut sig = Signature::new(p.base().len());
    for y in 0..p.constructors().len() {
        let xs = p.arity_of(y);
        for (i, c) in cb.per[y].covers.iter().enumerate() {
            let args = c.q.iter().map(|&k| p.reindex(xs[k])).collect();
            sig.push(Head::Cover { cons: y, cover: i }, p.cons_base(y), args);
        }
    }
    sig
}

/// All terms of height at most `depth`.
pub fn enumerate_terms(p: &PolyRed, cb: &TwoCoverBase, budget: Budget) -> Result<Levels> {
    p.require_coherent()?;
    cb.check_for(p)?;
    Ok(saturate_levels(&term_signature(p, cb), budget))
}

/// A square bit matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
struct BitMatrix {
    n: usize,
    words: usize,
    bits: Vec<u64>,
}

impl BitMatrix {
    fn new(n: usize) -> Self {
        let words = n.div_ceil(64);
        BitMatrix {
            n,
            words,
            bits: vec![0; n * words],
        }
    }

    fn get(&self, i: usize, j: usize) -> bool {
        self.bits[i * self.words + j / 64] >> (j % 64) & 1 == 1
    }

    /// Set `(i, j)` and `(j, i)`; true if anything changed.
    fn set_sym(&mut self, i: usize, j: usize) -> bool {
        let mut changed = false;
        for (a, b) in [(i, j), (j, i)] {
            let w = &mut self.bits[a * self.words + b / 64];
            let mask = 1u64 << (b % 64);
            if *w & mask == 0 {
                *w |= mask;
                changed = true;
            }
        }
        changed
    }

    fn transitive_closure(&mut self) -> bool {
        let mut changed = false;
        for k in 0..self.n {
            for i in 0..self.n {
                if i == k || !self.get(i, k) {
                    continue;
                }
                for w in 0..self.words {
                    let add = self.bits[k * self.words + w];
                    let cell = &mut self.bits[i * self.words + w];
                    if *cell | add != *cell {
                        *cell |= add;
                        changed = true;
                    }
                }
            }
        }
        changed
    }
}

/// The saturated relation on a finite universe of terms.
#[derive(Clone, Debug)]
pub struct PerRel {
    pub universe: Levels,
    /// Fibre position of each term, indexed by tree id.
    pos: Vec<usize>,
    rel: Vec<BitMatrix>,
}

impl PerRel {
    /// Whether `a ~ b`; terms in different fibres are unrelated.
    pub fn related(&self, a: TreeId, b: TreeId) -> bool {
        let pool = &self.universe.pool;
        let z = pool.base(a);
        z == pool.base(b) && self.rel[z].get(self.pos[a.index()], self.pos[b.index()])
    }

    pub fn in_universe(&self, t: TreeId) -> bool {
        t.index() < self.pos.len()
    }

    /// Number of related ordered pairs in the whole universe.
    pub fn pair_count(&self) -> usize {
        self.rel
            .iter()
            .map(|m| m.bits.iter().map(|w| w.count_ones() as usize).sum::<usize>())
            .sum()
    }
}

/// `w ~ w`, for a term of the universe.
pub fn well_defined(rel: &PerRel, w: TreeId) -> Result<bool> {
    if !rel.in_universe(w) {
        return Err(Error::malformed("term outside the saturated universe"));
    }
    Ok(rel.related(w, w))
}

fn head_of(universe: &Levels, t: TreeId) -> (usize, usize) {
    match universe.pool.node(t).head {
        Head::Cover { cons, cover } => (cons, cover),
        _ => unreachable!("terms are built from covers"),
    }
}

/// The least relation on `universe` closed under the four rules and
/// symmetry.
pub fn saturate(p: &PolyRed, cb: &TwoCoverBase, universe: Levels) -> PerRel {
    let mut pos = vec![0; universe.pool.len()];
    for fibre in &universe.fibres {
        for (k, &t) in fibre.iter().enumerate() {
            pos[t.index()] = k;
        }
    }
    let rel: Vec<BitMatrix> = universe
        .fibres
        .iter()
        .map(|f| BitMatrix::new(f.len()))
        .collect();
    let mut out = PerRel { universe, pos, rel };

    // terms of each fibre grouped by constructor, for extensionality
    let groups: Vec<Vec<Vec<TreeId>>> = out
        .universe
        .fibres
        .iter()
        .map(|fibre| {
            let mut by_cons: HashMap<usize, Vec<TreeId>> = HashMap::new();
            for &t in fibre {
                by_cons.entry(head_of(&out.universe, t).0).or_default().push(t);
            }
            let mut g: Vec<(usize, Vec<TreeId>)> = by_cons.into_iter().collect();
            g.sort();
            g.into_iter().map(|(_, v)| v).collect()
        })
        .collect();

    let through = |rel: &PerRel, js: &[PairCover], a0: &[TreeId], a1: &[TreeId]| {
        js.iter()
            .any(|b| b.t.iter().all(|&(l, r)| rel.related(a0[l], a1[r])))
    };

    loop {
        let mut changed = false;
        for (z, fibre_groups) in groups.iter().enumerate() {
            for group in fibre_groups {
                for (k, &w0) in group.iter().enumerate() {
                    for &w1 in &group[k..] {
                        if out.related(w0, w1) {
                            continue;
                        }
                        let (y, i0) = head_of(&out.universe, w0);
                        let (_, i1) = head_of(&out.universe, w1);
                        let a0 = &out.universe.pool.node(w0).children;
                        let a1 = &out.universe.pool.node(w1).children;
                        let fires = through(&out, &cb.per[y].pairs[i0][i1], a0, a1)
                            || through(&out, &cb.per[y].pairs[i1][i0], a1, a0);
                        if fires {
                            let (m, n) = (out.pos[w0.index()], out.pos[w1.index()]);
                            changed |= out.rel[z].set_sym(m, n);
                        }
                    }
                }
            }
            for &w in &out.universe.fibres[z] {
                let (y, i) = head_of(&out.universe, w);
                let alpha = out.universe.pool.node(w).children.clone();
                let xs = p.arity_of(y);
                let reducing: Vec<usize> = cb.per[y].covers[i]
                    .q
                    .iter()
                    .enumerate()
                    .filter(|&(_, &k)| p.has_reduction(xs[k]))
                    .map(|(a, _)| a)
                    .collect();
                if reducing.is_empty() || !through(&out, &cb.per[y].pairs[i][i], &alpha, &alpha) {
                    continue;
                }
                for a in reducing {
                    let (m, n) = (out.pos[w.index()], out.pos[alpha[a].index()]);
                    changed |= out.rel[z].set_sym(m, n);
                }
            }
        }
        for m in &mut out.rel {
            changed |= m.transitive_closure();
        }
        if !changed {
            return out;
        }
    }
}

/// The quotient of well defined terms of height at most `depth`.
#[derive(Clone, Debug)]
pub struct PerQuotient {
    pub rel: PerRel,
    /// Height bound of the carrier terms; the universe has one more layer.
    pub depth: usize,
    pub status: Status,
    pub carrier: Fam,
    /// Members of each class, least first; the first is the representative.
    pub classes: Vec<Vec<TreeId>>,
    class_of: HashMap<TreeId, usize>,
    /// The algebra structure, present when the quotient is finite.
    pub algebra: Option<TableAlgebra>,
}

impl PerQuotient {
    pub fn class_of(&self, t: TreeId) -> Option<usize> {
        self.class_of.get(&t).copied()
    }

    pub fn rep(&self, class: usize) -> TreeId {
        self.classes[class][0]
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }
}

/// Iterative deepening: saturate the terms of height `d + 1` and stop once
/// every well defined term of that height is related to one of height at
/// most `d`.
pub fn quotient(p: &PolyRed, cb: &TwoCoverBase, budget: Budget) -> Result<PerQuotient> {
    let mut last = None;
    for d in 0..=budget.max_depth {
        let universe = enumerate_terms(
            p,
            cb,
            Budget {
                max_depth: d + 1,
                ..budget
            },
        )?;
        if matches!(universe.status, Status::Truncated { depth } if depth <= d) {
            break;
        }
        let rel = saturate(p, cb, universe);
        let closed = rel.universe.fibres.iter().flatten().all(|&t| {
            rel.universe.pool.height(t) <= d
                || !rel.related(t, t)
                || rel.universe.fibres[rel.universe.pool.base(t)]
                    .iter()
                    .any(|&s| rel.universe.pool.height(s) <= d && rel.related(s, t))
        });
        let status = if closed {
            Status::Finite
        } else {
            Status::Truncated { depth: d }
        };
        let q = classes(p, rel, d, status)?;
        if closed {
            return finish(p, cb, q, budget);
        }
        last = Some(q);
    }
    match last {
        Some(q) => Ok(q),
        None => {
            let universe = enumerate_terms(p, cb, Budget { max_depth: 0, ..budget })?;
            let rel = saturate(p, cb, universe);
            classes(p, rel, 0, Status::Truncated { depth: 0 })
        }
    }
}

fn classes(p: &PolyRed, rel: PerRel, depth: usize, status: Status) -> Result<PerQuotient> {
    let mut carrier = Fam::empty(p.base().len());
    let mut classes: Vec<Vec<TreeId>> = Vec::new();
    let mut class_of = HashMap::new();
    for z in 0..p.base().len() {
        for &t in &rel.universe.fibres[z] {
            if rel.universe.pool.height(t) > depth || !rel.related(t, t) || class_of.contains_key(&t) {
                continue;
            }
            let members: Vec<TreeId> = rel.universe.fibres[z]
                .iter()
                .copied()
                .filter(|&s| rel.universe.pool.height(s) <= depth && rel.related(t, s))
                .collect();
            let c = carrier.push(format!("[{}]", rel.universe.pool.render(t, p)), z)?;
            for &s in &members {
                class_of.insert(s, c);
            }
            classes.push(members);
        }
    }
    Ok(PerQuotient {
        rel,
        depth,
        status,
        carrier,
        classes,
        class_of,
        algebra: None,
    })
}

/// Class of an arbitrary universe term through any related carrier term.
fn class_in_universe(q: &PerQuotient, t: TreeId) -> Option<usize> {
    if let Some(c) = q.class_of(t) {
        return Some(c);
    }
    let z = q.rel.universe.pool.base(t);
    q.carrier
        .fibre(z)
        .iter()
        .copied()
        .find(|&c| q.rel.related(q.rep(c), t))
}

fn finish(p: &PolyRed, cb: &TwoCoverBase, mut q: PerQuotient, budget: Budget) -> Result<PerQuotient> {
    let mut alg = TableAlgebra::new(q.carrier.clone());
    let mut checks = 0usize;
    let cap = budget.max_count;
    for y in 0..p.constructors().len() {
        let xs = p.arity_of(y);
        let choices: Vec<Vec<usize>> = xs
            .iter()
            .map(|&x| q.carrier.fibre(p.reindex(x)).to_vec())
            .collect();
        for alpha0 in Assignments::new(&choices) {
            let mut value = None;
            for (i, cover) in cb.per[y].covers.iter().enumerate() {
                let reps: Vec<TreeId> = cover.q.iter().map(|&k| q.rep(alpha0[k])).collect();
                let mut candidates = vec![reps.clone()];
                for (a, &k) in cover.q.iter().enumerate() {
                    for &alt in q.classes[alpha0[k]].iter().skip(1) {
                        if checks + candidates.len() >= cap {
                            break;
                        }
                        let mut c = reps.clone();
                        c[a] = alt;
                        candidates.push(c);
                    }
                }
                for children in candidates {
                    checks += 1;
                    let node = crate::poly::Node {
                        head: Head::Cover { cons: y, cover: i },
                        children,
                    };
                    let class = q
                        .rel
                        .universe
                        .pool
                        .get(&node)
                        .and_then(|t| class_in_universe(&q, t))
                        .ok_or_else(|| {
                            Error::IllDefined(format!(
                                "no class for an application of `{}`",
                                p.cons_name(y)
                            ))
                        })?;
                    match value {
                        None => value = Some(class),
                        Some(v) if v != class => {
                            return Err(Error::IllDefined(format!(
                                "`{}` depends on the choice of representatives",
                                p.cons_name(y)
                            )))
                        }
                        _ => {}
                    }
                }
            }
            alg.set(y, alpha0, value.expect("at least one cover"));
        }
    }
    q.algebra = Some(alg);
    Ok(q)
}

/// The map out of a finite quotient into `t`, by recursion on terms.
pub fn per_initial_hom(
    p: &PolyRed,
    cb: &TwoCoverBase,
    q: &PerQuotient,
    t: &dyn Algebra,
) -> Result<Vec<usize>> {
    if !q.status.is_finite() {
        return Err(Error::NotFinite(q.depth));
    }
    let pool = &q.rel.universe.pool;
    let mut terms: Vec<TreeId> = q.classes.iter().flatten().copied().collect();
    terms.sort_by_key(|&w| (pool.height(w), w));
    let mut image: HashMap<TreeId, usize> = HashMap::new();
    for w in terms {
        let (y, i) = head_of(&q.rel.universe, w);
        let alpha = &pool.node(w).children;
        let xs = p.arity_of(y);
        let mut tilde = vec![None; xs.len()];
        for (a, &k) in cb.per[y].covers[i].q.iter().enumerate() {
            let v = *image.get(&alpha[a]).ok_or_else(|| {
                Error::IllDefined("child of a well defined term is not well defined".into())
            })?;
            match tilde[k] {
                None => tilde[k] = Some(v),
                Some(u) if u != v => {
                    return Err(Error::IllDefined(format!(
                        "argument `{}` of `{}` depends on the cover point",
                        p.arity_name(xs[k]),
                        p.cons_name(y)
                    )))
                }
                _ => {}
            }
        }
        let args: Vec<usize> = tilde.into_iter().map(|v| v.expect("cover is onto")).collect();
        let v = t.apply(y, &args).ok_or_else(|| {
            Error::NotAnAlgebra(format!("operation undefined at `{}`", p.cons_name(y)))
        })?;
        image.insert(w, v);
    }
    let mut out = Vec::with_capacity(q.len());
    for (c, members) in q.classes.iter().enumerate() {
        let v = image[&members[0]];
        if members.iter().any(|m| image[m] != v) {
            return Err(Error::IllDefined(format!(
                "map not constant on class `{}`",
                q.carrier.name(c)
            )));
        }
        out.push(v);
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CrossCheck {
    /// Mutually inverse structure-preserving maps; `to_classical[c]` is
    /// the image of class `c`.
    Agree {
        to_classical: Vec<usize>,
        names: Vec<(String, String)>,
    },
    Disagree(String),
    Inconclusive(String),
}

impl CrossCheck {
    pub fn passes(&self) -> bool {
        matches!(self, CrossCheck::Agree { .. })
    }
}

impl fmt::Display for CrossCheck {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CrossCheck::Agree { to_classical, .. } => {
                write!(f, "carriers agree: {} elements", to_classical.len())
            }
            CrossCheck::Disagree(why) => write!(f, "carriers disagree: {why}"),
            CrossCheck::Inconclusive(why) => write!(f, "inconclusive: {why}"),
        }
    }
}

/// Compare the quotient with `W^{C0}` through the two initial maps.
pub fn crosscheck_with(
    p: &PolyRed,
    cb: &TwoCoverBase,
    q: &PerQuotient,
    init: &ClassicalInitial,
) -> Result<CrossCheck> {
    let (Some(d), Some(qa)) = (&init.algebra, &q.algebra) else {
        let which = if init.algebra.is_none() { "classical" } else { "per" };
        return Ok(CrossCheck::Inconclusive(format!("{which} engine truncated")));
    };
    let there = match per_initial_hom(p, cb, q, d) {
        Ok(m) => m,
        Err(e) => return Ok(CrossCheck::Disagree(e.to_string())),
    };
    let back = match classical::initial_hom(p, &init.wc, qa) {
        Ok(m) => m,
        Err(e) => return Ok(CrossCheck::Disagree(e.to_string())),
    };
    if there.len() != back.len() {
        return Ok(CrossCheck::Disagree(format!(
            "{} classes against {} elements",
            there.len(),
            back.len()
        )));
    }
    let inverse = (0..there.len()).all(|c| back[there[c]] == c)
        && (0..back.len()).all(|e| there[back[e]] == e);
    if !inverse {
        return Ok(CrossCheck::Disagree("initial maps are not mutually inverse".into()));
    }
    let names = there
        .iter()
        .enumerate()
        .map(|(c, &e)| {
            (
                q.carrier.name(c).to_string(),
                init.wc.carrier().name(e).to_string(),
            )
        })
        .collect();
    Ok(CrossCheck::Agree {
        to_classical: there,
        names,
    })
}

pub fn crosscheck(p: &PolyRed, cb: &TwoCoverBase, budget: Budget) -> Result<CrossCheck> {
    let p = p.normalize_reductions();
    let init = classical::build_initial(&p, budget)?;
    let q = quotient(&p, cb, budget)?;
    crosscheck_with(&p, cb, &q, &init)
}
