//! Finite categories and covariant diagrams of finite sets over them.

pub mod cube;
pub mod json;
mod psh;

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::fin::{Fin, Pushout};

pub use psh::{pi_families, Over, PshPolyRed, PshTarget, Slot};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Morphism {
    pub name: String,
    pub dom: usize,
    pub cod: usize,
}

type ComposeFn = dyn Fn(usize, usize) -> usize + Send + Sync;

#[derive(Clone)]
enum Composition {
    /// Composites `g∘f` of non-identity pairs.
    Table(HashMap<(usize, usize), usize>),
    Rule(Arc<ComposeFn>),
}

impl fmt::Debug for Composition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Composition::Table(t) => write!(f, "Table({} entries)", t.len()),
            Composition::Rule(_) => f.write_str("Rule"),
        }
    }
}

/// A finite category. Identities are ordinary morphisms.
#[derive(Clone, Debug)]
pub struct FinCat {
    objects: Fin,
    mor_names: Fin,
    mors: Vec<Morphism>,
    identities: Vec<usize>,
    outgoing: Vec<Vec<usize>>,
    homs: HashMap<(usize, usize), Vec<usize>>,
    comp: Composition,
}

impl FinCat {
    fn assemble(objects: Fin, mors: Vec<Morphism>, identities: Vec<usize>, comp: Composition) -> Result<Self> {
        let mut mor_names = Fin::default();
        let mut outgoing = vec![Vec::new(); objects.len()];
        let mut homs: HashMap<(usize, usize), Vec<usize>> = HashMap::new();
        for (k, m) in mors.iter().enumerate() {
            if m.dom >= objects.len() || m.cod >= objects.len() {
                return Err(Error::malformed(format!("morphism `{}` has no endpoints", m.name)));
            }
            mor_names.push(m.name.clone())?;
            outgoing[m.dom].push(k);
            homs.entry((m.dom, m.cod)).or_default().push(k);
        }
        Ok(FinCat {
            objects,
            mor_names,
            mors,
            identities,
            outgoing,
            homs,
            comp,
        })
    }

    /// A category from its non-identity morphisms and a composition table
    /// `(g, f) -> g∘f` on them; identities `id_<object>` are added first.
    pub fn from_table<S: Into<String>>(
        objects: impl IntoIterator<Item = S>,
        homs: Vec<(String, usize, usize)>,
        composites: Vec<(usize, usize, usize)>,
    ) -> Result<Self> {
        let objects = Fin::new(objects)?;
        let n = objects.len();
        let mut mors: Vec<Morphism> = (0..n)
            .map(|c| Morphism {
                name: format!("id_{}", objects.name(c)),
                dom: c,
                cod: c,
            })
            .collect();
        mors.extend(homs.into_iter().map(|(name, dom, cod)| Morphism { name, dom, cod }));
        let table = composites
            .into_iter()
            .map(|(g, f, gf)| ((g + n, f + n), gf + n))
            .collect();
        Self::assemble(objects, mors, (0..n).collect(), Composition::Table(table))
    }

    /// A category whose composition is computed on demand.
    pub fn from_rule(
        objects: Fin,
        mors: Vec<Morphism>,
        identities: Vec<usize>,
        rule: Arc<ComposeFn>,
    ) -> Result<Self> {
        Self::assemble(objects, mors, identities, Composition::Rule(rule))
    }

    /// The category with one object and only its identity.
    pub fn trivial() -> Self {
        Self::from_table(["*"], Vec::new(), Vec::new()).expect("trivial category")
    }

    /// Two objects `c`, `d` and one morphism `sigma: c -> d`.
    pub fn arrow() -> Self {
        Self::from_table(["c", "d"], vec![("sigma".into(), 0, 1)], Vec::new()).expect("arrow")
    }

    pub fn objects(&self) -> &Fin {
        &self.objects
    }

    pub fn object_count(&self) -> usize {
        self.objects.len()
    }

    pub fn morphism_count(&self) -> usize {
        self.mors.len()
    }

    pub fn morphism(&self, m: usize) -> &Morphism {
        &self.mors[m]
    }

    pub fn morphisms(&self) -> &[Morphism] {
        &self.mors
    }

    pub fn morphism_index(&self, name: &str) -> Option<usize> {
        self.mor_names.position(name)
    }

    pub fn dom(&self, m: usize) -> usize {
        self.mors[m].dom
    }

    pub fn cod(&self, m: usize) -> usize {
        self.mors[m].cod
    }

    pub fn identity(&self, c: usize) -> usize {
        self.identities[c]
    }

    pub fn is_identity(&self, m: usize) -> bool {
        self.identities[self.mors[m].dom] == m
    }

    /// Morphisms with domain `c`, in declared order.
    pub fn outgoing(&self, c: usize) -> &[usize] {
        &self.outgoing[c]
    }

    pub fn hom(&self, c: usize, d: usize) -> &[usize] {
        self.homs.get(&(c, d)).map(Vec::as_slice).unwrap_or(&[])
    }

    /// `g∘f`, defined when `cod f = dom g`.
    pub fn compose(&self, g: usize, f: usize) -> Option<usize> {
        if self.cod(f) != self.dom(g) {
            return None;
        }
        match &self.comp {
            Composition::Rule(r) => Some(r(g, f)),
            Composition::Table(t) => match t.get(&(g, f)) {
                Some(&gf) => Some(gf),
                None if self.is_identity(g) => Some(f),
                None if self.is_identity(f) => Some(g),
                None => None,
            },
        }
    }

    /// The non-identity composites as `(g, f, g∘f)`, for serialization.
    pub fn composite_table(&self) -> Vec<(usize, usize, usize)> {
        let mut out = Vec::new();
        for f in 0..self.mors.len() {
            if self.is_identity(f) {
                continue;
            }
            for &g in self.outgoing(self.cod(f)) {
                if self.is_identity(g) {
                    continue;
                }
                if let Some(gf) = self.compose(g, f) {
                    out.push((g, f, gf));
                }
            }
        }
        out
    }

    pub fn same(&self, other: &FinCat) -> bool {
        std::ptr::eq(self, other) || (self.objects == other.objects && self.mors == other.mors)
    }
}

/// Law violations found by one of the checkers.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LawReport {
    pub checked: usize,
    pub violations: Vec<String>,
}

impl LawReport {
    pub fn passes(&self) -> bool {
        self.violations.is_empty()
    }

    fn fail(&mut self, msg: String) {
        self.violations.push(msg);
    }
}

impl fmt::Display for LawReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.passes() {
            write!(f, "pass ({} checks)", self.checked)
        } else {
            write!(f, "{} violations: {}", self.violations.len(), self.violations.join("; "))
        }
    }
}

/// Identity and associativity laws on every composable triple.
pub fn check_category(cat: &FinCat) -> LawReport {
    let mut r = LawReport::default();
    let name = |m: usize| cat.morphism(m).name.clone();
    for (c, &id) in cat.identities.iter().enumerate() {
        if cat.dom(id) != c || cat.cod(id) != c {
            r.fail(format!("identity of `{}` has wrong endpoints", cat.objects.name(c)));
        }
    }
    for f in 0..cat.morphism_count() {
        let (a, b) = (cat.dom(f), cat.cod(f));
        r.checked += 2;
        if cat.compose(cat.identity(b), f) != Some(f) || cat.compose(f, cat.identity(a)) != Some(f) {
            r.fail(format!("identity law fails at `{}`", name(f)));
        }
        for &g in cat.outgoing(b) {
            let Some(gf) = cat.compose(g, f) else {
                r.fail(format!("`{}∘{}` undefined", name(g), name(f)));
                continue;
            };
            if cat.dom(gf) != a || cat.cod(gf) != cat.cod(g) {
                r.fail(format!("`{}∘{}` has wrong endpoints", name(g), name(f)));
                continue;
            }
            for &h in cat.outgoing(cat.cod(g)) {
                r.checked += 1;
                let left = cat.compose(h, gf);
                let right = cat.compose(h, g).and_then(|hg| cat.compose(hg, f));
                if left.is_none() || left != right {
                    r.fail(format!(
                        "associativity fails at `{}`, `{}`, `{}`",
                        name(h),
                        name(g),
                        name(f)
                    ));
                }
            }
        }
    }
    r
}

/// A functor into finite sets.
#[derive(Clone, Debug)]
pub struct Diagram {
    pub cat: Arc<FinCat>,
    pub components: Vec<Fin>,
    /// `actions[m][e]` is the image of `e` under morphism `m`.
    pub actions: Vec<Vec<usize>>,
}

impl Diagram {
    /// A diagram from non-identity actions; identities act trivially.
    pub fn new(cat: Arc<FinCat>, components: Vec<Fin>, actions: Vec<Vec<usize>>) -> Result<Self> {
        if components.len() != cat.object_count() || actions.len() != cat.morphism_count() {
            return Err(Error::ShapeMismatch("diagram does not match its category".into()));
        }
        Ok(Diagram {
            cat,
            components,
            actions,
        })
    }

    /// A diagram whose actions are computed by `act(m, e)`.
    pub fn from_fn(
        cat: Arc<FinCat>,
        components: Vec<Fin>,
        act: impl Fn(usize, usize) -> usize,
    ) -> Self {
        let actions = (0..cat.morphism_count())
            .map(|m| (0..components[cat.dom(m)].len()).map(|e| act(m, e)).collect())
            .collect();
        Diagram {
            cat,
            components,
            actions,
        }
    }

    /// The constant one-point diagram.
    pub fn terminal(cat: Arc<FinCat>) -> Self {
        let components = vec![Fin::new(["*"]).expect("point"); cat.object_count()];
        Diagram::from_fn(cat, components, |_, _| 0)
    }

    pub fn empty(cat: Arc<FinCat>) -> Self {
        let components = vec![Fin::default(); cat.object_count()];
        Diagram::from_fn(cat, components, |_, _| 0)
    }

    pub fn component(&self, c: usize) -> &Fin {
        &self.components[c]
    }

    pub fn act(&self, m: usize, e: usize) -> usize {
        self.actions[m][e]
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.components.iter().map(Fin::len).collect()
    }

    pub fn total_len(&self) -> usize {
        self.components.iter().map(Fin::len).sum()
    }
}

/// Functor laws.
pub fn check_diagram(d: &Diagram) -> LawReport {
    check_diagram_capped(d, usize::MAX)
}

/// Like [`check_diagram`], but when there are more than `max_pairs` composable
/// pairs the composition law is checked on an evenly strided sample of them.
pub fn check_diagram_capped(d: &Diagram, max_pairs: usize) -> LawReport {
    let mut r = LawReport::default();
    let cat = &d.cat;
    for m in 0..cat.morphism_count() {
        let (a, b) = (cat.dom(m), cat.cod(m));
        let table = &d.actions[m];
        r.checked += 1;
        if table.len() != d.components[a].len() || table.iter().any(|&e| e >= d.components[b].len()) {
            r.fail(format!("action of `{}` is not a function", cat.morphism(m).name));
            continue;
        }
        if cat.is_identity(m) && table.iter().enumerate().any(|(e, &v)| e != v) {
            r.fail(format!("identity `{}` acts non-trivially", cat.morphism(m).name));
        }
    }
    if !r.passes() {
        return r;
    }
    let pairs: usize = (0..cat.object_count())
        .map(|c| {
            let incoming = (0..cat.morphism_count()).filter(|&f| cat.cod(f) == c).count();
            incoming * cat.outgoing(c).len()
        })
        .sum();
    let stride = if pairs > max_pairs { pairs.div_ceil(max_pairs.max(1)) } else { 1 };
    let mut seen = 0usize;
    for f in 0..cat.morphism_count() {
        for &g in cat.outgoing(cat.cod(f)) {
            seen += 1;
            if !(seen - 1).is_multiple_of(stride) {
                continue;
            }
            let Some(gf) = cat.compose(g, f) else { continue };
            r.checked += 1;
            let ok = (0..d.components[cat.dom(f)].len())
                .all(|e| d.act(gf, e) == d.act(g, d.act(f, e)));
            if !ok {
                r.fail(format!(
                    "composition law fails at `{}∘{}`",
                    cat.morphism(g).name,
                    cat.morphism(f).name
                ));
            }
        }
    }
    r
}

/// A family of functions between the components of two diagrams.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiagMap {
    pub tables: Vec<Vec<usize>>,
}

impl DiagMap {
    pub fn identity(d: &Diagram) -> Self {
        DiagMap {
            tables: d.components.iter().map(|c| (0..c.len()).collect()).collect(),
        }
    }

    pub fn apply(&self, c: usize, e: usize) -> usize {
        self.tables[c][e]
    }

    pub fn then(&self, other: &DiagMap) -> DiagMap {
        DiagMap {
            tables: self
                .tables
                .iter()
                .zip(&other.tables)
                .map(|(a, b)| a.iter().map(|&e| b[e]).collect())
                .collect(),
        }
    }

    pub fn is_injective(&self) -> bool {
        self.tables.iter().all(|t| {
            let mut seen = t.clone();
            seen.sort_unstable();
            seen.windows(2).all(|w| w[0] != w[1])
        })
    }
}

/// Naturality squares of `m: src -> tgt`.
pub fn check_natural(m: &DiagMap, src: &Diagram, tgt: &Diagram) -> LawReport {
    let mut r = LawReport::default();
    let cat = &src.cat;
    if !cat.same(&tgt.cat) {
        r.fail("diagrams over different categories".into());
        return r;
    }
    for c in 0..cat.object_count() {
        let t = &m.tables[c];
        if t.len() != src.components[c].len() || t.iter().any(|&v| v >= tgt.components[c].len()) {
            r.fail(format!("component at `{}` is not a function", cat.objects().name(c)));
        }
    }
    if !r.passes() {
        return r;
    }
    for s in 0..cat.morphism_count() {
        let (a, b) = (cat.dom(s), cat.cod(s));
        for e in 0..src.components[a].len() {
            r.checked += 1;
            if m.apply(b, src.act(s, e)) != tgt.act(s, m.apply(a, e)) {
                r.fail(format!(
                    "square for `{}` fails at `{}`",
                    cat.morphism(s).name,
                    src.components[a].name(e)
                ));
            }
        }
    }
    r
}

fn require_same(a: &Diagram, b: &Diagram) -> Result<()> {
    if a.cat.same(&b.cat) {
        Ok(())
    } else {
        Err(Error::ShapeMismatch("diagrams over different categories".into()))
    }
}

/// Objectwise disjoint union with its injections. Names are kept unless
/// the two components clash somewhere, in which case they are tagged.
pub fn coproduct(a: &Diagram, b: &Diagram) -> Result<(Diagram, DiagMap, DiagMap)> {
    require_same(a, b)?;
    let cat = a.cat.clone();
    let clash = (0..cat.object_count()).any(|c| {
        a.components[c]
            .names()
            .iter()
            .any(|n| b.components[c].position(n).is_some())
    });
    let mut components = Vec::new();
    for c in 0..cat.object_count() {
        let mut fin = Fin::default();
        for (tag, side) in [("inl", &a.components[c]), ("inr", &b.components[c])] {
            for n in side.names() {
                fin.push(if clash { format!("{tag}.{n}") } else { n.clone() })?;
            }
        }
        components.push(fin);
    }
    let offset: Vec<usize> = a.components.iter().map(Fin::len).collect();
    let d = Diagram::from_fn(cat.clone(), components, |m, e| {
        let la = offset[cat.dom(m)];
        if e < la {
            a.act(m, e)
        } else {
            offset[cat.cod(m)] + b.act(m, e - la)
        }
    });
    let inl = DiagMap {
        tables: a.components.iter().map(|c| (0..c.len()).collect()).collect(),
    };
    let inr = DiagMap {
        tables: (0..cat.object_count())
            .map(|c| (0..b.components[c].len()).map(|e| offset[c] + e).collect())
            .collect(),
    };
    Ok((d, inl, inr))
}

/// The pushout of `a <- s -> b`, objectwise; classes are named after their
/// least member of `a + b`.
pub fn pushout(
    s: &Diagram,
    a: &Diagram,
    b: &Diagram,
    to_a: &DiagMap,
    to_b: &DiagMap,
) -> Result<(Diagram, DiagMap, DiagMap)> {
    require_same(s, a)?;
    require_same(s, b)?;
    let cat = s.cat.clone();
    let (sum, _, _) = coproduct(a, b)?;
    let pushouts: Vec<Pushout> = (0..cat.object_count())
        .map(|c| Pushout::new(a.components[c].len(), b.components[c].len(), &to_a.tables[c], &to_b.tables[c]))
        .collect();
    let mut components = Vec::new();
    for (c, po) in pushouts.iter().enumerate() {
        let names = po
            .quotient
            .reps
            .iter()
            .map(|&r| sum.components[c].name(r).to_string());
        components.push(Fin::new(names)?);
    }
    let la: Vec<usize> = a.components.iter().map(Fin::len).collect();
    let d = Diagram::from_fn(cat.clone(), components, |m, e| {
        let (c, c2) = (cat.dom(m), cat.cod(m));
        let rep = pushouts[c].quotient.reps[e];
        if rep < la[c] {
            pushouts[c2].inl(a.act(m, rep))
        } else {
            pushouts[c2].inr(b.act(m, rep - la[c]))
        }
    });
    let inl = DiagMap {
        tables: (0..cat.object_count())
            .map(|c| (0..la[c]).map(|e| pushouts[c].inl(e)).collect())
            .collect(),
    };
    let inr = DiagMap {
        tables: (0..cat.object_count())
            .map(|c| (0..b.components[c].len()).map(|e| pushouts[c].inr(e)).collect())
            .collect(),
    };
    Ok((d, inl, inr))
}

/// The pullback of `a -> t <- b`, objectwise, with its projections.
pub fn pullback(
    a: &Diagram,
    b: &Diagram,
    f: &DiagMap,
    g: &DiagMap,
) -> Result<(Diagram, DiagMap, DiagMap)> {
    require_same(a, b)?;
    let cat = a.cat.clone();
    let mut pairs: Vec<Vec<(usize, usize)>> = Vec::new();
    let mut components = Vec::new();
    for c in 0..cat.object_count() {
        let mut ps = Vec::new();
        let mut fin = Fin::default();
        for ea in 0..a.components[c].len() {
            for eb in 0..b.components[c].len() {
                if f.apply(c, ea) == g.apply(c, eb) {
                    fin.push(format!("({},{})", a.components[c].name(ea), b.components[c].name(eb)))?;
                    ps.push((ea, eb));
                }
            }
        }
        pairs.push(ps);
        components.push(fin);
    }
    let index: Vec<HashMap<(usize, usize), usize>> = pairs
        .iter()
        .map(|ps| ps.iter().enumerate().map(|(k, &p)| (p, k)).collect())
        .collect();
    let d = Diagram::from_fn(cat.clone(), components, |m, e| {
        let (ea, eb) = pairs[cat.dom(m)][e];
        index[cat.cod(m)][&(a.act(m, ea), b.act(m, eb))]
    });
    let p0 = DiagMap {
        tables: pairs.iter().map(|ps| ps.iter().map(|p| p.0).collect()).collect(),
    };
    let p1 = DiagMap {
        tables: pairs.iter().map(|ps| ps.iter().map(|p| p.1).collect()).collect(),
    };
    Ok((d, p0, p1))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn arr() -> Arc<FinCat> {
        Arc::new(FinCat::arrow())
    }

    fn fin<const N: usize>(names: [&str; N]) -> Fin {
        Fin::new(names).unwrap()
    }

    /// The representable at `c` on the arrow category.
    fn rep_c(cat: Arc<FinCat>) -> Diagram {
        Diagram::from_fn(cat, vec![fin(["1c"]), fin(["s"])], |_, _| 0)
    }

    #[test]
    fn category_laws() {
        assert!(check_category(&FinCat::trivial()).passes());
        assert!(check_category(&FinCat::arrow()).passes());
        // a non-identity idempotent e with e∘e = e, and a broken version
        let good = FinCat::from_table(["x"], vec![("e".into(), 0, 0)], vec![(0, 0, 0)]).unwrap();
        assert!(check_category(&good).passes());
        let bad = FinCat::from_table(["x"], vec![("e".into(), 0, 0)], vec![]).unwrap();
        assert!(!check_category(&bad).passes());
    }

    #[test]
    fn broken_identity_detected() {
        // g∘f computed as g: breaks σ∘id_c = σ
        let cat = FinCat::from_rule(
            fin(["c", "d"]),
            vec![
                Morphism { name: "id_c".into(), dom: 0, cod: 0 },
                Morphism { name: "id_d".into(), dom: 1, cod: 1 },
                Morphism { name: "sigma".into(), dom: 0, cod: 1 },
            ],
            vec![0, 1],
            Arc::new(|g, _| g),
        )
        .unwrap();
        let rep = check_category(&cat);
        assert!(rep.violations.iter().any(|v| v.contains("identity law fails at `sigma`")));
    }

    #[test]
    fn diagram_and_natural_checks() {
        let cat = arr();
        let d = rep_c(cat.clone());
        assert!(check_diagram(&d).passes());
        let mut bad = d.clone();
        bad.actions[0] = vec![5];
        assert!(!check_diagram(&bad).passes());
        let t = Diagram::terminal(cat.clone());
        let to_t = DiagMap { tables: vec![vec![0], vec![0]] };
        assert!(check_natural(&to_t, &d, &t).passes());
        let two = Diagram::from_fn(cat, vec![fin(["p", "q"]), fin(["p", "q"])], |_, e| e);
        let skew = DiagMap { tables: vec![vec![0], vec![1]] };
        assert!(!check_natural(&skew, &d, &two).passes());
    }

    #[test]
    fn coproduct_is_componentwise_sum() {
        let cat = arr();
        let d = rep_c(cat.clone());
        let t = Diagram::terminal(cat);
        let (s, inl, inr) = coproduct(&d, &t).unwrap();
        assert_eq!(s.sizes(), vec![2, 2]);
        assert!(check_diagram(&s).passes());
        assert!(check_natural(&inl, &d, &s).passes());
        assert!(check_natural(&inr, &t, &s).passes());
    }

    #[test]
    fn pushout_along_identity() {
        let cat = arr();
        let d = rep_c(cat.clone());
        let t = Diagram::terminal(cat);
        let to_t = DiagMap { tables: vec![vec![0], vec![0]] };
        let (p, _, inr) = pushout(&d, &d, &t, &DiagMap::identity(&d), &to_t).unwrap();
        assert_eq!(p.sizes(), t.sizes());
        assert!(check_diagram(&p).passes());
        assert!(check_natural(&inr, &t, &p).passes());
    }

    #[test]
    fn pullback_of_monos_is_intersection() {
        let cat = arr();
        let big = Diagram::from_fn(cat.clone(), vec![fin(["a", "b", "c"]), fin(["a", "b", "c"])], |_, e| e);
        let left = Diagram::from_fn(cat.clone(), vec![fin(["a", "b"]), fin(["a", "b"])], |_, e| e);
        let right = Diagram::from_fn(cat, vec![fin(["b", "c"]), fin(["b", "c"])], |_, e| e);
        let f = DiagMap { tables: vec![vec![0, 1], vec![0, 1]] };
        let g = DiagMap { tables: vec![vec![1, 2], vec![1, 2]] };
        assert!(check_natural(&f, &left, &big).passes());
        let (p, p0, _) = pullback(&left, &right, &f, &g).unwrap();
        assert_eq!(p.sizes(), vec![1, 1]);
        assert_eq!(p.component(0).name(0), "(b,b)");
        assert!(check_diagram(&p).passes());
        assert!(check_natural(&p0, &p, &left).passes());
    }
}
