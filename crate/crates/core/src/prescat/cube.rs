//! A truncated cube category over at most two names, with the interval,
//! the face lattice, the point `⊤: 1 -> F` and the subobject of `F × 𝕀`
//! cut out by `δ0` and `⊤`.
//!
//! Free de Morgan algebras are represented by truth tables over the
//! four-element de Morgan algebra `{0, n, b, 1}`, where `n` and `b` are
//! incomparable and fixed by negation; two terms are equal exactly when
//! their tables agree.

use std::collections::HashMap;
use std::sync::Arc;

use super::{check_diagram_capped, check_natural, pushout, DiagMap, Diagram, FinCat, LawReport, Morphism};
use crate::error::{Error, Result};
use crate::fin::Fin;

/// Elements of the four-element de Morgan algebra: `0`, `n`, `b`, `1`.
pub mod dm4 {
    pub const ZERO: u8 = 0;
    pub const N: u8 = 1;
    pub const B: u8 = 2;
    pub const ONE: u8 = 3;

    pub fn neg(x: u8) -> u8 {
        match x {
            ZERO => ONE,
            ONE => ZERO,
            other => other,
        }
    }

    pub fn meet(x: u8, y: u8) -> u8 {
        match (x, y) {
            _ if x == y => x,
            (ONE, o) | (o, ONE) => o,
            _ => ZERO,
        }
    }

    pub fn join(x: u8, y: u8) -> u8 {
        neg(meet(neg(x), neg(y)))
    }
}

/// The free de Morgan algebra on a list of generators.
#[derive(Clone, Debug)]
pub struct DeMorgan {
    vars: Vec<String>,
    tables: Vec<Vec<u8>>,
    names: Vec<String>,
    index: HashMap<Vec<u8>, usize>,
}

fn wrap(name: &str) -> String {
    if name.contains('∧') || name.contains('∨') {
        format!("({name})")
    } else {
        name.to_string()
    }
}

impl DeMorgan {
    /// Closure of `0`, `1` and the generators under `¬`, `∧`, `∨`, in
    /// breadth-first order; each element is named by its first term.
    pub fn generate(vars: &[String]) -> Self {
        let k = vars.len();
        let width = 4usize.pow(k as u32);
        let digit = |v: usize, i: usize| ((v / 4usize.pow(i as u32)) % 4) as u8;
        let mut dm = DeMorgan {
            vars: vars.to_vec(),
            tables: Vec::new(),
            names: Vec::new(),
            index: HashMap::new(),
        };
        dm.add(vec![dm4::ZERO; width], "0".into());
        dm.add(vec![dm4::ONE; width], "1".into());
        for (i, v) in vars.iter().enumerate() {
            dm.add((0..width).map(|val| digit(val, i)).collect(), v.clone());
        }
        let mut i = 0;
        while i < dm.tables.len() {
            let neg: Vec<u8> = dm.tables[i].iter().map(|&x| dm4::neg(x)).collect();
            let name = if dm.names[i].contains('∧') || dm.names[i].contains('∨') {
                format!("¬({})", dm.names[i])
            } else {
                format!("¬{}", dm.names[i])
            };
            dm.add(neg, name);
            for j in 0..=i {
                let (a, b) = (&dm.tables[j], &dm.tables[i]);
                let meet: Vec<u8> = a.iter().zip(b).map(|(&x, &y)| dm4::meet(x, y)).collect();
                let join: Vec<u8> = a.iter().zip(b).map(|(&x, &y)| dm4::join(x, y)).collect();
                let (nj, ni) = (wrap(&dm.names[j]), wrap(&dm.names[i]));
                dm.add(meet, format!("{nj}∧{ni}"));
                dm.add(join, format!("{nj}∨{ni}"));
            }
            i += 1;
        }
        dm
    }

    fn add(&mut self, table: Vec<u8>, name: String) {
        if !self.index.contains_key(&table) {
            self.index.insert(table.clone(), self.tables.len());
            self.tables.push(table);
            self.names.push(name);
        }
    }

    pub fn len(&self) -> usize {
        self.tables.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tables.is_empty()
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn name(&self, e: usize) -> &str {
        &self.names[e]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn table(&self, e: usize) -> &[u8] {
        &self.tables[e]
    }

    /// The element with this truth table, if any.
    pub fn find(&self, table: &[u8]) -> Option<usize> {
        self.index.get(table).copied()
    }

    pub const ZERO: usize = 0;
    pub const ONE: usize = 1;

    pub fn generator(&self, i: usize) -> usize {
        2 + i
    }

    pub fn eval(&self, e: usize, valuation: &[u8]) -> u8 {
        let v: usize = valuation
            .iter()
            .enumerate()
            .map(|(i, &x)| x as usize * 4usize.pow(i as u32))
            .sum();
        self.tables[e][v]
    }

    /// `e` with each generator `i` replaced by `images[i] ∈ target`.
    pub fn substitute(&self, e: usize, images: &[usize], target: &DeMorgan) -> usize {
        let width = 4usize.pow(target.vars.len() as u32);
        let table: Vec<u8> = (0..width)
            .map(|v| {
                let u: usize = images
                    .iter()
                    .enumerate()
                    .map(|(i, &img)| target.tables[img][v] as usize * 4usize.pow(i as u32))
                    .sum();
                self.tables[e][u]
            })
            .collect();
        target.find(&table).expect("closed under substitution")
    }
}

#[derive(Debug)]
struct CubeData {
    /// Generator indices of each object.
    subsets: Vec<Vec<usize>>,
    dm: Vec<DeMorgan>,
    /// Images of each morphism's domain generators, in the codomain algebra.
    tuples: Vec<Vec<usize>>,
    lookup: HashMap<(usize, usize, Vec<usize>), usize>,
}

impl CubeData {
    fn compose(&self, g: usize, f: usize, mors: &[(usize, usize)]) -> usize {
        let (a, b) = mors[f];
        let c = mors[g].1;
        let images: Vec<usize> = self.tuples[f]
            .iter()
            .map(|&phi| self.dm[b].substitute(phi, &self.tuples[g], &self.dm[c]))
            .collect();
        self.lookup[&(a, c, images)]
    }
}

/// The truncated cube and its structure.
#[derive(Clone, Debug)]
pub struct Cube {
    pub n: usize,
    pub cat: Arc<FinCat>,
    data: Arc<CubeData>,
    /// `𝕀(A) = dM(A)`, acting by substitution.
    pub interval: Diagram,
    /// `F(A) = dM(A)/∼`.
    pub faces: Diagram,
    /// The quotient `𝕀 -> F`.
    pub quotient: DiagMap,
    /// `⊤: 1 -> F`, as the class of `1` at each object.
    pub top: DiagMap,
    /// The pushout of `𝕀 <-δ0- 1 -⊤-> F`.
    pub leibniz: Diagram,
    /// Its map into `F × 𝕀`, as pairs (class, element) per object.
    pub leibniz_pairs: Vec<Vec<(usize, usize)>>,
}

/// Above this many composable pairs the functor-law check samples pairs.
pub const STRUCTURE_PAIR_CAP: usize = 200_000;

/// Whether [`Cube::check_structure`] covers every composable pair.
pub fn structure_check_is_exhaustive(cat: &FinCat) -> bool {
    let pairs: usize = (0..cat.morphism_count()).map(|f| cat.outgoing(cat.cod(f)).len()).sum();
    pairs <= STRUCTURE_PAIR_CAP
}

pub fn generator_names(n: usize) -> Vec<String> {
    if n == 1 {
        vec!["a".into()]
    } else {
        (1..=n).map(|i| format!("a{i}")).collect()
    }
}

fn tuples_of(len: usize, base: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|t| {
                (0..base).map(move |e| {
                    let mut t = t.clone();
                    t.push(e);
                    t
                })
            })
            .collect();
    }
    out
}

/// The cube category on subsets of `n ≤ 2` names: a morphism `A -> B` is
/// a function `A -> dM(B)`, composed by substitution.
pub fn cube_category(n: usize) -> Result<(Arc<FinCat>, Vec<DeMorgan>)> {
    let (cat, data) = cube_data(n)?;
    Ok((cat, data.dm.clone()))
}

fn cube_data(n: usize) -> Result<(Arc<FinCat>, Arc<CubeData>)> {
    if n > 2 {
        return Err(Error::Unsupported(format!(
            "cube on {n} names: only 1 or 2 are generated"
        )));
    }
    let gens = generator_names(n);
    let subsets: Vec<Vec<usize>> = (0..1usize << n)
        .map(|mask| (0..n).filter(|i| mask & (1 << i) != 0).collect())
        .collect();
    let object_name = |s: &[usize]| {
        if s.is_empty() {
            "∅".to_string()
        } else {
            let inner: Vec<&str> = s.iter().map(|&i| gens[i].as_str()).collect();
            format!("{{{}}}", inner.join(","))
        }
    };
    let objects = Fin::new(subsets.iter().map(|s| object_name(s)))?;
    let dm: Vec<DeMorgan> = subsets
        .iter()
        .map(|s| DeMorgan::generate(&s.iter().map(|&i| gens[i].clone()).collect::<Vec<_>>()))
        .collect();
    let mut mors = Vec::new();
    let mut ends = Vec::new();
    let mut tuples = Vec::new();
    let mut lookup = HashMap::new();
    let mut identities = vec![0; subsets.len()];
    for (a, sa) in subsets.iter().enumerate() {
        for (b, _) in subsets.iter().enumerate() {
            for t in tuples_of(sa.len(), dm[b].len()) {
                let k = mors.len();
                let body: Vec<String> = sa
                    .iter()
                    .zip(&t)
                    .map(|(&g, &e)| format!("{}↦{}", gens[g], dm[b].name(e)))
                    .collect();
                let ident = a == b && t.iter().enumerate().all(|(i, &e)| e == dm[b].generator(i));
                if ident {
                    identities[a] = k;
                }
                mors.push(Morphism {
                    name: format!("{}→{}:({})", objects.name(a), objects.name(b), body.join(",")),
                    dom: a,
                    cod: b,
                });
                ends.push((a, b));
                lookup.insert((a, b, t.clone()), k);
                tuples.push(t);
            }
        }
    }
    let data = Arc::new(CubeData {
        subsets,
        dm,
        tuples,
        lookup,
    });
    let rule_data = data.clone();
    let ends = Arc::new(ends);
    let cat = FinCat::from_rule(
        objects,
        mors,
        identities,
        Arc::new(move |g, f| rule_data.compose(g, f, &ends)),
    )?;
    Ok((Arc::new(cat), data))
}

/// Builds the cube on `n ∈ {1, 2}` names with `𝕀`, `F`, `⊤` and the
/// `δ0`/`⊤` subobject of `F × 𝕀`.
pub fn gen_truncated_cube(n: usize) -> Result<Cube> {
    if n == 0 {
        return Err(Error::Unsupported("cube on no names".into()));
    }
    let (cat, data) = cube_data(n)?;
    let objs = cat.object_count();
    let dm_fins: Vec<Fin> = data
        .dm
        .iter()
        .map(|d| Fin::new(d.names().iter().cloned()))
        .collect::<Result<_>>()?;
    let interval = Diagram::from_fn(cat.clone(), dm_fins, |m, e| {
        let (a, b) = (cat.dom(m), cat.cod(m));
        data.dm[a].substitute(e, &data.tuples[m], &data.dm[b])
    });

    // [φ] ∼ [ψ] iff θφ ≡ 1 ⇔ θψ ≡ 1 for every θ out of A
    let mut class_of = Vec::with_capacity(objs);
    let mut reps = Vec::with_capacity(objs);
    for a in 0..objs {
        let mut seen: HashMap<Vec<bool>, usize> = HashMap::new();
        let mut cls = Vec::new();
        let mut rs = Vec::new();
        for phi in 0..data.dm[a].len() {
            let sig: Vec<bool> = cat
                .outgoing(a)
                .iter()
                .map(|&th| interval.act(th, phi) == DeMorgan::ONE)
                .collect();
            let next = rs.len();
            let c = *seen.entry(sig).or_insert(next);
            if c == next {
                rs.push(phi);
            }
            cls.push(c);
        }
        class_of.push(cls);
        reps.push(rs);
    }
    let face_fins: Vec<Fin> = (0..objs)
        .map(|a| Fin::new(reps[a].iter().map(|&r| format!("[{}]", data.dm[a].name(r)))))
        .collect::<Result<_>>()?;
    for m in 0..cat.morphism_count() {
        let (a, b) = (cat.dom(m), cat.cod(m));
        for phi in 0..data.dm[a].len() {
            let via_rep = class_of[b][interval.act(m, reps[a][class_of[a][phi]])];
            if class_of[b][interval.act(m, phi)] != via_rep {
                return Err(Error::IllDefined(format!(
                    "face action of `{}` on `{}`",
                    cat.morphism(m).name,
                    data.dm[a].name(phi)
                )));
            }
        }
    }
    let faces = Diagram::from_fn(cat.clone(), face_fins, |m, c| {
        let (a, b) = (cat.dom(m), cat.cod(m));
        class_of[b][interval.act(m, reps[a][c])]
    });
    let quotient = DiagMap { tables: class_of.clone() };
    let one = Diagram::terminal(cat.clone());
    let top = DiagMap {
        tables: (0..objs).map(|a| vec![class_of[a][DeMorgan::ONE]]).collect(),
    };
    let delta0 = DiagMap {
        tables: vec![vec![DeMorgan::ZERO]; objs],
    };

    let (leibniz, inl, inr) = pushout(&one, &interval, &faces, &delta0, &top)?;
    let mut leibniz_pairs: Vec<Vec<Option<(usize, usize)>>> =
        leibniz.components.iter().map(|c| vec![None; c.len()]).collect();
    for a in 0..objs {
        let mut put = |e: usize, pair: (usize, usize)| match leibniz_pairs[a][e] {
            Some(old) if old != pair => Err(Error::IllDefined("induced map out of the pushout".into())),
            _ => {
                leibniz_pairs[a][e] = Some(pair);
                Ok(())
            }
        };
        for psi in 0..data.dm[a].len() {
            put(inl.apply(a, psi), (top.apply(a, 0), psi))?;
        }
        for c in 0..reps[a].len() {
            put(inr.apply(a, c), (c, DeMorgan::ZERO))?;
        }
    }
    let leibniz_pairs = leibniz_pairs
        .into_iter()
        .map(|v| v.into_iter().map(|p| p.expect("pushout is jointly surjective")).collect())
        .collect();
    Ok(Cube {
        n,
        cat,
        data,
        interval,
        faces,
        quotient,
        top,
        leibniz,
        leibniz_pairs,
    })
}

impl Cube {
    pub fn dm(&self, obj: usize) -> &DeMorgan {
        &self.data.dm[obj]
    }

    pub fn generators_of(&self, obj: usize) -> &[usize] {
        &self.data.subsets[obj]
    }

    /// Pairs `([φ], ψ)` with `φ ≡ 1` or `ψ ≡ 0` at `obj`, in product order.
    pub fn pointwise_leibniz(&self, obj: usize) -> Vec<(usize, usize)> {
        let one = self.top.apply(obj, 0);
        let mut out = Vec::new();
        for c in 0..self.faces.components[obj].len() {
            for psi in 0..self.interval.components[obj].len() {
                if c == one || psi == DeMorgan::ZERO {
                    out.push((c, psi));
                }
            }
        }
        out
    }

    /// The map from the pushout into `F × 𝕀` is natural, injective, and
    /// its image is the pointwise description at every object.
    pub fn check_leibniz(&self) -> LawReport {
        let mut r = LawReport::default();
        for a in 0..self.cat.object_count() {
            r.checked += 1;
            let mut image = self.leibniz_pairs[a].clone();
            image.sort_unstable();
            if image.windows(2).any(|w| w[0] == w[1]) {
                r.fail(format!("not injective at `{}`", self.cat.objects().name(a)));
            }
            if image != self.pointwise_leibniz(a) {
                r.fail(format!("image differs at `{}`", self.cat.objects().name(a)));
            }
        }
        for m in 0..self.cat.morphism_count() {
            let (a, b) = (self.cat.dom(m), self.cat.cod(m));
            for (e, &(c, psi)) in self.leibniz_pairs[a].iter().enumerate() {
                r.checked += 1;
                let moved = self.leibniz_pairs[b][self.leibniz.act(m, e)];
                if moved != (self.faces.act(m, c), self.interval.act(m, psi)) {
                    r.fail(format!("square for `{}` fails", self.cat.morphism(m).name));
                    break;
                }
            }
        }
        r
    }

    /// Functor laws for `𝕀`, `F` and the pushout, naturality of the quotient
    /// and of `⊤`.
    pub fn check_structure(&self) -> LawReport {
        let mut r = LawReport::default();
        let one = Diagram::terminal(self.cat.clone());
        for rep in [
            check_diagram_capped(&self.interval, STRUCTURE_PAIR_CAP),
            check_diagram_capped(&self.faces, STRUCTURE_PAIR_CAP),
            check_diagram_capped(&self.leibniz, STRUCTURE_PAIR_CAP),
            check_natural(&self.quotient, &self.interval, &self.faces),
            check_natural(&self.top, &one, &self.faces),
        ] {
            r.checked += rep.checked;
            r.violations.extend(rep.violations);
        }
        r
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::prescat::check_category;

    /// de Morgan terms, evaluated directly in the four-element algebra
    #[derive(Clone, Debug)]
    enum Term {
        Zero,
        One,
        Var(usize),
        Neg(Box<Term>),
        Meet(Box<Term>, Box<Term>),
        Join(Box<Term>, Box<Term>),
    }

    fn eval(t: &Term, v: &[u8]) -> u8 {
        match t {
            Term::Zero => 0,
            Term::One => 3,
            Term::Var(i) => v[*i],
            Term::Neg(a) => match eval(a, v) {
                0 => 3,
                3 => 0,
                x => x,
            },
            Term::Meet(a, b) => {
                let (x, y) = (eval(a, v), eval(b, v));
                // order: 0 < n, b < 1 with n, b incomparable
                if x == y || y == 3 {
                    x
                } else if x == 3 {
                    y
                } else {
                    0
                }
            }
            Term::Join(a, b) => {
                let (x, y) = (eval(a, v), eval(b, v));
                if x == y || y == 0 {
                    x
                } else if x == 0 {
                    y
                } else {
                    3
                }
            }
        }
    }

    fn terms(vars: usize, depth: usize) -> Vec<Term> {
        let mut all = vec![Term::Zero, Term::One];
        all.extend((0..vars).map(Term::Var));
        for _ in 0..depth {
            let prev = all.clone();
            for a in &prev {
                all.push(Term::Neg(Box::new(a.clone())));
                for b in &prev {
                    all.push(Term::Meet(Box::new(a.clone()), Box::new(b.clone())));
                    all.push(Term::Join(Box::new(a.clone()), Box::new(b.clone())));
                }
            }
        }
        all
    }

    fn distinct_tables(vars: usize, depth: usize) -> usize {
        let vals = tuples_of(vars, 4);
        let mut seen: Vec<Vec<u8>> = terms(vars, depth)
            .iter()
            .map(|t| {
                vals.iter()
                    .map(|v| eval(t, &v.iter().map(|&x| x as u8).collect::<Vec<_>>()))
                    .collect()
            })
            .collect();
        seen.sort();
        seen.dedup();
        seen.len()
    }

    #[test]
    fn free_algebra_sizes_match_term_enumeration() {
        let none = DeMorgan::generate(&[]);
        assert_eq!(none.len(), 2);
        assert_eq!(distinct_tables(0, 2), 2);
        let one = DeMorgan::generate(&["a".into()]);
        assert_eq!(one.len(), 6);
        assert_eq!(distinct_tables(1, 2), 6);
        assert_eq!(one.names(), &["0", "1", "a", "¬a", "a∧¬a", "a∨¬a"]);
    }

    #[test]
    fn two_generators() {
        let two = DeMorgan::generate(&["a1".into(), "a2".into()]);
        assert_eq!(two.len(), 168);
    }

    #[test]
    fn de_morgan_law() {
        let d = DeMorgan::generate(&["a".into()]);
        let a = d.generator(0);
        let na = d.find(&d.table(a).iter().map(|&x| dm4::neg(x)).collect::<Vec<_>>()).unwrap();
        let meet: Vec<u8> = d.table(a).iter().zip(d.table(na)).map(|(&x, &y)| dm4::meet(x, y)).collect();
        let neg_meet: Vec<u8> = meet.iter().map(|&x| dm4::neg(x)).collect();
        assert_eq!(d.name(d.find(&neg_meet).unwrap()), "a∨¬a");
        // not boolean: a ∧ ¬a is not 0
        assert_ne!(d.find(&meet), Some(DeMorgan::ZERO));
        assert_eq!(d.eval(a, &[dm4::B]), dm4::B);
    }

    #[test]
    fn cube_one_passes_category_laws() {
        let (cat, dm) = cube_category(1).unwrap();
        assert_eq!(cat.morphism_count(), 1 + 1 + 2 + 6);
        assert_eq!(dm.iter().map(DeMorgan::len).collect::<Vec<_>>(), vec![2, 6]);
        let rep = check_category(&cat);
        assert!(rep.passes(), "{rep}");
    }

    #[test]
    fn cube_two_counts() {
        let (cat, dm) = cube_category(2).unwrap();
        assert_eq!(dm.iter().map(DeMorgan::len).collect::<Vec<_>>(), vec![2, 6, 6, 168]);
        assert_eq!(cat.morphism_count(), 28_668);
        // a swap composed with itself is the identity
        let id = cat.identity(3);
        let swap = cat
            .hom(3, 3)
            .iter()
            .copied()
            .find(|&m| cat.morphism(m).name == "{a1,a2}→{a1,a2}:(a1↦a2,a2↦a1)")
            .unwrap();
        assert_eq!(cat.compose(swap, swap), Some(id));
        assert!(gen_truncated_cube(3).is_err());
    }

    #[test]
    fn faces_and_leibniz_on_one_name() {
        let cube = gen_truncated_cube(1).unwrap();
        assert_eq!(cube.faces.sizes(), vec![2, 5]);
        assert_eq!(
            cube.faces.component(1).names(),
            &["[0]", "[1]", "[a]", "[¬a]", "[a∨¬a]"]
        );
        // a ∧ ¬a is identified with 0
        assert_eq!(cube.quotient.apply(1, 4), cube.quotient.apply(1, 0));
        assert_eq!(cube.leibniz.sizes(), vec![3, 10]);
        assert_eq!(cube.pointwise_leibniz(1).len(), 10);
        let rep = cube.check_leibniz();
        assert!(rep.passes(), "{rep}");
        let rep = cube.check_structure();
        assert!(rep.passes(), "{rep}");
    }
}
