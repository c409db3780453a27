//! Lifting problems over finite families, step one of the small object
//! argument, and free factorizations obtained as initial algebras.

pub mod json;
pub mod psh;

use std::collections::HashMap;
use std::fmt;

use crate::classical::build_initial;
use crate::error::{Error, Result};
use crate::fin::{Assignments, Fam, Fin, Pushout};
use crate::per::{self, TwoCoverBase};
use crate::poly::{enumerate_trees_within, Algebra, Head, PolyRed};
use crate::prescat::LawReport;
use crate::{Budget, Status};

/// Cap on the number of lifting problems materialized at once.
pub const DEFAULT_PROBLEM_CAP: usize = 200_000;

/// Maps `m_i: U(i) -> V(i)`: `cod` is `V` over `I`, `dom` is `U` over `V`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenFamily {
    pub index: Fin,
    pub cod: Fam,
    pub dom: Fam,
}

impl GenFamily {
    pub fn new(index: Fin, cod: Fam, dom: Fam) -> Result<Self> {
        if cod.base_len() != index.len() || dom.base_len() != cod.len() {
            return Err(Error::ShapeMismatch("generating family is not fibred over its index".into()));
        }
        Ok(GenFamily { index, cod, dom })
    }

    /// `V(i)`.
    pub fn v_of(&self, i: usize) -> &[usize] {
        self.cod.fibre(i)
    }

    /// `U(i)`, listed by `v` then by `u`.
    pub fn u_of(&self, i: usize) -> Vec<usize> {
        self.v_of(i).iter().flat_map(|&v| self.dom.fibre(v).iter().copied()).collect()
    }

    /// `U` as a family over `I`, in the order of [`GenFamily::u_of`].
    pub fn u_over_index(&self) -> Result<Fam> {
        let mut out = Fam::empty(self.index.len());
        for i in 0..self.index.len() {
            for u in self.u_of(i) {
                out.push(self.dom.name(u), i)?;
            }
        }
        Ok(out)
    }

    /// The identity square on this family.
    pub fn as_square(&self) -> SquareGen {
        SquareGen {
            level0: self.clone(),
            level1: self.clone(),
            on_cod: (0..self.cod.len()).collect(),
            on_dom: (0..self.dom.len()).collect(),
        }
    }

    /// Whether every `m_i` is injective (always, as `U` is a family over `V`).
    pub fn is_monic(&self) -> bool {
        true
    }
}

/// A square `U0 -> U1`, `V0 -> V1` over `I` between two generating maps.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SquareGen {
    pub level0: GenFamily,
    pub level1: GenFamily,
    /// `V0 -> V1`.
    pub on_cod: Vec<usize>,
    /// `U0 -> U1`.
    pub on_dom: Vec<usize>,
}

impl SquareGen {
    /// Both levels share the index, the maps respect it, and the square commutes.
    pub fn check(&self) -> Result<()> {
        let (l0, l1) = (&self.level0, &self.level1);
        if l0.index != l1.index {
            return Err(Error::ShapeMismatch("square levels over different indices".into()));
        }
        if self.on_cod.len() != l0.cod.len() || self.on_dom.len() != l0.dom.len() {
            return Err(Error::ShapeMismatch("square maps have the wrong domains".into()));
        }
        for (v0, &v1) in self.on_cod.iter().enumerate() {
            if v1 >= l1.cod.len() || l1.cod.over(v1) != l0.cod.over(v0) {
                return Err(Error::ShapeMismatch(format!("`{}` changes index", l0.cod.name(v0))));
            }
        }
        for (u0, &u1) in self.on_dom.iter().enumerate() {
            if u1 >= l1.dom.len() || l1.dom.over(u1) != self.on_cod[l0.dom.over(u0)] {
                return Err(Error::ShapeMismatch(format!("square does not commute at `{}`", l0.dom.name(u0))));
            }
        }
        Ok(())
    }

    /// Whether `V1 -> I` is a bijection.
    pub fn cod_is_index(&self) -> bool {
        self.level1.cod.fibres().iter().all(|f| f.len() == 1)
    }
}

/// `f: X -> Y` over `J`: `y` is `Y` over `J`, `x` is `X` over `Y`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerticalMap {
    pub index: Fin,
    pub y: Fam,
    pub x: Fam,
}

impl VerticalMap {
    pub fn new(index: Fin, y: Fam, x: Fam) -> Result<Self> {
        if y.base_len() != index.len() || x.base_len() != y.len() {
            return Err(Error::ShapeMismatch("vertical map is not fibred over its index".into()));
        }
        Ok(VerticalMap { index, y, x })
    }

    /// `0 -> 1`.
    pub fn zero_to_one() -> Self {
        let index = Fin::new(["*"]).expect("point");
        let y = Fam::new(1, [("*", 0)]).expect("point");
        VerticalMap { index, y, x: Fam::empty(1) }
    }

    /// Pullback along `along: J' -> J`, with the maps `Y' -> Y`, `X' -> X`.
    pub fn pullback_index(&self, along: &[usize], new_index: &Fin) -> Result<(VerticalMap, Vec<usize>, Vec<usize>)> {
        let y = self.y.pullback(along, new_index)?;
        let y_map: Vec<usize> = along.iter().flat_map(|&j| self.y.fibre(j).iter().copied()).collect();
        let x = self.x.pullback(&y_map, y.total())?;
        let x_map: Vec<usize> = y_map.iter().flat_map(|&yy| self.x.fibre(yy).iter().copied()).collect();
        Ok((VerticalMap::new(new_index.clone(), y, x)?, y_map, x_map))
    }

    /// Pullback along a map `Y' -> Y` over the same index.
    pub fn pullback_cod(&self, y2: &Fam, y_map: &[usize]) -> Result<(VerticalMap, Vec<usize>)> {
        for (e, &yy) in y_map.iter().enumerate() {
            if y2.over(e) != self.y.over(yy) {
                return Err(Error::ShapeMismatch("map of codomains leaves the index".into()));
            }
        }
        let x = self.x.pullback(y_map, y2.total())?;
        let x_map: Vec<usize> = y_map.iter().flat_map(|&yy| self.x.fibre(yy).iter().copied()).collect();
        Ok((VerticalMap::new(self.index.clone(), y2.clone(), x)?, x_map))
    }
}

/// One lifting problem `(i, j, β, γ)`; `β` is indexed by `V(i)` and `γ`
/// by `U(i)`, both in local order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LiftProblem {
    pub i: usize,
    pub j: usize,
    pub beta: Vec<usize>,
    pub gamma: Vec<usize>,
}

/// The universal family of lifting problems, with the pulled-back
/// families and the evaluation maps.
#[derive(Clone, Debug)]
pub struct LiftingProblemFamily {
    pub problems: Vec<LiftProblem>,
    /// `σ*(V)` as pairs `(k, v)`.
    pub sv: Vec<(usize, usize)>,
    /// `σ*(U)` as pairs `(k, u)`.
    pub su: Vec<(usize, usize)>,
    /// Evaluation `σ*(V) -> Y`.
    pub right_v: Vec<usize>,
    /// Evaluation `σ*(U) -> X`.
    pub right_u: Vec<usize>,
}

pub fn universal_k(gen: &GenFamily, f: &VerticalMap, cap: usize) -> Result<LiftingProblemFamily> {
    let mut problems = Vec::new();
    for i in 0..gen.index.len() {
        let vs = gen.v_of(i);
        let us = gen.u_of(i);
        let local_v: HashMap<usize, usize> = vs.iter().enumerate().map(|(k, &v)| (v, k)).collect();
        for j in 0..f.index.len() {
            let beta_choices: Vec<Vec<usize>> = vs.iter().map(|_| f.y.fibre(j).to_vec()).collect();
            for beta in Assignments::new(&beta_choices) {
                let gamma_choices: Vec<Vec<usize>> = us
                    .iter()
                    .map(|&u| f.x.fibre(beta[local_v[&gen.dom.over(u)]]).to_vec())
                    .collect();
                let needed = problems.len() as u128 + Assignments::count(&gamma_choices);
                if needed > cap as u128 {
                    return Err(Error::CapExceeded {
                        what: "lifting problems",
                        needed,
                        cap: cap as u128,
                    });
                }
                for gamma in Assignments::new(&gamma_choices) {
                    problems.push(LiftProblem {
                        i,
                        j,
                        beta: beta.clone(),
                        gamma,
                    });
                }
            }
        }
    }
    let (mut sv, mut su, mut right_v, mut right_u) = (Vec::new(), Vec::new(), Vec::new(), Vec::new());
    for (k, p) in problems.iter().enumerate() {
        for (pos, &v) in gen.v_of(p.i).iter().enumerate() {
            sv.push((k, v));
            right_v.push(p.beta[pos]);
        }
        for (pos, u) in gen.u_of(p.i).into_iter().enumerate() {
            su.push((k, u));
            right_u.push(p.gamma[pos]);
        }
    }
    Ok(LiftingProblemFamily {
        problems,
        sv,
        su,
        right_v,
        right_u,
    })
}

impl LiftingProblemFamily {
    /// The left squares are pullbacks and the right square commutes.
    pub fn check(&self, gen: &GenFamily, f: &VerticalMap) -> LawReport {
        let mut r = LawReport::default();
        let mut kv = Vec::new();
        let mut ku = Vec::new();
        for (k, p) in self.problems.iter().enumerate() {
            for v in 0..gen.cod.len() {
                if gen.cod.over(v) == p.i {
                    kv.push((k, v));
                }
            }
            for u in 0..gen.dom.len() {
                if gen.cod.over(gen.dom.over(u)) == p.i {
                    ku.push((k, u));
                }
            }
        }
        let sorted = |v: &[(usize, usize)]| {
            let mut v = v.to_vec();
            v.sort_unstable();
            v
        };
        r.checked += 2;
        if sorted(&self.sv) != kv {
            r.violations.push("σ*(V) is not the pullback K ×_I V".into());
        }
        if sorted(&self.su) != ku {
            r.violations.push("σ*(U) is not the pullback K ×_I U".into());
        }
        let sv_index: HashMap<(usize, usize), usize> = self.sv.iter().enumerate().map(|(n, &p)| (p, n)).collect();
        for (n, &(k, u)) in self.su.iter().enumerate() {
            r.checked += 1;
            let down = self.right_v[sv_index[&(k, gen.dom.over(u))]];
            if f.x.over(self.right_u[n]) != down {
                r.violations.push(format!("square fails at problem {k}"));
            }
        }
        for (n, &(k, _)) in self.sv.iter().enumerate() {
            r.checked += 1;
            if f.y.over(self.right_v[n]) != self.problems[k].j {
                r.violations.push(format!("problem {k} leaves its index"));
            }
        }
        r
    }

    pub fn index_of(&self) -> HashMap<LiftProblem, usize> {
        self.problems.iter().cloned().enumerate().map(|(k, p)| (p, k)).collect()
    }
}

/// `K1f` with `λ_f: X -> K1f` and the image of the new cells; `R1f` is
/// the projection of `carrier`.
#[derive(Clone, Debug)]
pub struct Step1 {
    pub problems: LiftingProblemFamily,
    /// `K1f` as a family over the elements of `Y`.
    pub carrier: Fam,
    pub lambda: Vec<usize>,
    /// `σ*(V0) -> K1f`, indexed like `cells_at`.
    pub cells: Vec<usize>,
    /// `σ*(V0)` as pairs `(k, v0)`.
    pub cells_at: Vec<(usize, usize)>,
}

pub fn step1(gen: &GenFamily, f: &VerticalMap, cap: usize) -> Result<Step1> {
    square_step1(&gen.as_square(), f, cap)
}

/// Pushout of `X <- σ*(U0) -> σ*(V0)` for the universal problems from `m1`.
pub fn square_step1(sq: &SquareGen, f: &VerticalMap, cap: usize) -> Result<Step1> {
    sq.check()?;
    let (l0, l1) = (&sq.level0, &sq.level1);
    let problems = universal_k(l1, f, cap)?;
    let mut cells_at = Vec::new();
    let mut cell_base = Vec::new();
    let mut cell_index = HashMap::new();
    for (k, p) in problems.problems.iter().enumerate() {
        let v1s = l1.v_of(p.i);
        for &v0 in l0.v_of(p.i) {
            let pos = v1s.iter().position(|&v| v == sq.on_cod[v0]).expect("same index");
            cell_index.insert((k, v0), cells_at.len());
            cells_at.push((k, v0));
            cell_base.push(p.beta[pos]);
        }
    }
    let (mut to_x, mut to_cells) = (Vec::new(), Vec::new());
    for (k, p) in problems.problems.iter().enumerate() {
        let u1s = l1.u_of(p.i);
        for &v0 in l0.v_of(p.i) {
            for &u0 in l0.dom.fibre(v0) {
                let pos = u1s.iter().position(|&u| u == sq.on_dom[u0]).expect("same index");
                to_x.push(p.gamma[pos]);
                to_cells.push(cell_index[&(k, v0)]);
            }
        }
    }
    let nx = f.x.len();
    let po = Pushout::new(nx, cells_at.len(), &to_x, &to_cells);
    let mut carrier = Fam::empty(f.y.len());
    for &rep in &po.quotient.reps {
        if rep < nx {
            carrier.push(f.x.name(rep), f.x.over(rep))?;
        } else {
            let (k, v0) = cells_at[rep - nx];
            carrier.push(format!("{}@{k}", l0.cod.name(v0)), cell_base[rep - nx])?;
        }
    }
    for (n, &b) in cell_base.iter().enumerate() {
        if carrier.over(po.inr(n)) != b {
            return Err(Error::InternalContradiction("pushout identifies elements over different points".into()));
        }
    }
    Ok(Step1 {
        problems,
        lambda: (0..nx).map(|x| po.inl(x)).collect(),
        cells: (0..cells_at.len()).map(|n| po.inr(n)).collect(),
        cells_at,
        carrier,
    })
}

/// A filler constructor `(i, v0, β)` with `β: V1(i) -> Y(j)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FillerCons {
    pub i: usize,
    pub v0: usize,
    pub j: usize,
    pub beta: Vec<usize>,
}

/// Step one as a polynomial with reductions over the elements of `Y`.
#[derive(Clone, Debug)]
pub struct Step1Poly {
    pub poly: PolyRed,
    pub cons: Vec<FillerCons>,
    /// The `U1` element behind each arity element.
    pub arity_u: Vec<usize>,
}

pub fn step1_poly(gen: &GenFamily, f: &VerticalMap) -> Result<Step1Poly> {
    square_step1_poly(&gen.as_square(), f)
}

pub fn square_step1_poly(sq: &SquareGen, f: &VerticalMap) -> Result<Step1Poly> {
    sq.check()?;
    let (l0, l1) = (&sq.level0, &sq.level1);
    let base = f.y.total().clone();
    let mut cons_fam = Fam::empty(base.len());
    let mut cons = Vec::new();
    for i in 0..l1.index.len() {
        let v1s = l1.v_of(i);
        for &v0 in l0.v_of(i) {
            let at = v1s.iter().position(|&v| v == sq.on_cod[v0]).expect("same index");
            for j in 0..f.index.len() {
                let choices: Vec<Vec<usize>> = v1s.iter().map(|_| f.y.fibre(j).to_vec()).collect();
                for beta in Assignments::new(&choices) {
                    let names: Vec<&str> = beta.iter().map(|&y| f.y.name(y)).collect();
                    let name = format!("fill({},{},[{}])", l1.index.name(i), l0.cod.name(v0), names.join(","));
                    cons_fam.push(name, beta[at])?;
                    cons.push(FillerCons { i, v0, j, beta });
                }
            }
        }
    }
    let mut arity = Fam::empty(cons.len());
    let mut reindex = Vec::new();
    let mut arity_u = Vec::new();
    let mut red_entries: Vec<(String, usize)> = Vec::new();
    for (k, c) in cons.iter().enumerate() {
        let v1s = l1.v_of(c.i);
        let mut here = HashMap::new();
        for (pos, &v) in v1s.iter().enumerate() {
            for &u in l1.dom.fibre(v) {
                let name = format!("{}/{}", cons_fam.name(k), l1.dom.name(u));
                let x = arity.push(name, k)?;
                reindex.push(c.beta[pos]);
                arity_u.push(u);
                here.insert(u, x);
            }
        }
        for &u0 in l0.dom.fibre(c.v0) {
            let x = here[&sq.on_dom[u0]];
            red_entries.push((format!("{}~{}", arity.name(x), l0.dom.name(u0)), x));
        }
    }
    let mut red = Fam::empty(arity.len());
    for (name, x) in red_entries {
        red.push(name, x)?;
    }
    let poly = PolyRed::new(base, cons_fam, arity, reindex, red)?;
    Ok(Step1Poly { poly, cons, arity_u })
}

impl Step1Poly {
    /// The arities form the pullback of `U1 -> I` along the constructors:
    /// `x ↦ (constructor of x, u of x)` is a bijection onto `C ×_I U1`.
    pub fn check_pullback(&self, level1: &GenFamily) -> LawReport {
        let mut r = LawReport::default();
        let p = &self.poly;
        let mut pairs: Vec<(usize, usize)> = (0..p.arities().len())
            .map(|x| (p.arity_cons(x), self.arity_u[x]))
            .collect();
        let mut expected = Vec::new();
        for (k, c) in self.cons.iter().enumerate() {
            for u in 0..level1.dom.len() {
                if level1.cod.over(level1.dom.over(u)) == c.i {
                    expected.push((k, u));
                }
            }
        }
        pairs.sort_unstable();
        r.checked = expected.len();
        if pairs.windows(2).any(|w| w[0] == w[1]) {
            r.violations.push("two arity elements over the same pair".into());
        }
        if pairs != expected {
            r.violations.push("arities differ from the pullback of U over I".into());
        }
        r
    }
}

/// Which construction supplies the initial algebra.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Engine {
    Classical,
    Per,
    Presheaf,
}

impl fmt::Display for Engine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Engine::Classical => "classical",
            Engine::Per => "per",
            Engine::Presheaf => "presheaf",
        })
    }
}

/// A chosen filler for each lifting problem, as its values on `V0(i)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FillerTable {
    pub entries: Vec<(LiftProblem, Vec<usize>)>,
}

/// `f = Rmap ∘ L` through `E`; `Rmap` is the projection of `carrier`.
#[derive(Clone, Debug)]
pub struct Factorization {
    pub carrier: Fam,
    pub l: Option<Vec<usize>>,
    pub fillers: Option<FillerTable>,
    pub status: Status,
    pub engine: Engine,
}

impl Factorization {
    pub fn as_vertical(&self, f: &VerticalMap) -> VerticalMap {
        VerticalMap {
            index: f.index.clone(),
            y: f.y.clone(),
            x: self.carrier.clone(),
        }
    }
}

/// The polynomial `I_X + R1` whose initial algebra is the factorization.
pub fn factorization_poly(sq: &SquareGen, f: &VerticalMap) -> Result<(PolyRed, Step1Poly)> {
    let step = square_step1_poly(sq, f)?;
    let seed = PolyRed::seed(f.y.total(), &f.x)?;
    Ok((seed.coprod(&step.poly)?, step))
}

/// Free factorization of `f` by the initial algebra of `I_X + R1`.
/// `cover` is a 2-cover base of `U1 -> I`, transported to the arities.
pub fn free_factorization(
    sq: &SquareGen,
    f: &VerticalMap,
    budget: Budget,
    engine: Engine,
    cover: Option<&TwoCoverBase>,
) -> Result<Factorization> {
    let (p, step) = factorization_poly(sq, f)?;
    let nx = f.x.len();
    let (carrier, algebra, status): (Fam, Option<Box<dyn Algebra>>, Status) = match engine {
        Engine::Classical => {
            let ci = build_initial(&p, budget)?;
            let status = ci.wc.status();
            let alg = ci.algebra.map(|a| Box::new(a) as Box<dyn Algebra>);
            (ci.wc.carrier().clone(), alg, status)
        }
        Engine::Per => {
            let u_cb = match cover {
                Some(cb) => cb.clone(),
                None => TwoCoverBase::identity(
                    (0..sq.level1.index.len()).map(|i| sq.level1.u_of(i).len()).collect(),
                ),
            };
            let along: Vec<usize> = step.cons.iter().map(|c| c.i).collect();
            let cb = TwoCoverBase::identity(vec![0; nx]).coprod(&u_cb.pullback(&along)?);
            cb.check_for(&p)?;
            let q = per::quotient(&p, &cb, budget)?;
            let alg = q.algebra.clone().map(|a| Box::new(a) as Box<dyn Algebra>);
            (q.carrier.clone(), alg, q.status)
        }
        Engine::Presheaf => {
            return Err(Error::Unsupported(
                "the presheaf engine factorizes maps of diagrams; use the diagram inputs".into(),
            ))
        }
    };
    let Some(alg) = algebra else {
        return Ok(Factorization {
            carrier,
            l: None,
            fillers: None,
            status,
            engine,
        });
    };
    let l = (0..nx)
        .map(|x| alg.apply(x, &[]).ok_or_else(|| Error::InternalContradiction("seed not in the carrier".into())))
        .collect::<Result<Vec<_>>>()?;
    let cons_of: HashMap<(usize, usize, Vec<usize>), usize> = step
        .cons
        .iter()
        .enumerate()
        .map(|(k, c)| ((c.i, c.v0, c.beta.clone()), nx + k))
        .collect();
    let rmap = VerticalMap::new(f.index.clone(), f.y.clone(), carrier.clone())?;
    let problems = universal_k(&sq.level1, &rmap, DEFAULT_PROBLEM_CAP)?;
    let mut entries = Vec::new();
    for p in problems.problems {
        let values = sq
            .level0
            .v_of(p.i)
            .iter()
            .map(|&v0| {
                let y = cons_of[&(p.i, v0, p.beta.clone())];
                alg.apply(y, &p.gamma)
                    .ok_or_else(|| Error::InternalContradiction("filler missing from the algebra".into()))
            })
            .collect::<Result<Vec<_>>>()?;
        entries.push((p, values));
    }
    Ok(Factorization {
        carrier,
        l: Some(l),
        fillers: Some(FillerTable { entries }),
        status,
        engine,
    })
}

/// Checks the triangles of every filler against `Rmap` and that `Rmap ∘ L = f`.
pub fn verify_factorization(sq: &SquareGen, f: &VerticalMap, fact: &Factorization) -> Result<LawReport> {
    let mut r = LawReport::default();
    let (Some(l), Some(fillers)) = (&fact.l, &fact.fillers) else {
        r.violations.push(format!("factorization is {}", fact.status));
        return Ok(r);
    };
    for (x, &e) in l.iter().enumerate() {
        r.checked += 1;
        if fact.carrier.over(e) != f.x.over(x) {
            r.violations.push(format!("Rmap ∘ L differs from f at `{}`", f.x.name(x)));
        }
    }
    let rmap = fact.as_vertical(f);
    let all = universal_k(&sq.level1, &rmap, DEFAULT_PROBLEM_CAP)?;
    r.checked += 1;
    if all.problems.len() != fillers.entries.len() {
        r.violations.push("filler table misses lifting problems".into());
    }
    let bad = check_fillers(sq, &rmap, fillers);
    r.checked += bad.checked;
    r.violations.extend(bad.violations);
    Ok(r)
}

fn check_fillers(sq: &SquareGen, f: &VerticalMap, table: &FillerTable) -> LawReport {
    let mut r = LawReport::default();
    let (l0, l1) = (&sq.level0, &sq.level1);
    for (k, (p, values)) in table.entries.iter().enumerate() {
        let v1s = l1.v_of(p.i);
        let u1s = l1.u_of(p.i);
        for (&v0, &e) in l0.v_of(p.i).iter().zip(values) {
            r.checked += 1;
            let pos = v1s.iter().position(|&v| v == sq.on_cod[v0]).expect("same index");
            if f.x.over(e) != p.beta[pos] {
                r.violations.push(format!("lower triangle fails for problem {k}"));
            }
            for &u0 in l0.dom.fibre(v0) {
                r.checked += 1;
                let upos = u1s.iter().position(|&u| u == sq.on_dom[u0]).expect("same index");
                if p.gamma[upos] != e {
                    r.violations.push(format!("upper triangle fails for problem {k}"));
                }
            }
        }
    }
    r
}

/// Whether `f` solves every lifting problem from the square.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Rlp {
    Solved(FillerTable),
    Unsolvable(LiftProblem),
}

impl Rlp {
    pub fn is_solved(&self) -> bool {
        matches!(self, Rlp::Solved(_))
    }
}

pub fn has_rlp(sq: &SquareGen, f: &VerticalMap, cap: usize) -> Result<Rlp> {
    sq.check()?;
    let (l0, l1) = (&sq.level0, &sq.level1);
    let problems = universal_k(l1, f, cap)?;
    let mut entries = Vec::new();
    for p in problems.problems {
        let v1s = l1.v_of(p.i);
        let u1s = l1.u_of(p.i);
        let mut values = Vec::new();
        for &v0 in l0.v_of(p.i) {
            let pos = v1s.iter().position(|&v| v == sq.on_cod[v0]).expect("same index");
            let forced: Vec<usize> = l0
                .dom
                .fibre(v0)
                .iter()
                .map(|&u0| p.gamma[u1s.iter().position(|&u| u == sq.on_dom[u0]).expect("same index")])
                .collect();
            let pick = f
                .x
                .fibre(p.beta[pos])
                .iter()
                .copied()
                .find(|e| forced.iter().all(|g| g == e));
            match pick {
                Some(e) => values.push(e),
                None => return Ok(Rlp::Unsolvable(p)),
            }
        }
        entries.push((p, values));
    }
    Ok(Rlp::Solved(FillerTable { entries }))
}

/// Compares step one of a base-changed map with the base change of step
/// one: `maps` sends the index, `Y'` and `X'` of `f2` to those of `f`.
pub fn base_change_check(
    sq: &SquareGen,
    f: &VerticalMap,
    f2: &VerticalMap,
    j_map: &[usize],
    y_map: &[usize],
    x_map: &[usize],
) -> Result<LawReport> {
    let s = square_step1(sq, f, DEFAULT_PROBLEM_CAP)?;
    let s2 = square_step1(sq, f2, DEFAULT_PROBLEM_CAP)?;
    let index = s.problems.index_of();
    let cell_pos: HashMap<(usize, usize), usize> = s.cells_at.iter().enumerate().map(|(n, &p)| (p, n)).collect();
    let mut image = vec![usize::MAX; s2.carrier.len()];
    for (x2, &e2) in s2.lambda.iter().enumerate() {
        image[e2] = s.lambda[x_map[x2]];
    }
    for (n, &(k2, v0)) in s2.cells_at.iter().enumerate() {
        let p2 = &s2.problems.problems[k2];
        let p = LiftProblem {
            i: p2.i,
            j: j_map[p2.j],
            beta: p2.beta.iter().map(|&y| y_map[y]).collect(),
            gamma: p2.gamma.iter().map(|&x| x_map[x]).collect(),
        };
        let k = *index
            .get(&p)
            .ok_or_else(|| Error::InternalContradiction("base-changed problem not found".into()))?;
        let e = s.cells[cell_pos[&(k, v0)]];
        let slot = &mut image[s2.cells[n]];
        if *slot != usize::MAX && *slot != e {
            return Err(Error::IllDefined("comparison map out of the pushout".into()));
        }
        *slot = e;
    }
    let mut r = LawReport::default();
    for (y2, &y) in y_map.iter().enumerate() {
        r.checked += 1;
        let mut got: Vec<usize> = s2.carrier.fibre(y2).iter().map(|&e| image[e]).collect();
        got.sort_unstable();
        let mut want = s.carrier.fibre(y).to_vec();
        want.sort_unstable();
        if got != want {
            r.violations.push(format!(
                "fibre over `{}`: {} elements against {}",
                f2.y.name(y2),
                got.len(),
                want.len()
            ));
        }
    }
    Ok(r)
}

/// Step one commutes with pullback along `along: J' -> J`.
pub fn fibred_check(gen: &GenFamily, f: &VerticalMap, along: &[usize], new_index: &Fin) -> Result<LawReport> {
    let (f2, y_map, x_map) = f.pullback_index(along, new_index)?;
    base_change_check(&gen.as_square(), f, &f2, along, &y_map, &x_map)
}

/// Step one commutes with pullback along `y_map: Y' -> Y`.
pub fn strongly_fibred_check(sq: &SquareGen, f: &VerticalMap, y2: &Fam, y_map: &[usize]) -> Result<LawReport> {
    let (f2, x_map) = f.pullback_cod(y2, y_map)?;
    let j_map: Vec<usize> = (0..f.index.len()).collect();
    base_change_check(sq, f, &f2, &j_map, y_map, &x_map)
}

/// Comparison of the factorization of `0 -> 1` with the plain W-type.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RecoverReport {
    pub wtype: Vec<String>,
    pub carrier: Vec<String>,
    pub status: Status,
}

impl RecoverReport {
    pub fn agrees(&self) -> bool {
        self.wtype == self.carrier
    }
}

impl fmt::Display for RecoverReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.agrees() {
            write!(f, "carriers agree: {} elements", self.carrier.len())
        } else {
            write!(f, "carriers differ: {} against {} elements", self.carrier.len(), self.wtype.len())
        }
    }
}

/// The family `ι0: A -> A + B` over `B` for the arities `A -> B` of `p`.
pub fn recovery_family(p: &PolyRed) -> Result<GenFamily> {
    let b = p.constructors().total().clone();
    let mut cod = Fam::empty(b.len());
    for y in 0..b.len() {
        for &x in p.arity_of(y) {
            cod.push(p.arity_name(x), y)?;
        }
        let pt = if p.arities().total().position(b.name(y)).is_some() {
            format!("pt.{}", b.name(y))
        } else {
            b.name(y).to_string()
        };
        cod.push(pt, y)?;
    }
    let mut dom = Fam::empty(cod.len());
    for y in 0..b.len() {
        for (k, &x) in p.arity_of(y).iter().enumerate() {
            dom.push(p.arity_name(x), cod.fibre(y)[k])?;
        }
    }
    GenFamily::new(b, cod, dom)
}

/// Free-factorizes `0 -> 1` against `ι0` and lists the carrier as trees of
/// the original constructors, next to the plain W-type at the same depth.
pub fn recover_wtype(p: &PolyRed, budget: Budget) -> Result<RecoverReport> {
    if p.base().len() != 1 {
        return Err(Error::Unsupported("recovery needs a polynomial over a single point".into()));
    }
    let plain = p.underlying();
    let gen = recovery_family(&plain)?;
    let (q, step) = factorization_poly(&gen.as_square(), &VerticalMap::zero_to_one())?;
    let ci = build_initial(&q, budget)?;
    let pool = &ci.wc.levels.pool;
    fn render(pool: &crate::poly::TreePool, t: crate::poly::TreeId, name: &dyn Fn(usize) -> String) -> String {
        let node = pool.node(t);
        let head = match node.head {
            Head::Cons(y) => name(y),
            _ => "∗".to_string(),
        };
        if node.children.is_empty() {
            head
        } else {
            let kids: Vec<String> = node.children.iter().map(|&c| render(pool, c, name)).collect();
            format!("{head}({})", kids.join(","))
        }
    }
    let name = |y: usize| plain.cons_name(step.cons[y].i).to_string();
    let carrier = (0..ci.wc.len()).map(|e| render(pool, ci.wc.tree(e), &name)).collect();
    let lv = enumerate_trees_within(&plain, budget)?;
    let wtype = lv.render_fibre(0, &plain);
    Ok(RecoverReport {
        wtype,
        carrier,
        status: ci.wc.status(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn f_small() -> VerticalMap {
        // X = {x1} over y1, Y = {y1, y2} over a single index
        VerticalMap::new(
            Fin::new(["j"]).unwrap(),
            Fam::new(1, [("y1", 0), ("y2", 0)]).unwrap(),
            Fam::new(2, [("x1", 0)]).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn universal_k_counts() {
        let f = f_small();
        let k = universal_k(&fixtures::gen_pt(), &f, 100).unwrap();
        assert_eq!(k.problems.len(), 2);
        assert!(k.check(&fixtures::gen_pt(), &f).passes());
        let k = universal_k(&fixtures::gen_id(), &f, 100).unwrap();
        assert_eq!(k.problems.len(), f.x.len());
        assert!(k.check(&fixtures::gen_id(), &f).passes());
        let empty = VerticalMap::new(Fin::new(["j"]).unwrap(), Fam::empty(1), Fam::empty(0)).unwrap();
        assert!(universal_k(&fixtures::gen_pt(), &empty, 100).unwrap().problems.is_empty());
    }

    #[test]
    fn step1_shapes() {
        let f = f_small();
        let s = step1(&fixtures::gen_pt(), &f, 100).unwrap();
        assert_eq!(s.carrier.len(), 3);
        assert_eq!(s.carrier.projection(), &[0, 0, 1]);
        let s = step1(&fixtures::gen_id(), &f, 100).unwrap();
        assert_eq!(s.carrier.len(), 1);
        assert_eq!(s.carrier.projection(), &[0]);
        let none = GenFamily::new(Fin::default(), Fam::empty(0), Fam::empty(0)).unwrap();
        assert_eq!(step1(&none, &f, 100).unwrap().carrier.len(), 1);
    }

    #[test]
    fn step1_poly_shapes() {
        let f = f_small();
        let pt = step1_poly(&fixtures::gen_pt(), &f).unwrap();
        assert_eq!(pt.poly.constructors().len(), 2);
        assert_eq!(pt.poly.classify(), crate::poly::Classification::NoReductions);
        assert!(pt.check_pullback(&fixtures::gen_pt()).passes());
        let id = step1_poly(&fixtures::gen_id(), &f).unwrap();
        assert_eq!(id.poly.classify(), crate::poly::Classification::Decidable);
        assert!(id.poly.check_coherence().passes());
        assert!(id.check_pullback(&fixtures::gen_id()).passes());
        let two = step1_poly(&fixtures::gen_two(), &f).unwrap();
        assert_eq!(two.poly.classify(), crate::poly::Classification::General);
        assert!(two.check_pullback(&fixtures::gen_two()).passes());
    }

    #[test]
    fn free_factorizations() {
        let f = f_small();
        for engine in [Engine::Classical, Engine::Per] {
            let sq = fixtures::gen_pt().as_square();
            let fact = free_factorization(&sq, &f, Budget::default(), engine, None).unwrap();
            assert_eq!(fact.status, Status::Finite);
            assert_eq!(fact.carrier.len(), 3);
            assert!(verify_factorization(&sq, &f, &fact).unwrap().passes());
            assert!(has_rlp(&sq, &fact.as_vertical(&f), 1000).unwrap().is_solved());

            let sq = fixtures::gen_id().as_square();
            let fact = free_factorization(&sq, &f, Budget::default(), engine, None).unwrap();
            assert_eq!(fact.carrier.len(), 1);
            assert_eq!(fact.l, Some(vec![0]));
            assert!(verify_factorization(&sq, &f, &fact).unwrap().passes());
        }
    }

    #[test]
    fn rlp_cases() {
        let f = f_small();
        let pt = fixtures::gen_pt().as_square();
        match has_rlp(&pt, &f, 100).unwrap() {
            Rlp::Unsolvable(p) => assert_eq!(p.beta, vec![1]),
            other => panic!("{other:?}"),
        }
        let none = GenFamily::new(Fin::default(), Fam::empty(0), Fam::empty(0)).unwrap();
        assert!(has_rlp(&none.as_square(), &f, 100).unwrap().is_solved());
        // with a point over y2 every problem is solvable
        let onto = VerticalMap::new(f.index.clone(), f.y.clone(), Fam::new(2, [("x1", 0), ("x2", 1)]).unwrap()).unwrap();
        assert!(has_rlp(&pt, &onto, 100).unwrap().is_solved());
        // the free factorization still adds one point per y
        let fact = free_factorization(&pt, &onto, Budget::default(), Engine::Classical, None).unwrap();
        assert_eq!(fact.carrier.len(), 4);
    }

    #[test]
    fn fibred_along_restriction() {
        let f = VerticalMap::new(
            Fin::new(["j1", "j2"]).unwrap(),
            Fam::new(2, [("y1", 0), ("y2", 1), ("y3", 1)]).unwrap(),
            Fam::new(3, [("x1", 0), ("x2", 2)]).unwrap(),
        )
        .unwrap();
        for gen in [fixtures::gen_pt(), fixtures::gen_id(), fixtures::gen_two()] {
            let rep = fibred_check(&gen, &f, &[0], &Fin::new(["j1"]).unwrap()).unwrap();
            assert!(rep.passes(), "{rep}");
            let rep = fibred_check(&gen, &f, &[0, 1], &f.index).unwrap();
            assert!(rep.passes(), "{rep}");
            let rep = fibred_check(&gen, &f, &[1, 1, 0], &Fin::new(["a", "b", "c"]).unwrap()).unwrap();
            assert!(rep.passes(), "{rep}");
        }
    }

    #[test]
    fn squares() {
        let f = f_small();
        let gen = fixtures::gen_id();
        let s = square_step1(&gen.as_square(), &f, 100).unwrap();
        let t = step1(&gen, &f, 100).unwrap();
        assert_eq!(s.carrier, t.carrier);
        // U0 empty: X + σ*(V0)
        let sq = fixtures::square_empty_top();
        let s = square_step1(&sq, &f, 100).unwrap();
        assert_eq!(s.carrier.len(), f.x.len() + s.cells_at.len());
        // V1 ≅ I: pullback along a two-element Y' -> Y
        let sq = fixtures::gen_id().as_square();
        assert!(sq.cod_is_index());
        let y2 = Fam::new(1, [("p", 0), ("q", 0)]).unwrap();
        let rep = strongly_fibred_check(&sq, &f, &y2, &[0, 1]).unwrap();
        assert!(rep.passes(), "{rep}");
        let rep = strongly_fibred_check(&fixtures::gen_pt().as_square(), &f, &y2, &[1, 1]).unwrap();
        assert!(rep.passes(), "{rep}");
    }

    fn depth(max_depth: usize) -> Budget {
        Budget { max_depth, ..Budget::default() }
    }

    #[test]
    fn recovery_matches_plain_trees() {
        let rep = recover_wtype(&fixtures::ex_nat(), depth(4)).unwrap();
        assert_eq!(rep.carrier, vec!["zero", "succ(zero)", "succ(succ(zero))", "succ(succ(succ(zero)))"]);
        assert!(rep.agrees());
        assert_eq!(rep.to_string(), "carriers agree: 4 elements");
        let rep = recover_wtype(&fixtures::ex_btree(), depth(3)).unwrap();
        assert_eq!(rep.carrier.len(), 5);
        assert!(rep.agrees());
        let empty = PolyRed::builder(["*"]).build().unwrap();
        let rep = recover_wtype(&empty, depth(3)).unwrap();
        assert!(rep.carrier.is_empty() && rep.agrees());
    }
}
