//! Generating families and free factorizations between diagrams.

use std::collections::HashMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::fin::Fin;
use crate::prescat::{check_natural, pi_families, DiagMap, Diagram, FinCat, LawReport, Over, PshPolyRed, Slot};
use crate::presheaf::{check_hereditary, check_presheaf_laws, check_s, enumerate_n, NfNode, NFragment, SlotTable};
use super::{GenFamily, VerticalMap};
use crate::{Budget, Status};

fn natural(what: &str, m: &DiagMap, s: &Diagram, t: &Diagram) -> Result<()> {
    let rep = check_natural(m, s, t);
    if rep.passes() {
        Ok(())
    } else {
        Err(Error::malformed(format!("{what}: {rep}")))
    }
}

/// `m: U -> V` over `p: V -> I`.
#[derive(Clone, Debug)]
pub struct PshGenFamily {
    pub index: Diagram,
    pub cod: Diagram,
    pub dom: Diagram,
    pub p: DiagMap,
    pub m: DiagMap,
}

fn over_trivial(fins: [&Fin; 3], maps: [&[usize]; 2]) -> (Vec<Diagram>, Vec<DiagMap>) {
    let cat = Arc::new(FinCat::trivial());
    let ds = fins
        .iter()
        .map(|&fin| Diagram::from_fn(cat.clone(), vec![fin.clone()], |_, e| e))
        .collect();
    let ms = maps.iter().map(|t| DiagMap { tables: vec![t.to_vec()] }).collect();
    (ds, ms)
}

impl PshGenFamily {
    /// A finite family over the one-object category.
    pub fn from_finite(gen: &GenFamily) -> Self {
        let (mut ds, mut ms) = over_trivial(
            [&gen.index, gen.cod.total(), gen.dom.total()],
            [gen.cod.projection(), gen.dom.projection()],
        );
        let (m, p) = (ms.pop().expect("two"), ms.pop().expect("two"));
        let (dom, cod, index) = (ds.pop().expect("three"), ds.pop().expect("three"), ds.pop().expect("three"));
        PshGenFamily { index, cod, dom, p, m }
    }

    pub fn new(index: Diagram, cod: Diagram, dom: Diagram, p: DiagMap, m: DiagMap) -> Result<Self> {
        natural("V -> I", &p, &cod, &index)?;
        natural("U -> V", &m, &dom, &cod)?;
        Ok(PshGenFamily { index, cod, dom, p, m })
    }

    pub fn cat(&self) -> &Arc<FinCat> {
        &self.index.cat
    }
}

/// `f: X -> Y` over `q: Y -> J`.
#[derive(Clone, Debug)]
pub struct PshVerticalMap {
    pub base: Diagram,
    pub y: Diagram,
    pub x: Diagram,
    pub q: DiagMap,
    pub f: DiagMap,
}

impl PshVerticalMap {
    /// A finite map over the one-object category.
    pub fn from_finite(f: &VerticalMap) -> Self {
        let (mut ds, mut ms) = over_trivial([&f.index, f.y.total(), f.x.total()], [f.y.projection(), f.x.projection()]);
        let (fm, q) = (ms.pop().expect("two"), ms.pop().expect("two"));
        let (x, y, base) = (ds.pop().expect("three"), ds.pop().expect("three"), ds.pop().expect("three"));
        PshVerticalMap { base, y, x, q, f: fm }
    }

    pub fn new(base: Diagram, y: Diagram, x: Diagram, q: DiagMap, f: DiagMap) -> Result<Self> {
        natural("Y -> J", &q, &y, &base)?;
        natural("X -> Y", &f, &x, &y)?;
        Ok(PshVerticalMap { base, y, x, q, f })
    }
}

/// A filler constructor at an object: `(i, j, β, v0)`, with `β` a natural
/// family on the slots of the auxiliary polynomial at `(i, j)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PshFiller {
    pub i: usize,
    pub j: usize,
    pub beta: Vec<usize>,
    pub v0: usize,
}

/// Step one as a polynomial over `Y`; constructors at each object are the
/// seeds `X(c)` followed by `fillers[c]`.
#[derive(Clone, Debug)]
pub struct PshStep1Poly {
    pub poly: PshPolyRed,
    pub fillers: Vec<Vec<PshFiller>>,
}

fn product(cat: &Arc<FinCat>, a: &Diagram, b: &Diagram) -> Result<(Diagram, Vec<Vec<(usize, usize)>>)> {
    let mut comps = Vec::new();
    let mut pairs = Vec::new();
    for c in 0..cat.object_count() {
        let mut fin = Fin::default();
        let mut ps = Vec::new();
        for e in 0..a.components[c].len() {
            for g in 0..b.components[c].len() {
                fin.push(format!("({},{})", a.components[c].name(e), b.components[c].name(g)))?;
                ps.push((e, g));
            }
        }
        comps.push(fin);
        pairs.push(ps);
    }
    let nb: Vec<usize> = b.sizes();
    let d = Diagram::from_fn(cat.clone(), comps, |m, e| {
        let (c, c2) = (cat.dom(m), cat.cod(m));
        let (x, y) = pairs[c][e];
        a.act(m, x) * nb[c2] + b.act(m, y)
    });
    Ok((d, pairs))
}

/// `Z = J`, `Y = I × J`, `X = V × J`: its natural families over `Y` are the
/// maps `β` of a lifting problem.
fn beta_poly(gen: &PshGenFamily, f: &PshVerticalMap) -> Result<PshPolyRed> {
    let cat = gen.cat().clone();
    let (ij, ij_pairs) = product(&cat, &gen.index, &f.base)?;
    let (vj, vj_pairs) = product(&cat, &gen.cod, &f.base)?;
    let nj = f.base.sizes();
    let g = DiagMap {
        tables: ij_pairs.iter().map(|ps| ps.iter().map(|&(_, j)| j).collect()).collect(),
    };
    let h = DiagMap {
        tables: vj_pairs.iter().map(|ps| ps.iter().map(|&(_, j)| j).collect()).collect(),
    };
    let fm = DiagMap {
        tables: vj_pairs
            .iter()
            .enumerate()
            .map(|(c, ps)| ps.iter().map(|&(v, j)| gen.p.apply(c, v) * nj[c] + j).collect())
            .collect(),
    };
    let empty = Diagram::empty(cat.clone());
    let k = DiagMap::identity(&empty);
    PshPolyRed::new(f.base.clone(), ij, vj, empty, g, fm, k, h)
}

pub fn psh_step1_poly(gen: &PshGenFamily, f: &PshVerticalMap) -> Result<PshStep1Poly> {
    let cat = gen.cat().clone();
    if !cat.same(&f.base.cat) {
        return Err(Error::ShapeMismatch("family and map over different categories".into()));
    }
    let aux = beta_poly(gen, f)?;
    let aux_slots = SlotTable::new(&aux);
    let target = Over {
        diagram: &f.y,
        to_base: &f.q,
    };
    let n = cat.object_count();
    let nj = f.base.sizes();
    let ij = |c: usize, i: usize, j: usize| i * nj[c] + j;
    let vj = |c: usize, v: usize, j: usize| v * nj[c] + j;

    let mut fillers: Vec<Vec<PshFiller>> = vec![Vec::new(); n];
    for c in 0..n {
        for i in 0..gen.index.components[c].len() {
            for j in 0..nj[c] {
                for beta in pi_families(&aux, &target, c, ij(c, i, j)) {
                    for v0 in 0..gen.cod.components[c].len() {
                        if gen.p.apply(c, v0) == i {
                            fillers[c].push(PshFiller { i, j, beta: beta.clone(), v0 });
                        }
                    }
                }
            }
        }
    }
    let lookup: Vec<HashMap<PshFiller, usize>> = fillers
        .iter()
        .map(|fs| fs.iter().cloned().enumerate().map(|(k, f)| (f, k)).collect())
        .collect();
    let beta_at = |c: usize, fl: &PshFiller, v: usize| -> usize {
        let pos = aux_slots.position(
            c,
            ij(c, fl.i, fl.j),
            Slot {
                mor: cat.identity(c),
                x: vj(c, v, fl.j),
            },
        );
        fl.beta[pos]
    };
    let act_filler = |tau: usize, fl: &PshFiller| -> usize {
        let (c, c2) = (cat.dom(tau), cat.cod(tau));
        let moved = PshFiller {
            i: gen.index.act(tau, fl.i),
            j: f.base.act(tau, fl.j),
            beta: aux_slots.restrict(&aux, tau, ij(c, fl.i, fl.j), &fl.beta),
            v0: gen.cod.act(tau, fl.v0),
        };
        lookup[c2][&moved]
    };

    // constructors: seeds then fillers
    let nx = f.x.sizes();
    let mut ycomps = Vec::new();
    let mut g_tables = Vec::new();
    for c in 0..n {
        let mut fin = Fin::default();
        let mut g = Vec::new();
        for x in 0..nx[c] {
            fin.push(f.x.components[c].name(x))?;
            g.push(f.f.apply(c, x));
        }
        for fl in &fillers[c] {
            let names: Vec<&str> = fl.beta.iter().enumerate().map(|(s, &y)| {
                let d = cat.cod(aux_slots.slots(c, ij(c, fl.i, fl.j))[s].mor);
                f.y.components[d].name(y)
            }).collect();
            fin.push(format!(
                "fill({},{},[{}])",
                gen.index.components[c].name(fl.i),
                gen.cod.components[c].name(fl.v0),
                names.join(",")
            ))?;
            g.push(beta_at(c, fl, fl.v0));
        }
        ycomps.push(fin);
        g_tables.push(g);
    }
    let ycons = Diagram::from_fn(cat.clone(), ycomps, |tau, e| {
        let c = cat.dom(tau);
        if e < nx[c] {
            f.x.act(tau, e)
        } else {
            nx[cat.cod(tau)] + act_filler(tau, &fillers[c][e - nx[c]])
        }
    });

    // arities (k, u) with u over i; reductions where m(u) = v0
    let mut xcomps = Vec::new();
    let mut arity_at: Vec<Vec<(usize, usize)>> = Vec::new();
    let (mut fx, mut hx) = (Vec::new(), Vec::new());
    let mut rcomps = Vec::new();
    let mut k_tables = Vec::new();
    for c in 0..n {
        let mut fin = Fin::default();
        let mut at = Vec::new();
        let (mut fc, mut hc) = (Vec::new(), Vec::new());
        let mut rfin = Fin::default();
        let mut kc = Vec::new();
        for (k, fl) in fillers[c].iter().enumerate() {
            for u in 0..gen.dom.components[c].len() {
                let v = gen.m.apply(c, u);
                if gen.p.apply(c, v) != fl.i {
                    continue;
                }
                let name = format!("{}/{}", ycons.components[c].name(nx[c] + k), gen.dom.components[c].name(u));
                let idx = fin.push(name.clone())?;
                at.push((k, u));
                fc.push(nx[c] + k);
                hc.push(beta_at(c, fl, v));
                if v == fl.v0 {
                    rfin.push(format!("{name}~"))?;
                    kc.push(idx);
                }
            }
        }
        xcomps.push(fin);
        fx.push(fc);
        hx.push(hc);
        rcomps.push(rfin);
        k_tables.push(kc);
        arity_at.push(at);
    }
    let arity_index: Vec<HashMap<(usize, usize), usize>> = arity_at
        .iter()
        .map(|at| at.iter().copied().enumerate().map(|(n, p)| (p, n)).collect())
        .collect();
    let xar = Diagram::from_fn(cat.clone(), xcomps, |tau, e| {
        let (c, c2) = (cat.dom(tau), cat.cod(tau));
        let (k, u) = arity_at[c][e];
        let k2 = act_filler(tau, &fillers[c][k]);
        arity_index[c2][&(k2, gen.dom.act(tau, u))]
    });
    let red = Diagram::from_fn(cat.clone(), rcomps, |tau, e| {
        let (c, c2) = (cat.dom(tau), cat.cod(tau));
        let moved = xar.act(tau, k_tables[c][e]);
        k_tables[c2].iter().position(|&x| x == moved).expect("reductions closed under the action")
    });
    let poly = PshPolyRed::new(
        f.y.clone(),
        ycons,
        xar,
        red,
        DiagMap { tables: g_tables },
        DiagMap { tables: fx },
        DiagMap { tables: k_tables },
        DiagMap { tables: hx },
    )?;
    Ok(PshStep1Poly { poly, fillers })
}

/// `f = Rmap ∘ L` through the normal forms of step one.
#[derive(Clone, Debug)]
pub struct PshFactorization {
    pub step: PshStep1Poly,
    pub fragment: NFragment,
    pub carrier: Diagram,
    pub rmap: DiagMap,
    pub l: Option<DiagMap>,
    pub status: Status,
}

pub fn psh_free_factorization(gen: &PshGenFamily, f: &PshVerticalMap, budget: Budget) -> Result<PshFactorization> {
    let step = psh_step1_poly(gen, f)?;
    let fragment = enumerate_n(&step.poly, budget)?;
    let (carrier, rmap) = fragment.to_diagram(&step.poly)?;
    let l = if fragment.status.is_finite() {
        let tables = (0..f.x.components.len())
            .map(|c| {
                (0..f.x.components[c].len())
                    .map(|x| {
                        fragment
                            .pool
                            .find(&NfNode {
                                obj: c,
                                cons: x,
                                children: Vec::new(),
                            })
                            .and_then(|t| fragment.position(c, t))
                            .ok_or_else(|| Error::InternalContradiction("seed missing from the normal forms".into()))
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Some(DiagMap { tables })
    } else {
        None
    };
    Ok(PshFactorization {
        status: fragment.status,
        step,
        fragment,
        carrier,
        rmap,
        l,
    })
}

/// Naturality of `L` and `Rmap`, `Rmap ∘ L = f`, and the algebra laws of
/// the fillers (reduction equations and compatibility with the action).
pub fn verify_psh_factorization(f: &PshVerticalMap, fact: &PshFactorization) -> LawReport {
    let mut r = LawReport::default();
    let Some(l) = &fact.l else {
        r.violations.push(format!("factorization is {}", fact.status));
        return r;
    };
    let pp = &fact.step.poly;
    for part in [
        check_natural(l, &f.x, &fact.carrier),
        check_natural(&fact.rmap, &fact.carrier, &f.y),
        check_presheaf_laws(pp, &fact.fragment),
        check_hereditary(pp, &fact.fragment),
        check_s(pp, &fact.fragment),
    ] {
        r.checked += part.checked;
        r.violations.extend(part.violations);
    }
    if r.passes() {
        for c in 0..f.x.components.len() {
            for x in 0..f.x.components[c].len() {
                r.checked += 1;
                if fact.rmap.apply(c, l.apply(c, x)) != f.f.apply(c, x) {
                    r.violations.push(format!("Rmap ∘ L differs from f at `{}`", f.x.components[c].name(x)));
                }
            }
        }
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::awfs::{free_factorization, Engine};
    use crate::fin::Fam;
    use crate::fixtures;

    #[test]
    fn trivial_category_matches_classical() {
        let f = VerticalMap::new(
            Fin::new(["j"]).unwrap(),
            Fam::new(1, [("y1", 0), ("y2", 0)]).unwrap(),
            Fam::new(2, [("x1", 0)]).unwrap(),
        )
        .unwrap();
        for gen in [fixtures::gen_pt(), fixtures::gen_id()] {
            let fact = psh_free_factorization(&PshGenFamily::from_finite(&gen), &PshVerticalMap::from_finite(&f), Budget::default()).unwrap();
            assert_eq!(fact.status, Status::Finite);
            let classical = free_factorization(&gen.as_square(), &f, Budget::default(), Engine::Classical, None).unwrap();
            assert_eq!(fact.carrier.sizes(), vec![classical.carrier.len()]);
            assert!(verify_psh_factorization(&PshVerticalMap::from_finite(&f), &fact).passes());
        }
    }

    #[test]
    fn arrow_category_factorization() {
        // over 0 -> 1, generating map 0 -> 1 at index the terminal diagram
        let cat = Arc::new(FinCat::arrow());
        let term = Diagram::terminal(cat.clone());
        let gen = PshGenFamily::new(
            term.clone(),
            term.clone(),
            Diagram::empty(cat.clone()),
            DiagMap::identity(&term),
            DiagMap { tables: vec![vec![], vec![]] },
        )
        .unwrap();
        // Y = two points at each object, fixed by the action; X empty
        let two = Diagram::from_fn(cat.clone(), vec![Fin::new(["a", "b"]).unwrap(); 2], |_, e| e);
        let f = PshVerticalMap::new(
            term.clone(),
            two.clone(),
            Diagram::empty(cat.clone()),
            DiagMap { tables: vec![vec![0, 0], vec![0, 0]] },
            DiagMap { tables: vec![vec![], vec![]] },
        )
        .unwrap();
        let fact = psh_free_factorization(&gen, &f, Budget::default()).unwrap();
        assert_eq!(fact.status, Status::Finite);
        assert!(verify_psh_factorization(&f, &fact).passes());
        // one filler per point of Y at each object
        assert_eq!(fact.carrier.sizes(), vec![2, 2]);
    }
}
