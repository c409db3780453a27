//! Initial algebras in diagram categories by normal forms.
//!
//! A normal form at `c` is `sup(y, α)` with `y` not reducing at `c` and
//! `α` a natural family of normal forms. Levels are built bottom-up, so
//! every tree is hereditarily natural by construction; the action of a
//! morphism either relabels the children or, when the image constructor
//! reduces, returns the child at the reduction place.

use std::collections::{HashMap, HashSet};

use crate::error::{Error, Result};
use crate::fin::{Assignments, Fin};
use crate::prescat::{
    check_natural, pi_families, DiagMap, Diagram, LawReport, Over, PshPolyRed, PshTarget, Slot,
};
use crate::{Budget, Status};

/// The slots of every constructor at every object, with reverse indices.
#[derive(Clone, Debug)]
pub struct SlotTable {
    slots: Vec<Vec<Vec<Slot>>>,
    index: Vec<Vec<HashMap<Slot, usize>>>,
}

impl SlotTable {
    pub fn new(pp: &PshPolyRed) -> Self {
        let mut slots = Vec::new();
        let mut index = Vec::new();
        for c in 0..pp.cat.object_count() {
            let per_y: Vec<Vec<Slot>> = (0..pp.y.components[c].len()).map(|y| pp.slots(c, y)).collect();
            index.push(
                per_y
                    .iter()
                    .map(|ss| ss.iter().enumerate().map(|(i, &s)| (s, i)).collect())
                    .collect(),
            );
            slots.push(per_y);
        }
        SlotTable { slots, index }
    }

    pub fn slots(&self, c: usize, y: usize) -> &[Slot] {
        &self.slots[c][y]
    }

    pub fn position(&self, c: usize, y: usize, s: Slot) -> usize {
        self.index[c][y][&s]
    }

    /// `τ·α`: the family for `Y(τ)y` at `cod τ` read off `α` for `y` at `c`.
    pub fn restrict<T: Copy>(&self, pp: &PshPolyRed, tau: usize, y: usize, alpha: &[T]) -> Vec<T> {
        let (c, c2) = (pp.cat.dom(tau), pp.cat.cod(tau));
        let y2 = pp.y.act(tau, y);
        self.slots(c2, y2)
            .iter()
            .map(|s| {
                let comp = pp.cat.compose(s.mor, tau).expect("composable");
                alpha[self.position(c, y, Slot { mor: comp, x: s.x })]
            })
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct NfNode {
    pub obj: usize,
    pub cons: usize,
    pub children: Vec<usize>,
}

/// Interned trees, addressed by id.
#[derive(Clone, Debug, Default)]
pub struct NfPool {
    nodes: Vec<NfNode>,
    heights: Vec<usize>,
    index: HashMap<NfNode, usize>,
}

impl NfPool {
    pub fn intern(&mut self, node: NfNode) -> usize {
        if let Some(&id) = self.index.get(&node) {
            return id;
        }
        let h = 1 + node.children.iter().map(|&c| self.heights[c]).max().unwrap_or(0);
        let id = self.nodes.len();
        self.index.insert(node.clone(), id);
        self.nodes.push(node);
        self.heights.push(h);
        id
    }

    pub fn find(&self, node: &NfNode) -> Option<usize> {
        self.index.get(node).copied()
    }

    pub fn node(&self, id: usize) -> &NfNode {
        &self.nodes[id]
    }

    pub fn height(&self, id: usize) -> usize {
        self.heights[id]
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// `y` for a leaf, `y(child,…)` with children in slot order.
    pub fn render(&self, id: usize, pp: &PshPolyRed) -> String {
        let n = &self.nodes[id];
        let name = pp.y.components[n.obj].name(n.cons);
        if n.children.is_empty() {
            name.to_string()
        } else {
            let kids: Vec<String> = n.children.iter().map(|&c| self.render(c, pp)).collect();
            format!("{name}({})", kids.join(","))
        }
    }
}

/// The action of `tau` on a tree at its domain.
pub fn act_tree(pp: &PshPolyRed, slots: &SlotTable, pool: &mut NfPool, tau: usize, t: usize) -> usize {
    let node = pool.node(t).clone();
    let c2 = pp.cat.cod(tau);
    let y2 = pp.y.act(tau, node.cons);
    if let Some(x) = pp.reduction_place(c2, y2) {
        return node.children[slots.position(node.obj, node.cons, Slot { mor: tau, x })];
    }
    let children = slots.restrict(pp, tau, node.cons, &node.children);
    pool.intern(NfNode {
        obj: c2,
        cons: y2,
        children,
    })
}

/// A bounded stage of the normal forms.
#[derive(Clone, Debug)]
pub struct NFragment {
    pub pool: NfPool,
    /// Tree ids at each object, in level order.
    pub members: Vec<Vec<usize>>,
    pub status: Status,
    pub depth: usize,
    pub slots: SlotTable,
    act: HashMap<(usize, usize), usize>,
    base: Vec<usize>,
}

impl NFragment {
    pub fn component(&self, c: usize) -> &[usize] {
        &self.members[c]
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.members.iter().map(Vec::len).collect()
    }

    pub fn len(&self) -> usize {
        self.members.iter().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn position(&self, c: usize, id: usize) -> Option<usize> {
        self.members[c].iter().position(|&t| t == id)
    }

    /// The `Z`-element a tree lies over.
    pub fn base(&self, id: usize) -> usize {
        self.base[id]
    }

    /// The action on a member, from the closure table.
    pub fn act(&self, tau: usize, id: usize) -> Option<usize> {
        self.act.get(&(tau, id)).copied()
    }

    pub fn render(&self, id: usize, pp: &PshPolyRed) -> String {
        self.pool.render(id, pp)
    }

    pub fn render_component(&self, c: usize, pp: &PshPolyRed) -> Vec<String> {
        self.members[c].iter().map(|&t| self.render(t, pp)).collect()
    }

    /// The fragment as a diagram with its map to `Z`.
    pub fn to_diagram(&self, pp: &PshPolyRed) -> Result<(Diagram, DiagMap)> {
        let comps: Vec<Fin> = (0..pp.cat.object_count())
            .map(|c| Fin::new(self.render_component(c, pp)))
            .collect::<Result<_>>()?;
        let mut actions = Vec::with_capacity(pp.cat.morphism_count());
        for m in 0..pp.cat.morphism_count() {
            let (a, b) = (pp.cat.dom(m), pp.cat.cod(m));
            let mut table = Vec::new();
            for &t in &self.members[a] {
                let img = self
                    .act(m, t)
                    .and_then(|i| self.position(b, i))
                    .ok_or_else(|| Error::InternalContradiction("fragment not closed under the action".into()))?;
                table.push(img);
            }
            actions.push(table);
        }
        let d = Diagram::new(pp.cat.clone(), comps, actions)?;
        let to_z = DiagMap {
            tables: self
                .members
                .iter()
                .map(|ts| ts.iter().map(|&t| self.base[t]).collect())
                .collect(),
        };
        Ok((d, to_z))
    }

    /// Adds a tree with arbitrary children, bypassing the naturality filter.
    pub fn inject(&mut self, pp: &PshPolyRed, obj: usize, cons: usize, children: Vec<usize>) -> usize {
        let id = self.pool.intern(NfNode { obj, cons, children });
        self.base.resize(self.pool.len(), 0);
        self.base[id] = pp.g.apply(obj, cons);
        if !self.members[obj].contains(&id) {
            self.members[obj].push(id);
        }
        id
    }
}

struct LevelTarget<'a> {
    members: &'a [Vec<usize>],
    base: &'a [usize],
    act: &'a HashMap<(usize, usize), usize>,
}

impl PshTarget for LevelTarget<'_> {
    fn fibre(&self, obj: usize, z: usize) -> Vec<usize> {
        self.members[obj].iter().copied().filter(|&t| self.base[t] == z).collect()
    }

    fn act(&self, mor: usize, e: usize) -> usize {
        self.act[&(mor, e)]
    }
}

impl PshTarget for NFragment {
    fn fibre(&self, obj: usize, z: usize) -> Vec<usize> {
        self.members[obj].iter().copied().filter(|&t| self.base[t] == z).collect()
    }

    fn act(&self, mor: usize, e: usize) -> usize {
        self.act[&(mor, e)]
    }
}

/// Levels of normal forms; `Finite` once a level repeats.
pub fn enumerate_n(pp: &PshPolyRed, budget: Budget) -> Result<NFragment> {
    if !pp.check_locally_decidable() {
        return Err(Error::NotLocallyDecidable);
    }
    let slots = SlotTable::new(pp);
    let objs = pp.cat.object_count();
    let mut pool = NfPool::default();
    let mut base: Vec<usize> = Vec::new();
    let mut act: HashMap<(usize, usize), usize> = HashMap::new();
    let mut members: Vec<Vec<usize>> = vec![Vec::new(); objs];
    let mut depth = 0;
    let mut status = Status::Truncated { depth: 0 };
    while depth < budget.max_depth {
        let mut next = members.clone();
        let mut seen: Vec<HashSet<usize>> = members.iter().map(|m| m.iter().copied().collect()).collect();
        let mut total: usize = members.iter().map(Vec::len).sum();
        let mut over = false;
        'objects: for c in 0..objs {
            for y in pp.normal_constructors(c) {
                let target = LevelTarget {
                    members: &members,
                    base: &base,
                    act: &act,
                };
                for children in pi_families(pp, &target, c, y) {
                    let id = pool.intern(NfNode { obj: c, cons: y, children });
                    if seen[c].insert(id) {
                        total += 1;
                        if total > budget.max_count {
                            over = true;
                            break 'objects;
                        }
                        next[c].push(id);
                    }
                }
            }
        }
        if over {
            break;
        }
        base.resize(pool.len(), 0);
        for (c, ts) in next.iter().enumerate() {
            for &t in ts {
                base[t] = pp.g.apply(c, pool.node(t).cons);
            }
        }
        for (c, ts) in next.iter().enumerate() {
            for &t in ts {
                for &tau in pp.cat.outgoing(c) {
                    if act.contains_key(&(tau, t)) {
                        continue;
                    }
                    let img = act_tree(pp, &slots, &mut pool, tau, t);
                    if !seen[pp.cat.cod(tau)].contains(&img) {
                        return Err(Error::InternalContradiction(format!(
                            "action of `{}` leaves the level",
                            pp.cat.morphism(tau).name
                        )));
                    }
                    act.insert((tau, t), img);
                }
            }
        }
        let grew = next != members;
        members = next;
        if !grew {
            status = Status::Finite;
            break;
        }
        depth += 1;
        status = Status::Truncated { depth };
    }
    base.resize(pool.len(), 0);
    Ok(NFragment {
        pool,
        members,
        status,
        depth,
        slots,
        act,
        base,
    })
}

/// Identity and composition laws for the action, on every member; the
/// action is recomputed from the trees rather than read from the table.
pub fn check_presheaf_laws(pp: &PshPolyRed, frag: &NFragment) -> LawReport {
    let mut r = LawReport::default();
    let mut pool = frag.pool.clone();
    let cat = &pp.cat;
    for c in 0..cat.object_count() {
        for &t in &frag.members[c] {
            r.checked += 1;
            if act_tree(pp, &frag.slots, &mut pool, cat.identity(c), t) != t {
                r.violations.push(format!("identity law fails at `{}`", pool.render(t, pp)));
            }
            for &s in cat.outgoing(c) {
                let once = act_tree(pp, &frag.slots, &mut pool, s, t);
                for &tau in cat.outgoing(cat.cod(s)) {
                    r.checked += 1;
                    let comp = cat.compose(tau, s).expect("composable");
                    let direct = act_tree(pp, &frag.slots, &mut pool, comp, t);
                    let stepwise = act_tree(pp, &frag.slots, &mut pool, tau, once);
                    if direct != stepwise {
                        r.violations.push(format!(
                            "composition law fails at `{}` for `{}∘{}`",
                            pool.render(t, pp),
                            cat.morphism(tau).name,
                            cat.morphism(s).name
                        ));
                    }
                }
            }
        }
    }
    r
}

/// Every tree's children family is natural for the recomputed action.
pub fn check_hereditary(pp: &PshPolyRed, frag: &NFragment) -> LawReport {
    let mut r = LawReport::default();
    let mut pool = frag.pool.clone();
    let mut stack: Vec<usize> = frag.members.iter().flatten().copied().collect();
    let mut done = HashSet::new();
    while let Some(t) = stack.pop() {
        if !done.insert(t) {
            continue;
        }
        let node = pool.node(t).clone();
        stack.extend(&node.children);
        if pp.reduction_place(node.obj, node.cons).is_some() {
            r.violations.push(format!("`{}` reduces at its own object", pool.render(t, pp)));
        }
        for (i, s) in frag.slots.slots(node.obj, node.cons).iter().enumerate() {
            for &tau in pp.cat.outgoing(pp.cat.cod(s.mor)) {
                r.checked += 1;
                let comp = pp.cat.compose(tau, s.mor).expect("composable");
                let j = frag.slots.position(node.obj, node.cons, Slot { mor: comp, x: pp.x.act(tau, s.x) });
                if act_tree(pp, &frag.slots, &mut pool, tau, node.children[i]) != node.children[j] {
                    r.violations.push(format!("`{}` is not natural", pool.render(t, pp)));
                }
            }
        }
    }
    r
}

/// The structure map: the child at the reduction place if `y` reduces at
/// `c`, and `sup(y, α)` otherwise.
pub fn algebra_s(pp: &PshPolyRed, frag: &NFragment, c: usize, y: usize, alpha: &[usize]) -> Result<usize> {
    let slots = frag.slots.slots(c, y);
    if alpha.len() != slots.len() {
        return Err(Error::ShapeMismatch("family has the wrong number of slots".into()));
    }
    for (s, &t) in slots.iter().zip(alpha) {
        if frag.position(pp.cat.cod(s.mor), t).is_none() {
            return Err(Error::IllDefined("family leaves the fragment".into()));
        }
    }
    if let Some(x) = pp.reduction_place(c, y) {
        let i = frag.slots.position(c, y, Slot { mor: pp.cat.identity(c), x });
        return Ok(alpha[i]);
    }
    frag.pool
        .find(&NfNode {
            obj: c,
            cons: y,
            children: alpha.to_vec(),
        })
        .filter(|&t| frag.position(c, t).is_some())
        .ok_or(Error::NotFinite(frag.depth))
}

/// All `(c, y, α)` with `α` natural into the fragment.
pub fn fragment_cells(pp: &PshPolyRed, frag: &NFragment) -> Vec<(usize, usize, Vec<usize>)> {
    let mut out = Vec::new();
    for c in 0..pp.cat.object_count() {
        for y in 0..pp.y.components[c].len() {
            for alpha in pi_families(pp, frag, c, y) {
                out.push((c, y, alpha));
            }
        }
    }
    out
}

/// `s` commutes with the action and satisfies the reduction equations.
pub fn check_s(pp: &PshPolyRed, frag: &NFragment) -> LawReport {
    let mut r = LawReport::default();
    for (c, y, alpha) in fragment_cells(pp, frag) {
        let s = match algebra_s(pp, frag, c, y, &alpha) {
            Ok(s) => s,
            Err(e) => {
                r.violations.push(format!("s undefined: {e}"));
                continue;
            }
        };
        for x in pp.arity(c, y).iter().copied().filter(|&x| pp.reduces(c, x)) {
            r.checked += 1;
            let i = frag.slots.position(c, y, Slot { mor: pp.cat.identity(c), x });
            if alpha[i] != s {
                r.violations.push("reduction equation fails".into());
            }
        }
        for &tau in pp.cat.outgoing(c) {
            r.checked += 1;
            let moved = frag.slots.restrict(pp, tau, y, &alpha);
            let rhs = algebra_s(pp, frag, pp.cat.cod(tau), pp.y.act(tau, y), &moved);
            if frag.act(tau, s).map(Ok) != Some(rhs.map_err(|e| e.to_string())) {
                r.violations.push(format!("s does not commute with `{}`", pp.cat.morphism(tau).name));
            }
        }
    }
    r
}

/// An algebra: a diagram over `Z` with a structure map on natural families.
#[derive(Clone, Debug)]
pub struct PshAlgebra {
    pub carrier: Diagram,
    pub to_base: DiagMap,
    /// `(c, y, α) -> element`, families given by element positions.
    pub ops: HashMap<(usize, usize, Vec<usize>), usize>,
}

impl PshAlgebra {
    pub fn over(&self) -> Over<'_> {
        Over {
            diagram: &self.carrier,
            to_base: &self.to_base,
        }
    }

    pub fn apply(&self, c: usize, y: usize, alpha: &[usize]) -> Option<usize> {
        self.ops.get(&(c, y, alpha.to_vec())).copied()
    }

    /// The normal forms with `s`, as an algebra.
    pub fn from_fragment(pp: &PshPolyRed, frag: &NFragment) -> Result<Self> {
        let (carrier, to_base) = frag.to_diagram(pp)?;
        let mut ops = HashMap::new();
        for (c, y, alpha) in fragment_cells(pp, frag) {
            let s = algebra_s(pp, frag, c, y, &alpha)?;
            let pos: Vec<usize> = alpha
                .iter()
                .zip(frag.slots.slots(c, y))
                .map(|(&t, sl)| frag.position(pp.cat.cod(sl.mor), t).expect("member"))
                .collect();
            ops.insert((c, y, pos), frag.position(c, s).expect("member"));
        }
        Ok(PshAlgebra { carrier, to_base, ops })
    }
}

/// Naturality of the structure map, fibres, and reduction equations.
pub fn check_psh_algebra(pp: &PshPolyRed, alg: &PshAlgebra) -> LawReport {
    let mut r = LawReport::default();
    let nat = check_natural(&alg.to_base, &alg.carrier, &pp.z);
    if !nat.passes() {
        return nat;
    }
    let slots = SlotTable::new(pp);
    let over = alg.over();
    for c in 0..pp.cat.object_count() {
        for y in 0..pp.y.components[c].len() {
            for alpha in pi_families(pp, &over, c, y) {
                r.checked += 1;
                let Some(v) = alg.apply(c, y, &alpha) else {
                    r.violations.push(format!("undefined at `{}`", pp.y.components[c].name(y)));
                    continue;
                };
                if alg.to_base.apply(c, v) != pp.g.apply(c, y) {
                    r.violations.push(format!("`{}` lands in the wrong fibre", pp.y.components[c].name(y)));
                }
                if let Some(x) = pp.reduction_place(c, y) {
                    let i = slots.position(c, y, Slot { mor: pp.cat.identity(c), x });
                    if alpha[i] != v {
                        r.violations.push(format!("reduction fails at `{}`", pp.y.components[c].name(y)));
                    }
                }
                for &tau in pp.cat.outgoing(c) {
                    let moved = slots.restrict(pp, tau, y, &alpha);
                    let rhs = alg.apply(pp.cat.cod(tau), pp.y.act(tau, y), &moved);
                    if rhs != Some(alg.carrier.act(tau, v)) {
                        r.violations.push(format!(
                            "`{}` not natural for `{}`",
                            pp.y.components[c].name(y),
                            pp.cat.morphism(tau).name
                        ));
                    }
                }
            }
        }
    }
    r
}

/// Every algebra structure on `carrier`, by brute force.
pub fn enumerate_psh_algebras(
    pp: &PshPolyRed,
    carrier: &Diagram,
    to_base: &DiagMap,
    cap: usize,
) -> Result<Vec<PshAlgebra>> {
    let over = Over {
        diagram: carrier,
        to_base,
    };
    let slots = SlotTable::new(pp);
    let mut cells = Vec::new();
    let mut choices = Vec::new();
    for c in 0..pp.cat.object_count() {
        for y in 0..pp.y.components[c].len() {
            for alpha in pi_families(pp, &over, c, y) {
                let options = match pp.reduction_place(c, y) {
                    Some(x) => vec![alpha[slots.position(c, y, Slot { mor: pp.cat.identity(c), x })]],
                    None => over.fibre(c, pp.g.apply(c, y)),
                };
                cells.push((c, y, alpha));
                choices.push(options);
            }
        }
    }
    let needed = Assignments::count(&choices);
    if needed > cap as u128 {
        return Err(Error::CapExceeded {
            what: "algebra structures",
            needed,
            cap: cap as u128,
        });
    }
    let mut out = Vec::new();
    for pick in Assignments::new(&choices) {
        let ops = cells.iter().cloned().zip(pick).collect();
        let alg = PshAlgebra {
            carrier: carrier.clone(),
            to_base: to_base.clone(),
            ops,
        };
        if check_psh_algebra(pp, &alg).passes() {
            out.push(alg);
        }
    }
    Ok(out)
}

/// Whether `m` (indexed by fragment positions) preserves structure.
pub fn is_psh_homomorphism(pp: &PshPolyRed, frag: &NFragment, alg: &PshAlgebra, m: &DiagMap) -> Result<bool> {
    let (d, _) = frag.to_diagram(pp)?;
    if !check_natural(m, &d, &alg.carrier).passes() {
        return Ok(false);
    }
    let at = |c: usize, t: usize| m.apply(c, frag.position(c, t).expect("member"));
    for (c, y, alpha) in fragment_cells(pp, frag) {
        let s = algebra_s(pp, frag, c, y, &alpha)?;
        let image: Vec<usize> = alpha
            .iter()
            .zip(frag.slots.slots(c, y))
            .map(|(&t, sl)| at(pp.cat.cod(sl.mor), t))
            .collect();
        if alg.apply(c, y, &image) != Some(at(c, s)) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The map to an algebra by recursion on normal forms, then checked.
pub fn initial_t(pp: &PshPolyRed, frag: &NFragment, alg: &PshAlgebra) -> Result<DiagMap> {
    if !frag.status.is_finite() {
        return Err(Error::NotFinite(frag.depth));
    }
    let mut order: Vec<(usize, usize)> = frag
        .members
        .iter()
        .enumerate()
        .flat_map(|(c, ts)| ts.iter().map(move |&t| (c, t)))
        .collect();
    order.sort_by_key(|&(_, t)| frag.pool.height(t));
    let mut value: HashMap<usize, usize> = HashMap::new();
    for (c, t) in order {
        let node = frag.pool.node(t);
        let image: Vec<usize> = node.children.iter().map(|k| value[k]).collect();
        let v = alg.apply(c, node.cons, &image).ok_or_else(|| {
            Error::NotAnAlgebra(format!("no value at `{}`", frag.render(t, pp)))
        })?;
        value.insert(t, v);
    }
    let t = DiagMap {
        tables: frag
            .members
            .iter()
            .map(|ts| ts.iter().map(|k| value[k]).collect())
            .collect(),
    };
    if !is_psh_homomorphism(pp, frag, alg, &t)? {
        return Err(Error::NotAnAlgebra("recursively defined map is not a homomorphism".into()));
    }
    Ok(t)
}

/// Every homomorphism from the fragment to `alg`, by brute force.
pub fn psh_homomorphisms(pp: &PshPolyRed, frag: &NFragment, alg: &PshAlgebra, cap: usize) -> Result<Vec<DiagMap>> {
    let over = alg.over();
    let mut cells = Vec::new();
    let mut choices = Vec::new();
    for (c, ts) in frag.members.iter().enumerate() {
        for &t in ts {
            cells.push(c);
            choices.push(over.fibre(c, frag.base(t)));
        }
    }
    let needed = Assignments::count(&choices);
    if needed > cap as u128 {
        return Err(Error::CapExceeded {
            what: "candidate maps",
            needed,
            cap: cap as u128,
        });
    }
    let mut out = Vec::new();
    for pick in Assignments::new(&choices) {
        let mut tables = vec![Vec::new(); pp.cat.object_count()];
        for (&c, v) in cells.iter().zip(pick) {
            tables[c].push(v);
        }
        let m = DiagMap { tables };
        if is_psh_homomorphism(pp, frag, alg, &m)? {
            out.push(m);
        }
    }
    Ok(out)
}

/// Outcome of checking one target algebra.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PshTargetOutcome {
    Unique,
    Failed(String),
}

/// `initial_t` exists and is the only homomorphism.
pub fn check_psh_target(pp: &PshPolyRed, frag: &NFragment, alg: &PshAlgebra, cap: usize) -> Result<PshTargetOutcome> {
    let t = match initial_t(pp, frag, alg) {
        Ok(t) => t,
        Err(Error::NotAnAlgebra(msg)) => return Ok(PshTargetOutcome::Failed(msg)),
        Err(e) => return Err(e),
    };
    let all = psh_homomorphisms(pp, frag, alg, cap)?;
    Ok(match all.as_slice() {
        [only] if *only == t => PshTargetOutcome::Unique,
        _ => PshTargetOutcome::Failed(format!("{} homomorphisms", all.len())),
    })
}

/// All diagrams over `Z` whose components have at most `max_size`
/// elements, each with its map to `Z`.
pub fn small_diagrams_over(pp: &PshPolyRed, max_size: usize, cap: usize) -> Result<Vec<(Diagram, DiagMap)>> {
    let cat = pp.cat.clone();
    let objs = cat.object_count();
    // per object: a size and a map to Z(c)
    let mut shapes: Vec<Vec<Vec<usize>>> = Vec::new();
    for c in 0..objs {
        let zc = pp.z.components[c].len();
        let mut maps = Vec::new();
        for n in 0..=max_size {
            let ch = vec![(0..zc).collect::<Vec<_>>(); n];
            maps.extend(Assignments::new(&ch));
        }
        shapes.push(maps);
    }
    let shape_choices: Vec<Vec<usize>> = shapes.iter().map(|s| (0..s.len()).collect()).collect();
    let mut out = Vec::new();
    for pick in Assignments::new(&shape_choices) {
        let to_z: Vec<Vec<usize>> = pick.iter().enumerate().map(|(c, &k)| shapes[c][k].clone()).collect();
        let comps: Vec<Fin> = to_z
            .iter()
            .map(|t| Fin::new((0..t.len()).map(|i| format!("e{i}"))))
            .collect::<Result<_>>()?;
        // actions of non-identity morphisms, respecting the map to Z
        let mors: Vec<usize> = (0..cat.morphism_count()).filter(|&m| !cat.is_identity(m)).collect();
        let mut cells = Vec::new();
        let mut choices = Vec::new();
        for &m in &mors {
            let (a, b) = (cat.dom(m), cat.cod(m));
            for e in 0..to_z[a].len() {
                let z2 = pp.z.act(m, to_z[a][e]);
                cells.push((m, e));
                choices.push((0..to_z[b].len()).filter(|&e2| to_z[b][e2] == z2).collect());
            }
        }
        let needed = Assignments::count(&choices);
        if needed + out.len() as u128 > cap as u128 {
            return Err(Error::CapExceeded {
                what: "target diagrams",
                needed: needed + out.len() as u128,
                cap: cap as u128,
            });
        }
        for acts in Assignments::new(&choices) {
            let mut tables: Vec<Vec<usize>> = (0..cat.morphism_count())
                .map(|m| (0..to_z[cat.dom(m)].len()).collect())
                .collect();
            for (&(m, e), v) in cells.iter().zip(acts) {
                tables[m][e] = v;
            }
            let d = Diagram::new(cat.clone(), comps.clone(), tables)?;
            if crate::prescat::check_diagram(&d).passes() {
                out.push((d, DiagMap { tables: to_z.clone() }));
            }
        }
    }
    Ok(out)
}
