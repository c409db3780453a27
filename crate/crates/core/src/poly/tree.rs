//! Interned well-founded trees and bottom-up level saturation.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::fin::Assignments;
use crate::{Budget, Status};

use super::{Classification, PolyRed};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TreeId(pub u32);

impl TreeId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// The label of a node.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Head {
    /// A constructor of the polynomial.
    Cons(usize),
    /// The unique element `∗` over a base element.
    Star(usize),
    /// A constructor together with one of its covers.
    Cover { cons: usize, cover: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Node {
    pub head: Head,
    pub children: Vec<TreeId>,
}

/// Hash-consing store: structurally equal trees share one id.
#[derive(Clone, Debug, Default)]
pub struct TreePool {
    nodes: Vec<Node>,
    base: Vec<usize>,
    height: Vec<usize>,
    index: HashMap<Node, TreeId>,
}

impl TreePool {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn intern(&mut self, node: Node, base: usize) -> TreeId {
        if let Some(&id) = self.index.get(&node) {
            return id;
        }
        let id = TreeId(self.nodes.len() as u32);
        let h = 1 + node
            .children
            .iter()
            .map(|c| self.height[c.index()])
            .max()
            .unwrap_or(0);
        self.index.insert(node.clone(), id);
        self.nodes.push(node);
        self.base.push(base);
        self.height.push(h);
        id
    }

    pub fn get(&self, node: &Node) -> Option<TreeId> {
        self.index.get(node).copied()
    }

    pub fn node(&self, id: TreeId) -> &Node {
        &self.nodes[id.index()]
    }

    pub fn base(&self, id: TreeId) -> usize {
        self.base[id.index()]
    }

    pub fn height(&self, id: TreeId) -> usize {
        self.height[id.index()]
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Term notation, e.g. `succ(succ(zero))`. The star renders as `∗`,
    /// suffixed with its base element when the context has several.
    pub fn render(&self, id: TreeId, p: &PolyRed) -> String {
        let mut out = String::new();
        self.render_into(id, p, &mut out);
        out
    }

    fn render_into(&self, id: TreeId, p: &PolyRed, out: &mut String) {
        let node = self.node(id);
        match node.head {
            Head::Star(z) => {
                out.push('∗');
                if p.base().len() > 1 {
                    out.push_str(p.base_name(z));
                }
                return;
            }
            Head::Cons(y) => out.push_str(p.cons_name(y)),
            Head::Cover { cons, cover } => {
                out.push_str(p.cons_name(cons));
                if cover > 0 {
                    out.push('#');
                    out.push_str(&cover.to_string());
                }
            }
        }
        if node.children.is_empty() {
            return;
        }
        out.push('(');
        for (k, &c) in node.children.iter().enumerate() {
            if k > 0 {
                out.push(',');
            }
            self.render_into(c, p, out);
        }
        out.push(')');
    }
}

/// One operation of a signature: its head, the base element it produces
/// and the base element of each argument.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct Op {
    pub head: Head,
    pub base: usize,
    pub args: Vec<usize>,
}

#[derive(Clone, Debug, Default)]
pub(crate) struct Signature {
    pub base_len: usize,
    pub ops: Vec<Op>,
}

impl Signature {
    pub fn new(base_len: usize) -> Self {
        Signature {
            base_len,
            ops: Vec::new(),
        }
    }

    pub fn push(&mut self, head: Head, base: usize, args: Vec<usize>) {
        self.ops.push(Op { head, base, args });
    }

    /// The plain polynomial signature (reductions ignored).
    pub fn of_poly(p: &PolyRed) -> Self {
        let mut sig = Signature::new(p.base().len());
        for y in 0..p.constructors().len() {
            let args = p.arity_of(y).iter().map(|&x| p.reindex(x)).collect();
            sig.push(Head::Cons(y), p.cons_base(y), args);
        }
        sig
    }
}

/// Trees of bounded height, fibre by fibre.
#[derive(Clone, Debug)]
pub struct Levels {
    pub pool: TreePool,
    pub fibres: Vec<Vec<TreeId>>,
    pub status: Status,
    /// Number of complete levels computed.
    pub depth: usize,
}

impl Levels {
    pub fn len(&self) -> usize {
        self.fibres.iter().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn fibre_sizes(&self) -> Vec<usize> {
        self.fibres.iter().map(Vec::len).collect()
    }

    pub fn contains(&self, id: TreeId) -> bool {
        self.fibres[self.pool.base(id)].contains(&id)
    }

    /// Position of `id` in its fibre.
    pub fn position(&self, id: TreeId) -> Option<usize> {
        self.fibres[self.pool.base(id)].iter().position(|&t| t == id)
    }

    pub fn render_fibre(&self, z: usize, p: &PolyRed) -> Vec<String> {
        self.fibres[z]
            .iter()
            .map(|&t| self.pool.render(t, p))
            .collect()
    }
}

/// Level saturation `L_0 = ∅`, `L_{k+1}` = all op applications to `L_k`.
///
/// Elements keep their position once they appear; new elements follow in
/// op order and then lexicographic argument order. Stops with `Finite`
/// when a level repeats, or `Truncated` at the last level that fits the
/// budget.
pub(crate) fn saturate_levels(sig: &Signature, budget: Budget) -> Levels {
    let mut pool = TreePool::new();
    let mut fibres: Vec<Vec<TreeId>> = vec![Vec::new(); sig.base_len];
    let mut depth = 0;
    loop {
        if depth == budget.max_depth {
            return Levels {
                pool,
                fibres,
                status: Status::Truncated { depth },
                depth,
            };
        }
        let needed = sig
            .ops
            .iter()
            .map(|op| {
                op.args
                    .iter()
                    .fold(1u128, |n, &b| n.saturating_mul(fibres[b].len() as u128))
            })
            .fold(0u128, u128::saturating_add);
        if needed > budget.max_count as u128 {
            return Levels {
                pool,
                fibres,
                status: Status::Truncated { depth },
                depth,
            };
        }
        let mut next = fibres.clone();
        let mut grew = false;
        for op in &sig.ops {
            let choices: Vec<Vec<usize>> = op
                .args
                .iter()
                .map(|&b| (0..fibres[b].len()).collect())
                .collect();
            for pick in Assignments::new(&choices) {
                let children = pick
                    .iter()
                    .zip(&op.args)
                    .map(|(&k, &b)| fibres[b][k])
                    .collect();
                let before = pool.len();
                let id = pool.intern(
                    Node {
                        head: op.head,
                        children,
                    },
                    op.base,
                );
                if pool.len() > before {
                    next[op.base].push(id);
                    grew = true;
                }
            }
        }
        if !grew {
            return Levels {
                pool,
                fibres,
                status: Status::Finite,
                depth,
            };
        }
        fibres = next;
        depth += 1;
    }
}

/// The plain dependent W-type, truncated to trees of height at most `depth`.
pub fn enumerate_trees(p: &PolyRed, depth: usize) -> Result<Levels> {
    enumerate_trees_within(
        p,
        Budget {
            max_depth: depth,
            ..Budget::default()
        },
    )
}

/// [`enumerate_trees`] with an explicit count bound as well.
pub fn enumerate_trees_within(p: &PolyRed, budget: Budget) -> Result<Levels> {
    if p.classify() != Classification::NoReductions {
        return Err(Error::HasReductions);
    }
    Ok(saturate_levels(&Signature::of_poly(p), budget))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn nat_depth_three() {
        let p = fixtures::ex_nat();
        let l = enumerate_trees(&p, 3).unwrap();
        assert_eq!(l.render_fibre(0, &p), ["zero", "succ(zero)", "succ(succ(zero))"]);
        assert_eq!(l.status, Status::Truncated { depth: 3 });
    }

    #[test]
    fn btree_depth_three() {
        let l = enumerate_trees(&fixtures::ex_btree(), 3).unwrap();
        assert_eq!(l.len(), 5);
        let l = enumerate_trees(&fixtures::ex_btree(), 4).unwrap();
        assert_eq!(l.len(), 1 + 5 * 5);
    }

    #[test]
    fn no_base_case_is_empty_and_finite() {
        let p = PolyRed::builder(["*"])
            .constructor("loop", "*")
            .arity("l0", "loop", "*")
            .build()
            .unwrap();
        let l = enumerate_trees(&p, 10).unwrap();
        assert!(l.is_empty());
        assert_eq!(l.status, Status::Finite);
    }

    #[test]
    fn reductions_are_refused() {
        assert!(matches!(
            enumerate_trees(&fixtures::ex_one_red(), 2),
            Err(Error::HasReductions)
        ));
    }

    #[test]
    fn finite_when_level_repeats() {
        let p = fixtures::two_nullary();
        let l = enumerate_trees(&p, 16).unwrap();
        assert_eq!(l.status, Status::Finite);
        assert_eq!(l.depth, 1);
        assert_eq!(l.len(), 2);
    }

    #[test]
    fn count_cap_stops_early() {
        let l = saturate_levels(
            &Signature::of_poly(&fixtures::ex_btree()),
            Budget {
                max_depth: 10,
                max_count: 30,
            },
        );
        assert_eq!(l.status, Status::Truncated { depth: 4 });
        assert_eq!(l.len(), 26);
    }

    #[test]
    fn interning_shares_structure() {
        let mut pool = TreePool::new();
        let a = pool.intern(Node { head: Head::Cons(0), children: vec![] }, 0);
        let b = pool.intern(Node { head: Head::Cons(1), children: vec![a, a] }, 0);
        let b2 = pool.intern(Node { head: Head::Cons(1), children: vec![a, a] }, 0);
        assert_eq!(b, b2);
        assert_eq!(pool.height(b), 2);
        assert_eq!(pool.len(), 2);
    }
}
