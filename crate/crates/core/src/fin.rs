//! Finite sets with named elements, families over them, and the few
//! colimit constructions everything else is built from.
//!
//! Elements are addressed by their position in declared order. Names exist
//! for input/output and for the canonical choices made when quotienting:
//! the representative of a class is always its least member in declared
//! order.

use std::collections::HashMap;

use crate::error::{Error, Result};

/// An ordered finite set of distinct identifiers.
#[derive(Clone, Debug, Default)]
pub struct Fin {
    names: Vec<String>,
    index: HashMap<String, usize>,
}

impl PartialEq for Fin {
    fn eq(&self, other: &Self) -> bool {
        self.names == other.names
    }
}

impl Eq for Fin {}

impl Fin {
    pub fn new<I, S>(names: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut fin = Fin::default();
        for name in names {
            fin.push(name)?;
        }
        Ok(fin)
    }

    pub fn push(&mut self, name: impl Into<String>) -> Result<usize> {
        let name = name.into();
        if self.index.contains_key(&name) {
            return Err(Error::DuplicateName(name));
        }
        let id = self.names.len();
        self.index.insert(name.clone(), id);
        self.names.push(name);
        Ok(id)
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn position(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub(crate) fn lookup(&self, kind: &'static str, name: &str) -> Result<usize> {
        self.position(name).ok_or_else(|| Error::UnknownName {
            kind,
            name: name.to_string(),
        })
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &str)> {
        self.names.iter().enumerate().map(|(i, n)| (i, n.as_str()))
    }
}

/// A total function between finite sets given by its table.
///
/// The domain is `0..table.len()`; every entry lies in `0..codomain_len`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct FinMap {
    pub table: Vec<usize>,
    pub codomain_len: usize,
}

impl FinMap {
    pub fn new(table: Vec<usize>, codomain_len: usize) -> Result<Self> {
        if let Some(bad) = table.iter().find(|&&v| v >= codomain_len) {
            return Err(Error::malformed(format!(
                "map value {bad} outside codomain of size {codomain_len}"
            )));
        }
        Ok(FinMap {
            table,
            codomain_len,
        })
    }

    pub fn identity(n: usize) -> Self {
        FinMap {
            table: (0..n).collect(),
            codomain_len: n,
        }
    }

    pub fn apply(&self, x: usize) -> usize {
        self.table[x]
    }

    pub fn domain_len(&self) -> usize {
        self.table.len()
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &FinMap) -> FinMap {
        FinMap {
            table: self.table.iter().map(|&v| other.table[v]).collect(),
            codomain_len: other.codomain_len,
        }
    }

    pub fn is_injective(&self) -> bool {
        let mut seen = vec![false; self.codomain_len];
        self.table.iter().all(|&v| !std::mem::replace(&mut seen[v], true))
    }

    pub fn is_surjective(&self) -> bool {
        let mut seen = vec![false; self.codomain_len];
        for &v in &self.table {
            seen[v] = true;
        }
        seen.into_iter().all(|b| b)
    }
}

/// A family of finite sets indexed by a base of size `base_len`.
///
/// Stored as its total space together with the projection to the base; a
/// total-space element therefore determines its base element.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Fam {
    total: Fin,
    over: Vec<usize>,
    fibres: Vec<Vec<usize>>,
    local: Vec<usize>,
}

impl Fam {
    pub fn new<I, S>(base_len: usize, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (S, usize)>,
        S: Into<String>,
    {
        let mut fam = Fam::empty(base_len);
        for (name, b) in entries {
            fam.push(name, b)?;
        }
        Ok(fam)
    }

    pub fn empty(base_len: usize) -> Self {
        Fam {
            total: Fin::default(),
            over: Vec::new(),
            fibres: vec![Vec::new(); base_len],
            local: Vec::new(),
        }
    }

    pub fn push(&mut self, name: impl Into<String>, base: usize) -> Result<usize> {
        if base >= self.fibres.len() {
            return Err(Error::malformed(format!(
                "base index {base} outside base of size {}",
                self.fibres.len()
            )));
        }
        let id = self.total.push(name)?;
        self.over.push(base);
        self.local.push(self.fibres[base].len());
        self.fibres[base].push(id);
        Ok(id)
    }

    pub fn base_len(&self) -> usize {
        self.fibres.len()
    }

    pub fn total(&self) -> &Fin {
        &self.total
    }

    pub fn len(&self) -> usize {
        self.over.len()
    }

    pub fn is_empty(&self) -> bool {
        self.over.is_empty()
    }

    pub fn name(&self, e: usize) -> &str {
        self.total.name(e)
    }

    pub fn over(&self, e: usize) -> usize {
        self.over[e]
    }

    pub fn projection(&self) -> &[usize] {
        &self.over
    }

    pub fn fibre(&self, b: usize) -> &[usize] {
        &self.fibres[b]
    }

    pub fn fibres(&self) -> &[Vec<usize>] {
        &self.fibres
    }

    /// Position of `e` inside its own fibre.
    pub fn local_index(&self, e: usize) -> usize {
        self.local[e]
    }

    pub fn fibre_sizes(&self) -> Vec<usize> {
        self.fibres.iter().map(Vec::len).collect()
    }

    /// Pullback along `along: new base -> old base`. Element names are
    /// `"{new base name}|{old element name}"` unless `along` is injective,
    /// in which case the old names are kept.
    pub fn pullback(&self, along: &[usize], new_base: &Fin) -> Result<Fam> {
        let injective = FinMap {
            table: along.to_vec(),
            codomain_len: self.base_len(),
        }
        .is_injective();
        let mut out = Fam::empty(along.len());
        for (nb, &ob) in along.iter().enumerate() {
            for &e in self.fibre(ob) {
                let name = if injective {
                    self.name(e).to_string()
                } else {
                    format!("{}|{}", new_base.name(nb), self.name(e))
                };
                out.push(name, nb)?;
            }
        }
        Ok(out)
    }
}

/// Partition of `0..n` with least-index representatives.
#[derive(Clone, Debug)]
pub struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        let mut root = x;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        while self.parent[x] != root {
            let next = self.parent[x];
            self.parent[x] = root;
            x = next;
        }
        root
    }

    /// Merge the classes of `a` and `b`; the smaller root wins.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.parent[hi] = lo;
        true
    }

    pub fn into_quotient(mut self) -> Quotient {
        let n = self.parent.len();
        let mut class_of = vec![usize::MAX; n];
        let mut reps = Vec::new();
        for x in 0..n {
            let r = self.find(x);
            if class_of[r] == usize::MAX {
                class_of[r] = reps.len();
                reps.push(r);
            }
            class_of[x] = class_of[r];
        }
        Quotient { class_of, reps }
    }
}

/// The result of quotienting `0..n`: classes are numbered in order of their
/// least member, which is the representative.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Quotient {
    pub class_of: Vec<usize>,
    pub reps: Vec<usize>,
}

impl Quotient {
    pub fn from_pairs(n: usize, pairs: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut uf = UnionFind::new(n);
        for (a, b) in pairs {
            uf.union(a, b);
        }
        uf.into_quotient()
    }

    pub fn len(&self) -> usize {
        self.reps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reps.is_empty()
    }
}

/// Pushout of `left <- apex -> right` in finite sets.
///
/// The disjoint union lists `left` first, then `right`; classes and their
/// representatives follow that order.
#[derive(Clone, Debug)]
pub struct Pushout {
    pub quotient: Quotient,
    pub left_len: usize,
}

impl Pushout {
    pub fn new(left_len: usize, right_len: usize, to_left: &[usize], to_right: &[usize]) -> Self {
        assert_eq!(to_left.len(), to_right.len(), "pushout legs disagree on apex");
        let quotient = Quotient::from_pairs(
            left_len + right_len,
            to_left
                .iter()
                .zip(to_right)
                .map(|(&l, &r)| (l, left_len + r)),
        );
        Pushout { quotient, left_len }
    }

    pub fn len(&self) -> usize {
        self.quotient.len()
    }

    pub fn is_empty(&self) -> bool {
        self.quotient.is_empty()
    }

    pub fn inl(&self, a: usize) -> usize {
        self.quotient.class_of[a]
    }

    pub fn inr(&self, b: usize) -> usize {
        self.quotient.class_of[self.left_len + b]
    }
}

/// All choice functions picking one entry from each list, in lexicographic
/// order (the first list varies slowest). The empty product has exactly one
/// element.
#[derive(Clone, Debug)]
pub struct Assignments<'a> {
    choices: &'a [Vec<usize>],
    cursor: Option<Vec<usize>>,
}

impl<'a> Assignments<'a> {
    pub fn new(choices: &'a [Vec<usize>]) -> Self {
        let cursor = if choices.iter().any(Vec::is_empty) {
            None
        } else {
            Some(vec![0; choices.len()])
        };
        Assignments { choices, cursor }
    }

    pub fn count(choices: &[Vec<usize>]) -> u128 {
        choices
            .iter()
            .fold(1u128, |acc, c| acc.saturating_mul(c.len() as u128))
    }
}

impl Iterator for Assignments<'_> {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let cursor = self.cursor.as_mut()?;
        let out = cursor
            .iter()
            .zip(self.choices)
            .map(|(&k, c)| c[k])
            .collect();
        let mut pos = cursor.len();
        loop {
            if pos == 0 {
                self.cursor = None;
                break;
            }
            pos -= 1;
            cursor[pos] += 1;
            if cursor[pos] < self.choices[pos].len() {
                break;
            }
            cursor[pos] = 0;
        }
        Some(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn duplicate_names_rejected() {
        assert!(matches!(Fin::new(["a", "b", "a"]), Err(Error::DuplicateName(n)) if n == "a"));
    }

    #[test]
    fn pushout_along_identity_is_other_leg() {
        let po = Pushout::new(3, 3, &[0, 1, 2], &[0, 1, 2]);
        assert_eq!(po.len(), 3);
        assert_eq!((0..3).map(|b| po.inr(b)).collect::<Vec<_>>(), vec![0, 1, 2]);
    }

    #[test]
    fn pushout_representatives_are_least() {
        // 0 <- a -> 1 and 0 <- b -> 0: glue left 0 with right 0 and right 1
        let po = Pushout::new(2, 2, &[0, 0], &[1, 0]);
        assert_eq!(po.len(), 2);
        assert_eq!(po.quotient.reps, vec![0, 1]);
        assert_eq!(po.inr(0), po.inl(0));
        assert_eq!(po.inr(1), po.inl(0));
    }

    #[test]
    fn assignments_lexicographic_and_empty_product() {
        let choices = vec![vec![0, 1], vec![5, 6]];
        let all: Vec<_> = Assignments::new(&choices).collect();
        assert_eq!(all, vec![vec![0, 5], vec![0, 6], vec![1, 5], vec![1, 6]]);
        let none: Vec<Vec<usize>> = vec![];
        assert_eq!(Assignments::new(&none).count(), 1);
        let blocked = vec![vec![1], vec![]];
        assert_eq!(Assignments::new(&blocked).count(), 0);
    }

    #[test]
    fn fam_fibres_follow_declared_order() {
        let fam = Fam::new(2, [("p", 1), ("q", 0), ("r", 1)]).unwrap();
        assert_eq!(fam.fibre(1), &[0, 2]);
        assert_eq!(fam.local_index(2), 1);
        assert_eq!(fam.fibre_sizes(), vec![1, 2]);
    }
}
