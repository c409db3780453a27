//! Algebras for a pointed polynomial endofunctor, presented as an operation
//! on the underlying polynomial that satisfies the reduction equations
//! `c(y, α) = α(x)` wherever `x` carries a reduction.

use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::fin::{Assignments, Fam};

use super::PolyRed;

/// Cap on the number of `(y, α)` pairs materialized by checks.
pub const DEFAULT_ALGEBRA_CAP: u128 = 100_000;

/// A carrier over the context with a queryable operation. `args` lists one
/// carrier element per arity element of `cons`, in arity order.
pub trait Algebra {
    fn carrier(&self) -> &Fam;
    fn apply(&self, cons: usize, args: &[usize]) -> Option<usize>;
}

impl<A: Algebra + ?Sized> Algebra for &A {
    fn carrier(&self) -> &Fam {
        (**self).carrier()
    }

    fn apply(&self, cons: usize, args: &[usize]) -> Option<usize> {
        (**self).apply(cons, args)
    }
}

/// An algebra given by an explicit operation table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TableAlgebra {
    carrier: Fam,
    table: HashMap<(usize, Vec<usize>), usize>,
}

impl TableAlgebra {
    pub fn new(carrier: Fam) -> Self {
        TableAlgebra {
            carrier,
            table: HashMap::new(),
        }
    }

    pub fn set(&mut self, cons: usize, args: Vec<usize>, value: usize) {
        self.table.insert((cons, args), value);
    }

    pub fn with(mut self, cons: usize, args: Vec<usize>, value: usize) -> Self {
        self.set(cons, args, value);
        self
    }

    /// Table entries in a deterministic order.
    pub fn entries(&self) -> Vec<(usize, &[usize], usize)> {
        let mut out: Vec<_> = self
            .table
            .iter()
            .map(|((c, a), &v)| (*c, a.as_slice(), v))
            .collect();
        out.sort();
        out
    }
}

impl Algebra for TableAlgebra {
    fn carrier(&self) -> &Fam {
        &self.carrier
    }

    fn apply(&self, cons: usize, args: &[usize]) -> Option<usize> {
        self.table.get(&(cons, args.to_vec())).copied()
    }
}

/// An algebra whose operation is a closure.
pub struct FnAlgebra<F> {
    carrier: Fam,
    op: F,
}

impl<F> FnAlgebra<F>
where
    F: Fn(usize, &[usize]) -> Option<usize>,
{
    pub fn new(carrier: Fam, op: F) -> Self {
        FnAlgebra { carrier, op }
    }
}

impl<F> Algebra for FnAlgebra<F>
where
    F: Fn(usize, &[usize]) -> Option<usize>,
{
    fn carrier(&self) -> &Fam {
        &self.carrier
    }

    fn apply(&self, cons: usize, args: &[usize]) -> Option<usize> {
        (self.op)(cons, args)
    }
}

/// Per arity element of `y`, the carrier fibre its argument ranges over.
pub fn arg_choices(p: &PolyRed, carrier: &Fam, y: usize) -> Vec<Vec<usize>> {
    p.arity_of(y)
        .iter()
        .map(|&x| carrier.fibre(p.reindex(x)).to_vec())
        .collect()
}

fn domain_size(p: &PolyRed, carrier: &Fam) -> u128 {
    (0..p.constructors().len())
        .map(|y| Assignments::count(&arg_choices(p, carrier, y)))
        .fold(0u128, u128::saturating_add)
}

fn require_cap(what: &'static str, needed: u128, cap: u128) -> Result<()> {
    if needed > cap {
        Err(Error::CapExceeded { what, needed, cap })
    } else {
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AlgebraViolation {
    Undefined {
        cons: usize,
        args: Vec<usize>,
    },
    WrongFibre {
        cons: usize,
        args: Vec<usize>,
        value: usize,
    },
    Reduction {
        cons: usize,
        args: Vec<usize>,
        at: usize,
        value: usize,
        expected: usize,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebraReport {
    pub checked: u128,
    pub violations: Vec<AlgebraViolation>,
}

impl AlgebraReport {
    pub fn passes(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn describe(&self, p: &PolyRed, carrier: &Fam) -> Vec<String> {
        let show = |cons: usize, args: &[usize]| {
            let args: Vec<&str> = args.iter().map(|&a| carrier.name(a)).collect();
            format!("{}({})", p.cons_name(cons), args.join(","))
        };
        self.violations
            .iter()
            .map(|v| match v {
                AlgebraViolation::Undefined { cons, args } => {
                    format!("{} is undefined", show(*cons, args))
                }
                AlgebraViolation::WrongFibre { cons, args, value } => format!(
                    "{} = {} lies outside the fibre",
                    show(*cons, args),
                    carrier.name(*value)
                ),
                AlgebraViolation::Reduction {
                    cons,
                    args,
                    at,
                    value,
                    expected,
                } => format!(
                    "{} = {} but reduces at {} to {}",
                    show(*cons, args),
                    carrier.name(*value),
                    p.arity_name(*at),
                    carrier.name(*expected)
                ),
            })
            .collect()
    }
}

impl fmt::Display for AlgebraReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.passes() {
            write!(f, "algebra ({} equations checked)", self.checked)
        } else {
            write!(f, "{} violations", self.violations.len())
        }
    }
}

/// Check totality and every reduction equation of `alg`, materializing the
/// whole `(y, α)` domain (at most `cap` pairs).
pub fn check_algebra(p: &PolyRed, alg: &dyn Algebra, cap: u128) -> Result<AlgebraReport> {
    let carrier = alg.carrier();
    if carrier.base_len() != p.base().len() {
        return Err(Error::BaseMismatch("carrier not based on the context".into()));
    }
    require_cap("algebra domain", domain_size(p, carrier), cap)?;
    let mut violations = Vec::new();
    let mut checked = 0u128;
    for y in 0..p.constructors().len() {
        let z = p.cons_base(y);
        let places: Vec<(usize, usize)> = p
            .arity_of(y)
            .iter()
            .enumerate()
            .filter(|&(_, &x)| p.has_reduction(x))
            .map(|(k, &x)| (k, x))
            .collect();
        for args in Assignments::new(&arg_choices(p, carrier, y)) {
            checked += 1;
            let Some(value) = alg.apply(y, &args) else {
                violations.push(AlgebraViolation::Undefined { cons: y, args });
                continue;
            };
            if value >= carrier.len() || carrier.over(value) != z {
                violations.push(AlgebraViolation::WrongFibre {
                    cons: y,
                    args,
                    value,
                });
                continue;
            }
            for &(k, x) in &places {
                if args[k] != value {
                    violations.push(AlgebraViolation::Reduction {
                        cons: y,
                        args: args.clone(),
                        at: x,
                        value,
                        expected: args[k],
                    });
                }
            }
        }
    }
    Ok(AlgebraReport {
        checked,
        violations,
    })
}

/// Every algebra structure on `carrier`. Entries forced by a reduction are
/// fixed; the remaining entries range freely over their fibre.
pub fn enumerate_algebras(p: &PolyRed, carrier: &Fam, cap: u128) -> Result<Vec<TableAlgebra>> {
    require_cap("algebra domain", domain_size(p, carrier), cap)?;
    let mut forced = Vec::new();
    let mut free_keys = Vec::new();
    let mut free_choices = Vec::new();
    for y in 0..p.constructors().len() {
        let z = p.cons_base(y);
        let places: Vec<usize> = p
            .arity_of(y)
            .iter()
            .enumerate()
            .filter(|&(_, &x)| p.has_reduction(x))
            .map(|(k, _)| k)
            .collect();
        for args in Assignments::new(&arg_choices(p, carrier, y)) {
            match places.split_first() {
                Some((&first, rest)) => {
                    let v = args[first];
                    if rest.iter().any(|&k| args[k] != v) {
                        return Ok(Vec::new());
                    }
                    forced.push(((y, args), v));
                }
                None => {
                    free_keys.push((y, args));
                    free_choices.push(carrier.fibre(z).to_vec());
                }
            }
        }
    }
    require_cap("algebra count", Assignments::count(&free_choices), cap)?;
    let mut out = Vec::new();
    for values in Assignments::new(&free_choices) {
        let mut table: HashMap<_, _> = forced.iter().cloned().collect();
        table.extend(free_keys.iter().cloned().zip(values));
        out.push(TableAlgebra {
            carrier: carrier.clone(),
            table,
        });
    }
    Ok(out)
}

/// Whether the fibrewise map `map: src -> tgt` preserves the operations.
pub fn is_homomorphism(
    p: &PolyRed,
    src: &dyn Algebra,
    tgt: &dyn Algebra,
    map: &[usize],
    cap: u128,
) -> Result<bool> {
    let (s, t) = (src.carrier(), tgt.carrier());
    if map.len() != s.len() || map.iter().enumerate().any(|(e, &v)| t.over(v) != s.over(e)) {
        return Ok(false);
    }
    require_cap("homomorphism check", domain_size(p, s), cap)?;
    for y in 0..p.constructors().len() {
        for args in Assignments::new(&arg_choices(p, s, y)) {
            let Some(lhs) = src.apply(y, &args) else {
                return Err(Error::NotAnAlgebra(format!(
                    "source operation undefined at {}",
                    p.cons_name(y)
                )));
            };
            let moved: Vec<usize> = args.iter().map(|&a| map[a]).collect();
            if tgt.apply(y, &moved) != Some(map[lhs]) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// All structure-preserving fibrewise maps `src -> tgt`, by brute force over
/// every fibrewise function (at most `cap` candidates).
pub fn homomorphisms(
    p: &PolyRed,
    src: &dyn Algebra,
    tgt: &dyn Algebra,
    cap: u128,
) -> Result<Vec<Vec<usize>>> {
    let (s, t) = (src.carrier(), tgt.carrier());
    let choices: Vec<Vec<usize>> = (0..s.len()).map(|e| t.fibre(s.over(e)).to_vec()).collect();
    require_cap("fibrewise maps", Assignments::count(&choices), cap)?;
    let mut out = Vec::new();
    for map in Assignments::new(&choices) {
        if is_homomorphism(p, src, tgt, &map, cap)? {
            out.push(map);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn two_point() -> Fam {
        Fam::new(1, [("a", 0), ("b", 0)]).unwrap()
    }

    #[test]
    fn constant_eta_breaks_reduction() {
        let p = fixtures::ex_one_red();
        let alg = FnAlgebra::new(two_point(), |_, _| Some(0));
        let report = check_algebra(&p, &alg, DEFAULT_ALGEBRA_CAP).unwrap();
        assert!(!report.passes());
        assert_eq!(report.violations.len(), 1);
        assert_eq!(
            report.violations[0],
            AlgebraViolation::Reduction {
                cons: 1,
                args: vec![1],
                at: 0,
                value: 0,
                expected: 1
            }
        );
    }

    #[test]
    fn nat_any_total_operation_passes() {
        let p = fixtures::ex_nat();
        let alg = FnAlgebra::new(two_point(), |y, args| Some(if y == 0 { 1 } else { args[0] }));
        assert!(check_algebra(&p, &alg, DEFAULT_ALGEBRA_CAP).unwrap().passes());
    }

    #[test]
    fn partial_operation_reported() {
        let p = fixtures::ex_nat();
        let alg = TableAlgebra::new(two_point()).with(0, vec![], 0);
        let report = check_algebra(&p, &alg, DEFAULT_ALGEBRA_CAP).unwrap();
        assert_eq!(report.violations.len(), 2);
    }

    #[test]
    fn enumerate_counts() {
        // zero is free (2 choices), eta is forced
        let algs = enumerate_algebras(&fixtures::ex_one_red(), &two_point(), 1000).unwrap();
        assert_eq!(algs.len(), 2);
        // pinch(a, b) would have to be both a and b
        let algs = enumerate_algebras(&fixtures::ex_collapse(), &two_point(), 1000).unwrap();
        assert!(algs.is_empty());
        for alg in enumerate_algebras(&fixtures::ex_nat(), &two_point(), 1000).unwrap() {
            assert!(check_algebra(&fixtures::ex_nat(), &alg, 1000).unwrap().passes());
        }
    }

    #[test]
    fn cap_is_enforced() {
        let err = enumerate_algebras(&fixtures::ex_btree(), &two_point(), 3).unwrap_err();
        assert!(matches!(err, Error::CapExceeded { .. }));
    }
}
