use crate::error::{Error, Result};
use crate::fin::{Assignments, Fam, Quotient};

use super::{arg_choices, PolyRed};

/// A constructor applied to an argument assignment, before quotienting.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Cell {
    pub cons: usize,
    /// One element of `W` per arity element, in arity order.
    pub args: Vec<usize>,
}

/// `P(W)` together with the point `W -> P(W)` and the class of every cell.
#[derive(Clone, Debug)]
pub struct FunctorValue {
    pub value: Fam,
    pub point: Vec<usize>,
    pub cells: Vec<Cell>,
    pub cell_class: Vec<usize>,
}

/// Evaluate the pointed polynomial endofunctor at `w`.
///
/// Fibrewise, `P(W)_z` is `W_z + Σ_{y ∈ Y_z} Π_{x ∈ X_y} W_{h(x)}` with each
/// cell `(y, α)` that reduces at `x` glued to `α(x)`. Within a fibre the
/// elements of `W_z` come first, then cells by constructor and lexicographic
/// argument order; each class is named after its least member.
pub fn eval_functor(p: &PolyRed, w: &Fam) -> Result<FunctorValue> {
    if w.base_len() != p.base().len() {
        return Err(Error::BaseMismatch(format!(
            "family has {} base elements, polynomial context has {}",
            w.base_len(),
            p.base().len()
        )));
    }
    p.require_coherent()?;

    let mut cells = Vec::new();
    let mut cell_base = Vec::new();
    for y in 0..p.constructors().len() {
        let choices = arg_choices(p, w, y);
        for args in Assignments::new(&choices) {
            cells.push(Cell { cons: y, args });
            cell_base.push(p.cons_base(y));
        }
    }

    // disjoint union laid out fibre by fibre: W_z then the cells over z
    let mut slot_of_w = vec![0; w.len()];
    let mut slot_of_cell = vec![0; cells.len()];
    let mut names = Vec::new();
    let mut bases = Vec::new();
    for z in 0..p.base().len() {
        for &e in w.fibre(z) {
            slot_of_w[e] = names.len();
            names.push(w.name(e).to_string());
            bases.push(z);
        }
        for (c, cell) in cells.iter().enumerate() {
            if cell_base[c] != z {
                continue;
            }
            slot_of_cell[c] = names.len();
            let args: Vec<&str> = cell.args.iter().map(|&a| w.name(a)).collect();
            names.push(format!("{}[{}]", p.cons_name(cell.cons), args.join(",")));
            bases.push(z);
        }
    }

    let mut glue = Vec::new();
    for (c, cell) in cells.iter().enumerate() {
        for (k, &x) in p.arity_of(cell.cons).iter().enumerate() {
            if p.has_reduction(x) {
                glue.push((slot_of_cell[c], slot_of_w[cell.args[k]]));
            }
        }
    }
    let quotient = Quotient::from_pairs(names.len(), glue);

    let mut value = Fam::empty(p.base().len());
    for &rep in &quotient.reps {
        value.push(names[rep].clone(), bases[rep])?;
    }
    Ok(FunctorValue {
        value,
        point: slot_of_w.iter().map(|&s| quotient.class_of[s]).collect(),
        cell_class: slot_of_cell.iter().map(|&s| quotient.class_of[s]).collect(),
        cells,
    })
}

impl FunctorValue {
    /// The function `P(W) -> P(W')` induced by `m: W -> W'` (fibrewise).
    /// Fails if `m` does not respect the identifications, which cannot
    /// happen for a fibrewise map.
    pub fn induced_map(&self, target: &FunctorValue, m: &[usize]) -> Result<Vec<usize>> {
        let mut out = vec![usize::MAX; self.value.len()];
        let mut set = |class: usize, image: usize| -> Result<()> {
            if out[class] != usize::MAX && out[class] != image {
                return Err(Error::IllDefined(format!(
                    "induced map not constant on class `{}`",
                    self.value.name(class)
                )));
            }
            out[class] = image;
            Ok(())
        };
        for (e, &class) in self.point.iter().enumerate() {
            set(class, target.point[m[e]])?;
        }
        for (c, cell) in self.cells.iter().enumerate() {
            let moved = Cell {
                cons: cell.cons,
                args: cell.args.iter().map(|&a| m[a]).collect(),
            };
            let idx = target
                .cells
                .iter()
                .position(|t| *t == moved)
                .ok_or_else(|| Error::IllDefined("image cell missing".into()))?;
            set(self.cell_class[c], target.cell_class[idx])?;
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fin::Fin;
    use crate::fixtures;

    fn singleton() -> Fam {
        Fam::new(1, [("w", 0)]).unwrap()
    }

    #[test]
    fn nat_at_singleton_has_three_elements() {
        let v = eval_functor(&fixtures::ex_nat(), &singleton()).unwrap();
        assert_eq!(v.value.fibre_sizes(), vec![3]);
    }

    #[test]
    fn one_red_glues_eta_cell_to_point() {
        let v = eval_functor(&fixtures::ex_one_red(), &singleton()).unwrap();
        assert_eq!(v.value.fibre_sizes(), vec![2]);
        assert_eq!(v.value.total().names(), &["w".to_string(), "zero[]".to_string()]);
        let eta = v.cells.iter().position(|c| c.cons == 1).unwrap();
        assert_eq!(v.cell_class[eta], v.point[0]);
    }

    #[test]
    fn no_constructors_is_identity() {
        let p = PolyRed::builder(["a", "b"]).build().unwrap();
        let w = Fam::new(2, [("p", 0), ("q", 1), ("r", 1)]).unwrap();
        let v = eval_functor(&p, &w).unwrap();
        assert_eq!(v.value.fibre_sizes(), w.fibre_sizes());
        assert_eq!(v.point, vec![0, 1, 2]);
    }

    #[test]
    fn seed_adds_its_family() {
        let base = Fin::new(["a", "b"]).unwrap();
        let extra = Fam::new(2, [("p", 0), ("q", 0), ("r", 1)]).unwrap();
        let s = PolyRed::seed(&base, &extra).unwrap();
        let w = Fam::new(2, [("w0", 0), ("w1", 1), ("w2", 1)]).unwrap();
        let v = eval_functor(&s, &w).unwrap();
        assert_eq!(v.value.fibre_sizes(), vec![1 + 2, 2 + 1]);
        let empty = PolyRed::seed(&base, &Fam::empty(2)).unwrap();
        assert_eq!(eval_functor(&empty, &w).unwrap().value.fibre_sizes(), vec![1, 2]);
    }

    #[test]
    fn base_mismatch_is_reported() {
        let w = Fam::new(2, [("w", 0)]).unwrap();
        assert!(matches!(
            eval_functor(&fixtures::ex_nat(), &w),
            Err(Error::BaseMismatch(_))
        ));
    }
}
