//! Small named instances shared by tests, examples and the CLI corpus.

use crate::awfs::{GenFamily, SquareGen};
use crate::fin::{Fam, Fin};
use crate::poly::PolyRed;
use crate::prescat::json::parse_psh;
use crate::prescat::PshPolyRed;

/// Natural numbers: `zero` and a unary `succ`.
pub fn ex_nat() -> PolyRed {
    PolyRed::builder(["*"])
        .constructor("zero", "*")
        .constructor("succ", "*")
        .arity("s0", "succ", "*")
        .build()
        .expect("fixture")
}

/// Binary trees: a `leaf` and a binary `node`.
pub fn ex_btree() -> PolyRed {
    PolyRed::builder(["*"])
        .constructor("leaf", "*")
        .constructor("node", "*")
        .arity("l", "node", "*")
        .arity("r", "node", "*")
        .build()
        .expect("fixture")
}

/// `zero` plus a unary `eta` that reduces to its argument.
pub fn ex_one_red() -> PolyRed {
    PolyRed::builder(["*"])
        .constructor("zero", "*")
        .constructor("eta", "*")
        .arity("x0", "eta", "*")
        .reduction("x0")
        .build()
        .expect("fixture")
}

/// `zero` plus a binary `pinch` reducing to both arguments.
pub fn ex_collapse() -> PolyRed {
    PolyRed::builder(["*"])
        .constructor("zero", "*")
        .constructor("pinch", "*")
        .arity("x1", "pinch", "*")
        .arity("x2", "pinch", "*")
        .reduction("x1")
        .reduction("x2")
        .build()
        .expect("fixture")
}

/// `pinch` alone.
pub fn ex_empty() -> PolyRed {
    PolyRed::builder(["*"])
        .constructor("pinch", "*")
        .arity("x1", "pinch", "*")
        .arity("x2", "pinch", "*")
        .reduction("x1")
        .reduction("x2")
        .build()
        .expect("fixture")
}

/// `zero` and `succ` with the argument of `succ` removed.
pub fn two_nullary() -> PolyRed {
    PolyRed::builder(["*"])
        .constructor("zero", "*")
        .constructor("succ", "*")
        .build()
        .expect("fixture")
}

/// Every named finite-set polynomial fixture.
pub fn all_polynomials() -> Vec<(&'static str, PolyRed)> {
    vec![
        ("ex-nat", ex_nat()),
        ("ex-btree", ex_btree()),
        ("ex-one-red", ex_one_red()),
        ("ex-collapse", ex_collapse()),
        ("ex-empty", ex_empty()),
        ("two-nullary", two_nullary()),
    ]
}

/// Two objects `c -> d`: `y` at `c` becomes `y'` at `d`, which reduces to
/// its single argument; `b` is a constant at `d`.
pub const EX_PSH_JSON: &str = r#"{
  "category": {"objects": ["c", "d"], "homs": {"sigma": ["c", "d"]}},
  "constructors": {"components": {"c": ["y"], "d": ["y'", "b"]}, "actions": {"sigma": {"y": "y'"}}},
  "arities": {"components": {"d": ["x'"]}, "over": {"d": {"x'": "y'"}}},
  "reductions": {"d": ["x'"]}
}
"#;

pub fn ex_psh() -> PshPolyRed {
    parse_psh(EX_PSH_JSON).expect("fixture")
}

pub fn point() -> Fin {
    Fin::new(["*"]).expect("fixture")
}

/// `0 -> 1` over a single index.
pub fn gen_pt() -> GenFamily {
    GenFamily::new(point(), Fam::new(1, [("pt", 0)]).expect("fixture"), Fam::empty(1)).expect("fixture")
}

/// `1 -> 1` over a single index.
pub fn gen_id() -> GenFamily {
    GenFamily::new(
        point(),
        Fam::new(1, [("pt", 0)]).expect("fixture"),
        Fam::new(1, [("u", 0)]).expect("fixture"),
    )
    .expect("fixture")
}

/// `2 -> 1`: both points of the domain meet the single cell.
pub fn gen_two() -> GenFamily {
    GenFamily::new(
        point(),
        Fam::new(1, [("pt", 0)]).expect("fixture"),
        Fam::new(1, [("u1", 0), ("u2", 0)]).expect("fixture"),
    )
    .expect("fixture")
}

/// The square from `0 -> 1` to `1 -> 1`.
pub fn square_empty_top() -> SquareGen {
    SquareGen {
        level0: gen_pt(),
        level1: gen_id(),
        on_cod: vec![0],
        on_dom: vec![],
    }
}
