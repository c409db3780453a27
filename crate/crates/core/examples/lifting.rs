// Right lifting property against a generating family.

use wred::awfs::{has_rlp, Rlp, VerticalMap};
use wred::fin::{Fam, Fin};
use wred::fixtures;

pub fn run_example() {
    let index = Fin::new(["j"]).unwrap();
    let y = Fam::new(1, [("y1", 0), ("y2", 0)]).unwrap();
    let partial = VerticalMap::new(index.clone(), y.clone(), Fam::new(2, [("x1", 0)]).unwrap()).unwrap();
    let onto = VerticalMap::new(index, y, Fam::new(2, [("x1", 0), ("x2", 1)]).unwrap()).unwrap();
    let sq = fixtures::gen_pt().as_square();
    match has_rlp(&sq, &partial, 1000).unwrap() {
        Rlp::Unsolvable(p) => println!("no filler for the problem hitting {:?}", p.beta),
        Rlp::Solved(_) => unreachable!("y2 has nothing over it"),
    }
    assert!(has_rlp(&sq, &onto, 1000).unwrap().is_solved());
    println!("the surjective map lifts against 0 -> 1");
}

#[allow(dead_code)]
fn main() {
    run_example();
}
