// Free factorization of a map against `0 -> 1`, checked afterwards.

use wred::awfs::{free_factorization, has_rlp, verify_factorization, Engine, VerticalMap};
use wred::fin::{Fam, Fin};
use wred::{fixtures, Budget};

pub fn run_example() {
    // one point over y1, nothing over y2
    let f = VerticalMap::new(
        Fin::new(["j"]).unwrap(),
        Fam::new(1, [("y1", 0), ("y2", 0)]).unwrap(),
        Fam::new(2, [("x1", 0)]).unwrap(),
    )
    .unwrap();
    let sq = fixtures::gen_pt().as_square();
    for engine in [Engine::Classical, Engine::Per] {
        let fact = free_factorization(&sq, &f, Budget::default(), engine, None).unwrap();
        let names: Vec<&str> = (0..fact.carrier.len()).map(|e| fact.carrier.name(e)).collect();
        println!("{engine}: E = {names:?}");
        assert_eq!(fact.carrier.len(), 3);
        assert!(verify_factorization(&sq, &f, &fact).unwrap().passes());
        assert!(has_rlp(&sq, &fact.as_vertical(&f), 10_000).unwrap().is_solved());
    }
}

#[allow(dead_code)]
fn main() {
    run_example();
}
