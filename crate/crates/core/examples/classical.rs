// The least closed set and the initial algebra `W^{C0}`.

use wred::classical::build_initial;
use wred::{fixtures, Budget, Status};

pub fn run_example() {
    for (name, p) in fixtures::all_polynomials() {
        let init = build_initial(&p, Budget { max_depth: 4, max_count: 1000 }).unwrap();
        let carrier = init.wc.carrier();
        let elems: Vec<&str> = (0..carrier.len()).map(|e| carrier.name(e)).collect();
        println!("{name:12} C0 = {:?}  {}  {elems:?}", init.c0.names(&p), init.wc.status());
    }
    let collapse = build_initial(&fixtures::ex_collapse(), Budget::default()).unwrap();
    assert_eq!(collapse.wc.status(), Status::Finite);
    assert_eq!(collapse.wc.len(), 1);
    let empty = build_initial(&fixtures::ex_empty(), Budget::default()).unwrap();
    assert!(empty.wc.is_empty());
}

#[allow(dead_code)]
fn main() {
    run_example();
}
