// The plain W-type as the middle object of the factorization of `0 -> 1`.

use wred::awfs::recover_wtype;
use wred::{fixtures, Budget};

pub fn run_example() {
    for (name, p) in [("nat", fixtures::ex_nat()), ("btree", fixtures::ex_btree())] {
        let rep = recover_wtype(&p, Budget { max_depth: 3, max_count: 1000 }).unwrap();
        println!("{name}: {rep}: {:?}", rep.carrier);
        assert!(rep.agrees());
    }
}

#[allow(dead_code)]
fn main() {
    run_example();
}
