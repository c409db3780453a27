// Brute-force initiality against every small algebra.

use wred::classical::{algebra_d, check_target, initial_hom, build_initial};
use wred::fin::Fam;
use wred::poly::enumerate_algebras;
use wred::{fixtures, Budget};

pub fn run_example() {
    let p = fixtures::ex_one_red();
    let init = build_initial(&p, Budget::default()).unwrap();
    let d = algebra_d(&p, &init.wc).unwrap();
    for n in 1..=3 {
        let carrier = Fam::new(1, (0..n).map(|k| (format!("t{k}"), 0))).unwrap();
        let algebras = enumerate_algebras(&p, &carrier, 1 << 16).unwrap();
        let unique = algebras
            .iter()
            .filter(|t| {
                check_target(&p, &d, || initial_hom(&p, &init.wc, *t), *t, 1 << 16)
                    .unwrap()
                    .passes()
            })
            .count();
        println!("carrier of size {n}: {unique} of {} algebras receive exactly one map", algebras.len());
        assert_eq!(unique, algebras.len());
    }
}

#[allow(dead_code)]
fn main() {
    run_example();
}
