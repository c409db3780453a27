// The quotient of well defined terms, compared with the classical carrier.

use wred::per::cover::TwoCoverBase;
use wred::per::{crosscheck, quotient};
use wred::{fixtures, Budget};

pub fn run_example() {
    let p = fixtures::ex_one_red();
    let cb = TwoCoverBase::for_poly(&p);
    let q = quotient(&p, &cb, Budget::default()).unwrap();
    for (c, members) in q.classes.iter().enumerate() {
        println!("class {}: {} members", q.carrier.name(c), members.len());
    }
    assert_eq!(q.len(), 1);
    for (name, p) in fixtures::all_polynomials() {
        let verdict = crosscheck(&p, &TwoCoverBase::for_poly(&p), Budget { max_depth: 4, max_count: 10_000 }).unwrap();
        println!("{name:12} {verdict}");
    }
}

#[allow(dead_code)]
fn main() {
    run_example();
}
