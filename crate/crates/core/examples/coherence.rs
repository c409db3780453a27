// Coherence and classification of the named polynomials.

use wred::fixtures;
use wred::poly::Classification;

pub fn run_example() {
    for (name, p) in fixtures::all_polynomials() {
        let coherent = p.check_coherence().passes();
        println!("{name:12} coherent: {coherent:5}  class: {}", p.classify());
        assert!(coherent);
    }
    assert_eq!(fixtures::ex_collapse().classify(), Classification::General);

    // send the reducing argument of `eta` somewhere else
    let broken = wred::poly::PolyRed::builder(["*", "elsewhere"])
        .constructor("zero", "*")
        .constructor("eta", "*")
        .arity("x0", "eta", "elsewhere")
        .reduction("x0")
        .build()
        .unwrap();
    let report = broken.check_coherence();
    println!("redirected eta: violations at {:?}", report.violations);
    assert_eq!(report.violations, vec![0]);
}

#[allow(dead_code)]
fn main() {
    run_example();
}
