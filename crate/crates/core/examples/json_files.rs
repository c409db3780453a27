// Polynomials and generating families round-trip through JSON.

use wred::awfs::json::{gen_to_file, parse_gen};
use wred::fixtures;
use wred::poly::json::{parse, to_string};

pub fn run_example() {
    for (name, p) in fixtures::all_polynomials() {
        let text = to_string(&p);
        assert_eq!(parse(&text).unwrap(), p);
        println!("{name}: {} bytes", text.len());
    }
    let gen = fixtures::gen_two();
    let text = serde_json::to_string_pretty(&gen_to_file(&gen)).unwrap();
    println!("{text}");
    assert_eq!(parse_gen(&text).unwrap(), gen);
}

#[allow(dead_code)]
fn main() {
    run_example();
}
