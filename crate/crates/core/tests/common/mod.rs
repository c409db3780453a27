#![allow(dead_code)]

use wred::cli::{run, Outcome};

pub fn fixture(name: &str) -> String {
    format!("{}/fixtures/{name}", env!("CARGO_MANIFEST_DIR"))
}

/// Runs the CLI with `args`, substituting `@name` by the fixture path.
pub fn wred(args: &[&str]) -> Outcome {
    let mut full = vec!["wred".to_string()];
    full.extend(args.iter().map(|a| match a.strip_prefix('@') {
        Some(name) => fixture(name),
        None => a.to_string(),
    }));
    run(full)
}

/// Invocations exercised by the determinism check, with their expected exit codes.
pub const CORPUS: &[(&[&str], i32)] = &[
    (&["check", "@ex-nat.json"], 0),
    (&["check", "@ex-btree.json", "--format", "json"], 0),
    (&["check", "@ex-one-red-incoherent.json"], 1),
    (&["classify", "@ex-one-red.json"], 0),
    (&["classify", "@ex-collapse.json", "--format", "json"], 0),
    (&["build-initial", "@ex-collapse.json", "--engine", "classical"], 0),
    (&["build-initial", "@ex-one-red.json", "--engine", "per"], 0),
    (&["build-initial", "@ex-btree.json", "--engine", "per", "--cover-base", "@cover-btree.json", "--depth", "3"], 2),
    (&["build-initial", "@ex-nat.json", "--depth", "3"], 2),
    (&["build-initial", "@ex-psh.json", "--engine", "presheaf"], 0),
    (&["build-initial", "@two-nullary.json", "--engine", "presheaf", "--format", "json"], 0),
    (&["verify-initial", "@ex-one-red.json", "--targets", "@targets-one-red.json"], 0),
    (&["verify-initial", "@ex-one-red.json", "--targets", "@targets-broken.json"], 1),
    (&["verify-initial", "@ex-collapse.json"], 0),
    (&["verify-initial", "@ex-psh.json", "--engine", "presheaf"], 0),
    (&["crosscheck", "@ex-one-red.json"], 0),
    (&["crosscheck", "@ex-empty.json", "--format", "json"], 0),
    (&["factorize", "@gen-pt.json", "@map-small.json"], 0),
    (&["factorize", "@gen-pt.json", "@map-small.json", "--engine", "presheaf"], 0),
    (&["factorize", "@gen-id.json", "@map-small.json", "--engine", "per"], 0),
    (&["factorize", "@gen-two.json", "@map-two-index.json", "--format", "json"], 0),
    (&["factorize", "@square-empty-top.json", "@map-small.json", "--depth", "3"], 2),
    (&["factorize", "@psh-gen-arrow.json", "@psh-map-arrow.json"], 0),
    (&["rlp", "@gen-pt.json", "@map-small.json"], 1),
    (&["rlp", "@gen-pt.json", "@map-onto.json"], 0),
    (&["recover-wtype", "@ex-nat.json", "--depth", "4"], 0),
    (&["recover-wtype", "@ex-btree.json", "--depth", "3", "--format", "json"], 0),
    (&["demo-cube"], 0),
    (&["demo-cube", "--format", "json"], 0),
    (&["check", "@does-not-exist.json"], 3),
    (&["frobnicate"], 3),
    (&["check", "@ex-nat.json", "--bogus"], 3),
];

pub mod polys;
