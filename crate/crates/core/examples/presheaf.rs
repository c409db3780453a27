// Normal forms over a two-object category: `y` at `c` does not reduce
// yet, but its image at `d` does.

use wred::presheaf::{check_presheaf_laws, check_s, enumerate_n};
use wred::{fixtures, Budget};

pub fn run_example() {
    let pp = fixtures::ex_psh();
    let frag = enumerate_n(&pp, Budget::default()).unwrap();
    for c in 0..pp.cat.object_count() {
        println!("N({}) = {:?}", pp.cat.objects().name(c), frag.render_component(c, &pp));
    }
    let sigma = pp.cat.morphism_index("sigma").unwrap();
    let moved = frag.act(sigma, frag.component(0)[0]).unwrap();
    println!("sigma acts: {} -> {}", frag.render(frag.component(0)[0], &pp), frag.render(moved, &pp));
    assert_eq!(frag.render(moved, &pp), "b");
    assert!(check_presheaf_laws(&pp, &frag).passes());
    assert!(check_s(&pp, &frag).passes());
}

#[allow(dead_code)]
fn main() {
    run_example();
}
