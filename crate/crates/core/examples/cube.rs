// The truncated cube category on one generator.

use wred::prescat::check_category;
use wred::prescat::cube::gen_truncated_cube;

pub fn run_example() {
    let cube = gen_truncated_cube(1).unwrap();
    for c in 0..cube.cat.object_count() {
        println!(
            "{}: |dM| = {}, faces {}, Leibniz {}",
            cube.cat.objects().name(c),
            cube.dm(c).len(),
            cube.faces.components[c].len(),
            cube.leibniz.components[c].len()
        );
    }
    assert!(check_category(&cube.cat).passes());
    assert!(cube.check_structure().passes());
    assert!(cube.check_leibniz().passes());
}

#[allow(dead_code)]
fn main() {
    run_example();
}
