//! The standard pair in the three pictures: translations, modular group and reflections.
use endonet::reps::{apply_chain, borchers_check, change_picture, random_test_vector, suite_grids, OperatorTag};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let grids = suite_grids(1.0).unwrap();
    for grid in &grids {
        let psi = random_test_vector(*grid, &mut rng);
        let b = borchers_check(&psi, 0.4 / (2.0 * std::f64::consts::PI), 0.8).unwrap();
        let zz = apply_chain(&[OperatorTag::Z, OperatorTag::Z], &psi).unwrap().function.distance(&psi);
        println!("{:<9} Borchers {:.1e} / {:.1e}, ZZ - 1 {:.1e}", grid.picture.name(), b.modular_residual, b.reflection_residual, zz);
    }
    // moving a vector between pictures preserves its norm
    let psi = random_test_vector(grids[0], &mut rng);
    let moved = change_picture(&psi, grids[1]).unwrap();
    println!("rapidity -> lightray: norm {:.12} -> {:.12}", psi.norm(), moved.function.norm());
}
