//! Building inner functions, evaluating them and applying the time reflection γ.
use endonet::inner_fn::{gamma_transform, is_gamma_invariant, product, symmetry_check, validate_and_generate, InnerFunctionSpec};
use num_complex::Complex64;

fn main() {
    let blaschke = InnerFunctionSpec::blaschke(vec![Complex64::new(0.0, 1.0), Complex64::new(0.7, 2.0)]);
    let phi = validate_and_generate(&product(&blaschke, &InnerFunctionSpec::translation(0.5))).unwrap();

    for p in [0.3, 1.0, 2.5] {
        let v = phi.evaluate_real(p).unwrap();
        println!("phi({p}) = {:.6} {:+.6}i  |phi| = {:.15}", v.re, v.im, v.norm());
    }
    let grid: Vec<f64> = (1..=50).map(|k| 0.1 * k as f64).collect();
    println!("{:?}", symmetry_check(&phi, &grid));

    // γ moves the translation into an atom at the origin
    let g = gamma_transform(&phi);
    println!("gamma: translation {}, atoms {:?}, sign {}", g.translation, g.atoms, g.sign);
    println!("gamma-invariant: {}", is_gamma_invariant(&phi, 1e-12));

    let sr = InnerFunctionSpec::sin_ratio(0.5, 1.0, 64);
    let z = Complex64::new(1.2, 0.4);
    let closed = sr.evaluate(z).unwrap();
    let truncated = sr.evaluate_truncated(z, 64).unwrap();
    println!("sin ratio at {z}: closed form {closed:.6}, 64-zero product {truncated:.6}");
}
