//! Convergence exponents of zero sets, before and after the momentum transform.
use endonet::inner_fn::{convergence_exponent, InnerFunctionSpec};
use endonet::radius::momentum_exponent;

fn main() {
    let sr = InnerFunctionSpec::sin_ratio(0.5, 1.0, 64);
    println!("sin ratio: {:?}", convergence_exponent(&sr.zeros).unwrap());

    // zeros accumulating at 0 have exponent ∞ in the lightray variable but
    // are pushed out to infinity by p ↦ p - m²/(4p)
    let g = InnerFunctionSpec::gamma_example(2.0, 400, 2.0);
    println!("gamma example: {:?}", convergence_exponent(&g.zeros).unwrap());
    println!("after momentum transform: {:?}", momentum_exponent(&g, 2.0).unwrap());
}
