//! Support detection: which intervals contain a bump-derivative vector.
use std::f64::consts::PI;

use endonet::paley_wiener::{bump_member, membership_1d, skew_extend, support_profile, Tolerances};
use endonet::reps::GridDescriptor;

fn main() {
    let grid = GridDescriptor::lightray_half_shifted(4096, PI / 8.0).unwrap();
    let psi = bump_member(grid, -0.3, 0.9);
    let profile = support_profile(&skew_extend(&psi).unwrap().function).unwrap();
    println!("support interval at 1e-6: {:?}", profile.support_interval(1e-6));

    let tol = Tolerances::default();
    for interval in [(-0.3, 0.9), (-0.5, 1.2), (0.0, 0.6), (-0.3, 0.3), (f64::NEG_INFINITY, 1.0)] {
        let r = membership_1d(&psi, interval, &tol).unwrap();
        println!("{interval:?}: member {} leakage {:.1e}", r.member, r.support_leakage);
    }
}
