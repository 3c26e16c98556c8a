//! Worst residual of every operator identity over 32 seeded vectors per picture.
use endonet::reps::identity_suite_with;

fn main() {
    let checks = identity_suite_with(7, 1.0, 32).expect("suite runs");
    for c in &checks {
        println!("{:<10} {:<45} {:.2e} (tol {:.0e}) {}", c.picture, c.name, c.residual, c.tolerance, if c.pass { "ok" } else { "FAIL" });
    }
}
