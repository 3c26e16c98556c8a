//! Explicit witness pairs ψ₊ = φψ₋ localized in a finite interval.
use endonet::catalog::lookup;
use endonet::witness::witness_pair;

fn main() {
    for name in ["single_zero_i", "double_zero_i_2i", "translation_1", "translation_2"] {
        let spec = lookup(name).unwrap().spec;
        let w = witness_pair(&spec, 0.2, 0.5).unwrap();
        println!(
            "{name:<18} radius {:.4} sign {:+} ratio {:.1e} members {}/{} mollifier factors {} decay exponent {:.3} (pass {})",
            w.radius,
            w.sign,
            w.ratio_residual,
            w.membership.0.member,
            w.membership.1.member,
            w.mollifier.count(),
            w.decay.delta,
            w.decay.pass
        );
    }
    match witness_pair(&lookup("atom_at_1").unwrap().spec, 0.2, 0.5) {
        Ok(_) => println!("atom_at_1: unexpected witness"),
        Err(e) => println!("atom_at_1: {e}"),
    }
}
