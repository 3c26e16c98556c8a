//! Property tests of the structural laws, with direct formulas as oracles.

use std::f64::consts::PI;

use num_complex::Complex64;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use endonet::inner_fn::{gamma_transform, product, symmetry_check, validate_and_generate, Atom, InnerFunctionSpec};
use endonet::paley_wiener::{bump_member, membership_1d, Tolerances};
use endonet::radius::{classify_1d, RadiusValue};
use endonet::reps::{apply_chain, random_test_vector, suite_grids, tensor_square_mass_spectrum, GridDescriptor, GridFunction, OperatorTag};
use endonet::witness::{radius_estimate, witness_pair_with, MollifierSpec, WitnessOptions};

fn zero() -> impl Strategy<Value = Complex64> {
    (0.0..3.0f64, 0.1..3.0f64).prop_map(|(re, im)| Complex64::new(re, im))
}

fn finite_spec() -> impl Strategy<Value = InnerFunctionSpec> {
    (
        prop::collection::vec(zero(), 0..6),
        0.0..3.0f64,
        prop::collection::vec((0.0..2.0f64, 0.05..1.0f64), 0..3),
        prop::bool::ANY,
    )
        .prop_map(|(zeros, x, atoms, neg)| {
            let mut s = InnerFunctionSpec::blaschke(zeros);
            s.translation = x;
            s.sign = if neg { -1 } else { 1 };
            s.atoms = atoms.into_iter().map(|(location, mass)| Atom { location, mass }).collect();
            s
        })
        .prop_filter_map("duplicate atom", |s| validate_and_generate(&s).ok())
}

/// `φ(p)` written out factor by factor: each zero and its mirror `-z̄` as
/// separate Blaschke factors, the translation, and the atom kernels
/// `1/p` (origin) or `2p(1+t²)/(p²-t²)` (pair at `±t`).
fn oracle(s: &InnerFunctionSpec, p: f64) -> Complex64 {
    let p = Complex64::new(p, 0.0);
    let i = Complex64::i();
    let mut v = Complex64::new(s.sign as f64, 0.0) * (i * p * s.translation).exp();
    for &z in &s.zeros.zeros {
        v *= (p - z) / (p - z.conj());
        if z.re != 0.0 {
            let m = -z.conj();
            v *= (p - m) / (p - m.conj());
        }
    }
    for a in &s.atoms {
        let t = a.location;
        let k = if t == 0.0 { 1.0 / p } else { 2.0 * p * (1.0 + t * t) / (p * p - t * t) };
        v *= (-i * a.mass * k).exp();
    }
    v
}

fn far_from_atoms(s: &InnerFunctionSpec, p: f64) -> bool {
    s.atoms.iter().all(|a| (p.abs() - a.location).abs() > 0.05)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn evaluation_matches_factor_formula(s in finite_spec(), p in 0.1..5.0f64) {
        prop_assume!(far_from_atoms(&s, p));
        let got = s.evaluate_real(p).unwrap();
        let want = oracle(&s, p);
        prop_assert!((got - want).norm() < 1e-10, "{got} vs {want}");
    }

    #[test]
    fn unimodular_and_symmetric(s in finite_spec()) {
        let grid: Vec<f64> = (1..=24).map(|k| 0.173 * k as f64).filter(|&p| far_from_atoms(&s, p)).collect();
        let r = symmetry_check(&s, &grid);
        prop_assert!(r.pass, "{r:?}");
    }

    #[test]
    fn gamma_is_pointwise_reflection_and_involution(s in finite_spec(), p in 0.2..5.0f64) {
        prop_assume!(far_from_atoms(&s, p) && far_from_atoms(&s, 1.0 / p));
        let g = gamma_transform(&s);
        let reflected = s.evaluate_real(1.0 / p).unwrap().conj();
        prop_assert!((g.evaluate_real(p).unwrap() - reflected).norm() < 1e-9);
        let gg = gamma_transform(&g);
        prop_assert!((gg.evaluate_real(p).unwrap() - s.evaluate_real(p).unwrap()).norm() < 1e-9);
    }

    #[test]
    fn product_is_pointwise(a in finite_spec(), b in finite_spec(), p in 0.1..5.0f64) {
        prop_assume!(far_from_atoms(&a, p) && far_from_atoms(&b, p));
        let ab = product(&a, &b);
        prop_assume!(validate_and_generate(&ab).is_ok());
        let want = a.evaluate_real(p).unwrap() * b.evaluate_real(p).unwrap();
        prop_assert!((ab.evaluate_real(p).unwrap() - want).norm() < 1e-10);
    }

    #[test]
    fn finite_radius_is_half_translation(z1 in prop::collection::vec(zero(), 0..4), z2 in prop::collection::vec(zero(), 0..4), x1 in 0.0..3.0f64, x2 in 0.0..3.0f64) {
        let mut a = InnerFunctionSpec::blaschke(z1);
        a.translation = x1;
        let mut b = InnerFunctionSpec::blaschke(z2);
        b.translation = x2;
        let ra = classify_1d(&a).unwrap().value.exact().unwrap();
        let rb = classify_1d(&b).unwrap().value.exact().unwrap();
        let rab = classify_1d(&product(&a, &b)).unwrap().value;
        prop_assert_eq!(rab, RadiusValue::Exact((x1 + x2) / 2.0));
        let r = rab.exact().unwrap();
        prop_assert!(ra.max(rb) <= r + 1e-12 && r <= ra + rb + 1e-12);
    }

    #[test]
    fn mollifier_majorant_bounds_transform(a in 0.05..1.0f64, delta in 0.3..0.95f64, k in 1usize..60, p in -200.0..200.0f64) {
        let m = MollifierSpec::with_count(a, delta, k).unwrap();
        prop_assert!((m.support() - a).abs() < 1e-12);
        prop_assert!(m.widths.windows(2).all(|w| w[1] < w[0]));
        prop_assert!(m.eval(p).abs() <= m.majorant(p) + 1e-15);
        prop_assert!((m.eval(0.0) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn two_particle_masses_stay_above_threshold(m0 in 0.1..5.0f64, grid in prop::collection::vec(0.01..50.0f64, 1..40)) {
        let r = tensor_square_mass_spectrum(m0, &grid, 8).unwrap();
        prop_assert!(r.min >= 2.0 * m0 * (1.0 - 1e-15));
        prop_assert!(r.max >= r.min);
        let direct = grid.iter().flat_map(|&p| grid.iter().map(move |&q| m0 * (2.0 + p / q + q / p).sqrt()));
        let hi = direct.fold(0.0f64, f64::max);
        prop_assert!((r.max - hi).abs() <= 1e-12 * hi);
    }
}

fn picture_grid(k: usize) -> GridDescriptor {
    suite_grids(1.0).unwrap()[k]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn translations_compose(k in 0usize..3, a in -2.0..2.0f64, b in -2.0..2.0f64, seed in any::<u64>()) {
        let psi = random_test_vector(picture_grid(k), &mut ChaCha8Rng::seed_from_u64(seed));
        for (t, s) in [(OperatorTag::T(a), OperatorTag::T(b)), (OperatorTag::Tprime(a), OperatorTag::Tprime(b))] {
            let sum = match t { OperatorTag::T(_) => OperatorTag::T(a + b), _ => OperatorTag::Tprime(a + b) };
            let lhs = apply_chain(&[t, s], &psi).unwrap().function;
            let rhs = apply_chain(&[sum], &psi).unwrap().function;
            prop_assert!(lhs.distance(&rhs) < 1e-12 * psi.norm());
        }
    }

    #[test]
    fn antiunitaries_are_involutions(k in 0usize..3, seed in any::<u64>()) {
        let psi = random_test_vector(picture_grid(k), &mut ChaCha8Rng::seed_from_u64(seed));
        for op in [OperatorTag::J, OperatorTag::Z, OperatorTag::Gamma] {
            let back = apply_chain(&[op.clone(), op], &psi).unwrap().function;
            prop_assert!(back.distance(&psi) < 1e-12 * psi.norm());
        }
    }

    #[test]
    fn membership_isotony_and_covariance(c in -2.0..2.0f64, w in 0.2..0.6f64, grow in 0.0..1.0f64, t in -1.5..1.5f64) {
        let grid = GridDescriptor::lightray_half_shifted(4096, PI / 8.0).unwrap();
        let tol = Tolerances::default();
        let psi = bump_member(grid, c - w, c + w);
        prop_assert!(membership_1d(&psi, (c - w - grow, c + w + grow), &tol).unwrap().member);
        let moved = GridFunction {
            grid,
            samples: psi.samples.iter().zip(grid.points()).map(|(z, p)| z * Complex64::from_polar(1.0, t * p)).collect(),
        };
        prop_assert!(membership_1d(&moved, (c - w + t, c + w + t), &tol).unwrap().member);
        prop_assert!(!membership_1d(&moved, (c - 0.5 * w + t, c + 0.5 * w + t), &tol).unwrap().member);
    }

    #[test]
    fn translation_witness_ratio(x in 0.0..2.0f64, a in 0.1..0.4f64) {
        let opts = WitnessOptions { n_half: 1024, ..Default::default() };
        let w = witness_pair_with(&InnerFunctionSpec::translation(x), a, 0.5, &opts).unwrap();
        prop_assert_eq!(w.sign, 1);
        prop_assert!(w.ratio_residual < 1e-8);
        prop_assert!(w.radius >= x / 2.0 + a);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(3))]

    #[test]
    fn scan_is_monotone_and_finds_translation_radius(x in 0.4..1.6f64) {
        let grid: Vec<f64> = (1..=12).map(|k| 0.1 * k as f64).collect();
        let res = radius_estimate(&InnerFunctionSpec::translation(x), &grid, 64).unwrap();
        prop_assert!(res.sigma_min.windows(2).all(|s| s[1] <= s[0] * (1.0 + 1e-6) + 1e-12));
        let r = res.estimated_radius.unwrap();
        prop_assert!(r >= x / 2.0 - 1e-9 && r <= x / 2.0 + 0.2 + 1e-9, "x = {x}, estimate {r}");
    }
}
