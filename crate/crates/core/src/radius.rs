//! Classification of the minimal localization radii `r_φ` (one dimension) and
//! `r_{m,φ}` (two dimensions) from the factorization data of φ.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::inner_fn::{
    convergence_exponent, gamma_transform, product, validate_and_generate, BlockKind, ExponentEstimate,
    InnerFunctionSpec, ZeroBlock, ZeroGenerator, ZeroSet,
};

const AGREE_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", content = "r")]
pub enum RadiusValue {
    Exact(f64),
    LowerBound(f64),
    Infinite,
    Unknown(f64),
}

impl RadiusValue {
    /// The best known lower bound, `∞` for `Infinite`.
    pub fn lower(&self) -> f64 {
        match *self {
            RadiusValue::Exact(r) | RadiusValue::LowerBound(r) | RadiusValue::Unknown(r) => r,
            RadiusValue::Infinite => f64::INFINITY,
        }
    }

    /// Value of a decided radius.
    pub fn decided(&self) -> Option<f64> {
        match *self {
            RadiusValue::Exact(r) => Some(r),
            RadiusValue::Infinite => Some(f64::INFINITY),
            _ => None,
        }
    }

    pub fn exact(&self) -> Option<f64> {
        match *self {
            RadiusValue::Exact(r) => Some(r),
            _ => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", content = "m")]
pub enum Dimension {
    One,
    Two(f64),
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RadiusClassification {
    pub value: RadiusValue,
    pub rule: String,
    pub dimension: Dimension,
}

impl RadiusClassification {
    fn one(value: RadiusValue, rule: &str) -> Self {
        RadiusClassification { value, rule: rule.to_string(), dimension: Dimension::One }
    }
}

/// Exponent of the zero set as used by the rules: 0 for finitely many zeros.
fn rho(zeros: &ZeroSet) -> Result<f64> {
    if !zeros.is_infinite() {
        return Ok(0.0);
    }
    convergence_exponent(zeros).map(|e| e.value)
}

fn sin_ratio_blocks(zeros: &ZeroSet) -> Vec<(f64, bool)> {
    zeros
        .blocks
        .iter()
        .filter_map(|b| match b.kind {
            BlockKind::Generator(ZeroGenerator::SinRatio { nu, .. }) => Some((nu, b.reflected)),
            _ => None,
        })
        .collect()
}

/// One-dimensional radius. Rules in order of strength: singular atoms, the
/// convergence exponent, generator-specific results, and the general lower
/// bound `r_φ ≥ x/2`.
pub fn classify_1d(spec: &InnerFunctionSpec) -> Result<RadiusClassification> {
    let spec = validate_and_generate(spec)?;
    let x = spec.translation;
    if !spec.atoms.is_empty() {
        return Ok(RadiusClassification::one(RadiusValue::Infinite, "singular measure nonzero ⇒ r = ∞"));
    }
    let rho = match rho(&spec.zeros) {
        Ok(r) => r,
        Err(_) => {
            return Ok(RadiusClassification::one(
                RadiusValue::Unknown(x / 2.0),
                "convergence exponent undetermined; r ≥ x/2",
            ))
        }
    };
    if rho > 1.0 {
        return Ok(RadiusClassification::one(RadiusValue::Infinite, "convergence exponent > 1 ⇒ r = ∞"));
    }
    if rho < 1.0 {
        return Ok(RadiusClassification::one(
            RadiusValue::Exact(x / 2.0),
            "convergence exponent < 1 and no singular part ⇒ r = x/2",
        ));
    }
    let sines = sin_ratio_blocks(&spec.zeros);
    let other_infinite = spec
        .zeros
        .blocks
        .iter()
        .any(|b| !matches!(b.kind, BlockKind::Generator(ZeroGenerator::SinRatio { .. })));
    match sines.as_slice() {
        [(nu, false)] if x == 0.0 && !other_infinite => Ok(RadiusClassification::one(
            RadiusValue::Exact(*nu),
            "sin-ratio quotient ⇒ r = ν (finite extra zeros do not change it)",
        )),
        [] => Ok(RadiusClassification::one(
            RadiusValue::Unknown(x / 2.0),
            "convergence exponent = 1 without a known generator; r ≥ x/2",
        )),
        _ => {
            let nu = sines.iter().map(|s| s.0).fold(0.0, f64::max);
            Ok(RadiusClassification::one(
                RadiusValue::Unknown(nu.max(x / 2.0)),
                "sin-ratio factor with further data; r ≥ max(ν, x/2)",
            ))
        }
    }
}

/// Zeros of the momentum-picture Blaschke product, `p ↦ p - m²/(4p)` folded to
/// `re ≥ 0`. The result is a sample block when the input was infinite.
pub fn momentum_zero_transform(zeros: &ZeroSet, m: f64) -> Result<ZeroSet> {
    if !(m.is_finite() && m > 0.0) {
        return Err(Error::InvalidMass(m));
    }
    let mut out = Vec::with_capacity(zeros.len());
    for &z in &zeros.zeros {
        if z.norm() == 0.0 {
            return Err(Error::ZeroAtOrigin);
        }
        let w = z - m * m / (4.0 * z);
        out.push(Complex64::new(w.re.abs(), w.im));
    }
    let len = out.len();
    let blocks = if zeros.is_infinite() {
        vec![ZeroBlock { kind: BlockKind::Sample, reflected: false, start: 0, len }]
    } else {
        Vec::new()
    };
    Ok(ZeroSet { zeros: out, blocks })
}

/// Exponent of the momentum-transformed zero set.
pub fn momentum_exponent(spec: &InnerFunctionSpec, m: f64) -> Result<ExponentEstimate> {
    let transformed = momentum_zero_transform(&spec.zeros, m)?;
    convergence_exponent(&transformed)
}

/// Two-dimensional radius at mass `m`.
pub fn classify_2d(spec: &InnerFunctionSpec, m: f64) -> Result<RadiusClassification> {
    if !(m.is_finite() && m > 0.0) {
        return Err(Error::InvalidMass(m));
    }
    let spec = validate_and_generate(spec)?;
    let dimension = Dimension::Two(m);
    let make = |value, rule: &str| RadiusClassification { value, rule: rule.to_string(), dimension };
    if spec.has_off_origin_atoms() {
        return Ok(make(RadiusValue::Infinite, "singular measure not concentrated at 0 ⇒ r_m = ∞"));
    }

    if let Some((ZeroGenerator::GammaExample { .. }, _)) = spec.zeros.sole_generator() {
        if spec.translation == 0.0 && spec.atoms.is_empty() {
            let est = momentum_exponent(&spec, m)?;
            if est.value < 1.0 {
                return Ok(make(
                    RadiusValue::Exact(0.0),
                    "momentum-picture zeros have exponent < 1 and no translation ⇒ r_m = 0",
                ));
            }
        }
    }

    let lower = 0.5 * spec.translation.max(spec.origin_mass());
    let upper = [classify_1d(&spec)?, classify_1d(&gamma_transform(&spec))?]
        .iter()
        .filter_map(|c| c.value.exact())
        .fold(f64::INFINITY, f64::min);
    if upper.is_finite() {
        if (upper - lower).abs() <= AGREE_TOL * (1.0 + upper) {
            Ok(make(RadiusValue::Exact(lower), "½max(x, x_γ) ≤ r_m ≤ min(r, r_γ) coincide"))
        } else {
            Ok(make(RadiusValue::LowerBound(lower), "r_m ≥ ½max(x, x_γ); upper bound min(r, r_γ) differs"))
        }
    } else {
        Ok(make(RadiusValue::Unknown(lower), "no finite upper bound; r_m ≥ ½max(x, x_γ)"))
    }
}

/// Mass used for the two-dimensional classification of a catalog entry.
pub fn natural_mass(spec: &InnerFunctionSpec) -> f64 {
    match spec.zeros.sole_generator() {
        Some((ZeroGenerator::GammaExample { m, .. }, _)) => m,
        _ => 1.0,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RelationCheck {
    pub relation: String,
    pub lhs: String,
    pub rhs: String,
    pub value: RadiusValue,
    pub bound_low: f64,
    pub bound_high: f64,
    pub ok: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RelationsReport {
    pub checks: Vec<RelationCheck>,
    pub violations: usize,
    pub skipped: usize,
}

/// Sub-additivity `max(r₁, r₂) ≤ r_{φ₁φ₂} ≤ r₁ + r₂` over all pairs with decided
/// radii, and `r_m ≤ min(r, r_γ)` for every entry where both sides are decided.
pub fn relations_suite(catalog: &[(String, InnerFunctionSpec)]) -> Result<RelationsReport> {
    let mut checks = Vec::new();
    let mut skipped = 0;
    let radii: Vec<RadiusValue> = catalog
        .iter()
        .map(|(_, s)| classify_1d(s).map(|c| c.value))
        .collect::<Result<_>>()?;

    for i in 0..catalog.len() {
        for j in i..catalog.len() {
            let (Some(r1), Some(r2)) = (radii[i].decided(), radii[j].decided()) else {
                skipped += 1;
                continue;
            };
            let prod = classify_1d(&product(&catalog[i].1, &catalog[j].1))?.value;
            let (lo, hi) = (r1.max(r2), r1 + r2);
            let ok = match prod.decided() {
                Some(r) => within(r, lo, hi),
                // an undecided product must still respect the upper bound
                None => prod.lower() <= hi + AGREE_TOL * (1.0 + hi),
            };
            checks.push(RelationCheck {
                relation: "subadditivity".into(),
                lhs: catalog[i].0.clone(),
                rhs: catalog[j].0.clone(),
                value: prod,
                bound_low: lo,
                bound_high: hi,
                ok,
            });
        }
    }

    for (k, (name, spec)) in catalog.iter().enumerate() {
        let two = classify_2d(spec, natural_mass(spec))?.value;
        let gamma = classify_1d(&gamma_transform(spec))?.value;
        let (Some(r2d), Some(a), Some(b)) = (two.decided(), radii[k].decided(), gamma.decided()) else {
            skipped += 1;
            continue;
        };
        let hi = a.min(b);
        checks.push(RelationCheck {
            relation: "two_dim_below_one_dim".into(),
            lhs: name.clone(),
            rhs: format!("gamma({name})"),
            value: two,
            bound_low: 0.0,
            bound_high: hi,
            ok: within(r2d, 0.0, hi),
        });
    }
    let violations = checks.iter().filter(|c| !c.ok).count();
    Ok(RelationsReport { checks, violations, skipped })
}

fn within(r: f64, lo: f64, hi: f64) -> bool {
    if r.is_infinite() {
        return hi.is_infinite();
    }
    r >= lo - AGREE_TOL * (1.0 + lo) && r <= hi + AGREE_TOL * (1.0 + hi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::inner_fn::Atom;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn one_dimensional_examples() {
        let v = |s: &InnerFunctionSpec| classify_1d(s).unwrap().value;
        assert_eq!(v(&InnerFunctionSpec::atom(0.0, 1.0)), RadiusValue::Infinite);
        assert_eq!(v(&InnerFunctionSpec::blaschke(vec![c(0.0, 1.0), c(0.0, 2.0)])), RadiusValue::Exact(0.0));
        assert_eq!(v(&InnerFunctionSpec::translation(2.0)), RadiusValue::Exact(1.0));
        assert_eq!(v(&InnerFunctionSpec::sin_ratio(0.5, 1.0, 64)), RadiusValue::Exact(0.5));
        assert_eq!(v(&InnerFunctionSpec::gamma_example(2.0, 50, 2.0)), RadiusValue::Infinite);
        let shifted = InnerFunctionSpec { translation: 1.0, ..InnerFunctionSpec::sin_ratio(0.5, 1.0, 64) };
        assert_eq!(v(&shifted), RadiusValue::Unknown(0.5));
        let reflected = gamma_transform(&InnerFunctionSpec::sin_ratio(0.5, 1.0, 64));
        assert_eq!(v(&reflected), RadiusValue::Infinite);
    }

    #[test]
    fn two_dimensional_examples() {
        let v = |s: &InnerFunctionSpec, m| classify_2d(s, m).unwrap().value;
        assert_eq!(v(&InnerFunctionSpec::atom(1.0, 1.0), 1.0), RadiusValue::Infinite);
        assert_eq!(v(&InnerFunctionSpec::translation(2.0), 1.0), RadiusValue::Exact(1.0));
        assert_eq!(v(&InnerFunctionSpec::atom(0.0, 1.0), 1.0), RadiusValue::Exact(0.5));
        assert_eq!(v(&InnerFunctionSpec::gamma_example(2.0, 400, 2.0), 2.0), RadiusValue::Exact(0.0));
        assert!(matches!(classify_2d(&InnerFunctionSpec::identity(), 0.0), Err(Error::InvalidMass(_))));
        // both x and the origin mass present: bound 1, upper bounds infinite
        let both = InnerFunctionSpec { translation: 2.0, atoms: vec![Atom { location: 0.0, mass: 1.0 }], ..Default::default() };
        assert_eq!(v(&both, 1.0), RadiusValue::Unknown(1.0));
    }

    #[test]
    fn momentum_transform_examples() {
        let z = momentum_zero_transform(&ZeroSet::finite(vec![c(0.0, 1.0)]), 2.0).unwrap();
        assert!((z.zeros[0] - c(0.0, 2.0)).norm() < 1e-15);
        let g = InnerFunctionSpec::gamma_example(2.0, 400, 2.0);
        let t = momentum_zero_transform(&g.zeros, 2.0).unwrap();
        assert!((t.zeros[0] - c(0.0, 2.0 * 1f64.sin())).norm() < 1e-14);
        assert!((t.zeros[0].im - 1.682_941_969_615_793).abs() < 1e-12);
        let e = convergence_exponent(&t).unwrap();
        assert!((e.value - 0.5).abs() < 0.1, "{}", e.value);
        assert!(matches!(
            momentum_zero_transform(&ZeroSet::finite(vec![c(0.0, 0.0)]), 1.0),
            Err(Error::ZeroAtOrigin)
        ));
    }

    #[test]
    fn relations_examples() {
        let cat = vec![
            ("x1".to_string(), InnerFunctionSpec::translation(1.0)),
            ("x2".to_string(), InnerFunctionSpec::translation(2.0)),
            ("b".to_string(), InnerFunctionSpec::blaschke(vec![c(0.0, 1.0)])),
            ("s".to_string(), InnerFunctionSpec::sin_ratio(0.5, 1.0, 64)),
            ("a0".to_string(), InnerFunctionSpec::atom(0.0, 1.0)),
        ];
        let rep = relations_suite(&cat).unwrap();
        assert_eq!(rep.violations, 0, "{:#?}", rep.checks.iter().filter(|c| !c.ok).collect::<Vec<_>>());
        let x12 = rep.checks.iter().find(|c| c.lhs == "x1" && c.rhs == "x2").unwrap();
        assert_eq!(x12.value, RadiusValue::Exact(1.5));
        let sa = rep.checks.iter().find(|c| c.lhs == "s" && c.rhs == "a0").unwrap();
        assert_eq!(sa.value, RadiusValue::Infinite);
    }
}
