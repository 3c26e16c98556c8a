//! Symmetric inner functions `φ(p) = ±e^{ipx} B(p) S(p)` on the upper half-plane,
//! stored through their factorization data.
//!
//! Zeros are stored with `re >= 0`. A stored zero with `re > 0` stands for the
//! mirror pair `(p_n, -conj p_n)`; a purely imaginary zero is stored once.
//! Singular atoms at `t > 0` are paired with `-t` in the same way.

use num_complex::Complex64;
use serde::Serialize;
use std::f64::consts::PI;

use crate::error::{Error, Result};

pub type ComplexPoint = Complex64;

const EXP_LIMIT: f64 = 700.0;
const POLE_EPS: f64 = 1e-14;

/// Zero sequences with a known closed form.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ZeroGenerator {
    /// Zeros of `sin(νp - iq)`, i.e. `(iq + πn)/ν`.
    SinRatio { nu: f64, q: f64, count: usize },
    /// The γ-invariant set built from `p_n = n^{-β} e^{i/n}`.
    GammaExample { beta: f64, count: usize, m: f64 },
}

impl ZeroGenerator {
    pub fn validate(&self) -> Result<()> {
        match *self {
            ZeroGenerator::SinRatio { nu, q, .. } => {
                if !(nu.is_finite() && nu > 0.0) {
                    return Err(Error::InvalidGenerator(format!("sin_ratio needs nu > 0, got {nu}")));
                }
                if !(q.is_finite() && q > 0.0) {
                    return Err(Error::InvalidGenerator(format!("sin_ratio needs q > 0, got {q}")));
                }
            }
            ZeroGenerator::GammaExample { beta, m, .. } => {
                if !(beta.is_finite() && beta > 1.0) {
                    return Err(Error::InvalidGenerator(format!(
                        "gamma_example needs beta > 1, got {beta}"
                    )));
                }
                if !(m.is_finite() && m > 0.0) {
                    return Err(Error::InvalidGenerator(format!("gamma_example needs m > 0, got {m}")));
                }
            }
        }
        Ok(())
    }

    /// Folded zeros in generation order.
    pub fn zeros(&self) -> Vec<Complex64> {
        match *self {
            ZeroGenerator::SinRatio { nu, q, count } => (0..count)
                .map(|n| Complex64::new(PI * n as f64 / nu, q / nu))
                .collect(),
            ZeroGenerator::GammaExample { beta, count, .. } => {
                let mut out = Vec::with_capacity(2 * count);
                for n in 1..=count {
                    let nf = n as f64;
                    let p = Complex64::from_polar(nf.powf(-beta), 1.0 / nf);
                    out.push(p);
                    out.push(reflect(p));
                }
                out
            }
        }
    }

    /// Closed-form convergence exponent of the full (infinite) sequence.
    pub fn exponent(&self, reflected: bool) -> f64 {
        match self {
            ZeroGenerator::SinRatio { .. } if !reflected => 1.0,
            // 1/conj of an arithmetic progression accumulates at 0
            ZeroGenerator::SinRatio { .. } => f64::INFINITY,
            ZeroGenerator::GammaExample { .. } => f64::INFINITY,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            ZeroGenerator::SinRatio { .. } => "sin_ratio",
            ZeroGenerator::GammaExample { .. } => "gamma_example",
        }
    }
}

/// What a contiguous run of stored zeros stands for.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum BlockKind {
    Generator(ZeroGenerator),
    /// Leading terms of an infinite sequence without a closed form.
    Sample,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ZeroBlock {
    pub kind: BlockKind,
    /// Zeros are stored as images under `p ↦ 1/conj p`.
    pub reflected: bool,
    pub start: usize,
    pub len: usize,
}

/// Blaschke zeros. Zeros outside every block form a finite product.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct ZeroSet {
    pub zeros: Vec<Complex64>,
    pub blocks: Vec<ZeroBlock>,
}

impl ZeroSet {
    pub fn finite(zeros: Vec<Complex64>) -> Self {
        ZeroSet { zeros, blocks: Vec::new() }
    }

    /// Explicit zeros declared to be the leading part of an infinite sequence.
    pub fn sample(zeros: Vec<Complex64>) -> Self {
        let len = zeros.len();
        ZeroSet {
            zeros,
            blocks: vec![ZeroBlock { kind: BlockKind::Sample, reflected: false, start: 0, len }],
        }
    }

    pub fn generated(generator: ZeroGenerator) -> Self {
        let zeros = generator.zeros();
        let len = zeros.len();
        ZeroSet {
            zeros,
            blocks: vec![ZeroBlock { kind: BlockKind::Generator(generator), reflected: false, start: 0, len }],
        }
    }

    pub fn len(&self) -> usize {
        self.zeros.len()
    }

    pub fn is_empty(&self) -> bool {
        self.zeros.is_empty()
    }

    /// Every zero including implicit mirror partners.
    pub fn represented(&self) -> Vec<Complex64> {
        let mut out = Vec::with_capacity(2 * self.zeros.len());
        for &z in &self.zeros {
            out.push(z);
            if z.re > 0.0 {
                out.push(Complex64::new(-z.re, z.im));
            }
        }
        out
    }

    pub fn represented_count(&self) -> usize {
        self.zeros.iter().map(|z| if z.re > 0.0 { 2 } else { 1 }).sum()
    }

    /// `Σ Im p_n / (1 + |p_n|²)` over represented zeros.
    pub fn blaschke_sum(&self) -> f64 {
        self.zeros
            .iter()
            .map(|z| {
                let w = if z.re > 0.0 { 2.0 } else { 1.0 };
                w * z.im / (1.0 + z.norm_sqr())
            })
            .fold(0.0, |a, b| a + b)
    }

    pub fn is_infinite(&self) -> bool {
        !self.blocks.is_empty()
    }

    fn closed_form_mask(&self) -> Vec<bool> {
        let mut mask = vec![false; self.zeros.len()];
        for b in &self.blocks {
            if let BlockKind::Generator(ZeroGenerator::SinRatio { .. }) = b.kind {
                for m in &mut mask[b.start..b.start + b.len] {
                    *m = true;
                }
            }
        }
        mask
    }

    /// The generator of the set when it consists of exactly one generated block.
    pub fn sole_generator(&self) -> Option<(ZeroGenerator, bool)> {
        match self.blocks.as_slice() {
            [b] if b.start == 0 && b.len == self.zeros.len() => match b.kind {
                BlockKind::Generator(g) => Some((g, b.reflected)),
                BlockKind::Sample => None,
            },
            _ => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Atom {
    pub location: f64,
    pub mass: f64,
}

/// Factorization data of `φ = sign · e^{ipx} · B · S`.
#[derive(Clone, Debug, PartialEq)]
pub struct InnerFunctionSpec {
    pub sign: i32,
    pub translation: f64,
    pub zeros: ZeroSet,
    pub atoms: Vec<Atom>,
    /// Number of stored zeros kept by normalization.
    pub truncation_order: usize,
}

impl Default for InnerFunctionSpec {
    fn default() -> Self {
        Self::identity()
    }
}

impl InnerFunctionSpec {
    pub fn identity() -> Self {
        InnerFunctionSpec {
            sign: 1,
            translation: 0.0,
            zeros: ZeroSet::default(),
            atoms: Vec::new(),
            truncation_order: 0,
        }
    }

    pub fn translation(x: f64) -> Self {
        InnerFunctionSpec { translation: x, ..Self::identity() }
    }

    pub fn blaschke(zeros: Vec<Complex64>) -> Self {
        let n = zeros.len();
        InnerFunctionSpec { zeros: ZeroSet::finite(zeros), truncation_order: n, ..Self::identity() }
    }

    pub fn atom(location: f64, mass: f64) -> Self {
        InnerFunctionSpec { atoms: vec![Atom { location, mass }], ..Self::identity() }
    }

    pub fn from_generator(generator: ZeroGenerator) -> Self {
        let zeros = ZeroSet::generated(generator);
        let n = zeros.len();
        InnerFunctionSpec { zeros, truncation_order: n, ..Self::identity() }
    }

    pub fn sin_ratio(nu: f64, q: f64, count: usize) -> Self {
        Self::from_generator(ZeroGenerator::SinRatio { nu, q, count })
    }

    pub fn gamma_example(beta: f64, count: usize, m: f64) -> Self {
        Self::from_generator(ZeroGenerator::GammaExample { beta, count, m })
    }

    /// Mass of the atom at the origin, 0 when absent.
    pub fn origin_mass(&self) -> f64 {
        self.atoms.iter().filter(|a| a.location == 0.0).fold(0.0, |acc, a| acc + a.mass)
    }

    pub fn has_off_origin_atoms(&self) -> bool {
        self.atoms.iter().any(|a| a.location != 0.0)
    }

    /// Value of φ. Generated sin-ratio blocks use the closed form
    /// `sin(νp - iq)/sin(νp + iq)`, every other zero a paired Blaschke factor.
    pub fn evaluate(&self, p: Complex64) -> Result<Complex64> {
        let mut value = Complex64::new(f64::from(self.sign), 0.0) * self.outer_factors(p)?;
        let mask = self.zeros.closed_form_mask();
        for b in &self.zeros.blocks {
            if let BlockKind::Generator(ZeroGenerator::SinRatio { nu, q, .. }) = b.kind {
                value *= if b.reflected {
                    if p == Complex64::new(0.0, 0.0) {
                        return Err(pole(p));
                    }
                    // the sign matches the product of reflected Blaschke factors
                    -sin_ratio_closed(nu, q, reflect(p))?.conj()
                } else {
                    sin_ratio_closed(nu, q, p)?
                };
            }
        }
        for (z, covered) in self.zeros.zeros.iter().zip(mask) {
            if !covered {
                value *= blaschke_factor(*z, p)?;
            }
        }
        Ok(value)
    }

    /// φ with the first `order` stored zeros as Blaschke factors and no closed forms.
    pub fn evaluate_truncated(&self, p: Complex64, order: usize) -> Result<Complex64> {
        let mut value = Complex64::new(f64::from(self.sign), 0.0) * self.outer_factors(p)?;
        for z in self.zeros.zeros.iter().take(order) {
            value *= blaschke_factor(*z, p)?;
        }
        Ok(value)
    }

    /// Convenience for real arguments.
    pub fn evaluate_real(&self, p: f64) -> Result<Complex64> {
        self.evaluate(Complex64::new(p, 0.0))
    }

    fn outer_factors(&self, p: Complex64) -> Result<Complex64> {
        let mut log = Complex64::new(0.0, 0.0);
        if self.translation != 0.0 {
            log += Complex64::i() * p * self.translation;
        }
        for a in &self.atoms {
            log += -Complex64::i() * a.mass * atom_kernel(a.location, p)?;
        }
        if log.re > EXP_LIMIT {
            return Err(Error::Overflow { re: p.re, im: p.im });
        }
        Ok(log.exp())
    }
}

/// `p ↦ 1/conj p`.
pub fn reflect(p: Complex64) -> Complex64 {
    p / p.norm_sqr()
}

fn pole(p: Complex64) -> Error {
    Error::Pole { re: p.re, im: p.im }
}

fn atom_kernel(t: f64, p: Complex64) -> Result<Complex64> {
    let one = Complex64::new(1.0, 0.0);
    if t == 0.0 {
        if p.norm() <= POLE_EPS {
            return Err(pole(p));
        }
        return Ok(one / p);
    }
    let d1 = p - t;
    let d2 = p + t;
    if d1.norm() <= POLE_EPS * (1.0 + t) || d2.norm() <= POLE_EPS * (1.0 + t) {
        return Err(pole(p));
    }
    Ok((one + p * t) / d1 + (one - p * t) / d2)
}

/// Paired factor `(p-z)(p+z̄)/((p-z̄)(p+z))`, single factor for imaginary `z`.
pub fn blaschke_factor(z: Complex64, p: Complex64) -> Result<Complex64> {
    let zc = z.conj();
    let den1 = p - zc;
    if den1.norm() <= POLE_EPS * (1.0 + z.norm()) {
        return Err(pole(p));
    }
    if z.re == 0.0 {
        return Ok((p - z) / den1);
    }
    let den2 = p + z;
    if den2.norm() <= POLE_EPS * (1.0 + z.norm()) {
        return Err(pole(p));
    }
    Ok((p - z) * (p + zc) / (den1 * den2))
}

/// `sin(νp - iq)/sin(νp + iq)` written in `u = e^{iνp}` so that it stays finite
/// away from the poles in both half-planes.
pub fn sin_ratio_closed(nu: f64, q: f64, p: Complex64) -> Result<Complex64> {
    let e = (-2.0 * q).exp();
    let one = Complex64::new(1.0, 0.0);
    let value = if p.im >= 0.0 {
        let u2 = (Complex64::i() * 2.0 * nu * p).exp();
        let den = one - u2 * e;
        if den.norm() <= POLE_EPS {
            return Err(pole(p));
        }
        -(u2 - e) / den
    } else {
        let v2 = (-Complex64::i() * 2.0 * nu * p).exp();
        let den = v2 - e;
        if den.norm() <= POLE_EPS {
            return Err(pole(p));
        }
        -(one - e * v2) / den
    };
    if !(value.re.is_finite() && value.im.is_finite()) {
        return Err(Error::Overflow { re: p.re, im: p.im });
    }
    Ok(value)
}

fn finite_point(z: Complex64, what: &'static str) -> Result<()> {
    if z.re.is_finite() && z.im.is_finite() {
        Ok(())
    } else {
        Err(Error::NonFinite(what))
    }
}

/// Checks every invariant, folds zeros into `re >= 0`, cuts the zero list to
/// `truncation_order` and sorts atoms by location.
pub fn validate_and_generate(spec: &InnerFunctionSpec) -> Result<InnerFunctionSpec> {
    if spec.sign != 1 && spec.sign != -1 {
        return Err(Error::InvalidSign(spec.sign));
    }
    if !spec.translation.is_finite() {
        return Err(Error::NonFinite("translation"));
    }
    if spec.translation < 0.0 {
        return Err(Error::NegativeTranslation(spec.translation));
    }
    for b in &spec.zeros.blocks {
        if let BlockKind::Generator(g) = b.kind {
            g.validate()?;
        }
        if b.start + b.len > spec.zeros.zeros.len() {
            return Err(Error::InvalidInput("zero block exceeds the zero list".into()));
        }
    }
    let available = spec.zeros.len();
    if spec.truncation_order > available {
        return Err(Error::Truncation { order: spec.truncation_order, available });
    }
    let mut zeros = Vec::with_capacity(spec.truncation_order);
    for &z in spec.zeros.zeros.iter().take(spec.truncation_order) {
        finite_point(z, "zero")?;
        if z.im <= 0.0 {
            return Err(Error::LowerHalfPlaneZero { re: z.re, im: z.im });
        }
        zeros.push(Complex64::new(z.re.abs(), z.im));
    }
    let blocks = spec
        .zeros
        .blocks
        .iter()
        .filter_map(|b| {
            let end = (b.start + b.len).min(zeros.len());
            let start = b.start.min(end);
            let keep = end > start || matches!(b.kind, BlockKind::Generator(ZeroGenerator::SinRatio { .. }));
            keep.then_some(ZeroBlock { start, len: end - start, ..*b })
        })
        .collect();

    let mut atoms: Vec<Atom> = Vec::with_capacity(spec.atoms.len());
    for a in &spec.atoms {
        if !(a.location.is_finite() && a.mass.is_finite()) {
            return Err(Error::NonFinite("atom"));
        }
        if a.location < 0.0 {
            return Err(Error::NegativeAtomLocation(a.location));
        }
        if a.mass <= 0.0 {
            return Err(Error::NonPositiveMass(a.mass));
        }
        atoms.push(*a);
    }
    atoms.sort_by(|a, b| a.location.total_cmp(&b.location));
    if let Some(w) = atoms.windows(2).find(|w| w[0].location == w[1].location) {
        return Err(Error::DuplicateAtom(w[0].location));
    }

    Ok(InnerFunctionSpec {
        sign: spec.sign,
        translation: spec.translation,
        truncation_order: zeros.len(),
        zeros: ZeroSet { zeros, blocks },
        atoms,
    })
}

/// Residuals of `|φ| = 1` and `φ(-p) = conj φ(p)` on a real grid.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SymmetryReport {
    pub modulus_residual: f64,
    pub reflection_residual: f64,
    pub failed_points: usize,
    pub tolerance: f64,
    pub pass: bool,
}

pub fn symmetry_check_with<F>(f: F, grid: &[f64], tolerance: f64) -> SymmetryReport
where
    F: Fn(Complex64) -> Result<Complex64>,
{
    let mut modulus_residual: f64 = 0.0;
    let mut reflection_residual: f64 = 0.0;
    let mut failed_points = 0;
    for &p in grid {
        match (f(Complex64::new(p, 0.0)), f(Complex64::new(-p, 0.0))) {
            (Ok(a), Ok(b)) => {
                modulus_residual = modulus_residual.max((a.norm() - 1.0).abs());
                reflection_residual = reflection_residual.max((b - a.conj()).norm());
            }
            _ => failed_points += 1,
        }
    }
    let pass = failed_points == 0 && modulus_residual < tolerance && reflection_residual < tolerance;
    SymmetryReport { modulus_residual, reflection_residual, failed_points, tolerance, pass }
}

pub fn symmetry_check(spec: &InnerFunctionSpec, grid: &[f64]) -> SymmetryReport {
    symmetry_check_with(|p| spec.evaluate(p), grid, 1e-10)
}

/// Spec of `γ(φ)(p) = conj φ(1/conj p)`.
///
/// Zeros go to `1/conj p_n`, the translation becomes an atom at the origin and
/// vice versa, and an atom at `t > 0` moves to `1/t`. The kernel
/// `(1+pt)/(p-t)` is invariant under `t ↦ 1/t` up to the sign that the
/// conjugation removes, so masses carry over unchanged. Each purely imaginary
/// zero contributes a factor `-1` to the sign.
pub fn gamma_transform(spec: &InnerFunctionSpec) -> InnerFunctionSpec {
    let zeros = spec.zeros.zeros.iter().map(|&z| {
        let w = reflect(z);
        Complex64::new(w.re.abs(), w.im)
    });
    let blocks = spec
        .zeros
        .blocks
        .iter()
        .map(|b| ZeroBlock { reflected: !b.reflected, ..*b })
        .collect();
    let mut atoms: Vec<Atom> = spec
        .atoms
        .iter()
        .filter(|a| a.location != 0.0)
        .map(|a| Atom { location: 1.0 / a.location, mass: a.mass })
        .collect();
    if spec.translation > 0.0 {
        atoms.push(Atom { location: 0.0, mass: spec.translation });
    }
    atoms.sort_by(|a, b| a.location.total_cmp(&b.location));
    InnerFunctionSpec {
        sign: spec.sign * canonical_sign(&spec.zeros),
        translation: spec.origin_mass(),
        zeros: ZeroSet { zeros: zeros.collect(), blocks },
        atoms,
        truncation_order: spec.truncation_order,
    }
}

/// Spec of the pointwise product.
pub fn product(a: &InnerFunctionSpec, b: &InnerFunctionSpec) -> InnerFunctionSpec {
    let offset = a.zeros.len();
    let mut zeros = a.zeros.zeros.clone();
    zeros.extend_from_slice(&b.zeros.zeros);
    let mut blocks = a.zeros.blocks.clone();
    blocks.extend(b.zeros.blocks.iter().map(|blk| ZeroBlock { start: blk.start + offset, ..*blk }));

    let mut atoms = a.atoms.clone();
    for atom in &b.atoms {
        match atoms.iter_mut().find(|x| x.location == atom.location) {
            Some(x) => x.mass += atom.mass,
            None => atoms.push(*atom),
        }
    }
    atoms.sort_by(|x, y| x.location.total_cmp(&y.location));
    InnerFunctionSpec {
        sign: a.sign * b.sign,
        translation: a.translation + b.translation,
        truncation_order: zeros.len(),
        zeros: ZeroSet { zeros, blocks },
        atoms,
    }
}

/// Structural test for `γ(φ) = φ`: zero multiset closed under `p ↦ 1/conj p`,
/// translation equal to the origin mass, off-origin atoms closed under `t ↦ 1/t`.
pub fn is_gamma_invariant(spec: &InnerFunctionSpec, tol: f64) -> bool {
    if (spec.translation - spec.origin_mass()).abs() > tol {
        return false;
    }
    for a in spec.atoms.iter().filter(|a| a.location != 0.0) {
        let image = 1.0 / a.location;
        let matched = spec
            .atoms
            .iter()
            .any(|b| (b.location - image).abs() <= tol * (1.0 + image) && (b.mass - a.mass).abs() <= tol);
        if !matched {
            return false;
        }
    }
    let zs = &spec.zeros.zeros;
    let mut used = vec![false; zs.len()];
    for &z in zs {
        let w = reflect(z);
        let found = zs
            .iter()
            .enumerate()
            .find(|(j, y)| !used[*j] && (**y - w).norm() <= tol * (1.0 + w.norm()));
        match found {
            Some((j, _)) => used[j] = true,
            None => return false,
        }
    }
    true
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExponentMethod {
    ClosedForm,
    Accumulation,
    CountingFit,
}

/// Convergence-exponent estimate with the evidence behind it.
#[derive(Clone, Debug, PartialEq)]
pub struct ExponentEstimate {
    pub value: f64,
    pub method: ExponentMethod,
    /// RMS deviation of `log N(R)` from the fitted line.
    pub fit_residual: f64,
    pub fit_points: usize,
    pub radius_range: (f64, f64),
}

impl ExponentEstimate {
    fn closed(value: f64) -> Self {
        ExponentEstimate {
            value,
            method: ExponentMethod::ClosedForm,
            fit_residual: 0.0,
            fit_points: 0,
            radius_range: (0.0, 0.0),
        }
    }
}

pub const MIN_FIT_ZEROS: usize = 8;

/// Convergence exponent `inf{α : Σ|p_n|^{-α} < ∞}`.
///
/// Generated blocks report their closed form. Plain lists and sample blocks are
/// first screened for a finite accumulation point, then fitted by the slope of
/// `log N(R)` against `log R`.
pub fn convergence_exponent(zeros: &ZeroSet) -> Result<ExponentEstimate> {
    if zeros.blocks.is_empty() {
        return fit_exponent(&zeros.zeros);
    }
    let mut best: Option<ExponentEstimate> = None;
    for b in &zeros.blocks {
        let est = match b.kind {
            BlockKind::Generator(g) => ExponentEstimate::closed(g.exponent(b.reflected)),
            BlockKind::Sample => {
                fit_exponent(&zeros.zeros[b.start..b.start + b.len])?
            }
        };
        if best.as_ref().is_none_or(|e| est.value > e.value) {
            best = Some(est);
        }
    }
    Ok(best.expect("at least one block"))
}

fn fit_exponent(stored: &[Complex64]) -> Result<ExponentEstimate> {
    let points = ZeroSet::finite(stored.to_vec()).represented();
    let m = points.len();
    if m < MIN_FIT_ZEROS {
        return Err(Error::TooFewZeros(m));
    }
    let mut moduli: Vec<f64> = points.iter().map(|z| z.norm()).collect();
    moduli.sort_by(f64::total_cmp);
    if moduli[0] == 0.0 {
        return Err(Error::ZeroAtOrigin);
    }

    if accumulates(stored) {
        return Ok(ExponentEstimate {
            value: f64::INFINITY,
            method: ExponentMethod::Accumulation,
            fit_residual: 0.0,
            fit_points: m,
            radius_range: (moduli[0], moduli[m - 1]),
        });
    }

    // (log R, log N(R)) at the last index of every distinct modulus
    let first = m / 8;
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for k in first..m {
        let last_of_tie = k + 1 == m || moduli[k + 1] > moduli[k] * (1.0 + 1e-12);
        if last_of_tie {
            xs.push(moduli[k].ln());
            ys.push(((k + 1) as f64).ln());
        }
    }
    if xs.len() < 4 {
        return Err(Error::TooFewZeros(m));
    }
    let (slope, intercept) = least_squares(&xs, &ys);
    let rss: f64 = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (y - slope * x - intercept).powi(2))
        .sum();
    Ok(ExponentEstimate {
        value: slope,
        method: ExponentMethod::CountingFit,
        fit_residual: (rss / xs.len() as f64).sqrt(),
        fit_points: xs.len(),
        radius_range: (moduli[first], moduli[m - 1]),
    })
}

/// Cauchy test on the bounded part of the sequence, in stored order: the zeros
/// inside the unit disk are numerous and their last quarter has shrunk to a
/// tenth of their diameter.
fn accumulates(stored: &[Complex64]) -> bool {
    let inside: Vec<Complex64> = stored.iter().copied().filter(|z| z.norm() <= 1.0).collect();
    let need = (stored.len() / 4).max(MIN_FIT_ZEROS);
    if inside.len() < need {
        return false;
    }
    let diameter = |pts: &[Complex64]| {
        pts.iter()
            .flat_map(|a| pts.iter().map(move |b| (a - b).norm()))
            .fold(0.0, f64::max)
    };
    let tail = &inside[inside.len() - inside.len() / 4..];
    diameter(tail) <= 0.1 * diameter(&inside)
}

pub(crate) fn least_squares(xs: &[f64], ys: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let slope = sxy / sxx;
    (slope, my - slope * mx)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Plus,
    Minus,
}

/// Genus-zero canonical product `Q₊(p) = ∏(1 - p/p_n)` over all represented
/// zeros, or `Q₋(p) = conj Q₊(conj p)`. `B = (-1)^k Q₊/Q₋` where `k` counts the
/// purely imaginary zeros.
pub fn canonical_product_eval(zeros: &ZeroSet, p: Complex64, side: Side) -> Complex64 {
    let arg = match side {
        Side::Plus => p,
        Side::Minus => p.conj(),
    };
    let one = Complex64::new(1.0, 0.0);
    let mut q = one;
    for &z in &zeros.zeros {
        q *= one - arg / z;
        if z.re > 0.0 {
            q *= one + arg / z.conj();
        }
    }
    match side {
        Side::Plus => q,
        Side::Minus => q.conj(),
    }
}

/// `(-1)^k`, `k` the number of purely imaginary stored zeros.
pub fn canonical_sign(zeros: &ZeroSet) -> i32 {
    if zeros.zeros.iter().filter(|z| z.re == 0.0).count() % 2 == 0 {
        1
    } else {
        -1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
        (0..n)
            .map(|k| (lo.ln() + (hi.ln() - lo.ln()) * k as f64 / (n - 1) as f64).exp())
            .collect()
    }

    #[test]
    fn sin_ratio_zeros_fold_to_right_half() {
        let s = validate_and_generate(&InnerFunctionSpec::sin_ratio(1.0, 1.0, 5)).unwrap();
        let expected: Vec<Complex64> = (0..5).map(|n| c(PI * n as f64, 1.0)).collect();
        assert_eq!(s.zeros.zeros.len(), 5);
        for (z, e) in s.zeros.zeros.iter().zip(&expected) {
            assert!((z - e).norm() < 1e-15);
        }
    }

    #[test]
    fn identity_is_constant_one() {
        let s = validate_and_generate(&InnerFunctionSpec::identity()).unwrap();
        for p in [c(0.3, 0.0), c(-2.0, 1.0), c(5.0, 7.0)] {
            assert_eq!(s.evaluate(p).unwrap(), c(1.0, 0.0));
        }
    }

    #[test]
    fn rejects_bad_data() {
        let bad = InnerFunctionSpec::blaschke(vec![c(0.0, -1.0)]);
        assert!(matches!(validate_and_generate(&bad), Err(Error::LowerHalfPlaneZero { .. })));
        assert!(matches!(
            validate_and_generate(&InnerFunctionSpec::translation(-1.0)),
            Err(Error::NegativeTranslation(_))
        ));
        assert!(matches!(
            validate_and_generate(&InnerFunctionSpec::atom(0.0, -1.0)),
            Err(Error::NonPositiveMass(_))
        ));
        assert!(matches!(
            validate_and_generate(&InnerFunctionSpec::sin_ratio(0.0, 1.0, 4)),
            Err(Error::InvalidGenerator(_))
        ));
        assert!(matches!(
            validate_and_generate(&InnerFunctionSpec::sin_ratio(1.0, -1.0, 4)),
            Err(Error::InvalidGenerator(_))
        ));
        let mut too_long = InnerFunctionSpec::blaschke(vec![c(0.0, 1.0)]);
        too_long.truncation_order = 3;
        assert!(matches!(validate_and_generate(&too_long), Err(Error::Truncation { .. })));
    }

    #[test]
    fn point_values() {
        let z = InnerFunctionSpec::blaschke(vec![c(0.0, 1.0)]);
        assert!(z.evaluate(c(0.0, 1.0)).unwrap().norm() < 1e-15);
        let t = InnerFunctionSpec::translation(2.0);
        assert!((t.evaluate(c(0.0, 1.0)).unwrap() - c((-2.0f64).exp(), 0.0)).norm() < 1e-15);
        assert!((t.evaluate(c(0.0, 1.0)).unwrap().re - 0.135335283236612_7).abs() < 1e-14);
        let s = InnerFunctionSpec::sin_ratio(1.0, 1.0, 32);
        assert!((s.evaluate(c(0.0, 0.0)).unwrap() - c(-1.0, 0.0)).norm() < 1e-15);
        // truncated Blaschke at p = 0: the n = 0 factor is -1, pairs give +1
        assert!((s.evaluate_truncated(c(0.0, 0.0), 32).unwrap() - c(-1.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn closed_form_matches_sine_quotient() {
        // direct quotient of complex sines as an independent oracle
        let (nu, q) = (0.7, 0.9);
        for p in [c(0.3, 0.2), c(-1.4, 0.05), c(2.0, -0.3), c(0.1, 3.0)] {
            let direct = (p * nu - Complex64::i() * q).sin() / (p * nu + Complex64::i() * q).sin();
            assert!((sin_ratio_closed(nu, q, p).unwrap() - direct).norm() < 1e-12);
        }
    }

    #[test]
    fn evaluation_errors() {
        let z = InnerFunctionSpec::blaschke(vec![c(0.0, 1.0)]);
        assert!(matches!(z.evaluate(c(0.0, -1.0)), Err(Error::Pole { .. })));
        let a = InnerFunctionSpec::atom(1.0, 1.0);
        assert!(matches!(a.evaluate(c(1.0, 0.0)), Err(Error::Pole { .. })));
        assert!(matches!(a.evaluate(c(-1.0, 0.0)), Err(Error::Pole { .. })));
        let t = InnerFunctionSpec::translation(10.0);
        assert!(matches!(t.evaluate(c(0.0, -100.0)), Err(Error::Overflow { .. })));
    }

    #[test]
    fn symmetry_reports() {
        let grid = log_grid(0.1, 10.0, 100);
        let z = InnerFunctionSpec::blaschke(vec![c(0.0, 1.0)]);
        let r = symmetry_check(&z, &grid);
        assert!(r.pass && r.modulus_residual < 1e-12 && r.reflection_residual < 1e-12);
        let t = InnerFunctionSpec::translation(1.0);
        assert!(symmetry_check(&t, &grid).modulus_residual < 1e-12);
        let bad = symmetry_check_with(|p| Ok(Complex64::new(1.0, 0.0) / (p + Complex64::i())), &grid, 1e-10);
        assert!(!bad.pass);
        let at_one = (Complex64::new(1.0, 0.0) / c(1.0, 1.0)).norm();
        assert!((at_one - 1.0 / 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn gamma_examples() {
        let g = gamma_transform(&InnerFunctionSpec::translation(0.8));
        assert_eq!(g.translation, 0.0);
        assert_eq!(g.atoms, vec![Atom { location: 0.0, mass: 0.8 }]);
        let p = c(1.3, 0.4);
        let expected = (-Complex64::i() * 0.8 / p).exp();
        assert!((g.evaluate(p).unwrap() - expected).norm() < 1e-14);

        let z = gamma_transform(&InnerFunctionSpec::blaschke(vec![c(0.0, 2.0), c(0.0, 1.0)]));
        assert!((z.zeros.zeros[0] - c(0.0, 0.5)).norm() < 1e-15);
        assert!((z.zeros.zeros[1] - c(0.0, 1.0)).norm() < 1e-15);
    }

    #[test]
    fn gamma_pointwise_for_off_origin_atoms() {
        let spec = InnerFunctionSpec {
            atoms: vec![Atom { location: 0.5, mass: 0.3 }, Atom { location: 2.0, mass: 0.2 }],
            translation: 0.4,
            ..InnerFunctionSpec::blaschke(vec![c(1.0, 2.0), c(0.0, 0.5)])
        };
        let g = gamma_transform(&spec);
        for p in [c(0.7, 0.3), c(-1.1, 0.9), c(3.0, 0.1), c(0.2, 2.0)] {
            let direct = spec.evaluate(reflect(p)).unwrap().conj();
            assert!((g.evaluate(p).unwrap() - direct).norm() < 1e-12);
        }
    }

    #[test]
    fn gamma_pointwise_for_sin_ratio() {
        let spec = InnerFunctionSpec::sin_ratio(0.5, 1.0, 16);
        let g = gamma_transform(&spec);
        for p in [c(0.7, 0.3), c(-1.1, 0.9), c(3.0, 0.1)] {
            let direct = spec.evaluate(reflect(p)).unwrap().conj();
            assert!((g.evaluate(p).unwrap() - direct).norm() < 1e-12);
        }
        assert_eq!(gamma_transform(&g).zeros.blocks, spec.zeros.blocks);
    }

    #[test]
    fn product_examples() {
        let p3 = product(&InnerFunctionSpec::translation(1.0), &InnerFunctionSpec::translation(2.0));
        assert_eq!(p3.translation, 3.0);
        let phi = InnerFunctionSpec::blaschke(vec![c(1.0, 1.0)]);
        assert_eq!(product(&phi, &InnerFunctionSpec::identity()), phi);
        let a = InnerFunctionSpec::blaschke(vec![c(0.0, 1.0)]);
        let b = InnerFunctionSpec::blaschke(vec![c(0.0, 2.0)]);
        let ab = product(&a, &b);
        assert_eq!(ab.zeros.zeros, vec![c(0.0, 1.0), c(0.0, 2.0)]);
        for p in [c(0.5, 0.0), c(-2.0, 0.3), c(1.0, 4.0)] {
            let lhs = ab.evaluate(p).unwrap();
            let rhs = a.evaluate(p).unwrap() * b.evaluate(p).unwrap();
            assert!((lhs - rhs).norm() < 1e-12);
        }
    }

    #[test]
    fn exponent_examples() {
        let lin = ZeroSet::finite((1..=200).map(|n| c(0.0, n as f64)).collect());
        let e = convergence_exponent(&lin).unwrap();
        assert_eq!(e.method, ExponentMethod::CountingFit);
        assert!((e.value - 1.0).abs() < 0.05, "{}", e.value);
        let sq = ZeroSet::finite((1..=200).map(|n| c(0.0, (n * n) as f64)).collect());
        assert!((convergence_exponent(&sq).unwrap().value - 0.5).abs() < 0.05);
        let g = InnerFunctionSpec::gamma_example(2.0, 50, 2.0);
        assert_eq!(convergence_exponent(&g.zeros).unwrap().value, f64::INFINITY);
        let few = ZeroSet::finite(vec![c(0.0, 1.0), c(0.0, 2.0)]);
        assert!(matches!(convergence_exponent(&few), Err(Error::TooFewZeros(2))));
    }

    #[test]
    fn accumulation_is_detected_in_plain_lists() {
        let zs: Vec<Complex64> = (1..=200).map(|n| Complex64::from_polar((n as f64).powi(-2), 1.0 / n as f64)).collect();
        let e = convergence_exponent(&ZeroSet::finite(zs)).unwrap();
        assert_eq!(e.method, ExponentMethod::Accumulation);
        assert!(e.value.is_infinite());
    }

    #[test]
    fn canonical_product_examples() {
        let z = ZeroSet::finite(vec![c(0.0, 1.0)]);
        let p = c(0.37, -0.2);
        let expected = c(1.0, 0.0) + Complex64::i() * p;
        assert!((canonical_product_eval(&z, p, Side::Plus) - expected).norm() < 1e-15);
        assert!(canonical_product_eval(&z, c(0.0, 1.0), Side::Plus).norm() < 1e-15);
        let one = c(1.0, 0.0);
        let ratio = canonical_product_eval(&z, one, Side::Plus) / canonical_product_eval(&z, one, Side::Minus);
        assert!((ratio - c(0.0, 1.0)).norm() < 1e-15);
        let b = InnerFunctionSpec::blaschke(vec![c(0.0, 1.0)]).evaluate(one).unwrap();
        assert!((b - c(0.0, -1.0)).norm() < 1e-15);
        assert_eq!(canonical_sign(&z), -1);
        assert_eq!(canonical_product_eval(&ZeroSet::default(), p, Side::Minus), one);
    }

    #[test]
    fn blaschke_sum_counts_mirrors() {
        let z = ZeroSet::finite(vec![c(0.0, 1.0), c(1.0, 1.0)]);
        let expected = 1.0 / 2.0 + 2.0 * (1.0 / 3.0);
        assert!((z.blaschke_sum() - expected).abs() < 1e-15);
    }
}
