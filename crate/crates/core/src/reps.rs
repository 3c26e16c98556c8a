//! Irreducible standard pair in the rapidity, lightray and momentum pictures.
//!
//! Every operator acts pointwise as `(Oψ)(u) = g(u) · K[ψ(σ(u))]` with a
//! multiplier `g`, an optional complex conjugation `K` and a point map `σ`.
//! Chains are composed symbolically before any sampling happens, so identities
//! such as `Δ(t)T(x)Δ(-t) = T(e^{-2πt}x)` hold up to rounding of the composed
//! point map rather than up to interpolation error.

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rustfft::FftPlanner;
use serde::Serialize;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::inner_fn::InnerFunctionSpec;

/// Variables: rapidity θ, lightray momentum `p > 0`, spatial momentum `p₁` at
/// mass `m`, and the full real line used for Fourier analysis.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub enum Picture {
    Rapidity,
    Lightray,
    Momentum { mass: f64 },
    Line,
}

impl Picture {
    pub fn name(&self) -> &'static str {
        match self {
            Picture::Rapidity => "rapidity",
            Picture::Lightray => "lightray",
            Picture::Momentum { .. } => "momentum",
            Picture::Line => "line",
        }
    }

    /// Rapidity of a point, `None` outside the picture's domain.
    pub fn theta(&self, u: f64) -> Option<f64> {
        match *self {
            Picture::Rapidity => Some(u),
            Picture::Lightray => (u > 0.0).then(|| u.ln()),
            Picture::Momentum { mass } => Some((u / mass).asinh()),
            Picture::Line => None,
        }
    }

    pub fn from_theta(&self, theta: f64) -> Option<f64> {
        match *self {
            Picture::Rapidity => Some(theta),
            Picture::Lightray => Some(theta.exp()),
            Picture::Momentum { mass } => Some(mass * theta.sinh()),
            Picture::Line => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub enum Layout {
    /// `n` points `min + k·(max-min)/(n-1)`.
    Uniform { min: f64, max: f64, n: usize },
    /// `n` points `min · ratio^k`.
    Geometric { min: f64, ratio: f64, n: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct GridDescriptor {
    pub picture: Picture,
    pub layout: Layout,
}

impl GridDescriptor {
    pub fn new(picture: Picture, layout: Layout) -> Result<Self> {
        let g = GridDescriptor { picture, layout };
        g.validate()?;
        Ok(g)
    }

    /// Uniform grid `p_k = (k - (n-1)/2)·h`, symmetric and free of the origin for even `n`.
    pub fn symmetric(picture: Picture, n: usize, h: f64) -> Result<Self> {
        let half = 0.5 * (n as f64 - 1.0) * h;
        Self::new(picture, Layout::Uniform { min: -half, max: half, n })
    }

    /// Geometric lightray grid closed under `p ↦ 1/p`.
    pub fn lightray_log_symmetric(n: usize, ratio: f64) -> Result<Self> {
        let min = ratio.powf(-0.5 * (n as f64 - 1.0));
        Self::new(Picture::Lightray, Layout::Geometric { min, ratio, n })
    }

    /// Uniform lightray grid `p_k = (k + ½)h`, the positive half of a symmetric grid.
    pub fn lightray_half_shifted(n: usize, h: f64) -> Result<Self> {
        Self::new(
            Picture::Lightray,
            Layout::Uniform { min: 0.5 * h, max: (n as f64 - 0.5) * h, n },
        )
    }

    fn validate(&self) -> Result<()> {
        let bad = |s: &str| Err(Error::InvalidGrid(s.to_string()));
        match self.layout {
            Layout::Uniform { min, max, n } => {
                if n < 2 || !(min.is_finite() && max.is_finite()) || max <= min {
                    return bad("uniform grid needs n >= 2 and min < max");
                }
                if self.picture == Picture::Lightray && min <= 0.0 {
                    return bad("lightray grids live on p > 0");
                }
            }
            Layout::Geometric { min, ratio, n } => {
                if n < 2 || !(min.is_finite() && min > 0.0 && ratio.is_finite() && ratio > 1.0) {
                    return bad("geometric grid needs n >= 2, min > 0, ratio > 1");
                }
                if self.picture != Picture::Lightray {
                    return bad("geometric layouts are only used in the lightray picture");
                }
            }
        }
        if let Picture::Momentum { mass } = self.picture {
            if !(mass.is_finite() && mass > 0.0) {
                return Err(Error::InvalidMass(mass));
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        match self.layout {
            Layout::Uniform { n, .. } | Layout::Geometric { n, .. } => n,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Step of the interpolation coordinate (`u` for uniform, `ln u` for geometric).
    pub fn step(&self) -> f64 {
        match self.layout {
            Layout::Uniform { min, max, n } => (max - min) / (n as f64 - 1.0),
            Layout::Geometric { ratio, .. } => ratio.ln(),
        }
    }

    fn coord0(&self) -> f64 {
        match self.layout {
            Layout::Uniform { min, .. } => min,
            Layout::Geometric { min, .. } => min.ln(),
        }
    }

    /// Interpolation coordinate of a point, `None` if undefined.
    fn coord(&self, u: f64) -> Option<f64> {
        match self.layout {
            Layout::Uniform { .. } => Some(u),
            Layout::Geometric { .. } => (u > 0.0).then(|| u.ln()),
        }
    }

    pub fn point(&self, k: usize) -> f64 {
        match self.layout {
            Layout::Uniform { min, .. } => min + k as f64 * self.step(),
            Layout::Geometric { min, ratio, .. } => min * ratio.powi(k as i32),
        }
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.len()).map(|k| self.point(k)).collect()
    }

    /// Quadrature weight of the picture measure `dθ`, `dp/p`, `dp₁/ω` or `dp`.
    pub fn weight(&self, k: usize) -> f64 {
        let u = self.point(k);
        match (self.picture, self.layout) {
            (Picture::Lightray, Layout::Geometric { ratio, .. }) => ratio.ln(),
            (Picture::Lightray, _) => self.step() / u,
            (Picture::Momentum { mass }, _) => self.step() / (mass * mass + u * u).sqrt(),
            _ => self.step(),
        }
    }

    pub fn weights(&self) -> Vec<f64> {
        (0..self.len()).map(|k| self.weight(k)).collect()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GridFunction {
    pub grid: GridDescriptor,
    pub samples: Vec<Complex64>,
}

impl GridFunction {
    pub fn new(grid: GridDescriptor, samples: Vec<Complex64>) -> Result<Self> {
        if samples.len() != grid.len() {
            return Err(Error::LengthMismatch(format!(
                "{} samples for a grid of {} points",
                samples.len(),
                grid.len()
            )));
        }
        Ok(GridFunction { grid, samples })
    }

    pub fn from_fn(grid: GridDescriptor, f: impl Fn(f64) -> Complex64) -> Self {
        let samples = grid.points().into_iter().map(f).collect();
        GridFunction { grid, samples }
    }

    pub fn inner(&self, other: &GridFunction) -> Complex64 {
        let w = self.grid.weights();
        self.samples
            .iter()
            .zip(&other.samples)
            .zip(w)
            .map(|((a, b), w)| a.conj() * b * w)
            .sum()
    }

    pub fn norm(&self) -> f64 {
        self.inner(self).re.max(0.0).sqrt()
    }

    /// `‖self - other‖` in the picture measure.
    pub fn distance(&self, other: &GridFunction) -> f64 {
        let w = self.grid.weights();
        self.samples
            .iter()
            .zip(&other.samples)
            .zip(w)
            .map(|((a, b), w)| (a - b).norm_sqr() * w)
            .sum::<f64>()
            .sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.samples.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    fn edge_ratio(&self) -> f64 {
        let peak = self.max_abs();
        if peak == 0.0 {
            return 0.0;
        }
        let n = self.samples.len();
        self.samples[0].norm().max(self.samples[n - 1].norm()) / peak
    }
}

/// Operators of the standard pair. `Tm` needs the lightray or momentum picture.
#[derive(Clone, Debug, PartialEq)]
pub enum OperatorTag {
    T(f64),
    Tprime(f64),
    Delta(f64),
    J,
    Z,
    Gamma,
    Tm { plus: f64, minus: f64, mass: f64 },
    Endo(InnerFunctionSpec),
}

impl OperatorTag {
    pub fn name(&self) -> &'static str {
        match self {
            OperatorTag::T(_) => "T",
            OperatorTag::Tprime(_) => "Tprime",
            OperatorTag::Delta(_) => "Delta",
            OperatorTag::J => "J",
            OperatorTag::Z => "Z",
            OperatorTag::Gamma => "Gamma",
            OperatorTag::Tm { .. } => "Tm",
            OperatorTag::Endo(_) => "Endo",
        }
    }

    pub fn is_antiunitary(&self) -> bool {
        matches!(self, OperatorTag::J | OperatorTag::Gamma)
    }
}

type Mult = Box<dyn Fn(f64) -> Result<Complex64> + Sync>;
type Map = Box<dyn Fn(f64) -> f64 + Sync>;

enum Prim {
    Mult(Mult),
    Map(Map),
    Conj,
}

fn mismatch(op: &OperatorTag, picture: Picture) -> Error {
    Error::PictureMismatch { op: op.name().to_string(), picture: picture.name().to_string() }
}

fn phase(x: f64) -> Complex64 {
    Complex64::from_polar(1.0, x)
}

/// Translation generator `P` as a function of the picture variable.
fn lightcone_momentum(picture: Picture, u: f64) -> f64 {
    match picture {
        Picture::Rapidity => u.exp(),
        Picture::Lightray | Picture::Line => u,
        Picture::Momentum { mass } => ((mass * mass + u * u).sqrt() + u) / mass,
    }
}

/// `P⁻¹`, the generator of `T′`.
fn inverse_momentum(picture: Picture, u: f64) -> f64 {
    match picture {
        Picture::Rapidity => (-u).exp(),
        Picture::Lightray | Picture::Line => 1.0 / u,
        Picture::Momentum { mass } => ((mass * mass + u * u).sqrt() - u) / mass,
    }
}

fn primitives(op: &OperatorTag, picture: Picture, out: &mut Vec<Prim>) -> Result<()> {
    match op {
        OperatorTag::T(a) => {
            let a = *a;
            out.push(Prim::Mult(Box::new(move |u| Ok(phase(a * lightcone_momentum(picture, u))))));
        }
        OperatorTag::Tprime(a) => {
            if picture == Picture::Line {
                return Err(mismatch(op, picture));
            }
            let a = *a;
            out.push(Prim::Mult(Box::new(move |u| Ok(phase(a * inverse_momentum(picture, u))))));
        }
        OperatorTag::Delta(t) => {
            let s = 2.0 * PI * t;
            let map: Map = match picture {
                Picture::Rapidity => Box::new(move |u| u - s),
                Picture::Lightray => Box::new(move |u| (-s).exp() * u),
                Picture::Momentum { mass } => {
                    let (c, sh) = (s.cosh(), s.sinh());
                    Box::new(move |u| c * u - sh * (mass * mass + u * u).sqrt())
                }
                Picture::Line => return Err(mismatch(op, picture)),
            };
            out.push(Prim::Map(map));
        }
        OperatorTag::J => out.push(Prim::Conj),
        OperatorTag::Z => {
            let map: Map = match picture {
                Picture::Rapidity | Picture::Momentum { .. } => Box::new(|u| -u),
                Picture::Lightray => Box::new(|u| 1.0 / u),
                Picture::Line => return Err(mismatch(op, picture)),
            };
            out.push(Prim::Map(map));
        }
        OperatorTag::Gamma => {
            primitives(&OperatorTag::Z, picture, out)?;
            out.push(Prim::Conj);
        }
        OperatorTag::Tm { plus, minus, mass } => {
            if !matches!(picture, Picture::Lightray | Picture::Momentum { .. }) {
                return Err(mismatch(op, picture));
            }
            if !(mass.is_finite() && *mass > 0.0) {
                return Err(Error::InvalidMass(*mass));
            }
            primitives(&OperatorTag::T(mass * plus / 2.0), picture, out)?;
            primitives(&OperatorTag::Tprime(mass * minus / 2.0), picture, out)?;
        }
        OperatorTag::Endo(spec) => {
            let spec = spec.clone();
            out.push(Prim::Mult(Box::new(move |u| {
                spec.evaluate(Complex64::new(lightcone_momentum(picture, u), 0.0))
            })));
        }
    }
    Ok(())
}

/// Report on samples that had to be interpolated.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct InterpolationFlag {
    pub interpolated_points: usize,
    /// Fraction of spectral energy above 0.75 of the Nyquist frequency.
    pub spectral_tail: f64,
    /// Largest edge sample relative to the peak.
    pub edge_ratio: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Applied {
    pub function: GridFunction,
    pub interpolation: Option<InterpolationFlag>,
}

const INDEX_TOL: f64 = 1e-9;
const EDGE_TOL: f64 = 1e-8;
const HALF_WIDTH: usize = 32;
const KAISER_BETA: f64 = 25.0;

fn bessel_i0(x: f64) -> f64 {
    let y = 0.25 * x * x;
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..500 {
        term *= y / (k * k) as f64;
        sum += term;
        if term < 1e-17 * sum {
            break;
        }
    }
    sum
}

fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-12 {
        1.0
    } else {
        (PI * x).sin() / (PI * x)
    }
}

/// Kaiser-windowed sinc interpolation at fractional index `s`.
pub(crate) fn windowed_sinc(samples: &[Complex64], s: f64) -> Complex64 {
    let w = HALF_WIDTH as f64;
    let norm = bessel_i0(KAISER_BETA);
    let lo = (s.floor() as i64 - HALF_WIDTH as i64 + 1).max(0);
    let hi = (s.floor() as i64 + HALF_WIDTH as i64).min(samples.len() as i64 - 1);
    let mut acc = Complex64::new(0.0, 0.0);
    for k in lo..=hi {
        let d = s - k as f64;
        if d.abs() >= w {
            continue;
        }
        let win = bessel_i0(KAISER_BETA * (1.0 - (d / w).powi(2)).sqrt()) / norm;
        acc += samples[k as usize] * (sinc(d) * win);
    }
    acc
}

/// Fraction of `Σ|ψ̂|²` above 0.75 of the Nyquist frequency.
pub(crate) fn spectral_tail(samples: &[Complex64]) -> f64 {
    let n = samples.len();
    let mut buf = samples.to_vec();
    FftPlanner::new().plan_fft_forward(n).process(&mut buf);
    let total: f64 = buf.iter().map(|z| z.norm_sqr()).sum();
    if total == 0.0 {
        return 0.0;
    }
    let cut = 0.75 * n as f64 / 2.0;
    let tail: f64 = buf
        .iter()
        .enumerate()
        .filter(|(k, _)| {
            let f = if *k <= n / 2 { *k as f64 } else { n as f64 - *k as f64 };
            f > cut
        })
        .map(|(_, z)| z.norm_sqr())
        .sum();
    tail / total
}

/// Sample `ψ` at an arbitrary point; exact on grid nodes.
struct Sampler<'a> {
    psi: &'a GridFunction,
    interpolated: usize,
    edge_ratio: f64,
}

impl<'a> Sampler<'a> {
    fn new(psi: &'a GridFunction) -> Self {
        Sampler { psi, interpolated: 0, edge_ratio: psi.edge_ratio() }
    }

    fn at(&mut self, u: f64) -> Result<Complex64> {
        let g = &self.psi.grid;
        let n = g.len();
        let Some(c) = g.coord(u) else {
            return self.outside();
        };
        let s = (c - g.coord0()) / g.step();
        let k = s.round();
        if (s - k).abs() <= INDEX_TOL && k >= 0.0 && k <= (n - 1) as f64 {
            return Ok(self.psi.samples[k as usize]);
        }
        if s < 0.0 || s > (n - 1) as f64 {
            return self.outside();
        }
        self.interpolated += 1;
        Ok(windowed_sinc(&self.psi.samples, s))
    }

    fn outside(&self) -> Result<Complex64> {
        if self.edge_ratio > EDGE_TOL {
            Err(Error::BeyondSupport)
        } else {
            Ok(Complex64::new(0.0, 0.0))
        }
    }

    fn flag(&self) -> Option<InterpolationFlag> {
        (self.interpolated > 0).then(|| InterpolationFlag {
            interpolated_points: self.interpolated,
            spectral_tail: spectral_tail(&self.psi.samples),
            edge_ratio: self.edge_ratio,
        })
    }
}

/// Applies `ops[0] ops[1] … ops[n-1]` to `ψ`; the last operator acts first.
pub fn apply_chain(ops: &[OperatorTag], psi: &GridFunction) -> Result<Applied> {
    let picture = psi.grid.picture;
    let mut prims = Vec::new();
    for op in ops {
        primitives(op, picture, &mut prims)?;
    }
    let mut sampler = Sampler::new(psi);
    let mut samples = Vec::with_capacity(psi.samples.len());
    for u in psi.grid.points() {
        let mut acc = Complex64::new(1.0, 0.0);
        let mut conj = false;
        let mut v = u;
        for p in &prims {
            match p {
                Prim::Mult(g) => {
                    let g = g(v)?;
                    acc *= if conj { g.conj() } else { g };
                }
                Prim::Map(s) => v = s(v),
                Prim::Conj => conj = !conj,
            }
        }
        let value = sampler.at(v)?;
        samples.push(acc * if conj { value.conj() } else { value });
    }
    Ok(Applied { function: GridFunction { grid: psi.grid, samples }, interpolation: sampler.flag() })
}

pub fn apply_operator(op: &OperatorTag, psi: &GridFunction) -> Result<Applied> {
    apply_chain(std::slice::from_ref(op), psi)
}

/// Resamples `ψ` on a grid of another picture through the rapidity. The three
/// measures all equal `dθ`, so no Jacobian appears.
pub fn change_picture(psi: &GridFunction, target: GridDescriptor) -> Result<Applied> {
    let (src, dst) = (psi.grid.picture, target.picture);
    if src.name() == dst.name() || src == Picture::Line || dst == Picture::Line {
        return Err(Error::InvalidGrid(format!("cannot change picture {} → {}", src.name(), dst.name())));
    }
    // the target must cover the non-negligible part of the source
    let peak = psi.max_abs();
    let thetas: Vec<f64> = psi
        .grid
        .points()
        .iter()
        .zip(&psi.samples)
        .filter(|(_, z)| z.norm() > EDGE_TOL * peak)
        .filter_map(|(u, _)| src.theta(*u))
        .collect();
    if let (Some(lo), Some(hi)) = (
        thetas.iter().copied().reduce(f64::min),
        thetas.iter().copied().reduce(f64::max),
    ) {
        let t0 = dst.theta(target.point(0)).unwrap_or(f64::INFINITY);
        let t1 = dst.theta(target.point(target.len() - 1)).unwrap_or(f64::NEG_INFINITY);
        let slack = 1e-12 * (1.0 + lo.abs().max(hi.abs()));
        if lo < t0 - slack || hi > t1 + slack {
            return Err(Error::NotCovered);
        }
    }
    let mut sampler = Sampler::new(psi);
    let mut samples = Vec::with_capacity(target.len());
    for u in target.points() {
        let theta = dst.theta(u).ok_or(Error::NotCovered)?;
        let v = src.from_theta(theta).ok_or(Error::NotCovered)?;
        samples.push(sampler.at(v)?);
    }
    Ok(Applied { function: GridFunction { grid: target, samples }, interpolation: sampler.flag() })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BorchersReport {
    pub picture: Picture,
    pub t: f64,
    pub x: f64,
    /// `‖Δ(t)T(x)Δ(-t)ψ - T(e^{-2πt}x)ψ‖ / ‖ψ‖`.
    pub modular_residual: f64,
    /// `‖JT(x)Jψ - T(-x)ψ‖ / ‖ψ‖`.
    pub reflection_residual: f64,
}

pub fn borchers_check(psi: &GridFunction, t: f64, x: f64) -> Result<BorchersReport> {
    let scale = psi.norm().max(f64::MIN_POSITIVE);
    let lhs = apply_chain(&[OperatorTag::Delta(t), OperatorTag::T(x), OperatorTag::Delta(-t)], psi)?;
    let rhs = apply_operator(&OperatorTag::T((-2.0 * PI * t).exp() * x), psi)?;
    let jl = apply_chain(&[OperatorTag::J, OperatorTag::T(x), OperatorTag::J], psi)?;
    let jr = apply_operator(&OperatorTag::T(-x), psi)?;
    Ok(BorchersReport {
        picture: psi.grid.picture,
        t,
        x,
        modular_residual: lhs.function.distance(&rhs.function) / scale,
        reflection_residual: jl.function.distance(&jr.function) / scale,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IdentityCheck {
    pub name: String,
    pub picture: String,
    pub residual: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl IdentityCheck {
    fn new(name: impl Into<String>, picture: Picture, residual: f64, tolerance: f64) -> Self {
        IdentityCheck {
            name: name.into(),
            picture: picture.name().to_string(),
            residual,
            tolerance,
            pass: residual.is_finite() && residual <= tolerance,
        }
    }
}

/// Smooth test vector: a few Gaussians in θ with seeded centres and phases.
pub fn random_test_vector(grid: GridDescriptor, rng: &mut ChaCha8Rng) -> GridFunction {
    let bumps: Vec<(f64, f64, Complex64)> = (0..3)
        .map(|_| {
            let c = rng.gen_range(-0.5..0.5);
            let w = rng.gen_range(0.25..0.5);
            let a = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            (c, w, a)
        })
        .collect();
    let picture = grid.picture;
    GridFunction::from_fn(grid, |u| {
        let theta = picture.theta(u).unwrap_or(u);
        bumps
            .iter()
            .map(|(c, w, a)| a * (-(theta - c).powi(2) / (2.0 * w * w)).exp())
            .sum()
    })
}

/// Grids used by the identity suite: a symmetric rapidity grid, a lightray
/// grid closed under inversion and a symmetric momentum grid.
pub fn suite_grids(mass: f64) -> Result<Vec<GridDescriptor>> {
    Ok(vec![
        GridDescriptor::symmetric(Picture::Rapidity, 512, 0.04)?,
        GridDescriptor::lightray_log_symmetric(512, 0.04f64.exp())?,
        GridDescriptor::symmetric(Picture::Momentum { mass }, 2048, 0.06 * mass)?,
    ])
}

/// Involutions, the Borchers relations, conjugations by `Z` and `Γ`, norm
/// preservation and antiunitarity on one seeded test vector per picture.
pub fn identity_suite(seed: u64, mass: f64) -> Result<Vec<IdentityCheck>> {
    identity_suite_with(seed, mass, 1)
}

/// As `identity_suite` with `vectors` test vectors per picture; each check
/// reports the worst residual over the vectors.
pub fn identity_suite_with(seed: u64, mass: f64, vectors: usize) -> Result<Vec<IdentityCheck>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out: Vec<IdentityCheck> = Vec::new();
    for grid in suite_grids(mass)? {
        let mut worst: Vec<(String, f64, f64)> = Vec::new();
        for _ in 0..vectors {
            for (name, residual, tol) in vector_checks(grid, mass, &mut rng)? {
                match worst.iter_mut().find(|w| w.0 == name) {
                    // NaN must stick
                    Some(w) => w.1 = if residual > w.1 || residual.is_nan() { residual } else { w.1 },
                    None => worst.push((name, residual, tol)),
                }
            }
        }
        out.extend(worst.into_iter().map(|(n, r, t)| IdentityCheck::new(n, grid.picture, r, t)));
    }
    Ok(out)
}

fn vector_checks(grid: GridDescriptor, mass: f64, rng: &mut ChaCha8Rng) -> Result<Vec<(String, f64, f64)>> {
    let pic = grid.picture;
    let psi = random_test_vector(grid, rng);
    let xi = random_test_vector(grid, rng);
    let scale = psi.norm();
    let a = rng.gen_range(0.2..2.0);
    // rapidity step is 0.04, so 2πt = 0.4 is a whole number of steps
    let t = 0.4 / (2.0 * PI);
    let t_frac = rng.gen_range(0.01..0.05);
    let diff = |l: &[OperatorTag], r: &[OperatorTag]| -> Result<f64> {
        Ok(apply_chain(l, &psi)?.function.distance(&apply_chain(r, &psi)?.function) / scale)
    };
    let mut out: Vec<(String, f64, f64)> = Vec::new();
    let mut push = |name: &str, r: f64, tol: f64| out.push((name.to_string(), r, tol));
    use OperatorTag::*;
    push("JJ = 1", diff(&[J, J], &[])?, 1e-12);
    push("ZZ = 1", diff(&[Z, Z], &[])?, 1e-12);
    push("ΓΓ = 1", diff(&[Gamma, Gamma], &[])?, 1e-12);
    push("ZJ = JZ", diff(&[Z, J], &[J, Z])?, 1e-12);
    push("Γ = ZJ", diff(&[Gamma], &[Z, J])?, 1e-12);
    push("ZT(a)Z = T'(a)", diff(&[Z, T(a), Z], &[Tprime(a)])?, 1e-12);
    push("ZΔ(t)Z = Δ(-t)", diff(&[Z, Delta(t_frac), Z], &[Delta(-t_frac)])?, 1e-9);
    for (label, tt) in [("grid t", t), ("off-grid t", t_frac)] {
        let b = borchers_check(&psi, tt, a)?;
        push(&format!("Δ(t)T(x)Δ(-t) = T(e^(-2πt)x), {label}"), b.modular_residual, 1e-9);
        push(&format!("JT(x)J = T(-x), {label}"), b.reflection_residual, 1e-12);
    }
    if pic != Picture::Rapidity {
        let (x0, x1) = (rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        let tm = |x0: f64, x1: f64| Tm { plus: x0 + x1, minus: x0 - x1, mass };
        push("ΓT_m(x0,x1)Γ = T_m(-x0,x1)", diff(&[Gamma, tm(x0, x1), Gamma], &[tm(-x0, x1)])?, 1e-12);
    }
    for (name, op) in [("T", T(a)), ("T'", Tprime(a)), ("J", J), ("Z", Z), ("Γ", Gamma)] {
        let r = (apply_operator(&op, &psi)?.function.norm() - scale).abs() / scale;
        push(&format!("‖{name}ψ‖ = ‖ψ‖"), r, 1e-10);
    }
    let shift = if matches!(pic, Picture::Momentum { .. }) { t_frac } else { t };
    let d = apply_operator(&Delta(shift), &psi)?.function.norm();
    push("‖Δ(t)ψ‖ = ‖ψ‖", (d - scale).abs() / scale, 1e-8);
    for (label, op) in [("J", J), ("Γ", Gamma)] {
        let lhs = apply_operator(&op, &psi)?.function.inner(&apply_operator(&op, &xi)?.function);
        let rhs = psi.inner(&xi).conj();
        push(&format!("⟨{0}ψ,{0}ξ⟩ = conj⟨ψ,ξ⟩", label), (lhs - rhs).norm() / (scale * xi.norm()), 1e-10);
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StripReport {
    pub max_modulus: f64,
    pub boundary_residual: f64,
    pub failed_points: usize,
    pub pass: bool,
}

/// Samples `φ(e^{2π(t+iλ)}p₀)` for `λ ∈ [0, ½]`. The spec is evaluated as given,
/// without validation, so invalid data shows up as a failed report.
pub fn strip_check(spec: &InnerFunctionSpec, t_grid: &[f64]) -> StripReport {
    let p0s = [0.3, 1.0, 2.7];
    let lambdas: Vec<f64> = (0..=32).map(|k| 0.5 * k as f64 / 32.0).collect();
    let mut max_modulus: f64 = 0.0;
    let mut boundary_residual: f64 = 0.0;
    let mut failed_points = 0;
    for &t in t_grid {
        for &p0 in &p0s {
            let r = (2.0 * PI * t).exp() * p0;
            for &l in &lambdas {
                match spec.evaluate(Complex64::from_polar(r, 2.0 * PI * l)) {
                    Ok(v) => max_modulus = max_modulus.max(v.norm()),
                    Err(_) => failed_points += 1,
                }
            }
            match (spec.evaluate(Complex64::new(-r, 0.0)), spec.evaluate(Complex64::new(r, 0.0))) {
                (Ok(a), Ok(b)) => boundary_residual = boundary_residual.max((a - b.conj()).norm()),
                _ => failed_points += 1,
            }
        }
    }
    StripReport {
        max_modulus,
        boundary_residual,
        failed_points,
        pass: failed_points == 0 && max_modulus <= 1.0 + 1e-8 && boundary_residual < 1e-10,
    }
}

/// Applies `φ_m(P₊)` with `P₊ = (m/2)P` on each mass block of a finite direct sum.
pub fn two_dim_endomorphism(
    masses: &[f64],
    per_mass: &[InnerFunctionSpec],
    psi: &[GridFunction],
) -> Result<Vec<GridFunction>> {
    if masses.len() != per_mass.len() || masses.len() != psi.len() {
        return Err(Error::LengthMismatch(format!(
            "{} masses, {} specs, {} blocks",
            masses.len(),
            per_mass.len(),
            psi.len()
        )));
    }
    if masses.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidInput("masses must be strictly increasing".into()));
    }
    masses
        .iter()
        .zip(per_mass)
        .zip(psi)
        .map(|((&m, spec), block)| {
            if !(m.is_finite() && m > 0.0) {
                return Err(Error::InvalidMass(m));
            }
            if block.grid.picture != Picture::Lightray {
                return Err(Error::InvalidGrid("mass blocks use the lightray picture".into()));
            }
            let samples = block
                .grid
                .points()
                .iter()
                .zip(&block.samples)
                .map(|(&p, &v)| Ok(spec.evaluate_real(m * p / 2.0)? * v))
                .collect::<Result<Vec<_>>>()?;
            Ok(GridFunction { grid: block.grid, samples })
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MassSpectrumReport {
    pub min: f64,
    pub argmin: (f64, f64),
    pub max: f64,
    /// `(lower edge, upper edge, count)` per bin.
    pub histogram: Vec<(f64, f64, usize)>,
}

/// Invariant masses `√(m₀²(2 + p/q + q/p))` of the two-particle states on a grid.
pub fn tensor_square_mass_spectrum(m0: f64, grid: &[f64], bins: usize) -> Result<MassSpectrumReport> {
    if !(m0.is_finite() && m0 > 0.0) {
        return Err(Error::InvalidMass(m0));
    }
    if grid.is_empty() || grid.iter().any(|&p| !(p.is_finite() && p > 0.0)) {
        return Err(Error::InvalidGrid("momenta must be positive".into()));
    }
    let mut values = Vec::with_capacity(grid.len() * grid.len());
    let mut min = f64::INFINITY;
    let mut argmin = (0.0, 0.0);
    for &p in grid {
        for &q in grid {
            let m = (m0 * m0 * (2.0 + p / q + q / p)).sqrt();
            if m < min {
                min = m;
                argmin = (p, q);
            }
            values.push(m);
        }
    }
    let max = values.iter().copied().fold(0.0, f64::max);
    let bins = bins.max(1);
    let width = (max - min) / bins as f64;
    let mut counts = vec![0usize; bins];
    for v in &values {
        let k = if width > 0.0 { (((v - min) / width) as usize).min(bins - 1) } else { 0 };
        counts[k] += 1;
    }
    let histogram = counts
        .into_iter()
        .enumerate()
        .map(|(k, c)| (min + k as f64 * width, min + (k + 1) as f64 * width, c))
        .collect();
    Ok(MassSpectrumReport { min, argmin, max, histogram })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gauss(grid: GridDescriptor) -> GridFunction {
        let pic = grid.picture;
        GridFunction::from_fn(grid, |u| Complex64::new((-pic.theta(u).unwrap().powi(2)).exp(), 0.0))
    }

    #[test]
    fn trivial_operators() {
        let g = GridDescriptor::lightray_log_symmetric(256, 1.05).unwrap();
        let psi = gauss(g);
        let t0 = apply_operator(&OperatorTag::T(0.0), &psi).unwrap();
        assert_eq!(t0.function.samples, psi.samples);
        assert!(t0.interpolation.is_none());
        let zz = apply_chain(&[OperatorTag::Z, OperatorTag::Z], &psi).unwrap();
        assert!(zz.function.distance(&psi) < 1e-14);
    }

    #[test]
    fn rapidity_delta_is_index_shift() {
        let g = GridDescriptor::symmetric(Picture::Rapidity, 200, 0.05).unwrap();
        let psi = GridFunction::from_fn(g, |u| Complex64::new((-u * u).exp(), u * (-u * u).exp()));
        let t = 3.0 * 0.05 / (2.0 * PI);
        let out = apply_operator(&OperatorTag::Delta(t), &psi).unwrap();
        assert!(out.interpolation.is_none());
        for k in 3..200 {
            assert_eq!(out.function.samples[k], psi.samples[k - 3]);
        }
    }

    #[test]
    fn fractional_delta_is_flagged() {
        let g = GridDescriptor::symmetric(Picture::Rapidity, 512, 0.04).unwrap();
        let psi = gauss(g);
        let out = apply_operator(&OperatorTag::Delta(0.013), &psi).unwrap();
        let flag = out.interpolation.unwrap();
        assert!(flag.interpolated_points > 0 && flag.spectral_tail < 1e-20);
        let s = 2.0 * PI * 0.013;
        let exact = GridFunction::from_fn(g, |u| Complex64::new((-(u - s).powi(2)).exp(), 0.0));
        assert!(out.function.distance(&exact) < 1e-9);
    }

    #[test]
    fn beyond_support_is_reported() {
        let g = GridDescriptor::symmetric(Picture::Rapidity, 64, 0.1).unwrap();
        let flat = GridFunction::from_fn(g, |_| Complex64::new(1.0, 0.0));
        assert!(matches!(apply_operator(&OperatorTag::Delta(0.01), &flat), Err(Error::BeyondSupport)));
    }

    #[test]
    fn picture_mismatch() {
        let g = GridDescriptor::symmetric(Picture::Rapidity, 64, 0.1).unwrap();
        let psi = gauss(g);
        let tm = OperatorTag::Tm { plus: 1.0, minus: 1.0, mass: 1.0 };
        assert!(matches!(apply_operator(&tm, &psi), Err(Error::PictureMismatch { .. })));
    }

    #[test]
    fn change_to_lightray_is_exact_on_matched_grids() {
        let h = 0.04;
        let rap = GridDescriptor::symmetric(Picture::Rapidity, 301, h).unwrap();
        let lr = GridDescriptor::lightray_log_symmetric(301, h.exp()).unwrap();
        let psi = GridFunction::from_fn(rap, |u| Complex64::new((-u * u).exp(), 0.0));
        let out = change_picture(&psi, lr).unwrap();
        assert!(out.interpolation.is_none());
        assert!((out.function.norm() - psi.norm()).abs() < 1e-10);
        for (p, v) in lr.points().iter().zip(&out.function.samples) {
            assert!((v.re - (-p.ln().powi(2)).exp()).abs() < 1e-12);
        }
    }

    #[test]
    fn momentum_roundtrip() {
        let rap = GridDescriptor::symmetric(Picture::Rapidity, 512, 0.03).unwrap();
        let mom = GridDescriptor::symmetric(Picture::Momentum { mass: 1.0 }, 8192, 0.01).unwrap();
        let psi = GridFunction::from_fn(rap, |u| Complex64::new((-u * u).exp(), 0.3 * u * (-u * u).exp()));
        let there = change_picture(&psi, mom).unwrap().function;
        let back = change_picture(&there, rap).unwrap().function;
        assert!(back.distance(&psi) / psi.norm() < 1e-8, "{}", back.distance(&psi));
        let narrow = GridDescriptor::symmetric(Picture::Momentum { mass: 1.0 }, 64, 0.01).unwrap();
        assert!(matches!(change_picture(&psi, narrow), Err(Error::NotCovered)));
    }

    #[test]
    fn borchers_examples() {
        let lr = GridDescriptor::lightray_log_symmetric(400, 1.03).unwrap();
        let b = borchers_check(&gauss(lr), 0.123, 1.7).unwrap();
        assert!(b.modular_residual < 1e-12 && b.reflection_residual < 1e-12);
        let rap = GridDescriptor::symmetric(Picture::Rapidity, 400, 0.05).unwrap();
        let b = borchers_check(&gauss(rap), 5.0 * 0.05 / (2.0 * PI), 0.9).unwrap();
        assert!(b.modular_residual < 1e-12 && b.reflection_residual < 1e-12);
    }

    #[test]
    fn suite_passes() {
        let checks = identity_suite(7, 1.0).unwrap();
        let failed: Vec<_> = checks.iter().filter(|c| !c.pass).collect();
        assert!(failed.is_empty(), "{failed:#?}");
    }

    #[test]
    fn strip_examples() {
        let ts: Vec<f64> = (-5..=5).map(|k| 0.05 * k as f64).collect();
        let b = InnerFunctionSpec::blaschke(vec![Complex64::new(0.5, 1.0), Complex64::new(0.0, 2.0)]);
        let r = strip_check(&b, &ts);
        assert!(r.pass && r.max_modulus <= 1.0 + 1e-12);
        assert!(strip_check(&InnerFunctionSpec::translation(1.0), &ts).pass);
        let bad = InnerFunctionSpec { translation: -1.0, ..Default::default() };
        let r = strip_check(&bad, &ts);
        assert!(!r.pass && r.max_modulus > 1.0);
    }

    #[test]
    fn two_dim_blocks() {
        let g = GridDescriptor::lightray_log_symmetric(128, 1.05).unwrap();
        let psi = vec![gauss(g), gauss(g)];
        let specs = vec![InnerFunctionSpec::blaschke(vec![Complex64::new(0.0, 1.0)]), InnerFunctionSpec::translation(1.0)];
        let out = two_dim_endomorphism(&[1.0, 2.0], &specs, &psi).unwrap();
        for (k, m) in [1.0, 2.0].iter().enumerate() {
            assert!((out[k].norm() - psi[k].norm()).abs() < 1e-12);
            let p = g.point(40);
            let expected = specs[k].evaluate_real(m * p / 2.0).unwrap() * psi[k].samples[40];
            assert!((out[k].samples[40] - expected).norm() < 1e-15);
        }
        let ident = vec![InnerFunctionSpec::identity(); 2];
        let out = two_dim_endomorphism(&[1.0, 2.0], &ident, &psi).unwrap();
        assert_eq!(out, psi);
        assert!(matches!(two_dim_endomorphism(&[1.0], &ident, &psi), Err(Error::LengthMismatch(_))));
    }

    #[test]
    fn mass_spectrum() {
        let grid: Vec<f64> = (0..100).map(|k| 0.1 * 100f64.powf(k as f64 / 99.0)).collect();
        let r = tensor_square_mass_spectrum(1.0, &grid, 20).unwrap();
        assert_eq!(r.min, 2.0);
        assert_eq!(r.argmin.0, r.argmin.1);
        let top = (2.0 + 100.0 + 0.01f64).sqrt();
        assert!((r.max - top).abs() < 1e-12);
        assert!(r.histogram.iter().all(|b| b.2 > 0));
    }
}
