//! Support analysis by FFT and membership tests for the local subspaces
//! `H(I)` (one dimension) and `H^m(O_r)` (two dimensions).
//!
//! A lightray function is extended skew-symmetrically, `ψ^s(-p) = conj ψ(p)`,
//! and `ψ ∈ H(a, b)` iff `ψ̌^s(x) = (2π)^{-1/2} ∫ ψ^s(p) e^{-ipx} dp` vanishes
//! outside `[a, b]`.

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use rustfft::FftPlanner;
use serde::Serialize;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::inner_fn::InnerFunctionSpec;
use crate::reps::{windowed_sinc, GridDescriptor, GridFunction, Layout, Picture};

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Tolerances {
    /// Largest admissible fraction of mass outside the interval.
    pub leakage: f64,
    /// Largest admissible `max|Im ψ̌| / max|ψ̌|`.
    pub reality: f64,
    /// Interval endpoints are widened by this many x-cells.
    pub slack_cells: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances { leakage: 1e-6, reality: 1e-8, slack_cells: 1.0 }
    }
}

/// Fraction of cells at each end of the x-window watched for wrapped-around mass.
const GUARD_FRACTION: usize = 32;

/// `|ψ̌|²` per x-cell of a uniform symmetric momentum grid.
#[derive(Clone, Debug, PartialEq)]
pub struct SupportProfile {
    pub x_grid: Vec<f64>,
    pub dx: f64,
    pub transform: Vec<Complex64>,
    pub density: Vec<f64>,
    pub total: f64,
    pub reality_residual: f64,
    /// Mass in the outer cells of the window exceeds the leakage tolerance.
    pub aliasing: bool,
}

impl SupportProfile {
    /// Mass with `|x| > r`.
    pub fn outside_mass(&self, r: f64) -> f64 {
        self.x_grid.iter().zip(&self.density).filter(|(x, _)| x.abs() > r).map(|(_, d)| d).sum()
    }

    /// Mass outside `[a, b]`.
    pub fn outside_interval(&self, a: f64, b: f64) -> f64 {
        self.x_grid
            .iter()
            .zip(&self.density)
            .filter(|(x, _)| **x < a || **x > b)
            .map(|(_, d)| d)
            .sum()
    }

    /// Least `r` (among `0` and the `|x_j|`) with `outside_mass(r) ≤ ε·total`.
    pub fn support_radius(&self, eps: f64) -> f64 {
        let mut cells: Vec<(f64, f64)> =
            self.x_grid.iter().zip(&self.density).map(|(x, d)| (x.abs(), *d)).collect();
        cells.sort_by(|a, b| b.0.total_cmp(&a.0));
        let budget = eps * self.total;
        let mut outside = 0.0;
        let mut r = cells.first().map_or(0.0, |c| c.0);
        for (i, (_, d)) in cells.iter().enumerate() {
            // moving r below ax puts this cell (and its ties) outside
            if outside + d > budget {
                return r;
            }
            outside += d;
            r = cells.get(i + 1).map_or(0.0, |c| c.0);
        }
        0.0
    }

    /// Shortest interval `[lo, hi]` leaving at most `ε/2` of the mass on each side.
    pub fn support_interval(&self, eps: f64) -> (f64, f64) {
        let budget = 0.5 * eps * self.total;
        let n = self.density.len();
        let (mut lo, mut acc) = (0, 0.0);
        while lo < n && acc + self.density[lo] <= budget {
            acc += self.density[lo];
            lo += 1;
        }
        let (mut hi, mut acc) = (n, 0.0);
        while hi > lo && acc + self.density[hi - 1] <= budget {
            acc += self.density[hi - 1];
            hi -= 1;
        }
        if lo >= hi {
            return (0.0, 0.0);
        }
        (self.x_grid[lo], self.x_grid[hi - 1])
    }

    /// `(x, density, mass outside |x|)` rows for export.
    pub fn rows(&self) -> Vec<(f64, f64, f64)> {
        let mut rows: Vec<(f64, f64, f64)> = self
            .x_grid
            .iter()
            .zip(&self.density)
            .map(|(&x, &d)| (x, d, 0.0))
            .collect();
        for row in rows.iter_mut() {
            row.2 = self.outside_mass(row.0.abs());
        }
        rows
    }
}

fn symmetric_uniform(grid: &GridDescriptor) -> Result<(usize, f64)> {
    match grid.layout {
        Layout::Uniform { min, max, n } => {
            let h = (max - min) / (n as f64 - 1.0);
            if (min + max).abs() > 1e-9 * h {
                return Err(Error::InvalidGrid("grid is not symmetric about 0".into()));
            }
            if !n.is_power_of_two() {
                return Err(Error::InvalidGrid(format!("{n} points is not a power of two")));
            }
            Ok((n, h))
        }
        Layout::Geometric { .. } => Err(Error::InvalidGrid("FFT needs a uniform grid".into())),
    }
}

/// Inverse transform on the symmetric grid `p_k = (k-c)h`, `c = (n-1)/2`, at
/// `x_j = (j-c)Δx` with `Δx = 2π/(nh)`.
pub fn inverse_transform(samples: &[Complex64], h: f64) -> (Vec<f64>, f64, Vec<Complex64>) {
    let n = samples.len();
    let nf = n as f64;
    let c = 0.5 * (nf - 1.0);
    let dx = 2.0 * PI / (nf * h);
    let mut buf: Vec<Complex64> = samples
        .iter()
        .enumerate()
        .map(|(k, s)| s * Complex64::from_polar(1.0, 2.0 * PI * c * k as f64 / nf))
        .collect();
    FftPlanner::new().plan_fft_forward(n).process(&mut buf);
    let pre = h / (2.0 * PI).sqrt() * Complex64::from_polar(1.0, -2.0 * PI * c * c / nf);
    let out = buf
        .iter()
        .enumerate()
        .map(|(j, v)| v * pre * Complex64::from_polar(1.0, 2.0 * PI * c * j as f64 / nf))
        .collect();
    let x = (0..n).map(|j| (j as f64 - c) * dx).collect();
    (x, dx, out)
}

pub fn support_profile(psi_s: &GridFunction) -> Result<SupportProfile> {
    support_profile_with(psi_s, Tolerances::default().leakage)
}

pub fn support_profile_with(psi_s: &GridFunction, leakage: f64) -> Result<SupportProfile> {
    let (n, h) = symmetric_uniform(&psi_s.grid)?;
    let (x_grid, dx, transform) = inverse_transform(&psi_s.samples, h);
    let density: Vec<f64> = transform.iter().map(|v| v.norm_sqr() * dx).collect();
    let total: f64 = density.iter().sum();
    let peak = transform.iter().map(|v| v.norm()).fold(0.0, f64::max);
    let reality_residual = if peak > 0.0 {
        transform.iter().map(|v| v.im.abs()).fold(0.0, f64::max) / peak
    } else {
        0.0
    };
    let guard = (n / GUARD_FRACTION).max(1);
    let edge: f64 = density[..guard].iter().chain(&density[n - guard..]).sum();
    Ok(SupportProfile {
        x_grid,
        dx,
        transform,
        density,
        total,
        reality_residual,
        aliasing: total > 0.0 && edge > leakage * total,
    })
}

/// Skew-symmetric extension on a uniform symmetric grid.
#[derive(Clone, Debug, PartialEq)]
pub struct SkewExtension {
    pub function: GridFunction,
    /// Band limit `π/h` of the resampling, `None` when the lightray grid was mirrored exactly.
    pub cutoff: Option<f64>,
}

pub const DEFAULT_LINE_POINTS: usize = 8192;

/// Mirrors a half-shifted uniform lightray grid exactly; any other lightray grid
/// is resampled onto `DEFAULT_LINE_POINTS` points covering `[-p_max, p_max]`.
pub fn skew_extend(psi: &GridFunction) -> Result<SkewExtension> {
    if psi.grid.picture != Picture::Lightray {
        return Err(Error::InvalidGrid("skew extension starts from the lightray picture".into()));
    }
    if let Layout::Uniform { min, max, n } = psi.grid.layout {
        let h = (max - min) / (n as f64 - 1.0);
        if (min - 0.5 * h).abs() <= 1e-9 * h {
            let grid = GridDescriptor::symmetric(Picture::Line, 2 * n, h)?;
            let samples = psi.samples.iter().rev().map(|z| z.conj()).chain(psi.samples.iter().copied()).collect();
            return Ok(SkewExtension { function: GridFunction { grid, samples }, cutoff: None });
        }
    }
    let p_max = psi.grid.point(psi.grid.len() - 1);
    let h = 2.0 * p_max / DEFAULT_LINE_POINTS as f64;
    skew_extend_to(psi, DEFAULT_LINE_POINTS, h)
}

/// Resamples the extension onto `n` points `(k - (n-1)/2)h` by windowed sinc
/// interpolation in the grid coordinate; points outside the lightray grid get 0.
pub fn skew_extend_to(psi: &GridFunction, n: usize, h: f64) -> Result<SkewExtension> {
    if psi.grid.picture != Picture::Lightray {
        return Err(Error::InvalidGrid("skew extension starts from the lightray picture".into()));
    }
    let grid = GridDescriptor::symmetric(Picture::Line, n, h)?;
    let g = psi.grid;
    let (c0, step) = match g.layout {
        Layout::Uniform { min, .. } => (min, g.step()),
        Layout::Geometric { min, .. } => (min.ln(), g.step()),
    };
    let last = (g.len() - 1) as f64;
    let at = |p: f64| -> Complex64 {
        let c = match g.layout {
            Layout::Uniform { .. } => p,
            Layout::Geometric { .. } => p.ln(),
        };
        let s = (c - c0) / step;
        if s < 0.0 || s > last {
            return Complex64::new(0.0, 0.0);
        }
        let k = s.round();
        if (s - k).abs() < 1e-9 {
            psi.samples[k as usize]
        } else {
            windowed_sinc(&psi.samples, s)
        }
    };
    let samples = grid
        .points()
        .into_iter()
        .map(|p| if p > 0.0 { at(p) } else { at(-p).conj() })
        .collect();
    Ok(SkewExtension { function: GridFunction { grid, samples }, cutoff: Some(PI / h) })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MembershipReport {
    pub member: bool,
    /// Zero vector: member of every subspace, excluded from statistics.
    pub degenerate: bool,
    pub support_leakage: f64,
    pub reality_residual: f64,
    pub aliasing: bool,
    pub interval: (f64, f64),
    pub support_interval: (f64, f64),
    pub cutoff: Option<f64>,
    pub tolerances: Tolerances,
}

fn judge(profile: &SupportProfile, a: f64, b: f64, tol: &Tolerances, cutoff: Option<f64>) -> MembershipReport {
    let degenerate = profile.total == 0.0;
    let slack = tol.slack_cells * profile.dx;
    let support_leakage = if degenerate { 0.0 } else { profile.outside_interval(a - slack, b + slack) / profile.total };
    let member = degenerate
        || (support_leakage <= tol.leakage && profile.reality_residual <= tol.reality && !profile.aliasing);
    MembershipReport {
        member,
        degenerate,
        support_leakage,
        reality_residual: profile.reality_residual,
        aliasing: profile.aliasing,
        interval: (a, b),
        support_interval: profile.support_interval(tol.leakage),
        cutoff,
        tolerances: *tol,
    }
}

/// `ψ ∈ H(a, b)`. Half-lines use infinite endpoints: `(0, ∞)` tests `H`,
/// `(-∞, 0)` tests `H′`.
pub fn membership_1d(psi: &GridFunction, interval: (f64, f64), tol: &Tolerances) -> Result<MembershipReport> {
    let ext = skew_extend(psi)?;
    let profile = support_profile_with(&ext.function, tol.leakage)?;
    Ok(judge(&profile, interval.0, interval.1, tol, ext.cutoff))
}

/// Membership in `H_φ(I_r) = H(I_r) ∩ φ(P)H(I_r)`: both `ψ` and `ψ/φ` must lie in `H(I_r)`.
pub fn membership_deformed(
    psi: &GridFunction,
    spec: &InnerFunctionSpec,
    r: f64,
    tol: &Tolerances,
) -> Result<(MembershipReport, MembershipReport)> {
    let quotient = psi
        .grid
        .points()
        .iter()
        .zip(&psi.samples)
        .map(|(&p, &v)| Ok(v / spec.evaluate_real(p)?))
        .collect::<Result<Vec<_>>>()?;
    let q = GridFunction::new(psi.grid, quotient)?;
    Ok((membership_1d(psi, (-r, r), tol)?, membership_1d(&q, (-r, r), tol)?))
}

/// `ψ₊ = ½(1+Γ)ψ`, `ψ₋ = (1-Γ)ψ/(2iω)` with `Γψ(p₁) = conj ψ(-p₁)`.
pub fn cauchy_decompose(psi: &GridFunction, m: f64) -> Result<(GridFunction, GridFunction)> {
    if !(m.is_finite() && m > 0.0) {
        return Err(Error::InvalidMass(m));
    }
    if !matches!(psi.grid.picture, Picture::Momentum { .. }) {
        return Err(Error::InvalidGrid("Cauchy decomposition lives in the momentum picture".into()));
    }
    let Layout::Uniform { min, max, .. } = psi.grid.layout else {
        return Err(Error::InvalidGrid("momentum grids are uniform".into()));
    };
    if (min + max).abs() > 1e-9 * (max - min) {
        return Err(Error::InvalidGrid("momentum grid is not symmetric".into()));
    }
    let n = psi.samples.len();
    let points = psi.grid.points();
    let mut plus = Vec::with_capacity(n);
    let mut minus = Vec::with_capacity(n);
    for k in 0..n {
        let gamma = psi.samples[n - 1 - k].conj();
        let omega = (m * m + points[k] * points[k]).sqrt();
        plus.push(0.5 * (psi.samples[k] + gamma));
        minus.push((psi.samples[k] - gamma) / (2.0 * Complex64::i() * omega));
    }
    Ok((GridFunction { grid: psi.grid, samples: plus }, GridFunction { grid: psi.grid, samples: minus }))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Membership2dReport {
    pub member: bool,
    pub degenerate: bool,
    pub support_leakage: f64,
    pub reality_residual: f64,
    pub plus: MembershipReport,
    pub minus: MembershipReport,
}

/// `ψ ∈ H^m(O_r)`: both Cauchy components have transforms supported in `I_r`.
pub fn membership_2d(psi: &GridFunction, r: f64, m: f64, tol: &Tolerances) -> Result<Membership2dReport> {
    let (plus, minus) = cauchy_decompose(psi, m)?;
    let test = |f: &GridFunction| -> Result<MembershipReport> {
        let line = GridFunction { grid: GridDescriptor { picture: Picture::Line, layout: f.grid.layout }, samples: f.samples.clone() };
        let profile = support_profile_with(&line, tol.leakage)?;
        Ok(judge(&profile, -r, r, tol, None))
    };
    let (p, q) = (test(&plus)?, test(&minus)?);
    let live: Vec<&MembershipReport> = [&p, &q].into_iter().filter(|c| !c.degenerate).collect();
    let degenerate = live.is_empty();
    let support_leakage = live.iter().map(|c| c.support_leakage).fold(0.0, f64::max);
    let reality_residual = live.iter().map(|c| c.reality_residual).fold(0.0, f64::max);
    Ok(Membership2dReport {
        member: live.iter().all(|c| c.member),
        degenerate,
        support_leakage,
        reality_residual,
        plus: p,
        minus: q,
    })
}

/// Exponential type from `log|ψ(±iR)| ≈ τR + β log R + c` over `R ∈ [R_lo, R_hi]`,
/// the larger of the two directions. `log_abs` returns `log|ψ(p)|`.
pub fn exp_type_estimate(log_abs: impl Fn(Complex64) -> f64, window: (f64, f64)) -> Result<f64> {
    let (lo, hi) = window;
    if !(lo > 0.0 && hi > lo && hi.is_finite()) {
        return Err(Error::InvalidInput(format!("bad R window ({lo}, {hi})")));
    }
    let count = 48;
    let rs: Vec<f64> = (0..count).map(|k| lo + (hi - lo) * k as f64 / (count - 1) as f64).collect();
    let mut best = f64::NEG_INFINITY;
    for dir in [1.0, -1.0] {
        let mut ys = Vec::with_capacity(count);
        for &r in &rs {
            let y = log_abs(Complex64::new(0.0, dir * r));
            if !y.is_finite() {
                return Err(Error::NonFiniteEvaluator(r));
            }
            ys.push(y);
        }
        best = best.max(fit_type(&rs, &ys));
    }
    Ok(best)
}

/// Least squares for `y = τR + β log R + c`; returns `τ`.
fn fit_type(rs: &[f64], ys: &[f64]) -> f64 {
    let mut ata = nalgebra::Matrix3::<f64>::zeros();
    let mut aty = nalgebra::Vector3::<f64>::zeros();
    for (&r, &y) in rs.iter().zip(ys) {
        let row = nalgebra::Vector3::new(r, r.ln(), 1.0);
        ata += row * row.transpose();
        aty += row * y;
    }
    ata.lu().solve(&aty).map_or(f64::NAN, |v| v[0])
}

/// Smooth bump `exp(-1/(1-u²))`, `u = (x-c)/w`, supported in `(c-w, c+w)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Bump {
    pub center: f64,
    pub half_width: f64,
}

const BUMP_NODES: usize = 512;

impl Bump {
    pub fn new(center: f64, half_width: f64) -> Self {
        Bump { center, half_width }
    }

    pub fn eval(&self, x: f64) -> f64 {
        let u = (x - self.center) / self.half_width;
        if u.abs() >= 1.0 {
            0.0
        } else {
            (-1.0 / (1.0 - u * u)).exp()
        }
    }

    /// `f̂(p) = (2π)^{-1/2} ∫ f(x) e^{ipx} dx` by the trapezoid rule, which is
    /// spectrally accurate for a smooth compactly supported integrand.
    pub fn transform(&self, p: Complex64) -> Complex64 {
        let dx = 2.0 * self.half_width / BUMP_NODES as f64;
        let mut acc = Complex64::new(0.0, 0.0);
        for k in 1..BUMP_NODES {
            let x = self.center - self.half_width + k as f64 * dx;
            acc += self.eval(x) * (Complex64::i() * p * x).exp();
        }
        acc * dx / (2.0 * PI).sqrt()
    }

    /// `(f′)^(p) = -ip f̂(p)`, an element of `H(c-w, c+w)` on `p > 0`.
    pub fn derivative_transform(&self, p: Complex64) -> Complex64 {
        -Complex64::i() * p * self.transform(p)
    }
}

fn suite_grid() -> Result<GridDescriptor> {
    GridDescriptor::lightray_half_shifted(4096, PI / 8.0)
}

/// `(f′)^` on the lightray grid for a bump `f` on `(a, b)`.
pub fn bump_member(grid: GridDescriptor, a: f64, b: f64) -> GridFunction {
    let bump = Bump::new(0.5 * (a + b), 0.5 * (b - a));
    GridFunction::from_fn(grid, |p| bump.derivative_transform(Complex64::new(p, 0.0)))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RoundtripReport {
    pub cases: usize,
    pub accepted: usize,
    pub rejected_half: usize,
    pub covariance_violations: usize,
    pub isotony_violations: usize,
    pub violations: usize,
}

/// Random bump-derivative members of random intervals `(c-w, c+w)`: each must be
/// accepted for its interval, rejected for `(c-w/2, c+w/2)`, accepted after
/// translation by `t` for the shifted interval, and accepted for the interval
/// widened by 0.3 on both sides.
pub fn roundtrip_suite(seed: u64, cases: usize, tol: &Tolerances) -> Result<RoundtripReport> {
    let grid = suite_grid()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let draws: Vec<(f64, f64, f64)> = (0..cases)
        .map(|_| (rng.gen_range(-2.0..2.0), rng.gen_range(0.2..0.6), rng.gen_range(-1.0..1.0)))
        .collect();
    let outcomes = draws
        .par_iter()
        .map(|&(c, w, t)| -> Result<[bool; 4]> {
            let psi = bump_member(grid, c - w, c + w);
            let own = membership_1d(&psi, (c - w, c + w), tol)?.member;
            let half = membership_1d(&psi, (c - 0.5 * w, c + 0.5 * w), tol)?.member;
            let shifted = GridFunction {
                grid,
                samples: psi
                    .samples
                    .iter()
                    .zip(grid.points())
                    .map(|(z, p)| z * Complex64::from_polar(1.0, t * p))
                    .collect(),
            };
            let moved = membership_1d(&shifted, (c - w + t, c + w + t), tol)?.member;
            let wide = membership_1d(&psi, (c - w - 0.3, c + w + 0.3), tol)?.member;
            Ok([own, !half, moved, wide])
        })
        .collect::<Result<Vec<_>>>()?;
    let count = |k: usize| outcomes.iter().filter(|o| o[k]).count();
    let (accepted, rejected_half) = (count(0), count(1));
    let covariance_violations = cases - count(2);
    let isotony_violations = cases - count(3);
    Ok(RoundtripReport {
        cases,
        accepted,
        rejected_half,
        covariance_violations,
        isotony_violations,
        violations: (cases - accepted) + (cases - rejected_half) + covariance_violations + isotony_violations,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LocalityReport {
    pub pairs: usize,
    /// Largest `|Im⟨ψ,ξ⟩| / (‖ψ‖‖ξ‖)`.
    pub max_ratio: f64,
    pub bound: f64,
    pub violations: usize,
}

/// Pairs of members of disjoint intervals must be symplectically orthogonal.
pub fn locality_suite(seed: u64, pairs: usize, bound: f64) -> Result<LocalityReport> {
    let grid = suite_grid()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let draws: Vec<[f64; 4]> = (0..pairs)
        .map(|_| {
            let a = rng.gen_range(-2.5..1.0);
            let b = a + rng.gen_range(0.2..1.0);
            let gap = rng.gen_range(0.02..0.5);
            let d = b + gap + rng.gen_range(0.2..1.0);
            if rng.gen_bool(0.5) {
                [a, b, b + gap, d]
            } else {
                [b + gap, d, a, b]
            }
        })
        .collect();
    let ratios: Vec<f64> = draws
        .par_iter()
        .map(|d| {
            let psi = bump_member(grid, d[0], d[1]);
            let xi = bump_member(grid, d[2], d[3]);
            psi.inner(&xi).im.abs() / (psi.norm() * xi.norm())
        })
        .collect();
    Ok(LocalityReport {
        pairs,
        max_ratio: ratios.iter().copied().fold(0.0, f64::max),
        bound,
        violations: ratios.iter().filter(|r| !(**r < bound)).count(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lightray(n: usize, h: f64, f: impl Fn(f64) -> Complex64) -> GridFunction {
        GridFunction::from_fn(GridDescriptor::lightray_half_shifted(n, h).unwrap(), f)
    }

    #[test]
    fn skew_examples() {
        let real = lightray(64, 0.1, |p| Complex64::new((-p).exp(), 0.0));
        let s = skew_extend(&real).unwrap().function;
        for k in 0..64 {
            assert_eq!(s.samples[k], s.samples[127 - k]);
            assert_eq!(s.samples[k].im, 0.0);
        }
        let ip = lightray(64, 0.1, |p| Complex64::new(0.0, p));
        let s = skew_extend(&ip).unwrap();
        assert!(s.cutoff.is_none());
        for (p, v) in s.function.grid.points().iter().zip(&s.function.samples) {
            assert!((v - Complex64::new(0.0, *p)).norm() < 1e-12);
        }
        let rough = lightray(512, 0.05, |p| Complex64::new(p.cos(), (2.0 * p).sin()) * (-p).exp());
        let prof = support_profile(&skew_extend(&rough).unwrap().function).unwrap();
        assert!(prof.reality_residual < 1e-10);
    }

    #[test]
    fn transform_matches_gaussian() {
        // (2π)^{-1/2} ∫ e^{-p²/2} e^{-ipx} dp = e^{-x²/2}
        let g = GridDescriptor::symmetric(Picture::Line, 1024, 0.05).unwrap();
        let psi = GridFunction::from_fn(g, |p| Complex64::new((-0.5 * p * p).exp(), 0.0));
        let prof = support_profile(&psi).unwrap();
        for (x, v) in prof.x_grid.iter().zip(&prof.transform) {
            assert!((v - Complex64::new((-0.5 * x * x).exp(), 0.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn bump_support_radius() {
        let f = Bump::new(0.0, 0.5);
        let psi = lightray(4096, 0.05, |p| f.derivative_transform(Complex64::new(p, 0.0)));
        let prof = support_profile(&skew_extend(&psi).unwrap().function).unwrap();
        // oracle: the ε-radius of |f′|² by direct quadrature
        let n = 200_000;
        let dens: Vec<(f64, f64)> = (0..n)
            .map(|k| {
                let x = -0.5 + (k as f64 + 0.5) / n as f64;
                let d = (f.eval(x + 1e-6) - f.eval(x - 1e-6)) / 2e-6;
                (x.abs(), d * d)
            })
            .collect();
        let total: f64 = dens.iter().map(|d| d.1).sum();
        let oracle = (0..5000)
            .map(|k| 0.5 * k as f64 / 5000.0)
            .find(|r| dens.iter().filter(|d| d.0 > *r).map(|d| d.1).sum::<f64>() <= 1e-6 * total)
            .unwrap();
        let r = prof.support_radius(1e-6);
        assert!((r - oracle).abs() <= prof.dx, "{r} vs {oracle}, dx={}", prof.dx);
        assert!(r <= 0.5 + prof.dx);
        assert!(prof.reality_residual < 1e-10);
        let tol = Tolerances::default();
        assert!(membership_1d(&psi, (-0.5, 0.5), &tol).unwrap().member);
        let half = membership_1d(&psi, (-0.25, 0.25), &tol).unwrap();
        assert!(!half.member && half.support_leakage > 0.1);
        // translated by 1
        let moved = GridFunction::from_fn(psi.grid, |p| {
            Complex64::from_polar(1.0, p) * f.derivative_transform(Complex64::new(p, 0.0))
        });
        let prof = support_profile(&skew_extend(&moved).unwrap().function).unwrap();
        let (lo, hi) = prof.support_interval(1e-6);
        assert!(lo >= 0.5 - prof.dx && hi <= 1.5 + prof.dx, "{lo} {hi}");
        assert!((0.5 * (lo + hi) - 1.0).abs() <= prof.dx);
        assert!(membership_1d(&moved, (0.5, 1.5), &tol).unwrap().member);
    }

    #[test]
    fn gaussian_is_not_compact() {
        let psi = lightray(4096, 0.01, |p| Complex64::new((-p * p).exp(), 0.0));
        let ext = skew_extend(&psi).unwrap().function;
        let prof = support_profile(&ext).unwrap();
        let half_width = prof.x_grid.last().unwrap();
        assert!(prof.support_radius(1e-6) > 2.0);
        assert!(prof.outside_mass(0.9 * half_width) < prof.total);
        assert!(!membership_1d(&psi, (-1.0, 1.0), &Tolerances::default()).unwrap().member);
    }

    #[test]
    fn half_line_members() {
        let tol = Tolerances::default();
        let psi = lightray(8192, 0.02, |p| {
            let z = Complex64::new(p, 0.0);
            Complex64::i() * z / (z + Complex64::i()).powi(4)
        });
        let r = membership_1d(&psi, (0.0, f64::INFINITY), &tol).unwrap();
        assert!(r.member, "{r:?}");
        assert!(!membership_1d(&psi, (f64::NEG_INFINITY, 0.0), &tol).unwrap().member);
        // p e^{-p} is real, so its extension is even and its transform is symmetric
        let pe = lightray(8192, 0.02, |p| Complex64::new(p * (-p).exp(), 0.0));
        assert!(!membership_1d(&pe, (0.0, f64::INFINITY), &tol).unwrap().member);
    }

    #[test]
    fn zero_vector_is_degenerate() {
        let z = lightray(64, 0.1, |_| Complex64::new(0.0, 0.0));
        let r = membership_1d(&z, (-0.1, 0.1), &Tolerances::default()).unwrap();
        assert!(r.member && r.degenerate);
    }

    #[test]
    fn cauchy_examples() {
        let g = GridDescriptor::symmetric(Picture::Momentum { mass: 1.0 }, 256, 0.1).unwrap();
        let even = GridFunction::from_fn(g, |p| Complex64::new((-p * p).exp(), 0.0));
        let (a, b) = cauchy_decompose(&even, 1.0).unwrap();
        assert!(a.distance(&even) < 1e-14);
        assert!(b.samples.iter().all(|z| z.norm() < 1e-14));
        let odd = GridFunction::from_fn(g, |p| Complex64::new(0.0, (1.0 + p * p).sqrt() * (-p * p).exp()));
        let (a, b) = cauchy_decompose(&odd, 1.0).unwrap();
        assert!(a.samples.iter().all(|z| z.norm() < 1e-15));
        for (p, v) in g.points().iter().zip(&b.samples) {
            assert!((v.re - (-p * p).exp()).abs() < 1e-14 && v.im.abs() < 1e-14);
        }
        let wild = GridFunction::from_fn(g, |p| Complex64::new(p.sin() + 0.3, p * p - 1.0) * (-0.1 * p * p).exp());
        let (a, b) = cauchy_decompose(&wild, 1.0).unwrap();
        for ((p, v), (x, y)) in g.points().iter().zip(&wild.samples).zip(a.samples.iter().zip(&b.samples)) {
            let w = (1.0 + p * p).sqrt();
            assert!((x + Complex64::i() * w * y - v).norm() < 1e-12);
        }
    }

    #[test]
    fn two_dim_bump_pair() {
        let (r, m) = (1.0, 1.0);
        let g = GridDescriptor::symmetric(Picture::Momentum { mass: m }, 4096, 0.05).unwrap();
        let (fp, fm) = (Bump::new(0.1, 0.8), Bump::new(-0.2, 0.7));
        let psi = GridFunction::from_fn(g, |p| {
            let w = (m * m + p * p).sqrt();
            let z = Complex64::new(p, 0.0);
            fp.transform(z) + Complex64::i() * w * fm.transform(z)
        });
        let tol = Tolerances::default();
        let rep = membership_2d(&psi, r, m, &tol).unwrap();
        assert!(rep.member, "{rep:?}");
        let wide = GridFunction::from_fn(g, |p| {
            let w = (m * m + p * p).sqrt();
            let z = Complex64::new(p, 0.0);
            Bump::new(0.0, 2.0 * r).transform(z) + Complex64::i() * w * fm.transform(z)
        });
        let rep = membership_2d(&wide, r, m, &tol).unwrap();
        assert!(!rep.member && rep.support_leakage > 1e-3);
    }

    #[test]
    fn type_estimates() {
        let t = exp_type_estimate(|p| (Complex64::i() * p).exp().norm().ln(), (5.0, 20.0)).unwrap();
        assert!((t - 1.0).abs() < 1e-10);
        let t = exp_type_estimate(|p| 3.0 * p.norm().ln(), (5.0, 50.0)).unwrap();
        assert!(t.abs() < 1e-10);
        let t = exp_type_estimate(|p| ((0.7 * p).sin() / p).norm().ln(), (20.0, 50.0)).unwrap();
        assert!((t - 0.7).abs() < 0.014, "{t}");
        assert!(matches!(exp_type_estimate(|_| f64::NAN, (1.0, 2.0)), Err(Error::NonFiniteEvaluator(_))));
    }

    #[test]
    fn small_suites_pass() {
        let rt = roundtrip_suite(3, 6, &Tolerances::default()).unwrap();
        assert_eq!(rt.violations, 0, "{rt:?}");
        let loc = locality_suite(3, 6, 1e-6).unwrap();
        assert_eq!(loc.violations, 0, "{loc:?}");
    }

    #[test]
    fn bump_transform_oracle() {
        // f̂(0) is the integral of the bump, 0.443993816168079... for half width 1
        let f = Bump::new(0.0, 1.0);
        let v = f.transform(Complex64::new(0.0, 0.0)) * (2.0 * PI).sqrt();
        assert!((v.re - 0.443_993_816_168_079_4).abs() < 1e-12, "{}", v.re);
        assert!(v.im.abs() < 1e-15);
    }
}
