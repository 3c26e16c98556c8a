//! Certificates that `H_φ(I_r)` is non-trivial: Ingham-type mollifiers, the
//! witness pair `ψ_± = ip e^{±ipx/2} Q_± M`, the singular-value feasibility
//! scan estimating `r_φ`, and a rank proxy for cyclicity.

use std::f64::consts::PI;
use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use rustfft::{Fft, FftPlanner};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::inner_fn::{
    canonical_product_eval, canonical_sign, convergence_exponent, least_squares, validate_and_generate,
    InnerFunctionSpec, Side,
};
use crate::paley_wiener::{membership_1d, Bump, MembershipReport, Tolerances};
use crate::reps::{GridDescriptor, GridFunction};

/// Widths of the factors `sin(a_k p)/(a_k p)` of the mollifier transform.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MollifierSpec {
    pub half_width: f64,
    pub delta: f64,
    pub widths: Vec<f64>,
}

const MAX_FACTORS: usize = 4096;

impl MollifierSpec {
    /// `a_k ∝ k^{-1/δ}` normalized to `Σa_k = a`, with the smallest `K` whose
    /// last width falls below `cell`.
    pub fn new(half_width: f64, delta: f64, cell: f64) -> Result<Self> {
        check_params(half_width, delta)?;
        if !(cell.is_finite() && cell > 0.0) {
            return Err(Error::InvalidInput(format!("cell width must be positive, got {cell}")));
        }
        let mut sum = 0.0;
        for k in 1..=MAX_FACTORS {
            let raw = (k as f64).powf(-1.0 / delta);
            sum += raw;
            if half_width * raw / sum < cell {
                return Self::with_count(half_width, delta, k);
            }
        }
        Self::with_count(half_width, delta, MAX_FACTORS)
    }

    /// Exactly `count` factors.
    pub fn with_count(half_width: f64, delta: f64, count: usize) -> Result<Self> {
        check_params(half_width, delta)?;
        if count == 0 {
            return Err(Error::InvalidInput("mollifier needs at least one factor".into()));
        }
        let raw: Vec<f64> = (1..=count).map(|k| (k as f64).powf(-1.0 / delta)).collect();
        let sum: f64 = raw.iter().sum();
        let widths = raw.iter().map(|w| half_width * w / sum).collect();
        Ok(MollifierSpec { half_width, delta, widths })
    }

    pub fn count(&self) -> usize {
        self.widths.len()
    }

    /// Support radius `Σa_k` of the convolved indicators.
    pub fn support(&self) -> f64 {
        self.widths.iter().sum()
    }

    /// `M(p) = ∏ sin(a_k p)/(a_k p)`.
    pub fn eval(&self, p: f64) -> f64 {
        self.widths.iter().map(|a| sinc(a * p)).product()
    }

    /// `∏ (1 + a_k²p²/3)^{-1/2}`, an upper bound for `|M(p)|`.
    pub fn majorant(&self, p: f64) -> f64 {
        (-self.log_decay(p)).exp()
    }

    /// `-log` of the majorant.
    pub fn log_decay(&self, p: f64) -> f64 {
        self.widths.iter().map(|a| 0.5 * (a * a * p * p / 3.0).ln_1p()).sum()
    }
}

fn check_params(half_width: f64, delta: f64) -> Result<()> {
    if !(half_width.is_finite() && half_width > 0.0) {
        return Err(Error::InvalidInput(format!("mollifier half width must be positive, got {half_width}")));
    }
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::InvalidInput(format!("decay exponent must lie in (0, 1), got {delta}")));
    }
    Ok(())
}

pub fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-8 {
        1.0 - x * x / 6.0
    } else {
        x.sin() / x
    }
}

/// Fit of `log(-log E(p)) = log τ + δ log p`, `E` the majorant of `|M|`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DecayFit {
    pub tau: f64,
    pub delta: f64,
    pub requested: f64,
    pub tolerance: f64,
    pub points: usize,
    pub pass: bool,
}

pub const DECAY_FIT_TOLERANCE: f64 = 0.05;

/// Samples `M` on `p_grid` and fits its decay on the points with `|p| ≥ 1`.
pub fn ingham_mollifier(spec: &MollifierSpec, p_grid: &[f64]) -> Result<(Vec<f64>, DecayFit)> {
    let total: f64 = spec.support();
    if total > spec.half_width * (1.0 + 1e-12) {
        return Err(Error::Precondition(format!("widths sum to {total} > a = {}", spec.half_width)));
    }
    let values = p_grid.iter().map(|&p| spec.eval(p)).collect();
    let (xs, ys): (Vec<f64>, Vec<f64>) = p_grid
        .iter()
        .filter(|p| p.abs() >= 1.0)
        .map(|p| (p.abs().ln(), spec.log_decay(*p)))
        .filter(|(_, l)| *l > 0.0 && l.is_finite())
        .map(|(x, l)| (x, l.ln()))
        .unzip();
    if xs.len() < 2 || xs.iter().all(|x| *x == xs[0]) {
        return Err(Error::Witness("decay fit needs at least two distinct |p| >= 1".into()));
    }
    let (slope, intercept) = least_squares(&xs, &ys);
    let fit = DecayFit {
        tau: intercept.exp(),
        delta: slope,
        requested: spec.delta,
        tolerance: DECAY_FIT_TOLERANCE,
        points: xs.len(),
        pass: slope >= spec.delta - DECAY_FIT_TOLERANCE,
    };
    Ok((values, fit))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct WitnessOptions {
    /// Points of the half-shifted lightray grid.
    pub n_half: usize,
    /// Grid step; by default `π/(6R)` so that the x-window is six radii wide.
    pub h: Option<f64>,
    pub tolerances: Tolerances,
    pub ratio_tolerance: f64,
}

impl Default for WitnessOptions {
    fn default() -> Self {
        WitnessOptions { n_half: 4096, h: None, tolerances: Tolerances::default(), ratio_tolerance: 1e-8 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WitnessPair {
    #[serde(skip)]
    pub psi_plus: GridFunction,
    #[serde(skip)]
    pub psi_minus: GridFunction,
    pub x_used: f64,
    /// `ψ₊/ψ₋ = sign·φ`.
    pub sign: i32,
    pub mollifier: MollifierSpec,
    pub decay: DecayFit,
    pub ratio_residual: f64,
    /// Certified radius `x/2 + a + slack`.
    pub radius: f64,
    pub membership: (MembershipReport, MembershipReport),
}

pub fn witness_pair(spec: &InnerFunctionSpec, a: f64, delta: f64) -> Result<WitnessPair> {
    witness_pair_with(spec, a, delta, &WitnessOptions::default())
}

pub fn witness_pair_with(spec: &InnerFunctionSpec, a: f64, delta: f64, opts: &WitnessOptions) -> Result<WitnessPair> {
    let spec = validate_and_generate(spec)?;
    if !spec.atoms.is_empty() {
        return Err(Error::Precondition("witness pairs need a spec without singular part".into()));
    }
    let rho = if !spec.zeros.is_infinite() {
        0.0
    } else {
        convergence_exponent(&spec.zeros)?.value
    };
    if !(rho < delta && delta < 1.0) {
        return Err(Error::Precondition(format!("need rho < delta < 1, got rho = {rho}, delta = {delta}")));
    }
    if !(a.is_finite() && a > 0.0) {
        return Err(Error::InvalidInput(format!("mollifier half width must be positive, got {a}")));
    }
    let x = spec.translation;
    let reach = 0.5 * x + a;
    let h = opts.h.unwrap_or(PI / (6.0 * reach));
    let grid = GridDescriptor::lightray_half_shifted(opts.n_half, h)?;
    let dx = PI / (opts.n_half as f64 * h);
    let mollifier = MollifierSpec::new(a, delta, dx)?;
    let points = grid.points();
    let (m_values, decay) = ingham_mollifier(&mollifier, &points)?;

    let i = Complex64::i();
    let mut plus = Vec::with_capacity(points.len());
    let mut minus = Vec::with_capacity(points.len());
    for (&p, &m) in points.iter().zip(&m_values) {
        let pc = Complex64::new(p, 0.0);
        let common = i * p * m;
        let e = (i * p * x / 2.0).exp();
        plus.push(common * e * canonical_product_eval(&spec.zeros, pc, Side::Plus));
        minus.push(common * e.conj() * canonical_product_eval(&spec.zeros, pc, Side::Minus));
    }
    if plus.iter().chain(&minus).any(|z| !(z.re.is_finite() && z.im.is_finite())) {
        return Err(Error::NonFinite("witness samples (canonical product overflow)"));
    }
    let sign = spec.sign * canonical_sign(&spec.zeros);
    let peak = minus.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let mut ratio_residual: f64 = 0.0;
    for ((&p, a_), b) in points.iter().zip(&plus).zip(&minus) {
        if b.norm() > 1e-12 * peak {
            let phi = spec.evaluate_real(p)?;
            ratio_residual = ratio_residual.max((a_ / b - f64::from(sign) * phi).norm());
        }
    }
    if ratio_residual > opts.ratio_tolerance {
        return Err(Error::Witness(format!(
            "ratio residual {ratio_residual:.3e} above {:.1e}; the canonical product does not reproduce phi on this grid, \
             retry with more stored zeros or a larger decay exponent",
            opts.ratio_tolerance
        )));
    }
    let psi_plus = GridFunction { grid, samples: plus };
    let psi_minus = GridFunction { grid, samples: minus };
    let slack = opts.tolerances.slack_cells * dx;
    let radius = reach + slack;
    let rp = membership_1d(&psi_plus, (-reach, reach), &opts.tolerances)?;
    let rm = membership_1d(&psi_minus, (-reach, reach), &opts.tolerances)?;
    if !(rp.member && rm.member) {
        return Err(Error::Witness(format!(
            "membership in I_{radius:.4} failed (leakage {:.2e} / {:.2e}); retry with a finer grid or larger a",
            rp.support_leakage, rm.support_leakage
        )));
    }
    Ok(WitnessPair {
        psi_plus,
        psi_minus,
        x_used: x,
        sign,
        mollifier,
        decay,
        ratio_residual,
        radius,
        membership: (rp, rm),
    })
}

/// Discrete transform pair on `n` cells `x_j = (j-c)Δx` and momenta
/// `p_k = (k-c)h`, `c = (n-1)/2`, `hΔx = 2π/n`; exact inverses of each other.
struct DftPair {
    n: usize,
    dx: f64,
    forward: Arc<dyn Fft<f64>>,
    backward: Arc<dyn Fft<f64>>,
    twiddle: Vec<Complex64>,
    phase: Complex64,
}

impl DftPair {
    fn new(n: usize, dx: f64) -> Self {
        let mut planner = FftPlanner::new();
        let nf = n as f64;
        let c = 0.5 * (nf - 1.0);
        DftPair {
            n,
            dx,
            forward: planner.plan_fft_forward(n),
            backward: planner.plan_fft_inverse(n),
            twiddle: (0..n).map(|k| Complex64::from_polar(1.0, 2.0 * PI * c * k as f64 / nf)).collect(),
            phase: Complex64::from_polar(1.0, 2.0 * PI * c * c / nf),
        }
    }

    fn h(&self) -> f64 {
        2.0 * PI / (self.n as f64 * self.dx)
    }

    fn x(&self, j: usize) -> f64 {
        (j as f64 - 0.5 * (self.n as f64 - 1.0)) * self.dx
    }

    fn p(&self, k: usize) -> f64 {
        (k as f64 - 0.5 * (self.n as f64 - 1.0)) * self.h()
    }

    /// `(2π)^{-1/2} Δx Σ_j g_j e^{ip_k x_j}`.
    fn to_momentum(&self, buf: &mut [Complex64]) {
        for (v, t) in buf.iter_mut().zip(&self.twiddle) {
            *v *= t.conj();
        }
        self.backward.process(buf);
        let pre = self.phase * (self.dx / (2.0 * PI).sqrt());
        for (v, t) in buf.iter_mut().zip(&self.twiddle) {
            *v *= pre * t.conj();
        }
    }

    /// `(2π)^{-1/2} h Σ_k ψ_k e^{-ip_k x_j}`.
    fn to_position(&self, buf: &mut [Complex64]) {
        for (v, t) in buf.iter_mut().zip(&self.twiddle) {
            *v *= t;
        }
        self.forward.process(buf);
        let pre = self.phase.conj() * (self.h() / (2.0 * PI).sqrt());
        for (v, t) in buf.iter_mut().zip(&self.twiddle) {
            *v *= pre * t;
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct FeasibilityOptions {
    /// Cells of the position grid (power of two).
    pub n: usize,
    pub dx: f64,
    pub threshold_factor: f64,
    pub threshold_floor: f64,
    pub slack_cells: f64,
}

impl Default for FeasibilityOptions {
    fn default() -> Self {
        FeasibilityOptions { n: 8192, dx: 1.0 / 640.0, threshold_factor: 1e-3, threshold_floor: 1e-10, slack_cells: 1.0 }
    }
}

/// Largest admissible node spacing in x-cells.
pub const MAX_CELLS_PER_NODE: f64 = 32.0;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FeasibilityResult {
    pub r_grid: Vec<f64>,
    /// `min ‖outside part‖/‖ψ₁‖` over the basis, per radius.
    pub sigma_min: Vec<f64>,
    /// Basis functions fitting inside `[-r, r]`, per radius.
    pub basis_used: Vec<usize>,
    pub node_spacing: f64,
    pub plateau: f64,
    pub threshold: f64,
    pub estimated_radius: Option<f64>,
    pub options: FeasibilityOptions,
}

impl FeasibilityResult {
    /// `(r, σ_min)` rows for export.
    pub fn rows(&self) -> Vec<(f64, f64)> {
        self.r_grid.iter().copied().zip(self.sigma_min.iter().copied()).collect()
    }
}

pub fn radius_estimate(spec: &InnerFunctionSpec, r_grid: &[f64], basis_size: usize) -> Result<FeasibilityResult> {
    radius_estimate_with(spec, r_grid, basis_size, &FeasibilityOptions::default())
}

/// Cubic B-spline with unit knot spacing, supported in `(-2, 2)`.
fn cubic_bspline(u: f64) -> f64 {
    let u = u.abs();
    if u >= 2.0 {
        0.0
    } else if u >= 1.0 {
        (2.0 - u).powi(3) / 6.0
    } else {
        (4.0 - 6.0 * u * u + 3.0 * u * u * u) / 6.0
    }
}

/// `ψ₂ = -ip f̂` with `f = Σ c_i B((x - iΔ)/Δ)` real, `Δ = 2r_max/(N+3)`; the
/// splines contained in `[-r, r]` form a nested family, so `σ_min` cannot grow
/// with `r`. `f′` is replaced by its one-cell difference, whose discrete
/// transform is exactly compactly supported. `σ_min(r)` is the least ratio
/// `‖(φψ₂)ˇ outside [-r-Δx, r+Δx]‖ / ‖φψ₂‖`.
pub fn radius_estimate_with(
    spec: &InnerFunctionSpec,
    r_grid: &[f64],
    basis_size: usize,
    opts: &FeasibilityOptions,
) -> Result<FeasibilityResult> {
    let spec = validate_and_generate(spec)?;
    if r_grid.is_empty() || r_grid.iter().any(|r| !(r.is_finite() && *r > 0.0)) {
        return Err(Error::InvalidInput("radius grid must be non-empty and positive".into()));
    }
    if r_grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidInput("radius grid must be increasing".into()));
    }
    if basis_size < 4 {
        return Err(Error::InvalidInput(format!("basis size {basis_size} below 4")));
    }
    if !opts.n.is_power_of_two() || !(opts.dx > 0.0) {
        return Err(Error::InvalidGrid(format!("{} cells of width {}", opts.n, opts.dx)));
    }
    let r_max = *r_grid.last().unwrap();
    let half_window = 0.5 * opts.n as f64 * opts.dx;
    if r_max > 0.5 * half_window {
        return Err(Error::NyquistGuard(format!(
            "r = {r_max} exceeds half of the x-window {half_window}; refine the momentum step"
        )));
    }
    let spacing = 2.0 * r_max / (basis_size as f64 + 3.0);
    if spacing > MAX_CELLS_PER_NODE * opts.dx {
        return Err(Error::NyquistGuard(format!(
            "{basis_size} nodes on [-{r_max}, {r_max}] are {:.1} cells apart; at most {MAX_CELLS_PER_NODE} allowed",
            spacing / opts.dx
        )));
    }
    if spacing < opts.dx {
        return Err(Error::NyquistGuard(format!(
            "{basis_size} nodes on [-{r_max}, {r_max}] are finer than the x-cell {}",
            opts.dx
        )));
    }

    let dft = DftPair::new(opts.n, opts.dx);
    let mut phi = Vec::with_capacity(opts.n);
    for k in 0..opts.n {
        phi.push(spec.evaluate_real(dft.p(k))?);
    }
    let half = ((r_max / spacing) - 2.0 + 1e-9).floor() as i64;
    let centers: Vec<f64> = (-half..=half).map(|i| i as f64 * spacing).collect();
    let xs: Vec<f64> = (0..opts.n).map(|j| dft.x(j)).collect();

    // per spline: its difference on the cells and the position form of φψ₂
    let columns: Vec<(Vec<f64>, Vec<Complex64>)> = centers
        .par_iter()
        .map(|&t| {
            let f: Vec<f64> = xs.iter().map(|x| cubic_bspline((x - t) / spacing)).collect();
            let g: Vec<f64> = (0..opts.n)
                .map(|j| (f[j] - if j > 0 { f[j - 1] } else { 0.0 }) / opts.dx)
                .collect();
            let mut buf: Vec<Complex64> = g.iter().map(|v| Complex64::new(*v, 0.0)).collect();
            dft.to_momentum(&mut buf);
            for (v, f) in buf.iter_mut().zip(&phi) {
                *v *= f;
            }
            dft.to_position(&mut buf);
            (g, buf)
        })
        .collect();

    let slack = opts.slack_cells * opts.dx;
    let results: Vec<(f64, usize)> = r_grid
        .par_iter()
        .map(|&r| {
            let used: Vec<usize> =
                (0..centers.len()).filter(|&i| centers[i].abs() + 2.0 * spacing <= r + 1e-12).collect();
            if used.is_empty() {
                return Ok((f64::NAN, 0));
            }
            let outside: Vec<usize> = (0..opts.n).filter(|&j| xs[j].abs() > r + slack).collect();
            let m = used.len();
            let mut a = DMatrix::<f64>::zeros(2 * outside.len(), m);
            for (col, &i) in used.iter().enumerate() {
                for (row, &j) in outside.iter().enumerate() {
                    let v = columns[i].1[j];
                    a[(2 * row, col)] = v.re;
                    a[(2 * row + 1, col)] = v.im;
                }
            }
            let support: Vec<usize> = (0..opts.n).filter(|&j| xs[j].abs() <= r + slack).collect();
            let mut gm = DMatrix::<f64>::zeros(support.len(), m);
            for (col, &i) in used.iter().enumerate() {
                for (row, &j) in support.iter().enumerate() {
                    gm[(row, col)] = columns[i].0[j];
                }
            }
            let r_fac = gm.qr().r();
            let gram = a.transpose() * &a;
            let r_inv = r_fac
                .try_inverse()
                .ok_or_else(|| Error::Witness("spline basis is rank deficient".into()))?;
            let s = r_inv.transpose() * gram * &r_inv;
            let s = 0.5 * (&s + s.transpose());
            let lambda = s.symmetric_eigenvalues().min();
            Ok((lambda.max(0.0).sqrt(), m))
        })
        .collect::<Result<Vec<_>>>()?;

    let sigma_min: Vec<f64> = results.iter().map(|r| r.0).collect();
    let basis_used = results.iter().map(|r| r.1).collect();
    let head: Vec<f64> = sigma_min[..sigma_min.len().div_ceil(2)].iter().copied().filter(|s| s.is_finite()).collect();
    let plateau = median(&head);
    let threshold = (opts.threshold_factor * plateau).max(opts.threshold_floor);
    let below: Vec<bool> = sigma_min.iter().map(|s| s.is_finite() && *s < threshold).collect();
    let estimated_radius = (0..r_grid.len())
        .find(|&i| below[i] && (r_grid.len() == 1 || below.get(i + 1) == Some(&true)))
        .map(|i| r_grid[i]);
    Ok(FeasibilityResult {
        r_grid: r_grid.to_vec(),
        sigma_min,
        basis_used,
        node_spacing: spacing,
        plateau,
        threshold,
        estimated_radius,
        options: *opts,
    })
}

fn median(values: &[f64]) -> f64 {
    if values.is_empty() {
        return 0.0;
    }
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

/// A fixed, seeded list of bumps; `span_dimension` uses those fitting the
/// available interval, so enlarging `r` only adds generators.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BumpFamily {
    pub bumps: Vec<Bump>,
}

impl BumpFamily {
    /// `count` bumps inside `(-radius, radius)` with half widths in `[0.1, 0.4]·radius`.
    pub fn random(count: usize, radius: f64, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let bumps = (0..count)
            .map(|_| {
                let w = radius * rng.gen_range(0.1..0.4);
                let c = rng.gen_range(-(radius - w)..(radius - w));
                Bump::new(c, w)
            })
            .collect();
        BumpFamily { bumps }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SpanReport {
    pub rank: usize,
    pub generators: usize,
    pub grid_dimension: usize,
    pub ratio: f64,
    /// Zero witness: nothing to span.
    pub degenerate: bool,
}

pub const SPAN_RELATIVE_THRESHOLD: f64 = 1e-8;

/// Numerical rank of `{ψ₊·(g′)^ : g ∈ family, supp g ⊂ I_{r-r′}}`, `r′` the
/// witness radius, in the weighted `L²` of the witness grid.
pub fn span_dimension(witness: &WitnessPair, r: f64, family: &BumpFamily) -> Result<SpanReport> {
    let psi = &witness.psi_plus;
    let grid_dimension = psi.grid.len();
    if psi.samples.iter().all(|z| *z == Complex64::new(0.0, 0.0)) {
        return Ok(SpanReport { rank: 0, generators: 0, grid_dimension, ratio: 0.0, degenerate: true });
    }
    let room = r - witness.radius;
    if !(room > 0.0) {
        return Err(Error::Precondition(format!("r = {r} does not exceed the witness radius {}", witness.radius)));
    }
    let chosen: Vec<&Bump> =
        family.bumps.iter().filter(|b| b.center.abs() + b.half_width <= room).collect();
    if chosen.is_empty() {
        return Ok(SpanReport { rank: 0, generators: 0, grid_dimension, ratio: 0.0, degenerate: false });
    }
    let points = psi.grid.points();
    let weights = psi.grid.weights();
    let columns: Vec<Vec<Complex64>> = chosen
        .par_iter()
        .map(|b| {
            points
                .iter()
                .zip(&weights)
                .zip(&psi.samples)
                .map(|((&p, &w), &s)| s * b.derivative_transform(Complex64::new(p, 0.0)) * w.sqrt())
                .collect()
        })
        .collect();
    let mat = DMatrix::from_fn(grid_dimension, columns.len(), |i, j| columns[j][i]);
    let sv: DVector<f64> = mat.singular_values();
    let top = sv.max();
    let rank = if top > 0.0 { sv.iter().filter(|s| **s > SPAN_RELATIVE_THRESHOLD * top).count() } else { 0 };
    Ok(SpanReport {
        rank,
        generators: chosen.len(),
        grid_dimension,
        ratio: rank as f64 / grid_dimension as f64,
        degenerate: false,
    })
}
