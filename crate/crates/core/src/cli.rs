//! Spec files, analysis requests, the task pipeline and report emission behind
//! the `endonet` binary.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::catalog::{catalog, lookup, named_specs};
use crate::inner_fn::{
    gamma_transform, is_gamma_invariant, product, symmetry_check, validate_and_generate, Atom, BlockKind,
    InnerFunctionSpec, ZeroGenerator, ZeroSet,
};
use crate::paley_wiener::{locality_suite, roundtrip_suite, skew_extend, support_profile_with, Tolerances};
use crate::radius::{classify_1d, classify_2d, relations_suite};
use crate::reps::identity_suite_with;
use crate::witness::{radius_estimate_with, witness_pair_with, FeasibilityOptions, WitnessOptions};

/// Problems with the request itself; these map to exit status 2.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
    #[error("cannot parse {what}: {message}")]
    Parse { what: String, message: String },
    #[error("invalid input: {0}")]
    Invalid(String),
}

fn invalid(msg: impl Into<String>) -> CliError {
    CliError::Invalid(msg.into())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ZeroEntry {
    pub re: f64,
    pub im: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorEntry {
    pub kind: String,
    #[serde(default)]
    pub parameters: BTreeMap<String, f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AtomEntry {
    pub location: f64,
    pub mass: f64,
}

fn one() -> i32 {
    1
}

/// On-disk form of an inner function.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpecFile {
    #[serde(default = "one")]
    pub sign: i32,
    #[serde(default)]
    pub translation: f64,
    #[serde(default)]
    pub zeros: Vec<ZeroEntry>,
    /// The explicit zeros are the leading terms of an infinite sequence.
    #[serde(default)]
    pub infinite_sequence: bool,
    #[serde(default)]
    pub generator: Option<GeneratorEntry>,
    #[serde(default)]
    pub atoms: Vec<AtomEntry>,
    #[serde(default)]
    pub truncation_order: Option<usize>,
}

fn parameter(g: &GeneratorEntry, key: &str, default: Option<f64>) -> Result<f64, CliError> {
    match (g.parameters.get(key), default) {
        (Some(v), _) => Ok(*v),
        (None, Some(d)) => Ok(d),
        (None, None) => Err(invalid(format!("generator {} needs parameter {key}", g.kind))),
    }
}

fn count_parameter(g: &GeneratorEntry, default: f64) -> Result<usize, CliError> {
    let c = parameter(g, "count", Some(default))?;
    if !(c >= 0.0 && c.fract() == 0.0 && c <= 1e7) {
        return Err(invalid(format!("generator count must be a nonnegative integer, got {c}")));
    }
    Ok(c as usize)
}

impl SpecFile {
    /// Builds and validates the spec.
    pub fn to_spec(&self) -> Result<InnerFunctionSpec, CliError> {
        let mut spec = match &self.generator {
            None => InnerFunctionSpec::identity(),
            Some(g) => {
                let allowed: &[&str] = match g.kind.as_str() {
                    "sin_ratio" => &["nu", "q", "count"],
                    "gamma_example" => &["beta", "m", "count"],
                    other => return Err(invalid(format!("unknown generator kind {other:?}"))),
                };
                if let Some(k) = g.parameters.keys().find(|k| !allowed.contains(&k.as_str())) {
                    return Err(invalid(format!("unknown parameter {k:?} for {}", g.kind)));
                }
                let generator = if g.kind == "sin_ratio" {
                    ZeroGenerator::SinRatio {
                        nu: parameter(g, "nu", None)?,
                        q: parameter(g, "q", Some(1.0))?,
                        count: count_parameter(g, 64.0)?,
                    }
                } else {
                    ZeroGenerator::GammaExample {
                        beta: parameter(g, "beta", None)?,
                        m: parameter(g, "m", None)?,
                        count: count_parameter(g, 400.0)?,
                    }
                };
                InnerFunctionSpec::from_generator(generator)
            }
        };
        if !self.zeros.is_empty() {
            let zs: Vec<Complex64> = self.zeros.iter().map(|z| Complex64::new(z.re, z.im)).collect();
            let set = if self.infinite_sequence { ZeroSet::sample(zs) } else { ZeroSet::finite(zs) };
            let extra = InnerFunctionSpec { truncation_order: set.len(), zeros: set, ..InnerFunctionSpec::identity() };
            spec = product(&spec, &extra);
        } else if self.infinite_sequence {
            return Err(invalid("infinite_sequence needs explicit zeros"));
        }
        spec.sign = self.sign;
        spec.translation = self.translation;
        spec.atoms = self.atoms.iter().map(|a| Atom { location: a.location, mass: a.mass }).collect();
        if let Some(order) = self.truncation_order {
            spec.truncation_order = order;
        }
        validate_and_generate(&spec).map_err(|e| invalid(e.to_string()))?;
        Ok(spec)
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Io { path: path.display().to_string(), message: e.to_string() })
}

fn is_json(path: &Path) -> bool {
    path.extension().is_some_and(|e| e.eq_ignore_ascii_case("json"))
}

fn parse_text<T: for<'de> Deserialize<'de>>(text: &str, json: bool, what: &str) -> Result<T, CliError> {
    if json {
        serde_json::from_str(text).map_err(|e| CliError::Parse { what: what.into(), message: e.to_string() })
    } else {
        toml::from_str(text).map_err(|e| CliError::Parse { what: what.into(), message: e.to_string() })
    }
}

/// Reads a TOML spec file, or JSON when the extension is `.json`.
pub fn load_spec_file(path: &Path) -> Result<InnerFunctionSpec, CliError> {
    let file: SpecFile = parse_text(&read(path)?, is_json(path), &path.display().to_string())?;
    file.to_spec()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Borchers,
    Gamma,
    PaleyWiener,
    Relations,
    All,
}

impl Suite {
    fn name(self) -> &'static str {
        match self {
            Suite::Borchers => "borchers",
            Suite::Gamma => "gamma",
            Suite::PaleyWiener => "paley-wiener",
            Suite::Relations => "relations",
            Suite::All => "all",
        }
    }
}

fn default_basis() -> usize {
    256
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "task", deny_unknown_fields)]
pub enum Task {
    #[serde(rename = "validate")]
    Validate,
    #[serde(rename = "classify-1d")]
    Classify1d,
    #[serde(rename = "classify-2d")]
    Classify2d { mass: f64 },
    #[serde(rename = "estimate")]
    Estimate {
        r_min: f64,
        r_max: f64,
        steps: usize,
        #[serde(default = "default_basis")]
        basis: usize,
    },
    #[serde(rename = "witness")]
    Witness { a: f64, delta: f64 },
    #[serde(rename = "verify")]
    Verify { suite: Suite },
}

impl Task {
    fn label(&self) -> String {
        match self {
            Task::Validate => "validate".into(),
            Task::Classify1d => "classify-1d".into(),
            Task::Classify2d { mass } => format!("classify-2d(m={mass})"),
            Task::Estimate { .. } => "estimate".into(),
            Task::Witness { .. } => "witness".into(),
            Task::Verify { suite } => format!("verify({})", suite.name()),
        }
    }

    fn stage(&self) -> u8 {
        match self {
            Task::Validate => 0,
            Task::Classify1d | Task::Classify2d { .. } => 1,
            Task::Estimate { .. } | Task::Witness { .. } => 2,
            Task::Verify { .. } => 3,
        }
    }

    fn needs_spec(&self) -> bool {
        !matches!(self, Task::Verify { .. })
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpecSource {
    #[serde(default)]
    pub catalog: Option<String>,
    #[serde(default)]
    pub file: Option<PathBuf>,
    #[serde(default)]
    pub inline: Option<SpecFile>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ToleranceOverrides {
    #[serde(default)]
    pub support: Option<f64>,
    #[serde(default)]
    pub reality: Option<f64>,
    #[serde(default)]
    pub slack_cells: Option<f64>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputPaths {
    #[serde(default)]
    pub report: Option<PathBuf>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AnalysisRequest {
    #[serde(default)]
    pub spec: SpecSource,
    pub tasks: Vec<Task>,
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default)]
    pub grid_size: Option<usize>,
    #[serde(default)]
    pub tolerances: ToleranceOverrides,
    #[serde(default)]
    pub output: OutputPaths,
}

impl AnalysisRequest {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let mut req: AnalysisRequest = parse_text(&read(path)?, is_json(path), &path.display().to_string())?;
        // relative spec files are resolved against the request
        if let (Some(f), Some(dir)) = (&req.spec.file, path.parent()) {
            if f.is_relative() {
                req.spec.file = Some(dir.join(f));
            }
        }
        Ok(req)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if self.tasks.is_empty() {
            return Err(invalid("request lists no tasks"));
        }
        for t in &self.tasks {
            match *t {
                Task::Classify2d { mass } if !(mass.is_finite() && mass > 0.0) => {
                    return Err(invalid(format!("mass must be positive, got {mass}")));
                }
                Task::Estimate { r_min, r_max, steps, basis } => {
                    if !(r_min > 0.0 && r_max > r_min && r_max.is_finite()) {
                        return Err(invalid(format!("need 0 < r_min < r_max, got {r_min}..{r_max}")));
                    }
                    if steps < 2 || basis < 4 {
                        return Err(invalid("estimate needs steps >= 2 and basis >= 4"));
                    }
                }
                Task::Witness { a, delta } if !(a > 0.0 && delta > 0.0 && delta < 1.0) => {
                    return Err(invalid(format!("witness needs a > 0 and 0 < delta < 1, got {a}, {delta}")));
                }
                _ => {}
            }
        }
        if let Some(n) = self.grid_size {
            check_grid_size(n)?;
        }
        let given = [self.spec.catalog.is_some(), self.spec.file.is_some(), self.spec.inline.is_some()];
        if given.iter().filter(|g| **g).count() > 1 {
            return Err(invalid("give at most one of spec.catalog, spec.file, spec.inline"));
        }
        Ok(())
    }
}

fn check_grid_size(n: usize) -> Result<(), CliError> {
    if n < 64 || !n.is_power_of_two() {
        return Err(invalid(format!("grid size must be a power of two >= 64, got {n}")));
    }
    Ok(())
}

/// Settings in effect for a run; echoed in every report.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Settings {
    pub seed: u64,
    pub grid_size: usize,
    pub tolerances: Tolerances,
    pub mass: f64,
}

impl Default for Settings {
    fn default() -> Self {
        Settings { seed: 0, grid_size: 8192, tolerances: Tolerances::default(), mass: 1.0 }
    }
}

/// Normalized view of a validated spec.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SpecEcho {
    pub source: String,
    pub sign: i32,
    pub translation: f64,
    pub stored_zeros: usize,
    pub leading_zeros: Vec<[f64; 2]>,
    pub blocks: Vec<String>,
    pub atoms: Vec<[f64; 2]>,
    pub truncation_order: usize,
}

const ECHO_ZEROS: usize = 8;

impl SpecEcho {
    pub fn new(source: &str, spec: &InnerFunctionSpec) -> Self {
        let blocks = spec
            .zeros
            .blocks
            .iter()
            .map(|b| {
                let kind = match b.kind {
                    BlockKind::Generator(ZeroGenerator::SinRatio { nu, q, count }) => {
                        format!("sin_ratio(nu={nu}, q={q}, count={count})")
                    }
                    BlockKind::Generator(ZeroGenerator::GammaExample { beta, count, m }) => {
                        format!("gamma_example(beta={beta}, m={m}, count={count})")
                    }
                    BlockKind::Sample => "sample".into(),
                };
                let refl = if b.reflected { ", reflected" } else { "" };
                format!("{kind} [{}..{}){refl}", b.start, b.start + b.len)
            })
            .collect();
        SpecEcho {
            source: source.to_string(),
            sign: spec.sign,
            translation: spec.translation,
            stored_zeros: spec.zeros.len(),
            leading_zeros: spec.zeros.zeros.iter().take(ECHO_ZEROS).map(|z| [z.re, z.im]).collect(),
            blocks,
            atoms: spec.atoms.iter().map(|a| [a.location, a.mass]).collect(),
            truncation_order: spec.truncation_order,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Ok,
    Fail,
    Error,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TaskOutcome {
    pub task: String,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub result: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    /// `(suffix, contents)` of CSV sidecars.
    #[serde(skip)]
    pub csv: Vec<(String, String)>,
}

impl TaskOutcome {
    fn ok(task: String, result: Value) -> Self {
        TaskOutcome { task, status: Status::Ok, result: Some(result), error: None, csv: Vec::new() }
    }

    fn verdict(task: String, pass: bool, result: Value) -> Self {
        let status = if pass { Status::Ok } else { Status::Fail };
        TaskOutcome { task, status, result: Some(result), error: None, csv: Vec::new() }
    }

    fn error(task: String, err: impl ToString) -> Self {
        TaskOutcome { task, status: Status::Error, result: None, error: Some(err.to_string()), csv: Vec::new() }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Summary {
    pub ok: usize,
    pub failed: usize,
    pub errors: usize,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub tool: &'static str,
    pub version: &'static str,
    pub settings: Settings,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub spec: Option<SpecEcho>,
    pub tasks: Vec<TaskOutcome>,
    pub summary: Summary,
}

impl Report {
    /// Pretty JSON with a trailing newline.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn exit_code(&self) -> u8 {
        if self.summary.pass {
            0
        } else {
            1
        }
    }
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("serializable result")
}

fn csv(header: &str, rows: impl Iterator<Item = String>) -> String {
    let mut s = String::from(header);
    s.push('\n');
    for r in rows {
        s.push_str(&r);
        s.push('\n');
    }
    s
}

/// Relative residuals of `γ(γ(φ)) = φ` and `γ(φ)(p) = conj φ(1/p)` on real
/// points, over the catalog.
pub fn gamma_suite() -> crate::Result<(bool, Value)> {
    const POINTS: [f64; 8] = [0.37, 0.61, 1.3, 2.7, 4.1, -0.9, -2.3, -5.3];
    const TOL: f64 = 1e-9;
    let mut entries = Vec::new();
    let mut pass = true;
    for e in catalog() {
        let g = gamma_transform(&e.spec);
        let gg = gamma_transform(&g);
        let (mut involution, mut pointwise): (f64, f64) = (0.0, 0.0);
        for &p in &POINTS {
            let v = e.spec.evaluate_real(p)?;
            involution = involution.max((gg.evaluate_real(p)? - v).norm());
            let reflected = e.spec.evaluate_real(1.0 / p)?.conj();
            pointwise = pointwise.max((g.evaluate_real(p)? - reflected).norm());
        }
        let ok = involution < TOL && pointwise < TOL;
        pass &= ok;
        entries.push(json!({
            "name": e.name,
            "involution_residual": involution,
            "reflection_residual": pointwise,
            "gamma_invariant": is_gamma_invariant(&e.spec, 1e-9),
            "pass": ok,
        }));
    }
    Ok((pass, json!({ "tolerance": TOL, "entries": entries })))
}

pub const IDENTITY_VECTORS: usize = 32;
pub const ROUNDTRIP_CASES: usize = 100;
pub const LOCALITY_PAIRS: usize = 50;
pub const LOCALITY_BOUND: f64 = 1e-6;

fn run_suite(suite: Suite, settings: &Settings) -> Vec<TaskOutcome> {
    let label = |s: Suite| format!("verify({})", s.name());
    let one = |s: Suite| -> TaskOutcome {
        let outcome = match s {
            Suite::Borchers => identity_suite_with(settings.seed, settings.mass, IDENTITY_VECTORS).map(|checks| {
                let pass = checks.iter().all(|c| c.pass);
                (pass, json!({ "mass": settings.mass, "checks": to_value(&checks) }))
            }),
            Suite::Gamma => gamma_suite(),
            Suite::PaleyWiener => {
                roundtrip_suite(settings.seed, ROUNDTRIP_CASES, &settings.tolerances).and_then(|rt| {
                    let loc = locality_suite(settings.seed.wrapping_add(1), LOCALITY_PAIRS, LOCALITY_BOUND)?;
                    let pass = rt.violations == 0 && loc.violations == 0;
                    Ok((pass, json!({ "roundtrip": to_value(&rt), "locality": to_value(&loc) })))
                })
            }
            Suite::Relations => relations_suite(&named_specs()).map(|r| (r.violations == 0, to_value(&r))),
            Suite::All => unreachable!(),
        };
        match outcome {
            Ok((pass, v)) => TaskOutcome::verdict(label(s), pass, v),
            Err(e) => TaskOutcome::error(label(s), e),
        }
    };
    match suite {
        Suite::All => [Suite::Borchers, Suite::Gamma, Suite::PaleyWiener, Suite::Relations].map(one).to_vec(),
        s => vec![one(s)],
    }
}

fn run_task(task: &Task, spec: Option<&InnerFunctionSpec>, settings: &Settings) -> Vec<TaskOutcome> {
    let label = task.label();
    let spec = match (task.needs_spec(), spec) {
        (true, Some(s)) => s,
        (true, None) => return vec![TaskOutcome::error(label, "task needs a spec")],
        (false, _) => {
            let Task::Verify { suite } = task else { unreachable!() };
            return run_suite(*suite, settings);
        }
    };
    let outcome = match *task {
        Task::Validate => validate_and_generate(spec).map(|s| {
            let grid: Vec<f64> = (1..=16).map(|k| 0.37 * k as f64).collect();
            TaskOutcome::ok(
                label.clone(),
                json!({
                    "stored_zeros": s.zeros.len(),
                    "represented_zeros": s.zeros.represented_count(),
                    "blaschke_sum": s.zeros.blaschke_sum(),
                    "infinite": s.zeros.is_infinite(),
                    "symmetry": to_value(&symmetry_check(&s, &grid)),
                }),
            )
        }),
        Task::Classify1d => classify_1d(spec).map(|c| TaskOutcome::ok(label.clone(), to_value(&c))),
        Task::Classify2d { mass } => classify_2d(spec, mass).map(|c| TaskOutcome::ok(label.clone(), to_value(&c))),
        Task::Estimate { r_min, r_max, steps, basis } => {
            let r_grid: Vec<f64> =
                (0..steps).map(|k| r_min + (r_max - r_min) * k as f64 / (steps - 1) as f64).collect();
            let opts = FeasibilityOptions { n: settings.grid_size, ..Default::default() };
            radius_estimate_with(spec, &r_grid, basis, &opts).map(|res| {
                let mut out = TaskOutcome::ok(label.clone(), to_value(&res));
                out.csv.push((
                    "estimate".into(),
                    csv("r,sigma_min", res.rows().into_iter().map(|(r, s)| format!("{r},{s}"))),
                ));
                out
            })
        }
        Task::Witness { a, delta } => {
            let opts = WitnessOptions { n_half: settings.grid_size / 2, tolerances: settings.tolerances, ..Default::default() };
            witness_pair_with(spec, a, delta, &opts).and_then(|w| {
                let ext = skew_extend(&w.psi_plus)?;
                let profile = support_profile_with(&ext.function, settings.tolerances.leakage)?;
                let mut out = TaskOutcome::ok(label.clone(), to_value(&w));
                out.csv.push((
                    "witness_profile".into(),
                    csv(
                        "x,density,outside",
                        profile.rows().into_iter().map(|(x, d, o)| format!("{x},{d},{o}")),
                    ),
                ));
                Ok(out)
            })
        }
        Task::Verify { .. } => unreachable!(),
    };
    vec![outcome.unwrap_or_else(|e| TaskOutcome::error(label, e))]
}

/// Runs the tasks in stage order validate, classify, estimate/witness, verify.
pub fn run_pipeline(
    spec: Option<(String, InnerFunctionSpec)>,
    tasks: &[Task],
    settings: &Settings,
) -> Report {
    let mut ordered: Vec<&Task> = tasks.iter().collect();
    ordered.sort_by_key(|t| t.stage());
    let outcomes: Vec<TaskOutcome> = ordered
        .into_iter()
        .flat_map(|t| run_task(t, spec.as_ref().map(|s| &s.1), settings))
        .collect();
    let count = |s: Status| outcomes.iter().filter(|o| o.status == s).count();
    let summary = Summary {
        ok: count(Status::Ok),
        failed: count(Status::Fail),
        errors: count(Status::Error),
        pass: count(Status::Ok) == outcomes.len(),
    };
    Report {
        tool: "endonet",
        version: env!("CARGO_PKG_VERSION"),
        settings: settings.clone(),
        spec: spec.as_ref().map(|(src, s)| SpecEcho::new(src, &validate_and_generate(s).unwrap_or_else(|_| s.clone()))),
        tasks: outcomes,
        summary,
    }
}

/// Writes the report (stdout when `out` is `None`) and CSV sidecars named
/// `<stem>.<k>.<kind>.csv` beside it.
pub fn emit(report: &Report, out: Option<&Path>) -> Result<(), CliError> {
    let io = |p: &Path, e: std::io::Error| CliError::Io { path: p.display().to_string(), message: e.to_string() };
    match out {
        None => {
            print!("{}", report.to_json());
        }
        Some(path) => {
            if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
                fs::create_dir_all(dir).map_err(|e| io(dir, e))?;
            }
            fs::write(path, report.to_json()).map_err(|e| io(path, e))?;
            let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| "report".into());
            for (k, t) in report.tasks.iter().enumerate() {
                for (kind, body) in &t.csv {
                    let side = path.with_file_name(format!("{stem}.{k}.{kind}.csv"));
                    fs::write(&side, body).map_err(|e| io(&side, e))?;
                }
            }
        }
    }
    Ok(())
}

#[derive(Debug, Parser)]
#[command(name = "endonet", version, about = "Inner functions, standard pairs and localization radii")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run a request file, or the default tasks on --spec/--catalog.
    Analyze {
        /// Request file (TOML, or JSON by extension).
        request: Option<PathBuf>,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// List the built-in inner functions.
    Catalog,
    /// Run a verification suite.
    Verify {
        #[arg(long, value_enum, default_value = "all")]
        suite: Suite,
        #[command(flatten)]
        common: CommonArgs,
    },
}

#[derive(Debug, Args, Default)]
pub struct CommonArgs {
    /// Spec file (TOML, or JSON by extension).
    #[arg(long)]
    pub spec: Option<PathBuf>,
    /// Built-in spec by name.
    #[arg(long, conflicts_with = "spec")]
    pub catalog: Option<String>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Points of the transform grids (power of two).
    #[arg(long)]
    pub grid_size: Option<usize>,
    /// Admissible fraction of mass outside the interval.
    #[arg(long)]
    pub tolerance_support: Option<f64>,
    #[arg(long)]
    pub r_min: Option<f64>,
    #[arg(long)]
    pub r_max: Option<f64>,
    #[arg(long)]
    pub r_steps: Option<usize>,
    #[arg(long)]
    pub mass: Option<f64>,
}

fn resolve_spec(source: &SpecSource) -> Result<Option<(String, InnerFunctionSpec)>, CliError> {
    if let Some(name) = &source.catalog {
        let e = lookup(name).ok_or_else(|| invalid(format!("unknown catalog entry {name:?}")))?;
        return Ok(Some((format!("catalog:{name}"), e.spec)));
    }
    if let Some(path) = &source.file {
        return Ok(Some((path.display().to_string(), load_spec_file(path)?)));
    }
    if let Some(inline) = &source.inline {
        return Ok(Some(("inline".into(), inline.to_spec()?)));
    }
    Ok(None)
}

fn settings_from(common: &CommonArgs, req: Option<&AnalysisRequest>) -> Result<Settings, CliError> {
    let mut s = Settings::default();
    if let Some(r) = req {
        s.seed = r.seed.unwrap_or(s.seed);
        s.grid_size = r.grid_size.unwrap_or(s.grid_size);
        let t = &r.tolerances;
        s.tolerances.leakage = t.support.unwrap_or(s.tolerances.leakage);
        s.tolerances.reality = t.reality.unwrap_or(s.tolerances.reality);
        s.tolerances.slack_cells = t.slack_cells.unwrap_or(s.tolerances.slack_cells);
    }
    s.seed = common.seed.unwrap_or(s.seed);
    if let Some(n) = common.grid_size {
        check_grid_size(n)?;
        s.grid_size = n;
    }
    if let Some(t) = common.tolerance_support {
        if !(t > 0.0 && t < 1.0) {
            return Err(invalid(format!("support tolerance must lie in (0, 1), got {t}")));
        }
        s.tolerances.leakage = t;
    }
    if let Some(m) = common.mass {
        if !(m.is_finite() && m > 0.0) {
            return Err(invalid(format!("mass must be positive, got {m}")));
        }
        s.mass = m;
    }
    Ok(s)
}

/// Builds the report for parsed arguments. `Ok(None)` for verbs without a report.
pub fn execute(command: &Command) -> Result<Option<(Report, Option<PathBuf>)>, CliError> {
    match command {
        Command::Catalog => {
            for e in catalog() {
                println!("{:<20} {}", e.name, e.description);
            }
            Ok(None)
        }
        Command::Verify { suite, common } => {
            let settings = settings_from(common, None)?;
            let report = run_pipeline(None, &[Task::Verify { suite: *suite }], &settings);
            Ok(Some((report, common.out.clone())))
        }
        Command::Analyze { request, common } => {
            let mut req = match request {
                Some(path) => AnalysisRequest::load(path)?,
                None => AnalysisRequest {
                    spec: SpecSource::default(),
                    tasks: vec![Task::Validate, Task::Classify1d, Task::Classify2d { mass: common.mass.unwrap_or(1.0) }],
                    seed: None,
                    grid_size: None,
                    tolerances: ToleranceOverrides::default(),
                    output: OutputPaths::default(),
                },
            };
            if let Some(p) = &common.spec {
                req.spec = SpecSource { file: Some(p.clone()), ..Default::default() };
            }
            if let Some(c) = &common.catalog {
                req.spec = SpecSource { catalog: Some(c.clone()), ..Default::default() };
            }
            if let Some(m) = common.mass {
                for t in req.tasks.iter_mut() {
                    if let Task::Classify2d { mass } = t {
                        *mass = m;
                    }
                }
            }
            let r_flags = [common.r_min.is_some(), common.r_max.is_some(), common.r_steps.is_some()];
            if r_flags.iter().any(|f| *f) {
                if !r_flags.iter().all(|f| *f) {
                    return Err(invalid("--r-min, --r-max and --r-steps go together"));
                }
                let (lo, hi, n) = (common.r_min.unwrap(), common.r_max.unwrap(), common.r_steps.unwrap());
                let mut found = false;
                for t in req.tasks.iter_mut() {
                    if let Task::Estimate { r_min, r_max, steps, .. } = t {
                        (*r_min, *r_max, *steps) = (lo, hi, n);
                        found = true;
                    }
                }
                if !found {
                    req.tasks.push(Task::Estimate { r_min: lo, r_max: hi, steps: n, basis: default_basis() });
                }
            }
            req.validate()?;
            let settings = settings_from(common, Some(&req))?;
            let spec = resolve_spec(&req.spec)?;
            if spec.is_none() && req.tasks.iter().any(Task::needs_spec) {
                return Err(invalid("no spec given (use --spec, --catalog or a request with [spec])"));
            }
            let out = common.out.clone().or(req.output.report.clone());
            Ok(Some((run_pipeline(spec, &req.tasks, &settings), out)))
        }
    }
}

/// Entry point of the binary: 0 success, 1 verification failure, 2 invalid input.
pub fn main_with(args: impl IntoIterator<Item = OsString>) -> ExitCode {
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match execute(&cli.command) {
        Ok(None) => ExitCode::SUCCESS,
        Ok(Some((report, out))) => match emit(&report, out.as_deref()) {
            Ok(()) => ExitCode::from(report.exit_code()),
            Err(e) => {
                eprintln!("endonet: {e}");
                ExitCode::from(2)
            }
        },
        Err(e) => {
            eprintln!("endonet: {e}");
            ExitCode::from(2)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::radius::RadiusValue;

    #[test]
    fn spec_file_roundtrip() {
        let text = r#"
sign = -1
translation = 1.0
zeros = [{ re = 0.0, im = 1.0 }]
atoms = [{ location = 1.0, mass = 0.5 }]
[generator]
kind = "sin_ratio"
parameters = { nu = 0.5, q = 1.0, count = 8 }
"#;
        let file: SpecFile = toml::from_str(text).unwrap();
        let spec = file.to_spec().unwrap();
        assert_eq!(spec.sign, -1);
        assert_eq!(spec.zeros.len(), 9);
        assert_eq!(spec.atoms.len(), 1);
        let json = serde_json::to_string(&file).unwrap();
        let back: SpecFile = serde_json::from_str(&json).unwrap();
        assert_eq!(back, file);
    }

    #[test]
    fn bad_spec_files() {
        for text in [
            "sign = 2",
            "translation = -1.0",
            "zeros = [{ re = 0.0, im = -1.0 }]",
            "[generator]\nkind = \"nope\"",
            "[generator]\nkind = \"sin_ratio\"\nparameters = { q = 1.0 }",
            "colour = 3",
        ] {
            let parsed: std::result::Result<SpecFile, _> = toml::from_str(text);
            assert!(parsed.map_or(true, |f| f.to_spec().is_err()), "{text}");
        }
    }

    #[test]
    fn pipeline_catalog_classify() {
        let e = lookup("sin_ratio_nu_0.5").unwrap();
        let r = run_pipeline(Some((e.name.into(), e.spec)), &[Task::Classify1d], &Settings::default());
        assert!(r.summary.pass);
        assert_eq!(r.tasks[0].result.as_ref().unwrap()["value"], to_value(&RadiusValue::Exact(0.5)));
    }

    #[test]
    fn request_validation() {
        let req: AnalysisRequest = toml::from_str("tasks = []").unwrap();
        assert!(req.validate().is_err());
        let req: AnalysisRequest =
            toml::from_str("tasks = [{ task = \"estimate\", r_min = 1.0, r_max = 0.5, steps = 4 }]").unwrap();
        assert!(req.validate().is_err());
        let req: AnalysisRequest = toml::from_str("tasks = [{ task = \"classify-2d\", mass = 0.0 }]").unwrap();
        assert!(req.validate().is_err());
        let req: AnalysisRequest = toml::from_str(
            "[spec]\ncatalog = \"identity\"\n[[tasks]]\ntask = \"validate\"\n[[tasks]]\ntask = \"verify\"\nsuite = \"gamma\"",
        )
        .unwrap();
        req.validate().unwrap();
    }

    #[test]
    fn gamma_suite_passes() {
        let (pass, v) = gamma_suite().unwrap();
        assert!(pass, "{v}");
    }
}
