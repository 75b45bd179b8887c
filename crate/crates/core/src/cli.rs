//! Experiment drivers behind the `stiefel-holonomy` binary.
//!
//! Every command produces an [`Outcome`]: a report (JSON or CSV), a one-line
//! summary for stderr, and whether all checks passed. Exit codes are 0 when
//! every check is within tolerance, 1 on a tolerance violation and 2 on bad
//! usage or input.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cmat::{CMatrix, C64, I};
use crate::error::{Error, Result};
use crate::grassmann::{su2_equivariance_residual, t_squaring_residual, SU2Element};
use crate::holonomy::{loop_holonomy, wrap_angle, HolonomyResult};
use crate::lie::{double_bracket_oracle, lemma_coeffs, MTangent};
use crate::sample;
use crate::surfaces::{Classification, LoopSpec, SurfaceKind, SurfaceSpec};
use crate::tolerance::{ToleranceOverride, Tolerances};

/// Errors at or below this level are treated as round-off in convergence studies.
pub const NOISE_FLOOR: f64 = 1e-12;

#[derive(Debug, Parser)]
#[command(
    name = "stiefel-holonomy",
    version,
    about = "Holonomy of horizontal lifts over Grassmannian surfaces"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compare the double-bracket coefficient formula with the direct bracket computation.
    LemmaCheck(LemmaArgs),
    /// Check the SU(2) model identities of ℂP¹ on random quaternions.
    Su2Check(Su2Args),
    /// Classify the 2-plane spanned by X̂ and Ŷ.
    Classify(ClassifyArgs),
    /// Lift loops on a surface and compare the holonomy with the enclosed area.
    Holonomy(HolonomyArgs),
    /// Endpoint error of the lift against a fine reference, and the observed order.
    Convergence(ConvergenceArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SurfaceChoice {
    Complex,
    Flat,
    Custom,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Json,
    Csv,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value = "json")]
    pub output: OutputFormat,
    /// Write the report here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Override a tolerance, e.g. `--tol phase=1e-6`. Repeatable.
    #[arg(long = "tol", value_name = "NAME=VALUE")]
    pub tol: Vec<ToleranceOverride>,
}

impl OutputArgs {
    fn tolerances(&self) -> Result<Tolerances> {
        let mut t = Tolerances::default();
        for ov in &self.tol {
            t.apply(ov)?;
        }
        Ok(t)
    }
}

#[derive(Debug, Args)]
pub struct LemmaArgs {
    #[arg(long, default_value_t = 1)]
    pub n: usize,
    #[arg(long, default_value_t = 1)]
    pub m: usize,
    #[arg(long, default_value_t = 1000)]
    pub trials: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct Su2Args {
    #[arg(long, default_value_t = 1000)]
    pub trials: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct SurfaceArgs {
    #[arg(long, default_value_t = 1)]
    pub n: usize,
    #[arg(long, default_value_t = 1)]
    pub m: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value = "complex")]
    pub surface: SurfaceChoice,
    /// λ in X*X = λIₙ for generated surfaces.
    #[arg(long, default_value_t = 1.0)]
    pub lambda: f64,
    /// Matrix file for X (custom surfaces).
    #[arg(long)]
    pub x: Option<PathBuf>,
    /// Matrix file for Y (custom surfaces).
    #[arg(long)]
    pub y: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ClassifyArgs {
    #[command(flatten)]
    pub surface: SurfaceArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct HolonomyArgs {
    #[command(flatten)]
    pub surface: SurfaceArgs,
    /// Integrator steps for loops that do not set their own.
    #[arg(long, default_value_t = 10_000)]
    pub steps: usize,
    /// JSON array of loops; a built-in set is used when absent.
    #[arg(long)]
    pub loops: Option<PathBuf>,
    /// Write one lift trace CSV per loop into this directory.
    #[arg(long)]
    pub trace_dir: Option<PathBuf>,
    /// Record wall time per loop (makes reports differ between runs).
    #[arg(long)]
    pub timing: bool,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct ConvergenceArgs {
    #[command(flatten)]
    pub surface: SurfaceArgs,
    /// JSON array of loops; the first one is studied. Defaults to the rectangle (0.3, 0.7, 1.1).
    #[arg(long)]
    pub loops: Option<PathBuf>,
    /// Step counts to compare.
    #[arg(long, value_delimiter = ',', default_value = "100,1000,10000")]
    pub levels: Vec<usize>,
    /// Step count of the reference solution.
    #[arg(long, default_value_t = 100_000)]
    pub reference: usize,
    #[command(flatten)]
    pub output: OutputArgs,
}

/// The result of one command.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub report: String,
    pub summary: String,
    pub pass: bool,
}

impl Outcome {
    pub fn exit_code(&self) -> u8 {
        if self.pass {
            0
        } else {
            1
        }
    }
}

/// Exit code for an error: integrator failures are check failures, the rest
/// are usage or input errors.
pub fn error_exit_code(e: &Error) -> u8 {
    match e {
        Error::Integrator(_) | Error::RankDeficient { .. } | Error::Eigen(_) => 1,
        _ => 2,
    }
}

pub fn execute(cli: &Cli) -> Result<Outcome> {
    match &cli.command {
        Command::LemmaCheck(a) => cmd_lemma_check(a),
        Command::Su2Check(a) => cmd_su2_check(a),
        Command::Classify(a) => cmd_classify(a),
        Command::Holonomy(a) => cmd_holonomy(a),
        Command::Convergence(a) => cmd_convergence(a),
    }
}

/// Writes the report to `--out` when given; otherwise returns it for stdout.
pub fn emit(outcome: &Outcome, out: Option<&Path>) -> Result<Option<String>> {
    match out {
        Some(path) => {
            fs::write(path, &outcome.report)?;
            Ok(None)
        }
        None => Ok(Some(outcome.report.clone())),
    }
}

impl Command {
    pub fn out_path(&self) -> Option<&Path> {
        let o = match self {
            Command::LemmaCheck(a) => &a.output,
            Command::Su2Check(a) => &a.output,
            Command::Classify(a) => &a.output,
            Command::Holonomy(a) => &a.output,
            Command::Convergence(a) => &a.output,
        };
        o.out.as_deref()
    }
}

fn num(x: f64) -> String {
    format!("{x:.16e}")
}

fn opt_num(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

fn to_json<T: Serialize>(v: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(v)?;
    s.push('\n');
    Ok(s)
}

/// Renders a header and rows as CSV.
fn csv(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut s = header.join(",");
    s.push('\n');
    for r in rows {
        s.push_str(&r.join(","));
        s.push('\n');
    }
    s
}

#[derive(Debug, Serialize)]
pub struct LemmaSummary {
    pub n: usize,
    pub m: usize,
    pub trials: usize,
    pub seed: u64,
    pub max_rel_error: f64,
    pub tolerance: f64,
    pub pass: bool,
}

/// max over random pairs of ‖Z − Z_oracle‖_F / ‖Z_oracle‖_F.
pub fn lemma_max_error(n: usize, m: usize, trials: usize, seed: u64) -> Result<f64> {
    if n == 0 || n > m {
        return Err(Error::Input(format!("need 1 <= n <= m, got n={n}, m={m}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 0.0f64;
    for _ in 0..trials {
        let x = MTangent::new(sample::cmatrix(&mut rng, m, n))?;
        let y = MTangent::new(sample::cmatrix(&mut rng, m, n))?;
        let z = lemma_coeffs(&x, &y)?;
        let oracle = double_bracket_oracle(&x, &y)?;
        let err =
            z.matrix().dist(oracle.matrix()) / oracle.matrix().norm_fro().max(f64::MIN_POSITIVE);
        worst = worst.max(err);
    }
    Ok(worst)
}

fn cmd_lemma_check(a: &LemmaArgs) -> Result<Outcome> {
    let tol = a.output.tolerances()?;
    let max_rel_error = lemma_max_error(a.n, a.m, a.trials, a.seed)?;
    let s = LemmaSummary {
        n: a.n,
        m: a.m,
        trials: a.trials,
        seed: a.seed,
        max_rel_error,
        tolerance: tol.lemma,
        pass: max_rel_error <= tol.lemma,
    };
    let report = match a.output.output {
        OutputFormat::Json => to_json(&s)?,
        OutputFormat::Csv => csv(
            &[
                "n",
                "m",
                "trials",
                "seed",
                "max_rel_error",
                "tolerance",
                "pass",
            ],
            &[vec![
                s.n.to_string(),
                s.m.to_string(),
                s.trials.to_string(),
                s.seed.to_string(),
                num(s.max_rel_error),
                num(s.tolerance),
                s.pass.to_string(),
            ]],
        ),
    };
    Ok(Outcome {
        report,
        summary: format!(
            "lemma-check n={} m={} trials={}: max relative error {:e} ({})",
            s.n,
            s.m,
            s.trials,
            s.max_rel_error,
            verdict(s.pass)
        ),
        pass: s.pass,
    })
}

fn verdict(pass: bool) -> &'static str {
    if pass {
        "pass"
    } else {
        "FAIL"
    }
}

#[derive(Debug, Serialize)]
pub struct Su2Summary {
    pub trials: usize,
    pub seed: u64,
    pub max_equivariance_residual: f64,
    pub max_t_squaring_residual: f64,
    pub tolerance: f64,
    pub pass: bool,
}

/// Worst residuals of p(wv) = w·p(v)·w̃ and p(t) = t² over random samples.
pub fn su2_max_residuals(trials: usize, seed: u64) -> Result<(f64, f64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut eq, mut sq) = (0.0f64, 0.0f64);
    for _ in 0..trials {
        let w = SU2Element::new(sample::unit_quaternion(&mut rng))?;
        let v = SU2Element::new(sample::unit_quaternion(&mut rng))?;
        eq = eq.max(su2_equivariance_residual(&w, &v));
        let [a, b, _, _] = sample::unit_quaternion(&mut rng);
        sq = sq.max(t_squaring_residual(
            a.abs() * std::f64::consts::FRAC_PI_2,
            b * std::f64::consts::PI,
        ));
    }
    Ok((eq, sq))
}

fn cmd_su2_check(a: &Su2Args) -> Result<Outcome> {
    let tol = a.output.tolerances()?;
    let (eq, sq) = su2_max_residuals(a.trials, a.seed)?;
    let pass = eq <= tol.su2 && sq <= tol.su2;
    let s = Su2Summary {
        trials: a.trials,
        seed: a.seed,
        max_equivariance_residual: eq,
        max_t_squaring_residual: sq,
        tolerance: tol.su2,
        pass,
    };
    let report = match a.output.output {
        OutputFormat::Json => to_json(&s)?,
        OutputFormat::Csv => csv(
            &[
                "trials",
                "seed",
                "max_equivariance_residual",
                "max_t_squaring_residual",
                "tolerance",
                "pass",
            ],
            &[vec![
                s.trials.to_string(),
                s.seed.to_string(),
                num(eq),
                num(sq),
                num(s.tolerance),
                pass.to_string(),
            ]],
        ),
    };
    Ok(Outcome {
        report,
        summary: format!(
            "su2-check trials={}: equivariance {:e}, T-squaring {:e} ({})",
            a.trials,
            eq,
            sq,
            verdict(pass)
        ),
        pass,
    })
}

/// Matrix file layout: `{"rows": r, "cols": c, "data": [[re, im], ...]}`, row-major.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixFile {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<[f64; 2]>,
}

impl MatrixFile {
    pub fn from_matrix(a: &CMatrix) -> Self {
        Self {
            rows: a.rows(),
            cols: a.cols(),
            data: a.row_major().iter().map(|z| [z.re, z.im]).collect(),
        }
    }

    pub fn to_matrix(&self) -> Result<CMatrix> {
        if self.data.len() != self.rows * self.cols {
            return Err(Error::Input(format!(
                "matrix file declares {}x{} but holds {} entries",
                self.rows,
                self.cols,
                self.data.len()
            )));
        }
        CMatrix::new(
            self.rows,
            self.cols,
            self.data.iter().map(|&[re, im]| C64::new(re, im)).collect(),
        )
    }
}

pub fn read_matrix(path: &Path) -> Result<CMatrix> {
    let text = fs::read_to_string(path)
        .map_err(|e| Error::Input(format!("cannot read {}: {e}", path.display())))?;
    let file: MatrixFile = serde_json::from_str(&text)
        .map_err(|e| Error::Input(format!("bad matrix file {}: {e}", path.display())))?;
    file.to_matrix()
}

pub fn read_loops(path: &Path) -> Result<Vec<LoopSpec>> {
    let text = fs::read_to_string(path)
        .map_err(|e| Error::Input(format!("cannot read {}: {e}", path.display())))?;
    let loops: Vec<LoopSpec> = serde_json::from_str(&text)
        .map_err(|e| Error::Input(format!("bad loop file {}: {e}", path.display())))?;
    if loops.is_empty() {
        return Err(Error::Input(format!("{} holds no loops", path.display())));
    }
    Ok(loops)
}

/// The (X, Y) pair selected by the surface flags.
pub fn build_pair(a: &SurfaceArgs) -> Result<(MTangent, MTangent)> {
    if a.surface != SurfaceChoice::Custom {
        if a.n == 0 || a.n > a.m {
            return Err(Error::Input(format!(
                "need 1 <= n <= m, got n={}, m={}",
                a.n, a.m
            )));
        }
        if a.x.is_some() || a.y.is_some() {
            return Err(Error::Input("--x/--y need --surface custom".into()));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
    match a.surface {
        SurfaceChoice::Complex => {
            let x = sample::star_tangent(&mut rng, a.n, a.m, a.lambda)?;
            let y = x.scale(I);
            Ok((x, y))
        }
        SurfaceChoice::Flat => sample::flat_pair(&mut rng, a.n, a.m, a.lambda),
        SurfaceChoice::Custom => {
            let (Some(xp), Some(yp)) = (&a.x, &a.y) else {
                return Err(Error::Input("--surface custom needs --x and --y".into()));
            };
            Ok((
                MTangent::new(read_matrix(xp)?)?,
                MTangent::new(read_matrix(yp)?)?,
            ))
        }
    }
}

#[derive(Debug, Serialize)]
pub struct ClassificationReport {
    pub n: usize,
    pub m: usize,
    pub kind: SurfaceKind,
    pub lambda: f64,
    pub mu: [f64; 2],
    pub eta: Option<f64>,
    pub j_residual: Option<f64>,
}

impl ClassificationReport {
    fn new(x: &MTangent, c: &Classification) -> Self {
        Self {
            n: x.n(),
            m: x.m(),
            kind: c.kind,
            lambda: c.lambda,
            mu: [c.mu.re, c.mu.im],
            eta: c.eta,
            j_residual: c.j_residual,
        }
    }
}

fn cmd_classify(a: &ClassifyArgs) -> Result<Outcome> {
    let tol = a.output.tolerances()?;
    let (x, y) = build_pair(&a.surface)?;
    let c = crate::surfaces::classify_with(&x, &y, &tol)?;
    let r = ClassificationReport::new(&x, &c);
    let report = match a.output.output {
        OutputFormat::Json => to_json(&r)?,
        OutputFormat::Csv => csv(
            &[
                "n",
                "m",
                "kind",
                "lambda",
                "mu_re",
                "mu_im",
                "eta",
                "j_residual",
            ],
            &[vec![
                r.n.to_string(),
                r.m.to_string(),
                r.kind.to_string(),
                num(r.lambda),
                num(r.mu[0]),
                num(r.mu[1]),
                opt_num(r.eta),
                opt_num(r.j_residual),
            ]],
        ),
    };
    let mut summary = format!(
        "classify n={} m={}: {} (λ = {:.6e}, μ = {:.6e} {:+.6e}i",
        r.n, r.m, r.kind, r.lambda, r.mu[0], r.mu[1]
    );
    if let Some(eta) = r.eta {
        let _ = write!(summary, ", η = {eta:.6e}");
    }
    summary.push(')');
    Ok(Outcome {
        report,
        summary,
        pass: true,
    })
}

/// Loops used when no loop file is given.
pub fn default_loops() -> Vec<LoopSpec> {
    vec![
        LoopSpec {
            samples: None,
            ..LoopSpec::rectangle(0.3, 0.7, 1.1, 0.0, 0)
        },
        LoopSpec {
            samples: None,
            ..LoopSpec::rectangle(0.1, 0.5, 2.0, -0.4, 0)
        },
        LoopSpec {
            samples: None,
            ..LoopSpec::circle(0.8, 0.3, 0.25, 0)
        },
    ]
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportRow {
    pub loop_id: usize,
    pub lambda: f64,
    pub mu_re: f64,
    pub mu_im: f64,
    pub classification: SurfaceKind,
    pub area: f64,
    pub theta: f64,
    /// ½·area − θ reduced to (−π, π].
    pub half_area_minus_theta: f64,
    pub scalar_residual: f64,
    /// ‖V − Iₙ‖_F.
    pub identity_residual: f64,
    pub max_drift: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_time_s: Option<f64>,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HolonomySummary {
    pub classification: SurfaceKind,
    pub loops: usize,
    /// max |½·area − θ| mod 2π (complex surfaces).
    pub max_phase_defect: Option<f64>,
    /// max ‖V − I‖_F (flat surfaces).
    pub max_identity_residual: Option<f64>,
    pub max_scalar_residual: f64,
    pub max_drift: f64,
    pub pass: bool,
}

#[derive(Debug, Serialize)]
struct HolonomyConfigEcho {
    n: usize,
    m: usize,
    seed: u64,
    surface: SurfaceChoice,
    lambda: f64,
    steps: usize,
    tolerances: Tolerances,
}

#[derive(Debug, Serialize)]
struct HolonomyReport<'a> {
    config: HolonomyConfigEcho,
    classification: ClassificationReport,
    rows: &'a [ReportRow],
    summary: &'a HolonomySummary,
}

/// Pass criterion for one loop on a surface of the given kind.
pub fn loop_passes(kind: SurfaceKind, n: usize, res: &HolonomyResult, tol: &Tolerances) -> bool {
    let healthy = res.max_drift <= tol.drift;
    healthy
        && match kind {
            SurfaceKind::Complex => {
                res.phase_defect().is_some_and(|d| d.abs() <= tol.phase)
                    && res.scalar_residual <= tol.scalar * n as f64
            }
            SurfaceKind::Flat => res.identity_residual() <= tol.flat,
            // No law is asserted off totally geodesic surfaces.
            SurfaceKind::NotTotallyGeodesic => true,
        }
}

fn row_of(
    id: usize,
    spec: &SurfaceSpec,
    res: &HolonomyResult,
    tol: &Tolerances,
    wall: Option<f64>,
) -> ReportRow {
    let area = res.area.unwrap_or(f64::NAN);
    ReportRow {
        loop_id: id,
        lambda: spec.lambda(),
        mu_re: spec.mu().re,
        mu_im: spec.mu().im,
        classification: spec.kind(),
        area,
        theta: res.theta,
        half_area_minus_theta: wrap_angle(0.5 * area - res.theta),
        scalar_residual: res.scalar_residual,
        identity_residual: res.identity_residual(),
        max_drift: res.max_drift,
        wall_time_s: wall,
        pass: loop_passes(spec.kind(), spec.n(), res, tol),
    }
}

fn summarize(kind: SurfaceKind, rows: &[ReportRow]) -> HolonomySummary {
    let max = |f: fn(&ReportRow) -> f64| rows.iter().map(f).fold(0.0, f64::max);
    HolonomySummary {
        classification: kind,
        loops: rows.len(),
        max_phase_defect: (kind == SurfaceKind::Complex)
            .then(|| max(|r| r.half_area_minus_theta.abs())),
        max_identity_residual: (kind == SurfaceKind::Flat).then(|| max(|r| r.identity_residual)),
        max_scalar_residual: max(|r| r.scalar_residual),
        max_drift: max(|r| r.max_drift),
        pass: rows.iter().all(|r| r.pass),
    }
}

fn rows_csv(rows: &[ReportRow], timing: bool) -> String {
    let mut header = vec![
        "loop_id",
        "lambda",
        "mu_re",
        "mu_im",
        "classification",
        "area",
        "theta",
        "half_area_minus_theta",
        "scalar_residual",
        "identity_residual",
        "max_drift",
    ];
    if timing {
        header.push("wall_time_s");
    }
    header.push("pass");
    let body: Vec<Vec<String>> = rows
        .iter()
        .map(|r| {
            let mut v = vec![
                r.loop_id.to_string(),
                num(r.lambda),
                num(r.mu_re),
                num(r.mu_im),
                r.classification.to_string(),
                num(r.area),
                num(r.theta),
                num(r.half_area_minus_theta),
                num(r.scalar_residual),
                num(r.identity_residual),
                num(r.max_drift),
            ];
            if timing {
                v.push(opt_num(r.wall_time_s));
            }
            v.push(r.pass.to_string());
            v
        })
        .collect();
    csv(&header, &body)
}

fn check_steps(steps: usize) -> Result<()> {
    if steps < 100 {
        return Err(Error::Input(format!(
            "steps must be at least 100, got {steps}"
        )));
    }
    Ok(())
}

fn cmd_holonomy(a: &HolonomyArgs) -> Result<Outcome> {
    let tol = a.output.tolerances()?;
    check_steps(a.steps)?;
    let (x, y) = build_pair(&a.surface)?;
    let spec = SurfaceSpec::with_tolerances(x.clone(), y, &tol)?;
    let loops: Vec<LoopSpec> = match &a.loops {
        Some(p) => read_loops(p)?,
        None => default_loops(),
    }
    .iter()
    .map(|l| l.with_default_steps(a.steps))
    .collect();
    for l in &loops {
        l.validate()?;
        check_steps(l.steps())?;
    }
    if let Some(dir) = &a.trace_dir {
        fs::create_dir_all(dir)?;
    }

    let rows = loops
        .par_iter()
        .enumerate()
        .map(|(id, lp)| {
            let clock = Instant::now();
            let (res, lift) = loop_holonomy(&spec, lp)?;
            let wall = a.timing.then(|| clock.elapsed().as_secs_f64());
            if let Some(dir) = &a.trace_dir {
                let file = fs::File::create(dir.join(format!("loop_{id}.csv")))?;
                lift.trace().write_csv(std::io::BufWriter::new(file))?;
            }
            Ok(row_of(id, &spec, &res, &tol, wall))
        })
        .collect::<Result<Vec<_>>>()?;

    let summary = summarize(spec.kind(), &rows);
    let report = match a.output.output {
        OutputFormat::Json => to_json(&HolonomyReport {
            config: HolonomyConfigEcho {
                n: a.surface.n,
                m: a.surface.m,
                seed: a.surface.seed,
                surface: a.surface.surface,
                lambda: a.surface.lambda,
                steps: a.steps,
                tolerances: tol,
            },
            classification: ClassificationReport::new(&x, spec.classification()),
            rows: &rows,
            summary: &summary,
        })?,
        OutputFormat::Csv => rows_csv(&rows, a.timing),
    };
    let detail = match spec.kind() {
        SurfaceKind::Complex => format!(
            "max |½·area − θ| mod 2π = {:e}",
            summary.max_phase_defect.unwrap_or(0.0)
        ),
        SurfaceKind::Flat => format!(
            "max ‖V − I‖_F = {:e}",
            summary.max_identity_residual.unwrap_or(0.0)
        ),
        SurfaceKind::NotTotallyGeodesic => "no holonomy law applies".to_string(),
    };
    Ok(Outcome {
        report,
        summary: format!(
            "holonomy {} surface, {} loops: {detail}, max drift {:e} ({})",
            spec.kind(),
            rows.len(),
            summary.max_drift,
            verdict(summary.pass)
        ),
        pass: summary.pass,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceRow {
    pub steps: usize,
    /// ‖V_N − V_ref‖_F.
    pub error: f64,
    /// log(e_prev / e) / log(N / N_prev), when both errors clear the noise floor.
    pub order: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceReport {
    pub reference_steps: usize,
    pub rows: Vec<ConvergenceRow>,
    /// The order from the finest pair of levels above the noise floor.
    pub observed_order: Option<f64>,
    pub pass: bool,
}

/// Endpoint errors of the lift of `lp` against an N = `reference` solution.
pub fn convergence_study(
    spec: &SurfaceSpec,
    lp: &LoopSpec,
    levels: &[usize],
    reference: usize,
) -> Result<ConvergenceReport> {
    let (reference_res, _) = loop_holonomy(spec, &lp.with_steps(reference))?;
    let results = levels
        .par_iter()
        .map(|&n| Ok(loop_holonomy(spec, &lp.with_steps(n))?.0))
        .collect::<Result<Vec<_>>>()?;
    let mut rows: Vec<ConvergenceRow> = Vec::with_capacity(levels.len());
    for (&n, res) in levels.iter().zip(&results) {
        let error = res.v.matrix().dist(reference_res.v.matrix());
        let order = rows.last().and_then(|prev| {
            (prev.error > NOISE_FLOOR && error > NOISE_FLOOR)
                .then(|| (prev.error / error).ln() / (n as f64 / prev.steps as f64).ln())
        });
        rows.push(ConvergenceRow {
            steps: n,
            error,
            order,
        });
    }
    let observed_order = rows.iter().rev().find_map(|r| r.order);
    let pass = observed_order.is_some_and(|o| (3.5..=4.5).contains(&o));
    Ok(ConvergenceReport {
        reference_steps: reference,
        rows,
        observed_order,
        pass,
    })
}

fn cmd_convergence(a: &ConvergenceArgs) -> Result<Outcome> {
    let tol = a.output.tolerances()?;
    if a.levels.is_empty() {
        return Err(Error::Input(
            "--levels needs at least one step count".into(),
        ));
    }
    for &n in a.levels.iter().chain([&a.reference]) {
        check_steps(n)?;
    }
    if a.levels.windows(2).any(|w| w[1] <= w[0]) || a.levels.iter().any(|&n| n >= a.reference) {
        return Err(Error::Input(
            "--levels must increase and stay below --reference".into(),
        ));
    }
    let (x, y) = build_pair(&a.surface)?;
    let spec = SurfaceSpec::with_tolerances(x, y, &tol)?;
    let lp = match &a.loops {
        Some(p) => read_loops(p)?.remove(0),
        None => default_loops().remove(0),
    };
    if matches!(lp.shape, crate::surfaces::LoopShape::Chart { .. }) {
        return Err(Error::Input(
            "convergence needs a rectangle or circle loop (chart loops fix their own step count)"
                .into(),
        ));
    }
    let r = convergence_study(&spec, &lp, &a.levels, a.reference)?;
    let report = match a.output.output {
        OutputFormat::Json => to_json(&r)?,
        OutputFormat::Csv => csv(
            &["steps", "error", "order"],
            &r.rows
                .iter()
                .map(|row| vec![row.steps.to_string(), num(row.error), opt_num(row.order)])
                .collect::<Vec<_>>(),
        ),
    };
    let order = r
        .observed_order
        .map_or_else(|| "undetermined".to_string(), |o| format!("{o:.3}"));
    Ok(Outcome {
        report,
        summary: format!(
            "convergence against N = {}: observed order {order} ({})",
            r.reference_steps,
            verdict(r.pass)
        ),
        pass: r.pass,
    })
}
