//! Command-line front end: matrix ingestion, configuration, dispatch and JSON
//! output.
//!
//! All indices in the output are 0-based rows of the input file. Zero rows
//! are dropped before any computation, listed under
//! `input.dropped_zero_rows`, and get zero coefficients and weights.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, ValueEnum};
use nalgebra::DMatrix;
use serde::Serialize;

use crate::engine::Pivot;
use crate::error::{Error, Result};
use crate::experiments::{
    brute_force_max_det, cauchy_binet_sum, ensemble_report, sign_ensemble, EnsembleReport,
};
use crate::mvee::{
    default_max_iter, khachiyan_mvee, mvee_coreset_with, verify_coreset, CoresetParams,
    EllipsoidResult,
};
use crate::points::{gram_sum, preprocess, PointSet};
use crate::spanner::{build_spanner_with, SpannerParams};

pub const SCHEMA_VERSION: u32 = 1;

/// Exit code for input and configuration errors.
pub const EXIT_INPUT_ERROR: i32 = 1;
/// Exit code when a computed certificate fails its independent re-check.
pub const EXIT_VERIFICATION_FAILED: i32 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    /// ℓp volumetric spanner with coefficient certificate
    Spanner,
    /// MVEE coreset, verified against the full problem
    Coreset,
    /// Minimum volume enclosing ellipsoid of the input
    Mvee,
    /// Coherence and ℓ1 lower-bound certificates
    Lowerbound,
    /// Brute-force determinant maximization
    Oracle,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ModeArg {
    /// no repetitions
    Nr,
    /// repetitions allowed
    R,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum PivotArg {
    First,
    Best,
}

impl From<PivotArg> for Pivot {
    fn from(p: PivotArg) -> Self {
        match p {
            PivotArg::First => Pivot::FirstImproving,
            PivotArg::Best => Pivot::BestImproving,
        }
    }
}

#[derive(Debug, Clone, Parser)]
#[command(
    name = "spanvol",
    version,
    about = "Volumetric spanners and MVEE coresets by local search"
)]
pub struct RunConfig {
    #[arg(value_enum)]
    pub command: Command,

    /// Input matrix: one point per row, comma or whitespace separated, `#` comments
    #[arg(short, long)]
    pub input: Option<PathBuf>,

    /// Output JSON path (stdout when omitted)
    #[arg(short, long)]
    pub output: Option<PathBuf>,

    /// Norm exponent for `spanner`
    #[arg(long, default_value_t = 2.0)]
    pub p: f64,

    /// Coreset accuracy for `coreset`
    #[arg(long, default_value_t = 0.5)]
    pub epsilon: f64,

    /// Override the selection size
    #[arg(long)]
    pub r: Option<usize>,

    /// Override the improvement threshold
    #[arg(long)]
    pub delta: Option<f64>,

    /// Search mode (spanner uses nr, coreset uses r)
    #[arg(long, value_enum)]
    pub mode: Option<ModeArg>,

    #[arg(long, value_enum, default_value_t = PivotArg::First)]
    pub pivot: PivotArg,

    /// Seed for `lowerbound` ensembles
    #[arg(long, default_value_t = 0)]
    pub seed: u64,

    /// Ensemble size for `lowerbound` without an input file
    #[arg(long, default_value_t = 1000)]
    pub n: usize,

    /// Ensemble dimension for `lowerbound` without an input file
    #[arg(long, default_value_t = 100)]
    pub d: usize,

    /// Subset size for `oracle` (defaults to the working dimension)
    #[arg(long)]
    pub k: Option<usize>,

    /// Relative singular-value threshold for the numerical rank
    #[arg(long)]
    pub rank_tol: Option<f64>,

    /// MVEE solver tolerance
    #[arg(long, default_value_t = crate::mvee::DEFAULT_SOLVER_TOL)]
    pub solver_tol: f64,

    /// MVEE solver iteration limit
    #[arg(long)]
    pub max_iter: Option<usize>,

    /// Treat the input as X ∪ −X (always the case for origin-centred ellipsoids)
    #[arg(long)]
    pub symmetrize: bool,

    /// Worker threads
    #[arg(long, env = "SPANVOL_THREADS")]
    pub threads: Option<usize>,
}

impl RunConfig {
    /// Configuration for `command` with every flag at its default.
    pub fn new(command: Command) -> Self {
        RunConfig {
            command,
            input: None,
            output: None,
            p: 2.0,
            epsilon: 0.5,
            r: None,
            delta: None,
            mode: None,
            pivot: PivotArg::First,
            seed: 0,
            n: 1000,
            d: 100,
            k: None,
            rank_tol: None,
            solver_tol: crate::mvee::DEFAULT_SOLVER_TOL,
            max_iter: None,
            symmetrize: false,
            threads: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidConfig(msg));
        if self.input.is_none() && self.command != Command::Lowerbound {
            return bad(format!("{:?} needs --input", self.command).to_lowercase());
        }
        match (self.command, self.mode) {
            (Command::Spanner, Some(ModeArg::R)) => {
                return bad("spanner runs without repetitions (--mode nr)".into())
            }
            (Command::Coreset, Some(ModeArg::Nr)) => {
                return bad("coreset runs with repetitions (--mode r)".into())
            }
            _ => {}
        }
        if !(self.p >= 1.0) || self.p.is_nan() {
            return bad(format!("--p must be at least 1, got {}", self.p));
        }
        if !(self.epsilon > 0.0 && self.epsilon.is_finite()) {
            return bad(format!("--epsilon must be positive, got {}", self.epsilon));
        }
        if let Some(delta) = self.delta {
            if !(delta > 0.0 && delta.is_finite()) {
                return bad(format!("--delta must be positive, got {delta}"));
            }
        }
        if !(self.solver_tol > 0.0) {
            return bad(format!(
                "--solver-tol must be positive, got {}",
                self.solver_tol
            ));
        }
        if let Some(t) = self.rank_tol {
            if !(t > 0.0 && t < 1.0) {
                return bad(format!("--rank-tol must lie in (0, 1), got {t}"));
            }
        }
        if self.threads == Some(0) {
            return bad("--threads must be at least 1".into());
        }
        if self.command == Command::Lowerbound && self.input.is_none() && (self.n < 2 || self.d < 1)
        {
            return bad("lowerbound ensembles need --n >= 2 and --d >= 1".into());
        }
        Ok(())
    }
}

/// Parse a numeric matrix: one row per line, entries separated by commas
/// and/or whitespace. Blank lines and lines starting with `#` are skipped.
pub fn parse_matrix_str(text: &str) -> Result<DMatrix<f64>> {
    let mut values = Vec::new();
    let mut width: Option<usize> = None;
    let mut rows = 0;
    for (idx, line) in text.lines().enumerate() {
        let line_no = idx + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let mut count = 0;
        for token in trimmed
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|t| !t.is_empty())
        {
            let v: f64 = token.parse().map_err(|_| Error::Parse {
                line: line_no,
                msg: format!("not a number: {token:?}"),
            })?;
            values.push(v);
            count += 1;
        }
        match width {
            None => width = Some(count),
            Some(w) if w != count => {
                return Err(Error::RaggedRows {
                    line: line_no,
                    expected: w,
                    found: count,
                })
            }
            _ => {}
        }
        rows += 1;
    }
    let width = width.ok_or(Error::Parse {
        line: 0,
        msg: "no data rows".into(),
    })?;
    Ok(DMatrix::from_row_slice(rows, width, &values))
}

pub fn parse_matrix(path: &Path) -> Result<DMatrix<f64>> {
    parse_matrix_str(&fs::read_to_string(path)?)
}

/// Writes every `f64` with 17 significant digits.
struct SigFigFormatter;

impl serde_json::ser::Formatter for SigFigFormatter {
    fn write_f64<W: ?Sized + Write>(&mut self, writer: &mut W, value: f64) -> std::io::Result<()> {
        write!(writer, "{value:.16e}")
    }

    fn write_f32<W: ?Sized + Write>(&mut self, writer: &mut W, value: f32) -> std::io::Result<()> {
        self.write_f64(writer, value as f64)
    }
}

pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, SigFigFormatter);
    value.serialize(&mut ser)?;
    buf.push(b'\n');
    Ok(String::from_utf8(buf).expect("serde_json writes UTF-8"))
}

fn rows_of(m: &DMatrix<f64>) -> Vec<Vec<f64>> {
    m.row_iter().map(|r| r.iter().cloned().collect()).collect()
}

/// Serializes `f64::NEG_INFINITY` and friends as `null`.
fn finite_or_null<S: serde::Serializer>(v: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    if v.is_finite() {
        s.serialize_f64(*v)
    } else {
        s.serialize_none()
    }
}

#[derive(Debug, Serialize)]
pub struct InputSummary {
    pub n: usize,
    pub d: usize,
    pub effective_rank: usize,
    pub dropped_zero_rows: Vec<usize>,
}

#[derive(Debug, Default, Serialize)]
pub struct Params {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mode: Option<ModeArg>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pivot: Option<PivotArg>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub solver_tol: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_iter: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rank_tol: Option<f64>,
    pub symmetrize: bool,
}

#[derive(Debug, Serialize)]
pub struct SpannerOutput {
    pub subset: Vec<usize>,
    pub norms: Vec<f64>,
    /// Row `j` holds the coefficients of input row `j` over `subset`.
    pub coefficients: Vec<Vec<f64>>,
    pub c_achieved: f64,
    pub c_unselected: f64,
    pub c_guaranteed: f64,
    pub max_residual: f64,
    pub final_max_tau: f64,
    pub tau_bound: f64,
    pub trivial: bool,
}

#[derive(Debug, Serialize)]
pub struct CoresetGaps {
    pub neg_logdet_x: f64,
    pub neg_logdet_t: f64,
    pub gap: f64,
    pub allowed_gap: f64,
    pub tolerance: f64,
    pub scaled_feasibility: f64,
    pub leverage_route_max: f64,
    pub leverage_route_limit: f64,
    pub passed: bool,
}

#[derive(Debug, Serialize)]
pub struct CoresetOutput {
    pub support: Vec<usize>,
    /// Multiplicity per input row.
    pub counts: Vec<usize>,
    pub r: usize,
    pub delta: f64,
    pub final_max_tau: f64,
    pub tau_bound: f64,
    pub verification: Option<CoresetGaps>,
}

#[derive(Debug, Serialize)]
pub struct MveeOutput {
    /// Ambient-coordinate shape matrix, row-major.
    pub h: Vec<Vec<f64>>,
    pub neg_logdet: f64,
    /// Weight per input row.
    pub lambda: Vec<f64>,
    pub max_violation: f64,
    #[serde(serialize_with = "finite_or_null")]
    pub dual_bound: f64,
    pub certified: bool,
}

#[derive(Debug, Serialize)]
pub struct CauchyBinetCheck {
    pub gram_det: f64,
    pub subset_sum: f64,
}

#[derive(Debug, Serialize)]
pub struct OracleOutput {
    pub subset: Vec<usize>,
    pub det: f64,
    pub cauchy_binet: Option<CauchyBinetCheck>,
}

#[derive(Debug, Serialize)]
#[serde(untagged)]
pub enum RunResult {
    Spanner(SpannerOutput),
    Coreset(CoresetOutput),
    Mvee(MveeOutput),
    Lowerbound(EnsembleReport),
    Oracle(OracleOutput),
}

#[derive(Debug, Serialize)]
pub struct Trace {
    pub iterations: usize,
    pub logdet_trace_len: usize,
    pub wall_time_ms: u64,
}

#[derive(Debug, Serialize)]
pub struct Document {
    pub schema_version: u32,
    pub command: Command,
    pub input: InputSummary,
    pub params: Params,
    pub result: RunResult,
    pub trace: Trace,
}

/// The output document together with the outcome of its re-verification.
#[derive(Debug)]
pub struct Outcome {
    pub document: Document,
    pub failure: Option<String>,
}

fn load_points(cfg: &RunConfig) -> Result<PointSet> {
    match &cfg.input {
        Some(path) => preprocess(&parse_matrix(path)?, cfg.rank_tol),
        None => sign_ensemble(cfg.n, cfg.d, cfg.seed),
    }
}

/// Spread per-working-point values over input rows, zero for dropped rows.
fn to_rows<T: Copy + Default>(points: &PointSet, values: &[T]) -> Vec<T> {
    let mut out = vec![T::default(); points.raw_len()];
    for (i, &v) in values.iter().enumerate() {
        out[points.source_index(i)] = v;
    }
    out
}

fn to_sources(points: &PointSet, idx: &[usize]) -> Vec<usize> {
    idx.iter().map(|&i| points.source_index(i)).collect()
}

fn ambient_h(points: &PointSet, h: &DMatrix<f64>) -> DMatrix<f64> {
    match points.span_basis() {
        Some(b) => b * h * b.transpose(),
        None => h.clone(),
    }
}

/// Run the configured computation and re-verify its certificate.
pub fn execute(cfg: &RunConfig) -> Result<Outcome> {
    cfg.validate()?;
    let start = Instant::now();
    let points = load_points(cfg)?;
    let d = points.dim();
    let mut params = Params {
        symmetrize: cfg.symmetrize,
        rank_tol: cfg.rank_tol,
        ..Params::default()
    };
    let mut failure = None;
    let mut iterations = 0;
    let mut trace_len = 0;

    let result = match cfg.command {
        Command::Spanner => {
            let sp = SpannerParams {
                p: cfg.p,
                r: cfg.r,
                delta: cfg.delta,
                pivot: cfg.pivot.into(),
            };
            let cert = build_spanner_with(&points, &sp)?;
            if let Err(e) = cert.verify(&points) {
                failure = Some(e.to_string());
            }
            params.p = Some(cfg.p);
            params.r = Some(cert.r);
            params.delta = Some(cert.delta);
            params.mode = Some(ModeArg::Nr);
            params.pivot = Some(cfg.pivot);
            iterations = cert.iterations;
            trace_len = cert.logdet_trace.len();
            let mut coefficients = vec![vec![0.0; cert.subset.len()]; points.raw_len()];
            for (j, a) in cert.coefficients.iter().enumerate() {
                coefficients[points.source_index(j)] = a.iter().cloned().collect();
            }
            RunResult::Spanner(SpannerOutput {
                subset: to_sources(&points, &cert.subset),
                norms: to_rows(&points, &cert.norms),
                coefficients,
                c_achieved: cert.c_achieved,
                c_unselected: cert.c_unselected,
                c_guaranteed: cert.c_guaranteed,
                max_residual: cert.max_residual,
                final_max_tau: cert.final_max_tau,
                tau_bound: cert.tau_bound,
                trivial: cert.trivial,
            })
        }
        Command::Coreset => {
            let cp = CoresetParams {
                epsilon: cfg.epsilon,
                r: cfg.r,
                delta: cfg.delta,
                pivot: cfg.pivot.into(),
            };
            let coreset = mvee_coreset_with(&points, &cp)?;
            params.epsilon = Some(cfg.epsilon);
            params.r = Some(coreset.r);
            params.delta = Some(coreset.delta);
            params.mode = Some(ModeArg::R);
            params.pivot = Some(cfg.pivot);
            params.solver_tol = Some(cfg.solver_tol);
            iterations = coreset.iterations;
            trace_len = coreset.logdet_trace.len();
            if !(coreset.final_max_tau < coreset.tau_bound + 1e-10) {
                failure = Some(format!(
                    "candidate leverage {} exceeds bound {}",
                    coreset.final_max_tau, coreset.tau_bound
                ));
            } else if !(coreset.leverage_route_max < coreset.leverage_route_limit + 1e-8) {
                failure = Some(format!(
                    "coreset ellipsoid leverage {} exceeds {}",
                    coreset.leverage_route_max, coreset.leverage_route_limit
                ));
            }
            let verification = match verify_coreset(&points, &coreset, cfg.epsilon, cfg.solver_tol)
            {
                Ok(v) => Some(CoresetGaps {
                    neg_logdet_x: v.neg_logdet_x,
                    neg_logdet_t: v.neg_logdet_t,
                    gap: v.gap,
                    allowed_gap: v.allowed_gap,
                    tolerance: v.tolerance,
                    scaled_feasibility: v.scaled_feasibility,
                    leverage_route_max: coreset.leverage_route_max,
                    leverage_route_limit: coreset.leverage_route_limit,
                    passed: v.passed,
                }),
                Err(e @ (Error::VerificationFailed(_) | Error::MaxIterExceeded { .. })) => {
                    failure.get_or_insert(e.to_string());
                    None
                }
                Err(e) => return Err(e),
            };
            RunResult::Coreset(CoresetOutput {
                support: to_sources(&points, &coreset.support),
                counts: to_rows(&points, &coreset.counts),
                r: coreset.r,
                delta: coreset.delta,
                final_max_tau: coreset.final_max_tau,
                tau_bound: coreset.tau_bound,
                verification,
            })
        }
        Command::Mvee => {
            let max_iter = cfg
                .max_iter
                .unwrap_or_else(|| default_max_iter(d, points.len(), cfg.solver_tol));
            params.solver_tol = Some(cfg.solver_tol);
            params.max_iter = Some(max_iter);
            let e: EllipsoidResult = match khachiyan_mvee(&points, cfg.solver_tol, max_iter) {
                Ok(e) => e,
                Err(Error::MaxIterExceeded { iterations, best }) => {
                    failure = Some(format!(
                        "solver did not certify within {iterations} iterations"
                    ));
                    *best
                }
                Err(e) => return Err(e),
            };
            iterations = e.iterations;
            let df = d as f64;
            if failure.is_none() {
                if !(e.max_violation <= df * 1e-9) {
                    failure = Some(format!(
                        "ellipsoid violates a constraint by {}",
                        e.max_violation
                    ));
                } else if !(e.neg_logdet - e.dual_bound <= df * cfg.solver_tol.ln_1p() + 1e-9) {
                    failure = Some(format!(
                        "duality gap {} exceeds d ln(1 + tol)",
                        e.neg_logdet - e.dual_bound
                    ));
                }
            }
            RunResult::Mvee(MveeOutput {
                h: rows_of(&ambient_h(&points, &e.h)),
                neg_logdet: e.neg_logdet,
                lambda: to_rows(&points, &e.lambda),
                max_violation: e.max_violation,
                dual_bound: e.dual_bound,
                certified: e.certified,
            })
        }
        Command::Lowerbound => {
            params.seed = Some(cfg.seed);
            let report = ensemble_report(&points, cfg.seed);
            if cfg.input.is_none() && !(report.max_norm_error <= 1e-12) {
                failure = Some(format!(
                    "ensemble rows deviate from unit norm by {}",
                    report.max_norm_error
                ));
            }
            RunResult::Lowerbound(report)
        }
        Command::Oracle => {
            let k = cfg.k.unwrap_or(d);
            params.k = Some(k);
            let (subset, det) = brute_force_max_det(&points, k)?;
            let cauchy_binet = if k == d {
                let gram_det = gram_sum(&points, &vec![1; points.len()])?.determinant();
                let subset_sum = cauchy_binet_sum(&points)?;
                if !((gram_det - subset_sum).abs() <= 1e-8 * gram_det.abs().max(1e-300)) {
                    failure = Some(format!(
                        "Cauchy-Binet mismatch: det {gram_det} vs subset sum {subset_sum}"
                    ));
                }
                Some(CauchyBinetCheck {
                    gram_det,
                    subset_sum,
                })
            } else {
                None
            };
            RunResult::Oracle(OracleOutput {
                subset: to_sources(&points, &subset),
                det,
                cauchy_binet,
            })
        }
    };

    let document = Document {
        schema_version: SCHEMA_VERSION,
        command: cfg.command,
        input: InputSummary {
            n: points.raw_len(),
            d: points.ambient_dim(),
            effective_rank: points.effective_rank(),
            dropped_zero_rows: points.dropped_rows().to_vec(),
        },
        params,
        result,
        trace: Trace {
            iterations,
            logdet_trace_len: trace_len,
            wall_time_ms: start.elapsed().as_millis() as u64,
        },
    };
    Ok(Outcome { document, failure })
}

fn emit(cfg: &RunConfig, json: &str) -> Result<()> {
    match &cfg.output {
        Some(path) => fs::write(path, json)?,
        None => std::io::stdout().write_all(json.as_bytes())?,
    }
    Ok(())
}

/// Execute `cfg`, write the JSON document and return the process exit code:
/// 0 on success, 2 when a certificate fails re-verification, 1 on input or
/// configuration errors.
pub fn run(cfg: &RunConfig) -> i32 {
    let work = || -> Result<i32> {
        let outcome = execute(cfg)?;
        emit(cfg, &to_json(&outcome.document)?)?;
        Ok(match outcome.failure {
            None => 0,
            Some(msg) => {
                eprintln!("spanvol: verification failed: {msg}");
                EXIT_VERIFICATION_FAILED
            }
        })
    };
    let result = match cfg.threads {
        Some(t) if t > 0 => match rayon::ThreadPoolBuilder::new().num_threads(t).build() {
            Ok(pool) => pool.install(work),
            Err(e) => {
                eprintln!("spanvol: {e}");
                return EXIT_INPUT_ERROR;
            }
        },
        _ => work(),
    };
    result.unwrap_or_else(|e| {
        eprintln!("spanvol: {e}");
        match e {
            Error::VerificationFailed(_) => EXIT_VERIFICATION_FAILED,
            _ => EXIT_INPUT_ERROR,
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_examples() {
        let m = parse_matrix_str("1,0\n0,1\n").unwrap();
        assert_eq!(m, DMatrix::identity(2, 2));

        let m = parse_matrix_str("1 0\n0 1\n# note\n1 1\n").unwrap();
        assert_eq!(m.shape(), (3, 2));
        assert_eq!(m.row(2).iter().cloned().collect::<Vec<_>>(), vec![1.0, 1.0]);

        assert!(matches!(
            parse_matrix_str("1,0\n0\n"),
            Err(Error::RaggedRows {
                line: 2,
                expected: 2,
                found: 1
            })
        ));
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(
            parse_matrix_str("1,x\n"),
            Err(Error::Parse { line: 1, .. })
        ));
        assert!(matches!(
            parse_matrix_str("# only\n\n"),
            Err(Error::Parse { .. })
        ));
        let m = parse_matrix_str("  1.5 ,\t-2e-3\n\n3 4\n").unwrap();
        assert_eq!(m[(0, 1)], -2e-3);
    }

    #[test]
    fn floats_have_seventeen_digits() {
        let s = to_json(&vec![0.1f64, 1.0, -2.5e-300]).unwrap();
        assert_eq!(
            s,
            "[1.0000000000000001e-1,1.0000000000000000e0,-2.5000000000000000e-300]\n"
        );
        let back: Vec<f64> = serde_json::from_str(&s).unwrap();
        assert_eq!(back, vec![0.1, 1.0, -2.5e-300]);
    }

    #[test]
    fn config_validation() {
        let mut cfg = RunConfig::new(Command::Spanner);
        assert!(cfg.validate().is_err());
        cfg.input = Some("x.csv".into());
        cfg.validate().unwrap();
        cfg.mode = Some(ModeArg::R);
        assert!(cfg.validate().is_err());
        cfg.mode = None;
        cfg.p = 0.5;
        assert!(cfg.validate().is_err());

        let mut cfg = RunConfig::new(Command::Coreset);
        cfg.input = Some("x.csv".into());
        cfg.epsilon = 0.0;
        assert!(cfg.validate().is_err());

        RunConfig::new(Command::Lowerbound).validate().unwrap();
    }

    #[test]
    fn parses_command_line() {
        let cfg =
            RunConfig::try_parse_from(["spanvol", "coreset", "--input", "a.csv", "--epsilon", "1"])
                .unwrap();
        assert_eq!(cfg.command, Command::Coreset);
        assert_eq!(cfg.epsilon, 1.0);
        assert!(RunConfig::try_parse_from(["spanvol", "nope"]).is_err());
    }
}
