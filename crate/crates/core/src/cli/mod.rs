//! The `loginf` command-line front-end.
//!
//! Exit codes are the machine contract: 0 success/true, 1 property false or
//! verification failed, 2 parse/validation error, 3 partition cap exceeded,
//! 4 dimension mismatch, 5 the two logic-order tests disagree.

pub mod config;
pub mod files;

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::error::Error;
use crate::infimum::{Branch, InfimumMeasure, InfimumResult};
use crate::linalg::HermitianOperator;
use crate::oracle::{sample, undominated_rank_one, verify_infimum, Check};
use crate::order::compare;
use crate::spectral::BorelDescriptor;
use config::{ConfigOverrides, RunConfig};
use files::{AtomFile, MeasureFile, OperatorFile, OrderFile, ResultFile};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FALSE: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_CAP: i32 = 3;
pub const EXIT_DIM: i32 = 4;
pub const EXIT_DISAGREE: i32 = 5;

#[derive(Debug, Parser)]
#[command(name = "loginf", version, about = "Logic-order infima of Hermitian operators")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compute the infimum of the operators in the given files.
    Inf {
        #[arg(required = true)]
        inputs: Vec<PathBuf>,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Decide A ≤ B and A ⪯ B.
    Check {
        a: PathBuf,
        b: PathBuf,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Evaluate the infimum measure G on a set given as finite{..} or cofinite{..}.
    Measure {
        #[arg(long = "set", value_name = "SET")]
        set_spec: String,
        #[arg(required = true)]
        inputs: Vec<PathBuf>,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Compute the infimum and check its defining properties.
    Verify {
        #[arg(required = true)]
        inputs: Vec<PathBuf>,
        #[command(flatten)]
        common: CommonArgs,
        /// Add ε·P (P a random rank-1 projection) to the candidate before verifying.
        #[arg(long, hide = true, value_name = "EPS")]
        inject_perturbation: Option<f64>,
    },
}

#[derive(Debug, Args, Default)]
pub struct CommonArgs {
    /// JSON config file; flags take precedence over it.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub tol_eig: Option<f64>,
    #[arg(long)]
    pub tol_rank: Option<f64>,
    #[arg(long)]
    pub tol_zero: Option<f64>,
    /// auto, singleton or exhaustive.
    #[arg(long)]
    pub mode: Option<String>,
    #[arg(long)]
    pub partition_cap: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub trials: Option<u32>,
    /// Machine-readable output file; JSON goes to stdout when absent.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

impl CommonArgs {
    fn overrides(&self) -> ConfigOverrides {
        ConfigOverrides {
            tol_eig: self.tol_eig,
            tol_rank: self.tol_rank,
            tol_zero: self.tol_zero,
            mode: self.mode.clone(),
            partition_cap: self.partition_cap,
            seed: self.seed,
            trials: self.trials,
            ..Default::default()
        }
    }

    pub fn resolve(&self) -> Result<RunConfig, CliError> {
        let mut cfg = RunConfig::default();
        if let Some(path) = &self.config {
            ConfigOverrides::from_file(path).and_then(|o| o.apply(&mut cfg)).map_err(CliError::Invalid)?;
        }
        self.overrides().apply(&mut cfg).map_err(CliError::Invalid)?;
        cfg.validate().map_err(CliError::Invalid)?;
        Ok(cfg)
    }
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Invalid(String),
    #[error("{path}: {message}")]
    File { path: PathBuf, message: String },
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error(transparent)]
    Core(#[from] Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Dimension(_) | CliError::Core(Error::DimensionMismatch { .. }) => EXIT_DIM,
            CliError::Core(Error::CapExceeded { .. }) => EXIT_CAP,
            _ => EXIT_INVALID,
        }
    }
}

fn file_error(path: &Path, message: impl Into<String>) -> CliError {
    CliError::File { path: path.to_path_buf(), message: message.into() }
}

pub fn load_operator(path: &Path, cfg: &RunConfig) -> Result<HermitianOperator, CliError> {
    let file = files::read_operator_file(path).map_err(|m| file_error(path, m))?;
    let matrix = file.to_matrix().map_err(|m| file_error(path, m))?;
    HermitianOperator::new(matrix, &cfg.tolerances).map_err(|e| file_error(path, e.to_string()))
}

fn load_family(paths: &[PathBuf], cfg: &RunConfig) -> Result<Vec<HermitianOperator>, CliError> {
    let family = paths.iter().map(|p| load_operator(p, cfg)).collect::<Result<Vec<_>, _>>()?;
    if let Some((i, op)) = family.iter().enumerate().find(|(_, op)| op.dim() != family[0].dim()) {
        return Err(CliError::Dimension(format!(
            "{} has dimension {} but {} has dimension {}",
            paths[0].display(),
            family[0].dim(),
            paths[i].display(),
            op.dim()
        )));
    }
    Ok(family)
}

fn infimum_of(family: &[HermitianOperator], cfg: &RunConfig) -> Result<InfimumResult, CliError> {
    let g = InfimumMeasure::from_operators(family, &cfg.tolerances)?.with_partition_cap(cfg.partition_cap);
    Ok(g.assemble(cfg.mode)?)
}

pub fn result_file(result: &InfimumResult, cfg: &RunConfig) -> ResultFile {
    ResultFile {
        operator: OperatorFile::from_operator(&result.operator),
        atoms: result
            .measure
            .atoms()
            .iter()
            .map(|a| AtomFile { value: a.value, projection: OperatorFile::from_projection(&a.projection) })
            .collect(),
        mode_used: result.mode_used.to_string(),
        grid: result.grid.clone(),
        tolerances: cfg.tolerances,
    }
}

struct Io<'a> {
    stdout: &'a mut dyn Write,
}

impl Io<'_> {
    /// Machine output to `--output` (with the summary on stdout), or to stdout alone.
    fn emit<T: Serialize>(&mut self, output: Option<&Path>, value: &T, summary: &str) -> Result<(), CliError> {
        match output {
            Some(path) => {
                files::write_json(path, value).map_err(|e| file_error(path, format!("cannot write: {e}")))?;
                let _ = writeln!(self.stdout, "{summary}");
            }
            None => {
                let _ = self.stdout.write_all(&files::to_json_bytes(value));
            }
        }
        Ok(())
    }
}

fn fmt_values(values: &[f64]) -> String {
    let parts: Vec<String> = values.iter().map(|v| format!("{v}")).collect();
    format!("[{}]", parts.join(", "))
}

fn cmd_inf(inputs: &[PathBuf], common: &CommonArgs, io: &mut Io) -> Result<i32, CliError> {
    let cfg = common.resolve()?;
    let family = load_family(inputs, &cfg)?;
    let result = infimum_of(&family, &cfg)?;
    let summary = format!(
        "infimum of {} operator(s), dim {}: atoms at {}, grid {}, mode {}",
        family.len(),
        result.operator.dim(),
        fmt_values(&result.measure.atoms().iter().map(|a| a.value).collect::<Vec<_>>()),
        fmt_values(&result.grid),
        result.mode_used
    );
    io.emit(common.output.as_deref(), &result_file(&result, &cfg), &summary)?;
    Ok(EXIT_OK)
}

fn cmd_check(a: &Path, b: &Path, common: &CommonArgs, io: &mut Io) -> Result<i32, CliError> {
    let cfg = common.resolve()?;
    let family = load_family(&[a.to_path_buf(), b.to_path_buf()], &cfg)?;
    let report = compare(&family[0], &family[1], &cfg.tolerances)?;
    let limit = cfg.tolerances.tol_residual;
    let checks = vec![
        Check {
            name: "logic_leq.algebraic".into(),
            passed: report.algebraic,
            residual: report.algebraic_residual,
            detail: format!("‖A(B − A)‖_F relative, limit {limit:e}"),
        },
        Check {
            name: "logic_leq.spectral".into(),
            passed: report.spectral,
            residual: report.spectral_residual,
            detail: format!("eigenprojection domination, limit {limit:e}"),
        },
        Check {
            name: "numeric_leq".into(),
            passed: report.numeric_leq,
            residual: (-report.numeric_min_eigenvalue).max(0.0),
            detail: format!("min eigenvalue of B − A is {:e}", report.numeric_min_eigenvalue),
        },
    ];
    let file = OrderFile {
        logic_leq: report.logic_leq(),
        numeric_leq: report.numeric_leq,
        tests_agree: !report.tests_disagree(),
        checks,
    };
    let summary = format!(
        "numeric_leq {}, logic_leq algebraic {} (residual {:e}), spectral {} (residual {:e})",
        report.numeric_leq, report.algebraic, report.algebraic_residual, report.spectral, report.spectral_residual
    );
    io.emit(common.output.as_deref(), &file, &summary)?;
    Ok(if report.tests_disagree() {
        EXIT_DISAGREE
    } else if report.logic_leq() {
        EXIT_OK
    } else {
        EXIT_FALSE
    })
}

fn cmd_measure(set_spec: &str, inputs: &[PathBuf], common: &CommonArgs, io: &mut Io) -> Result<i32, CliError> {
    let delta: BorelDescriptor =
        set_spec.parse().map_err(|e: crate::spectral::ParseSetError| CliError::Invalid(e.to_string()))?;
    let cfg = common.resolve()?;
    let family = load_family(inputs, &cfg)?;
    let g = InfimumMeasure::from_operators(&family, &cfg.tolerances)?.with_partition_cap(cfg.partition_cap);
    let branch = g.branch(&delta);
    let projection =
        if family.len() == 1 { g.family()[0].evaluate(&delta, &cfg.tolerances) } else { g.evaluate(&delta, cfg.mode)? };
    let branch = match branch {
        Branch::Empty => "empty",
        Branch::ZeroFree => "zero_free",
        Branch::Complement => "complement",
    };
    let file = MeasureFile {
        set: delta.to_string(),
        branch: branch.to_string(),
        rank: projection.rank(),
        projection: OperatorFile::from_projection(&projection),
    };
    let summary = format!("G({delta}) has rank {} ({branch} branch)", file.rank);
    io.emit(common.output.as_deref(), &file, &summary)?;
    Ok(EXIT_OK)
}

fn cmd_verify(inputs: &[PathBuf], common: &CommonArgs, inject: Option<f64>, io: &mut Io) -> Result<i32, CliError> {
    let cfg = common.resolve()?;
    let family = load_family(inputs, &cfg)?;
    let result = infimum_of(&family, &cfg)?;
    let mut candidate = result.operator.clone();
    if let Some(eps) = inject {
        if !eps.is_finite() {
            return Err(CliError::Invalid(format!("perturbation {eps} is not finite")));
        }
        let mut rng = sample::stream_rng(cfg.seed, u64::MAX - 1);
        let p = undominated_rank_one(&result.measure, &mut rng, &cfg.tolerances);
        candidate = &candidate + &p.as_operator().scale(eps);
    }
    let verdict = verify_infimum(&family, &candidate, cfg.trials, cfg.seed, &cfg.tolerances)?;
    let failed: Vec<&str> = verdict.checks.iter().filter(|c| !c.passed).map(|c| c.name.as_str()).collect();
    let summary = if verdict.passed {
        format!("verified: {} checks passed ({} trials, seed {})", verdict.checks.len(), verdict.trials, verdict.seed)
    } else {
        format!("verification failed: {}", failed.join(", "))
    };
    io.emit(common.output.as_deref(), &verdict, &summary)?;
    Ok(if verdict.passed { EXIT_OK } else { EXIT_FALSE })
}

/// Runs one invocation, writing to the given streams, and returns the exit code.
pub fn run_with<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INVALID } else { EXIT_OK };
            let rendered = e.render().to_string();
            let _ = if e.use_stderr() { write!(stderr, "{rendered}") } else { write!(stdout, "{rendered}") };
            return code;
        }
    };
    let mut io = Io { stdout };
    let outcome = match &cli.command {
        Command::Inf { inputs, common } => cmd_inf(inputs, common, &mut io),
        Command::Check { a, b, common } => cmd_check(a, b, common, &mut io),
        Command::Measure { set_spec, inputs, common } => cmd_measure(set_spec, inputs, common, &mut io),
        Command::Verify { inputs, common, inject_perturbation } => {
            cmd_verify(inputs, common, *inject_perturbation, &mut io)
        }
    };
    match outcome {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "loginf: {e}");
            e.exit_code()
        }
    }
}

pub fn run() -> i32 {
    run_with(std::env::args_os(), &mut std::io::stdout(), &mut std::io::stderr())
}
