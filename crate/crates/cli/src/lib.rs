//! Command-line front end for `spectra-core`.
//!
//! The binary is a thin wrapper around [`run`], which executes a parsed
//! [`Cli`] and returns the text to emit together with the exit code.

pub mod report;
pub mod spec;

use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use spectra_core::solver::{lambda_curves, locate, nu};
use spectra_core::verify::{run_suite, Suite};
use spectra_core::SolverConfig;

use report::{suite_csv, CurvesReport, GapReport, HitRecord, InertiaReport, RunReport, Timings};
pub use spec::{BuiltinName, BuiltinSpec, ExplicitSpec, LoadedProblem, Problem, ProblemSpec};

pub const EXIT_OK: u8 = 0;
pub const EXIT_VERIFY_FAILED: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_DOMAIN: u8 = 3;
pub const EXIT_BUDGET: u8 = 4;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("cannot access {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("invalid problem: {0}")]
    Spec(String),
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] spectra_core::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Io { .. } | CliError::Spec(_) | CliError::Usage(_) => EXIT_USAGE,
            CliError::Core(spectra_core::Error::InvalidArgument(_)) => EXIT_USAGE,
            CliError::Core(spectra_core::Error::BisectionBudgetExceeded { .. }) => EXIT_BUDGET,
            CliError::Core(_) => EXIT_DOMAIN,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SuiteName {
    Quartic,
    Dirac,
    Transport,
    Random,
}

impl From<SuiteName> for Suite {
    fn from(s: SuiteName) -> Self {
        match s {
            SuiteName::Quartic => Suite::Quartic,
            SuiteName::Dirac => Suite::Dirac,
            SuiteName::Transport => Suite::Transport,
            SuiteName::Random => Suite::Random,
        }
    }
}

#[derive(Debug, Clone, Parser)]
#[command(
    name = "spectra",
    version,
    about = "Eigenvalue localization for block operator pencils"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct GlobalArgs {
    /// Problem file (JSON).
    #[arg(long, global = true, value_name = "FILE")]
    pub problem: Option<PathBuf>,
    /// Absolute bisection tolerance.
    #[arg(long, global = true, value_name = "X")]
    pub tol_abs: Option<f64>,
    /// Relative bisection tolerance.
    #[arg(long, global = true, value_name = "X")]
    pub tol_rel: Option<f64>,
    /// Relative zero threshold for inertia counts.
    #[arg(long, global = true, value_name = "X")]
    pub zero_tol: Option<f64>,
    /// Cap ε of the Λ-curves.
    #[arg(long, global = true, value_name = "X")]
    pub epsilon: Option<f64>,
    /// Write output here instead of stdout.
    #[arg(long, global = true, value_name = "FILE")]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Worker threads for independent λ evaluations.
    #[arg(long, global = true, env = "SPECTRA_THREADS", value_name = "N")]
    pub threads: Option<usize>,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Print the lower-right spectrum and the gap containing λ.
    Gap {
        #[arg(long, allow_negative_numbers = true)]
        lambda: f64,
    },
    /// Locate all eigenvalues in [A, B).
    Eig {
        #[arg(long, num_args = 2, value_names = ["A", "B"], allow_negative_numbers = true, required = true)]
        interval: Vec<f64>,
    },
    /// Tabulate ν(λ) on M+1 equispaced points of [A, B].
    Inertia {
        #[arg(long, num_args = 3, value_names = ["A", "B", "M"], allow_negative_numbers = true, required = true)]
        grid: Vec<String>,
    },
    /// Tabulate the first K Λ-curves on M+1 equispaced points of [A, B].
    Curves {
        #[arg(long, num_args = 3, value_names = ["A", "B", "M"], allow_negative_numbers = true, required = true)]
        grid: Vec<String>,
        /// Number of curves (default: all).
        #[arg(long, value_name = "K")]
        curves: Option<usize>,
    },
    /// Run a verification suite.
    Verify {
        #[arg(value_enum)]
        name: SuiteName,
    },
}

/// Text to emit and the process exit code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Output {
    pub text: String,
    pub code: u8,
    /// Diagnostics for stderr.
    pub notes: Vec<String>,
}

impl Output {
    fn ok(text: String) -> Self {
        Self {
            text,
            code: EXIT_OK,
            notes: Vec::new(),
        }
    }
}

/// `M+1` equispaced points from `A` to `B`.
pub fn parse_grid(grid: &[String]) -> Result<Vec<f64>, CliError> {
    let bad = || CliError::Usage(format!("--grid expects A B M, got {}", grid.join(" ")));
    let [a, b, m] = grid else { return Err(bad()) };
    let a: f64 = a.parse().map_err(|_| bad())?;
    let b: f64 = b.parse().map_err(|_| bad())?;
    let m: usize = m.parse().map_err(|_| bad())?;
    if !a.is_finite() || !b.is_finite() {
        return Err(CliError::Usage("grid ends must be finite".into()));
    }
    if m == 0 {
        return Ok(vec![a]);
    }
    Ok((0..=m)
        .map(|k| {
            if k == m {
                b
            } else {
                a + (b - a) * k as f64 / m as f64
            }
        })
        .collect())
}

fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
    s.push('\n');
    s
}

impl GlobalArgs {
    /// Defaults, then the problem file's solver section, then command-line flags.
    pub fn config(&self, spec: Option<&ProblemSpec>) -> Result<SolverConfig, CliError> {
        let mut cfg = spec.and_then(|s| s.solver).unwrap_or_default();
        if let Some(x) = self.tol_abs {
            cfg.lambda_tol_abs = x;
        }
        if let Some(x) = self.tol_rel {
            cfg.lambda_tol_rel = x;
        }
        if let Some(x) = self.zero_tol {
            cfg.zero_tol = x;
        }
        if let Some(x) = self.epsilon {
            cfg.epsilon_cap = x;
        }
        if self.threads.is_some_and(|t| t > 1) {
            cfg.parallel = true;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    fn spec(&self) -> Result<ProblemSpec, CliError> {
        let path = self
            .problem
            .as_ref()
            .ok_or_else(|| CliError::Usage("--problem FILE is required".into()))?;
        ProblemSpec::load(path)
    }
}

/// Runs a parsed command line on a pool of `--threads` workers.
pub fn run(cli: &Cli) -> Result<Output, CliError> {
    match cli.global.threads {
        Some(0) => Err(CliError::Usage("--threads must be positive".into())),
        Some(n) if n > 1 => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| CliError::Usage(e.to_string()))?
            .install(|| dispatch(cli)),
        _ => dispatch(cli),
    }
}

fn dispatch(cli: &Cli) -> Result<Output, CliError> {
    let g = &cli.global;
    if let Command::Verify { name } = cli.command {
        return verify((name).into(), g);
    }
    let spec = g.spec()?;
    let cfg = g.config(Some(&spec))?;
    let problem = spec.build()?;
    let p = &problem.pencil;
    match &cli.command {
        Command::Gap { lambda } => {
            let report = GapReport {
                lambda: *lambda,
                gap: p.gap(*lambda)?,
                t22_spectrum: p.t22_spectrum().to_vec(),
            };
            Ok(Output::ok(match g.format {
                Format::Csv => report.to_csv(),
                Format::Json => json(&report),
            }))
        }
        Command::Eig { interval } => {
            let (a, b) = (interval[0], interval[1]);
            let start = Instant::now();
            let (hits, partial) = match locate(p, a, b, &cfg) {
                Ok(h) => (h, false),
                Err(spectra_core::Error::BisectionBudgetExceeded { partial, .. }) => {
                    (partial, true)
                }
                Err(e) => return Err(e.into()),
            };
            let gap = p.gap(if a.is_finite() {
                a
            } else {
                b.min(p.spectral_bound()?)
            })?;
            let seconds = start.elapsed().as_secs_f64();
            log::info!("eig: {} hits in {seconds:.3} s", hits.len());
            let report = RunReport {
                tool: env!("CARGO_PKG_NAME").into(),
                version: env!("CARGO_PKG_VERSION").into(),
                problem: spec.clone(),
                config: cfg,
                interval: (a, b),
                gap,
                hits: hits.iter().map(HitRecord::from).collect(),
                partial,
                timings: Timings { seconds },
            };
            let mut out = Output::ok(match g.format {
                Format::Csv => report.to_csv(),
                Format::Json => json(&report),
            });
            if partial {
                out.code = EXIT_BUDGET;
                out.notes.push(format!(
                    "bisection budget of {} evaluations exhausted; output is partial",
                    cfg.max_bisections
                ));
            }
            Ok(out)
        }
        Command::Inertia { grid } => {
            let grid = parse_grid(grid)?;
            let values = grid
                .iter()
                .map(|&x| nu(p, x, &cfg))
                .collect::<Result<Vec<_>, _>>()?;
            let report = InertiaReport {
                config: cfg,
                grid,
                nu: values,
            };
            Ok(Output::ok(match g.format {
                Format::Csv => report.to_csv(),
                Format::Json => json(&report),
            }))
        }
        Command::Curves { grid, curves } => {
            let grid = parse_grid(grid)?;
            let m = curves.unwrap_or(p.n1());
            let table = lambda_curves(p, problem.kappa, problem.tau, &grid, m, &cfg)?;
            let report = CurvesReport {
                config: cfg,
                kappa: problem.kappa,
                tau: problem.tau,
                table,
            };
            Ok(Output::ok(match g.format {
                Format::Csv => report.to_csv(),
                Format::Json => json(&report),
            }))
        }
        Command::Verify { .. } => unreachable!("handled above"),
    }
}

fn verify(suite: Suite, g: &GlobalArgs) -> Result<Output, CliError> {
    let spec = g.problem.as_ref().map(|_| g.spec()).transpose()?;
    let cfg = g.config(spec.as_ref())?;
    let report = run_suite(suite, &cfg)?;
    let mut out = Output::ok(match g.format {
        Format::Csv => suite_csv(&report),
        Format::Json => json(&report),
    });
    for c in &report.checks {
        out.notes.push(c.to_string());
    }
    let passed = report.passed();
    out.notes.push(format!(
        "{} suite {} in {:.2} s",
        if passed { "PASS" } else { "FAIL" },
        suite.name(),
        report.seconds
    ));
    if !passed {
        out.code = EXIT_VERIFY_FAILED;
    }
    Ok(out)
}
