//! Command-line front end: `probs`, `entropies`, `rate`, `sweep` and `verify`.
//!
//! Every subcommand writes CSV (or, for `verify`, a text report) to standard
//! output. Exit status: 0 success, 1 parameter error, 2 verification failure,
//! 3 optimiser non-convergence.

pub mod config;
pub mod format;

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use crate::entropy::{bpsk_closed_forms, entropy_report, RenyiOrder};
use crate::error::{Error, Result};
use crate::rates::{
    evaluate_rate, optimize_rate, Estimator, RateBounds, RateResult, SecurityParams,
};
use crate::states::{build_ensemble, cond_prob, Modulation, ProtocolParams};
use crate::verify::{run_suite, Suite, VerifyOptions};
use format::{opt, sig12, CsvWriter};

/// Environment variable overriding the worker-thread count.
pub const THREADS_ENV: &str = "PSK_KEYRATE_THREADS";

pub const EXIT_OK: i32 = 0;
pub const EXIT_PARAMETER: i32 = 1;
pub const EXIT_VERIFICATION: i32 = 2;
pub const EXIT_NON_CONVERGENCE: i32 = 3;

const SUBCOMMANDS: [&str; 5] = ["probs", "entropies", "rate", "sweep", "verify"];

#[derive(Debug, Parser)]
#[command(
    name = "psk-keyrate",
    version,
    about = "Finite-size key-rate bounds for BPSK/QPSK continuous-variable QKD on a pure-loss channel",
    long_about = "Finite-size key-rate bounds for BPSK/QPSK continuous-variable QKD on a pure-loss channel.\n\n\
        Entropies are in bits, rates in bits per channel use. Output is CSV with a leading '#' line \
        recording the invocation. Exit status: 0 success, 1 parameter error, 2 verification failure, \
        3 optimiser non-convergence. Set PSK_KEYRATE_THREADS to fix the number of worker threads."
)]
pub struct Cli {
    /// File of `key = value` lines supplying default flag values; explicit flags win
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print Bob's conditional probabilities p(y|x) (columns y, x, p)
    Probs(ProbsArgs),
    /// Evaluate every conditional entropy at one point (bits)
    Entropies(EntropiesArgs),
    /// Evaluate or optimise one key-rate estimator (bits per channel use)
    Rate(RateArgs),
    /// Sweep one parameter and print entropies or rates per grid point
    Sweep(SweepArgs),
    /// Run the verification suites; exit 0 iff all checks pass
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
pub struct ProtocolArgs {
    /// Modulation: bpsk (homodyne) or qpsk (heterodyne)
    #[arg(long, default_value = "bpsk")]
    pub protocol: Modulation,
}

#[derive(Debug, Args)]
#[command(args_override_self = true)]
pub struct ProbsArgs {
    #[command(flatten)]
    pub protocol: ProtocolArgs,
    /// Coherent amplitude |alpha| >= 0
    #[arg(long)]
    pub alpha: f64,
    /// Channel transmittance eta in [0, 1]
    #[arg(long)]
    pub eta: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum EntropyPath {
    /// Symmetry-reduced matrix evaluation
    Numeric,
    /// BPSK closed forms for petz_down, petz_up, sand_down (others numeric)
    Analytic,
    /// Both, with absolute differences appended
    Both,
}

#[derive(Debug, Args)]
#[command(args_override_self = true)]
pub struct EntropiesArgs {
    #[command(flatten)]
    pub protocol: ProtocolArgs,
    /// Coherent amplitude |alpha| >= 0
    #[arg(long)]
    pub alpha: f64,
    /// Channel transmittance eta in [0, 1]
    #[arg(long)]
    pub eta: f64,
    /// Renyi order a > 0, a != 1; sand_up needs a >= 1/2, B needs 1 < a <= 2 - 1e-6
    #[arg(long, default_value_t = 1.2)]
    pub a: f64,
    /// Evaluation path
    #[arg(long, value_enum, default_value = "numeric")]
    pub path: EntropyPath,
}

#[derive(Debug, Args)]
pub struct SecurityArgs {
    /// Smoothing parameter eps in (0, 1)
    #[arg(long, default_value_t = SecurityParams::DEFAULT_EPS)]
    pub eps: f64,
    /// Privacy-amplification parameter eps' in (0, 1), eps + eps' < 1
    #[arg(long = "eps-prime", default_value_t = SecurityParams::DEFAULT_EPS)]
    pub eps_prime: f64,
}

#[derive(Debug, Args)]
pub struct BoundsArgs {
    /// Lower end of the amplitude search interval
    #[arg(long = "alpha-min", default_value_t = 0.05)]
    pub alpha_min: f64,
    /// Upper end of the amplitude search interval
    #[arg(long = "alpha-max", default_value_t = 3.0)]
    pub alpha_max: f64,
    /// Largest Renyi order searched: default 4 for S (at most 64), 2 - 1e-6 for B
    #[arg(long = "a-max")]
    pub a_max: Option<f64>,
}

impl BoundsArgs {
    fn bounds(&self) -> RateBounds {
        RateBounds {
            alpha_min: self.alpha_min,
            alpha_max: self.alpha_max,
            a_max: self.a_max,
            ..RateBounds::default()
        }
    }
}

#[derive(Debug, Args)]
#[command(args_override_self = true)]
pub struct RateArgs {
    #[command(flatten)]
    pub protocol: ProtocolArgs,
    /// Estimator: S (sandwiched Renyi), AEP, or B (second-order bound)
    #[arg(long, default_value = "S")]
    pub estimator: Estimator,
    /// Block size n (channel uses, positive integer)
    #[arg(long)]
    pub n: f64,
    #[command(flatten)]
    pub security: SecurityArgs,
    /// Channel transmittance eta in [0, 1]
    #[arg(long)]
    pub eta: f64,
    /// Coherent amplitude |alpha| (required unless --optimize)
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Renyi order (S: a > 1, B: 1 < a <= 2 - 1e-6; required unless --optimize, ignored by AEP)
    #[arg(long)]
    pub a: Option<f64>,
    /// Maximise over alpha (and a for S and B)
    #[arg(long)]
    pub optimize: bool,
    #[command(flatten)]
    pub bounds: BoundsArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SweepVariable {
    Eta,
    N,
    Alpha,
    A,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Scale {
    Linear,
    Log,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Quantity {
    /// Entropy columns as printed by `entropies`
    Entropies,
    /// Rate columns as printed by `rate`, one row per point and estimator
    Rates,
}

#[derive(Debug, Args)]
#[command(args_override_self = true)]
pub struct SweepArgs {
    #[command(flatten)]
    pub protocol: ProtocolArgs,
    /// What to compute at each grid point
    #[arg(long, value_enum, default_value = "rates")]
    pub quantity: Quantity,
    /// Swept parameter
    #[arg(long = "var", value_enum)]
    pub variable: SweepVariable,
    /// First grid value
    #[arg(long)]
    pub from: f64,
    /// Last grid value (must exceed --from)
    #[arg(long)]
    pub to: f64,
    /// Number of grid points (>= 2)
    #[arg(long, default_value_t = 25)]
    pub points: usize,
    /// Grid spacing; log needs --from > 0
    #[arg(long, value_enum, default_value = "linear")]
    pub scale: Scale,
    /// Fixed transmittance when not swept
    #[arg(long)]
    pub eta: Option<f64>,
    /// Fixed amplitude when not swept (unused with --optimize)
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Fixed Renyi order when not swept (entropies default to 1.2)
    #[arg(long)]
    pub a: Option<f64>,
    /// Fixed block size when not swept
    #[arg(long)]
    pub n: Option<f64>,
    #[command(flatten)]
    pub security: SecurityArgs,
    /// Estimators for rate sweeps, comma separated
    #[arg(long, value_delimiter = ',', default_value = "S,B,AEP")]
    pub estimators: Vec<Estimator>,
    /// Re-optimise alpha (and a) at every point
    #[arg(long)]
    pub optimize: bool,
    /// Evaluation path for entropy sweeps
    #[arg(long, value_enum, default_value = "numeric")]
    pub path: EntropyPath,
    #[command(flatten)]
    pub bounds: BoundsArgs,
    /// Write CSV to this file instead of standard output
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
#[command(args_override_self = true)]
pub struct VerifyArgs {
    /// Base seed for the Monte-Carlo streams and the random tripartite states
    #[arg(long, default_value_t = VerifyOptions::default().seed)]
    pub seed: u64,
    /// Monte-Carlo shots per input symbol
    #[arg(long, default_value_t = VerifyOptions::default().shots)]
    pub shots: u64,
    /// Suite to run: mc, duality, analytic or all
    #[arg(long, default_value = "all")]
    pub suite: Suite,
    /// Random pure states per dimension triple in the duality suite
    #[arg(long = "duality-states", default_value_t = VerifyOptions::default().duality_states)]
    pub duality_states: u64,
}

/// CSV rows produced at one grid point and whether every optimisation converged.
type SweepRows = (Vec<Vec<String>>, bool);

/// Outcome of a successful run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Status {
    Ok,
    NotConverged,
    VerificationFailed,
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error(transparent)]
    Model(#[from] Error),
    #[error("i/o error: {0}")]
    Io(#[from] io::Error),
}

/// Parses `args` (program name first) and runs the selected subcommand,
/// returning the process exit status.
pub fn run(args: Vec<OsString>, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    configure_threads();
    let args = match with_config(args) {
        Ok(a) => a,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return EXIT_PARAMETER;
        }
    };
    let cli = match Cli::try_parse_from(&args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() {
                EXIT_PARAMETER
            } else {
                EXIT_OK
            };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                write!(err, "{text}")
            } else {
                write!(out, "{text}")
            };
            return code;
        }
    };
    let invocation = std::iter::once("psk-keyrate".to_string())
        .chain(
            args.iter()
                .skip(1)
                .map(|a| a.to_string_lossy().into_owned()),
        )
        .collect::<Vec<_>>()
        .join(" ");
    let result = match &cli.command {
        Command::Probs(a) => cmd_probs(a, &invocation, out),
        Command::Entropies(a) => cmd_entropies(a, &invocation, out),
        Command::Rate(a) => cmd_rate(a, &invocation, out),
        Command::Sweep(a) => cmd_sweep(a, &invocation, out),
        Command::Verify(a) => cmd_verify(a, out),
    };
    match result {
        Ok(Status::Ok) => EXIT_OK,
        Ok(Status::NotConverged) => {
            let _ = writeln!(
                err,
                "warning: optimiser did not converge; best values printed"
            );
            EXIT_NON_CONVERGENCE
        }
        Ok(Status::VerificationFailed) => EXIT_VERIFICATION,
        // a closed downstream pipe (e.g. `| head`) is not an error
        Err(CliError::Io(e)) if e.kind() == io::ErrorKind::BrokenPipe => EXIT_OK,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_PARAMETER
        }
    }
}

fn configure_threads() {
    if let Some(n) = std::env::var(THREADS_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
    {
        // the global pool can only be built once per process
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global();
    }
}

fn with_config(args: Vec<OsString>) -> Result<Vec<OsString>> {
    let Some(path) = config::config_path(&args) else {
        return Ok(args);
    };
    let text = std::fs::read_to_string(&path).map_err(|e| {
        Error::InvalidParameter(format!(
            "cannot read config {}: {e}",
            path.to_string_lossy()
        ))
    })?;
    let entries = config::parse_config(&text)?;
    Ok(config::merge(args, &entries, &SUBCOMMANDS))
}

fn cmd_probs(
    args: &ProbsArgs,
    invocation: &str,
    out: &mut dyn Write,
) -> std::result::Result<Status, CliError> {
    let p = ProtocolParams::new(args.protocol.protocol, args.alpha, args.eta)?;
    let table = cond_prob(&p)?;
    let mut w = CsvWriter::new(out, invocation, &["y", "x", "p"])?;
    for y in 0..table.size() {
        for x in 0..table.size() {
            w.row(&[y.to_string(), x.to_string(), sig12(table.get(y, x))])?;
        }
    }
    w.finish()?;
    Ok(Status::Ok)
}

const ENTROPY_COLUMNS: [&str; 9] = [
    "eta",
    "alpha",
    "a",
    "petz_down",
    "petz_up",
    "sand_down",
    "sand_up",
    "vn",
    "B",
];
const DIFF_COLUMNS: [&str; 3] = ["diff_petz_down", "diff_petz_up", "diff_sand_down"];

fn entropy_columns(path: EntropyPath) -> Vec<&'static str> {
    let mut cols = ENTROPY_COLUMNS.to_vec();
    if path == EntropyPath::Both {
        cols.extend(DIFF_COLUMNS);
    }
    cols
}

/// One entropy row and whether the sandwiched optimisation converged.
fn entropy_row(p: &ProtocolParams, a: f64, path: EntropyPath) -> Result<(Vec<String>, bool)> {
    let order = RenyiOrder::new(a)?;
    if path != EntropyPath::Numeric && p.modulation != Modulation::Bpsk {
        return Err(Error::InvalidParameter(
            "the analytic path exists for BPSK only".into(),
        ));
    }
    let e = build_ensemble(p)?;
    let r = entropy_report(&e, order)?;
    let numeric = [r.petz_down, r.petz_up, r.sand_down];
    let analytic = if path == EntropyPath::Numeric {
        numeric
    } else {
        // the closed forms are undefined at eta = 1 and alpha = 0; the numeric path covers those
        match bpsk_closed_forms(p, order) {
            Ok(c) => [c.petz_down, c.petz_up, c.sand_down],
            Err(Error::Domain(_)) => numeric,
            Err(e) => return Err(e),
        }
    };
    let mut row = vec![sig12(p.eta), sig12(p.alpha), sig12(a)];
    row.extend(analytic.iter().map(|&v| sig12(v)));
    row.push(opt(r.sand_up_invariant));
    row.push(sig12(r.von_neumann));
    row.push(opt(r.bound_b));
    if path == EntropyPath::Both {
        row.extend(
            numeric
                .iter()
                .zip(&analytic)
                .map(|(n, a)| sig12((n - a).abs())),
        );
    }
    Ok((row, r.sand_up_converged))
}

fn cmd_entropies(
    args: &EntropiesArgs,
    invocation: &str,
    out: &mut dyn Write,
) -> std::result::Result<Status, CliError> {
    let p = ProtocolParams::new(args.protocol.protocol, args.alpha, args.eta)?;
    let (row, converged) = entropy_row(&p, args.a, args.path)?;
    let mut w = CsvWriter::new(out, invocation, &entropy_columns(args.path))?;
    w.row(&row)?;
    w.finish()?;
    Ok(if converged {
        Status::Ok
    } else {
        Status::NotConverged
    })
}

const RATE_COLUMNS: [&str; 8] = [
    "estimator",
    "n",
    "eta",
    "rate",
    "alpha_opt",
    "a_opt",
    "leak",
    "key_possible",
];

fn rate_row(r: &RateResult) -> Vec<String> {
    vec![
        r.estimator.name().to_string(),
        format_block_size(r.n),
        sig12(r.eta),
        sig12(r.rate),
        sig12(r.alpha_opt),
        opt(r.a_opt),
        sig12(r.leak),
        r.key_possible.to_string(),
    ]
}

fn format_block_size(n: f64) -> String {
    if n < 1e15 {
        format!("{}", n as u64)
    } else {
        sig12(n)
    }
}

struct RatePoint {
    modulation: Modulation,
    eta: f64,
    n: f64,
    alpha: Option<f64>,
    a: Option<f64>,
}

fn compute_rate(
    estimator: Estimator,
    pt: &RatePoint,
    security: &SecurityArgs,
    optimize: bool,
    bounds: &RateBounds,
) -> Result<RateResult> {
    let sp = SecurityParams::new(pt.n, security.eps, security.eps_prime)?;
    if optimize {
        return optimize_rate(estimator, pt.modulation, pt.eta, &sp, bounds);
    }
    let alpha = pt
        .alpha
        .ok_or_else(|| Error::InvalidParameter("--alpha is required without --optimize".into()))?;
    let sp = match (estimator.uses_order(), pt.a) {
        (true, Some(a)) => sp.with_order(RenyiOrder::new(a)?),
        (true, None) => {
            return Err(Error::InvalidParameter(format!(
                "--a is required for estimator {estimator} without --optimize"
            )))
        }
        (false, _) => sp,
    };
    evaluate_rate(
        estimator,
        &ProtocolParams::new(pt.modulation, alpha, pt.eta)?,
        &sp,
    )
}

fn cmd_rate(
    args: &RateArgs,
    invocation: &str,
    out: &mut dyn Write,
) -> std::result::Result<Status, CliError> {
    let pt = RatePoint {
        modulation: args.protocol.protocol,
        eta: args.eta,
        n: args.n,
        alpha: args.alpha,
        a: args.a,
    };
    let r = compute_rate(
        args.estimator,
        &pt,
        &args.security,
        args.optimize,
        &args.bounds.bounds(),
    )?;
    let mut w = CsvWriter::new(out, invocation, &RATE_COLUMNS)?;
    w.row(&rate_row(&r))?;
    w.finish()?;
    Ok(if r.converged {
        Status::Ok
    } else {
        Status::NotConverged
    })
}

/// Grid values of a sweep.
pub fn sweep_grid(from: f64, to: f64, points: usize, scale: Scale) -> Result<Vec<f64>> {
    if !(from < to) || !from.is_finite() || !to.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "sweep needs from < to, got {from} .. {to}"
        )));
    }
    if points < 2 {
        return Err(Error::InvalidParameter(
            "sweep needs at least 2 points".into(),
        ));
    }
    if scale == Scale::Log && from <= 0.0 {
        return Err(Error::InvalidParameter("log sweep needs from > 0".into()));
    }
    let last = (points - 1) as f64;
    Ok((0..points)
        .map(|i| {
            let t = i as f64 / last;
            match scale {
                Scale::Linear => from + (to - from) * t,
                Scale::Log => (from.ln() + (to / from).ln() * t).exp(),
            }
        })
        .collect())
}

fn cmd_sweep(
    args: &SweepArgs,
    invocation: &str,
    out: &mut dyn Write,
) -> std::result::Result<Status, CliError> {
    let mut grid = sweep_grid(args.from, args.to, args.points, args.scale)?;
    if args.variable == SweepVariable::N {
        for v in &mut grid {
            *v = v.round();
        }
    }
    let modulation = args.protocol.protocol;
    let fixed = |name: &str, v: Option<f64>, var: SweepVariable| -> Result<Option<f64>> {
        if args.variable == var && v.is_some() {
            return Err(Error::InvalidParameter(format!(
                "--{name} is swept and cannot be fixed"
            )));
        }
        Ok(v)
    };
    let eta = fixed("eta", args.eta, SweepVariable::Eta)?;
    let alpha = fixed("alpha", args.alpha, SweepVariable::Alpha)?;
    let a = fixed("a", args.a, SweepVariable::A)?;
    let n = fixed("n", args.n, SweepVariable::N)?;
    let pick = |var: SweepVariable, fixed: Option<f64>, x: f64| {
        if args.variable == var {
            Some(x)
        } else {
            fixed
        }
    };
    let need = |name: &str, v: Option<f64>| {
        v.ok_or_else(|| Error::InvalidParameter(format!("--{name} is required for this sweep")))
    };

    let (columns, rows): (Vec<&str>, Vec<Result<SweepRows>>) = match args.quantity {
        Quantity::Entropies => {
            if args.variable == SweepVariable::N {
                return Err(Error::InvalidParameter("entropies do not depend on n".into()).into());
            }
            let rows = grid
                .par_iter()
                .map(|&x| {
                    let p = ProtocolParams::new(
                        modulation,
                        need("alpha", pick(SweepVariable::Alpha, alpha, x))?,
                        need("eta", pick(SweepVariable::Eta, eta, x))?,
                    )?;
                    let order = pick(SweepVariable::A, a, x).unwrap_or(1.2);
                    let (row, ok) = entropy_row(&p, order, args.path)?;
                    Ok((vec![row], ok))
                })
                .collect();
            (entropy_columns(args.path), rows)
        }
        Quantity::Rates => {
            if args.optimize && matches!(args.variable, SweepVariable::Alpha | SweepVariable::A) {
                return Err(Error::InvalidParameter(
                    "with --optimize only eta or n can be swept".into(),
                )
                .into());
            }
            if args.estimators.is_empty() {
                return Err(Error::InvalidParameter("no estimator selected".into()).into());
            }
            let bounds = args.bounds.bounds();
            let rows = grid
                .par_iter()
                .map(|&x| {
                    let pt = RatePoint {
                        modulation,
                        eta: need("eta", pick(SweepVariable::Eta, eta, x))?,
                        n: need("n", pick(SweepVariable::N, n, x))?,
                        alpha: pick(SweepVariable::Alpha, alpha, x),
                        a: pick(SweepVariable::A, a, x),
                    };
                    let mut rows = Vec::new();
                    let mut ok = true;
                    for &est in &args.estimators {
                        let r = compute_rate(est, &pt, &args.security, args.optimize, &bounds)?;
                        ok &= r.converged;
                        rows.push(rate_row(&r));
                    }
                    Ok((rows, ok))
                })
                .collect();
            (RATE_COLUMNS.to_vec(), rows)
        }
    };

    let mut all = Vec::with_capacity(rows.len());
    let mut converged = true;
    for r in rows {
        let (block, ok) = r?;
        converged &= ok;
        all.extend(block);
    }
    let sink: Box<dyn Write + '_> = match &args.output {
        Some(path) => Box::new(BufWriter::new(File::create(path)?)),
        None => Box::new(out),
    };
    let mut w = CsvWriter::new(sink, invocation, &columns)?;
    for row in &all {
        w.row(row)?;
    }
    w.finish()?;
    Ok(if converged {
        Status::Ok
    } else {
        Status::NotConverged
    })
}

fn cmd_verify(args: &VerifyArgs, out: &mut dyn Write) -> std::result::Result<Status, CliError> {
    if args.shots == 0 {
        return Err(Error::InvalidParameter("--shots must be >= 1".into()).into());
    }
    let opts = VerifyOptions {
        seed: args.seed,
        shots: args.shots,
        duality_states: args.duality_states,
    };
    let report = run_suite(args.suite, &opts)?;
    writeln!(out, "{report}")?;
    Ok(if report.passed() {
        Status::Ok
    } else {
        Status::VerificationFailed
    })
}
