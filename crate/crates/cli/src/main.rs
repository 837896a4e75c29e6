//! Command-line interface: single-point evaluation, number-unconstrained
//! optimization, parameter-plane sweeps and Monte-Carlo estimator checks.
//!
//! Units: frequencies are in units of the unbroadened linewidth gamma_0
//! (detunings are dimensionless, detuning Fisher information is per
//! gamma_0^2); quadratures use the vacuum-variance-1 convention.
//!
//! Exit codes: 0 success, 1 runtime or computation failure, 2 usage error,
//! 3 boundary optimum (the best point sits against a search bound).

mod config;

use clap::{Args, Parser, Subcommand};
use std::path::PathBuf;
use std::str::FromStr;

use satsense::{
    crb_check, fisher_information, output_quadrature_stats, quantum_advantage_recorded,
    run_sweep, write_table, AxisSpec, Error as CoreError, GridSpec, Medium, NormalLocation,
    NormalLogVariance, OptimizerConfig, OutcomeModel, PhysicalModel, ProbeState, SimConfig,
    StateFamily, TableFormat, Target,
};

const EXIT_RUNTIME: i32 = 1;
const EXIT_USAGE: i32 = 2;
const EXIT_BOUNDARY: i32 = 3;

#[derive(Debug)]
pub struct CliError {
    message: String,
    code: i32,
}

impl CliError {
    fn usage(message: impl Into<String>) -> Self {
        Self { message: message.into(), code: EXIT_USAGE }
    }
    fn runtime(message: impl Into<String>) -> Self {
        Self { message: message.into(), code: EXIT_RUNTIME }
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        let code = match &e {
            CoreError::BoundaryOptimum(_) => EXIT_BOUNDARY,
            CoreError::NonFiniteField(_)
            | CoreError::NegativeMagnitude(_)
            | CoreError::InvalidGrid(_)
            | CoreError::InvalidConfig(_) => EXIT_USAGE,
            _ => EXIT_RUNTIME,
        };
        Self { message: e.to_string(), code }
    }
}

#[derive(Parser)]
#[command(
    name = "satsense",
    version,
    about = "Fisher-information analysis of quadrature probing of a saturable resonant absorber",
    long_about = "Fisher-information analysis of quadrature probing of a saturable resonant \
                  absorber.\n\nConventions: all frequencies are in units of the unbroadened \
                  linewidth gamma_0, so --delta-bar is dimensionless and detuning Fisher \
                  information is reported per gamma_0^2; optical-depth information is \
                  dimensionless. Quadrature variances are normalized so the vacuum has \
                  variance 1.\n\nEach subcommand accepts --config FILE (a JSON object whose \
                  keys mirror the flag names in kebab-case); explicit flags override file \
                  values."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate the medium response, output statistics and Fisher
    /// information at one working point
    Eval(EvalArgs),
    /// Maximize Fisher information over probe parameters and detuning;
    /// by default optimizes both families and reports the quantum advantage
    Optimize(OptimizeArgs),
    /// Map the quantum advantage over a log-spaced (n_sat, T) grid
    Sweep(SweepArgs),
    /// Estimate Fisher information empirically and check Cramer-Rao
    /// saturation of the maximum-likelihood estimator
    Simulate(SimulateArgs),
}

#[derive(Args)]
#[command(allow_negative_numbers = true)]
pub struct EvalArgs {
    /// On-resonance optical depth T > 0
    #[arg(long = "T")]
    optical_depth: Option<f64>,
    /// Saturation photon number > 0
    #[arg(long = "n-sat")]
    n_sat: Option<f64>,
    /// Working detuning in units of gamma_0
    #[arg(long)]
    delta_bar: Option<f64>,
    /// Displacement magnitude R >= 0
    #[arg(long = "R")]
    displacement: Option<f64>,
    /// Displacement phase theta (radians)
    #[arg(long)]
    theta: Option<f64>,
    /// Squeeze magnitude r >= 0
    #[arg(long)]
    r: Option<f64>,
    /// Squeeze phase psi (radians)
    #[arg(long)]
    psi: Option<f64>,
    /// Estimation target: detuning | od
    #[arg(long)]
    target: Option<String>,
    /// JSON config file mirroring these flags
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Args)]
#[command(allow_negative_numbers = true)]
pub struct OptimizeArgs {
    #[arg(long = "T")]
    optical_depth: Option<f64>,
    #[arg(long = "n-sat")]
    n_sat: Option<f64>,
    /// Estimation target: detuning | od
    #[arg(long)]
    target: Option<String>,
    /// Restrict to one family (coherent | gaussian); default reports the
    /// advantage of the full Gaussian family over the coherent-only SQL
    #[arg(long)]
    family: Option<String>,
    /// Number of low-discrepancy starts
    #[arg(long)]
    n_starts: Option<usize>,
    /// Upper bound on the squeeze parameter r
    #[arg(long)]
    r_max: Option<f64>,
    /// Upper bound on the working detuning
    #[arg(long)]
    delta_bar_max: Option<f64>,
    /// Upper bound on the displacement photon number R^2
    #[arg(long)]
    nbar_max: Option<f64>,
    /// Write the result JSON here (summary then goes to stdout)
    #[arg(long)]
    json_out: Option<PathBuf>,
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Args)]
#[command(allow_negative_numbers = true)]
pub struct SweepArgs {
    #[arg(long)]
    n_sat_min: Option<f64>,
    #[arg(long)]
    n_sat_max: Option<f64>,
    #[arg(long)]
    n_sat_points: Option<usize>,
    #[arg(long)]
    t_min: Option<f64>,
    #[arg(long)]
    t_max: Option<f64>,
    #[arg(long)]
    t_points: Option<usize>,
    /// Estimation target: detuning | od
    #[arg(long)]
    target: Option<String>,
    /// Output path
    #[arg(long)]
    out: Option<PathBuf>,
    /// Output format: csv | json
    #[arg(long)]
    format: Option<String>,
    /// Worker thread cap (default: all cores); does not affect the output
    #[arg(long)]
    threads: Option<usize>,
    #[arg(long)]
    n_starts: Option<usize>,
    #[arg(long)]
    r_max: Option<f64>,
    #[arg(long)]
    delta_bar_max: Option<f64>,
    #[arg(long)]
    nbar_max: Option<f64>,
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Args)]
#[command(allow_negative_numbers = true)]
pub struct SimulateArgs {
    #[arg(long = "T")]
    optical_depth: Option<f64>,
    #[arg(long = "n-sat")]
    n_sat: Option<f64>,
    #[arg(long)]
    delta_bar: Option<f64>,
    #[arg(long = "R")]
    displacement: Option<f64>,
    #[arg(long)]
    theta: Option<f64>,
    #[arg(long)]
    r: Option<f64>,
    #[arg(long)]
    psi: Option<f64>,
    /// Estimation target: detuning | od
    #[arg(long)]
    target: Option<String>,
    /// Samples per experiment
    #[arg(long)]
    samples: Option<usize>,
    /// Number of repeated experiments
    #[arg(long)]
    reps: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Estimator search bracket: LO HI
    #[arg(long, num_args = 2, value_names = ["LO", "HI"])]
    bracket: Vec<f64>,
    /// True parameter value (defaults to the working point)
    #[arg(long)]
    true_value: Option<f64>,
    /// Replace the physical model by a calibration hook:
    /// normal-location | normal-log-variance
    #[arg(long)]
    hook: Option<String>,
    /// Worker thread cap (default: all cores); does not affect the output
    #[arg(long)]
    threads: Option<usize>,
    #[arg(long)]
    json_out: Option<PathBuf>,
    #[arg(long)]
    config: Option<PathBuf>,
}

fn main() {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Eval(mut args) => args.merge_config().and_then(|()| cmd_eval(&args)),
        Command::Optimize(mut args) => args.merge_config().and_then(|()| cmd_optimize(&args)),
        Command::Sweep(mut args) => args.merge_config().and_then(|()| cmd_sweep(&args)),
        Command::Simulate(mut args) => args.merge_config().and_then(|()| cmd_simulate(&args)),
    };
    match outcome {
        Ok(code) => std::process::exit(code),
        Err(e) => {
            eprintln!("error: {}", e.message);
            std::process::exit(e.code);
        }
    }
}

fn require<T: Copy>(value: Option<T>, flag: &str) -> Result<T, CliError> {
    value.ok_or_else(|| CliError::usage(format!("missing required flag --{flag}")))
}

fn parse_target(s: Option<&String>) -> Result<Target, CliError> {
    let s = s.ok_or_else(|| CliError::usage("missing required flag --target"))?;
    Target::from_str(s).map_err(CliError::usage)
}

fn probe_state(
    displacement: Option<f64>,
    theta: Option<f64>,
    r: Option<f64>,
    psi: Option<f64>,
) -> Result<ProbeState, CliError> {
    let r = r.unwrap_or(0.0);
    if r < 0.0 {
        return Err(CliError::usage("r must be >= 0"));
    }
    let displacement = displacement.unwrap_or(0.0);
    if displacement < 0.0 {
        return Err(CliError::usage("R must be >= 0"));
    }
    ProbeState::new(displacement, theta.unwrap_or(0.0), r, psi.unwrap_or(0.0)).map_err(Into::into)
}

fn medium(optical_depth: Option<f64>, n_sat: Option<f64>) -> Result<Medium, CliError> {
    Medium::new(require(optical_depth, "T")?, require(n_sat, "n-sat")?).map_err(Into::into)
}

fn thread_pool(threads: Option<usize>) -> Result<rayon::ThreadPool, CliError> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = threads {
        if n == 0 {
            return Err(CliError::usage("--threads must be >= 1"));
        }
        builder = builder.num_threads(n);
    }
    builder
        .build()
        .map_err(|e| CliError::runtime(format!("cannot build thread pool: {e}")))
}

fn emit_json(value: &serde_json::Value, json_out: Option<&PathBuf>) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(value)
        .map_err(|e| CliError::runtime(format!("cannot serialize output: {e}")))?;
    match json_out {
        Some(path) => std::fs::write(path, text + "\n")
            .map_err(|e| CliError::runtime(format!("cannot write {}: {e}", path.display()))),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn cmd_eval(args: &EvalArgs) -> Result<i32, CliError> {
    let medium = medium(args.optical_depth, args.n_sat)?;
    let state = probe_state(args.displacement, args.theta, args.r, args.psi)?;
    let target = parse_target(args.target.as_ref())?;
    let delta_bar = args.delta_bar.unwrap_or(0.0);
    if !delta_bar.is_finite() {
        return Err(CliError::usage("delta-bar must be finite"));
    }

    let response = medium.complex_response(delta_bar, state.mean_photon_number())?;
    let stats = output_quadrature_stats(&state, &medium, delta_bar);
    let fisher = fisher_information(&state, &medium, delta_bar, target);
    emit_json(
        &serde_json::json!({
            "mu": stats.mu,
            "v": stats.v,
            "phi": response.phi,
            "xi": response.xi,
            "gamma_bar": response.gamma_bar,
            "fisher": fisher,
        }),
        None,
    )?;
    Ok(0)
}

fn optimizer_config(
    n_starts: Option<usize>,
    r_max: Option<f64>,
    delta_bar_max: Option<f64>,
    nbar_max: Option<f64>,
) -> OptimizerConfig {
    let mut config = OptimizerConfig::default();
    if let Some(n) = n_starts {
        config.n_starts = n;
    }
    if let Some(v) = r_max {
        config.r_max = v;
    }
    if let Some(v) = delta_bar_max {
        config.delta_bar_max = v;
    }
    if let Some(v) = nbar_max {
        config.nbar_max = v;
    }
    config
}

fn cmd_optimize(args: &OptimizeArgs) -> Result<i32, CliError> {
    let medium = medium(args.optical_depth, args.n_sat)?;
    let target = parse_target(args.target.as_ref())?;
    let config = optimizer_config(args.n_starts, args.r_max, args.delta_bar_max, args.nbar_max);

    let (json, summary, boundary, trusted) = match &args.family {
        Some(name) => {
            let family = StateFamily::from_str(name).map_err(CliError::usage)?;
            let result = satsense::optimize_recorded(&medium, target, family, &config);
            let summary = format!(
                "{name} optimum: I = {:.6e} at nbar = {:.4e}, delta_bar = {:.4}, regime {} \
                 (starts agreeing: {}{})",
                result.value,
                result.nbar,
                result.delta_bar,
                result.regime,
                result.starts_agreeing,
                if result.boundary_flag { "; BOUNDARY" } else { "" },
            );
            let trusted = result.starts_agreeing >= config.min_agreeing;
            let boundary = result.boundary_flag;
            (serde_json::to_value(&result), summary, boundary, trusted)
        }
        None => {
            let adv = quantum_advantage_recorded(&medium, target, &config);
            let summary = format!(
                "advantage = {:.4} (I_sq = {:.6e}, I_coh = {:.6e}); optimal regime {}{}",
                adv.advantage,
                adv.i_sq,
                adv.i_coh,
                adv.sq_result.regime,
                if adv.boundary_flag() { "; BOUNDARY" } else { "" },
            );
            let trusted = adv.sq_result.starts_agreeing >= config.min_agreeing
                && adv.coh_result.starts_agreeing >= config.min_agreeing;
            let boundary = adv.boundary_flag();
            (serde_json::to_value(&adv), summary, boundary, trusted)
        }
    };
    let json = json.map_err(|e| CliError::runtime(format!("cannot serialize result: {e}")))?;
    emit_json(&json, args.json_out.as_ref())?;
    if args.json_out.is_some() {
        println!("{summary}");
    } else {
        eprintln!("{summary}");
    }
    if !trusted {
        return Err(CliError::runtime(
            "too few starts agree with the best value; increase --n-starts",
        ));
    }
    Ok(if boundary { EXIT_BOUNDARY } else { 0 })
}

fn cmd_sweep(args: &SweepArgs) -> Result<i32, CliError> {
    let target = parse_target(args.target.as_ref())?;
    let grid = GridSpec {
        n_sat: AxisSpec::new(
            args.n_sat_min.unwrap_or(1e-2),
            args.n_sat_max.unwrap_or(1e2),
            args.n_sat_points.unwrap_or(25),
        ),
        optical_depth: AxisSpec::new(
            args.t_min.unwrap_or(1e-2),
            args.t_max.unwrap_or(1e2),
            args.t_points.unwrap_or(25),
        ),
        target,
    };
    let format = match args.format.as_deref() {
        None | Some("csv") => TableFormat::Csv,
        Some("json") => TableFormat::Json,
        Some(other) => {
            return Err(CliError::usage(format!(
                "unknown format `{other}` (expected `csv` or `json`)"
            )))
        }
    };
    let out = args
        .out
        .clone()
        .ok_or_else(|| CliError::usage("missing required flag --out"))?;
    let config = optimizer_config(args.n_starts, args.r_max, args.delta_bar_max, args.nbar_max);

    let pool = thread_pool(args.threads)?;
    let table = pool.install(|| run_sweep(&grid, &config))?;
    write_table(&table, format, &out)?;

    let flagged = table.cells.iter().filter(|c| c.boundary_flag).count();
    let failed = table.cells.iter().filter(|c| c.error.is_some()).count();
    eprintln!(
        "wrote {} cells to {} ({} boundary-flagged, {} untrusted)",
        table.cells.len(),
        out.display(),
        flagged,
        failed,
    );
    Ok(0)
}

fn cmd_simulate(args: &SimulateArgs) -> Result<i32, CliError> {
    let target = parse_target(args.target.as_ref())?;
    if args.bracket.len() != 2 {
        return Err(CliError::usage("--bracket takes exactly two values: LO HI"));
    }

    enum Model {
        Physical(PhysicalModel),
        Location(NormalLocation),
        LogVariance(NormalLogVariance),
    }
    let (model, default_true) = match args.hook.as_deref() {
        None => {
            let medium = medium(args.optical_depth, args.n_sat)?;
            let state = probe_state(args.displacement, args.theta, args.r, args.psi)?;
            let delta_bar = args.delta_bar.unwrap_or(0.0);
            let model = PhysicalModel::new(state, medium, delta_bar, target);
            let default_true = model.true_value();
            (Model::Physical(model), default_true)
        }
        Some("normal-location") => (Model::Location(NormalLocation), 0.0),
        Some("normal-log-variance") => (Model::LogVariance(NormalLogVariance), 0.0),
        Some(other) => {
            return Err(CliError::usage(format!(
                "unknown hook `{other}` (expected `normal-location` or `normal-log-variance`)"
            )))
        }
    };

    let sim = SimConfig {
        n_samples: args.samples.unwrap_or(100),
        n_repetitions: args.reps.unwrap_or(1000),
        seed: args.seed.unwrap_or(0),
        true_value: args.true_value.unwrap_or(default_true),
        bracket: (args.bracket[0], args.bracket[1]),
    };
    let pool = thread_pool(args.threads)?;
    let report = pool.install(|| match &model {
        Model::Physical(m) => crb_check(m as &dyn OutcomeModel, &sim),
        Model::Location(m) => crb_check(m as &dyn OutcomeModel, &sim),
        Model::LogVariance(m) => crb_check(m as &dyn OutcomeModel, &sim),
    })?;

    let json = serde_json::to_value(report)
        .map_err(|e| CliError::runtime(format!("cannot serialize report: {e}")))?;
    emit_json(&json, args.json_out.as_ref())?;
    if args.json_out.is_some() {
        println!(
            "crb_ratio = {:.4} +- {:.4}; empirical FI {:.6e} vs analytic {:.6e}",
            report.crb_ratio, report.crb_ratio_se, report.empirical_fisher, report.analytic_fisher
        );
    }
    Ok(0)
}
