//! The `simulate`, `analytic`, and `sweep` subcommands.

use std::io::Write as _;
use std::path::Path;

use clap::Args;

use zeno_qubit::analytic::{self, DynamicsParams};
use zeno_qubit::channel::ChannelParams;
use zeno_qubit::protocol::{self, ProtocolConfig};
use zeno_qubit::qmath::ComputationalBasis;

use crate::settings::{ConfigFile, ParamOpts, Resolved, SettingsError};
use crate::table::{fmt_float, fmt_int, CsvTable};

/// Command failure split by exit-code class: configuration problems exit
/// with 2, validation/runtime failures with 1.
#[derive(Debug)]
pub enum CmdError {
    Config(String),
    Runtime(String),
}

impl From<SettingsError> for CmdError {
    fn from(e: SettingsError) -> Self {
        CmdError::Config(e.to_string())
    }
}

impl CmdError {
    pub fn message(&self) -> &str {
        match self {
            CmdError::Config(m) | CmdError::Runtime(m) => m,
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CmdError::Config(_) => 2,
            CmdError::Runtime(_) => 1,
        }
    }
}

fn config_err(e: zeno_qubit::Error) -> CmdError {
    CmdError::Config(e.to_string())
}

fn runtime_err(e: zeno_qubit::Error) -> CmdError {
    CmdError::Runtime(e.to_string())
}

/// Writes the table to `out` (or stdout), and the summary line to stdout
/// (or stderr when the table itself occupies stdout).
pub fn emit(table: &CsvTable, out: Option<&Path>, summary: Option<String>) -> Result<(), CmdError> {
    match out {
        Some(path) => {
            std::fs::write(path, table.render())
                .map_err(|e| CmdError::Config(format!("cannot write {}: {e}", path.display())))?;
            if let Some(line) = summary {
                println!("{line}");
            }
        }
        None => {
            print!("{}", table.render());
            std::io::stdout().flush().ok();
            if let Some(line) = summary {
                eprintln!("{line}");
            }
        }
    }
    Ok(())
}

/// `simulate`: run the matrix-level protocol and compare each recorded
/// population against the closed form.
pub fn simulate(opts: &ParamOpts) -> Result<(), CmdError> {
    let r = Resolved::from_opts(opts)?;
    let channel = ChannelParams::new(r.p, r.tau).map_err(config_err)?;
    let basis = ComputationalBasis::new(r.theta, r.phi).map_err(config_err)?;
    let config =
        ProtocolConfig::new(channel, basis, r.delta, r.steps, r.bit).map_err(config_err)?;
    let params = DynamicsParams::new(r.theta, r.p, r.tau, r.bit).map_err(config_err)?;

    let series = protocol::run(&config).map_err(runtime_err)?;

    let mut table = CsvTable::new(vec!["step", "time", "a_simulated", "a_analytic", "abs_error"]);
    let mut max_err: f64 = 0.0;
    for (k, (&t, &a_sim)) in series.times.iter().zip(&series.a).enumerate() {
        let a_formula = analytic::population_general(&params, t, r.delta).map_err(runtime_err)?;
        let err = (a_sim - a_formula).abs();
        max_err = max_err.max(err);
        table.push_row(vec![
            fmt_int(k as i64),
            fmt_float(t, r.precision),
            fmt_float(a_sim, r.precision),
            fmt_float(a_formula, r.precision),
            fmt_float(err, r.precision),
        ]);
    }
    emit(
        &table,
        r.out.as_deref(),
        Some(format!("max_abs_error = {}", fmt_float(max_err, 17))),
    )
}

/// `analytic`: evaluate every closed form on the stroboscopic grid t = kΔ.
pub fn analytic_cmd(opts: &ParamOpts) -> Result<(), CmdError> {
    let r = Resolved::from_opts(opts)?;
    ChannelParams::new(r.p, r.tau).map_err(config_err)?;
    ComputationalBasis::new(r.theta, r.phi).map_err(config_err)?;
    let params = DynamicsParams::new(r.theta, r.p, r.tau, r.bit).map_err(config_err)?;
    if r.steps == 0 {
        return Err(CmdError::Config("steps must be at least 1".into()));
    }
    if !(r.delta > 0.0) {
        return Err(CmdError::Config(format!(
            "delta must be positive, got {}",
            r.delta
        )));
    }

    let mut table = CsvTable::new(vec![
        "step",
        "time",
        "a_general",
        "a_zeno",
        "a_first_order",
        "a_free",
        "psuc_general",
        "psuc_zeno",
        "psuc_first_order",
        "psuc_free",
    ]);
    for k in 0..=r.steps {
        let t = f64::from(k) * r.delta;
        table.push_row(vec![
            fmt_int(i64::from(k)),
            fmt_float(t, r.precision),
            fmt_float(
                analytic::population_general(&params, t, r.delta).map_err(runtime_err)?,
                r.precision,
            ),
            fmt_float(analytic::population_zeno(&params, t), r.precision),
            fmt_float(
                analytic::population_first_order(&params, t, r.delta).map_err(runtime_err)?,
                r.precision,
            ),
            fmt_float(analytic::population_free(&params, t), r.precision),
            fmt_float(
                analytic::success_general(t, r.delta, r.theta, r.tau).map_err(runtime_err)?,
                r.precision,
            ),
            fmt_float(analytic::success_zeno(t, r.theta, r.tau), r.precision),
            fmt_float(
                analytic::success_first_order(t, r.delta, r.theta, r.tau),
                r.precision,
            ),
            fmt_float(analytic::success_free(t, r.theta, r.tau), r.precision),
        ]);
    }
    emit(&table, r.out.as_deref(), None)
}

/// Flags of the `sweep` subcommand; θ and Δ take comma-separated lists.
#[derive(Debug, Args, Default)]
pub struct SweepOpts {
    /// Comma-separated theta values in radians (empty for a header-only CSV)
    #[arg(long, value_delimiter = ',', num_args = 0..)]
    pub theta: Option<Vec<f64>>,

    /// Comma-separated delta values (time units)
    #[arg(long, value_delimiter = ',', num_args = 0..)]
    pub delta: Option<Vec<f64>>,

    /// Maximum time; each (theta, delta) row set samples t = 0, Δ, …, ≤ t
    #[arg(long)]
    pub t: Option<f64>,

    /// Relaxation time tau
    #[arg(long)]
    pub tau: Option<f64>,

    /// Output CSV path; stdout if omitted
    #[arg(long)]
    pub out: Option<std::path::PathBuf>,

    /// Significant digits for CSV floats
    #[arg(long)]
    pub precision: Option<usize>,

    /// Config file with `key = value` lines
    #[arg(long)]
    pub config: Option<std::path::PathBuf>,
}

const MAX_SWEEP_EVALUATIONS: u64 = 1_000_000;

/// `sweep`: success probability over a (θ, Δ, t = nΔ) grid with the bound
/// sandwich recorded per row.
pub fn sweep(opts: &SweepOpts) -> Result<(), CmdError> {
    let config = match &opts.config {
        Some(path) => ConfigFile::load(path)?,
        None => ConfigFile::default(),
    };
    let thetas = opts
        .theta
        .clone()
        .or(config.parsed_list("theta")?)
        .unwrap_or_else(|| {
            let quarter = std::f64::consts::FRAC_PI_4;
            vec![0.0, quarter / 4.0, quarter / 2.0, 3.0 * quarter / 4.0, quarter]
        });
    let deltas = opts
        .delta
        .clone()
        .or(config.parsed_list("delta")?)
        .unwrap_or_else(|| vec![0.1, 0.5, 1.0]);
    let base = ParamOpts {
        t: opts.t,
        tau: opts.tau,
        out: opts.out.clone(),
        precision: opts.precision,
        config: opts.config.clone(),
        ..Default::default()
    };
    let r = Resolved::from_opts(&base)?;

    for &theta in &thetas {
        if !(0.0..=std::f64::consts::FRAC_PI_2).contains(&theta) {
            return Err(CmdError::Config(format!(
                "theta values must lie in [0, pi/2], got {theta}"
            )));
        }
    }
    let mut evaluations: u64 = 0;
    for &delta in &deltas {
        if !(delta > 0.0) {
            return Err(CmdError::Config(format!(
                "delta values must be positive, got {delta}"
            )));
        }
        let n_max = (r.t / delta * (1.0 + 1e-12)).floor() as u64;
        evaluations += (thetas.len() as u64) * (n_max + 1);
    }
    if evaluations > MAX_SWEEP_EVALUATIONS {
        return Err(CmdError::Config(format!(
            "grid too large: {evaluations} evaluations exceed the {MAX_SWEEP_EVALUATIONS} cap"
        )));
    }

    let mut table = CsvTable::new(vec![
        "theta",
        "delta",
        "t",
        "p_suc_general",
        "p_suc_zeno",
        "p_suc_free",
        "within_bounds",
    ]);
    for &theta in &thetas {
        for &delta in &deltas {
            let n_max = (r.t / delta * (1.0 + 1e-12)).floor() as u32;
            for n in 0..=n_max {
                let t = f64::from(n) * delta;
                let general =
                    analytic::success_general(t, delta, theta, r.tau).map_err(config_err)?;
                let zeno = analytic::success_zeno(t, theta, r.tau);
                let free = analytic::success_free(t, theta, r.tau);
                let within = general >= zeno - 1e-12 && general <= free + 1e-12;
                table.push_row(vec![
                    fmt_float(theta, r.precision),
                    fmt_float(delta, r.precision),
                    fmt_float(t, r.precision),
                    fmt_float(general, r.precision),
                    fmt_float(zeno, r.precision),
                    fmt_float(free, r.precision),
                    fmt_int(i64::from(within)),
                ]);
            }
        }
    }
    emit(&table, r.out.as_deref(), None)
}
