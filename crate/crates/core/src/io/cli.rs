//! Command-line surface: `simulate`, `sweep`, `verify`, `lemma`, `predict`.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use super::config::RunConfig;
use super::csv::{betas_to_csv, crossings_to_csv, trajectory_to_csv, write_atomic};
use super::manifest::{OutputLock, RunManifest};
use super::verify::run_verify;
use crate::error::{Error, Result};
use crate::evolution::{evolve_ep, evolve_nls, EPState, Recording};
use crate::spectral::{gaussian_initial, sobolev_norm};
use crate::sweep::{config_hash, run_algorithm_a, CurveCache};
use crate::theory::{
    beta_predict, bound_constants, existence_horizon, lemma_roots, y1_series, BoundInputs,
    LemmaQInput, Model, SeriesOrder, SERIES_REGIME_LIMIT,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_IO: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;
pub const EXIT_INCOMPLETE: i32 = 4;

/// Exit-code category of an error.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Io { .. } | Error::Locked(_) | Error::Json(_) => EXIT_IO,
        Error::InvalidGrid(_)
        | Error::GridTooLarge { .. }
        | Error::InvalidParameter { .. }
        | Error::Config { .. }
        | Error::ConfigParse(_) => EXIT_CONFIG,
        _ => EXIT_NUMERICAL,
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "polariton",
    version,
    about = "Nonlinear onset times for exciton-polariton and NLS dynamics"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct ConfigArgs {
    /// TOML run configuration; defaults apply when omitted.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Overrides `[physics] model`.
    #[arg(long)]
    model: Option<Model>,
    /// Overrides `[output] dir`.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evolve one trajectory and write its norms.
    Simulate {
        #[command(flatten)]
        config: ConfigArgs,
        /// Amplitude of the initial Gaussian photon field.
        #[arg(long, default_value_t = 1.0)]
        delta: f64,
    },
    /// Run Algorithm A: error curves, crossings, regressions.
    Sweep {
        #[command(flatten)]
        config: ConfigArgs,
        #[arg(long)]
        workers: Option<usize>,
    },
    /// Run the invariant and oracle checks.
    Verify {
        #[command(flatten)]
        config: ConfigArgs,
    },
    /// Tabulate the roots of Q(y) = eta y^p - y + delta and the y1 series.
    Lemma {
        #[arg(long, default_value_t = 3.0)]
        p: f64,
        #[arg(long, default_value_t = 0.05)]
        delta: f64,
        /// Comma-separated values of eta.
        #[arg(long, value_delimiter = ',', default_values_t = [1e-4, 1e-3, 1e-2, 1e-1])]
        eta: Vec<f64>,
        #[arg(long, default_value_t = 3)]
        order: u32,
    },
    /// Print the predicted onset exponent and the bound constants.
    Predict {
        #[arg(long)]
        alpha: f64,
        #[arg(long, default_value_t = 3.0)]
        p: f64,
        #[arg(long, default_value_t = Model::Ep)]
        model: Model,
        #[arg(long, default_value_t = 1.0)]
        g: f64,
        #[arg(long, default_value_t = 1.0)]
        gamma: f64,
        /// Initial data norm M.
        #[arg(long, default_value_t = 1.0)]
        m: f64,
        #[arg(long, default_value_t = 1.0)]
        kp: f64,
        #[arg(long, default_value_t = 0.0)]
        c1: f64,
        #[arg(long, default_value_t = 1.0)]
        c2: f64,
    },
}

fn load_config(args: &ConfigArgs) -> Result<RunConfig> {
    let mut config = match &args.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    if let Some(model) = args.model {
        if config.physics.model != model {
            config.physics.model = model;
            config.sweep.comparator = None;
            config.solver = Default::default();
        }
    }
    config.apply_env_overrides()?;
    if let Some(dir) = &args.output {
        config.output.dir = dir.clone();
    }
    config.fill_defaults();
    config.validate()?;
    Ok(config)
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
            let rendered = e.render().to_string();
            let _ = if code == EXIT_OK {
                write!(out, "{rendered}")
            } else {
                write!(err, "{rendered}")
            };
            return code;
        }
    };
    match dispatch(cli.command, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

/// Entry point for the binary: real argv and standard streams.
pub fn main_exit_code() -> i32 {
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run(std::env::args_os(), &mut stdout.lock(), &mut stderr.lock())
}

fn io_err(e: std::io::Error) -> Error {
    Error::io("<stdout>", e)
}

fn dispatch(command: Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    match command {
        Command::Simulate { config, delta } => simulate(&load_config(&config)?, delta, out, err),
        Command::Sweep { config, workers } => {
            let mut config = load_config(&config)?;
            if let Some(w) = workers {
                config.sweep.workers = w;
                config.validate()?;
            }
            sweep(&config, out)
        }
        Command::Verify { config } => {
            let report = run_verify(&load_config(&config)?)?;
            for c in &report.checks {
                let tag = if c.passed { "PASS" } else { "FAIL" };
                writeln!(out, "{tag} {}: {}", c.name, c.detail).map_err(io_err)?;
            }
            for n in &report.notes {
                writeln!(out, "note: {n}").map_err(io_err)?;
            }
            Ok(if report.all_passed() {
                EXIT_OK
            } else {
                EXIT_NUMERICAL
            })
        }
        Command::Lemma {
            p,
            delta,
            eta,
            order,
        } => {
            let order = SeriesOrder::try_from(order)?;
            writeln!(out, "eta,x,y_min,y1,y1_series,y2").map_err(io_err)?;
            for e in eta {
                let input = LemmaQInput::new(e, delta, p)?;
                let roots = lemma_roots(&input)?;
                let series = if input.expansion_parameter() < SERIES_REGIME_LIMIT {
                    y1_series(&input, order)?.to_string()
                } else {
                    "-".into()
                };
                writeln!(
                    out,
                    "{e},{},{},{},{series},{}",
                    input.expansion_parameter(),
                    roots.y_min,
                    roots.y1,
                    roots.y2
                )
                .map_err(io_err)?;
            }
            Ok(EXIT_OK)
        }
        Command::Predict {
            alpha,
            p,
            model,
            g,
            gamma,
            m,
            kp,
            c1,
            c2,
        } => {
            let prediction = beta_predict(alpha, p, model)?;
            match prediction.beta {
                Some(beta) => writeln!(out, "beta = {beta}"),
                None => writeln!(out, "beta > 0 (alpha >= 1/(p-1): exponent not determined)"),
            }
            .map_err(io_err)?;
            let params = crate::evolution::ModelParams {
                g,
                gamma,
                p,
                ..Default::default()
            };
            let k = bound_constants(
                &params,
                BoundInputs {
                    m,
                    kp,
                    c: 1.0,
                    c1,
                    c2,
                    alpha,
                },
            )?;
            writeln!(
                out,
                "B = {}\nB1 = {}\nB2 = {}\nq = {}",
                k.b, k.b1, k.b2, k.q
            )
            .map_err(io_err)?;
            Ok(EXIT_OK)
        }
    }
}

fn write_config_echo(config: &RunConfig, dir: &Path) -> Result<()> {
    write_atomic(&dir.join("config.toml"), &config.to_toml_string())
}

fn simulate(
    config: &RunConfig,
    delta: f64,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<i32> {
    if !(delta.is_finite() && delta > 0.0) {
        return Err(Error::param("delta", format!("must be > 0, got {delta}")));
    }
    let dir = &config.output.dir;
    let _lock = OutputLock::acquire(dir)?;
    let sweep_config = config.to_sweep_config();
    let mut manifest = RunManifest::begin(config_hash(&sweep_config));
    let grid = config.grid()?;
    let params = config.model_params();
    let horizon = config.horizon();
    let phi0 = gaussian_initial(&grid, delta)?;

    let data_norm = sobolev_norm(&phi0, params.s);
    let guaranteed = existence_horizon(2.0 * data_norm, 0.5, params.gamma, params.g, 1.0)?;
    if horizon > guaranteed {
        writeln!(
            err,
            "warning: horizon {horizon} exceeds the guaranteed existence time {guaranteed:.4e} for this data"
        )
        .map_err(io_err)?;
    }

    let result = match config.physics.model {
        Model::Ep => evolve_ep(
            &EPState::photon_only(phi0),
            &params,
            &config.step_spec(),
            horizon,
            Recording::NormsOnly,
        ),
        Model::Nls => evolve_nls(
            &phi0,
            &params,
            &config.step_spec(),
            horizon,
            Recording::NormsOnly,
        ),
    };
    write_config_echo(config, dir)?;
    let code = match &result {
        Ok(traj) => {
            write_atomic(&dir.join("trajectory.csv"), &trajectory_to_csv(traj))?;
            let last = traj.last().expect("at least the initial sample");
            let summary = json!({
                "config": config,
                "delta": delta,
                "samples": traj.len(),
                "final": {
                    "t": last.time,
                    "norm_phi": last.norm_phi,
                    "norm_psi": last.norm_psi,
                    "mass": last.mass,
                },
                "existence_horizon": guaranteed,
            });
            write_atomic(
                &dir.join("summary.json"),
                &serde_json::to_string_pretty(&summary)?,
            )?;
            writeln!(
                out,
                "t = {}: |phi|_s = {}, |psi|_s = {}, mass = {}",
                last.time, last.norm_phi, last.norm_psi, last.mass
            )
            .map_err(io_err)?;
            manifest.job("simulate", true, None);
            EXIT_OK
        }
        Err(e) => {
            manifest.job("simulate", false, Some(e.to_string()));
            writeln!(err, "error: {e}").map_err(io_err)?;
            exit_code(e)
        }
    };
    manifest.finish(dir)?;
    Ok(code)
}

fn sweep(config: &RunConfig, out: &mut dyn Write) -> Result<i32> {
    let dir = &config.output.dir;
    let _lock = OutputLock::acquire(dir)?;
    let sweep_config = config.to_sweep_config();
    let mut manifest = RunManifest::begin(config_hash(&sweep_config));
    let cache = CurveCache::on_disk(dir);
    let report = run_algorithm_a(&sweep_config, &cache)?;

    write_config_echo(config, dir)?;
    write_atomic(
        &dir.join("crossings.csv"),
        &crossings_to_csv(&report.crossings),
    )?;
    write_atomic(&dir.join("betas.csv"), &betas_to_csv(&report))?;
    let summary = json!({
        "config": config,
        "config_hash": report.config_hash,
        "meta_fit": report.meta_fit,
        "theory": {
            "slope": report.theory_slope,
            "intercept": report.theory_intercept,
        },
        "betas": report.betas,
        "solver": {
            "dt": sweep_config.step.dt,
            "samples_per_unit_time": sweep_config.step.samples_per_unit_time,
            "horizon": sweep_config.horizon,
            "comparator": sweep_config.comparator,
            "simulations": report.simulations,
        },
        "complete": report.is_complete(),
    });
    write_atomic(
        &dir.join("summary.json"),
        &serde_json::to_string_pretty(&summary)?,
    )?;

    for c in &report.curves {
        manifest.job(
            format!("curve delta={}", c.key.delta),
            c.failure.is_none(),
            c.failure.clone(),
        );
    }
    for r in report.crossings.iter().filter(|r| r.failure.is_some()) {
        writeln!(
            out,
            "warning: alpha={} delta={} epsilon={}: {}",
            r.alpha,
            r.delta,
            r.epsilon,
            r.failure.as_deref().unwrap_or_default()
        )
        .map_err(io_err)?;
    }
    writeln!(out, "alpha,beta,predicted,r2,npoints").map_err(io_err)?;
    for row in &report.betas {
        let measured = row.fit.map_or("-".to_string(), |f| f.slope.to_string());
        let predicted = row
            .prediction
            .beta
            .map_or("-".to_string(), |b| b.to_string());
        let (r2, n) = row.fit.map_or(("-".to_string(), 0), |f| {
            (f.r_squared.to_string(), f.points)
        });
        writeln!(out, "{},{measured},{predicted},{r2},{n}", row.alpha).map_err(io_err)?;
    }
    if let Some(fit) = report.meta_fit {
        writeln!(
            out,
            "meta-fit: slope {} (theory {}), intercept {} (theory {})",
            fit.slope, report.theory_slope, fit.intercept, report.theory_intercept
        )
        .map_err(io_err)?;
    }
    manifest.finish(dir)?;
    Ok(if report.is_complete() {
        EXIT_OK
    } else {
        EXIT_INCOMPLETE
    })
}
