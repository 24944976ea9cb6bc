//! `critprobe`: probe quantum criticality of the XY chain through the
//! geometric phase of an auxiliary qubit.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use critprobe::config::{resolve, Overrides, RunConfig};
use critprobe::{
    dissipative_cmd, echo, ensemble, scaling, sweep,
    verify::{self, Level, Tolerances},
    CliError,
};
use critprobe_core::dissipative::DissipativeParams;

#[derive(Parser)]
#[command(
    name = "critprobe",
    version,
    about = "XY-chain criticality probe: qubit decoherence and geometric phases",
    after_help = "Exit codes: 0 success, 2 configuration error, \
                  3 resolution cap reached under --strict, 4 verification failure."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Default)]
struct CommonOpts {
    /// Number of chain sites (even, >= 4)
    #[arg(long = "N")]
    n: Option<usize>,
    /// Transverse field
    #[arg(long)]
    lambda: Option<f64>,
    /// Anisotropy (1 = transverse Ising, 0 = XX)
    #[arg(long)]
    gamma: Option<f64>,
    /// Qubit-chain coupling
    #[arg(long)]
    g: Option<f64>,
    /// Qubit level splitting
    #[arg(long)]
    mu: Option<f64>,
    /// Initial qubit superposition angle (default pi/4)
    #[arg(long = "theta-q")]
    theta_q: Option<f64>,
    /// Total evolution time (default 10)
    #[arg(long = "T")]
    total_time: Option<f64>,
    /// Time-grid resolution (exact steps for fixed grids, cap for adaptive)
    #[arg(long)]
    steps: Option<usize>,
    /// Swept grid, var:min:max:count with var in lambda|gamma|g|N|T
    #[arg(long)]
    grid: Option<String>,
    /// Comma-separated gamma values, one output section each
    #[arg(long = "gamma-list")]
    gamma_list: Option<String>,
    /// Output CSV path (stdout when omitted)
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads for sweeps (0 = all cores); never changes the data
    #[arg(long)]
    jobs: Option<usize>,
    /// Exit with code 3 if any trajectory hits its resolution cap
    #[arg(long)]
    strict: bool,
    /// Verify before sweeping: off, fast, or full
    #[arg(long = "verify-level")]
    verify_level: Option<String>,
    /// TOML config file; flags override its entries
    #[arg(long)]
    config: Option<PathBuf>,
}

impl CommonOpts {
    fn resolve(&self) -> Result<RunConfig, CliError> {
        let overrides = Overrides {
            n_sites: self.n,
            lambda: self.lambda,
            gamma: self.gamma,
            g: self.g,
            mu: self.mu,
            theta_q: self.theta_q,
            total_time: self.total_time,
            steps: self.steps,
            grid: self.grid.clone(),
            gamma_list: self.gamma_list.clone(),
            out: self.out.clone(),
            jobs: self.jobs,
            strict: self.strict,
            verify_level: self.verify_level.clone(),
        };
        resolve(&overrides, self.config.as_deref())
    }
}

#[derive(Subcommand)]
enum Command {
    /// Sweep a parameter and report the geometric phase per grid point
    PhaseSweep {
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Tabulate the decoherence factor F(t) on a uniform time grid
    EchoTrace {
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Angle-derivative scaling sums across chain sizes and anisotropies
    Scaling {
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Evolve the qubit against a spectral ensemble (energy-conserving bath)
    Dissipative {
        #[command(flatten)]
        common: CommonOpts,
        /// Ensemble file: one `energy weight` pair per line, `#` comments
        #[arg(long)]
        ensemble: PathBuf,
        /// Qubit gap (coefficient of sigma_x)
        #[arg(long, default_value_t = 0.5)]
        delta: f64,
        /// sigma_z coupling component
        #[arg(long = "g-z", default_value_t = 0.1)]
        g_z: f64,
        /// sigma_y coupling component
        #[arg(long = "g-y", default_value_t = 0.0)]
        g_y: f64,
    },
    /// Run the self-verification suite
    Verify {
        /// fast: randomized oracle draws; full: adds dense-Fock and gauge checks
        #[arg(long, default_value = "fast")]
        level: String,
    },
}

/// Write `body` to `--out` or stdout.
fn emit(
    out: Option<&PathBuf>,
    body: impl FnOnce(&mut dyn Write) -> std::io::Result<()>,
) -> Result<(), CliError> {
    match out {
        Some(path) => {
            let file = File::create(path)?;
            let mut w = BufWriter::new(file);
            body(&mut w)?;
            w.flush()?;
        }
        None => {
            let stdout = std::io::stdout();
            let mut w = BufWriter::new(stdout.lock());
            body(&mut w)?;
            w.flush()?;
        }
    }
    Ok(())
}

fn run() -> Result<(), CliError> {
    let cli = Cli::parse();
    match cli.command {
        Command::PhaseSweep { common } => {
            let cfg = common.resolve()?;
            let grid = cfg
                .grid
                .clone()
                .ok_or_else(|| CliError::Config("phase-sweep requires --grid".into()))?;
            let pre_verify = match cfg.verify_level {
                critprobe::config::VerifyLevel::Off => None,
                critprobe::config::VerifyLevel::Fast => Some(Level::Fast),
                critprobe::config::VerifyLevel::Full => Some(Level::Full),
            };
            if let Some(level) = pre_verify {
                let mut err = std::io::stderr().lock();
                if !verify::run(level, &Tolerances::default(), &mut err)? {
                    return Err(CliError::VerifyFailed);
                }
            }
            let outcome = sweep::run_phase_sweep(&cfg)?;
            emit(cfg.out.as_ref(), |w| {
                sweep::write_csv(&cfg, &outcome, &mut &mut *w)
            })?;
            for line in sweep::summary_lines(&grid, &outcome) {
                if cfg.out.is_some() {
                    println!("{line}");
                } else {
                    eprintln!("{line}");
                }
            }
            if cfg.strict && outcome.any_capped {
                return Err(CliError::StrictNumerical);
            }
            Ok(())
        }
        Command::EchoTrace { common } => {
            let cfg = common.resolve()?;
            let trace = echo::run_echo_trace(&cfg)?;
            emit(cfg.out.as_ref(), |w| {
                echo::write_csv(&cfg, &trace, &mut &mut *w)
            })
        }
        Command::Scaling { common } => {
            let cfg = common.resolve()?;
            let outcome = scaling::run_scaling(&cfg)?;
            emit(cfg.out.as_ref(), |w| {
                scaling::write_csv(&cfg, &outcome, &mut &mut *w)
            })
        }
        Command::Dissipative {
            common,
            ensemble: path,
            delta,
            g_z,
            g_y,
        } => {
            let cfg = common.resolve()?;
            let ens = ensemble::load_ensemble(&path)?;
            let params = DissipativeParams::new(delta, g_z, g_y)?;
            let outcome = dissipative_cmd::run_dissipative(&cfg, &ens, &params)?;
            emit(cfg.out.as_ref(), |w| {
                dissipative_cmd::write_csv(&cfg, &params, &outcome, &mut &mut *w)
            })?;
            if cfg.strict && outcome.trajectory.capped {
                return Err(CliError::StrictNumerical);
            }
            Ok(())
        }
        Command::Verify { level } => {
            let level = match level.as_str() {
                "fast" => Level::Fast,
                "full" => Level::Full,
                other => {
                    return Err(CliError::Config(format!(
                        "unknown verify level `{other}` (expected fast|full)"
                    )))
                }
            };
            let stdout = std::io::stdout();
            let mut w = BufWriter::new(stdout.lock());
            let ok = verify::run(level, &Tolerances::default(), &mut w)?;
            w.flush()?;
            if ok {
                Ok(())
            } else {
                Err(CliError::VerifyFailed)
            }
        }
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("critprobe: {e}");
            e.exit_code()
        }
    }
}
