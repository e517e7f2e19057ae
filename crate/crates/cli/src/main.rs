use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use ris_autonomy::SearchConfig;
use ris_autonomy_cli::{
    cmd_select_site, cmd_solve, cmd_validate, logspace, read_config, run_sweep, write_sweep_csv,
    CliError, Outcome, ValidateOptions,
};

/// Placement and reflection response of an energy-autonomous RIS.
#[derive(Parser, Debug)]
#[command(name = "ris-autonomy", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Common {
    /// Scenario file (`key = value` per line).
    #[arg(long)]
    config: PathBuf,
    /// Replace a config entry, e.g. `--override p_chip_w=1e-6`. Repeatable.
    #[arg(long = "override", value_name = "KEY=VALUE")]
    overrides: Vec<String>,
}

#[derive(Args, Debug)]
struct Search {
    /// Coarse placement step of the linear search, meters.
    #[arg(long, default_value_t = 0.1)]
    search_step: f64,
    /// Lower end of the placement search range, meters.
    #[arg(long, default_value_t = 0.0)]
    r1h_min: f64,
    /// Upper end of the placement search range (default: TX–RX distance).
    #[arg(long)]
    r1h_max: Option<f64>,
}

impl Search {
    fn config(&self) -> SearchConfig {
        SearchConfig {
            r1h_min_m: self.r1h_min,
            r1h_max_m: self.r1h_max,
            coarse_step_m: self.search_step,
            ..SearchConfig::default()
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Optimal placement, amplitude and phases for one scenario.
    Solve {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        search: Search,
        /// Write the sampled objective curve as CSV.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Optimum over a grid of chip powers and lateral offsets, as CSV.
    Sweep {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        search: Search,
        /// Log-spaced chip powers: START STOP N.
        #[arg(long, num_args = 3, value_names = ["START", "STOP", "N"], conflicts_with = "pc_list")]
        pc_log: Option<Vec<f64>>,
        /// Explicit chip powers, comma separated.
        #[arg(long, value_delimiter = ',')]
        pc_list: Option<Vec<f64>>,
        /// Lateral offsets, comma separated.
        #[arg(long, value_delimiter = ',', default_value = "5,10,20")]
        ys_list: Vec<f64>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Compare the analytic optimum with the brute-force oracles.
    Validate {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        search: Search,
        /// Oracle placement step, meters.
        #[arg(long, default_value_t = 0.5)]
        r1h_step: f64,
        /// Oracle amplitude step.
        #[arg(long, default_value_t = 0.001)]
        a_step: f64,
        /// Phase levels for the 2x2 exhaustive search.
        #[arg(long, default_value_t = 16)]
        phase_levels: usize,
        /// Lateral offsets to validate (default: the config's).
        #[arg(long, value_delimiter = ',')]
        ys_list: Vec<f64>,
        /// Chip powers to validate (default: the config's).
        #[arg(long, value_delimiter = ',')]
        pc_list: Vec<f64>,
    },
    /// Choose among fixed mounted surfaces.
    SelectSite {
        #[command(flatten)]
        common: Common,
        /// Sites file with `site.<i>.r1h_m`, `.lateral_offset_m`, `.ris_height_m`.
        #[arg(long)]
        sites: PathBuf,
    },
}

fn run(cli: Cli) -> Result<Outcome, CliError> {
    let stdout = io::stdout();
    let mut out = stdout.lock();
    match cli.command {
        Command::Solve {
            common,
            search,
            out: curve,
        } => cmd_solve(
            &common.config,
            &common.overrides,
            &search.config(),
            curve.as_deref(),
            &mut out,
        ),
        Command::Sweep {
            common,
            search,
            pc_log,
            pc_list,
            ys_list,
            out: path,
        } => {
            let base = read_config(&common.config, &common.overrides)?;
            let pcs = match (pc_log, pc_list) {
                (Some(v), _) => {
                    let n = v[2];
                    if !(n >= 1.0 && n.fract() == 0.0) {
                        return Err(CliError::Usage(format!("--pc-log N must be a positive integer, got {n}")));
                    }
                    logspace(v[0], v[1], n as usize)
                }
                (None, Some(list)) => list,
                (None, None) => {
                    let s = ris_autonomy::Scenario::from_config(base.clone())?;
                    vec![s.power_model.chip_power_w()]
                }
            };
            let rows = run_sweep(&base, &pcs, &ys_list, &search.config())?;
            write_sweep_csv(&path, &rows)?;
            let feasible = rows.iter().filter(|r| r.feasible).count();
            writeln!(
                out,
                "wrote {} rows ({} feasible) to {}",
                rows.len(),
                feasible,
                path.display()
            )?;
            Ok(Outcome::Success)
        }
        Command::Validate {
            common,
            search,
            r1h_step,
            a_step,
            phase_levels,
            ys_list,
            pc_list,
        } => {
            let opts = ValidateOptions {
                r1h_step_m: r1h_step,
                a_step,
                phase_levels,
                search: search.config(),
            };
            cmd_validate(
                &common.config,
                &common.overrides,
                &ys_list,
                &pc_list,
                &opts,
                &mut out,
            )
        }
        Command::SelectSite { common, sites } => {
            cmd_select_site(&common.config, &common.overrides, &sites, &mut out)
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(outcome) => ExitCode::from(outcome.code() as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
