//! Command implementations behind the `ris-autonomy` binary.
//!
//! Each command is a plain function writing its report to any
//! `io::Write`, so integration tests drive them without spawning a process.

pub mod sites;
pub mod sweep;
pub mod validate;

use std::io::{self, Write};
use std::path::{Path, PathBuf};

use ris_autonomy::config::ConfigMap;
use ris_autonomy::optimizer::{OptimalAmplitude, PlacementSolution};
use ris_autonomy::{
    select_site, solve_placement, ConfigError, Error, Scenario, SearchConfig,
};
use thiserror::Error;

pub use sites::parse_sites;
pub use sweep::{logspace, run_sweep, write_sweep_csv, SweepRow};
pub use validate::{validate_scenario, ValidateOptions, ValidationReport};

/// Process exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    /// Feasible solution or passing validation.
    Success = 0,
    Infeasible = 2,
    ConfigError = 3,
    ValidationFailure = 4,
}

impl Outcome {
    pub fn code(self) -> i32 {
        self as i32
    }
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Core(#[from] Error),
    #[error("cannot write {path}: {source}")]
    Output {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Io(#[from] io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Core(Error::Config(_)) => Outcome::ConfigError.code(),
            CliError::Usage(_) => Outcome::ConfigError.code(),
            _ => 1,
        }
    }
}

/// Reads a config file and applies `KEY=VALUE` overrides, unvalidated.
pub fn read_config(path: &Path, overrides: &[String]) -> Result<ConfigMap, ConfigError> {
    let mut map = ConfigMap::read(path)?;
    for o in overrides {
        map.apply_override(o)?;
    }
    Ok(map)
}

pub fn load(path: &Path, overrides: &[String]) -> Result<Scenario, ConfigError> {
    Scenario::from_config(read_config(path, overrides)?)
}

fn amplitude_note(a: &OptimalAmplitude) -> &'static str {
    match a {
        OptimalAmplitude::FullReflection => " (boundary: full reflection, zero consumption)",
        OptimalAmplitude::NoReflection => " (boundary: full absorption)",
        _ => "",
    }
}

/// Human-readable report of one placement solution.
pub fn write_solution(out: &mut impl Write, s: &Scenario, sol: &PlacementSolution) -> io::Result<()> {
    writeln!(
        out,
        "scenario: f = {} GHz, {} x {} elements, y_s = {} m, h_s = {} m, r_h = {} m",
        s.carrier_frequency_hz / 1e9,
        s.ris_rows,
        s.ris_cols,
        s.lateral_offset_m,
        s.ris_height_m,
        s.txrx_horizontal_m
    )?;
    writeln!(out, "p_chip_w: {:e}", s.power_model.chip_power_w())?;
    writeln!(out, "p_ris_w: {:e}", sol.p_ris_w)?;
    match &sol.optimum {
        None => {
            writeln!(out, "status: infeasible")?;
            writeln!(
                out,
                "no placement in range harvests enough power to run the surface"
            )?;
        }
        Some(o) => {
            writeln!(out, "status: feasible")?;
            writeln!(out, "r1h_opt_m: {:.6}", o.r1h_opt_m)?;
            writeln!(out, "a_opt: {:.9}{}", o.a_opt, amplitude_note(&o.amplitude))?;
            writeln!(out, "snr_opt_db: {:.6}", o.snr_opt_db)?;
            writeln!(out, "snr_opt_linear: {:e}", o.snr_opt_linear)?;
            writeln!(out, "p_harv_w: {:e}", o.p_harv_w)?;
            writeln!(out, "objective: {:e}", o.objective)?;
        }
    }
    Ok(())
}

/// Objective trace as CSV: `r1h_m,objective,feasible`.
pub fn write_curve_csv(path: &Path, sol: &PlacementSolution) -> Result<(), CliError> {
    let io_err = |source| CliError::Output {
        path: path.to_path_buf(),
        source,
    };
    let mut w = csv::Writer::from_path(path).map_err(|e| io_err(e.into()))?;
    w.write_record(["r1h_m", "objective", "feasible"])
        .map_err(|e| io_err(e.into()))?;
    for c in &sol.objective_curve {
        w.write_record([
            c.r1h_m.to_string(),
            c.objective.to_string(),
            c.feasible.to_string(),
        ])
        .map_err(|e| io_err(e.into()))?;
    }
    w.flush().map_err(io_err)
}

pub fn cmd_solve(
    config: &Path,
    overrides: &[String],
    search: &SearchConfig,
    curve_out: Option<&Path>,
    out: &mut impl Write,
) -> Result<Outcome, CliError> {
    let s = load(config, overrides)?;
    search.validate(&s)?;
    let sol = solve_placement(&s, search);
    write_solution(out, &s, &sol)?;
    if let Some(path) = curve_out {
        write_curve_csv(path, &sol)?;
    }
    Ok(if sol.feasible() {
        Outcome::Success
    } else {
        Outcome::Infeasible
    })
}

pub fn cmd_select_site(
    config: &Path,
    overrides: &[String],
    sites_path: &Path,
    out: &mut impl Write,
) -> Result<Outcome, CliError> {
    let base = load(config, overrides)?;
    let sites = parse_sites(ConfigMap::read(sites_path)?)?;
    let selection = select_site(&base, &sites, base.p_ris_w())?;
    writeln!(out, "p_ris_w: {:e}", base.p_ris_w())?;
    writeln!(
        out,
        "{:>5} {:>10} {:>10} {:>10} {:>9} {:>12} {:>12} {:>12}",
        "site", "r1h_m", "y_s_m", "h_s_m", "feasible", "a_opt", "snr_db", "p_harv_w"
    )?;
    for (i, (site, sol)) in sites.iter().zip(&selection.solutions).enumerate() {
        let (a, snr, harv) = match &sol.optimum {
            Some(o) => (
                format!("{:.6}", o.a_opt),
                format!("{:.4}", o.snr_opt_db),
                format!("{:.4e}", o.p_harv_w),
            ),
            None => ("-".into(), "-".into(), "-".into()),
        };
        writeln!(
            out,
            "{:>5} {:>10.3} {:>10.3} {:>10.3} {:>9} {:>12} {:>12} {:>12}",
            i,
            site.r1h_m,
            site.lateral_offset_m,
            site.ris_height_m,
            sol.feasible(),
            a,
            snr,
            harv
        )?;
    }
    Ok(match selection.selected {
        Some(i) => {
            writeln!(out, "selected: {i}")?;
            Outcome::Success
        }
        None => {
            writeln!(out, "selected: none (no site can power the surface)")?;
            Outcome::Infeasible
        }
    })
}

/// Validates every `(y_s, P_c)` combination (the scenario's own values
/// when a list is empty). Fails on the first config error.
pub fn cmd_validate(
    config: &Path,
    overrides: &[String],
    y_s_values: &[f64],
    p_c_values: &[f64],
    opts: &ValidateOptions,
    out: &mut impl Write,
) -> Result<Outcome, CliError> {
    let base = read_config(config, overrides)?;
    let mut all_passed = true;
    let ys: Vec<Option<f64>> = if y_s_values.is_empty() {
        vec![None]
    } else {
        y_s_values.iter().copied().map(Some).collect()
    };
    let pcs: Vec<Option<f64>> = if p_c_values.is_empty() {
        vec![None]
    } else {
        p_c_values.iter().copied().map(Some).collect()
    };
    for y in &ys {
        for pc in &pcs {
            let mut map = base.clone();
            if let Some(y) = y {
                map.set("lateral_offset_m", y);
            }
            if let Some(pc) = pc {
                map.set("p_chip_w", pc);
            }
            let s = Scenario::from_config(map)?;
            writeln!(
                out,
                "== y_s = {} m, p_chip_w = {:e}",
                s.lateral_offset_m,
                s.power_model.chip_power_w()
            )?;
            let report = validate_scenario(&s, opts)?;
            report.write(out)?;
            all_passed &= report.passed();
        }
    }
    Ok(if all_passed {
        Outcome::Success
    } else {
        Outcome::ValidationFailure
    })
}
