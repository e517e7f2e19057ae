//! Analytic optimum against the brute-force oracles.

use std::f64::consts::PI;
use std::io::{self, Write};

use ris_autonomy::oracle::{brute_force_solve, exhaustive_phase_search};
use ris_autonomy::{snr_cophased, solve_placement, to_db, Error, Scenario, SearchConfig};

/// Largest accepted SNR gap between the analytic and lattice optima.
pub const SNR_TOLERANCE_DB: f64 = 0.1;
/// Largest accepted placement gap between the analytic and lattice optima.
pub const R1H_TOLERANCE_M: f64 = 0.5;

#[derive(Debug, Clone, PartialEq)]
pub struct ValidateOptions {
    pub r1h_step_m: f64,
    pub a_step: f64,
    pub phase_levels: usize,
    pub search: SearchConfig,
}

impl Default for ValidateOptions {
    fn default() -> Self {
        Self {
            r1h_step_m: 0.5,
            a_step: 0.001,
            phase_levels: 16,
            search: SearchConfig::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PhaseCheck {
    pub r1h_m: f64,
    pub uniform_a: f64,
    pub best_quantized_linear: f64,
    pub cophased_linear: f64,
    /// `cos^2(pi / levels)`.
    pub floor_ratio: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ValidationReport {
    pub analytic_feasible: bool,
    pub oracle_feasible: bool,
    pub analytic_snr_db: Option<f64>,
    pub oracle_snr_db: Option<f64>,
    pub analytic_r1h_m: Option<f64>,
    pub oracle_r1h_m: Option<f64>,
    pub snr_delta_db: Option<f64>,
    pub r1h_delta_m: Option<f64>,
    pub placement_passed: bool,
    pub phase: PhaseCheck,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.placement_passed && self.phase.passed
    }

    pub fn write(&self, out: &mut impl Write) -> io::Result<()> {
        let show = |v: Option<f64>, unit: &str| match v {
            Some(v) => format!("{v:.6} {unit}"),
            None => "infeasible".to_string(),
        };
        writeln!(out, "placement (analytic vs lattice oracle)")?;
        writeln!(out, "  analytic snr: {}", show(self.analytic_snr_db, "dB"))?;
        writeln!(out, "  oracle snr:   {}", show(self.oracle_snr_db, "dB"))?;
        writeln!(out, "  analytic r1h: {}", show(self.analytic_r1h_m, "m"))?;
        writeln!(out, "  oracle r1h:   {}", show(self.oracle_r1h_m, "m"))?;
        if let (Some(ds), Some(dr)) = (self.snr_delta_db, self.r1h_delta_m) {
            writeln!(
                out,
                "  |delta snr| = {ds:.6} dB (tol {SNR_TOLERANCE_DB}), |delta r1h| = {dr:.4} m (tol {R1H_TOLERANCE_M})"
            )?;
        }
        writeln!(out, "  {}", verdict(self.placement_passed))?;
        let p = &self.phase;
        writeln!(out, "phase quantization (2x2 exhaustive)")?;
        writeln!(out, "  r1h = {:.4} m, A = {:.6}", p.r1h_m, p.uniform_a)?;
        writeln!(
            out,
            "  best/co-phased = {:.9} (floor {:.9})",
            p.best_quantized_linear / p.cophased_linear,
            p.floor_ratio
        )?;
        writeln!(out, "  {}", verdict(p.passed))?;
        writeln!(out, "overall: {}", verdict(self.passed()))
    }
}

fn verdict(ok: bool) -> &'static str {
    if ok {
        "PASS"
    } else {
        "FAIL"
    }
}

pub fn validate_scenario(s: &Scenario, opts: &ValidateOptions) -> Result<ValidationReport, Error> {
    opts.search.validate(s)?;
    let analytic = solve_placement(s, &opts.search).optimum;
    let oracle = brute_force_solve(s, opts.r1h_step_m, opts.a_step)?.best;

    let (snr_delta_db, r1h_delta_m, placement_passed) = match (&analytic, &oracle) {
        (Some(a), Some(o)) => {
            let ds = (a.snr_opt_db - to_db(o.snr_linear)).abs();
            let dr = (a.r1h_opt_m - o.r1h_m).abs();
            (Some(ds), Some(dr), ds <= SNR_TOLERANCE_DB && dr <= R1H_TOLERANCE_M)
        }
        (None, None) => (None, None, true),
        _ => (None, None, false),
    };

    let phase = phase_check(s, opts)?;
    Ok(ValidationReport {
        analytic_feasible: analytic.is_some(),
        oracle_feasible: oracle.is_some(),
        analytic_snr_db: analytic.as_ref().map(|a| a.snr_opt_db),
        oracle_snr_db: oracle.map(|o| to_db(o.snr_linear)),
        analytic_r1h_m: analytic.as_ref().map(|a| a.r1h_opt_m),
        oracle_r1h_m: oracle.map(|o| o.r1h_m),
        snr_delta_db,
        r1h_delta_m,
        placement_passed,
        phase,
    })
}

/// Runs the exhaustive phase search on a 2x2 copy of the scenario, at the
/// copy's own analytic optimum (or broadside with full reflection if the
/// copy cannot be powered).
fn phase_check(s: &Scenario, opts: &ValidateOptions) -> Result<PhaseCheck, Error> {
    let tiny = Scenario {
        ris_rows: 2,
        ris_cols: 2,
        ..s.clone()
    };
    let (r1h, a) = solve_placement(&tiny, &opts.search)
        .optimum
        .map_or((0.0, 1.0), |o| (o.r1h_opt_m, o.a_opt));
    let best = exhaustive_phase_search(&tiny, r1h, opts.phase_levels, a)?;
    let cophased = snr_cophased(r1h, a, &tiny);
    let floor_ratio = (PI / opts.phase_levels as f64).cos().powi(2);
    let passed = best.snr_linear <= cophased * (1.0 + 1e-12)
        && best.snr_linear >= floor_ratio * cophased * (1.0 - 1e-12);
    Ok(PhaseCheck {
        r1h_m: r1h,
        uniform_a: a,
        best_quantized_linear: best.snr_linear,
        cophased_linear: cophased,
        floor_ratio,
        passed,
    })
}
