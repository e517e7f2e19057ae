//! `(y_s, P_c)` sweeps written as CSV.

use std::path::Path;

use rayon::prelude::*;
use ris_autonomy::config::ConfigMap;
use ris_autonomy::{solve_placement, Scenario, SearchConfig};
use serde::Serialize;

use crate::CliError;

/// One sweep lattice point. Optimum fields are empty when infeasible.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub p_c_w: f64,
    pub y_s_m: f64,
    pub feasible: bool,
    pub r1h_opt_m: Option<f64>,
    pub a_opt: Option<f64>,
    pub snr_opt_db: Option<f64>,
    pub p_harv_w: Option<f64>,
    pub p_ris_w: f64,
}

/// `points` log-spaced values from `start` to `stop`, both included.
pub fn logspace(start: f64, stop: f64, points: usize) -> Vec<f64> {
    match points {
        0 => Vec::new(),
        1 => vec![start],
        n => {
            let (a, b) = (start.log10(), stop.log10());
            (0..n)
                .map(|k| match k {
                    0 => start,
                    k if k == n - 1 => stop,
                    k => 10f64.powf(a + (b - a) * k as f64 / (n - 1) as f64),
                })
                .collect()
        }
    }
}

/// Solves every `(y_s, P_c)` combination in parallel. Rows come back
/// sorted by `y_s` then `P_c`, whatever order the workers finish in.
pub fn run_sweep(
    base: &ConfigMap,
    p_c_values: &[f64],
    y_s_values: &[f64],
    search: &SearchConfig,
) -> Result<Vec<SweepRow>, CliError> {
    if p_c_values.is_empty() || y_s_values.is_empty() {
        return Err(CliError::Usage("sweep needs at least one P_c and one y_s".into()));
    }
    let mut ys = y_s_values.to_vec();
    ys.sort_by(f64::total_cmp);
    let mut pcs = p_c_values.to_vec();
    pcs.sort_by(f64::total_cmp);

    let mut scenarios = Vec::with_capacity(ys.len() * pcs.len());
    for &y in &ys {
        for &pc in &pcs {
            let mut map = base.clone();
            map.set("lateral_offset_m", y);
            map.set("p_chip_w", pc);
            let s = Scenario::from_config(map)?;
            search.validate(&s)?;
            scenarios.push((pc, y, s));
        }
    }
    Ok(scenarios
        .par_iter()
        .map(|(pc, y, s)| {
            let sol = solve_placement(s, search);
            let o = sol.optimum.as_ref();
            SweepRow {
                p_c_w: *pc,
                y_s_m: *y,
                feasible: o.is_some(),
                r1h_opt_m: o.map(|o| o.r1h_opt_m),
                a_opt: o.map(|o| o.a_opt),
                snr_opt_db: o.map(|o| o.snr_opt_db),
                p_harv_w: o.map(|o| o.p_harv_w),
                p_ris_w: sol.p_ris_w,
            }
        })
        .collect())
}

pub fn write_sweep_csv(path: &Path, rows: &[SweepRow]) -> Result<(), CliError> {
    let io_err = |source| CliError::Output {
        path: path.to_path_buf(),
        source,
    };
    let mut w = csv::Writer::from_path(path).map_err(|e| io_err(e.into()))?;
    for row in rows {
        w.serialize(row).map_err(|e| io_err(e.into()))?;
    }
    w.flush().map_err(io_err)
}
