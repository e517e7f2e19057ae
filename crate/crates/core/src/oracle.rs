//! Brute-force reference solvers for validating the closed-form optimum.
//!
//! Nothing here calls into [`crate::optimizer`]: the oracle only uses the
//! geometry and link evaluation primitives.

use std::f64::consts::PI;

use rayon::prelude::*;

use crate::error::Error;
use crate::link::{harvested_power_uniform, snr_cophased, snr_explicit, ReflectionState};
use crate::scenario::Scenario;

const MAX_ELEMENTS: usize = 9;
const MAX_PROFILES: u64 = 100_000_000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OraclePoint {
    pub r1h_m: f64,
    pub a: f64,
    pub snr_linear: f64,
    pub p_harv_w: f64,
    /// `a_step * dSNR/dA` at this point: how far the lattice amplitude's
    /// constraint mismatch can move the SNR.
    pub snr_slack_linear: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleResult {
    /// `None` when no lattice column can power the surface.
    pub best: Option<OraclePoint>,
    pub r1h_step_m: f64,
    pub a_step: f64,
    pub columns: usize,
    pub amplitude_levels: usize,
}

/// Scans the `(r1h, A)` lattice over `[0, r_h] x (0, 1)`. In each column
/// the amplitude whose harvest is nearest the consumption is kept; columns
/// that cannot cover the consumption even at `A = 0` are dropped. The kept
/// point with the highest co-phased SNR wins, lowest `r1h` on ties.
pub fn brute_force_solve(s: &Scenario, r1h_step_m: f64, a_step: f64) -> Result<OracleResult, Error> {
    if !(r1h_step_m > 0.0 && a_step > 0.0) {
        return Err(Error::InvalidArgument("oracle steps must be positive".into()));
    }
    let p_ris = s.p_ris_w();
    let span = s.txrx_horizontal_m;
    let mut columns: Vec<f64> = (0..)
        .map(|k| k as f64 * r1h_step_m)
        .take_while(|&x| x <= span)
        .collect();
    if columns.last().map_or(true, |&x| x < span) {
        columns.push(span);
    }
    let levels: Vec<f64> = (1..)
        .map(|k| k as f64 * a_step)
        .take_while(|&a| a < 1.0)
        .collect();

    let kept: Vec<Option<(f64, f64, f64)>> = columns
        .par_iter()
        .map(|&x| {
            if harvested_power_uniform(x, 0.0, s) <= p_ris {
                return None;
            }
            let (a, harv) = levels
                .iter()
                .map(|&a| (a, harvested_power_uniform(x, a, s)))
                .min_by(|l, r| (l.1 - p_ris).abs().total_cmp(&(r.1 - p_ris).abs()))?;
            Some((a, harv, snr_cophased(x, a, s)))
        })
        .collect();

    let mut best: Option<OraclePoint> = None;
    for (&x, k) in columns.iter().zip(&kept) {
        let Some((a, harv, snr)) = *k else { continue };
        if best.map_or(true, |b| snr > b.snr_linear * (1.0 + 1e-12)) {
            best = Some(OraclePoint {
                r1h_m: x,
                a,
                snr_linear: snr,
                p_harv_w: harv,
                snr_slack_linear: a_step * 2.0 * snr / a,
            });
        }
    }
    Ok(OracleResult {
        best,
        r1h_step_m,
        a_step,
        columns: columns.len(),
        amplitude_levels: levels.len(),
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct PhaseSearchResult {
    /// Chosen level per element; phase is `2 pi level / levels`.
    pub levels: Vec<usize>,
    pub phases: Vec<f64>,
    pub snr_linear: f64,
    pub profiles: u64,
}

/// Enumerates every quantized phase profile of a tiny surface at placement
/// `r1h_m` and common amplitude `uniform_a`, returning the best one (first
/// in enumeration order on ties).
pub fn exhaustive_phase_search(
    s: &Scenario,
    r1h_m: f64,
    phase_levels: usize,
    uniform_a: f64,
) -> Result<PhaseSearchResult, Error> {
    let elements = s.element_count();
    let intractable = Error::Intractable {
        levels: phase_levels,
        elements,
    };
    if phase_levels == 0 || elements > MAX_ELEMENTS {
        return Err(intractable);
    }
    let profiles = (phase_levels as u64)
        .checked_pow(elements as u32)
        .filter(|&n| n <= MAX_PROFILES)
        .ok_or(intractable)?;

    let decode = |mut index: u64| -> Vec<usize> {
        (0..elements)
            .map(|_| {
                let d = (index % phase_levels as u64) as usize;
                index /= phase_levels as u64;
                d
            })
            .collect()
    };
    let to_phases = |digits: &[usize]| -> Vec<f64> {
        digits
            .iter()
            .map(|&d| 2.0 * PI * d as f64 / phase_levels as f64)
            .collect()
    };
    let evaluate = |index: u64| -> Result<f64, Error> {
        let state = ReflectionState::uniform(s.ris_rows, s.ris_cols, uniform_a, to_phases(&decode(index)))?;
        snr_explicit(r1h_m, &state, s)
    };

    const CHUNK: u64 = 4096;
    let chunks = profiles.div_ceil(CHUNK);
    let winners: Vec<(u64, f64)> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut best = (c * CHUNK, f64::NEG_INFINITY);
            for i in c * CHUNK..((c + 1) * CHUNK).min(profiles) {
                let snr = evaluate(i)?;
                if snr > best.1 {
                    best = (i, snr);
                }
            }
            Ok(best)
        })
        .collect::<Result<_, Error>>()?;
    let (index, snr_linear) = winners
        .into_iter()
        .fold((0, f64::NEG_INFINITY), |b, w| if w.1 > b.1 { w } else { b });
    let levels = decode(index);
    Ok(PhaseSearchResult {
        phases: to_phases(&levels),
        levels,
        snr_linear,
        profiles,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    
    fn tiny(rows: usize, cols: usize, p_chip: f64) -> Scenario {
        let mut s = Scenario::reference(5.0);
        s.ris_rows = rows;
        s.ris_cols = cols;
        s.power_model.p_chip_w = Some(p_chip);
        s
    }

    #[test]
    fn single_level_is_all_zero() {
        let s = tiny(2, 2, 0.0);
        let r = exhaustive_phase_search(&s, 10.0, 1, 0.8).unwrap();
        assert_eq!(r.profiles, 1);
        assert_eq!(r.levels, vec![0; 4]);
        assert_eq!(r.phases, vec![0.0; 4]);
    }

    #[test]
    fn single_element_is_phase_invariant() {
        // one term has the same magnitude at every phase: all levels tie
        // and the first in enumeration order is kept
        let s = tiny(1, 1, 0.0);
        let r = exhaustive_phase_search(&s, 33.0, 16, 0.5).unwrap();
        assert_eq!(r.levels, vec![0]);
        let want = snr_cophased(33.0, 0.5, &s);
        assert!((r.snr_linear - want).abs() / want < 1e-12);
    }

    #[test]
    fn two_by_two_within_quantization_envelope() {
        let s = tiny(2, 2, 0.0);
        let r = exhaustive_phase_search(&s, 12.0, 16, 0.7).unwrap();
        assert_eq!(r.profiles, 65_536);
        let ceiling = snr_cophased(12.0, 0.7, &s);
        assert!(r.snr_linear <= ceiling * (1.0 + 1e-12));
        assert!(r.snr_linear >= ceiling * (PI / 16.0).cos().powi(2));
    }

    #[test]
    fn tractability_guard() {
        assert!(matches!(
            exhaustive_phase_search(&tiny(4, 4, 0.0), 1.0, 2, 0.5),
            Err(Error::Intractable { .. })
        ));
        assert!(matches!(
            exhaustive_phase_search(&tiny(3, 3, 0.0), 1.0, 16, 0.5),
            Err(Error::Intractable { .. })
        ));
        assert!(exhaustive_phase_search(&tiny(1, 1, 0.0), 1.0, 0, 0.5).is_err());
    }

    #[test]
    fn zero_consumption_lands_next_to_full_reflection() {
        let s = tiny(50, 50, 0.0);
        let r = brute_force_solve(&s, 0.5, 0.001).unwrap();
        let best = r.best.unwrap();
        assert!((best.a - 0.999).abs() < 1e-12);
        // pure-SNR optimum for y_s = 5 with h_t = h_r: r1h (r_h - r1h) = y_s^2 + dh^2
        let analytic = 50.0 - (2500.0f64 - 106.0).sqrt();
        assert!((best.r1h_m - analytic).abs() <= 0.5);
        assert_eq!(r.columns, 201);
        assert_eq!(r.amplitude_levels, 999);
    }

    #[test]
    fn infeasible_lattice() {
        let s = tiny(50, 50, 1.0);
        assert!(brute_force_solve(&s, 1.0, 0.01).unwrap().best.is_none());
        assert!(brute_force_solve(&s, 0.0, 0.01).is_err());
    }

    #[test]
    fn refinement_converges() {
        let s = tiny(50, 50, 1e-6);
        // fine-grid reference for the limit
        let fine = brute_force_solve(&s, 0.05, 1e-4).unwrap().best.unwrap();
        let mut last_gap = f64::INFINITY;
        for (dr, da) in [(2.0, 0.02), (1.0, 0.01), (0.5, 0.005), (0.25, 0.0025)] {
            let b = brute_force_solve(&s, dr, da).unwrap().best.unwrap();
            let gap = (b.snr_linear - fine.snr_linear).abs() / fine.snr_linear;
            assert!(gap <= last_gap, "{gap} > {last_gap}");
            last_gap = gap;
        }
    }
}
