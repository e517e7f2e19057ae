//! Scenarios shared by the benchmarks.

use ris_autonomy::Scenario;

/// Reference deployment at `y_s` with a fixed per-chip power.
pub fn reference_with_chip(lateral_offset_m: f64, p_chip_w: f64) -> Scenario {
    let mut s = Scenario::reference(lateral_offset_m);
    s.power_model.p_chip_w = Some(p_chip_w);
    s.validated().expect("reference scenario is valid")
}
