//! Optimal placement and reflection response of an energy-autonomous
//! reconfigurable intelligent surface (RIS) relaying a mmWave link.
//!
//! The surface sits beside a street at lateral offset `y_s`, between a
//! transmitter and a receiver that both use parabolic dishes. Every
//! reflective unit (RU) splits the impinging power: a fraction `A²` is
//! reflected toward the receiver, the rest is absorbed and rectified to
//! power the surface's electronics. The solver picks the horizontal
//! placement `r1h`, a common reflection amplitude and a co-phasing phase
//! profile so that the received SNR is maximal while the harvested power
//! exactly covers the surface's consumption.
//!
//! ```
//! use ris_autonomy::{solve_placement, Scenario, SearchConfig};
//!
//! let mut scenario = Scenario::reference(5.0);
//! scenario.power_model.p_chip_w = Some(1e-6);
//! let scenario = scenario.validated().unwrap();
//! let solution = solve_placement(&scenario, &SearchConfig::default());
//! let best = solution.optimum.expect("1 uW per element is sustainable");
//! assert!(best.a_opt > 0.0 && best.a_opt < 1.0);
//! ```
//!
//! All quantities are SI (watts, meters, radians, hertz). dB values only
//! appear at configuration and reporting boundaries.

pub mod config;
pub mod error;
pub mod geometry;
pub mod link;
pub mod optimizer;
pub mod oracle;
pub mod scenario;
pub mod sum;

pub use error::{ConfigError, Error};
pub use geometry::{
    center_distances, departure_angle, element_distances, element_offsets, incidence_angle,
    ElementGrid, LinkGeometry,
};
pub use link::{
    absorbed_power_element, harvested_power, harvested_power_uniform, snr_cophased, snr_explicit,
    LinkReport, ReflectionState,
};
pub use optimizer::{
    optimal_amplitude, optimal_phases, placement_objective, select_site, solve_placement,
    ObjectiveSample, OptimalAmplitude, PlacementOptimum, PlacementSolution, SearchConfig, Site,
    SiteSelection,
};
pub use oracle::{brute_force_solve, exhaustive_phase_search, OracleResult, PhaseSearchResult};
pub use scenario::{
    load_scenario, load_scenario_with_overrides, noise_power_w, parabolic_gain,
    ris_power_consumption, PowerModel, Scenario, SPEED_OF_LIGHT,
};

/// Linear power ratio to decibels.
pub fn to_db(linear: f64) -> f64 {
    10.0 * linear.log10()
}

/// Decibels to linear power ratio.
pub fn from_db(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}
