//! Closed-form optimum of the autonomous-surface problem.
//!
//! With phases co-phasing every element at the receiver, the SNR is
//! `F(r1h) (sum A)^2` and the harvest constraint reads
//! `H(r1h) sum(1 - A^2) = P_RIS`. Stationarity of the Lagrangian in each
//! amplitude forces a common amplitude, which the constraint then fixes:
//!
//! ```text
//! A*(r1h) = sqrt(1 - P_RIS / C(r1h)),  C(r1h) = 4 M_s eps (lambda/4pi)^2 P_t G_t cos(th_i) / r1^2
//! ```
//!
//! `C` is the harvest with every element fully absorbing. What remains is
//! the one-dimensional objective
//! `G(r1h) = cos(th_i) cos(th_r) / (r1^2 r2^2 sigma^2) * (1 - P_RIS / C(r1h))`,
//! maximized by a coarse scan over the placement range followed by
//! golden-section refinement around the best feasible sample. The
//! multiplier itself is never needed.

use std::f64::consts::PI;

use crate::error::{ConfigError, Error};
use crate::geometry::{element_distances, LinkGeometry};
use crate::link::{harvested_power_uniform, snr_cophased};
use crate::scenario::Scenario;
use crate::to_db;

/// Golden-ratio conjugate, `(sqrt(5) - 1) / 2`.
const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Relative slack under which two objective samples count as a tie; the
/// lower placement wins ties.
const TIE_RELATIVE: f64 = 1e-12;

/// Co-phasing profile `phi*_pl = -2 pi (r1pl + r2pl) / lambda`.
pub fn optimal_phases(r1h_m: f64, s: &Scenario) -> Vec<f64> {
    let k = 2.0 * PI / s.wavelength_m();
    element_distances(r1h_m, &s.grid(), s)
        .into_iter()
        .map(|(r1, r2)| -k * (r1 + r2))
        .collect()
}

/// Harvest of the whole surface with every element absorbing fully
/// (`A = 0`). The constraint term of the objective is `P_RIS` over this.
pub fn harvest_ceiling_w(r1h_m: f64, s: &Scenario) -> f64 {
    let geo = LinkGeometry::at(r1h_m, s);
    let k = s.wavelength_m() / (4.0 * PI);
    4.0 * s.element_count() as f64 * s.conversion_efficiency * k * k * s.transmit_power_w
        * s.tx_gain()
        * geo.cos_incidence()
        / (geo.r1_m * geo.r1_m)
}

/// Placement-dependent SNR factor `cos(th_i) cos(th_r) / (r1^2 r2^2 sigma^2)`.
fn snr_factor(geo: &LinkGeometry, s: &Scenario) -> f64 {
    geo.cos_incidence() * geo.cos_departure()
        / (geo.r1_m * geo.r1_m * geo.r2_m * geo.r2_m * s.noise_power_w())
}

/// `1 - P_RIS / C(r1h)`; the square of the optimal amplitude.
fn radicand(r1h_m: f64, p_ris_w: f64, s: &Scenario) -> f64 {
    1.0 - p_ris_w / harvest_ceiling_w(r1h_m, s)
}

/// Outcome of the optimal-amplitude formula at one placement.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum OptimalAmplitude {
    /// `0 < A* < 1`.
    Interior(f64),
    /// Zero consumption: everything is reflected, `A* = 1`.
    FullReflection,
    /// Consumption equals the harvest ceiling exactly, `A* = 0`.
    NoReflection,
    /// Even full absorption cannot cover the consumption here.
    Infeasible,
}

impl OptimalAmplitude {
    pub fn value(&self) -> Option<f64> {
        match *self {
            OptimalAmplitude::Interior(a) => Some(a),
            OptimalAmplitude::FullReflection => Some(1.0),
            OptimalAmplitude::NoReflection => Some(0.0),
            OptimalAmplitude::Infeasible => None,
        }
    }

    /// True when `A*` sits on the boundary of the open interval (0, 1).
    pub fn is_boundary(&self) -> bool {
        matches!(
            self,
            OptimalAmplitude::FullReflection | OptimalAmplitude::NoReflection
        )
    }
}

pub fn optimal_amplitude(r1h_m: f64, p_ris_w: f64, s: &Scenario) -> OptimalAmplitude {
    if p_ris_w == 0.0 {
        return OptimalAmplitude::FullReflection;
    }
    let rad = radicand(r1h_m, p_ris_w, s);
    if rad > 0.0 {
        OptimalAmplitude::Interior(rad.sqrt())
    } else if rad == 0.0 {
        OptimalAmplitude::NoReflection
    } else {
        OptimalAmplitude::Infeasible
    }
}

/// Reduced objective `G(r1h)`. Negative where the placement cannot be
/// powered; such points are never selected by the search.
pub fn placement_objective(r1h_m: f64, p_ris_w: f64, s: &Scenario) -> f64 {
    let geo = LinkGeometry::at(r1h_m, s);
    snr_factor(&geo, s) * radicand(r1h_m, p_ris_w, s)
}

/// `16 P_t G_t G_r (lambda/4pi)^4 M_s^2`: SNR per unit of objective.
pub fn objective_to_snr(s: &Scenario) -> f64 {
    let k = s.wavelength_m() / (4.0 * PI);
    let m = s.element_count() as f64;
    16.0 * s.transmit_power_w * s.tx_gain() * s.rx_gain() * k.powi(4) * m * m
}

/// Linear-search parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct SearchConfig {
    pub r1h_min_m: f64,
    /// Upper bound; `None` means the TX–RX horizontal distance.
    pub r1h_max_m: Option<f64>,
    pub coarse_step_m: f64,
    /// Maximum golden-section iterations.
    pub refine_iterations: usize,
    /// Half-width of the refinement bracket; `None` means one coarse step.
    pub refine_bracket_m: Option<f64>,
    /// Refinement stops once the bracket is narrower than this.
    pub refine_tolerance_m: f64,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self {
            r1h_min_m: 0.0,
            r1h_max_m: None,
            coarse_step_m: 0.1,
            refine_iterations: 40,
            refine_bracket_m: None,
            refine_tolerance_m: 1e-4,
        }
    }
}

impl SearchConfig {
    pub fn with_step(coarse_step_m: f64) -> Self {
        Self {
            coarse_step_m,
            ..Self::default()
        }
    }

    fn bounds(&self, s: &Scenario) -> (f64, f64) {
        (self.r1h_min_m, self.r1h_max_m.unwrap_or(s.txrx_horizontal_m))
    }

    pub fn validate(&self, s: &Scenario) -> Result<(), Error> {
        let (lo, hi) = self.bounds(s);
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(Error::InvalidArgument(format!(
                "search range [{lo}, {hi}] is empty"
            )));
        }
        if !(self.coarse_step_m > 0.0 && self.coarse_step_m.is_finite()) {
            return Err(Error::InvalidArgument("coarse step must be positive".into()));
        }
        if !(self.refine_tolerance_m > 0.0) {
            return Err(Error::InvalidArgument(
                "refinement tolerance must be positive".into(),
            ));
        }
        Ok(())
    }
}

/// One coarse-grid sample of the objective.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ObjectiveSample {
    pub r1h_m: f64,
    pub objective: f64,
    pub feasible: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PlacementOptimum {
    pub r1h_opt_m: f64,
    pub a_opt: f64,
    pub amplitude: OptimalAmplitude,
    pub phases_opt: Vec<f64>,
    pub snr_opt_linear: f64,
    pub snr_opt_db: f64,
    pub p_harv_w: f64,
    /// `G(r1h*)`.
    pub objective: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PlacementSolution {
    pub p_ris_w: f64,
    /// `None` when no placement in range can power the surface.
    pub optimum: Option<PlacementOptimum>,
    /// Coarse samples, kept so callers can spot competing maxima.
    pub objective_curve: Vec<ObjectiveSample>,
}

impl PlacementSolution {
    pub fn feasible(&self) -> bool {
        self.optimum.is_some()
    }
}

fn coarse_grid(lo: f64, hi: f64, step: f64) -> Vec<f64> {
    let n = ((hi - lo) / step * (1.0 + 1e-12)).floor() as usize;
    let mut xs: Vec<f64> = (0..=n).map(|k| lo + k as f64 * step).filter(|&x| x <= hi).collect();
    if xs.last().map_or(true, |&x| hi - x > step * 1e-9) {
        xs.push(hi);
    }
    xs
}

fn golden_section_max(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, iterations: usize, tol: f64) -> f64 {
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..iterations {
        if b - a <= tol {
            break;
        }
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
    }
    0.5 * (a + b)
}

/// Evaluates phases, amplitude, SNR and harvest at a fixed placement.
fn optimum_at(r1h_m: f64, p_ris_w: f64, s: &Scenario) -> Option<PlacementOptimum> {
    let amplitude = optimal_amplitude(r1h_m, p_ris_w, s);
    let a = amplitude.value()?;
    let snr = snr_cophased(r1h_m, a, s);
    Some(PlacementOptimum {
        r1h_opt_m: r1h_m,
        a_opt: a,
        amplitude,
        phases_opt: optimal_phases(r1h_m, s),
        snr_opt_linear: snr,
        snr_opt_db: to_db(snr),
        p_harv_w: harvested_power_uniform(r1h_m, a, s),
        objective: placement_objective(r1h_m, p_ris_w, s),
    })
}

/// Optimal placement, amplitude and phases for the scenario's own
/// consumption.
pub fn solve_placement(s: &Scenario, search: &SearchConfig) -> PlacementSolution {
    solve_placement_for(s, s.p_ris_w(), search)
}

/// As [`solve_placement`] with an explicit consumption `p_ris_w`.
///
/// # Panics
///
/// On an invalid [`SearchConfig`]; check it with [`SearchConfig::validate`].
pub fn solve_placement_for(s: &Scenario, p_ris_w: f64, search: &SearchConfig) -> PlacementSolution {
    if let Err(e) = search.validate(s) {
        panic!("{e}");
    }
    let (lo, hi) = search.bounds(s);
    let curve: Vec<ObjectiveSample> = coarse_grid(lo, hi, search.coarse_step_m)
        .into_iter()
        .map(|x| ObjectiveSample {
            r1h_m: x,
            objective: placement_objective(x, p_ris_w, s),
            feasible: radicand(x, p_ris_w, s) > 0.0,
        })
        .collect();

    let mut best: Option<ObjectiveSample> = None;
    for sample in curve.iter().filter(|c| c.feasible) {
        match best {
            Some(b) if sample.objective <= b.objective + TIE_RELATIVE * b.objective.abs() => {}
            _ => best = Some(*sample),
        }
    }
    let Some(best) = best else {
        return PlacementSolution {
            p_ris_w,
            optimum: None,
            objective_curve: curve,
        };
    };

    let half = search.refine_bracket_m.unwrap_or(search.coarse_step_m);
    let (a, b) = ((best.r1h_m - half).max(lo), (best.r1h_m + half).min(hi));
    let refined = golden_section_max(
        |x| placement_objective(x, p_ris_w, s),
        a,
        b,
        search.refine_iterations,
        search.refine_tolerance_m,
    );
    let r1h = if radicand(refined, p_ris_w, s) > 0.0
        && placement_objective(refined, p_ris_w, s) >= best.objective
    {
        refined
    } else {
        best.r1h_m
    };

    PlacementSolution {
        p_ris_w,
        optimum: optimum_at(r1h, p_ris_w, s),
        objective_curve: curve,
    }
}

/// A mounted surface: fixed placement, lateral offset and height.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Site {
    pub r1h_m: f64,
    pub lateral_offset_m: f64,
    pub ris_height_m: f64,
}

impl Site {
    /// The base scenario moved to this site.
    pub fn scenario(&self, base: &Scenario) -> Result<Scenario, ConfigError> {
        Scenario {
            lateral_offset_m: self.lateral_offset_m,
            ris_height_m: self.ris_height_m,
            ..base.clone()
        }
        .validated()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SiteSelection {
    /// Best feasible site, lowest index on ties; `None` if none is feasible.
    pub selected: Option<usize>,
    /// One fixed-placement solution per candidate, in input order.
    pub solutions: Vec<PlacementSolution>,
}

/// Picks the mounted surface giving the best SNR while staying powered.
pub fn select_site(base: &Scenario, sites: &[Site], p_ris_w: f64) -> Result<SiteSelection, Error> {
    if sites.is_empty() {
        return Err(Error::NoCandidates);
    }
    let mut solutions = Vec::with_capacity(sites.len());
    for site in sites {
        let s = site.scenario(base)?;
        let x = site.r1h_m;
        let optimum = optimum_at(x, p_ris_w, &s).filter(|o| {
            !matches!(o.amplitude, OptimalAmplitude::NoReflection) || p_ris_w == 0.0
        });
        solutions.push(PlacementSolution {
            p_ris_w,
            objective_curve: vec![ObjectiveSample {
                r1h_m: x,
                objective: placement_objective(x, p_ris_w, &s),
                feasible: optimum.is_some(),
            }],
            optimum,
        });
    }
    let mut selected: Option<(usize, f64)> = None;
    for (i, sol) in solutions.iter().enumerate() {
        if let Some(o) = &sol.optimum {
            if selected.map_or(true, |(_, snr)| o.snr_opt_linear > snr) {
                selected = Some((i, o.snr_opt_linear));
            }
        }
    }
    Ok(SiteSelection {
        selected: selected.map(|(i, _)| i),
        solutions,
    })
}
