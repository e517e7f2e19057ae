//! Received SNR through the surface and the power it absorbs.
//!
//! Amplitude terms use the centre distances and angles (far field); only
//! the phase of each element's contribution uses its own path length.
//! Harvesting uses the same far-field approximation for every element;
//! [`harvested_power_element_geometry`] keeps per-element distances for
//! comparison on large surfaces.

use std::f64::consts::PI;

use rayon::prelude::*;

use crate::error::Error;
use crate::geometry::{element_distances, LinkGeometry};
use crate::scenario::Scenario;
use crate::sum::{CompensatedSum, ComplexSum};
use crate::to_db;

/// Per-element reflection amplitude and phase, row-major like
/// [`crate::ElementGrid`].
#[derive(Debug, Clone, PartialEq)]
pub struct ReflectionState {
    pub rows: usize,
    pub cols: usize,
    amplitudes: Vec<f64>,
    /// Radians, unwrapped.
    phases: Vec<f64>,
}

impl ReflectionState {
    /// Amplitudes are accepted on the closed interval [0, 1].
    pub fn new(rows: usize, cols: usize, amplitudes: Vec<f64>, phases: Vec<f64>) -> Result<Self, Error> {
        let n = rows * cols;
        for len in [amplitudes.len(), phases.len()] {
            if len != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: len,
                });
            }
        }
        check_amplitudes(&amplitudes)?;
        Ok(Self {
            rows,
            cols,
            amplitudes,
            phases,
        })
    }

    pub fn uniform(rows: usize, cols: usize, amplitude: f64, phases: Vec<f64>) -> Result<Self, Error> {
        Self::new(rows, cols, vec![amplitude; rows * cols], phases)
    }

    pub fn amplitudes(&self) -> &[f64] {
        &self.amplitudes
    }

    pub fn phases(&self) -> &[f64] {
        &self.phases
    }

    pub fn len(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amplitudes.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LinkReport {
    pub snr_linear: f64,
    pub snr_db: f64,
    pub p_harv_w: f64,
    pub p_abs_per_element_w: Option<Vec<f64>>,
}

fn check_amplitudes(amplitudes: &[f64]) -> Result<(), Error> {
    match amplitudes
        .iter()
        .position(|a| !(0.0..=1.0).contains(a))
    {
        Some(index) => Err(Error::AmplitudeOutOfRange {
            index,
            value: amplitudes[index],
        }),
        None => Ok(()),
    }
}

fn check_len(found: usize, s: &Scenario) -> Result<(), Error> {
    let expected = s.element_count();
    if found == expected {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}

/// Element gain pattern `4 cos(theta)`.
#[inline]
pub fn element_gain(theta_rad: f64) -> f64 {
    4.0 * theta_rad.cos()
}

/// `(lambda / 4 pi)^2`, the free-space aperture factor.
#[inline]
fn aperture_factor(s: &Scenario) -> f64 {
    let k = s.wavelength_m() / (4.0 * PI);
    k * k
}

/// SNR per unit `|sum|^2`: everything in front of the array sum.
fn snr_scale(geo: &LinkGeometry, s: &Scenario) -> f64 {
    let k2 = aperture_factor(s);
    k2 * k2 * s.transmit_power_w * s.tx_gain() * s.rx_gain() * element_gain(geo.theta_i_rad)
        * element_gain(geo.theta_r_rad)
        / (geo.r1_m * geo.r1_m * geo.r2_m * geo.r2_m * s.noise_power_w())
}

/// SNR for an arbitrary reflection state: the coherent sum of every
/// element's `A exp(-j(phi + 2 pi (r1pl + r2pl) / lambda))`, accumulated
/// with compensated summation in element order.
pub fn snr_explicit(r1h_m: f64, reflection: &ReflectionState, s: &Scenario) -> Result<f64, Error> {
    snr_explicit_partitioned(r1h_m, reflection, s, 1)
}

/// As [`snr_explicit`], with the element sum split into `partitions`
/// contiguous chunks evaluated in parallel. Chunks are merged in order, so
/// a given partition count is reproducible bit for bit; one partition
/// matches [`snr_explicit`] exactly.
pub fn snr_explicit_partitioned(
    r1h_m: f64,
    reflection: &ReflectionState,
    s: &Scenario,
    partitions: usize,
) -> Result<f64, Error> {
    check_len(reflection.len(), s)?;
    let geo = LinkGeometry::at(r1h_m, s);
    let grid = s.grid();
    let distances = element_distances(r1h_m, &grid, s);
    let wavenumber = 2.0 * PI / s.wavelength_m();

    let partial = |range: std::ops::Range<usize>| {
        let mut acc = ComplexSum::default();
        for i in range {
            let (r1, r2) = distances[i];
            let arg = -(reflection.phases[i] + wavenumber * (r1 + r2));
            let a = reflection.amplitudes[i];
            acc.add(a * arg.cos(), a * arg.sin());
        }
        acc
    };

    let n = distances.len();
    let parts = partitions.clamp(1, n.max(1));
    let total = if parts == 1 {
        partial(0..n)
    } else {
        let chunks: Vec<ComplexSum> = (0..parts)
            .into_par_iter()
            .map(|k| partial(k * n / parts..(k + 1) * n / parts))
            .collect();
        chunks.iter().fold(ComplexSum::default(), |mut acc, c| {
            acc.merge(c);
            acc
        })
    };
    Ok(snr_scale(&geo, s) * total.norm_sqr())
}

/// Closed-form SNR with every element co-phased at a common amplitude:
/// `16 P_t G_t G_r (lambda/4pi)^4 M_s^2 A^2 cos(th_i) cos(th_r) / (r1^2 r2^2 sigma^2)`.
pub fn snr_cophased(r1h_m: f64, uniform_a: f64, s: &Scenario) -> f64 {
    let geo = LinkGeometry::at(r1h_m, s);
    let m = s.element_count() as f64;
    snr_scale(&geo, s) * m * m * uniform_a * uniform_a
}

/// Power impinging on one element, using centre distance and incidence.
pub fn incident_power_element(r1h_m: f64, s: &Scenario) -> f64 {
    let geo = LinkGeometry::at(r1h_m, s);
    aperture_factor(s) * s.transmit_power_w * s.tx_gain() * element_gain(geo.theta_i_rad)
        / (geo.r1_m * geo.r1_m)
}

/// Absorbed power `(1 - A^2) P_inc` of one element.
pub fn absorbed_power_element(a: f64, r1h_m: f64, s: &Scenario) -> f64 {
    (1.0 - a) * (1.0 + a) * incident_power_element(r1h_m, s)
}

/// Per-element absorbed power, in grid order.
pub fn absorbed_power_profile(r1h_m: f64, amplitudes: &[f64], s: &Scenario) -> Result<Vec<f64>, Error> {
    check_len(amplitudes.len(), s)?;
    check_amplitudes(amplitudes)?;
    let incident = incident_power_element(r1h_m, s);
    Ok(amplitudes
        .iter()
        .map(|a| (1.0 - a) * (1.0 + a) * incident)
        .collect())
}

/// Rectified power `eps_conv * sum(P_abs)` over all elements.
pub fn harvested_power(r1h_m: f64, amplitudes: &[f64], s: &Scenario) -> Result<f64, Error> {
    let absorbed: CompensatedSum = absorbed_power_profile(r1h_m, amplitudes, s)?
        .into_iter()
        .collect();
    Ok(s.conversion_efficiency * absorbed.value())
}

/// Harvested power when every element shares amplitude `a`.
pub fn harvested_power_uniform(r1h_m: f64, a: f64, s: &Scenario) -> f64 {
    s.conversion_efficiency * s.element_count() as f64 * absorbed_power_element(a, r1h_m, s)
}

/// Harvested power with each element's own distance to the TX and own
/// incidence angle (`cos = y_s / r1pl`) instead of the centre values.
pub fn harvested_power_element_geometry(r1h_m: f64, amplitudes: &[f64], s: &Scenario) -> Result<f64, Error> {
    check_len(amplitudes.len(), s)?;
    check_amplitudes(amplitudes)?;
    let scale = aperture_factor(s) * s.transmit_power_w * s.tx_gain();
    let ys = s.lateral_offset_m;
    let distances = element_distances(r1h_m, &s.grid(), s);
    let absorbed: CompensatedSum = amplitudes
        .iter()
        .zip(&distances)
        .map(|(a, &(r1, _))| (1.0 - a) * (1.0 + a) * scale * 4.0 * (ys / r1) / (r1 * r1))
        .collect();
    Ok(s.conversion_efficiency * absorbed.value())
}

/// SNR and harvest for one reflection state.
pub fn evaluate_link(
    r1h_m: f64,
    reflection: &ReflectionState,
    s: &Scenario,
    per_element: bool,
) -> Result<LinkReport, Error> {
    let snr_linear = snr_explicit(r1h_m, reflection, s)?;
    let profile = absorbed_power_profile(r1h_m, reflection.amplitudes(), s)?;
    let absorbed: CompensatedSum = profile.iter().copied().collect();
    Ok(LinkReport {
        snr_linear,
        snr_db: to_db(snr_linear),
        p_harv_w: s.conversion_efficiency * absorbed.value(),
        p_abs_per_element_w: per_element.then_some(profile),
    })
}
