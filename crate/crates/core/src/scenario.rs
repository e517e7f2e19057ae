//! Physical parameters of one TX–RIS–RX deployment.

use std::f64::consts::PI;
use std::fmt::Write as _;
use std::path::Path;

use crate::config::ConfigMap;
use crate::error::ConfigError;
use crate::geometry::{element_offsets, ElementGrid};

/// Speed of light in vacuum, m/s.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Dish diameters below this many wavelengths get a warning: the peak-gain
/// formula only holds for electrically large apertures.
const MIN_APERTURE_WAVELENGTHS: f64 = 10.0;

/// Consumption of the surface's control chips and rectifiers.
#[derive(Debug, Clone, PartialEq)]
pub struct PowerModel {
    pub p_static_w: f64,
    pub p_dynamic_w: f64,
    /// Fraction of time spent reconfiguring, in [0, 1].
    pub reconfig_fraction: f64,
    pub n_rectifiers: u32,
    pub p_rectifier_w: f64,
    /// Direct per-chip power; replaces `p_static + p_r * p_dynamic` when set.
    pub p_chip_w: Option<f64>,
}

impl Default for PowerModel {
    fn default() -> Self {
        Self {
            p_static_w: 0.0,
            p_dynamic_w: 0.0,
            reconfig_fraction: 0.0,
            n_rectifiers: 100,
            p_rectifier_w: 0.0,
            p_chip_w: None,
        }
    }
}

impl PowerModel {
    /// Average power of one chip (one chip per reflective unit).
    pub fn chip_power_w(&self) -> f64 {
        self.p_chip_w
            .unwrap_or(self.p_static_w + self.reconfig_fraction * self.p_dynamic_w)
    }

    /// Total consumption of a surface with `element_count` units.
    pub fn consumption_w(&self, element_count: usize) -> f64 {
        element_count as f64 * self.chip_power_w() + self.n_rectifiers as f64 * self.p_rectifier_w
    }

    fn validate(&self) -> Result<(), ConfigError> {
        nonneg("p_static_w", self.p_static_w)?;
        nonneg("p_dynamic_w", self.p_dynamic_w)?;
        nonneg("p_rectifier_w", self.p_rectifier_w)?;
        if let Some(p) = self.p_chip_w {
            nonneg("p_chip_w", p)?;
        }
        if !(0.0..=1.0).contains(&self.reconfig_fraction) {
            return Err(invalid("reconfig_fraction", "must lie in [0, 1]"));
        }
        if self.n_rectifiers == 0 {
            return Err(invalid("n_rectifiers", "must be a positive integer"));
        }
        Ok(())
    }
}

/// `P_RIS = M_s * P_c + M_rect * P_rect`.
pub fn ris_power_consumption(power_model: &PowerModel, element_count: usize) -> f64 {
    power_model.consumption_w(element_count)
}

/// Thermal noise power in watts for a receiver of bandwidth `bandwidth_hz`
/// and noise figure `noise_figure_db`, from `-174 dBm/Hz + 10 log10 W + F`.
pub fn noise_power_w(bandwidth_hz: f64, noise_figure_db: f64) -> f64 {
    let dbm = -174.0 + 10.0 * bandwidth_hz.log10() + noise_figure_db;
    10f64.powf(dbm / 10.0) * 1e-3
}

/// Peak gain `e (pi D / lambda)^2` of a parabolic dish.
pub fn parabolic_gain(diameter_m: f64, efficiency: f64, wavelength_m: f64) -> f64 {
    let aperture = PI * diameter_m / wavelength_m;
    efficiency * aperture * aperture
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub carrier_frequency_hz: f64,
    pub transmit_power_w: f64,
    pub bandwidth_hz: f64,
    pub noise_figure_db: f64,
    pub tx_diameter_m: f64,
    pub rx_diameter_m: f64,
    pub tx_efficiency: f64,
    pub rx_efficiency: f64,
    pub tx_height_m: f64,
    pub rx_height_m: f64,
    pub ris_height_m: f64,
    /// Horizontal TX–RX distance.
    pub txrx_horizontal_m: f64,
    /// Offset of the surface from the TX–RX line.
    pub lateral_offset_m: f64,
    pub ris_rows: usize,
    pub ris_cols: usize,
    pub element_dx_m: f64,
    pub element_dy_m: f64,
    pub conversion_efficiency: f64,
    pub power_model: PowerModel,
}

impl Scenario {
    /// Street-level 28 GHz reference deployment: 1 W transmitter, 2 GHz
    /// bandwidth, 30 cm dishes, a 50x50 half-wavelength surface mounted at
    /// 12 m between 3 m terminals 100 m apart. The lateral offset is the
    /// caller's choice; chip power defaults to zero.
    pub fn reference(lateral_offset_m: f64) -> Self {
        let half_wavelength = SPEED_OF_LIGHT / 28e9 / 2.0;
        Self {
            carrier_frequency_hz: 28e9,
            transmit_power_w: 1.0,
            bandwidth_hz: 2e9,
            noise_figure_db: 10.0,
            tx_diameter_m: 0.3,
            rx_diameter_m: 0.3,
            tx_efficiency: 0.7,
            rx_efficiency: 0.7,
            tx_height_m: 3.0,
            rx_height_m: 3.0,
            ris_height_m: 12.0,
            txrx_horizontal_m: 100.0,
            lateral_offset_m,
            ris_rows: 50,
            ris_cols: 50,
            element_dx_m: half_wavelength,
            element_dy_m: half_wavelength,
            conversion_efficiency: 0.6,
            power_model: PowerModel::default(),
        }
    }

    pub fn wavelength_m(&self) -> f64 {
        SPEED_OF_LIGHT / self.carrier_frequency_hz
    }

    pub fn element_count(&self) -> usize {
        self.ris_rows * self.ris_cols
    }

    pub fn tx_gain(&self) -> f64 {
        parabolic_gain(self.tx_diameter_m, self.tx_efficiency, self.wavelength_m())
    }

    pub fn rx_gain(&self) -> f64 {
        parabolic_gain(self.rx_diameter_m, self.rx_efficiency, self.wavelength_m())
    }

    pub fn noise_power_w(&self) -> f64 {
        noise_power_w(self.bandwidth_hz, self.noise_figure_db)
    }

    /// Total consumption `P_RIS` of the surface.
    pub fn p_ris_w(&self) -> f64 {
        ris_power_consumption(&self.power_model, self.element_count())
    }

    pub fn grid(&self) -> ElementGrid {
        element_offsets(
            self.ris_rows,
            self.ris_cols,
            self.element_dx_m,
            self.element_dy_m,
        )
    }

    /// Checks every invariant, logging soft warnings.
    pub fn validated(self) -> Result<Self, ConfigError> {
        positive("carrier_frequency_hz", self.carrier_frequency_hz)?;
        positive("transmit_power_w", self.transmit_power_w)?;
        positive("bandwidth_hz", self.bandwidth_hz)?;
        finite("noise_figure_db", self.noise_figure_db)?;
        positive("tx_diameter_m", self.tx_diameter_m)?;
        positive("rx_diameter_m", self.rx_diameter_m)?;
        efficiency("tx_efficiency", self.tx_efficiency)?;
        efficiency("rx_efficiency", self.rx_efficiency)?;
        positive("tx_height_m", self.tx_height_m)?;
        positive("rx_height_m", self.rx_height_m)?;
        positive("ris_height_m", self.ris_height_m)?;
        positive("txrx_horizontal_m", self.txrx_horizontal_m)?;
        positive("lateral_offset_m", self.lateral_offset_m)?;
        if self.ris_rows == 0 {
            return Err(invalid("ris_rows", "must be a positive integer"));
        }
        if self.ris_cols == 0 {
            return Err(invalid("ris_cols", "must be a positive integer"));
        }
        positive("element_dx_m", self.element_dx_m)?;
        positive("element_dy_m", self.element_dy_m)?;
        if !(self.conversion_efficiency > 0.0 && self.conversion_efficiency < 1.0) {
            return Err(invalid("conversion_efficiency", "must lie in (0, 1)"));
        }
        self.power_model.validate()?;
        for warning in self.warnings() {
            log::warn!("{warning}");
        }
        Ok(self)
    }

    /// Soft-limit violations that do not prevent evaluation.
    pub fn warnings(&self) -> Vec<String> {
        let lambda = self.wavelength_m();
        [
            ("tx_diameter_m", self.tx_diameter_m),
            ("rx_diameter_m", self.rx_diameter_m),
        ]
        .into_iter()
        .filter(|(_, d)| d / lambda < MIN_APERTURE_WAVELENGTHS)
        .map(|(key, d)| {
            format!(
                "{key} = {d} is only {:.2} wavelengths; the dish gain formula assumes D >> lambda",
                d / lambda
            )
        })
        .collect()
    }

    /// Builds a validated scenario from parsed configuration entries.
    pub fn from_config(mut map: ConfigMap) -> Result<Self, ConfigError> {
        let carrier_frequency_hz: f64 = map.require("carrier_frequency_hz")?;
        let half_wavelength = SPEED_OF_LIGHT / carrier_frequency_hz / 2.0;
        let defaults = PowerModel::default();
        let scenario = Self {
            carrier_frequency_hz,
            transmit_power_w: map.require("transmit_power_w")?,
            bandwidth_hz: map.require("bandwidth_hz")?,
            noise_figure_db: map.require("noise_figure_db")?,
            tx_diameter_m: map.require("tx_diameter_m")?,
            rx_diameter_m: map.require("rx_diameter_m")?,
            tx_efficiency: map.require("tx_efficiency")?,
            rx_efficiency: map.require("rx_efficiency")?,
            tx_height_m: map.require("tx_height_m")?,
            rx_height_m: map.require("rx_height_m")?,
            ris_height_m: map.require("ris_height_m")?,
            txrx_horizontal_m: map.require("txrx_horizontal_m")?,
            lateral_offset_m: map.require("lateral_offset_m")?,
            ris_rows: map.require("ris_rows")?,
            ris_cols: map.require("ris_cols")?,
            element_dx_m: map.take("element_dx_m")?.unwrap_or(half_wavelength),
            element_dy_m: map.take("element_dy_m")?.unwrap_or(half_wavelength),
            conversion_efficiency: map.require("conversion_efficiency")?,
            power_model: PowerModel {
                p_static_w: map.take("p_static_w")?.unwrap_or(defaults.p_static_w),
                p_dynamic_w: map.take("p_dynamic_w")?.unwrap_or(defaults.p_dynamic_w),
                reconfig_fraction: map
                    .take("reconfig_fraction")?
                    .unwrap_or(defaults.reconfig_fraction),
                n_rectifiers: map.take("n_rectifiers")?.unwrap_or(defaults.n_rectifiers),
                p_rectifier_w: map.take("p_rectifier_w")?.unwrap_or(defaults.p_rectifier_w),
                p_chip_w: map.take("p_chip_w")?,
            },
        };
        map.finish()?;
        scenario.validated()
    }

    /// Serializes every field; reloading reproduces the scenario exactly.
    pub fn to_config_text(&self) -> String {
        let pm = &self.power_model;
        let mut out = String::new();
        let mut put = |key: &str, value: &dyn std::fmt::Display| {
            let _ = writeln!(out, "{key} = {value}");
        };
        put("carrier_frequency_hz", &self.carrier_frequency_hz);
        put("transmit_power_w", &self.transmit_power_w);
        put("bandwidth_hz", &self.bandwidth_hz);
        put("noise_figure_db", &self.noise_figure_db);
        put("tx_diameter_m", &self.tx_diameter_m);
        put("rx_diameter_m", &self.rx_diameter_m);
        put("tx_efficiency", &self.tx_efficiency);
        put("rx_efficiency", &self.rx_efficiency);
        put("tx_height_m", &self.tx_height_m);
        put("rx_height_m", &self.rx_height_m);
        put("ris_height_m", &self.ris_height_m);
        put("txrx_horizontal_m", &self.txrx_horizontal_m);
        put("lateral_offset_m", &self.lateral_offset_m);
        put("ris_rows", &self.ris_rows);
        put("ris_cols", &self.ris_cols);
        put("element_dx_m", &self.element_dx_m);
        put("element_dy_m", &self.element_dy_m);
        put("conversion_efficiency", &self.conversion_efficiency);
        put("p_static_w", &pm.p_static_w);
        put("p_dynamic_w", &pm.p_dynamic_w);
        put("reconfig_fraction", &pm.reconfig_fraction);
        put("n_rectifiers", &pm.n_rectifiers);
        put("p_rectifier_w", &pm.p_rectifier_w);
        if let Some(p) = pm.p_chip_w {
            put("p_chip_w", &p);
        }
        out
    }
}

impl std::str::FromStr for Scenario {
    type Err = ConfigError;

    fn from_str(text: &str) -> Result<Self, Self::Err> {
        Self::from_config(ConfigMap::parse(text)?)
    }
}

/// Reads and validates a scenario file.
pub fn load_scenario(path: &Path) -> Result<Scenario, ConfigError> {
    Scenario::from_config(ConfigMap::read(path)?)
}

/// Reads a scenario file, applies `KEY=VALUE` overrides, then validates.
pub fn load_scenario_with_overrides<S: AsRef<str>>(
    path: &Path,
    overrides: &[S],
) -> Result<Scenario, ConfigError> {
    let mut map = ConfigMap::read(path)?;
    for spec in overrides {
        map.apply_override(spec.as_ref())?;
    }
    Scenario::from_config(map)
}

fn invalid(key: &str, reason: &str) -> ConfigError {
    ConfigError::Invalid {
        key: key.to_string(),
        reason: reason.to_string(),
    }
}

fn finite(key: &str, value: f64) -> Result<(), ConfigError> {
    if value.is_finite() {
        Ok(())
    } else {
        Err(invalid(key, "must be finite"))
    }
}

fn positive(key: &str, value: f64) -> Result<(), ConfigError> {
    finite(key, value)?;
    if value > 0.0 {
        Ok(())
    } else {
        Err(invalid(key, "must be positive"))
    }
}

fn nonneg(key: &str, value: f64) -> Result<(), ConfigError> {
    finite(key, value)?;
    if value >= 0.0 {
        Ok(())
    } else {
        Err(invalid(key, "must be non-negative"))
    }
}

fn efficiency(key: &str, value: f64) -> Result<(), ConfigError> {
    if value > 0.0 && value <= 1.0 {
        Ok(())
    } else {
        Err(invalid(key, "must lie in (0, 1]"))
    }
}
