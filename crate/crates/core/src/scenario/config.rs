use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::geolink::{
    boresight_geometry, GeoPoint, OrbitSlot, EARTH_RADIUS_KM, GEO_ORBIT_RADIUS_KM,
};
use crate::geometry::SwarmParams;
use crate::metrics::MetricsOptions;
use crate::radiation::{AngularCut, ElementPatternModel};
use crate::{Error, Result, SPEED_OF_LIGHT};

/// Everything a run needs. Every field has a default, and the defaults
/// reproduce the reference scenario: 256 satellites carrying 422-element
/// subarrays at 19 GHz, parked at 50°E and aimed at Luxembourg.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScenarioConfig {
    pub frequency_ghz: f64,
    pub subarray: SubarrayConfig,
    pub swarm: SwarmConfig,
    pub element: ElementPatternModel,
    pub steering: SteeringConfig,
    pub geo: GeoConfig,
    pub cut: CutConfig,
    pub metrics: MetricsOptions,
    pub footprint: FootprintConfig,
    pub plot: PlotConfig,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        ScenarioConfig {
            frequency_ghz: 19.0,
            subarray: SubarrayConfig::default(),
            swarm: SwarmConfig::default(),
            element: ElementPatternModel::default(),
            steering: SteeringConfig::default(),
            geo: GeoConfig::default(),
            cut: CutConfig::default(),
            metrics: MetricsOptions::default(),
            footprint: FootprintConfig::default(),
            plot: PlotConfig::default(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SubarrayConfig {
    pub spacing_lambda: f64,
    pub target_count: usize,
}

impl Default for SubarrayConfig {
    fn default() -> Self {
        SubarrayConfig {
            spacing_lambda: 0.857,
            target_count: 422,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SwarmConfig {
    pub count: usize,
    pub sigma_lambda: f64,
    pub r_max_lambda: f64,
    pub d_min_lambda: f64,
    pub seed: u64,
    pub max_attempts: u64,
}

impl Default for SwarmConfig {
    fn default() -> Self {
        SwarmConfig {
            count: 256,
            sigma_lambda: 40_000.0,
            r_max_lambda: 20_000.0,
            d_min_lambda: 500.0,
            seed: 1,
            max_attempts: 1_000_000,
        }
    }
}

impl SwarmConfig {
    pub fn params(&self) -> SwarmParams {
        SwarmParams {
            count: self.count,
            sigma_lambda: self.sigma_lambda,
            r_max_lambda: self.r_max_lambda,
            d_min_lambda: self.d_min_lambda,
        }
    }
}

/// `Broadside` evaluates the pattern only; `GeoTarget` additionally points
/// the aperture normal from the slot at the ground target and traces the
/// footprint. The pattern is identical in both modes because the beam stays
/// on the aperture normal.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SteeringMode {
    Broadside,
    #[default]
    GeoTarget,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SteeringConfig {
    pub mode: SteeringMode,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GeoConfig {
    pub slot_lon_deg: f64,
    pub target_lat_deg: f64,
    pub target_lon_deg: f64,
    pub orbit_radius_km: f64,
    pub earth_radius_km: f64,
}

impl Default for GeoConfig {
    fn default() -> Self {
        GeoConfig {
            slot_lon_deg: 50.0,
            target_lat_deg: 49.612,
            target_lon_deg: 6.129,
            orbit_radius_km: GEO_ORBIT_RADIUS_KM,
            earth_radius_km: EARTH_RADIUS_KM,
        }
    }
}

impl GeoConfig {
    pub fn slot(&self) -> OrbitSlot {
        OrbitSlot {
            lon_deg: self.slot_lon_deg,
            orbit_radius_km: self.orbit_radius_km,
            earth_radius_km: self.earth_radius_km,
        }
    }

    pub fn target(&self) -> Result<GeoPoint> {
        GeoPoint::new(self.target_lat_deg, self.target_lon_deg)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CutConfig {
    pub phi_deg: f64,
    pub theta_min_deg: f64,
    pub theta_max_deg: f64,
    pub samples: usize,
}

impl Default for CutConfig {
    fn default() -> Self {
        CutConfig {
            phi_deg: 0.0,
            theta_min_deg: -1.0,
            theta_max_deg: 1.0,
            samples: 15_000,
        }
    }
}

impl CutConfig {
    pub fn angular_cut(&self) -> Result<AngularCut> {
        AngularCut::uniform(
            self.phi_deg,
            self.theta_min_deg,
            self.theta_max_deg,
            self.samples,
        )
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FootprintConfig {
    pub azimuth_samples: usize,
    /// Coarse search steps between the axis and the search limit.
    pub search_steps: usize,
    /// Search limit as a multiple of the principal-cut beamwidth.
    pub search_limit_hpbw: f64,
}

impl Default for FootprintConfig {
    fn default() -> Self {
        FootprintConfig {
            azimuth_samples: 64,
            search_steps: 400,
            search_limit_hpbw: 4.0,
        }
    }
}

/// SVG line chart of the pattern cut, with an optional zoom inset.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PlotConfig {
    pub enabled: bool,
    pub floor_db: f64,
    pub width_px: u32,
    pub height_px: u32,
    pub zoom: bool,
    pub zoom_theta_min_deg: f64,
    pub zoom_theta_max_deg: f64,
}

impl Default for PlotConfig {
    fn default() -> Self {
        PlotConfig {
            enabled: true,
            floor_db: -60.0,
            width_px: 900,
            height_px: 500,
            zoom: true,
            zoom_theta_min_deg: -0.03,
            zoom_theta_max_deg: 0.03,
        }
    }
}

fn invalid(field: &str, constraint: &str) -> Error {
    Error::Validation {
        field: field.to_owned(),
        constraint: constraint.to_owned(),
    }
}

fn positive(field: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(invalid(field, "must be positive and finite"))
    }
}

fn finite(field: &str, v: f64) -> Result<()> {
    if v.is_finite() {
        Ok(())
    } else {
        Err(invalid(field, "must be finite"))
    }
}

impl ScenarioConfig {
    /// Free-space wavelength in metres.
    pub fn wavelength_m(&self) -> f64 {
        SPEED_OF_LIGHT / (self.frequency_ghz * 1e9)
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        let config: ScenarioConfig =
            toml::from_str(text).map_err(|e| Error::ConfigParse(e.to_string()))?;
        config.validate()?;
        Ok(config)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    /// Checks every precondition the pipeline stages will rely on.
    pub fn validate(&self) -> Result<()> {
        positive("frequency_ghz", self.frequency_ghz)?;

        positive("subarray.spacing_lambda", self.subarray.spacing_lambda)?;
        if self.subarray.target_count == 0 {
            return Err(invalid("subarray.target_count", "must be at least 1"));
        }

        let s = &self.swarm;
        if s.count == 0 {
            return Err(invalid("swarm.count", "must be at least 1"));
        }
        positive("swarm.sigma_lambda", s.sigma_lambda)?;
        positive("swarm.r_max_lambda", s.r_max_lambda)?;
        positive("swarm.d_min_lambda", s.d_min_lambda)?;
        if s.max_attempts < s.count as u64 {
            return Err(invalid(
                "swarm.max_attempts",
                "must be at least swarm.count",
            ));
        }

        self.element.validate().map_err(|e| match e {
            Error::InvalidParameter { name, reason } => {
                invalid(&format!("element.{name}"), &reason)
            }
            other => other,
        })?;

        let g = &self.geo;
        finite("geo.slot_lon_deg", g.slot_lon_deg)?;
        finite("geo.target_lon_deg", g.target_lon_deg)?;
        if !(-90.0..=90.0).contains(&g.target_lat_deg) {
            return Err(invalid("geo.target_lat_deg", "must lie in [-90, 90]"));
        }
        positive("geo.earth_radius_km", g.earth_radius_km)?;
        if !(g.orbit_radius_km > g.earth_radius_km) || !g.orbit_radius_km.is_finite() {
            return Err(invalid(
                "geo.orbit_radius_km",
                "must exceed geo.earth_radius_km",
            ));
        }
        if self.steering.mode == SteeringMode::GeoTarget {
            let target = g.target()?;
            if boresight_geometry(&g.slot(), target).is_err() {
                return Err(invalid(
                    "geo.target_lat_deg",
                    "target must be above the horizon of the slot",
                ));
            }
        }

        let c = &self.cut;
        finite("cut.phi_deg", c.phi_deg)?;
        if c.samples < 2 {
            return Err(invalid("cut.samples", "must be at least 2"));
        }
        if !(-90.0..=90.0).contains(&c.theta_min_deg) {
            return Err(invalid("cut.theta_min_deg", "must lie in [-90, 90]"));
        }
        if !(-90.0..=90.0).contains(&c.theta_max_deg) {
            return Err(invalid("cut.theta_max_deg", "must lie in [-90, 90]"));
        }
        if !(c.theta_min_deg < c.theta_max_deg) {
            return Err(invalid(
                "cut.theta_max_deg",
                "must exceed cut.theta_min_deg",
            ));
        }
        // samples must stay strictly increasing in floating point
        c.angular_cut()
            .map_err(|_| invalid("cut.samples", "too many samples for the angular range"))?;

        positive("metrics.lobe_boundary_deg", self.metrics.lobe_boundary_deg)?;
        if !(self.metrics.min_prominence_db >= 0.0) || !self.metrics.min_prominence_db.is_finite() {
            return Err(invalid(
                "metrics.min_prominence_db",
                "must be non-negative and finite",
            ));
        }

        let f = &self.footprint;
        if f.azimuth_samples < 16 {
            return Err(invalid("footprint.azimuth_samples", "must be at least 16"));
        }
        if f.search_steps == 0 {
            return Err(invalid("footprint.search_steps", "must be at least 1"));
        }
        if !(f.search_limit_hpbw >= 1.0) || !f.search_limit_hpbw.is_finite() {
            return Err(invalid("footprint.search_limit_hpbw", "must be at least 1"));
        }

        let p = &self.plot;
        if !(p.floor_db < 0.0) || !p.floor_db.is_finite() {
            return Err(invalid("plot.floor_db", "must be negative and finite"));
        }
        if p.width_px < 200 || p.height_px < 150 {
            return Err(invalid("plot.width_px", "plot must be at least 200x150 px"));
        }
        if !(p.zoom_theta_min_deg < p.zoom_theta_max_deg) {
            return Err(invalid(
                "plot.zoom_theta_max_deg",
                "must exceed plot.zoom_theta_min_deg",
            ));
        }
        Ok(())
    }
}

/// Read, default-fill and validate a TOML scenario file.
pub fn load_config(path: &Path) -> Result<ScenarioConfig> {
    let text = std::fs::read_to_string(path)?;
    ScenarioConfig::from_toml(&text)
}
