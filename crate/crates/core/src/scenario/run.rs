//! End-to-end pipeline: geometry → pattern → metrics → footprint.

use std::fs;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::Serialize;

use super::config::{ScenarioConfig, SteeringMode};
use super::plot::render_cut_svg;
use crate::geolink::{half_power_footprint, FootprintContour, FootprintOptions};
use crate::geometry::{place_swarm, ApertureLattice, LatticeDocument, LayoutDocument, SwarmLayout};
use crate::metrics::{extract_metrics, MetricsDocument};
use crate::radiation::{write_field_cut, CompositeArray, CutMetadata, FieldCut, SteeringTarget};
use crate::{Error, Result};

pub const LAYOUT_FILE: &str = "layout.json";
pub const LATTICE_FILE: &str = "lattice.json";
pub const PATTERN_FILE: &str = "pattern.csv";
pub const PLOT_FILE: &str = "pattern.svg";
pub const METRICS_FILE: &str = "metrics.json";
pub const FOOTPRINT_FILE: &str = "footprint.geojson";

/// Wall-clock seconds per stage. Reported only, never written to artifacts.
#[derive(Clone, Debug, Default, Serialize)]
pub struct StageTimings {
    pub geometry_s: f64,
    pub pattern_s: f64,
    pub metrics_s: f64,
    pub footprint_s: Option<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct RunReport {
    pub config: ScenarioConfig,
    pub seed: u64,
    pub layout_path: PathBuf,
    pub lattice_path: PathBuf,
    pub pattern_path: PathBuf,
    pub plot_path: Option<PathBuf>,
    pub metrics_path: PathBuf,
    pub metrics: MetricsDocument,
    pub footprint_path: Option<PathBuf>,
    pub footprint_area_km2: Option<f64>,
    pub timings: StageTimings,
}

impl RunReport {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serialize");
        s.push('\n');
        s
    }
}

/// The beam direction in the array frame. The swarm's aperture normal is
/// pointed at the target in both modes, so the beam is always broadside.
pub fn steering_target(_config: &ScenarioConfig) -> SteeringTarget {
    SteeringTarget::BROADSIDE
}

pub fn build_lattice(config: &ScenarioConfig) -> Result<ApertureLattice> {
    ApertureLattice::with_count(config.subarray.target_count, config.subarray.spacing_lambda)
}

pub fn build_swarm(config: &ScenarioConfig) -> Result<SwarmLayout> {
    place_swarm(
        config.swarm.params(),
        config.swarm.seed,
        config.swarm.max_attempts,
    )
}

/// Uniformly weighted composite array for the configured geometry.
pub fn build_array(
    config: &ScenarioConfig,
    lattice: &ApertureLattice,
    swarm: &SwarmLayout,
) -> Result<CompositeArray> {
    CompositeArray::uniform(config.element, lattice, swarm, steering_target(config))
}

/// Factorized pattern on the configured cut.
pub fn evaluate_pattern(config: &ScenarioConfig, array: &CompositeArray) -> Result<FieldCut> {
    Ok(array.cut_factorized(&config.cut.angular_cut()?))
}

pub fn compute_metrics(
    config: &ScenarioConfig,
    cut: &FieldCut,
    seed: Option<u64>,
) -> Result<MetricsDocument> {
    let (metrics, lobes) = extract_metrics(cut, config.metrics)?;
    Ok(MetricsDocument::new(
        metrics,
        &lobes,
        cut,
        seed,
        config.metrics,
    ))
}

/// Half-power footprint of `array` at the configured target. The search
/// extends to `search_limit_hpbw` principal-cut beamwidths off axis.
pub fn compute_footprint(
    config: &ScenarioConfig,
    array: &CompositeArray,
    hpbw_deg: f64,
) -> Result<FootprintContour> {
    let options = FootprintOptions {
        azimuth_samples: config.footprint.azimuth_samples,
        max_off_axis_deg: (hpbw_deg * config.footprint.search_limit_hpbw).min(89.0),
        search_steps: config.footprint.search_steps,
    };
    half_power_footprint(array, &config.geo.slot(), config.geo.target()?, options)
}

pub fn cut_metadata(config: &ScenarioConfig, seed: Option<u64>) -> CutMetadata {
    CutMetadata {
        steering: steering_target(config),
        seed,
        element: config.element.label(),
    }
}

pub fn write_pattern_file(path: &Path, cut: &FieldCut, meta: &CutMetadata) -> Result<()> {
    let mut out = BufWriter::new(fs::File::create(path)?);
    write_field_cut(&mut out, cut, meta)?;
    out.flush()?;
    Ok(())
}

/// Files written so far; removed again unless the run completes.
struct Artifacts {
    written: Vec<PathBuf>,
    committed: bool,
}

impl Artifacts {
    fn write(&mut self, path: PathBuf, contents: &str) -> Result<PathBuf> {
        self.written.push(path.clone());
        fs::write(&path, contents)?;
        Ok(path)
    }

    fn with<F: FnOnce(&Path) -> Result<()>>(&mut self, path: PathBuf, f: F) -> Result<PathBuf> {
        self.written.push(path.clone());
        f(&path)?;
        Ok(path)
    }
}

impl Drop for Artifacts {
    fn drop(&mut self) {
        if !self.committed {
            for p in &self.written {
                let _ = fs::remove_file(p);
            }
        }
    }
}

fn timed<T>(f: impl FnOnce() -> Result<T>) -> (Result<T>, f64) {
    let start = Instant::now();
    let r = f();
    (r, start.elapsed().as_secs_f64())
}

/// Run every stage and write the artifacts into `out_dir`. On failure the
/// error carries the stage name and any files already written are removed.
pub fn run_scenario(config: &ScenarioConfig, out_dir: &Path) -> Result<RunReport> {
    config.validate()?;
    fs::create_dir_all(out_dir)?;
    let seed = config.swarm.seed;
    let mut files = Artifacts {
        written: Vec::new(),
        committed: false,
    };
    let mut timings = StageTimings::default();

    let (geometry, t) = timed(|| {
        let lattice = build_lattice(config)?;
        let swarm = build_swarm(config)?;
        Ok((lattice, swarm))
    });
    timings.geometry_s = t;
    let (lattice, swarm) = geometry.map_err(|e| e.in_stage("geometry"))?;
    let layout_path = files
        .write(
            out_dir.join(LAYOUT_FILE),
            &LayoutDocument::from_layout(&swarm).to_json(),
        )
        .map_err(|e| e.in_stage("geometry"))?;
    let lattice_path = files
        .write(
            out_dir.join(LATTICE_FILE),
            &LatticeDocument::from_lattice(&lattice).to_json(),
        )
        .map_err(|e| e.in_stage("geometry"))?;

    let (pattern, t) = timed(|| {
        let array = build_array(config, &lattice, &swarm)?;
        let cut = evaluate_pattern(config, &array)?;
        Ok((array, cut))
    });
    timings.pattern_s = t;
    let (array, cut) = pattern.map_err(|e| e.in_stage("pattern"))?;
    let pattern_path = files
        .with(out_dir.join(PATTERN_FILE), |p| {
            write_pattern_file(p, &cut, &cut_metadata(config, Some(seed)))
        })
        .map_err(|e| e.in_stage("pattern"))?;
    let plot_path = if config.plot.enabled {
        let title = format!(
            "{} satellites × {} elements, seed {seed}",
            swarm.centers.len(),
            lattice.len()
        );
        let svg = render_cut_svg(&cut, &config.plot, &title);
        Some(
            files
                .write(out_dir.join(PLOT_FILE), &svg)
                .map_err(|e| e.in_stage("pattern"))?,
        )
    } else {
        None
    };

    let (metrics, t) = timed(|| compute_metrics(config, &cut, Some(seed)));
    timings.metrics_s = t;
    let metrics = metrics.map_err(|e| e.in_stage("metrics"))?;
    let metrics_path = files
        .write(out_dir.join(METRICS_FILE), &metrics.to_json())
        .map_err(|e| e.in_stage("metrics"))?;

    let (footprint_path, footprint_area_km2) = if config.steering.mode == SteeringMode::GeoTarget {
        let hpbw = metrics.metrics.hpbw_deg;
        let (contour, t) = timed(|| compute_footprint(config, &array, hpbw));
        timings.footprint_s = Some(t);
        let contour = contour.map_err(|e| e.in_stage("footprint"))?;
        let path = files
            .write(
                out_dir.join(FOOTPRINT_FILE),
                &contour.to_geojson(hpbw, Some(seed)),
            )
            .map_err(|e| e.in_stage("footprint"))?;
        (Some(path), Some(contour.area_km2))
    } else {
        (None, None)
    };

    files.committed = true;
    Ok(RunReport {
        config: config.clone(),
        seed,
        layout_path,
        lattice_path,
        pattern_path,
        plot_path,
        metrics_path,
        metrics,
        footprint_path,
        footprint_area_km2,
        timings,
    })
}

/// Stage label of `err`, if it came out of [`run_scenario`].
pub fn failed_stage(err: &Error) -> Option<&'static str> {
    match err {
        Error::Stage { stage, .. } => Some(stage),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metrics::extract_metrics;

    fn small() -> ScenarioConfig {
        let mut c = ScenarioConfig::default();
        c.subarray.target_count = 19;
        c.swarm.count = 8;
        c.swarm.sigma_lambda = 400.0;
        c.swarm.r_max_lambda = 300.0;
        c.swarm.d_min_lambda = 10.0;
        c.swarm.max_attempts = 100_000;
        c.cut.samples = 2001;
        c.cut.theta_min_deg = -2.0;
        c.cut.theta_max_deg = 2.0;
        c.metrics.lobe_boundary_deg = 0.5;
        c
    }

    #[test]
    fn writes_all_artifacts() {
        let dir = tempfile::tempdir().unwrap();
        let report = run_scenario(&small(), dir.path()).unwrap();
        for p in [
            &report.layout_path,
            &report.lattice_path,
            &report.pattern_path,
            &report.metrics_path,
            report.plot_path.as_ref().unwrap(),
            report.footprint_path.as_ref().unwrap(),
        ] {
            assert!(p.exists(), "{p:?}");
        }
        assert!(report.footprint_area_km2.unwrap() > 0.0);
        assert_eq!(report.metrics.seed, Some(1));
    }

    #[test]
    fn broadside_mode_skips_footprint() {
        let dir = tempfile::tempdir().unwrap();
        let mut c = small();
        c.steering.mode = SteeringMode::Broadside;
        c.plot.enabled = false;
        let report = run_scenario(&c, dir.path()).unwrap();
        assert!(report.footprint_path.is_none());
        assert!(report.plot_path.is_none());
        assert!(!dir.path().join(FOOTPRINT_FILE).exists());
    }

    #[test]
    fn single_satellite_matches_subarray_metrics() {
        let dir = tempfile::tempdir().unwrap();
        let mut c = small();
        c.steering.mode = SteeringMode::Broadside;
        c.swarm.count = 1;
        c.cut.theta_min_deg = -60.0;
        c.cut.theta_max_deg = 60.0;
        c.cut.samples = 4001;
        c.metrics.lobe_boundary_deg = 30.0;
        let report = run_scenario(&c, dir.path()).unwrap();
        let lattice = build_lattice(&c).unwrap();
        let mut solo = build_swarm(&c).unwrap();
        solo.centers = vec![crate::Point2::ORIGIN];
        let array = build_array(&c, &lattice, &solo).unwrap();
        let cut = evaluate_pattern(&c, &array).unwrap();
        let (expected, _) = extract_metrics(&cut, c.metrics).unwrap();
        let got = report.metrics.metrics;
        let close = |a: f64, b: f64| (a - b).abs() <= 1e-12 * b.abs().max(1.0);
        assert!(close(got.hpbw_deg, expected.hpbw_deg));
        assert!(close(got.sll_db.unwrap(), expected.sll_db.unwrap()));
        assert!(close(got.gll_db.unwrap(), expected.gll_db.unwrap()));
        assert_eq!(got.sll_theta_deg, expected.sll_theta_deg);
        assert_eq!(got.gll_theta_deg, expected.gll_theta_deg);
    }

    #[test]
    fn failure_removes_partial_artifacts() {
        let dir = tempfile::tempdir().unwrap();
        let mut c = small();
        // A cut that never reaches -3 dB fails in the metrics stage.
        c.cut.theta_min_deg = -0.001;
        c.cut.theta_max_deg = 0.001;
        let err = run_scenario(&c, dir.path()).unwrap_err();
        assert_eq!(failed_stage(&err), Some("metrics"));
        assert_eq!(err.exit_code(), 3);
        assert_eq!(fs::read_dir(dir.path()).unwrap().count(), 0);
    }

    #[test]
    fn repeat_runs_are_byte_identical() {
        let a = tempfile::tempdir().unwrap();
        let b = tempfile::tempdir().unwrap();
        run_scenario(&small(), a.path()).unwrap();
        run_scenario(&small(), b.path()).unwrap();
        for name in [
            LAYOUT_FILE,
            LATTICE_FILE,
            PATTERN_FILE,
            PLOT_FILE,
            METRICS_FILE,
            FOOTPRINT_FILE,
        ] {
            assert_eq!(
                fs::read(a.path().join(name)).unwrap(),
                fs::read(b.path().join(name)).unwrap(),
                "{name}"
            );
        }
    }
}
