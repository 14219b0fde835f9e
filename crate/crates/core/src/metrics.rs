//! Beamwidth, sidelobe and grating-lobe extraction from a field cut.
//!
//! Levels are reported as positive dB below the global peak. Lobes closer to
//! boresight than `lobe_boundary_deg` count as sidelobes, the rest as grating
//! lobes.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::radiation::FieldCut;
use crate::{Error, Result};

/// `20·log10(1/√2)`
pub const HALF_POWER_DB: f64 = -3.010_299_956_639_812;

pub const DEFAULT_LOBE_BOUNDARY_DEG: f64 = 0.05;
pub const DEFAULT_MIN_PROMINENCE_DB: f64 = 0.5;
pub const METRICS_SCHEMA_VERSION: u32 = 1;

/// A local maximum of the pattern outside the main lobe.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Lobe {
    pub theta_deg: f64,
    /// dB below the global peak.
    pub level_db: f64,
    /// Drop from the lobe to the higher of its two adjacent minima.
    pub prominence_db: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PatternMetrics {
    pub hpbw_deg: f64,
    pub peak_theta_deg: f64,
    /// Strongest lobe with `|θ| < lobe_boundary_deg`, dB below peak.
    pub sll_db: Option<f64>,
    pub sll_theta_deg: Option<f64>,
    /// Strongest lobe with `|θ| ≥ lobe_boundary_deg`, dB below peak.
    pub gll_db: Option<f64>,
    pub gll_theta_deg: Option<f64>,
    pub lobe_boundary_deg: f64,
}

/// Where the main lobe drops through −3 dB on each side of the peak.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HalfPowerEdges {
    pub peak_index: usize,
    pub peak_theta_deg: f64,
    pub left_deg: Option<f64>,
    pub right_deg: Option<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MetricsOptions {
    pub lobe_boundary_deg: f64,
    pub min_prominence_db: f64,
}

impl Default for MetricsOptions {
    fn default() -> Self {
        MetricsOptions {
            lobe_boundary_deg: DEFAULT_LOBE_BOUNDARY_DEG,
            min_prominence_db: DEFAULT_MIN_PROMINENCE_DB,
        }
    }
}

/// Scale the cut to a unit peak. The divisor is folded into
/// `peak_magnitude`, so normalizing twice changes nothing.
pub fn normalize_to_peak(cut: &FieldCut) -> Result<FieldCut> {
    let (_, peak) = cut.peak();
    if !(peak > 0.0) {
        return Err(Error::DegeneratePattern);
    }
    let inv = 1.0 / peak;
    Ok(FieldCut {
        cut: cut.cut.clone(),
        values: cut
            .values
            .iter()
            .map(|v| v * Complex64::new(inv, 0.0))
            .collect(),
        peak_magnitude: Some(cut.peak_magnitude.unwrap_or(1.0) * peak),
    })
}

/// Linear interpolation of the `level` crossing between samples `a` (above)
/// and `b` (below) in `(θ, dB)`.
fn crossing(theta: &[f64], db: &[f64], a: usize, b: usize, level: f64) -> f64 {
    let (da, db_) = (db[a], db[b].max(-1000.0));
    theta[a] + (level - da) * (theta[b] - theta[a]) / (db_ - da)
}

pub fn half_power_edges(cut: &FieldCut) -> Result<HalfPowerEdges> {
    let (peak_index, peak) = cut.peak();
    if !(peak > 0.0) {
        return Err(Error::DegeneratePattern);
    }
    let db = cut.magnitude_db();
    let theta = cut.theta();
    let right = (peak_index + 1..db.len())
        .find(|&i| db[i] < HALF_POWER_DB)
        .map(|i| crossing(theta, &db, i - 1, i, HALF_POWER_DB));
    let left = (0..peak_index)
        .rev()
        .find(|&i| db[i] < HALF_POWER_DB)
        .map(|i| crossing(theta, &db, i + 1, i, HALF_POWER_DB));
    Ok(HalfPowerEdges {
        peak_index,
        peak_theta_deg: theta[peak_index],
        left_deg: left,
        right_deg: right,
    })
}

/// Full width between the −3 dB crossings around the global peak.
pub fn half_power_beamwidth(cut: &FieldCut) -> Result<f64> {
    let edges = half_power_edges(cut)?;
    match (edges.left_deg, edges.right_deg) {
        (Some(l), Some(r)) => Ok(r - l),
        (None, _) => Err(Error::BeamTruncated(
            "no -3 dB crossing left of the peak; widen the cut".into(),
        )),
        (_, None) => Err(Error::BeamTruncated(
            "no -3 dB crossing right of the peak; widen the cut".into(),
        )),
    }
}

/// Interior local maxima outside the main lobe with at least
/// `min_prominence_db` prominence, strongest first. Equal levels are ordered
/// by distance from boresight.
pub fn find_lobes(cut: &FieldCut, min_prominence_db: f64) -> Vec<Lobe> {
    let Ok(edges) = half_power_edges(cut) else {
        return Vec::new();
    };
    let db = cut.magnitude_db();
    let theta = cut.theta();
    let n = db.len();
    let main_lo = edges.left_deg.unwrap_or(f64::NEG_INFINITY);
    let main_hi = edges.right_deg.unwrap_or(f64::INFINITY);

    let mut lobes = Vec::new();
    let mut i = 1;
    while i + 1 < n {
        if db[i] > db[i - 1] {
            // extend across a plateau
            let mut j = i;
            while j + 1 < n && db[j + 1] == db[i] {
                j += 1;
            }
            if j + 1 < n && db[j + 1] < db[i] {
                let t = theta[i];
                if !(main_lo..=main_hi).contains(&t) {
                    let mut l = i;
                    while l > 0 && db[l - 1] <= db[l] {
                        l -= 1;
                    }
                    let mut r = j;
                    while r + 1 < n && db[r + 1] <= db[r] {
                        r += 1;
                    }
                    let prominence = db[i] - db[l].max(db[r]);
                    if prominence >= min_prominence_db {
                        lobes.push(Lobe {
                            theta_deg: t,
                            level_db: -db[i],
                            prominence_db: prominence,
                        });
                    }
                }
            }
            i = j + 1;
        } else {
            i += 1;
        }
    }
    lobes.sort_by(|a, b| {
        a.level_db
            .total_cmp(&b.level_db)
            .then(a.theta_deg.abs().total_cmp(&b.theta_deg.abs()))
    });
    lobes
}

/// Split lobes at `lobe_boundary_deg`: the strongest inside is the sidelobe,
/// the strongest at or beyond it the grating lobe. `peak_theta_deg` is left
/// at 0; [`extract_metrics`] fills it from the cut.
pub fn classify_metrics(
    lobes: &[Lobe],
    hpbw_deg: f64,
    lobe_boundary_deg: f64,
) -> Result<PatternMetrics> {
    if !(hpbw_deg > 0.0) {
        return Err(Error::invalid("hpbw_deg", "must be positive"));
    }
    if !(lobe_boundary_deg > hpbw_deg) {
        return Err(Error::invalid(
            "lobe_boundary_deg",
            "must exceed the beamwidth",
        ));
    }
    // `lobes` may come unsorted from callers other than find_lobes
    let strongest = |inside: bool| {
        lobes
            .iter()
            .filter(|l| (l.theta_deg.abs() < lobe_boundary_deg) == inside)
            .min_by(|a, b| {
                a.level_db
                    .total_cmp(&b.level_db)
                    .then(a.theta_deg.abs().total_cmp(&b.theta_deg.abs()))
            })
    };
    let sll = strongest(true);
    let gll = strongest(false);
    Ok(PatternMetrics {
        hpbw_deg,
        peak_theta_deg: 0.0,
        sll_db: sll.map(|l| l.level_db),
        sll_theta_deg: sll.map(|l| l.theta_deg),
        gll_db: gll.map(|l| l.level_db),
        gll_theta_deg: gll.map(|l| l.theta_deg),
        lobe_boundary_deg,
    })
}

/// Normalize, measure the beamwidth, inventory lobes and classify them.
pub fn extract_metrics(
    cut: &FieldCut,
    options: MetricsOptions,
) -> Result<(PatternMetrics, Vec<Lobe>)> {
    let normalized = normalize_to_peak(cut)?;
    let hpbw = half_power_beamwidth(&normalized)?;
    let lobes = find_lobes(&normalized, options.min_prominence_db);
    let mut metrics = classify_metrics(&lobes, hpbw, options.lobe_boundary_deg)?;
    metrics.peak_theta_deg = normalized.theta()[normalized.peak().0];
    Ok((metrics, lobes))
}

/// JSON document written by the `metrics` and `run` stages.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MetricsDocument {
    pub schema_version: u32,
    pub metrics: PatternMetrics,
    pub seed: Option<u64>,
    pub lobe_boundary_deg: f64,
    pub min_prominence_db: f64,
    pub grid_size: usize,
    pub phi_deg: f64,
    pub theta_min_deg: f64,
    pub theta_max_deg: f64,
    /// Strongest lobes, at most ten.
    pub top_lobes: Vec<Lobe>,
}

impl MetricsDocument {
    pub fn new(
        metrics: PatternMetrics,
        lobes: &[Lobe],
        cut: &FieldCut,
        seed: Option<u64>,
        options: MetricsOptions,
    ) -> Self {
        let theta = cut.theta();
        MetricsDocument {
            schema_version: METRICS_SCHEMA_VERSION,
            metrics,
            seed,
            lobe_boundary_deg: options.lobe_boundary_deg,
            min_prominence_db: options.min_prominence_db,
            grid_size: theta.len(),
            phi_deg: cut.cut.phi_deg,
            theta_min_deg: theta[0],
            theta_max_deg: theta[theta.len() - 1],
            top_lobes: lobes.iter().take(10).copied().collect(),
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("metrics serialize");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}
