use rayon::prelude::*;
use serde_json::json;

use super::polygon::signed_solid_angle;
use super::{
    boresight_geometry, ecef_to_geo, geo_to_ecef, ray_sphere_intersection,
    spherical_polygon_contains, Boresight, GeoPoint, OrbitSlot, Vec3,
};
use crate::metrics::HALF_POWER_DB;
use crate::radiation::{Direction, PatternSource};
use crate::{Error, Result};

pub const FOOTPRINT_SCHEMA_VERSION: u32 = 1;

/// Extra rays per azimuth sector used for the area integral, with the
/// half-angle interpolated linearly between measured azimuths.
const AREA_SUBDIVISIONS: usize = 16;

/// Orientation of the aperture: its normal is the beam axis, and the
/// pattern's `phi = 0` axis is `x_axis`.
///
/// `x_axis = ẑ × axis` normalized (eastward for a beam looking down on the
/// northern hemisphere) and `y_axis = axis × x_axis`; if the axis is within
/// ~25° of ẑ, x̂ replaces ẑ.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ArrayFrame {
    pub axis: Vec3,
    pub x_axis: Vec3,
    pub y_axis: Vec3,
}

impl ArrayFrame {
    pub fn facing(axis: Vec3) -> Self {
        let axis = axis.unit();
        let reference = if axis.z.abs() < 0.9 { Vec3::Z } else { Vec3::X };
        let x_axis = reference.cross(axis).unit();
        let y_axis = axis.cross(x_axis);
        ArrayFrame {
            axis,
            x_axis,
            y_axis,
        }
    }

    /// Unit vector at off-axis angle `theta_deg`, azimuth `phi_deg`.
    pub fn direction(&self, theta_deg: f64, phi_deg: f64) -> Vec3 {
        let (st, ct) = theta_deg.to_radians().sin_cos();
        let (sp, cp) = phi_deg.to_radians().sin_cos();
        self.axis * ct + (self.x_axis * cp + self.y_axis * sp) * st
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FootprintOptions {
    pub azimuth_samples: usize,
    /// Search limit for the −3 dB angle.
    pub max_off_axis_deg: f64,
    /// Coarse steps between the axis and `max_off_axis_deg`; the first step
    /// that falls below −3 dB is refined by bisection.
    pub search_steps: usize,
}

impl Default for FootprintOptions {
    fn default() -> Self {
        FootprintOptions {
            azimuth_samples: 64,
            max_off_axis_deg: 0.02,
            search_steps: 800,
        }
    }
}

impl FootprintOptions {
    pub fn validate(&self) -> Result<()> {
        if self.azimuth_samples < 16 {
            return Err(Error::invalid("azimuth_samples", "must be at least 16"));
        }
        if !(self.max_off_axis_deg > 0.0 && self.max_off_axis_deg < 90.0) {
            return Err(Error::invalid("max_off_axis_deg", "must lie in (0, 90)"));
        }
        if self.search_steps == 0 {
            return Err(Error::invalid("search_steps", "must be positive"));
        }
        Ok(())
    }
}

/// Half-power ground contour of a beam pointed at a target.
#[derive(Clone, Debug, PartialEq)]
pub struct FootprintContour {
    pub boresight_ground_point: GeoPoint,
    /// Closed polygon (first vertex not repeated), counter-clockwise seen
    /// from above.
    pub contour: Vec<GeoPoint>,
    /// Off-axis −3 dB angle per azimuth, in azimuth order.
    pub half_angles_deg: Vec<f64>,
    /// Area enclosed by the contour curve: each azimuth sector is refined with
    /// interpolated half-angles, so this slightly exceeds the area of the
    /// vertex polygon itself.
    pub area_km2: f64,
    pub slant_range_km: f64,
    pub incidence_angle_deg: f64,
}

impl FootprintContour {
    pub fn contains_boresight(&self) -> bool {
        spherical_polygon_contains(&self.contour, self.boresight_ground_point)
    }

    /// GeoJSON `Feature` with a single polygon, `[lon, lat]` coordinates and
    /// the ring closed on its first vertex.
    pub fn to_geojson(&self, hpbw_deg: f64, seed: Option<u64>) -> String {
        let mut ring: Vec<[f64; 2]> = self
            .contour
            .iter()
            .map(|p| [p.lon_deg, p.lat_deg])
            .collect();
        ring.push(ring[0]);
        let feature = json!({
            "type": "Feature",
            "geometry": { "type": "Polygon", "coordinates": [ring] },
            "properties": {
                "schema_version": FOOTPRINT_SCHEMA_VERSION,
                "area_km2": self.area_km2,
                "slant_range_km": self.slant_range_km,
                "incidence_deg": self.incidence_angle_deg,
                "hpbw_deg": hpbw_deg,
                "seed": seed,
                "boresight": [self.boresight_ground_point.lon_deg, self.boresight_ground_point.lat_deg],
            }
        });
        let mut s = serde_json::to_string_pretty(&feature).expect("footprint serializes");
        s.push('\n');
        s
    }
}

/// Trace the half-power contour of `source`, with the aperture normal on the
/// slot-to-target ray.
///
/// For each of `azimuth_samples` azimuths the off-axis angle where the
/// pattern, normalized to its on-axis magnitude, first drops below −3 dB is
/// bracketed by a coarse walk and refined by bisection. The tilted rays are
/// intersected with the Earth and the polygon area is taken on the sphere.
pub fn half_power_footprint<S: PatternSource + ?Sized>(
    source: &S,
    slot: &OrbitSlot,
    target: GeoPoint,
    options: FootprintOptions,
) -> Result<FootprintContour> {
    options.validate()?;
    let axis_field = source
        .field(Direction {
            theta_deg: 0.0,
            phi_deg: 0.0,
        })
        .norm();
    if !(axis_field > 0.0) {
        return Err(Error::DegeneratePattern);
    }
    let below = |theta: f64, phi: f64| {
        let dir = Direction::new(theta, phi).expect("search stays in the forward hemisphere");
        20.0 * (source.field(dir).norm() / axis_field).log10() < HALF_POWER_DB
    };
    let step = options.max_off_axis_deg / options.search_steps as f64;
    let half_angle = |phi: f64| -> Result<f64> {
        let mut lo = 0.0;
        let hi = (1..=options.search_steps)
            .map(|i| i as f64 * step)
            .find(|&t| {
                let b = below(t, phi);
                if !b {
                    lo = t;
                }
                b
            })
            .ok_or_else(|| {
                Error::BeamTruncated(format!(
                    "no -3 dB point within {}° at azimuth {phi}°",
                    options.max_off_axis_deg
                ))
            })?;
        let (mut lo, mut hi) = (lo, hi);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if below(mid, phi) {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        Ok(0.5 * (lo + hi))
    };
    trace_contour(slot, target, options.azimuth_samples, half_angle)
}

/// Footprint of an ideal circular cone of `half_angle_deg` around the axis.
pub fn cone_footprint(
    slot: &OrbitSlot,
    target: GeoPoint,
    half_angle_deg: f64,
    azimuth_samples: usize,
) -> Result<FootprintContour> {
    if azimuth_samples < 16 {
        return Err(Error::invalid("azimuth_samples", "must be at least 16"));
    }
    if !(half_angle_deg > 0.0 && half_angle_deg < 90.0) {
        return Err(Error::invalid("half_angle_deg", "must lie in (0, 90)"));
    }
    trace_contour(slot, target, azimuth_samples, |_| Ok(half_angle_deg))
}

fn trace_contour<F>(
    slot: &OrbitSlot,
    target: GeoPoint,
    azimuth_samples: usize,
    half_angle: F,
) -> Result<FootprintContour>
where
    F: Fn(f64) -> Result<f64> + Sync,
{
    let Boresight {
        satellite_ecef,
        direction,
        slant_range_km,
        incidence_angle_deg,
        ..
    } = boresight_geometry(slot, target)?;
    let frame = ArrayFrame::facing(direction);
    let radius = slot.earth_radius_km;
    let n = azimuth_samples;
    let azimuth = |k: f64| 360.0 * k / n as f64;
    let half_angles_deg: Vec<f64> = (0..n)
        .into_par_iter()
        .map(|k| half_angle(azimuth(k as f64)))
        .collect::<Result<_>>()?;
    let ground = |alpha: f64, phi: f64| -> Result<Vec3> {
        ray_sphere_intersection(satellite_ecef, frame.direction(alpha, phi), radius).map(Vec3::unit)
    };
    let vertices: Vec<Vec3> = half_angles_deg
        .iter()
        .enumerate()
        .map(|(k, &a)| ground(a, azimuth(k as f64)))
        .collect::<Result<_>>()?;
    let mut dense = Vec::with_capacity(n * AREA_SUBDIVISIONS);
    for k in 0..n {
        let (a0, a1) = (half_angles_deg[k], half_angles_deg[(k + 1) % n]);
        dense.push(vertices[k]);
        for s in 1..AREA_SUBDIVISIONS {
            let f = s as f64 / AREA_SUBDIVISIONS as f64;
            dense.push(ground(a0 + (a1 - a0) * f, azimuth(k as f64 + f))?);
        }
    }
    let signed = signed_solid_angle(&dense);
    let (mut vertices, mut half_angles_deg) = (vertices, half_angles_deg);
    if signed < 0.0 {
        vertices.reverse();
        half_angles_deg.reverse();
    }
    Ok(FootprintContour {
        boresight_ground_point: ecef_to_geo(geo_to_ecef(target, radius)).0,
        contour: vertices.into_iter().map(|u| ecef_to_geo(u).0).collect(),
        half_angles_deg,
        area_km2: signed.abs() * radius * radius,
        slant_range_km,
        incidence_angle_deg,
    })
}
