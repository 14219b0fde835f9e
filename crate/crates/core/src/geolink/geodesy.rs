use serde::{Deserialize, Serialize};

use super::Vec3;
use crate::{Error, Result};

/// Mean Earth radius of the spherical model (km).
pub const EARTH_RADIUS_KM: f64 = 6371.0;
/// Geostationary orbit radius from the Earth's centre (km).
pub const GEO_ORBIT_RADIUS_KM: f64 = 42164.0;

/// Latitude/longitude on the spherical Earth, degrees.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeoPoint {
    pub lat_deg: f64,
    pub lon_deg: f64,
}

impl GeoPoint {
    /// Validates latitude and wraps longitude into (−180, 180].
    pub fn new(lat_deg: f64, lon_deg: f64) -> Result<Self> {
        if !(-90.0..=90.0).contains(&lat_deg) {
            return Err(Error::invalid("lat_deg", "must lie in [-90, 90]"));
        }
        if !lon_deg.is_finite() {
            return Err(Error::invalid("lon_deg", "must be finite"));
        }
        let mut lon = lon_deg.rem_euclid(360.0);
        if lon > 180.0 {
            lon -= 360.0;
        }
        if lon <= -180.0 {
            lon += 360.0;
        }
        Ok(GeoPoint {
            lat_deg,
            lon_deg: lon,
        })
    }
}

/// Geostationary slot: satellite at latitude 0 and `lon_deg`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct OrbitSlot {
    pub lon_deg: f64,
    pub orbit_radius_km: f64,
    pub earth_radius_km: f64,
}

impl OrbitSlot {
    pub fn geostationary(lon_deg: f64) -> Self {
        OrbitSlot {
            lon_deg,
            orbit_radius_km: GEO_ORBIT_RADIUS_KM,
            earth_radius_km: EARTH_RADIUS_KM,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.earth_radius_km > 0.0) {
            return Err(Error::invalid("earth_radius_km", "must be positive"));
        }
        if !(self.orbit_radius_km > self.earth_radius_km) {
            return Err(Error::invalid(
                "orbit_radius_km",
                "must exceed earth_radius_km",
            ));
        }
        if !self.lon_deg.is_finite() {
            return Err(Error::invalid("lon_deg", "must be finite"));
        }
        Ok(())
    }

    pub fn satellite_ecef(&self) -> Vec3 {
        geo_to_ecef(
            GeoPoint {
                lat_deg: 0.0,
                lon_deg: self.lon_deg,
            },
            self.orbit_radius_km,
        )
    }
}

pub fn geo_to_ecef(p: GeoPoint, radius_km: f64) -> Vec3 {
    let (lat, lon) = (p.lat_deg.to_radians(), p.lon_deg.to_radians());
    Vec3::new(
        radius_km * lat.cos() * lon.cos(),
        radius_km * lat.cos() * lon.sin(),
        radius_km * lat.sin(),
    )
}

/// Spherical latitude/longitude and radius of an ECEF point.
pub fn ecef_to_geo(v: Vec3) -> (GeoPoint, f64) {
    let horizontal = v.x.hypot(v.y);
    let lat = v.z.atan2(horizontal).to_degrees();
    let lon = v.y.atan2(v.x).to_degrees();
    let lon = if lon <= -180.0 { lon + 360.0 } else { lon };
    (
        GeoPoint {
            lat_deg: lat,
            lon_deg: lon,
        },
        v.norm(),
    )
}

/// Beam axis from a slot to a ground target.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Boresight {
    pub satellite_ecef: Vec3,
    pub target_ecef: Vec3,
    /// Unit vector from the satellite toward the target.
    pub direction: Vec3,
    pub slant_range_km: f64,
    /// Angle between the arriving ray and the local vertical at the target.
    pub incidence_angle_deg: f64,
}

pub fn boresight_geometry(slot: &OrbitSlot, target: GeoPoint) -> Result<Boresight> {
    slot.validate()?;
    let sat = slot.satellite_ecef();
    let tgt = geo_to_ecef(target, slot.earth_radius_km);
    let up = tgt.unit();
    let to_sat = sat - tgt;
    if !(to_sat.dot(up) > 0.0) {
        return Err(Error::NotVisible {
            lat_deg: target.lat_deg,
            lon_deg: target.lon_deg,
            slot_lon_deg: slot.lon_deg,
        });
    }
    let slant = to_sat.norm();
    Ok(Boresight {
        satellite_ecef: sat,
        target_ecef: tgt,
        direction: (tgt - sat) * (1.0 / slant),
        slant_range_km: slant,
        incidence_angle_deg: to_sat.angle_to(up).to_degrees(),
    })
}

/// First point where the ray `origin + t·dir` (t ≥ 0) meets the sphere.
pub fn ray_sphere_intersection(origin: Vec3, dir: Vec3, earth_radius_km: f64) -> Result<Vec3> {
    let d = dir.unit();
    // t² + 2bt + c = 0
    let b = origin.dot(d);
    let c = origin.dot(origin) - earth_radius_km * earth_radius_km;
    let mut disc = b * b - c;
    if disc < 0.0 {
        // a tangent ray can round to a slightly negative discriminant
        if disc < -1e-12 * b * b {
            return Err(Error::BeamMissesEarth);
        }
        disc = 0.0;
    }
    let root = disc.sqrt();
    let t = if c <= 0.0 {
        // origin inside or on the sphere: the forward exit point
        -b + root
    } else if b < 0.0 {
        // smaller root c / (−b + √disc), free of cancellation
        c / (-b + root)
    } else {
        return Err(Error::BeamMissesEarth);
    };
    Ok(origin + d * t)
}

pub fn ray_sphere_ground_point(origin: Vec3, dir: Vec3, earth_radius_km: f64) -> Result<GeoPoint> {
    ray_sphere_intersection(origin, dir, earth_radius_km).map(|p| ecef_to_geo(p).0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn lux() -> GeoPoint {
        GeoPoint::new(49.612, 6.129).unwrap()
    }

    #[test]
    fn equator_and_pole() {
        let v = geo_to_ecef(GeoPoint::new(0.0, 0.0).unwrap(), 6371.0);
        assert_eq!(v, Vec3::new(6371.0, 0.0, 0.0));
        let p = geo_to_ecef(GeoPoint::new(90.0, 123.0).unwrap(), 6371.0);
        assert!(p.x.abs() < 1e-9 && p.y.abs() < 1e-9);
        assert_eq!(p.z, 6371.0);
    }

    #[test]
    fn luxembourg_ecef() {
        let v = geo_to_ecef(lux(), 6371.0);
        let (lat, lon) = (49.612f64.to_radians(), 6.129f64.to_radians());
        assert!((v.x - 6371.0 * lat.cos() * lon.cos()).abs() < 1e-9);
        assert!((v.y - 6371.0 * lat.cos() * lon.sin()).abs() < 1e-9);
        assert!((v.z - 6371.0 * lat.sin()).abs() < 1e-9);
    }

    #[test]
    fn longitude_wraps() {
        assert_eq!(GeoPoint::new(0.0, 190.0).unwrap().lon_deg, -170.0);
        assert_eq!(GeoPoint::new(0.0, -180.0).unwrap().lon_deg, 180.0);
        assert_eq!(GeoPoint::new(0.0, 180.0).unwrap().lon_deg, 180.0);
        assert!(GeoPoint::new(91.0, 0.0).is_err());
    }

    #[test]
    fn subsatellite_point() {
        let b = boresight_geometry(
            &OrbitSlot::geostationary(0.0),
            GeoPoint::new(0.0, 0.0).unwrap(),
        )
        .unwrap();
        assert!((b.slant_range_km - 35793.0).abs() < 1e-9);
        assert!(b.incidence_angle_deg.abs() < 1e-12);
        assert_eq!(b.direction, Vec3::new(-1.0, 0.0, 0.0));
    }

    #[test]
    fn luxembourg_from_fifty_east() {
        let b = boresight_geometry(&OrbitSlot::geostationary(50.0), lux()).unwrap();
        let sat = Vec3::new(
            42164.0 * 50f64.to_radians().cos(),
            42164.0 * 50f64.to_radians().sin(),
            0.0,
        );
        let (lat, lon) = (49.612f64.to_radians(), 6.129f64.to_radians());
        let tgt = Vec3::new(
            6371.0 * lat.cos() * lon.cos(),
            6371.0 * lat.cos() * lon.sin(),
            6371.0 * lat.sin(),
        );
        let oracle =
            ((sat.x - tgt.x).powi(2) + (sat.y - tgt.y).powi(2) + (sat.z - tgt.z).powi(2)).sqrt();
        assert!((b.slant_range_km - oracle).abs() < 1e-9);
        assert!(
            (39_500.0..39_700.0).contains(&b.slant_range_km),
            "{}",
            b.slant_range_km
        );
        assert!(b.incidence_angle_deg > 50.0 && b.incidence_angle_deg < 90.0);
    }

    #[test]
    fn antipode_is_hidden() {
        let r = boresight_geometry(
            &OrbitSlot::geostationary(0.0),
            GeoPoint::new(0.0, 180.0).unwrap(),
        );
        assert!(matches!(r, Err(Error::NotVisible { .. })));
    }

    #[test]
    fn nadir_ray() {
        let g = ray_sphere_ground_point(
            Vec3::new(42164.0, 0.0, 0.0),
            Vec3::new(-1.0, 0.0, 0.0),
            6371.0,
        )
        .unwrap();
        assert!(g.lat_deg.abs() < 1e-12 && g.lon_deg.abs() < 1e-12);
    }

    #[test]
    fn grazing_ray_single_root() {
        // tangent from (R_orbit, 0, 0) touches the sphere at angle acos(R/R_orbit)
        let (re, ro) = (6371.0, 42164.0);
        let origin = Vec3::new(ro, 0.0, 0.0);
        let gamma = (re / ro).acos();
        let touch = Vec3::new(re * gamma.cos(), re * gamma.sin(), 0.0);
        let p = ray_sphere_intersection(origin, touch - origin, re).unwrap();
        assert!((p - touch).norm() < 1e-3);
        let miss = Vec3::new(re * gamma.cos(), re * gamma.sin() * 1.001, 0.0);
        assert!(matches!(
            ray_sphere_intersection(origin, miss - origin, re),
            Err(Error::BeamMissesEarth)
        ));
        assert!(ray_sphere_intersection(origin, Vec3::X, re).is_err());
    }

    #[test]
    fn oblique_ray_matches_quadratic_oracle() {
        let b = boresight_geometry(&OrbitSlot::geostationary(50.0), lux()).unwrap();
        let tilt = (b.direction + Vec3::new(0.0, 0.0, 1e-3)).unit();
        let p = ray_sphere_intersection(b.satellite_ecef, tilt, 6371.0).unwrap();
        // oracle: textbook roots (−B ± √(B² − 4AC)) / 2A, smallest positive
        let (o, d) = (b.satellite_ecef, tilt);
        let a = d.dot(d);
        let bb = 2.0 * o.dot(d);
        let c = o.dot(o) - 6371.0 * 6371.0;
        let disc = (bb * bb - 4.0 * a * c).sqrt();
        let t = [(-bb - disc) / (2.0 * a), (-bb + disc) / (2.0 * a)]
            .into_iter()
            .filter(|t| *t > 0.0)
            .fold(f64::INFINITY, f64::min);
        assert!((p - (o + d * t)).norm() < 1e-6);
        assert!((p.norm() - 6371.0).abs() < 1e-9);
    }

    proptest! {
        #[test]
        fn ecef_round_trip(lat in -89.9f64..89.9, lon in -179.9f64..180.0, r in 1.0f64..50_000.0) {
            let p = GeoPoint::new(lat, lon).unwrap();
            let (q, rr) = ecef_to_geo(geo_to_ecef(p, r));
            prop_assert!((q.lat_deg - lat).abs() < 1e-9);
            prop_assert!((q.lon_deg - p.lon_deg).abs() < 1e-9);
            prop_assert!((rr - r).abs() < 1e-9 * r);
        }
    }
}
