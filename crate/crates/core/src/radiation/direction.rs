use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Far-field direction in the array frame, degrees.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Direction {
    pub theta_deg: f64,
    pub phi_deg: f64,
}

impl Direction {
    /// Forward-hemisphere direction with `phi` wrapped into `[0, 360)`.
    pub fn new(theta_deg: f64, phi_deg: f64) -> Result<Self> {
        if !(0.0..=90.0).contains(&theta_deg) {
            return Err(Error::invalid("theta_deg", "must lie in [0, 90]"));
        }
        if !phi_deg.is_finite() {
            return Err(Error::invalid("phi_deg", "must be finite"));
        }
        Ok(Direction {
            theta_deg,
            phi_deg: wrap_360(phi_deg),
        })
    }

    /// Sample of a cut: negative `theta` maps to `|theta|` at `phi + 180°`.
    pub fn on_cut(signed_theta_deg: f64, phi_deg: f64) -> Result<Self> {
        if signed_theta_deg < 0.0 {
            Direction::new(-signed_theta_deg, phi_deg + 180.0)
        } else {
            Direction::new(signed_theta_deg, phi_deg)
        }
    }

    /// Direction cosines `(sinθ·cosφ, sinθ·sinφ)`.
    pub fn uv(self) -> (f64, f64) {
        let s = self.theta_deg.to_radians().sin();
        let phi = self.phi_deg.to_radians();
        (s * phi.cos(), s * phi.sin())
    }
}

pub(crate) fn wrap_360(deg: f64) -> f64 {
    let w = deg.rem_euclid(360.0);
    // rem_euclid can round up to exactly 360 for tiny negative inputs
    if w >= 360.0 {
        0.0
    } else {
        w
    }
}

/// Beam-pointing direction for conjugate-phase steering.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct SteeringTarget {
    pub theta0_deg: f64,
    pub phi0_deg: f64,
}

impl SteeringTarget {
    pub const BROADSIDE: SteeringTarget = SteeringTarget {
        theta0_deg: 0.0,
        phi0_deg: 0.0,
    };

    pub fn validate(&self) -> Result<()> {
        Direction::new(self.theta0_deg, self.phi0_deg).map(|_| ())
    }
}

/// Sweep of signed polar angles at a fixed azimuth.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AngularCut {
    pub phi_deg: f64,
    pub theta_samples: Vec<f64>,
}

impl AngularCut {
    pub fn new(phi_deg: f64, theta_samples: Vec<f64>) -> Result<Self> {
        if theta_samples.len() < 2 {
            return Err(Error::invalid("theta_samples", "need at least two samples"));
        }
        if theta_samples.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::invalid(
                "theta_samples",
                "must be strictly increasing",
            ));
        }
        if theta_samples.iter().any(|t| t.abs() > 90.0) {
            return Err(Error::invalid("theta_samples", "must lie in [-90, 90]"));
        }
        if !phi_deg.is_finite() {
            return Err(Error::invalid("phi_deg", "must be finite"));
        }
        Ok(AngularCut {
            phi_deg,
            theta_samples,
        })
    }

    /// `samples` equally spaced angles from `theta_min` to `theta_max`
    /// inclusive.
    pub fn uniform(
        phi_deg: f64,
        theta_min_deg: f64,
        theta_max_deg: f64,
        samples: usize,
    ) -> Result<Self> {
        if samples < 2 {
            return Err(Error::invalid("samples", "need at least two samples"));
        }
        let span = theta_max_deg - theta_min_deg;
        let last = (samples - 1) as f64;
        let theta = (0..samples)
            .map(|i| theta_min_deg + span * (i as f64 / last))
            .collect();
        AngularCut::new(phi_deg, theta)
    }

    pub fn sample_count(&self) -> usize {
        self.theta_samples.len()
    }

    pub fn directions(&self) -> impl Iterator<Item = Direction> + '_ {
        self.theta_samples
            .iter()
            .map(|&t| Direction::on_cut(t, self.phi_deg).expect("validated cut"))
    }
}

/// Complex far-field samples along a cut.
///
/// `peak_magnitude` is `None` for raw fields and holds the divisor once the
/// cut has been normalized to a unit peak.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FieldCut {
    pub cut: AngularCut,
    pub values: Vec<Complex64>,
    pub peak_magnitude: Option<f64>,
}

impl FieldCut {
    pub fn new(cut: AngularCut, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != cut.sample_count() {
            return Err(Error::invalid("values", "length must match the cut"));
        }
        Ok(FieldCut {
            cut,
            values,
            peak_magnitude: None,
        })
    }

    pub fn theta(&self) -> &[f64] {
        &self.cut.theta_samples
    }

    pub fn magnitudes(&self) -> Vec<f64> {
        self.values.iter().map(|v| v.norm()).collect()
    }

    /// Index and magnitude of the strongest sample (first one on ties).
    pub fn peak(&self) -> (usize, f64) {
        self.values.iter().map(|v| v.norm()).enumerate().fold(
            (0, f64::NEG_INFINITY),
            |best, (i, m)| if m > best.1 { (i, m) } else { best },
        )
    }

    /// `20·log10(|v| / max|v|)`; the peak sample is exactly 0 dB.
    pub fn magnitude_db(&self) -> Vec<f64> {
        let (_, peak) = self.peak();
        self.values
            .iter()
            .map(|v| 20.0 * (v.norm() / peak).log10())
            .collect()
    }

    /// Sample-wise product with a complex constant.
    pub fn scaled(&self, c: Complex64) -> FieldCut {
        FieldCut {
            cut: self.cut.clone(),
            values: self.values.iter().map(|v| v * c).collect(),
            peak_magnitude: self.peak_magnitude,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn negative_theta_flips_azimuth() {
        let a = Direction::on_cut(-0.5, 10.0).unwrap();
        let b = Direction::on_cut(0.5, 190.0).unwrap();
        assert_eq!(a, b);
        assert_eq!(Direction::new(1.0, -90.0).unwrap().phi_deg, 270.0);
        assert_eq!(Direction::new(1.0, 720.0).unwrap().phi_deg, 0.0);
        assert_eq!(wrap_360(-1e-20), 0.0);
    }

    #[test]
    fn rejects_backward_hemisphere() {
        assert!(Direction::new(91.0, 0.0).is_err());
        assert!(Direction::new(-1.0, 0.0).is_err());
    }

    #[test]
    fn uniform_cut_hits_endpoints() {
        let c = AngularCut::uniform(0.0, -1.0, 1.0, 15_000).unwrap();
        assert_eq!(c.sample_count(), 15_000);
        assert_eq!(c.theta_samples[0], -1.0);
        assert_eq!(c.theta_samples[14_999], 1.0);
        assert!(AngularCut::uniform(0.0, 1.0, -1.0, 10).is_err());
        assert!(AngularCut::uniform(0.0, -1.0, 1.0, 1).is_err());
        assert!(AngularCut::new(0.0, vec![0.0, 0.0]).is_err());
    }

    #[test]
    fn field_length_must_match() {
        let c = AngularCut::uniform(0.0, 0.0, 1.0, 3).unwrap();
        assert!(FieldCut::new(c, vec![Complex64::new(1.0, 0.0)]).is_err());
    }
}
