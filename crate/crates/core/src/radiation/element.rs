use serde::{Deserialize, Serialize};

use super::Direction;
use crate::{Error, Result};

/// First zero of J₁.
const J1_FIRST_ZERO: f64 = 3.831_705_970_207_512_3;

/// Largest circular-aperture radius whose pattern stays monotone over the
/// forward hemisphere (`2π·a ≤ j₁,₁`).
pub const MAX_APERTURE_RADIUS_LAMBDA: f64 = J1_FIRST_ZERO / std::f64::consts::TAU;

/// Analytic stand-in for the radiating element's amplitude pattern.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "snake_case", deny_unknown_fields)]
pub enum ElementPatternModel {
    Isotropic,
    /// `cos(θ)^exponent`
    CosinePower {
        exponent: f64,
    },
    /// Uniformly illuminated circular aperture, `|2·J₁(x)/x|` with
    /// `x = 2π·a·sinθ`.
    CircularAperture {
        radius_lambda: f64,
    },
}

impl Default for ElementPatternModel {
    fn default() -> Self {
        ElementPatternModel::CircularAperture { radius_lambda: 0.4 }
    }
}

impl ElementPatternModel {
    pub fn validate(&self) -> Result<()> {
        match *self {
            ElementPatternModel::Isotropic => Ok(()),
            ElementPatternModel::CosinePower { exponent } => {
                if exponent >= 0.0 && exponent.is_finite() {
                    Ok(())
                } else {
                    Err(Error::invalid(
                        "exponent",
                        "must be finite and non-negative",
                    ))
                }
            }
            ElementPatternModel::CircularAperture { radius_lambda } => {
                if radius_lambda > 0.0 && radius_lambda <= MAX_APERTURE_RADIUS_LAMBDA {
                    Ok(())
                } else {
                    Err(Error::invalid(
                        "radius_lambda",
                        format!("must lie in (0, {MAX_APERTURE_RADIUS_LAMBDA:.4}]"),
                    ))
                }
            }
        }
    }

    /// Real, non-negative amplitude, 1 at boresight.
    pub fn amplitude(&self, direction: Direction) -> f64 {
        let theta = direction.theta_deg.to_radians();
        match *self {
            ElementPatternModel::Isotropic => 1.0,
            ElementPatternModel::CosinePower { exponent } => theta.cos().max(0.0).powf(exponent),
            ElementPatternModel::CircularAperture { radius_lambda } => {
                let x = std::f64::consts::TAU * radius_lambda * theta.sin();
                if x.abs() < 1e-8 {
                    // 2J₁(x)/x = 1 − x²/8 + O(x⁴)
                    1.0 - x * x / 8.0
                } else {
                    (2.0 * bessel_j1(x) / x).abs()
                }
            }
        }
    }

    pub fn label(&self) -> String {
        match *self {
            ElementPatternModel::Isotropic => "isotropic".to_owned(),
            ElementPatternModel::CosinePower { exponent } => format!("cosine_power(q={exponent})"),
            ElementPatternModel::CircularAperture { radius_lambda } => {
                format!("circular_aperture(a={radius_lambda})")
            }
        }
    }
}

/// Bessel function of the first kind, order one.
pub fn bessel_j1(x: f64) -> f64 {
    libm::j1(x)
}
