use num_complex::Complex64;
use rayon::prelude::*;

use super::{AngularCut, Direction, FieldCut, SteeringTarget};
use crate::{Error, Point2, Result};

use std::f64::consts::TAU;

/// Conjugate phases `−2π·(x·sinθ₀·cosφ₀ + y·sinθ₀·sinφ₀)` that co-phase every
/// element toward `target`.
pub fn steering_phases(positions: &[Point2], target: SteeringTarget) -> Vec<f64> {
    let (u0, v0) = Direction {
        theta_deg: target.theta0_deg,
        phi_deg: target.phi0_deg,
    }
    .uv();
    positions
        .iter()
        .map(|p| -TAU * (p.x * u0 + p.y * v0))
        .collect()
}

/// `Σₙ wₙ·exp(j·(2π·(xₙ·u + yₙ·v) + phaseₙ))`, summed in index order.
pub fn array_factor_at(
    positions: &[Point2],
    weights: &[Complex64],
    phases: &[f64],
    u: f64,
    v: f64,
) -> Complex64 {
    positions
        .iter()
        .zip(weights)
        .zip(phases)
        .fold(Complex64::new(0.0, 0.0), |acc, ((p, w), ph)| {
            acc + w * Complex64::cis(TAU * (p.x * u + p.y * v) + ph)
        })
}

/// Unnormalized array factor along `cut`.
pub fn array_factor(
    positions: &[Point2],
    weights: &[Complex64],
    phases: &[f64],
    cut: &AngularCut,
) -> Result<FieldCut> {
    if weights.len() != positions.len() {
        return Err(Error::invalid("weights", "length must match positions"));
    }
    if phases.len() != positions.len() {
        return Err(Error::invalid("phases", "length must match positions"));
    }
    let dirs: Vec<Direction> = cut.directions().collect();
    let values = dirs
        .par_iter()
        .map(|d| {
            let (u, v) = d.uv();
            array_factor_at(positions, weights, phases, u, v)
        })
        .collect();
    FieldCut::new(cut.clone(), values)
}
