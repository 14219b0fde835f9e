use serde::{Deserialize, Serialize};

use super::SwarmRng;
use crate::{Error, Point2, Result};

/// Stream id used by [`place_swarm`].
pub const PLACEMENT_STREAM: u64 = 0;

/// Truncated-normal placement parameters, all lengths in λ₀.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SwarmParams {
    pub count: usize,
    pub sigma_lambda: f64,
    pub r_max_lambda: f64,
    pub d_min_lambda: f64,
}

impl SwarmParams {
    pub fn validate(&self) -> Result<()> {
        if self.count == 0 {
            return Err(Error::invalid("count", "must be at least 1"));
        }
        for (name, v) in [
            ("sigma_lambda", self.sigma_lambda),
            ("r_max_lambda", self.r_max_lambda),
            ("d_min_lambda", self.d_min_lambda),
        ] {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::invalid(name, "must be positive and finite"));
            }
        }
        Ok(())
    }
}

/// Satellite (subarray centre) positions and the inputs that produced them.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SwarmLayout {
    pub centers: Vec<Point2>,
    pub sigma_lambda: f64,
    pub r_max_lambda: f64,
    pub d_min_lambda: f64,
    pub count: usize,
    pub seed: u64,
}

impl SwarmLayout {
    pub fn params(&self) -> SwarmParams {
        SwarmParams {
            count: self.count,
            sigma_lambda: self.sigma_lambda,
            r_max_lambda: self.r_max_lambda,
            d_min_lambda: self.d_min_lambda,
        }
    }
}

/// Rejection-sample `count` centres from an isotropic zero-mean normal with
/// per-axis deviation `sigma_lambda`.
///
/// Every attempt draws one Box–Muller pair from stream [`PLACEMENT_STREAM`]
/// of `SwarmRng::new(seed, 0)`, first value for `x`, second for `y`. The
/// candidate is rejected if it lies outside `r_max_lambda` or closer than
/// `d_min_lambda` to an accepted centre; either way the attempt is spent.
pub fn place_swarm(params: SwarmParams, seed: u64, max_attempts: u64) -> Result<SwarmLayout> {
    params.validate()?;
    if max_attempts < params.count as u64 {
        return Err(Error::invalid("max_attempts", "must be at least count"));
    }
    let mut rng = SwarmRng::new(seed, PLACEMENT_STREAM);
    let r2 = params.r_max_lambda * params.r_max_lambda;
    let d2 = params.d_min_lambda * params.d_min_lambda;
    let mut centers: Vec<Point2> = Vec::with_capacity(params.count);
    let mut attempts = 0u64;
    while centers.len() < params.count {
        if attempts == max_attempts {
            return Err(Error::PlacementInfeasible {
                accepted: centers.len(),
                requested: params.count,
                attempts,
            });
        }
        attempts += 1;
        let (zx, zy) = rng.normal_pair();
        let c = Point2::new(params.sigma_lambda * zx, params.sigma_lambda * zy);
        if c.norm_sq() > r2 {
            continue;
        }
        let crowded = centers.iter().any(|a| {
            let (dx, dy) = (a.x - c.x, a.y - c.y);
            dx * dx + dy * dy < d2
        });
        if !crowded {
            centers.push(c);
        }
    }
    Ok(SwarmLayout {
        centers,
        sigma_lambda: params.sigma_lambda,
        r_max_lambda: params.r_max_lambda,
        d_min_lambda: params.d_min_lambda,
        count: params.count,
        seed,
    })
}

/// Exact minimum distance over all pairs of centres.
pub fn min_pairwise_distance(layout: &SwarmLayout) -> Result<f64> {
    let c = &layout.centers;
    if c.len() < 2 {
        return Err(Error::invalid("layout", "needs at least two centers"));
    }
    let mut best = f64::INFINITY;
    for i in 0..c.len() {
        for j in i + 1..c.len() {
            best = best.min(c[i].distance(c[j]));
        }
    }
    Ok(best)
}
