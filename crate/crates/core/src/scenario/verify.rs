//! Factorized-versus-brute-force oracle on scaled-down geometries.

use num_complex::Complex64;
use serde::Serialize;

use super::config::ScenarioConfig;
use crate::geometry::{place_swarm, ApertureLattice, SwarmRng};
use crate::radiation::{
    max_relative_deviation, AngularCut, CompositeArray, SteeringTarget, DEFAULT_COST_CEILING,
};
use crate::{Error, Result};

/// Agreement required between the two evaluation paths.
pub const ORACLE_TOLERANCE: f64 = 1e-9;
/// Overrides the brute-force term ceiling.
pub const CEILING_ENV: &str = "SWARMBEAM_BRUTEFORCE_CEILING";

const WEIGHT_STREAM: u64 = 1;
const CASE_STREAM: u64 = 2;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ReducedScale {
    pub satellites: usize,
    pub elements: usize,
    pub samples: usize,
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OracleReport {
    pub scale: ReducedScale,
    pub steering: SteeringTarget,
    pub terms: u128,
    pub max_relative_deviation: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl OracleReport {
    /// `Err(OracleMismatch)` when the deviation exceeds the tolerance.
    pub fn check(&self) -> Result<()> {
        if self.passed {
            Ok(())
        } else {
            Err(Error::OracleMismatch {
                deviation: self.max_relative_deviation,
                tolerance: self.tolerance,
            })
        }
    }
}

/// Brute-force term ceiling: the environment override when set, otherwise
/// the built-in default.
pub fn cost_ceiling() -> Result<u128> {
    match std::env::var(CEILING_ENV) {
        Ok(v) => v.trim().parse().map_err(|_| {
            Error::invalid(
                "SWARMBEAM_BRUTEFORCE_CEILING",
                format!("`{v}` is not an unsigned integer"),
            )
        }),
        Err(_) => Ok(DEFAULT_COST_CEILING),
    }
}

/// Evaluate the configured scenario at `scale` both ways and compare.
///
/// The reduced geometry keeps the configured spacing, element model and
/// placement statistics, but draws random complex weights on both levels and
/// a random steering direction within 5° of the axis, so every term of the
/// factorization is exercised.
pub fn verify_oracle(config: &ScenarioConfig, scale: ReducedScale) -> Result<OracleReport> {
    verify_with_ceiling(config, scale, cost_ceiling()?)
}

pub fn verify_with_ceiling(
    config: &ScenarioConfig,
    scale: ReducedScale,
    ceiling: u128,
) -> Result<OracleReport> {
    if scale.satellites == 0 {
        return Err(Error::invalid("satellites", "must be at least 1"));
    }
    if scale.elements == 0 {
        return Err(Error::invalid("elements", "must be at least 1"));
    }
    if scale.samples < 2 {
        return Err(Error::invalid("samples", "must be at least 2"));
    }
    let terms = scale.satellites as u128 * scale.elements as u128 * scale.samples as u128;
    if terms > ceiling {
        return Err(Error::CostCeiling { terms, ceiling });
    }

    let lattice = ApertureLattice::with_count(scale.elements, config.subarray.spacing_lambda)?;
    let mut params = config.swarm.params();
    params.count = scale.satellites;
    let swarm = place_swarm(params, scale.seed, config.swarm.max_attempts)?;

    let mut rng = SwarmRng::new(scale.seed, WEIGHT_STREAM);
    let mut weight =
        || Complex64::from_polar(0.5 + rng.uniform(), std::f64::consts::TAU * rng.uniform());
    let sub_weights: Vec<Complex64> = (0..lattice.len()).map(|_| weight()).collect();
    let swarm_weights: Vec<Complex64> = (0..swarm.centers.len()).map(|_| weight()).collect();
    let steering = SteeringTarget {
        theta0_deg: 5.0 * rng.uniform(),
        phi0_deg: 360.0 * rng.uniform(),
    };

    let array = CompositeArray::new(
        config.element,
        &lattice,
        &swarm,
        steering,
        &sub_weights,
        &swarm_weights,
    )?;
    let cut = AngularCut::uniform(
        config.cut.phi_deg,
        config.cut.theta_min_deg,
        config.cut.theta_max_deg,
        scale.samples,
    )?;
    let fast = array.cut_factorized(&cut);
    let slow = array.cut_bruteforce(&cut, ceiling)?;
    let deviation = max_relative_deviation(&fast, &slow);
    Ok(OracleReport {
        scale,
        steering,
        terms,
        max_relative_deviation: deviation,
        tolerance: ORACLE_TOLERANCE,
        passed: deviation <= ORACLE_TOLERANCE,
    })
}

/// `cases` oracle runs on random scales: 2–8 satellites, 7–37 elements and
/// 101–501 samples, each with its own seed, all derived from `seed`.
pub fn random_scales(cases: usize, seed: u64) -> Vec<ReducedScale> {
    let mut rng = SwarmRng::new(seed, CASE_STREAM);
    let mut pick = |lo: usize, hi: usize| lo + (rng.uniform() * (hi - lo + 1) as f64) as usize;
    (0..cases)
        .map(|_| ReducedScale {
            satellites: pick(2, 8),
            elements: pick(7, 37),
            samples: pick(101, 501),
            seed: pick(0, u32::MAX as usize) as u64,
        })
        .collect()
}

pub fn verify_random_cases(
    config: &ScenarioConfig,
    cases: usize,
    seed: u64,
) -> Result<Vec<OracleReport>> {
    let ceiling = cost_ceiling()?;
    random_scales(cases, seed)
        .into_iter()
        .map(|scale| verify_with_ceiling(config, scale, ceiling))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_small_case_passes() {
        let scale = ReducedScale {
            satellites: 4,
            elements: 19,
            samples: 501,
            seed: 3,
        };
        let report =
            verify_with_ceiling(&ScenarioConfig::default(), scale, DEFAULT_COST_CEILING).unwrap();
        assert!(report.passed, "{report:?}");
        assert!(report.check().is_ok());
        assert_eq!(report.terms, 4 * 19 * 501);
    }

    #[test]
    fn single_term_is_exact() {
        let scale = ReducedScale {
            satellites: 1,
            elements: 1,
            samples: 301,
            seed: 9,
        };
        let report =
            verify_with_ceiling(&ScenarioConfig::default(), scale, DEFAULT_COST_CEILING).unwrap();
        assert_eq!(report.max_relative_deviation, 0.0);
    }

    #[test]
    fn ceiling_guard() {
        let scale = ReducedScale {
            satellites: 8,
            elements: 37,
            samples: 501,
            seed: 0,
        };
        let err = verify_with_ceiling(&ScenarioConfig::default(), scale, 1000).unwrap_err();
        assert!(
            matches!(err, Error::CostCeiling { terms, ceiling: 1000 } if terms == 8 * 37 * 501)
        );
        assert_eq!(err.exit_code(), 2);
    }

    #[test]
    fn random_scales_stay_in_range() {
        let scales = random_scales(200, 4);
        assert_eq!(scales, random_scales(200, 4));
        for s in &scales {
            assert!((2..=8).contains(&s.satellites));
            assert!((7..=37).contains(&s.elements));
            assert!((101..=501).contains(&s.samples));
        }
        assert!(
            scales.iter().any(|s| s.satellites == 8) && scales.iter().any(|s| s.satellites == 2)
        );
    }

    #[test]
    fn mismatch_maps_to_exit_four() {
        let report = OracleReport {
            scale: ReducedScale {
                satellites: 1,
                elements: 1,
                samples: 2,
                seed: 0,
            },
            steering: SteeringTarget::BROADSIDE,
            terms: 2,
            max_relative_deviation: 1e-6,
            tolerance: ORACLE_TOLERANCE,
            passed: false,
        };
        assert_eq!(report.check().unwrap_err().exit_code(), 4);
    }
}
