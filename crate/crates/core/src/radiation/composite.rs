use num_complex::Complex64;
use rayon::prelude::*;

use super::array_factor::{array_factor_at, steering_phases};
use super::{AngularCut, Direction, ElementPatternModel, FieldCut, SteeringTarget};
use crate::geometry::{ApertureLattice, SwarmLayout};
use crate::{Error, Point2, Result};

use std::f64::consts::TAU;

/// Default brute-force budget, in element-sample terms.
pub const DEFAULT_COST_CEILING: u128 = 100_000_000;

/// Anything that yields a complex far field in array-frame directions.
pub trait PatternSource: Sync {
    fn field(&self, direction: Direction) -> Complex64;
}

/// Two-level array: one lattice replicated at every swarm centre, with
/// subarray and swarm weights and a shared steering target.
#[derive(Clone, Debug)]
pub struct CompositeArray {
    pub element: ElementPatternModel,
    pub target: SteeringTarget,
    sub_positions: Vec<Point2>,
    sub_weights: Vec<Complex64>,
    sub_phases: Vec<f64>,
    centers: Vec<Point2>,
    swarm_weights: Vec<Complex64>,
    swarm_phases: Vec<f64>,
}

impl CompositeArray {
    pub fn new(
        element: ElementPatternModel,
        lattice: &ApertureLattice,
        swarm: &SwarmLayout,
        target: SteeringTarget,
        subarray_weights: &[Complex64],
        swarm_weights: &[Complex64],
    ) -> Result<Self> {
        element.validate()?;
        target.validate()?;
        if subarray_weights.len() != lattice.len() {
            return Err(Error::invalid(
                "subarray_weights",
                format!(
                    "{} weights for {} elements",
                    subarray_weights.len(),
                    lattice.len()
                ),
            ));
        }
        if swarm_weights.len() != swarm.centers.len() {
            return Err(Error::invalid(
                "swarm_weights",
                format!(
                    "{} weights for {} satellites",
                    swarm_weights.len(),
                    swarm.centers.len()
                ),
            ));
        }
        Ok(CompositeArray {
            element,
            target,
            sub_phases: steering_phases(&lattice.positions, target),
            sub_positions: lattice.positions.clone(),
            sub_weights: subarray_weights.to_vec(),
            swarm_phases: steering_phases(&swarm.centers, target),
            centers: swarm.centers.clone(),
            swarm_weights: swarm_weights.to_vec(),
        })
    }

    /// Uniform unit weights on both levels.
    pub fn uniform(
        element: ElementPatternModel,
        lattice: &ApertureLattice,
        swarm: &SwarmLayout,
        target: SteeringTarget,
    ) -> Result<Self> {
        let one = Complex64::new(1.0, 0.0);
        CompositeArray::new(
            element,
            lattice,
            swarm,
            target,
            &vec![one; lattice.len()],
            &vec![one; swarm.centers.len()],
        )
    }

    pub fn subarray_len(&self) -> usize {
        self.sub_positions.len()
    }

    pub fn swarm_len(&self) -> usize {
        self.centers.len()
    }

    pub fn subarray_factor(&self, direction: Direction) -> Complex64 {
        let (u, v) = direction.uv();
        array_factor_at(
            &self.sub_positions,
            &self.sub_weights,
            &self.sub_phases,
            u,
            v,
        )
    }

    pub fn swarm_factor(&self, direction: Direction) -> Complex64 {
        let (u, v) = direction.uv();
        array_factor_at(&self.centers, &self.swarm_weights, &self.swarm_phases, u, v)
    }

    /// Pattern multiplication: element · subarray factor · swarm factor.
    pub fn field_factorized(&self, direction: Direction) -> Complex64 {
        let el = self.element.amplitude(direction);
        el * (self.subarray_factor(direction) * self.swarm_factor(direction))
    }

    /// Sample count × satellites × elements.
    pub fn bruteforce_terms(&self, samples: usize) -> u128 {
        samples as u128 * self.centers.len() as u128 * self.sub_positions.len() as u128
    }

    /// Every element expanded to its absolute position, satellite-major, with
    /// its (subarray, swarm) weight pair.
    fn expanded(&self) -> (Vec<Point2>, Vec<(Complex64, Complex64)>) {
        let n = self.centers.len() * self.sub_positions.len();
        let mut positions = Vec::with_capacity(n);
        let mut weights = Vec::with_capacity(n);
        for (c, ws) in self.centers.iter().zip(&self.swarm_weights) {
            for (p, w) in self.sub_positions.iter().zip(&self.sub_weights) {
                positions.push(*c + *p);
                weights.push((*w, *ws));
            }
        }
        (positions, weights)
    }

    /// Magnitude the pattern reaches when every term is co-phased at the
    /// steering direction.
    pub fn coherent_peak(&self) -> f64 {
        let sub: f64 = self.sub_weights.iter().map(|w| w.norm()).sum();
        let sw: f64 = self.swarm_weights.iter().map(|w| w.norm()).sum();
        let steer =
            Direction::new(self.target.theta0_deg, self.target.phi0_deg).expect("validated target");
        sub * sw * self.element.amplitude(steer)
    }

    pub fn cut_factorized(&self, cut: &AngularCut) -> FieldCut {
        let dirs: Vec<Direction> = cut.directions().collect();
        let values = dirs.par_iter().map(|&d| self.field_factorized(d)).collect();
        FieldCut::new(cut.clone(), values).expect("one value per sample")
    }

    pub fn cut_bruteforce(&self, cut: &AngularCut, cost_ceiling: u128) -> Result<FieldCut> {
        let terms = self.bruteforce_terms(cut.sample_count());
        if terms > cost_ceiling {
            return Err(Error::CostCeiling {
                terms,
                ceiling: cost_ceiling,
            });
        }
        let (positions, weights) = self.expanded();
        let phases = steering_phases(&positions, self.target);
        let dirs: Vec<Direction> = cut.directions().collect();
        let values = dirs
            .par_iter()
            .map(|&d| {
                let (u, v) = d.uv();
                // term = w_sub · (w_swarm · e^{jψ}), summed in storage order
                let sum = positions.iter().zip(&weights).zip(&phases).fold(
                    Complex64::new(0.0, 0.0),
                    |acc, ((p, (w_sub, w_sw)), ph)| {
                        acc + w_sub * (w_sw * Complex64::cis(TAU * (p.x * u + p.y * v) + ph))
                    },
                );
                self.element.amplitude(d) * sum
            })
            .collect();
        FieldCut::new(cut.clone(), values)
    }
}

impl PatternSource for CompositeArray {
    fn field(&self, direction: Direction) -> Complex64 {
        self.field_factorized(direction)
    }
}

/// Composite pattern by pattern multiplication, `O((N_sub + N_swarm)·samples)`.
pub fn composite_pattern_factorized(
    element: ElementPatternModel,
    lattice: &ApertureLattice,
    swarm: &SwarmLayout,
    target: SteeringTarget,
    subarray_weights: &[Complex64],
    swarm_weights: &[Complex64],
    cut: &AngularCut,
) -> Result<FieldCut> {
    let array = CompositeArray::new(
        element,
        lattice,
        swarm,
        target,
        subarray_weights,
        swarm_weights,
    )?;
    Ok(array.cut_factorized(cut))
}

/// Composite pattern summed directly over all `N_swarm × N_sub` elements.
/// Fails with [`Error::CostCeiling`] when the term count exceeds
/// `cost_ceiling`.
#[allow(clippy::too_many_arguments)]
pub fn composite_pattern_bruteforce(
    element: ElementPatternModel,
    lattice: &ApertureLattice,
    swarm: &SwarmLayout,
    target: SteeringTarget,
    subarray_weights: &[Complex64],
    swarm_weights: &[Complex64],
    cut: &AngularCut,
    cost_ceiling: u128,
) -> Result<FieldCut> {
    let array = CompositeArray::new(
        element,
        lattice,
        swarm,
        target,
        subarray_weights,
        swarm_weights,
    )?;
    array.cut_bruteforce(cut, cost_ceiling)
}

/// `max |aᵢ − bᵢ| / max |bᵢ|`: sample deviation relative to the reference
/// peak, so deep nulls do not dominate.
pub fn max_relative_deviation(a: &FieldCut, b: &FieldCut) -> f64 {
    let diff = a
        .values
        .iter()
        .zip(&b.values)
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max);
    let scale = b.peak().1;
    if diff == 0.0 {
        0.0
    } else if scale == 0.0 {
        f64::INFINITY
    } else {
        diff / scale
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{place_swarm, triangular_lattice, SwarmParams};
    use proptest::prelude::*;

    fn swarm(centers: Vec<Point2>) -> SwarmLayout {
        SwarmLayout {
            count: centers.len(),
            centers,
            sigma_lambda: 1.0,
            r_max_lambda: 1.0,
            d_min_lambda: 1.0,
            seed: 0,
        }
    }

    fn small_case(sats: usize, radius: f64, seed: u64) -> (ApertureLattice, SwarmLayout) {
        let lattice = triangular_lattice(radius, 0.857).unwrap();
        let layout = place_swarm(
            SwarmParams {
                count: sats,
                sigma_lambda: 400.0,
                r_max_lambda: 200.0,
                d_min_lambda: 5.0,
            },
            seed,
            100_000,
        )
        .unwrap();
        (lattice, layout)
    }

    #[test]
    fn degenerate_swarm_reduces_to_subarray() {
        let lattice = triangular_lattice(2.0, 0.857).unwrap();
        let target = SteeringTarget {
            theta0_deg: 2.0,
            phi0_deg: 40.0,
        };
        let el = ElementPatternModel::default();
        let arr =
            CompositeArray::uniform(el, &lattice, &swarm(vec![Point2::ORIGIN]), target).unwrap();
        let cut = AngularCut::uniform(0.0, -10.0, 10.0, 201).unwrap();
        let got = arr.cut_factorized(&cut);
        let phases = steering_phases(&lattice.positions, target);
        let w = vec![Complex64::new(1.0, 0.0); lattice.len()];
        let sub = super::super::array_factor(&lattice.positions, &w, &phases, &cut).unwrap();
        for ((v, s), d) in got.values.iter().zip(&sub.values).zip(cut.directions()) {
            assert!((v - s * el.amplitude(d)).norm() <= 1e-12 * lattice.len() as f64);
        }
    }

    #[test]
    fn single_radiator_is_the_element_pattern() {
        let lattice = triangular_lattice(0.1, 1.0).unwrap();
        let el = ElementPatternModel::CosinePower { exponent: 2.0 };
        let arr = CompositeArray::uniform(
            el,
            &lattice,
            &swarm(vec![Point2::ORIGIN]),
            SteeringTarget::BROADSIDE,
        )
        .unwrap();
        let cut = AngularCut::uniform(0.0, -80.0, 80.0, 33).unwrap();
        let f = arr.cut_bruteforce(&cut, DEFAULT_COST_CEILING).unwrap();
        for (v, d) in f.values.iter().zip(cut.directions()) {
            assert_eq!(*v, Complex64::new(el.amplitude(d), 0.0));
        }
    }

    #[test]
    fn three_by_seven_agrees_with_bruteforce() {
        let (lattice, layout) = small_case(3, 0.9, 4);
        assert_eq!(lattice.len(), 7);
        let arr = CompositeArray::uniform(
            ElementPatternModel::default(),
            &lattice,
            &layout,
            SteeringTarget::BROADSIDE,
        )
        .unwrap();
        let cut = AngularCut::uniform(0.0, -1.0, 1.0, 101).unwrap();
        let a = arr.cut_factorized(&cut);
        let b = arr.cut_bruteforce(&cut, DEFAULT_COST_CEILING).unwrap();
        assert!(max_relative_deviation(&a, &b) <= 1e-9);
    }

    #[test]
    fn full_scale_trips_the_ceiling() {
        let lattice = crate::geometry::ApertureLattice::with_count(422, 0.857).unwrap();
        let layout = swarm(
            (0..256)
                .map(|i| Point2::new(i as f64 * 600.0, 0.0))
                .collect(),
        );
        let arr = CompositeArray::uniform(
            ElementPatternModel::default(),
            &lattice,
            &layout,
            SteeringTarget::BROADSIDE,
        )
        .unwrap();
        let cut = AngularCut::uniform(0.0, -1.0, 1.0, 15_000).unwrap();
        assert!(matches!(
            arr.cut_bruteforce(&cut, DEFAULT_COST_CEILING),
            Err(Error::CostCeiling { .. })
        ));
    }

    #[test]
    fn weight_length_mismatch() {
        let (lattice, layout) = small_case(2, 0.9, 1);
        let one = Complex64::new(1.0, 0.0);
        let cut = AngularCut::uniform(0.0, -1.0, 1.0, 3).unwrap();
        let el = ElementPatternModel::Isotropic;
        let t = SteeringTarget::BROADSIDE;
        assert!(
            composite_pattern_factorized(el, &lattice, &layout, t, &[one], &[one, one], &cut)
                .is_err()
        );
        assert!(
            composite_pattern_factorized(el, &lattice, &layout, t, &[one; 7], &[one], &cut)
                .is_err()
        );
        assert!(composite_pattern_bruteforce(
            el, &lattice, &layout, t, &[one; 7], &[one; 3], &cut, 1_000_000
        )
        .is_err());
    }

    fn weights(seed: u64, n: usize) -> Vec<Complex64> {
        let mut rng = crate::geometry::SwarmRng::new(seed, 9);
        (0..n)
            .map(|_| {
                Complex64::from_polar(0.5 + rng.uniform(), std::f64::consts::TAU * rng.uniform())
            })
            .collect()
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn factorization_identity(
            sats in 1usize..6, radius in 0.5f64..2.5, seed in 0u64..1000,
            theta0 in 0.0f64..5.0, phi0 in 0.0f64..360.0, phi in 0.0f64..360.0,
        ) {
            let (lattice, layout) = small_case(sats, radius, seed);
            let target = SteeringTarget { theta0_deg: theta0, phi0_deg: phi0 };
            let arr = CompositeArray::new(
                ElementPatternModel::default(), &lattice, &layout, target,
                &weights(seed, lattice.len()), &weights(seed + 1, sats),
            ).unwrap();
            let cut = AngularCut::uniform(phi, -6.0, 6.0, 121).unwrap();
            let a = arr.cut_factorized(&cut);
            let b = arr.cut_bruteforce(&cut, DEFAULT_COST_CEILING).unwrap();
            prop_assert!(max_relative_deviation(&a, &b) <= 1e-9);
        }

        #[test]
        fn steering_co_phases_all_terms(
            sats in 1usize..6, radius in 0.5f64..3.0, seed in 0u64..1000,
            theta0 in 0.0f64..60.0, phi0 in 0.0f64..360.0,
        ) {
            let (lattice, layout) = small_case(sats, radius, seed);
            let target = SteeringTarget { theta0_deg: theta0, phi0_deg: phi0 };
            let arr = CompositeArray::new(
                ElementPatternModel::default(), &lattice, &layout, target,
                &weights(seed, lattice.len()).iter().map(|w| Complex64::new(w.norm(), 0.0)).collect::<Vec<_>>(),
                &weights(seed + 1, sats).iter().map(|w| Complex64::new(w.norm(), 0.0)).collect::<Vec<_>>(),
            ).unwrap();
            let at = arr.field(Direction::new(theta0, phi0).unwrap()).norm();
            prop_assert!((at - arr.coherent_peak()).abs() <= 1e-9 * arr.coherent_peak());
        }

        #[test]
        fn cut_reciprocity(theta in 0.0f64..10.0, phi in 0.0f64..180.0, seed in 0u64..100) {
            let (lattice, layout) = small_case(3, 1.5, seed);
            let arr = CompositeArray::uniform(ElementPatternModel::default(), &lattice, &layout,
                SteeringTarget { theta0_deg: 1.0, phi0_deg: 20.0 }).unwrap();
            let neg = AngularCut::new(phi, vec![-theta - 1.0, -theta]).unwrap();
            let pos = AngularCut::new(phi + 180.0, vec![theta, theta + 1.0]).unwrap();
            let a = arr.cut_factorized(&neg);
            let b = arr.cut_factorized(&pos);
            prop_assert_eq!(a.values[1], b.values[0]);
            prop_assert_eq!(a.values[0], b.values[1]);
        }

        #[test]
        fn complex_scaling(re in -3.0f64..3.0, im in -3.0f64..3.0, seed in 0u64..100) {
            prop_assume!(re.abs() + im.abs() > 1e-3);
            let c = Complex64::new(re, im);
            let (lattice, layout) = small_case(3, 1.2, seed);
            let w_sub = weights(seed, lattice.len());
            let w_sw = weights(seed + 7, 3);
            let cut = AngularCut::uniform(0.0, -2.0, 2.0, 41).unwrap();
            let el = ElementPatternModel::default();
            let base = composite_pattern_factorized(el, &lattice, &layout, SteeringTarget::BROADSIDE, &w_sub, &w_sw, &cut).unwrap();
            let scaled_w: Vec<_> = w_sw.iter().map(|w| w * c).collect();
            let scaled = composite_pattern_factorized(el, &lattice, &layout, SteeringTarget::BROADSIDE, &w_sub, &scaled_w, &cut).unwrap();
            prop_assert!(max_relative_deviation(&scaled, &base.scaled(c)) <= 1e-12);
        }
    }
}
