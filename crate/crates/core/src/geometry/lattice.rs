use serde::{Deserialize, Serialize};

use crate::{Error, Point2, Result};

/// Relative tolerance used to group lattice points into shells of equal radius.
const SHELL_TOLERANCE: f64 = 1e-9;

/// Element positions of one subarray, in λ₀ units.
///
/// Positions are stored row by row: rows in ascending `y`, elements within a
/// row in ascending `x`. Rows are parallel to the x axis and one element sits
/// exactly at the origin.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ApertureLattice {
    pub positions: Vec<Point2>,
    pub spacing_lambda: f64,
    pub radius_lambda: f64,
}

impl ApertureLattice {
    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    /// Lattice with exactly `count` elements: every complete shell of lattice
    /// points around the origin, plus the first points of the next shell in
    /// counter-clockwise order starting from the +x axis.
    ///
    /// A disk clip only produces counts of the form `1 + 6k` or `1 + 12k`
    /// shells, so counts such as 422 need a partially filled outer shell.
    /// `radius_lambda` is set halfway between the outermost occupied shell and
    /// the next one, so every position still lies inside it.
    pub fn with_count(count: usize, spacing_lambda: f64) -> Result<Self> {
        if count == 0 {
            return Err(Error::invalid("target_count", "must be at least 1"));
        }
        check_spacing(spacing_lambda)?;
        let mut sorted = points_by_radius(count + 1, spacing_lambda);
        sorted.sort_by(|a, b| {
            shell_cmp(a.norm(), b.norm()).then_with(|| polar_angle(*a).total_cmp(&polar_angle(*b)))
        });
        let shells = shell_radii(&sorted);
        let outer = sorted[count - 1].norm();
        let next = shells
            .iter()
            .copied()
            .find(|&r| r > outer * (1.0 + SHELL_TOLERANCE))
            .expect("enumeration covers one extra shell");
        let mut positions = sorted[..count].to_vec();
        sort_rows(&mut positions);
        Ok(ApertureLattice {
            positions,
            spacing_lambda,
            radius_lambda: 0.5 * (outer + next),
        })
    }
}

/// Result of [`calibrate_radius_for_count`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CalibratedRadius {
    pub radius_lambda: f64,
    /// Element count the returned radius produces.
    pub count: usize,
    /// False when the requested count falls inside a shell and cannot be
    /// produced by any disk clip.
    pub exact: bool,
}

/// All points of an equilateral triangular lattice inside the disk of radius
/// `radius_lambda`.
///
/// Row `j` sits at `y = j·spacing·√3/2` and odd rows are shifted by half a
/// spacing in `x`. Output order is rows of ascending `j`, each row in
/// ascending `x`.
pub fn triangular_lattice(radius_lambda: f64, spacing_lambda: f64) -> Result<ApertureLattice> {
    if !(radius_lambda > 0.0) || !radius_lambda.is_finite() {
        return Err(Error::invalid(
            "radius_lambda",
            "must be positive and finite",
        ));
    }
    check_spacing(spacing_lambda)?;
    let pitch = spacing_lambda * 3f64.sqrt() / 2.0;
    let rows = (radius_lambda / pitch).ceil() as i64;
    let cols = (radius_lambda / spacing_lambda).ceil() as i64 + 1;
    let r2 = radius_lambda * radius_lambda;
    let mut positions = Vec::new();
    for j in -rows..=rows {
        let y = j as f64 * pitch;
        let shift = if j.rem_euclid(2) == 1 { 0.5 } else { 0.0 };
        for i in -cols..=cols {
            let p = Point2::new((i as f64 + shift) * spacing_lambda, y);
            if p.norm_sq() <= r2 {
                positions.push(p);
            }
        }
    }
    Ok(ApertureLattice {
        positions,
        spacing_lambda,
        radius_lambda,
    })
}

/// Disk radius for which [`triangular_lattice`] yields `target_count`
/// elements.
///
/// The returned radius sits halfway between the shell that completes the
/// count and the next shell, which keeps clipping insensitive to rounding.
/// When no disk produces the exact count, the largest achievable count below
/// it is used and `exact` is false.
pub fn calibrate_radius_for_count(
    target_count: usize,
    spacing_lambda: f64,
) -> Result<CalibratedRadius> {
    if target_count == 0 {
        return Err(Error::invalid("target_count", "must be at least 1"));
    }
    check_spacing(spacing_lambda)?;
    let mut sorted = points_by_radius(target_count + 1, spacing_lambda);
    sorted.sort_by(|a, b| a.norm().total_cmp(&b.norm()));
    let shells = shell_radii(&sorted);

    // cumulative count after each shell
    let mut best = None;
    let mut seen = 0;
    for (k, &r) in shells.iter().enumerate() {
        seen += sorted[seen..]
            .iter()
            .take_while(|p| shell_cmp(p.norm(), r).is_eq())
            .count();
        if seen > target_count {
            break;
        }
        best = Some((k, seen));
        if seen == target_count {
            break;
        }
    }
    let (k, count) = best.expect("the origin shell holds a single element");
    let radius_lambda = 0.5 * (shells[k] + shells[k + 1]);
    Ok(CalibratedRadius {
        radius_lambda,
        count,
        exact: count == target_count,
    })
}

fn check_spacing(spacing_lambda: f64) -> Result<()> {
    if !(spacing_lambda > 0.0) || !spacing_lambda.is_finite() {
        return Err(Error::invalid(
            "spacing_lambda",
            "must be positive and finite",
        ));
    }
    Ok(())
}

/// Lattice points in a disk large enough to hold at least `min_count` points
/// and the complete shell after them.
fn points_by_radius(min_count: usize, spacing_lambda: f64) -> Vec<Point2> {
    // area per element of a triangular lattice is spacing²·√3/2
    let cell = spacing_lambda * spacing_lambda * 3f64.sqrt() / 2.0;
    let mut radius = (min_count as f64 * cell / std::f64::consts::PI).sqrt() + 2.0 * spacing_lambda;
    loop {
        let lattice = triangular_lattice(radius, spacing_lambda).expect("validated parameters");
        // points within radius - spacing form complete shells with at least
        // one complete shell following them
        let inner = (radius - 1.5 * spacing_lambda).max(0.0);
        let complete = lattice
            .positions
            .iter()
            .filter(|p| p.norm() <= inner)
            .count();
        if complete >= min_count {
            return lattice.positions;
        }
        radius *= 1.25;
    }
}

fn shell_cmp(a: f64, b: f64) -> std::cmp::Ordering {
    if (a - b).abs() <= SHELL_TOLERANCE * a.max(b).max(1e-300) {
        std::cmp::Ordering::Equal
    } else {
        a.total_cmp(&b)
    }
}

/// Distinct radii of points sorted by radius.
fn shell_radii(sorted: &[Point2]) -> Vec<f64> {
    let mut shells: Vec<f64> = Vec::new();
    for p in sorted {
        let r = p.norm();
        match shells.last() {
            Some(&last) if shell_cmp(last, r).is_eq() => {}
            _ => shells.push(r),
        }
    }
    shells
}

fn polar_angle(p: Point2) -> f64 {
    let a = p.y.atan2(p.x);
    if a < 0.0 {
        a + std::f64::consts::TAU
    } else {
        a
    }
}

fn sort_rows(positions: &mut [Point2]) {
    positions.sort_by(|a, b| a.y.total_cmp(&b.y).then(a.x.total_cmp(&b.x)));
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Independent enumeration in axial coordinates: p = i·a₁ + j·a₂ with
    /// a₁ = (d, 0) and a₂ = (d/2, d·√3/2).
    fn axial_points(radius: f64, spacing: f64) -> Vec<Point2> {
        let n = (radius / spacing).ceil() as i64 * 2 + 2;
        let mut out = Vec::new();
        for i in -n..=n {
            for j in -n..=n {
                let x = spacing * (i as f64 + 0.5 * j as f64);
                let y = spacing * (3f64.sqrt() / 2.0) * j as f64;
                if x * x + y * y <= radius * radius {
                    out.push(Point2::new(x, y));
                }
            }
        }
        out
    }

    fn nearest_neighbor(positions: &[Point2], i: usize) -> f64 {
        positions
            .iter()
            .enumerate()
            .filter(|&(k, _)| k != i)
            .map(|(_, q)| positions[i].distance(*q))
            .fold(f64::INFINITY, f64::min)
    }

    #[test]
    fn tiny_radius_keeps_only_the_origin() {
        let lat = triangular_lattice(0.3, 0.857).unwrap();
        assert_eq!(lat.positions, vec![Point2::ORIGIN]);
    }

    #[test]
    fn unit_radius_matches_axial_enumeration() {
        let lat = triangular_lattice(1.0, 0.857).unwrap();
        assert_eq!(lat.len(), axial_points(1.0, 0.857).len());
        assert_eq!(lat.len(), 7);
    }

    #[test]
    fn rejects_non_positive_parameters() {
        assert!(triangular_lattice(0.0, 1.0).is_err());
        assert!(triangular_lattice(1.0, -1.0).is_err());
        assert!(triangular_lattice(f64::NAN, 1.0).is_err());
        assert!(calibrate_radius_for_count(0, 0.857).is_err());
        assert!(ApertureLattice::with_count(0, 0.857).is_err());
    }

    #[test]
    fn enumeration_order_is_row_major() {
        let lat = triangular_lattice(3.0, 0.857).unwrap();
        for w in lat.positions.windows(2) {
            assert!(w[0].y < w[1].y || (w[0].y == w[1].y && w[0].x < w[1].x));
        }
    }

    #[test]
    fn single_element_calibration() {
        let c = calibrate_radius_for_count(1, 0.857).unwrap();
        assert!(c.exact && c.count == 1);
        assert!(c.radius_lambda > 0.0 && c.radius_lambda < 0.857);
        assert_eq!(triangular_lattice(c.radius_lambda, 0.857).unwrap().len(), 1);
    }

    #[test]
    fn first_hexagonal_shell() {
        let c = calibrate_radius_for_count(7, 1.0).unwrap();
        assert!(c.exact);
        assert!(c.radius_lambda >= 1.0 && c.radius_lambda < 3f64.sqrt());
    }

    #[test]
    fn calibration_for_422_matches_sorted_radius_oracle() {
        // oracle: sorted radii of an independent enumeration
        let mut radii: Vec<f64> = axial_points(15.0, 0.857).iter().map(|p| p.norm()).collect();
        radii.sort_by(f64::total_cmp);
        let r422 = radii[421];
        // the 422nd radius is shared with later points, so a disk either
        // stops at 421 elements or jumps past 422
        let below = radii.iter().filter(|&&r| r < r422 - 1e-9).count();
        let through = radii.iter().filter(|&&r| r <= r422 + 1e-9).count();
        assert_eq!((below, through), (421, 433));

        let c = calibrate_radius_for_count(422, 0.857).unwrap();
        assert!(!c.exact);
        assert_eq!(c.count, 421);
        assert!(c.radius_lambda > radii[420] && c.radius_lambda < r422);
        assert_eq!(
            triangular_lattice(c.radius_lambda, 0.857).unwrap().len(),
            421
        );
    }

    #[test]
    fn exact_count_lattice_has_422_elements() {
        let lat = ApertureLattice::with_count(422, 0.857).unwrap();
        assert_eq!(lat.len(), 422);
        let r2 = lat.radius_lambda * lat.radius_lambda;
        assert!(lat.positions.iter().all(|p| p.norm_sq() <= r2));
        // one element of the partial shell, the first one counter-clockwise
        // from +x
        let full = triangular_lattice(
            calibrate_radius_for_count(422, 0.857)
                .unwrap()
                .radius_lambda,
            0.857,
        )
        .unwrap();
        let extra: Vec<_> = lat
            .positions
            .iter()
            .filter(|p| !full.positions.contains(p))
            .collect();
        assert_eq!(extra.len(), 1);
        assert!(extra[0].y >= 0.0);
    }

    #[test]
    fn exact_count_matches_disk_clip_on_full_shells() {
        for count in [1, 7, 19, 37] {
            let lat = ApertureLattice::with_count(count, 0.5).unwrap();
            let c = calibrate_radius_for_count(count, 0.5).unwrap();
            assert!(c.exact);
            assert_eq!(
                lat.positions,
                triangular_lattice(c.radius_lambda, 0.5).unwrap().positions
            );
        }
    }

    #[test]
    fn nearest_neighbor_and_uniqueness() {
        let lat = triangular_lattice(6.0, 0.857).unwrap();
        for i in 0..lat.len() {
            let nn = nearest_neighbor(&lat.positions, i);
            assert!((nn - 0.857).abs() <= 1e-9 * 0.857, "element {i}: {nn}");
        }
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn count_is_monotone_in_radius(r in 0.1f64..8.0, dr in 0.0f64..2.0, d in 0.3f64..1.5) {
                let a = triangular_lattice(r, d).unwrap().len();
                let b = triangular_lattice(r + dr, d).unwrap().len();
                prop_assert!(a <= b);
            }

            #[test]
            fn lattice_invariants(r in 0.1f64..6.0, d in 0.3f64..1.5) {
                let lat = triangular_lattice(r, d).unwrap();
                prop_assert_eq!(lat.len(), axial_points(r, d).len());
                for (i, p) in lat.positions.iter().enumerate() {
                    prop_assert!(p.norm_sq() <= r * r);
                    if lat.len() > 1 {
                        let nn = nearest_neighbor(&lat.positions, i);
                        prop_assert!(nn >= d * (1.0 - 1e-9));
                    }
                }
                if lat.len() > 1 {
                    let min_nn = (0..lat.len())
                        .map(|i| nearest_neighbor(&lat.positions, i))
                        .fold(f64::INFINITY, f64::min);
                    prop_assert!((min_nn - d).abs() <= 1e-9 * d);
                }
            }

            #[test]
            fn calibration_hits_the_requested_count_when_exact(n in 1usize..300, d in 0.4f64..1.2) {
                let c = calibrate_radius_for_count(n, d).unwrap();
                let got = triangular_lattice(c.radius_lambda, d).unwrap().len();
                prop_assert_eq!(got, c.count);
                prop_assert!(c.count <= n);
                prop_assert_eq!(c.exact, c.count == n);
                prop_assert_eq!(ApertureLattice::with_count(n, d).unwrap().len(), n);
            }
        }
    }
}
