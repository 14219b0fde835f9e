//! Simulator for satellite-swarm distributed apertures.
//!
//! A swarm is a two-level array: every satellite carries an identical
//! triangular-lattice subarray, and the satellites themselves are scattered
//! over a large disk by truncated-normal rejection sampling. The crate covers
//! the whole chain:
//!
//! * [`geometry`]: subarray lattice and reproducible swarm placement.
//! * [`radiation`]: element surrogates, array factors and the composite
//!   pattern (factorized fast path plus a brute-force oracle).
//! * [`metrics`]: half-power beamwidth, sidelobe and grating-lobe levels.
//! * [`geolink`]: geostationary geometry and the half-power ground footprint.
//! * [`scenario`]: configuration, end-to-end orchestration and artifacts.
//!
//! All lengths in [`geometry`] and [`radiation`] are in units of the free-space
//! wavelength λ₀; kilometres only appear in [`geolink`].

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod geolink;
pub mod geometry;
pub mod metrics;
pub mod radiation;
pub mod scenario;

pub use error::{Error, Result};

/// Speed of light in vacuum (m/s).
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// A point in the aperture plane, in λ₀ units.
#[derive(Clone, Copy, Debug, Default, PartialEq, serde::Serialize, serde::Deserialize)]
#[serde(from = "[f64; 2]", into = "[f64; 2]")]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

impl Point2 {
    pub const ORIGIN: Point2 = Point2 { x: 0.0, y: 0.0 };

    pub const fn new(x: f64, y: f64) -> Self {
        Point2 { x, y }
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn norm_sq(self) -> f64 {
        self.x * self.x + self.y * self.y
    }

    pub fn distance(self, other: Point2) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }
}

impl std::ops::Add for Point2 {
    type Output = Point2;
    fn add(self, rhs: Point2) -> Point2 {
        Point2::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl From<[f64; 2]> for Point2 {
    fn from([x, y]: [f64; 2]) -> Self {
        Point2 { x, y }
    }
}

impl From<Point2> for [f64; 2] {
    fn from(p: Point2) -> Self {
        [p.x, p.y]
    }
}
