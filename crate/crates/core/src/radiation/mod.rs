//! Element patterns, array factors and the composite swarm pattern.
//!
//! Angles follow the usual antenna convention: `theta` is measured from the
//! aperture normal and `phi` in the aperture plane from +x. A signed angle on
//! a cut at azimuth `phi` means `|theta|` at `phi + 180°` when negative.
//!
//! Within one sample every sum runs over the elements in storage order
//! (satellite-major for the brute-force path), so results do not depend on
//! how samples are distributed over threads.

mod array_factor;
mod composite;
mod cut_io;
mod direction;
mod element;

pub use array_factor::{array_factor, array_factor_at, steering_phases};
pub use composite::{
    composite_pattern_bruteforce, composite_pattern_factorized, max_relative_deviation,
    CompositeArray, PatternSource, DEFAULT_COST_CEILING,
};
pub use cut_io::{read_field_cut, write_field_cut, CutMetadata};
pub use direction::{AngularCut, Direction, FieldCut, SteeringTarget};
pub use element::{bessel_j1, ElementPatternModel, MAX_APERTURE_RADIUS_LAMBDA};
