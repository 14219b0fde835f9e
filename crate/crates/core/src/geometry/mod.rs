//! Subarray lattice and swarm layout generation.

mod io;
mod lattice;
mod rng;
mod swarm;

pub use io::{LatticeDocument, LayoutDocument, LAYOUT_SCHEMA_VERSION, LAYOUT_UNITS};
pub use lattice::{
    calibrate_radius_for_count, triangular_lattice, ApertureLattice, CalibratedRadius,
};
pub use rng::SwarmRng;
pub use swarm::{min_pairwise_distance, place_swarm, SwarmLayout, SwarmParams};
