use serde::{Deserialize, Serialize};

use super::{SwarmLayout, SwarmParams};
use crate::{Error, Point2, Result};

pub const LAYOUT_SCHEMA_VERSION: u32 = 1;
pub const LAYOUT_UNITS: &str = "lambda0";

/// On-disk form of a [`SwarmLayout`] (JSON).
///
/// Positions are written in shortest round-trip form, so a loaded layout is
/// bit-identical to the one that was saved.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LayoutDocument {
    pub schema_version: u32,
    pub units: String,
    pub parameters: SwarmParams,
    pub seed: u64,
    pub positions: Vec<[f64; 2]>,
}

impl LayoutDocument {
    pub fn from_layout(layout: &SwarmLayout) -> Self {
        LayoutDocument {
            schema_version: LAYOUT_SCHEMA_VERSION,
            units: LAYOUT_UNITS.to_owned(),
            parameters: layout.params(),
            seed: layout.seed,
            positions: layout.centers.iter().map(|c| [c.x, c.y]).collect(),
        }
    }

    pub fn into_layout(self) -> Result<SwarmLayout> {
        if self.schema_version != LAYOUT_SCHEMA_VERSION {
            return Err(Error::Format {
                what: "layout document",
                reason: format!("unsupported schema version {}", self.schema_version),
            });
        }
        if self.units != LAYOUT_UNITS {
            return Err(Error::Format {
                what: "layout document",
                reason: format!("units must be {LAYOUT_UNITS:?}, found {:?}", self.units),
            });
        }
        if self.positions.len() != self.parameters.count {
            return Err(Error::Format {
                what: "layout document",
                reason: format!(
                    "{} positions for count {}",
                    self.positions.len(),
                    self.parameters.count
                ),
            });
        }
        Ok(SwarmLayout {
            centers: self.positions.into_iter().map(Point2::from).collect(),
            sigma_lambda: self.parameters.sigma_lambda,
            r_max_lambda: self.parameters.r_max_lambda,
            d_min_lambda: self.parameters.d_min_lambda,
            count: self.parameters.count,
            seed: self.seed,
        })
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("layout serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}


/// On-disk form of an [`ApertureLattice`](super::ApertureLattice) (JSON).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LatticeDocument {
    pub schema_version: u32,
    pub units: String,
    pub spacing_lambda: f64,
    pub radius_lambda: f64,
    pub count: usize,
    pub positions: Vec<[f64; 2]>,
}

impl LatticeDocument {
    pub fn from_lattice(lattice: &super::ApertureLattice) -> Self {
        LatticeDocument {
            schema_version: LAYOUT_SCHEMA_VERSION,
            units: LAYOUT_UNITS.to_owned(),
            spacing_lambda: lattice.spacing_lambda,
            radius_lambda: lattice.radius_lambda,
            count: lattice.len(),
            positions: lattice.positions.iter().map(|p| [p.x, p.y]).collect(),
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("lattice serializes");
        s.push('\n');
        s
    }
}
