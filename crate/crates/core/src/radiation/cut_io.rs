//! Tabular text form of a [`FieldCut`].
//!
//! ```text
//! # schema_version: 1
//! # phi_deg: 0
//! # steering_theta0_deg: 0
//! # steering_phi0_deg: 0
//! # seed: 1
//! # element: circular_aperture(a=0.4)
//! theta_deg,re,im,magnitude_db
//! -1,0.5,-0.25,-12.5
//! ```
//!
//! Floats are written in shortest round-trip form, so reading a file back
//! gives the exact samples. `magnitude_db` is relative to the cut's peak.

use std::io::Write;

use num_complex::Complex64;

use super::{AngularCut, FieldCut, SteeringTarget};
use crate::{Error, Result};

pub const CUT_SCHEMA_VERSION: u32 = 1;
const COLUMNS: &str = "theta_deg,re,im,magnitude_db";

#[derive(Clone, Debug, PartialEq)]
pub struct CutMetadata {
    pub steering: SteeringTarget,
    pub seed: Option<u64>,
    pub element: String,
}

pub fn write_field_cut<W: Write>(mut out: W, field: &FieldCut, meta: &CutMetadata) -> Result<()> {
    writeln!(out, "# schema_version: {CUT_SCHEMA_VERSION}")?;
    writeln!(out, "# phi_deg: {}", field.cut.phi_deg)?;
    writeln!(out, "# steering_theta0_deg: {}", meta.steering.theta0_deg)?;
    writeln!(out, "# steering_phi0_deg: {}", meta.steering.phi0_deg)?;
    match meta.seed {
        Some(seed) => writeln!(out, "# seed: {seed}")?,
        None => writeln!(out, "# seed: none")?,
    }
    writeln!(out, "# element: {}", meta.element)?;
    writeln!(out, "{COLUMNS}")?;
    let db = field.magnitude_db();
    for ((t, v), m) in field.theta().iter().zip(&field.values).zip(db) {
        writeln!(out, "{t},{},{},{m}", v.re, v.im)?;
    }
    Ok(())
}

pub fn read_field_cut(text: &str) -> Result<(FieldCut, CutMetadata)> {
    let bad = |reason: String| Error::Format {
        what: "pattern file",
        reason,
    };
    let mut phi = None;
    let mut theta0 = 0.0;
    let mut phi0 = 0.0;
    let mut seed = None;
    let mut element = String::new();
    let mut lines = text.lines().enumerate();
    let mut saw_columns = false;
    for (n, line) in lines.by_ref() {
        if let Some(meta) = line.strip_prefix('#') {
            let (key, value) = meta
                .split_once(':')
                .ok_or_else(|| bad(format!("line {}: expected `# key: value`", n + 1)))?;
            let value = value.trim();
            let num = |v: &str| -> Result<f64> {
                v.parse()
                    .map_err(|_| bad(format!("line {}: `{v}` is not a number", n + 1)))
            };
            match key.trim() {
                "schema_version" => {
                    if value != CUT_SCHEMA_VERSION.to_string() {
                        return Err(bad(format!("unsupported schema version {value}")));
                    }
                }
                "phi_deg" => phi = Some(num(value)?),
                "steering_theta0_deg" => theta0 = num(value)?,
                "steering_phi0_deg" => phi0 = num(value)?,
                "seed" => {
                    seed = match value {
                        "none" => None,
                        v => Some(
                            v.parse()
                                .map_err(|_| bad(format!("line {}: bad seed", n + 1)))?,
                        ),
                    }
                }
                "element" => element = value.to_owned(),
                other => return Err(bad(format!("line {}: unknown header `{other}`", n + 1))),
            }
        } else if line.trim() == COLUMNS {
            saw_columns = true;
            break;
        } else {
            return Err(bad(format!(
                "line {}: expected header or `{COLUMNS}`",
                n + 1
            )));
        }
    }
    if !saw_columns {
        return Err(bad("missing column header".into()));
    }
    let phi = phi.ok_or_else(|| bad("missing `phi_deg` header".into()))?;
    let mut theta = Vec::new();
    let mut values = Vec::new();
    for (n, line) in lines {
        if line.trim().is_empty() {
            continue;
        }
        let cols: Vec<&str> = line.split(',').collect();
        if cols.len() != 4 {
            return Err(bad(format!("line {}: expected 4 columns", n + 1)));
        }
        let parse = |s: &str| -> Result<f64> {
            s.trim()
                .parse()
                .map_err(|_| bad(format!("line {}: `{s}` is not a number", n + 1)))
        };
        theta.push(parse(cols[0])?);
        values.push(Complex64::new(parse(cols[1])?, parse(cols[2])?));
    }
    let cut = AngularCut::new(phi, theta)?;
    Ok((
        FieldCut::new(cut, values)?,
        CutMetadata {
            steering: SteeringTarget {
                theta0_deg: theta0,
                phi0_deg: phi0,
            },
            seed,
            element,
        },
    ))
}
