//! Slices through probability fields, self-affine box counting and
//! size-scaling of entropy and participation.

mod boxcount;
mod scaling;

pub use boxcount::{box_count, default_ladder, self_affine_dimension, BoxCountParams, DimensionEstimate};
pub use scaling::{measure_scaling_sample, scaling_dimension_fit, ScalingFit, ScalingKind, ScalingSample};

pub use crate::fit::loglog_fit;

use std::fmt;

use crate::curve::Curve;
use crate::error::{Error, Result};
use crate::evolution::ProbabilityField;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SliceAxis {
    /// `x -> P(x, t0)`.
    Space { t0: f64 },
    /// `t -> P(x0, t)` with a 1-based site.
    Time { x0: usize },
    /// `x -> P(x, t = x)`.
    Diagonal,
}

impl fmt::Display for SliceAxis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SliceAxis::Space { t0 } => write!(f, "space:{t0}"),
            SliceAxis::Time { x0 } => write!(f, "time:{x0}"),
            SliceAxis::Diagonal => write!(f, "diagonal"),
        }
    }
}

impl std::str::FromStr for SliceAxis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::invalid(format!("unrecognised axis '{s}' (space:<t0>, time:<x0>, diagonal)"));
        match s.split_once(':') {
            None if s == "diagonal" => Ok(SliceAxis::Diagonal),
            Some(("space", v)) => v.parse().map(|t0| SliceAxis::Space { t0 }).map_err(|_| bad()),
            Some(("time", v)) => v.parse().map(|x0| SliceAxis::Time { x0 }).map_err(|_| bad()),
            _ => Err(bad()),
        }
    }
}

pub fn extract_slice(field: &ProbabilityField, axis: SliceAxis) -> Result<Curve> {
    let grid = field.grid();
    let n = field.n_sites();
    let locate = |t: f64| {
        grid.index_of(t).ok_or_else(|| match grid.nearest(t) {
            Some(near) => Error::invalid(format!("time {t} is not on the grid; nearest sample is {near}")),
            None => Error::invalid("the field has no time samples"),
        })
    };
    match axis {
        SliceAxis::Space { t0 } => {
            let k = locate(t0)?;
            Curve::unit_spaced(1.0, field.slice(k).to_vec(), format!("P(x, t={t0})"))
        }
        SliceAxis::Time { x0 } => {
            if x0 == 0 || x0 > n {
                return Err(Error::invalid(format!("site {x0} outside 1..={n}")));
            }
            let values = (0..grid.len()).map(|k| field.get(x0, k)).collect();
            Curve::new(grid.samples().to_vec(), values, format!("P(x={x0}, t)"))
        }
        SliceAxis::Diagonal => {
            let values = (1..=n)
                .map(|x| locate(x as f64).map(|k| field.get(x, k)))
                .collect::<Result<Vec<_>>>()?;
            Curve::unit_spaced(1.0, values, "P(x, t=x)")
        }
    }
}
