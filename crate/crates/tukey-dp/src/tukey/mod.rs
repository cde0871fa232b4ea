//! Exact Tukey depth, Tukey-region chains, and the depth-completion (TDC)
//! machinery built on nested intervals.

pub mod depth;
pub mod region;
pub mod tdc;

pub use depth::tukey_depth;
pub use region::{region_chain, tukey_region, RegionChain};
pub use tdc::{tdc_precompute, LtdcProfile, NestedIntervals, UnimodalProfile};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geo::point::Point;

/// The sensitive input: `n` grid-aligned points in `[0,1]^d` whose
/// coordinates are multiples of `2^-grid_exponent`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PointSet {
    points: Vec<Point>,
    dim: usize,
    grid_exponent: u32,
}

impl PointSet {
    /// Validates range and grid alignment (snap tolerance 1e-12) and snaps
    /// coordinates onto the grid.
    pub fn new(points: Vec<Point>, dim: usize, grid_exponent: u32) -> Result<Self> {
        if !(2..=3).contains(&dim) {
            return Err(Error::UnsupportedDimension(dim));
        }
        if points.len() < dim + 1 {
            return Err(Error::InvalidParam(format!(
                "need at least d+1 = {} points, got {}",
                dim + 1,
                points.len()
            )));
        }
        let step = 2.0_f64.powi(-(grid_exponent as i32));
        let mut snapped = Vec::with_capacity(points.len());
        let mut bad_rows = Vec::new();
        for (row, p) in points.iter().enumerate() {
            if p.dim() != dim {
                return Err(Error::InvalidParam(format!(
                    "point {row} has dimension {}, expected {dim}",
                    p.dim()
                )));
            }
            let mut coords = Vec::with_capacity(dim);
            let mut ok = true;
            for &c in p.coords() {
                let snapped_c = (c / step).round() * step;
                if !(0.0..=1.0).contains(&c) || (c - snapped_c).abs() > 1e-12 {
                    ok = false;
                    break;
                }
                coords.push(snapped_c.clamp(0.0, 1.0));
            }
            if ok {
                snapped.push(Point::new(coords));
            } else {
                bad_rows.push(row);
            }
        }
        if !bad_rows.is_empty() {
            return Err(Error::OffGrid {
                upsilon: grid_exponent,
                rows: bad_rows,
            });
        }
        Ok(PointSet {
            points: snapped,
            dim,
            grid_exponent,
        })
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn grid_exponent(&self) -> u32 {
        self.grid_exponent
    }

    /// The same set with one extra point (neighboring dataset helper).
    pub fn with_point(&self, p: Point) -> Result<PointSet> {
        let mut pts = self.points.clone();
        pts.push(p);
        PointSet::new(pts, self.dim, self.grid_exponent)
    }
}
