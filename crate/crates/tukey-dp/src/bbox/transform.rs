//! Fattening transforms: the affine map carrying an oriented box to the
//! unit hypercube. Under the comparable-volumes premise this turns the
//! region into an absolutely fat body; the clamped variant additionally
//! intersects images with the hypercube so the whole chain stays in domain.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geo::affine::AffineMap;
use crate::tukey::region::RegionChain;

use super::oriented::OrientedBox;

#[derive(Clone, Debug, Serialize)]
pub struct FatteningTransform {
    pub forward: AffineMap,
    pub inverse: AffineMap,
    /// The clamped variant caps images at the hypercube.
    pub clamped: bool,
}

impl FatteningTransform {
    pub fn apply_chain(&self, chain: &RegionChain) -> RegionChain {
        chain.transform(&self.forward, self.clamped)
    }

    pub fn pull_back(&self, x: &[f64]) -> Vec<f64> {
        self.inverse.apply(x)
    }
}

/// Absolute-fatness constant `2 d 5^d d!` guaranteed by the clamped
/// transform on good volume pairs.
pub fn fattening_abs_fat_constant(dim: usize) -> f64 {
    2.0 * dim as f64
        * 5.0_f64.powi(dim as i32)
        * crate::kernel::fatness::factorial(dim)
}

/// Builds the map sending `bbox` to `[0,1]^d` (per-axis rotation, scaling
/// and shift) together with its exact inverse.
pub fn fattening_transform(bbox: &OrientedBox, clamped: bool) -> Result<FatteningTransform> {
    let d = bbox.dim();
    if !bbox.axes_orthonormal(1e-7) {
        return Err(Error::InvalidParam("box axes must be orthonormal".into()));
    }
    let mut linear = Vec::with_capacity(d);
    let mut shift = Vec::with_capacity(d);
    let mut lens = Vec::with_capacity(d);
    for (axis, (lo, hi)) in bbox.axes.iter().zip(&bbox.intervals) {
        let len = (hi - lo).max(1e-12);
        lens.push(len);
        linear.push(axis.components().iter().map(|c| c / len).collect::<Vec<f64>>());
        shift.push(-lo / len);
    }
    let forward = AffineMap { linear, shift };
    // Inverse: x = sum_j (lo_j + y_j len_j) axis_j.
    let mut inv_linear = vec![vec![0.0; d]; d];
    let mut inv_shift = vec![0.0; d];
    for (j, (axis, (lo, _))) in bbox.axes.iter().zip(&bbox.intervals).enumerate() {
        for k in 0..d {
            inv_linear[k][j] = lens[j] * axis.components()[k];
            inv_shift[k] += lo * axis.components()[k];
        }
    }
    Ok(FatteningTransform {
        forward,
        inverse: AffineMap {
            linear: inv_linear,
            shift: inv_shift,
        },
        clamped,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geo::point::Direction;

    fn axis_box(intervals: Vec<(f64, f64)>) -> OrientedBox {
        let d = intervals.len();
        OrientedBox {
            axes: (0..d).map(|i| Direction::axis(i, d)).collect(),
            intervals,
        }
    }

    #[test]
    fn unit_box_gives_identity() {
        let t = fattening_transform(&axis_box(vec![(0.0, 1.0), (0.0, 1.0)]), false).unwrap();
        assert!(t.forward.is_identity(1e-12));
    }

    #[test]
    fn rectangular_box_round_trips() {
        let t = fattening_transform(&axis_box(vec![(0.0, 2.0), (0.0, 1.0)]), false).unwrap();
        let y = t.forward.apply(&[2.0, 1.0]);
        assert!((y[0] - 1.0).abs() < 1e-12 && (y[1] - 1.0).abs() < 1e-12);
        for x in [[0.3, 0.9], [1.7, 0.1], [-0.4, 2.0]] {
            let back = t.inverse.apply(&t.forward.apply(&x));
            assert!((back[0] - x[0]).abs() < 1e-7 && (back[1] - x[1]).abs() < 1e-7);
        }
    }

    #[test]
    fn rotated_box_round_trips() {
        let s = 2.0_f64.sqrt() / 2.0;
        let b = OrientedBox {
            axes: vec![
                Direction::new(vec![s, s]).unwrap(),
                Direction::new(vec![-s, s]).unwrap(),
            ],
            intervals: vec![(0.0, 1.0), (-0.5, 0.5)],
        };
        let t = fattening_transform(&b, true).unwrap();
        for c in b.corners() {
            let y = t.forward.apply(&c);
            // Corners map into [0,1]^d.
            assert!(y.iter().all(|v| (-1e-9..=1.0 + 1e-9).contains(v)));
            let back = t.inverse.apply(&y);
            assert!((back[0] - c[0]).abs() < 1e-7 && (back[1] - c[1]).abs() < 1e-7);
        }
    }
}
