//! An oriented box: `d` orthonormal axes with a closed interval per axis.

use serde::Serialize;

use crate::geo::point::{dot, Direction};
use crate::geo::polytope::Polytope;

#[derive(Clone, Debug, Serialize)]
pub struct OrientedBox {
    pub axes: Vec<Direction>,
    pub intervals: Vec<(f64, f64)>,
}

impl OrientedBox {
    pub fn dim(&self) -> usize {
        self.axes.len()
    }

    pub fn volume(&self) -> f64 {
        self.intervals.iter().map(|(lo, hi)| (hi - lo).max(0.0)).product()
    }

    pub fn contains(&self, x: &[f64], tol: f64) -> bool {
        self.axes.iter().zip(&self.intervals).all(|(a, (lo, hi))| {
            let t = a.dot(x);
            t >= lo - tol && t <= hi + tol
        })
    }

    /// All `2^d` corners in ambient coordinates.
    pub fn corners(&self) -> Vec<Vec<f64>> {
        let d = self.dim();
        let mut out = Vec::with_capacity(1 << d);
        for mask in 0..(1usize << d) {
            let mut c = vec![0.0; d];
            for (j, (axis, (lo, hi))) in self.axes.iter().zip(&self.intervals).enumerate() {
                let t = if mask >> j & 1 == 1 { *hi } else { *lo };
                for k in 0..d {
                    c[k] += t * axis.components()[k];
                }
            }
            out.push(c);
        }
        out
    }

    pub fn to_polytope(&self) -> Polytope {
        let corners = self.corners();
        Polytope::from_points(self.dim(), &corners)
    }

    /// Box coordinates of an ambient point.
    pub fn coords_of(&self, x: &[f64]) -> Vec<f64> {
        self.axes.iter().map(|a| a.dot(x)).collect()
    }

    pub fn axis_matrix(&self) -> Vec<Vec<f64>> {
        self.axes.iter().map(|a| a.components().to_vec()).collect()
    }

    /// Sanity check: axes pairwise orthogonal within tolerance.
    pub fn axes_orthonormal(&self, tol: f64) -> bool {
        let d = self.dim();
        for i in 0..d {
            for j in 0..d {
                let want = if i == j { 1.0 } else { 0.0 };
                let got = dot(self.axes[i].components(), self.axes[j].components());
                if (got - want).abs() > tol {
                    return false;
                }
            }
        }
        true
    }
}
