use serde::Serialize;

use crate::geo::point::{Direction, Rotation, GEO_TOL};

/// The closed halfspace `{ x : <x, normal> <= offset }`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Halfspace {
    pub normal: Direction,
    pub offset: f64,
}

impl Halfspace {
    pub fn new(normal: Direction, offset: f64) -> Self {
        Halfspace { normal, offset }
    }

    /// Signed slack `<x, n> - b`; non-positive inside.
    pub fn eval(&self, x: &[f64]) -> f64 {
        self.normal.dot(x) - self.offset
    }

    pub fn contains(&self, x: &[f64], tol: f64) -> bool {
        self.eval(x) <= tol
    }

    /// Image under `y = R x`: `{ y : <y, R n> <= b }`.
    pub fn rotate(&self, r: &Rotation) -> Halfspace {
        let n = r.apply(self.normal.components());
        Halfspace {
            normal: Direction::new(n).expect("rotation preserves norm"),
            offset: self.offset,
        }
    }
}

/// Axis-aligned box `[lo, hi]^d` as `2d` halfspaces.
pub fn box_halfspaces(lo: f64, hi: f64, dim: usize) -> Vec<Halfspace> {
    let mut hs = Vec::with_capacity(2 * dim);
    for i in 0..dim {
        hs.push(Halfspace::new(Direction::axis(i, dim), hi));
        hs.push(Halfspace::new(Direction::axis(i, dim).negated(), -lo));
    }
    hs
}

pub fn dedup_tol() -> f64 {
    GEO_TOL
}
