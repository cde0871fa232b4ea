use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const GEO_TOL: f64 = 1e-9;

/// A point in `R^d`. Inputs live in `[0,1]^d`; derived points are unrestricted.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Point(pub Vec<f64>);

impl Point {
    pub fn new(coords: Vec<f64>) -> Self {
        Point(coords)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    pub fn dist(&self, other: &Point) -> f64 {
        norm(&sub(&self.0, &other.0))
    }
}

impl std::ops::Index<usize> for Point {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

/// A unit vector of `S^{d-1}`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Direction(Vec<f64>);

impl Direction {
    /// Normalizes `comps`; errors on (near-)zero vectors.
    pub fn new(comps: Vec<f64>) -> Result<Self> {
        let n = norm(&comps);
        if !n.is_finite() || n < GEO_TOL {
            return Err(Error::InvalidParam("direction must be non-zero".into()));
        }
        Ok(Direction(comps.iter().map(|c| c / n).collect()))
    }

    /// The standard basis vector `e_i`.
    pub fn axis(i: usize, dim: usize) -> Self {
        let mut c = vec![0.0; dim];
        c[i] = 1.0;
        Direction(c)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn components(&self) -> &[f64] {
        &self.0
    }

    pub fn dot(&self, x: &[f64]) -> f64 {
        dot(&self.0, x)
    }

    pub fn negated(&self) -> Direction {
        Direction(self.0.iter().map(|c| -c).collect())
    }

    /// Angle to another unit vector, in `[0, pi]`.
    pub fn angle_to(&self, other: &Direction) -> f64 {
        dot(&self.0, &other.0).clamp(-1.0, 1.0).acos()
    }
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn add(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn scale(a: &[f64], s: f64) -> Vec<f64> {
    a.iter().map(|x| x * s).collect()
}

pub fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

pub fn cross3(a: &[f64], b: &[f64]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

/// Affine rank of a point set (dimension of its affine hull), with tolerance.
pub fn affine_rank(points: &[Vec<f64>], tol: f64) -> usize {
    if points.len() <= 1 {
        return 0;
    }
    let base = &points[0];
    let mut basis: Vec<Vec<f64>> = Vec::new();
    for p in &points[1..] {
        let mut v = sub(p, base);
        for b in &basis {
            let c = dot(&v, b);
            v = sub(&v, &scale(b, c));
        }
        let n = norm(&v);
        if n > tol {
            basis.push(scale(&v, 1.0 / n));
            if basis.len() == base.len() {
                break;
            }
        }
    }
    basis.len()
}

/// An orthogonal map stored as its rows; `apply(x) = R x`.
#[derive(Clone, Debug)]
pub struct Rotation {
    rows: Vec<Vec<f64>>,
}

impl Rotation {
    /// Builds an orthogonal `R` with `R v = e_1`, so the first coordinate of
    /// `R x` is `<x, v>` for every `x`.
    pub fn to_first_axis(v: &Direction) -> Rotation {
        let d = v.dim();
        let mut rows: Vec<Vec<f64>> = vec![v.components().to_vec()];
        // Complete with Gram-Schmidt over the standard basis, least-aligned first.
        let mut order: Vec<usize> = (0..d).collect();
        order.sort_by(|&i, &j| {
            v.components()[i]
                .abs()
                .partial_cmp(&v.components()[j].abs())
                .unwrap()
        });
        for &i in &order {
            if rows.len() == d {
                break;
            }
            let mut w = vec![0.0; d];
            w[i] = 1.0;
            for r in &rows {
                let c = dot(&w, r);
                w = sub(&w, &scale(r, c));
            }
            let n = norm(&w);
            if n > 1e-7 {
                rows.push(scale(&w, 1.0 / n));
            }
        }
        debug_assert_eq!(rows.len(), d);
        Rotation { rows }
    }

    pub fn identity(d: usize) -> Rotation {
        Rotation {
            rows: (0..d)
                .map(|i| {
                    let mut r = vec![0.0; d];
                    r[i] = 1.0;
                    r
                })
                .collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }

    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        self.rows.iter().map(|r| dot(r, x)).collect()
    }

    /// Applies the transpose, which inverts an orthogonal map.
    pub fn apply_inverse(&self, y: &[f64]) -> Vec<f64> {
        let d = self.dim();
        let mut x = vec![0.0; d];
        for (ri, r) in self.rows.iter().enumerate() {
            for (j, c) in r.iter().enumerate() {
                x[j] += c * y[ri];
            }
        }
        x
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn rotation_identity_for_e1() {
        let r = Rotation::to_first_axis(&Direction::axis(0, 2));
        let x = [0.3, -0.7];
        let y = r.apply(&x);
        assert!((y[0] - 0.3).abs() < 1e-12 && (y[1] + 0.7).abs() < 1e-12);
    }

    #[test]
    fn rotation_maps_e2_to_e1() {
        let r = Rotation::to_first_axis(&Direction::axis(1, 2));
        let y = r.apply(&[0.0, 1.0]);
        assert!((y[0] - 1.0).abs() < 1e-9 && y[1].abs() < 1e-9);
    }

    #[test]
    fn rotation_first_coordinate_is_projection() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for d in [2usize, 3] {
            for _ in 0..100 {
                let v = Direction::new((0..d).map(|_| rng.gen::<f64>() - 0.5).collect()).unwrap();
                let r = Rotation::to_first_axis(&v);
                let x: Vec<f64> = (0..d).map(|_| rng.gen::<f64>() * 2.0 - 1.0).collect();
                let y = r.apply(&x);
                assert!((y[0] - v.dot(&x)).abs() < 1e-9);
                assert!((norm(&y) - norm(&x)).abs() < 1e-9, "not orthogonal");
                let back = r.apply_inverse(&y);
                for i in 0..d {
                    assert!((back[i] - x[i]).abs() < 1e-9);
                }
            }
        }
    }

    #[test]
    fn affine_rank_detects_collinear() {
        let pts = vec![vec![0.0, 0.0], vec![0.5, 0.5], vec![1.0, 1.0]];
        assert_eq!(affine_rank(&pts, 1e-9), 1);
    }
}
