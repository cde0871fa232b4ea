//! Post-processing measures of a kernel set: exact diameter, width, volume
//! and minimum enclosing ball of its convex hull. Post-processing only, no
//! privacy cost.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::Result;
use crate::geo::hull::convex_hull;
use crate::geo::point::{dot, norm, sub, Point};

#[derive(Clone, Debug, Serialize)]
pub struct Measures {
    pub diameter: f64,
    pub width: f64,
    pub volume: f64,
    pub meb_radius: f64,
    pub meb_center: Vec<f64>,
}

pub fn applied_measures(points: &[Point]) -> Result<Measures> {
    if points.is_empty() {
        return Ok(Measures {
            diameter: 0.0,
            width: 0.0,
            volume: 0.0,
            meb_radius: 0.0,
            meb_center: Vec::new(),
        });
    }
    let (center, radius) = min_enclosing_ball(points);
    match convex_hull(points) {
        Ok(hull) => Ok(Measures {
            diameter: hull.diameter().0,
            width: hull.width().0,
            volume: hull.volume().unwrap_or(0.0),
            meb_radius: radius,
            meb_center: center,
        }),
        Err(_) => {
            // Degenerate set: pairwise diameter, zero width and volume.
            let mut diameter = 0.0;
            for i in 0..points.len() {
                for j in i + 1..points.len() {
                    diameter = f64::max(diameter, points[i].dist(&points[j]));
                }
            }
            Ok(Measures {
                diameter,
                width: 0.0,
                volume: 0.0,
                meb_radius: radius,
                meb_center: center,
            })
        }
    }
}

/// Welzl's move-to-front scheme with a fixed shuffle seed, exact for
/// d <= 3. The boundary-pinned loops recurse at most d+1 deep.
pub fn min_enclosing_ball(points: &[Point]) -> (Vec<f64>, f64) {
    let d = points[0].dim();
    let mut pts: Vec<Vec<f64>> = points.iter().map(|p| p.coords().to_vec()).collect();
    pts.dedup();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    pts.shuffle(&mut rng);
    let mut support: Vec<Vec<f64>> = Vec::new();
    mtf_ball(&pts, &mut support, d)
}

fn mtf_ball(pts: &[Vec<f64>], support: &mut Vec<Vec<f64>>, d: usize) -> (Vec<f64>, f64) {
    let (mut c, mut r) = ball_of_support(support, d);
    if support.len() == d + 1 {
        return (c, r);
    }
    for i in 0..pts.len() {
        if norm(&sub(&pts[i], &c)) > r + 1e-9 {
            support.push(pts[i].clone());
            let b = mtf_ball(&pts[..i], support, d);
            support.pop();
            c = b.0;
            r = b.1;
        }
    }
    (c, r)
}

/// Smallest ball through all support points (their circumball restricted to
/// the affine span).
fn ball_of_support(support: &[Vec<f64>], d: usize) -> (Vec<f64>, f64) {
    match support.len() {
        0 => (vec![0.0; d], 0.0),
        1 => (support[0].clone(), 0.0),
        _ => {
            let base = &support[0];
            // Solve 2 (p_j - p_0) . c = |p_j|^2 - |p_0|^2 within the span.
            let dirs: Vec<Vec<f64>> = support[1..].iter().map(|p| sub(p, base)).collect();
            let k = dirs.len();
            let mut a = vec![vec![0.0; k]; k];
            let mut b = vec![0.0; k];
            for i in 0..k {
                for j in 0..k {
                    a[i][j] = 2.0 * dot(&dirs[i], &dirs[j]);
                }
                b[i] = dot(&dirs[i], &dirs[i]);
            }
            let coeffs = solve_dense(&mut a, &mut b);
            let mut c = base.clone();
            for (t, dir) in coeffs.iter().zip(&dirs) {
                for i in 0..d {
                    c[i] += t * dir[i];
                }
            }
            let r = norm(&sub(&c, base));
            (c, r)
        }
    }
}

fn solve_dense(a: &mut [Vec<f64>], b: &mut [f64]) -> Vec<f64> {
    let n = b.len();
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&i, &j| a[i][col].abs().partial_cmp(&a[j][col].abs()).unwrap())
            .unwrap();
        a.swap(col, pivot);
        b.swap(col, pivot);
        let p = a[col][col];
        if p.abs() < 1e-14 {
            continue;
        }
        for row in 0..n {
            if row != col {
                let f = a[row][col] / p;
                for k in col..n {
                    a[row][k] -= f * a[col][k];
                }
                b[row] -= f * b[col];
            }
        }
    }
    (0..n)
        .map(|i| {
            if a[i][i].abs() < 1e-14 {
                0.0
            } else {
                b[i] / a[i][i]
            }
        })
        .collect()
}
