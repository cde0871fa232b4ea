//! Exact Tukey depth. The minimum over directions of the closed-halfspace
//! count is computed by a dimension reduction: candidate axes are normals to
//! hyperplanes spanned by difference vectors, and the points falling on a
//! candidate hyperplane are resolved recursively inside it. This is the
//! angular sweep at d=2 and a projective sweep at d=3, in one recursion.

use crate::geo::point::{cross3, dot, norm, scale, sub, Point};

const DEPTH_TOL: f64 = 1e-9;

/// `TD(x, P) = min_u |{p in P : <p, u> <= <x, u>}|`.
pub fn tukey_depth(x: &[f64], points: &[Point]) -> usize {
    let diffs: Vec<Vec<f64>> = points.iter().map(|p| sub(p.coords(), x)).collect();
    depth_of_diffs(&diffs)
}

fn depth_of_diffs(diffs: &[Vec<f64>]) -> usize {
    if diffs.is_empty() {
        return 0;
    }
    let dim = diffs[0].len();
    // Coincident points score on every closed side.
    let zeros = diffs.iter().filter(|v| norm(v) <= DEPTH_TOL).count();
    let live: Vec<&Vec<f64>> = diffs.iter().filter(|v| norm(v) > DEPTH_TOL).collect();
    if live.is_empty() {
        return zeros;
    }
    if dim == 1 {
        let neg = live.iter().filter(|v| v[0] < 0.0).count();
        let pos = live.len() - neg;
        return zeros + neg.min(pos);
    }

    // Drop to the span when the difference vectors are not full rank.
    let basis = orthon_basis(&live);
    if basis.len() < dim {
        let reduced: Vec<Vec<f64>> = live
            .iter()
            .map(|v| basis.iter().map(|b| dot(v, b)).collect())
            .collect();
        if basis.is_empty() {
            return zeros + live.len();
        }
        return zeros + depth_of_diffs(&reduced);
    }

    let mut candidates: Vec<Vec<f64>> = Vec::new();
    match dim {
        2 => {
            for v in &live {
                candidates.push(vec![-v[1], v[0]]);
            }
        }
        3 => {
            for i in 0..live.len() {
                for j in i + 1..live.len() {
                    let c = cross3(live[i], live[j]);
                    if norm(&c) > DEPTH_TOL {
                        candidates.push(c.to_vec());
                    }
                }
            }
        }
        d => panic!("tukey_depth supports d in {{1, 2, 3}}, got {d}"),
    }

    let mut best = usize::MAX;
    for cand in &candidates {
        let scale_inv = 1.0 / norm(cand);
        let u: Vec<f64> = scale(cand, scale_inv);
        for sign in [1.0, -1.0] {
            let mut neg = 0usize;
            let mut on_plane: Vec<Vec<f64>> = Vec::new();
            for v in &live {
                let s = sign * dot(&u, v);
                if s < -DEPTH_TOL {
                    neg += 1;
                } else if s <= DEPTH_TOL {
                    on_plane.push((*v).clone());
                }
            }
            if neg >= best {
                continue;
            }
            let sub_value = if on_plane.is_empty() {
                0
            } else {
                // Resolve the on-plane points inside the hyperplane.
                let normal = scale(&u, sign);
                let plane_basis = complement_basis(&normal);
                let reduced: Vec<Vec<f64>> = on_plane
                    .iter()
                    .map(|v| plane_basis.iter().map(|b| dot(v, b)).collect())
                    .collect();
                depth_of_diffs(&reduced)
            };
            best = best.min(neg + sub_value);
        }
    }
    zeros + best
}

fn orthon_basis(vecs: &[&Vec<f64>]) -> Vec<Vec<f64>> {
    let mut basis: Vec<Vec<f64>> = Vec::new();
    for v in vecs {
        let mut w = (*v).clone();
        for b in &basis {
            let c = dot(&w, b);
            w = sub(&w, &scale(b, c));
        }
        let n = norm(&w);
        if n > DEPTH_TOL {
            basis.push(scale(&w, 1.0 / n));
            if basis.len() == v.len() {
                break;
            }
        }
    }
    basis
}

fn complement_basis(normal: &[f64]) -> Vec<Vec<f64>> {
    let dim = normal.len();
    let mut basis = vec![normal.to_vec()];
    for i in 0..dim {
        let mut w = vec![0.0; dim];
        w[i] = 1.0;
        for b in &basis {
            let c = dot(&w, b);
            w = sub(&w, &scale(b, c));
        }
        let n = norm(&w);
        if n > 1e-7 {
            basis.push(scale(&w, 1.0 / n));
        }
        if basis.len() == dim {
            break;
        }
    }
    basis[1..].to_vec()
}
