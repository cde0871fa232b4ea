//! Non-private recursive bounding-box approximation: take a long segment
//! (within factor `gamma` of the diameter), extrude its projection interval,
//! and recurse on the projection orthogonal to it. The returned box bounds
//! the hull with volume at most `gamma^{d-1} d!` times the hull's.

use crate::error::{Error, Result};
use crate::geo::point::{affine_rank, dot, norm, sub, Direction, Point, Rotation};

use super::oriented::OrientedBox;

pub fn bbox_nonprivate(points: &[Point], gamma: f64) -> Result<OrientedBox> {
    if gamma < 1.0 {
        return Err(Error::InvalidParam("gamma must be at least 1".into()));
    }
    if points.is_empty() {
        return Err(Error::InvalidParam("empty point set".into()));
    }
    let d = points[0].dim();
    let vecs: Vec<Vec<f64>> = points.iter().map(|p| p.coords().to_vec()).collect();
    let rank = affine_rank(&vecs, 1e-9);
    if rank < d {
        return Err(Error::DegenerateInput { dim: d, rank });
    }
    // Current-space orthonormal embedding rows, in ambient coordinates.
    let mut embed: Vec<Vec<f64>> = (0..d)
        .map(|i| {
            let mut r = vec![0.0; d];
            r[i] = 1.0;
            r
        })
        .collect();
    let mut coords = vecs;
    let mut axes: Vec<Direction> = Vec::new();
    let mut intervals: Vec<(f64, f64)> = Vec::new();
    for level in (1..=d).rev() {
        // The exact diameter pair satisfies any gamma >= 1.
        let mut best = (0usize, 0usize, -1.0);
        for i in 0..coords.len() {
            for j in i + 1..coords.len() {
                let dist = norm(&sub(&coords[i], &coords[j]));
                if dist > best.2 {
                    best = (i, j, dist);
                }
            }
        }
        let u_cur: Vec<f64> = if best.2 > 1e-12 {
            sub(&coords[best.1], &coords[best.0])
                .iter()
                .map(|c| c / best.2)
                .collect()
        } else {
            let mut e = vec![0.0; level];
            e[0] = 1.0;
            e
        };
        let (lo, hi) = coords.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), p| {
            let t = dot(p, &u_cur);
            (l.min(t), h.max(t))
        });
        // Ambient axis for this level.
        let mut w = vec![0.0; d];
        for (c, row) in u_cur.iter().zip(&embed) {
            for k in 0..d {
                w[k] += c * row[k];
            }
        }
        axes.push(Direction::new(w)?);
        intervals.push((lo, hi));
        if level == 1 {
            break;
        }
        let rot = Rotation::to_first_axis(&Direction::new(u_cur)?);
        coords = coords.iter().map(|p| rot.apply(p)[1..].to_vec()).collect();
        // The complement rows of the rotation, pushed into ambient coords.
        embed = rot.rows()[1..]
            .iter()
            .map(|rrow| {
                let mut row = vec![0.0; d];
                for (c, erow) in rrow.iter().zip(&embed) {
                    for k in 0..d {
                        row[k] += c * erow[k];
                    }
                }
                row
            })
            .collect();
    }
    Ok(OrientedBox { axes, intervals })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geo::hull::convex_hull;

    fn pts(v: &[[f64; 2]]) -> Vec<Point> {
        v.iter().map(|p| Point::new(p.to_vec())).collect()
    }

    #[test]
    fn square_box_within_factorial_bound() {
        let p = pts(&[[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]]);
        let b = bbox_nonprivate(&p, 1.0).unwrap();
        assert!(b.axes_orthonormal(1e-9));
        for q in &p {
            assert!(b.contains(q.coords(), 1e-9));
        }
        let hull_area = convex_hull(&p).unwrap().volume().unwrap();
        assert!(b.volume() <= 1.0 * 2.0 * hull_area + 1e-9, "vol {}", b.volume());
    }

    #[test]
    fn rotated_square_keeps_bound_and_containment() {
        let c = 0.5;
        let r = 0.4;
        let rot: Vec<[f64; 2]> = (0..4)
            .map(|k| {
                let th = std::f64::consts::FRAC_PI_4 + k as f64 * std::f64::consts::FRAC_PI_2;
                [c + r * th.cos(), c + r * th.sin()]
            })
            .collect();
        let p = pts(&rot);
        let b = bbox_nonprivate(&p, 1.5).unwrap();
        for q in &p {
            assert!(b.contains(q.coords(), 1e-9));
        }
        let hull_area = convex_hull(&p).unwrap().volume().unwrap();
        assert!(b.volume() <= 1.5 * 2.0 * hull_area + 1e-9);
    }

    #[test]
    fn gamma_below_one_rejected() {
        let p = pts(&[[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]]);
        assert!(bbox_nonprivate(&p, 0.9).is_err());
    }
}
