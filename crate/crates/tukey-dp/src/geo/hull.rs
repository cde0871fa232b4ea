//! Convex hulls: monotone chain at d=2, incremental at d=3, plus halfspace
//! intersection built on the clipping engines.

use crate::error::{Error, Result};
use crate::geo::clip::{clip_polygon, Body3, Mesh, CLIP_TOL};
use crate::geo::halfspace::Halfspace;
use crate::geo::point::{affine_rank, cross3, dot, norm, sub, Point};
use crate::geo::polytope::Polytope;

/// CCW hull ring of a 2-d point set. Returns whatever rank the input has:
/// a single point, a two-point segment, or a proper CCW ring.
pub fn hull_ring2(points: &[[f64; 2]]) -> Vec<[f64; 2]> {
    let mut pts: Vec<[f64; 2]> = points.to_vec();
    pts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    pts.dedup_by(|a, b| (a[0] - b[0]).abs() <= CLIP_TOL && (a[1] - b[1]).abs() <= CLIP_TOL);
    if pts.len() <= 2 {
        return pts;
    }
    let cross = |o: &[f64; 2], a: &[f64; 2], b: &[f64; 2]| {
        (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
    };
    let mut lower: Vec<[f64; 2]> = Vec::new();
    for p in &pts {
        while lower.len() >= 2 && cross(&lower[lower.len() - 2], &lower[lower.len() - 1], p) <= CLIP_TOL {
            lower.pop();
        }
        lower.push(*p);
    }
    let mut upper: Vec<[f64; 2]> = Vec::new();
    for p in pts.iter().rev() {
        while upper.len() >= 2 && cross(&upper[upper.len() - 2], &upper[upper.len() - 1], p) <= CLIP_TOL {
            upper.pop();
        }
        upper.push(*p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    if lower.len() < 3 {
        // Collinear input collapsed by the turn filter.
        return vec![pts[0], pts[pts.len() - 1]];
    }
    lower
}

/// Exact convex hull with both representations.
/// Errors with `DegenerateInput` when the affine rank is below `d`.
pub fn convex_hull(points: &[Point]) -> Result<Polytope> {
    if points.is_empty() {
        return Err(Error::InvalidParam("empty point set".into()));
    }
    let d = points[0].dim();
    let vecs: Vec<Vec<f64>> = points.iter().map(|p| p.coords().to_vec()).collect();
    let rank = affine_rank(&vecs, CLIP_TOL);
    if rank < d {
        return Err(Error::DegenerateInput { dim: d, rank });
    }
    match d {
        1 => {
            let lo = vecs.iter().map(|v| v[0]).fold(f64::INFINITY, f64::min);
            let hi = vecs.iter().map(|v| v[0]).fold(f64::NEG_INFINITY, f64::max);
            Ok(Polytope::interval1(lo, hi))
        }
        2 => {
            let pts2: Vec<[f64; 2]> = vecs.iter().map(|v| [v[0], v[1]]).collect();
            Ok(Polytope::from_ring2(hull_ring2(&pts2)))
        }
        3 => {
            let pts3: Vec<[f64; 3]> = vecs.iter().map(|v| [v[0], v[1], v[2]]).collect();
            let mesh = hull_mesh3(&pts3)?;
            Ok(Polytope::from_body3(Body3::Solid(mesh)))
        }
        _ => Err(Error::UnsupportedDimension(d)),
    }
}

/// Incremental 3-d hull. Triangles first, then coplanar merge into facets.
pub fn hull_mesh3(points: &[[f64; 3]]) -> Result<Mesh> {
    let n = points.len();
    // Initial tetrahedron from 4 affinely independent points.
    let mut init: Vec<usize> = vec![0];
    for i in 1..n {
        let cand: Vec<Vec<f64>> = init
            .iter()
            .chain(std::iter::once(&i))
            .map(|&j| points[j].to_vec())
            .collect();
        if affine_rank(&cand, 1e-10) == cand.len() - 1 {
            init.push(i);
            if init.len() == 4 {
                break;
            }
        }
    }
    if init.len() < 4 {
        return Err(Error::DegenerateInput { dim: 3, rank: init.len() - 1 });
    }

    #[derive(Clone)]
    struct Tri {
        v: [usize; 3],
        n: [f64; 3],
        off: f64,
    }
    let mk_tri = |a: usize, b: usize, c: usize, inside: &[f64; 3]| -> Tri {
        let mut nrm = cross3(&sub(&points[b], &points[a]), &sub(&points[c], &points[a]));
        let l = norm(&nrm);
        nrm = [nrm[0] / l, nrm[1] / l, nrm[2] / l];
        let mut off = dot(&nrm, &points[a]);
        let mut v = [a, b, c];
        if dot(&nrm, inside) - off > 0.0 {
            nrm = [-nrm[0], -nrm[1], -nrm[2]];
            off = -off;
            v = [a, c, b];
        }
        Tri { v, n: nrm, off }
    };

    let centroid = {
        let mut c = [0.0; 3];
        for &i in &init {
            for k in 0..3 {
                c[k] += points[i][k] / 4.0;
            }
        }
        c
    };
    let mut tris: Vec<Tri> = vec![
        mk_tri(init[0], init[1], init[2], &centroid),
        mk_tri(init[0], init[1], init[3], &centroid),
        mk_tri(init[0], init[2], init[3], &centroid),
        mk_tri(init[1], init[2], init[3], &centroid),
    ];

    let mut hull_verts: Vec<usize> = init.clone();
    for p in 0..n {
        if init.contains(&p) {
            continue;
        }
        // Coplanar points count as visible so boundary points are not lost;
        // the facet pass below prunes any that are not extreme.
        let visible: Vec<usize> = (0..tris.len())
            .filter(|&t| dot(&tris[t].n, &points[p]) - tris[t].off > -1e-9)
            .collect();
        if visible.is_empty() || visible.len() == tris.len() {
            continue;
        }
        let vis_set: std::collections::HashSet<usize> = visible.iter().copied().collect();
        // Horizon = edges of visible triangles shared with an invisible one.
        let mut edge_count: std::collections::HashMap<(usize, usize), usize> = Default::default();
        let mut directed: std::collections::HashMap<(usize, usize), (usize, usize)> = Default::default();
        for &t in &visible {
            let v = tris[t].v;
            for e in [(v[0], v[1]), (v[1], v[2]), (v[2], v[0])] {
                let key = if e.0 < e.1 { (e.0, e.1) } else { (e.1, e.0) };
                *edge_count.entry(key).or_insert(0) += 1;
                directed.insert(key, e);
            }
        }
        let keep: Vec<Tri> = (0..tris.len())
            .filter(|t| !vis_set.contains(t))
            .map(|t| tris[t].clone())
            .collect();
        let mut inner = [0.0; 3];
        for &i in &hull_verts {
            for k in 0..3 {
                inner[k] += points[i][k] / hull_verts.len() as f64;
            }
        }
        tris = keep;
        // Deterministic horizon order keeps float summation reproducible.
        let mut horizon: Vec<(usize, usize)> = edge_count
            .iter()
            .filter(|(_, &c)| c == 1)
            .map(|(k, _)| *k)
            .collect();
        horizon.sort_unstable();
        for key in horizon {
            let (a, b) = directed[&key];
            let t = mk_tri(a, b, p, &inner);
            if t.n.iter().all(|c| c.is_finite()) {
                tris.push(t);
            }
        }
        hull_verts.push(p);
    }

    // Group triangles into planes (merge tolerance 1e-8), then rebuild each
    // facet as the 2-d hull of the on-plane vertices. This both orders the
    // cycle and drops points that sit on a facet without being extreme.
    let mut planes: Vec<([f64; 3], f64)> = Vec::new();
    for t in &tris {
        if !planes
            .iter()
            .any(|(n0, off0)| dot(n0, &t.n) > 1.0 - 1e-8 && (t.off - off0).abs() <= 1e-8)
        {
            planes.push((t.n, t.off));
        }
    }
    let mut cand: Vec<usize> = tris.iter().flat_map(|t| t.v).collect();
    cand.sort_unstable();
    cand.dedup();

    let mut facet_cycles: Vec<Vec<usize>> = Vec::with_capacity(planes.len());
    let mut used: Vec<usize> = Vec::new();
    for (n0, off0) in &planes {
        let on_plane: Vec<usize> = cand
            .iter()
            .copied()
            .filter(|&i| (dot(n0, &points[i]) - off0).abs() <= 1e-8)
            .collect();
        if on_plane.len() < 3 {
            continue;
        }
        let pick = if n0[0].abs() < 0.9 { [1.0, 0.0, 0.0] } else { [0.0, 1.0, 0.0] };
        let u0 = cross3(n0, &pick);
        let ul = norm(&u0);
        let u = [u0[0] / ul, u0[1] / ul, u0[2] / ul];
        let v = cross3(n0, &u);
        let proj: Vec<[f64; 2]> = on_plane
            .iter()
            .map(|&i| [dot(&points[i], &u), dot(&points[i], &v)])
            .collect();
        let ring = hull_ring2(&proj);
        if ring.len() < 3 {
            continue;
        }
        let mut cycle: Vec<usize> = ring
            .iter()
            .map(|r| {
                on_plane[proj
                    .iter()
                    .position(|p| (p[0] - r[0]).abs() <= 1e-9 && (p[1] - r[1]).abs() <= 1e-9)
                    .expect("ring vertex comes from the projection")]
            })
            .collect();
        if dot(&crate::geo::clip::newell(&cycle, points), n0) < 0.0 {
            cycle.reverse();
        }
        used.extend_from_slice(&cycle);
        facet_cycles.push(cycle);
    }
    used.sort_unstable();
    used.dedup();
    let remap: std::collections::HashMap<usize, usize> =
        used.iter().enumerate().map(|(k, &i)| (i, k)).collect();
    let verts: Vec<[f64; 3]> = used.iter().map(|&i| points[i]).collect();
    let faces: Vec<Vec<usize>> = facet_cycles
        .into_iter()
        .map(|c| c.into_iter().map(|i| remap[&i]).collect())
        .collect();
    Ok(Mesh { verts, faces })
}

/// Intersection of closed halfspaces. `Ok(None)` means empty;
/// `Err(Unbounded)` when the intersection escapes a huge sentinel box.
pub fn halfspace_intersection(constraints: &[Halfspace], dim: usize) -> Result<Option<Polytope>> {
    const BIG: f64 = 1e6;
    match dim {
        1 => {
            let (mut lo, mut hi) = (-BIG, BIG);
            for h in constraints {
                let a = h.normal.components()[0];
                if a > 0.0 {
                    hi = hi.min(h.offset / a);
                } else if a < 0.0 {
                    lo = lo.max(h.offset / a);
                }
            }
            if lo > hi + CLIP_TOL {
                return Ok(None);
            }
            if lo <= -BIG + 1.0 || hi >= BIG - 1.0 {
                return Err(Error::Unbounded);
            }
            Ok(Some(Polytope::interval1(lo, hi)))
        }
        2 => {
            let mut poly = vec![[-BIG, -BIG], [BIG, -BIG], [BIG, BIG], [-BIG, BIG]];
            for h in constraints {
                let n = h.normal.components();
                poly = clip_polygon(&poly, [n[0], n[1]], h.offset, CLIP_TOL);
                if poly.is_empty() {
                    return Ok(None);
                }
            }
            if poly.iter().any(|p| p[0].abs() >= BIG - 1.0 || p[1].abs() >= BIG - 1.0) {
                return Err(Error::Unbounded);
            }
            Ok(Some(Polytope::from_ring2(poly)))
        }
        3 => {
            let mut body = Body3::Solid(Mesh::cube(-BIG, BIG));
            for h in constraints {
                let n = h.normal.components();
                body = body.clip([n[0], n[1], n[2]], h.offset, CLIP_TOL);
                if body.is_empty() {
                    return Ok(None);
                }
            }
            if body
                .vertices()
                .iter()
                .any(|p| p.iter().any(|c| c.abs() >= BIG - 1.0))
            {
                return Err(Error::Unbounded);
            }
            Ok(Some(Polytope::from_body3(body)))
        }
        d => Err(Error::UnsupportedDimension(d)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geo::halfspace::box_halfspaces;
    use crate::geo::point::Direction;

    fn pts(v: &[[f64; 2]]) -> Vec<Point> {
        v.iter().map(|p| Point::new(p.to_vec())).collect()
    }

    #[test]
    fn hull_of_square_corners() {
        let p = pts(&[[0.0, 0.0], [1.0, 1.0], [0.0, 1.0], [1.0, 0.0]]);
        let h = convex_hull(&p).unwrap();
        assert_eq!(h.vertices().len(), 4);
        assert_eq!(h.facets().len(), 4);
        for q in &p {
            assert!(h.contains(q.coords(), 1e-9));
        }
    }

    #[test]
    fn hull_drops_interior_point() {
        let p = pts(&[[0.0, 0.0], [1.0, 1.0], [0.0, 1.0], [1.0, 0.0], [0.5, 0.5]]);
        let h = convex_hull(&p).unwrap();
        assert_eq!(h.vertices().len(), 4);
    }

    #[test]
    fn hull_collinear_errors() {
        let p = pts(&[[0.0, 0.0], [0.5, 0.5], [1.0, 1.0]]);
        assert!(matches!(
            convex_hull(&p),
            Err(Error::DegenerateInput { dim: 2, rank: 1 })
        ));
    }

    #[test]
    fn halfplanes_unit_square() {
        let h = halfspace_intersection(&box_halfspaces(0.0, 1.0, 2), 2)
            .unwrap()
            .unwrap();
        assert_eq!(h.vertices().len(), 4);
        assert!((h.volume().unwrap() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn halfplanes_infeasible() {
        let mut hs = box_halfspaces(0.0, 1.0, 2);
        hs.push(Halfspace::new(Direction::new(vec![1.0, 0.0]).unwrap(), -0.5));
        assert!(halfspace_intersection(&hs, 2).unwrap().is_none());
    }

    #[test]
    fn halfplanes_triangle() {
        let hs = vec![
            Halfspace::new(Direction::new(vec![0.0, -1.0]).unwrap(), 0.0),
            Halfspace::new(Direction::new(vec![-1.0, 1.0]).unwrap(), 0.0),
            Halfspace::new(Direction::new(vec![1.0, 1.0]).unwrap(), 2.0 / 2.0_f64.sqrt()),
        ];
        let p = halfspace_intersection(&hs, 2).unwrap().unwrap();
        assert_eq!(p.vertices().len(), 3);
    }

    #[test]
    fn halfplanes_unbounded() {
        let hs = vec![Halfspace::new(Direction::new(vec![1.0, 0.0]).unwrap(), 1.0)];
        assert!(matches!(halfspace_intersection(&hs, 2), Err(Error::Unbounded)));
    }

    #[test]
    fn hull3_unit_cube() {
        let mut p = Vec::new();
        for x in [0.0, 1.0] {
            for y in [0.0, 1.0] {
                for z in [0.0, 1.0] {
                    p.push(Point::new(vec![x, y, z]));
                }
            }
        }
        let h = convex_hull(&p).unwrap();
        assert_eq!(h.vertices().len(), 8);
        assert_eq!(h.facets().len(), 6);
        assert!((h.volume().unwrap() - 1.0).abs() < 1e-9);
    }
}
