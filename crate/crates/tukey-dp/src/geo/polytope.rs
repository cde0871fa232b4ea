//! Convex polytopes carried in both vertex and halfspace representation.
//! Lower-dimensional (degenerate) bodies keep a synthesized exact H-rep so
//! that slicing and feasibility tests keep working; they report volume 0 and
//! width 0.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geo::clip::{shoelace, Body3, Mesh};
use crate::geo::halfspace::Halfspace;
use crate::geo::lp::{lp_solve, Sense};
use crate::geo::point::{affine_rank, cross3, dot, norm, scale, sub, Direction, Point, GEO_TOL};

#[derive(Clone, Debug, Serialize)]
pub struct Polytope {
    dim: usize,
    vertices: Vec<Point>,
    facets: Vec<Halfspace>,
    /// Facet vertex cycles, aligned with `facets`; populated at full rank d=3.
    faces: Vec<Vec<usize>>,
    rank: usize,
}

impl Polytope {
    pub fn interval1(lo: f64, hi: f64) -> Polytope {
        let rank = if hi - lo > GEO_TOL { 1 } else { 0 };
        Polytope {
            dim: 1,
            vertices: if rank == 1 {
                vec![Point::new(vec![lo]), Point::new(vec![hi])]
            } else {
                vec![Point::new(vec![lo])]
            },
            facets: vec![
                Halfspace::new(Direction::axis(0, 1), hi),
                Halfspace::new(Direction::axis(0, 1).negated(), -lo),
            ],
            faces: Vec::new(),
            rank,
        }
    }

    /// Builds from a CCW ring (or a degenerate 1-2 point cycle) at d=2.
    pub fn from_ring2(ring: Vec<[f64; 2]>) -> Polytope {
        let vecs: Vec<Vec<f64>> = ring.iter().map(|p| p.to_vec()).collect();
        let rank = affine_rank(&vecs, GEO_TOL);
        let vertices: Vec<Point> = ring.iter().map(|p| Point::new(p.to_vec())).collect();
        if rank == 2 {
            let mut facets = Vec::with_capacity(ring.len());
            for i in 0..ring.len() {
                let a = ring[i];
                let b = ring[(i + 1) % ring.len()];
                let e = [b[0] - a[0], b[1] - a[1]];
                // Outward normal of a CCW edge.
                if let Ok(n) = Direction::new(vec![e[1], -e[0]]) {
                    let off = n.dot(&a);
                    facets.push(Halfspace::new(n, off));
                }
            }
            Polytope {
                dim: 2,
                vertices,
                facets,
                faces: Vec::new(),
                rank,
            }
        } else {
            let facets = synth_degenerate_hrep(&vecs, 2);
            Polytope {
                dim: 2,
                vertices,
                facets,
                faces: Vec::new(),
                rank,
            }
        }
    }

    pub fn from_body3(body: Body3) -> Polytope {
        match body {
            Body3::Solid(mesh) => Polytope::from_mesh3(mesh),
            other => {
                let pts = other.vertices();
                let vecs: Vec<Vec<f64>> = pts.iter().map(|p| p.to_vec()).collect();
                let rank = affine_rank(&vecs, GEO_TOL);
                let facets = synth_degenerate_hrep(&vecs, 3);
                Polytope {
                    dim: 3,
                    vertices: pts.iter().map(|p| Point::new(p.to_vec())).collect(),
                    facets,
                    faces: Vec::new(),
                    rank,
                }
            }
        }
    }

    fn from_mesh3(mesh: Mesh) -> Polytope {
        let mut facets = Vec::with_capacity(mesh.faces.len());
        let mut faces = Vec::with_capacity(mesh.faces.len());
        for f in &mesh.faces {
            let n = crate::geo::clip::newell(f, &mesh.verts);
            let l = norm(&n);
            if l < GEO_TOL {
                continue;
            }
            let nd = Direction::new(n.to_vec()).expect("nonzero newell");
            // Offset from the face centroid for stability.
            let mut c = [0.0; 3];
            for &i in f {
                for k in 0..3 {
                    c[k] += mesh.verts[i][k] / f.len() as f64;
                }
            }
            let off = nd.dot(&c);
            facets.push(Halfspace::new(nd, off));
            faces.push(f.clone());
        }
        Polytope {
            dim: 3,
            vertices: mesh.verts.iter().map(|v| Point::new(v.to_vec())).collect(),
            facets,
            faces,
            rank: 3,
        }
    }

    /// Rebuild a polytope of dimension `dim` as the hull of arbitrary points.
    pub fn from_points(dim: usize, points: &[Vec<f64>]) -> Polytope {
        match dim {
            1 => {
                let lo = points.iter().map(|p| p[0]).fold(f64::INFINITY, f64::min);
                let hi = points.iter().map(|p| p[0]).fold(f64::NEG_INFINITY, f64::max);
                Polytope::interval1(lo, hi)
            }
            2 => {
                let pts2: Vec<[f64; 2]> = points.iter().map(|p| [p[0], p[1]]).collect();
                Polytope::from_ring2(crate::geo::hull::hull_ring2(&pts2))
            }
            3 => {
                let pts3: Vec<[f64; 3]> = points.iter().map(|p| [p[0], p[1], p[2]]).collect();
                if affine_rank(points, GEO_TOL) == 3 {
                    match crate::geo::hull::hull_mesh3(&pts3) {
                        Ok(mesh) => Polytope::from_mesh3(mesh),
                        Err(_) => Polytope::from_body3(Body3::from_points(pts3)),
                    }
                } else {
                    Polytope::from_body3(Body3::from_points(pts3))
                }
            }
            d => panic!("unsupported dimension {d}"),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn is_degenerate(&self) -> bool {
        self.rank < self.dim
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn facets(&self) -> &[Halfspace] {
        &self.facets
    }

    pub fn faces(&self) -> &[Vec<usize>] {
        &self.faces
    }

    pub fn contains(&self, x: &[f64], tol: f64) -> bool {
        self.facets.iter().all(|h| h.contains(x, tol))
    }

    /// Min/max of `<x, dir>` over the polytope (attained at vertices).
    pub fn extent(&self, dir: &[f64]) -> (f64, f64) {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for v in &self.vertices {
            let p = dot(v.coords(), dir);
            lo = lo.min(p);
            hi = hi.max(p);
        }
        (lo, hi)
    }

    pub fn centroid(&self) -> Point {
        let d = self.dim;
        let mut c = vec![0.0; d];
        for v in &self.vertices {
            for k in 0..d {
                c[k] += v[k] / self.vertices.len() as f64;
            }
        }
        Point::new(c)
    }

    /// Exact volume: shoelace at d=2, facet fan at d=3, length at d=1.
    /// Degenerate bodies report 0.
    pub fn volume(&self) -> Result<f64> {
        if self.dim > 3 {
            return Err(Error::UnsupportedDimension(self.dim));
        }
        if self.is_degenerate() {
            return Ok(0.0);
        }
        match self.dim {
            1 => Ok(self.vertices[1][0] - self.vertices[0][0]),
            2 => {
                let ring: Vec<[f64; 2]> = self.vertices.iter().map(|p| [p[0], p[1]]).collect();
                Ok(shoelace(&ring))
            }
            3 => {
                let verts: Vec<[f64; 3]> = self
                    .vertices
                    .iter()
                    .map(|p| [p[0], p[1], p[2]])
                    .collect();
                let mesh = Mesh {
                    verts,
                    faces: self.faces.clone(),
                };
                Ok(crate::geo::clip::mesh_volume(&mesh))
            }
            _ => unreachable!(),
        }
    }

    /// Max pairwise distance and an achieving vertex pair.
    pub fn diameter(&self) -> (f64, Point, Point) {
        if self.vertices.is_empty() {
            let origin = Point::new(vec![0.0; self.dim]);
            return (0.0, origin.clone(), origin);
        }
        let mut best = (0.0, 0, 0);
        for i in 0..self.vertices.len() {
            for j in i..self.vertices.len() {
                let d = self.vertices[i].dist(&self.vertices[j]);
                if d > best.0 {
                    best = (d, i, j);
                }
            }
        }
        (
            best.0,
            self.vertices[best.1].clone(),
            self.vertices[best.2].clone(),
        )
    }

    /// Exact width and a minimizing direction. d=2 scans edge normals; d=3
    /// scans facet normals and cross products of edge direction pairs, which
    /// is exact for polytopes.
    pub fn width(&self) -> (f64, Direction) {
        if self.rank == 0 {
            return (0.0, Direction::axis(0, self.dim));
        }
        if self.is_degenerate() {
            // Width 0 along any normal of the affine hull.
            let vecs: Vec<Vec<f64>> = self.vertices.iter().map(|v| v.coords().to_vec()).collect();
            return (0.0, hull_normal(&vecs, self.dim));
        }
        match self.dim {
            1 => (
                self.vertices[1][0] - self.vertices[0][0],
                Direction::axis(0, 1),
            ),
            2 => {
                let mut best: Option<(f64, Direction)> = None;
                for h in &self.facets {
                    let (lo, hi) = self.extent(h.normal.components());
                    let w = hi - lo;
                    if best.as_ref().map_or(true, |(bw, _)| w < *bw) {
                        best = Some((w, h.normal.clone()));
                    }
                }
                best.expect("full-rank polygon has facets")
            }
            3 => {
                let mut cands: Vec<Direction> = self.facets.iter().map(|h| h.normal.clone()).collect();
                let edges = self.edges();
                for i in 0..edges.len() {
                    for j in i + 1..edges.len() {
                        let c = cross3(&edges[i], &edges[j]);
                        if norm(&c) > GEO_TOL {
                            cands.push(Direction::new(c.to_vec()).unwrap());
                        }
                    }
                }
                let mut best: Option<(f64, Direction)> = None;
                for u in cands {
                    let (lo, hi) = self.extent(u.components());
                    let w = hi - lo;
                    if best.as_ref().map_or(true, |(bw, _)| w < *bw) {
                        best = Some((w, u));
                    }
                }
                best.expect("full-rank polytope has facets")
            }
            _ => unreachable!(),
        }
    }

    /// Unit edge direction vectors (d=3, full rank).
    fn edges(&self) -> Vec<[f64; 3]> {
        let mut seen: std::collections::HashSet<(usize, usize)> = Default::default();
        let mut out = Vec::new();
        for f in &self.faces {
            for k in 0..f.len() {
                let (i, j) = (f[k], f[(k + 1) % f.len()]);
                let key = if i < j { (i, j) } else { (j, i) };
                if seen.insert(key) {
                    let e = sub(self.vertices[j].coords(), self.vertices[i].coords());
                    let l = norm(&e);
                    if l > GEO_TOL {
                        out.push([e[0] / l, e[1] / l, e[2] / l]);
                    }
                }
            }
        }
        out
    }

    /// Largest inscribed ball via LP over the facet constraints.
    pub fn chebyshev_center(&self) -> Result<(Point, f64)> {
        let d = self.dim;
        // Variables (x, r): <a_i, x> + r <= b_i with unit a_i; maximize r.
        let mut rows: Vec<(Vec<f64>, f64)> = self
            .facets
            .iter()
            .map(|h| {
                let mut a = h.normal.components().to_vec();
                a.push(1.0);
                (a, h.offset)
            })
            .collect();
        let mut r_nonneg = vec![0.0; d];
        r_nonneg.push(-1.0);
        rows.push((r_nonneg, 0.0));
        let mut obj = vec![0.0; d];
        obj.push(1.0);
        let (r, x) = crate::geo::lp::solve_rows(&obj, &rows, Sense::Max)?;
        Ok((Point::new(x[..d].to_vec()), r.max(0.0)))
    }

    /// Largest `t >= 0` with `origin + t * dir` still inside; `None` when the
    /// origin is already outside. Unbounded rays return `f64::INFINITY`.
    pub fn ray_exit(&self, origin: &[f64], dir: &[f64], tol: f64) -> Option<f64> {
        if !self.contains(origin, tol) {
            return None;
        }
        let mut t = f64::INFINITY;
        for h in &self.facets {
            let a = h.normal.dot(dir);
            if a > GEO_TOL {
                t = t.min((h.offset - h.normal.dot(origin)) / a);
            }
        }
        Some(t.max(0.0))
    }

    /// Image under an invertible affine map, rebuilt as a hull.
    pub fn map_points(&self, f: impl Fn(&[f64]) -> Vec<f64>) -> Polytope {
        let pts: Vec<Vec<f64>> = self.vertices.iter().map(|v| f(v.coords())).collect();
        let dim = if pts.is_empty() { self.dim } else { pts[0].len() };
        Polytope::from_points(dim, &pts)
    }

    /// Exact image under an orthogonal map: vertices and halfspaces rotate,
    /// combinatorics stay put.
    pub fn rotate(&self, rot: &crate::geo::point::Rotation) -> Polytope {
        Polytope {
            dim: self.dim,
            vertices: self
                .vertices
                .iter()
                .map(|v| Point::new(rot.apply(v.coords())))
                .collect(),
            facets: self.facets.iter().map(|h| h.rotate(rot)).collect(),
            faces: self.faces.clone(),
            rank: self.rank,
        }
    }

    /// Intersection with `[0,1]^d`, rebuilt through the clipping engines.
    pub fn clip_to_unit_cube(&self) -> Polytope {
        match self.dim {
            1 => {
                let (lo, hi) = self.extent(&[1.0]);
                Polytope::interval1(lo.max(0.0), hi.min(1.0).max(lo.max(0.0)))
            }
            2 => {
                let mut ring: Vec<[f64; 2]> = self.vertices.iter().map(|v| [v[0], v[1]]).collect();
                for (n, b) in [
                    ([1.0, 0.0], 1.0),
                    ([-1.0, 0.0], 0.0),
                    ([0.0, 1.0], 1.0),
                    ([0.0, -1.0], 0.0),
                ] {
                    ring = crate::geo::clip::clip_polygon(&ring, n, b, GEO_TOL);
                }
                Polytope::from_ring2(ring)
            }
            3 => {
                let mut body = if self.rank == 3 {
                    Body3::Solid(Mesh {
                        verts: self.vertices.iter().map(|v| [v[0], v[1], v[2]]).collect(),
                        faces: self.faces.clone(),
                    })
                } else {
                    Body3::from_points(self.vertices.iter().map(|v| [v[0], v[1], v[2]]).collect())
                };
                for (n, b) in [
                    ([1.0, 0.0, 0.0], 1.0),
                    ([-1.0, 0.0, 0.0], 0.0),
                    ([0.0, 1.0, 0.0], 1.0),
                    ([0.0, -1.0, 0.0], 0.0),
                    ([0.0, 0.0, 1.0], 1.0),
                    ([0.0, 0.0, -1.0], 0.0),
                ] {
                    body = body.clip(n, b, GEO_TOL);
                }
                Polytope::from_body3(body)
            }
            _ => self.clone(),
        }
    }

    /// Min/max of coordinate `coord` over the slice fixing the first
    /// `prefix.len()` coordinates. Dispatches to exact geometric routes
    /// (vertex scan, facet interval arithmetic, mesh-edge crossings) and
    /// falls back to the LP otherwise; [`Polytope::slice_extent_lp`] is the
    /// reference the fast paths are tested against.
    pub fn slice_extent(&self, prefix: &[f64], coord: usize) -> Result<Option<(f64, f64)>> {
        let d = self.dim;
        let k = prefix.len();
        debug_assert!(coord >= k && coord < d);
        if self.vertices.is_empty() {
            return Ok(None);
        }
        if k == 0 {
            let mut dir = vec![0.0; d];
            dir[coord] = 1.0;
            return Ok(Some(self.extent(&dir)));
        }
        if k == d - 1 && coord == k {
            return Ok(self.slice_interval_1var(prefix));
        }
        if d == 3 && k == 1 && coord == 1 && self.rank == 3 {
            return Ok(self.slice_crossings_3d(prefix[0]));
        }
        self.slice_extent_lp(prefix, coord)
    }

    /// The LP route over the substituted facet system.
    pub fn slice_extent_lp(&self, prefix: &[f64], coord: usize) -> Result<Option<(f64, f64)>> {
        let d = self.dim;
        let k = prefix.len();
        if self.vertices.is_empty() {
            return Ok(None);
        }
        let rows: Vec<(Vec<f64>, f64)> = self
            .facets
            .iter()
            .map(|h| {
                let n = h.normal.components();
                let fixed: f64 = (0..k).map(|i| n[i] * prefix[i]).sum();
                (n[k..].to_vec(), h.offset - fixed)
            })
            .collect();
        let nvars = d - k;
        let mut obj = vec![0.0; nvars];
        obj[coord - k] = 1.0;
        let lo = match crate::geo::lp::solve_rows(&obj, &rows, Sense::Min) {
            Ok((v, _)) => v,
            Err(Error::Infeasible) => return Ok(None),
            Err(e) => return Err(e),
        };
        let hi = match crate::geo::lp::solve_rows(&obj, &rows, Sense::Max) {
            Ok((v, _)) => v,
            Err(Error::Infeasible) => return Ok(None),
            Err(e) => return Err(e),
        };
        Ok(Some((lo, hi)))
    }

    /// One free variable: pure interval arithmetic over the facets.
    fn slice_interval_1var(&self, prefix: &[f64]) -> Option<(f64, f64)> {
        let k = prefix.len();
        let mut lo = f64::NEG_INFINITY;
        let mut hi = f64::INFINITY;
        for h in &self.facets {
            let n = h.normal.components();
            let fixed: f64 = (0..k).map(|i| n[i] * prefix[i]).sum();
            let rhs = h.offset - fixed;
            let a = n[k];
            if a > GEO_TOL {
                hi = hi.min(rhs / a);
            } else if a < -GEO_TOL {
                lo = lo.max(rhs / a);
            } else if rhs < -GEO_TOL {
                return None;
            }
        }
        if !lo.is_finite() || !hi.is_finite() {
            // H-rep leaves the line unbounded; cannot happen for bounded
            // bodies, but refuse rather than report garbage.
            return None;
        }
        if lo > hi + GEO_TOL {
            return None;
        }
        if lo > hi {
            let mid = 0.5 * (lo + hi);
            return Some((mid, mid));
        }
        Some((lo, hi))
    }

    /// Two free variables over a full-rank mesh: intersect each edge with
    /// the slicing plane and track the extent of the second coordinate.
    fn slice_crossings_3d(&self, c: f64) -> Option<(f64, f64)> {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        let mut saw = false;
        let mut push = |y: f64| {
            lo = lo.min(y);
            hi = hi.max(y);
            saw = true;
        };
        for v in &self.vertices {
            if (v[0] - c).abs() <= GEO_TOL {
                push(v[1]);
            }
        }
        let mut seen: std::collections::HashSet<(usize, usize)> = Default::default();
        for f in &self.faces {
            for e in 0..f.len() {
                let (i, j) = (f[e], f[(e + 1) % f.len()]);
                let key = if i < j { (i, j) } else { (j, i) };
                if !seen.insert(key) {
                    continue;
                }
                let (a, b) = (&self.vertices[i], &self.vertices[j]);
                let (ea, eb) = (a[0] - c, b[0] - c);
                if (ea < -GEO_TOL && eb > GEO_TOL) || (ea > GEO_TOL && eb < -GEO_TOL) {
                    let t = ea / (ea - eb);
                    push(a[1] + t * (b[1] - a[1]));
                }
            }
        }
        if saw {
            Some((lo, hi))
        } else {
            None
        }
    }
}

/// LP-backed convenience wrapper around [`Polytope::chebyshev_center`].
pub fn chebyshev_center(p: &Polytope) -> Result<(Point, f64)> {
    p.chebyshev_center()
}

fn hull_normal(vecs: &[Vec<f64>], dim: usize) -> Direction {
    if vecs.len() < 2 {
        return Direction::axis(0, dim);
    }
    let base = &vecs[0];
    let mut basis: Vec<Vec<f64>> = Vec::new();
    for p in &vecs[1..] {
        let mut v = sub(p, base);
        for b in &basis {
            let c = dot(&v, b);
            v = sub(&v, &scale(b, c));
        }
        let n = norm(&v);
        if n > GEO_TOL {
            basis.push(scale(&v, 1.0 / n));
        }
    }
    // Any unit vector orthogonal to the affine hull.
    for i in 0..dim {
        let mut v = vec![0.0; dim];
        v[i] = 1.0;
        for b in &basis {
            let c = dot(&v, b);
            v = sub(&v, &scale(b, c));
        }
        if norm(&v) > 1e-6 {
            return Direction::new(v).unwrap();
        }
    }
    Direction::axis(0, dim)
}

/// Exact H-rep for a body of affine rank < d: plane pairs pinning the affine
/// hull plus in-span boundary halfspaces.
fn synth_degenerate_hrep(vecs: &[Vec<f64>], dim: usize) -> Vec<Halfspace> {
    if vecs.is_empty() {
        return Vec::new();
    }
    let base = vecs[0].clone();
    let mut span: Vec<Vec<f64>> = Vec::new();
    for p in &vecs[1..] {
        let mut v = sub(p, &base);
        for b in &span {
            let c = dot(&v, b);
            v = sub(&v, &scale(b, c));
        }
        let n = norm(&v);
        if n > GEO_TOL {
            span.push(scale(&v, 1.0 / n));
        }
    }
    let mut hs: Vec<Halfspace> = Vec::new();
    // Complement directions pin the affine hull exactly.
    for i in 0..dim {
        let mut v = vec![0.0; dim];
        v[i] = 1.0;
        for b in &span {
            let c = dot(&v, b);
            v = sub(&v, &scale(b, c));
        }
        for prev in hs.iter().map(|h| h.normal.components().to_vec()).collect::<Vec<_>>() {
            let c = dot(&v, &prev);
            v = sub(&v, &scale(&prev, c));
        }
        let n = norm(&v);
        if n > 1e-7 {
            let u = Direction::new(v).unwrap();
            let off = u.dot(&base);
            hs.push(Halfspace::new(u.clone(), off));
        }
    }
    let planes: Vec<Halfspace> = hs
        .iter()
        .flat_map(|h| {
            [
                h.clone(),
                Halfspace::new(h.normal.negated(), -h.offset),
            ]
        })
        .collect();
    let mut out = planes;
    // In-span boundary.
    match span.len() {
        0 => {}
        1 => {
            let u = Direction::new(span[0].clone()).unwrap();
            let (lo, hi) = vecs.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), p| {
                let t = u.dot(p);
                (l.min(t), h.max(t))
            });
            out.push(Halfspace::new(u.clone(), hi));
            out.push(Halfspace::new(u.negated(), -lo));
        }
        2 => {
            // Flat body in 3-space: edge fences from the in-plane hull.
            let proj: Vec<[f64; 2]> = vecs
                .iter()
                .map(|p| {
                    let r = sub(p, &base);
                    [dot(&r, &span[0]), dot(&r, &span[1])]
                })
                .collect();
            let ring = crate::geo::hull::hull_ring2(&proj);
            if ring.len() >= 3 {
                for i in 0..ring.len() {
                    let a = ring[i];
                    let b = ring[(i + 1) % ring.len()];
                    let e = [b[0] - a[0], b[1] - a[1]];
                    let n2 = [e[1], -e[0]];
                    let n3: Vec<f64> = (0..dim)
                        .map(|k| n2[0] * span[0][k] + n2[1] * span[1][k])
                        .collect();
                    if let Ok(u) = Direction::new(n3) {
                        let pt: Vec<f64> = (0..dim)
                            .map(|k| base[k] + a[0] * span[0][k] + a[1] * span[1][k])
                            .collect();
                        let off = u.dot(&pt);
                        out.push(Halfspace::new(u, off));
                    }
                }
            }
        }
        _ => {}
    }
    out
}

/// Optimal value and argument of a linear program over a polytope's facets.
pub fn lp_over(p: &Polytope, objective: &[f64], sense: Sense) -> Result<(f64, Point)> {
    lp_solve(objective, p.facets(), sense)
}
