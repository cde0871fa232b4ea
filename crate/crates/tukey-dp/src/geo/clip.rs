//! Halfspace clipping engines. Polygons at d=2, face meshes at d=3, with a
//! cascade of lower-rank bodies so that repeated clipping degrades gracefully
//! to flat polygons, segments and points instead of erroring.

use crate::geo::point::{affine_rank, cross3, dot, norm, scale, sub};

pub const CLIP_TOL: f64 = 1e-9;

/// Sutherland-Hodgman clip of a convex cycle by `{ x : <x,n> <= b }`.
/// Works for degenerate cycles of one or two vertices as well.
pub fn clip_polygon(poly: &[[f64; 2]], n: [f64; 2], b: f64, tol: f64) -> Vec<[f64; 2]> {
    if poly.is_empty() {
        return Vec::new();
    }
    let eval = |p: &[f64; 2]| p[0] * n[0] + p[1] * n[1] - b;
    let mut out: Vec<[f64; 2]> = Vec::with_capacity(poly.len() + 2);
    for i in 0..poly.len() {
        let a = poly[i];
        let c = poly[(i + 1) % poly.len()];
        let ea = eval(&a);
        let ec = eval(&c);
        let a_in = ea <= tol;
        let c_in = ec <= tol;
        if c_in {
            if !a_in {
                out.push(segment_crossing2(a, c, ea, ec));
            }
            out.push(c);
        } else if a_in && ea < -tol {
            out.push(segment_crossing2(a, c, ea, ec));
        }
    }
    dedup_cycle2(&mut out);
    out
}

fn segment_crossing2(a: [f64; 2], c: [f64; 2], ea: f64, ec: f64) -> [f64; 2] {
    let t = (ea / (ea - ec)).clamp(0.0, 1.0);
    [a[0] + t * (c[0] - a[0]), a[1] + t * (c[1] - a[1])]
}

pub fn dedup_cycle2(poly: &mut Vec<[f64; 2]>) {
    let mut out: Vec<[f64; 2]> = Vec::with_capacity(poly.len());
    for p in poly.iter() {
        if out
            .iter()
            .all(|q| (q[0] - p[0]).abs() > CLIP_TOL || (q[1] - p[1]).abs() > CLIP_TOL)
        {
            out.push(*p);
        }
    }
    *poly = out;
}

/// A closed convex face mesh: faces are vertex cycles oriented outward.
#[derive(Clone, Debug)]
pub struct Mesh {
    pub verts: Vec<[f64; 3]>,
    pub faces: Vec<Vec<usize>>,
}

impl Mesh {
    pub fn cube(lo: f64, hi: f64) -> Mesh {
        let v = |x: u8| -> [f64; 3] {
            [
                if x & 1 != 0 { hi } else { lo },
                if x & 2 != 0 { hi } else { lo },
                if x & 4 != 0 { hi } else { lo },
            ]
        };
        let verts: Vec<[f64; 3]> = (0..8).map(v).collect();
        // Outward-oriented quads.
        let faces = vec![
            vec![0, 2, 3, 1], // z = lo
            vec![4, 5, 7, 6], // z = hi
            vec![0, 1, 5, 4], // y = lo
            vec![2, 6, 7, 3], // y = hi
            vec![0, 4, 6, 2], // x = lo
            vec![1, 3, 7, 5], // x = hi
        ];
        Mesh { verts, faces }
    }
}

pub enum Clip3 {
    Unchanged,
    Solid(Mesh),
    /// Result lost full rank; the surviving vertex set is returned.
    Collapsed(Vec<[f64; 3]>),
    Empty,
}

/// Clips `mesh` by `{ x : <x,n> <= b }` (n unit).
pub fn clip_mesh(mesh: &Mesh, n: [f64; 3], b: f64, tol: f64) -> Clip3 {
    let evals: Vec<f64> = mesh.verts.iter().map(|v| dot(v, &n) - b).collect();
    if evals.iter().all(|&e| e <= tol) {
        return Clip3::Unchanged;
    }
    if evals.iter().all(|&e| e >= -tol) {
        let kept: Vec<[f64; 3]> = mesh
            .verts
            .iter()
            .zip(&evals)
            .filter(|(_, &e)| e <= tol)
            .map(|(v, _)| *v)
            .collect();
        return if kept.is_empty() {
            Clip3::Empty
        } else {
            Clip3::Collapsed(merge_close3(kept))
        };
    }

    // Proper cut: clip each face cycle, sharing crossing points per edge.
    let mut new_verts: Vec<[f64; 3]> = Vec::new();
    let mut old_map: Vec<Option<usize>> = vec![None; mesh.verts.len()];
    let mut crossing: std::collections::HashMap<(usize, usize), usize> = Default::default();
    let keep_old = |i: usize, nv: &mut Vec<[f64; 3]>, om: &mut Vec<Option<usize>>| -> usize {
        if let Some(k) = om[i] {
            k
        } else {
            nv.push(mesh.verts[i]);
            om[i] = Some(nv.len() - 1);
            nv.len() - 1
        }
    };

    let mut faces: Vec<Vec<usize>> = Vec::new();
    let mut cap_points: Vec<usize> = Vec::new();
    for face in &mesh.faces {
        let mut out: Vec<usize> = Vec::new();
        for k in 0..face.len() {
            let ia = face[k];
            let ic = face[(k + 1) % face.len()];
            let (ea, ec) = (evals[ia], evals[ic]);
            let a_in = ea <= tol;
            let c_in = ec <= tol;
            if c_in {
                if !a_in && ea > tol && ec < -tol {
                    let idx = *crossing.entry(edge_key(ia, ic)).or_insert_with(|| {
                        let t = ea / (ea - ec);
                        new_verts.push(lerp3(&mesh.verts[ia], &mesh.verts[ic], t));
                        new_verts.len() - 1
                    });
                    out.push(idx);
                    cap_points.push(idx);
                }
                let idx = keep_old(ic, &mut new_verts, &mut old_map);
                out.push(idx);
                if ec.abs() <= tol {
                    cap_points.push(idx);
                }
            } else if a_in && ea < -tol {
                let idx = *crossing.entry(edge_key(ia, ic)).or_insert_with(|| {
                    let t = ea / (ea - ec);
                    new_verts.push(lerp3(&mesh.verts[ia], &mesh.verts[ic], t));
                    new_verts.len() - 1
                });
                out.push(idx);
                cap_points.push(idx);
            }
        }
        dedup_cycle_idx(&mut out, &new_verts);
        if out.len() >= 3 {
            faces.push(out);
        }
    }

    // The section polygon closes the mesh along the clip plane.
    cap_points.sort_unstable();
    cap_points.dedup();
    if cap_points.len() >= 3 {
        let cap = order_cap(&cap_points, &new_verts, n);
        if cap.len() >= 3 {
            faces.push(cap);
        }
    }

    if new_verts.is_empty() {
        return Clip3::Empty;
    }
    let vert_vecs: Vec<Vec<f64>> = new_verts.iter().map(|v| v.to_vec()).collect();
    if affine_rank(&vert_vecs, 1e-8) < 3 || faces.len() < 4 {
        return Clip3::Collapsed(merge_close3(new_verts));
    }
    Clip3::Solid(compact_mesh(Mesh {
        verts: new_verts,
        faces,
    }))
}

fn edge_key(i: usize, j: usize) -> (usize, usize) {
    if i < j {
        (i, j)
    } else {
        (j, i)
    }
}

fn lerp3(a: &[f64; 3], b: &[f64; 3], t: f64) -> [f64; 3] {
    [
        a[0] + t * (b[0] - a[0]),
        a[1] + t * (b[1] - a[1]),
        a[2] + t * (b[2] - a[2]),
    ]
}

fn dedup_cycle_idx(cycle: &mut Vec<usize>, verts: &[[f64; 3]]) {
    let mut out: Vec<usize> = Vec::with_capacity(cycle.len());
    for &i in cycle.iter() {
        if out
            .iter()
            .all(|&j| i != j && norm(&sub(&verts[i], &verts[j])) > CLIP_TOL)
        {
            out.push(i);
        }
    }
    *cycle = out;
}

fn order_cap(points: &[usize], verts: &[[f64; 3]], n: [f64; 3]) -> Vec<usize> {
    let mut centroid = [0.0; 3];
    for &i in points {
        for k in 0..3 {
            centroid[k] += verts[i][k] / points.len() as f64;
        }
    }
    // In-plane basis.
    let pick = if n[0].abs() < 0.9 { [1.0, 0.0, 0.0] } else { [0.0, 1.0, 0.0] };
    let u0 = cross3(&n, &pick);
    let u = scale(&u0, 1.0 / norm(&u0));
    let v = cross3(&n, &u);
    let mut ordered: Vec<(f64, usize)> = points
        .iter()
        .map(|&i| {
            let r = sub(&verts[i], &centroid);
            (dot(&r, &v).atan2(dot(&r, &u)), i)
        })
        .collect();
    ordered.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    let cycle: Vec<usize> = ordered.into_iter().map(|(_, i)| i).collect();
    // Outward means the cycle's Newell normal points along +n.
    if dot(&newell(&cycle, verts), &n) < 0.0 {
        cycle.into_iter().rev().collect()
    } else {
        cycle
    }
}

pub fn newell(cycle: &[usize], verts: &[[f64; 3]]) -> [f64; 3] {
    let mut n = [0.0; 3];
    for k in 0..cycle.len() {
        let a = verts[cycle[k]];
        let b = verts[cycle[(k + 1) % cycle.len()]];
        n[0] += (a[1] - b[1]) * (a[2] + b[2]);
        n[1] += (a[2] - b[2]) * (a[0] + b[0]);
        n[2] += (a[0] - b[0]) * (a[1] + b[1]);
    }
    n
}

fn merge_close3(pts: Vec<[f64; 3]>) -> Vec<[f64; 3]> {
    let mut out: Vec<[f64; 3]> = Vec::with_capacity(pts.len());
    for p in pts {
        if out.iter().all(|q| norm(&sub(q, &p)) > CLIP_TOL) {
            out.push(p);
        }
    }
    out
}

/// Drops unreferenced vertices and renumbers faces.
fn compact_mesh(mesh: Mesh) -> Mesh {
    let mut used = vec![usize::MAX; mesh.verts.len()];
    let mut verts = Vec::new();
    let mut faces = Vec::with_capacity(mesh.faces.len());
    for f in &mesh.faces {
        let mut nf = Vec::with_capacity(f.len());
        for &i in f {
            if used[i] == usize::MAX {
                used[i] = verts.len();
                verts.push(mesh.verts[i]);
            }
            nf.push(used[i]);
        }
        faces.push(nf);
    }
    Mesh { verts, faces }
}

/// A planar convex region embedded in 3-space.
#[derive(Clone, Debug)]
pub struct FlatPoly {
    pub origin: [f64; 3],
    pub u: [f64; 3],
    pub v: [f64; 3],
    pub poly: Vec<[f64; 2]>,
}

impl FlatPoly {
    pub fn lift(&self, p: [f64; 2]) -> [f64; 3] {
        let mut out = self.origin;
        for k in 0..3 {
            out[k] += p[0] * self.u[k] + p[1] * self.v[k];
        }
        out
    }

    pub fn points3(&self) -> Vec<[f64; 3]> {
        self.poly.iter().map(|&p| self.lift(p)).collect()
    }

    pub fn plane_normal(&self) -> [f64; 3] {
        let n = cross3(&self.u, &self.v);
        let l = norm(&n);
        [n[0] / l, n[1] / l, n[2] / l]
    }
}

/// Rank cascade for 3-d bodies under repeated clipping.
#[derive(Clone, Debug)]
pub enum Body3 {
    Solid(Mesh),
    Flat(FlatPoly),
    Seg([f64; 3], [f64; 3]),
    Pt([f64; 3]),
    Empty,
}

impl Body3 {
    pub fn from_points(pts: Vec<[f64; 3]>) -> Body3 {
        let vert_vecs: Vec<Vec<f64>> = pts.iter().map(|v| v.to_vec()).collect();
        match affine_rank(&vert_vecs, 1e-8) {
            0 => {
                if pts.is_empty() {
                    Body3::Empty
                } else {
                    Body3::Pt(pts[0])
                }
            }
            1 => {
                // Farthest pair along the line.
                let mut best = (0usize, 0usize, -1.0);
                for i in 0..pts.len() {
                    for j in i + 1..pts.len() {
                        let d = norm(&sub(&pts[i], &pts[j]));
                        if d > best.2 {
                            best = (i, j, d);
                        }
                    }
                }
                Body3::Seg(pts[best.0], pts[best.1])
            }
            2 => {
                let origin = pts[0];
                let mut u = [0.0; 3];
                let mut best = -1.0;
                for p in &pts[1..] {
                    let d = norm(&sub(p, &origin));
                    if d > best {
                        best = d;
                        u = [p[0] - origin[0], p[1] - origin[1], p[2] - origin[2]];
                    }
                }
                let ul = norm(&u);
                let u = [u[0] / ul, u[1] / ul, u[2] / ul];
                let mut v = [0.0; 3];
                let mut best = -1.0;
                for p in &pts[1..] {
                    let r = sub(p, &origin);
                    let w = sub(&r, &scale(&u, dot(&r, &u)));
                    let d = norm(&w);
                    if d > best {
                        best = d;
                        v = [w[0], w[1], w[2]];
                    }
                }
                let vl = norm(&v);
                let v = [v[0] / vl, v[1] / vl, v[2] / vl];
                let proj: Vec<[f64; 2]> = pts
                    .iter()
                    .map(|p| {
                        let r = sub(p, &origin);
                        [dot(&r, &u), dot(&r, &v)]
                    })
                    .collect();
                let ring = crate::geo::hull::hull_ring2(&proj);
                Body3::Flat(FlatPoly {
                    origin,
                    u,
                    v,
                    poly: ring,
                })
            }
            _ => unreachable!("full-rank sets are built as meshes"),
        }
    }

    pub fn vertices(&self) -> Vec<[f64; 3]> {
        match self {
            Body3::Solid(m) => m.verts.clone(),
            Body3::Flat(f) => f.points3(),
            Body3::Seg(a, b) => vec![*a, *b],
            Body3::Pt(p) => vec![*p],
            Body3::Empty => vec![],
        }
    }

    pub fn clip(&self, n: [f64; 3], b: f64, tol: f64) -> Body3 {
        match self {
            Body3::Empty => Body3::Empty,
            Body3::Pt(p) => {
                if dot(p, &n) - b <= tol {
                    Body3::Pt(*p)
                } else {
                    Body3::Empty
                }
            }
            Body3::Seg(p, q) => {
                let (ep, eq) = (dot(p, &n) - b, dot(q, &n) - b);
                match (ep <= tol, eq <= tol) {
                    (true, true) => Body3::Seg(*p, *q),
                    (false, false) => Body3::Empty,
                    _ => {
                        let t = ep / (ep - eq);
                        let c = lerp3(p, q, t);
                        let kept = if ep <= tol { *p } else { *q };
                        if norm(&sub(&kept, &c)) <= CLIP_TOL {
                            Body3::Pt(kept)
                        } else {
                            Body3::Seg(kept, c)
                        }
                    }
                }
            }
            Body3::Flat(f) => {
                let n2 = [dot(&n, &f.u), dot(&n, &f.v)];
                let b2 = b - dot(&n, &f.origin);
                let l = (n2[0] * n2[0] + n2[1] * n2[1]).sqrt();
                if l < CLIP_TOL {
                    return if b2 >= -tol { self.clone() } else { Body3::Empty };
                }
                let clipped = clip_polygon(&f.poly, [n2[0] / l, n2[1] / l], b2 / l, tol);
                match clipped.len() {
                    0 => Body3::Empty,
                    _ => {
                        let pts: Vec<[f64; 3]> = clipped
                            .iter()
                            .map(|&p| f.lift(p))
                            .collect();
                        Body3::from_points(pts)
                    }
                }
            }
            Body3::Solid(m) => match clip_mesh(m, n, b, tol) {
                Clip3::Unchanged => self.clone(),
                Clip3::Solid(m2) => Body3::Solid(m2),
                Clip3::Collapsed(pts) => Body3::from_points(pts),
                Clip3::Empty => Body3::Empty,
            },
        }
    }

    pub fn is_empty(&self) -> bool {
        matches!(self, Body3::Empty)
    }
}

pub fn lerp2(a: [f64; 2], b: [f64; 2], t: f64) -> [f64; 2] {
    [a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])]
}

pub fn centroid2(poly: &[[f64; 2]]) -> [f64; 2] {
    let mut c = [0.0, 0.0];
    for p in poly {
        c[0] += p[0] / poly.len() as f64;
        c[1] += p[1] / poly.len() as f64;
    }
    c
}

pub fn shoelace(poly: &[[f64; 2]]) -> f64 {
    let mut s = 0.0;
    for i in 0..poly.len() {
        let a = poly[i];
        let b = poly[(i + 1) % poly.len()];
        s += a[0] * b[1] - b[0] * a[1];
    }
    s.abs() / 2.0
}

pub fn mesh_volume(mesh: &Mesh) -> f64 {
    let mut six_v = 0.0;
    for f in &mesh.faces {
        for k in 1..f.len() - 1 {
            let a = mesh.verts[f[0]];
            let b = mesh.verts[f[k]];
            let c = mesh.verts[f[k + 1]];
            six_v += dot(&a, &cross3(&b, &c));
        }
    }
    six_v.abs() / 6.0
}
