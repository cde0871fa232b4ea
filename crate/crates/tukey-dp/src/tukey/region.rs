//! Tukey regions as halfspace intersections: `D_P(k)` is the intersection of
//! all closed halfspaces containing at least `n-k+1` points. Halfspaces are
//! enumerated once from hyperplanes through `d` points, bucketed by how many
//! points fall strictly outside, and the chain is built by incremental
//! clipping: `D_P(k+1) = D_P(k)` intersected with the count-`k` bucket.

use crate::error::{Error, Result};
use crate::geo::affine::AffineMap;
use crate::geo::clip::{clip_polygon, Body3, Mesh, CLIP_TOL};
use crate::geo::point::{cross3, dot, norm, sub, Direction, Rotation};
use crate::geo::polytope::Polytope;
use crate::tukey::PointSet;

/// One oriented halfspace candidate with its strictly-outside count.
struct OrientedCut {
    normal: Vec<f64>,
    offset: f64,
    outside: usize,
}

fn enumerate_cuts(ps: &PointSet) -> Vec<OrientedCut> {
    let pts = ps.points();
    let n = pts.len();
    let mut cuts = Vec::new();
    let mut push_plane = |normal: Vec<f64>, offset: f64| {
        let mut above = 0usize;
        let mut below = 0usize;
        for p in pts {
            let e = dot(&normal, p.coords()) - offset;
            if e > CLIP_TOL {
                above += 1;
            } else if e < -CLIP_TOL {
                below += 1;
            }
        }
        // Points on the plane count to the closed side of both orientations.
        cuts.push(OrientedCut {
            normal: normal.clone(),
            offset,
            outside: above,
        });
        cuts.push(OrientedCut {
            normal: normal.iter().map(|c| -c).collect(),
            offset: -offset,
            outside: below,
        });
    };
    match ps.dim() {
        2 => {
            for i in 0..n {
                for j in i + 1..n {
                    let e = sub(pts[j].coords(), pts[i].coords());
                    let l = norm(&e);
                    if l <= CLIP_TOL {
                        continue;
                    }
                    let normal = vec![e[1] / l, -e[0] / l];
                    let offset = dot(&normal, pts[i].coords());
                    push_plane(normal, offset);
                }
            }
        }
        3 => {
            for i in 0..n {
                for j in i + 1..n {
                    for k in j + 1..n {
                        let u = sub(pts[j].coords(), pts[i].coords());
                        let v = sub(pts[k].coords(), pts[i].coords());
                        let c = cross3(&u, &v);
                        let l = norm(&c);
                        if l <= CLIP_TOL {
                            continue;
                        }
                        let normal = vec![c[0] / l, c[1] / l, c[2] / l];
                        let offset = dot(&normal, pts[i].coords());
                        push_plane(normal, offset);
                    }
                }
            }
        }
        d => panic!("regions support d in {{2,3}}, got {d}"),
    }
    cuts
}

enum Body {
    Two(Vec<[f64; 2]>),
    Three(Body3),
}

impl Body {
    fn unit_cube(dim: usize) -> Body {
        match dim {
            2 => Body::Two(vec![[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]]),
            3 => Body::Three(Body3::Solid(Mesh::cube(0.0, 1.0))),
            _ => unreachable!(),
        }
    }

    fn clip(&mut self, normal: &[f64], offset: f64) {
        match self {
            Body::Two(poly) => {
                *poly = clip_polygon(poly, [normal[0], normal[1]], offset, CLIP_TOL);
            }
            Body::Three(body) => {
                *body = body.clip([normal[0], normal[1], normal[2]], offset, CLIP_TOL);
            }
        }
    }

    fn is_empty(&self) -> bool {
        match self {
            Body::Two(poly) => poly.is_empty(),
            Body::Three(body) => body.is_empty(),
        }
    }

    fn snapshot(&self) -> Polytope {
        match self {
            Body::Two(poly) => Polytope::from_ring2(poly.clone()),
            Body::Three(body) => Polytope::from_body3(body.clone()),
        }
    }
}

/// The nested family `D_P(1) .. D_P(kappa_max)`, memoized for reuse by every
/// private estimator. Immutable after construction and shareable.
#[derive(Clone, Debug)]
pub struct RegionChain {
    dim: usize,
    regions: Vec<Polytope>,
}

impl RegionChain {
    pub fn from_regions(dim: usize, regions: Vec<Polytope>) -> RegionChain {
        RegionChain { dim, regions }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Deepest non-empty level computed into the chain.
    pub fn kappa_max(&self) -> usize {
        self.regions.len()
    }

    pub fn region(&self, kappa: usize) -> Option<&Polytope> {
        if kappa == 0 {
            return None;
        }
        self.regions.get(kappa - 1)
    }

    pub fn regions(&self) -> &[Polytope] {
        &self.regions
    }

    /// Per-depth extents of `<x, dir>`; index `k-1` holds `D_P(k)`.
    pub fn spans(&self, dir: &[f64]) -> Vec<(f64, f64)> {
        self.regions.iter().map(|r| r.extent(dir)).collect()
    }

    pub fn volumes(&self) -> Vec<f64> {
        self.regions
            .iter()
            .map(|r| r.volume().unwrap_or(0.0))
            .collect()
    }

    /// Deepest level containing `x` (0 when outside `D_P(1)`).
    pub fn depth_of(&self, x: &[f64], tol: f64) -> usize {
        let mut depth = 0;
        for (i, r) in self.regions.iter().enumerate() {
            if r.contains(x, tol) {
                depth = i + 1;
            } else {
                break;
            }
        }
        depth
    }

    pub fn rotate(&self, rot: &Rotation) -> RegionChain {
        RegionChain {
            dim: self.dim,
            regions: self.regions.iter().map(|r| r.rotate(rot)).collect(),
        }
    }

    /// Projects every region onto the hyperplane orthogonal to `u` and
    /// re-hulls it one dimension down.
    pub fn project_orthogonal(&self, u: &Direction) -> RegionChain {
        let rot = Rotation::to_first_axis(u);
        let regions = self
            .regions
            .iter()
            .map(|r| {
                let pts: Vec<Vec<f64>> = r
                    .vertices()
                    .iter()
                    .map(|v| rot.apply(v.coords())[1..].to_vec())
                    .collect();
                Polytope::from_points(self.dim - 1, &pts)
            })
            .collect();
        RegionChain {
            dim: self.dim - 1,
            regions,
        }
    }

    /// Affine image of the chain, optionally clamped to `[0,1]^d`. Clamping
    /// a badly-scaled (noisy) box can empty regions; the chain truncates at
    /// the first empty image since nesting makes every deeper one empty too.
    pub fn transform(&self, map: &AffineMap, clamp_unit: bool) -> RegionChain {
        let mut regions = Vec::with_capacity(self.regions.len());
        for r in &self.regions {
            let mut p = r.map_points(|x| map.apply(x));
            if clamp_unit {
                p = p.clip_to_unit_cube();
            }
            if p.vertices().is_empty() {
                break;
            }
            regions.push(p);
        }
        RegionChain {
            dim: self.dim,
            regions,
        }
    }

    /// Truncates to the first `kappa_max` levels.
    pub fn truncate(&self, kappa_max: usize) -> RegionChain {
        RegionChain {
            dim: self.dim,
            regions: self.regions[..kappa_max.min(self.regions.len())].to_vec(),
        }
    }
}

/// Computes all non-empty regions up to `kappa_max` (capped at `n/2`).
pub fn region_chain(ps: &PointSet, kappa_max: usize) -> Result<RegionChain> {
    let dim = ps.dim();
    if kappa_max == 0 {
        return Ok(RegionChain {
            dim,
            regions: Vec::new(),
        });
    }
    let cuts = enumerate_cuts(ps);
    let hard_cap = kappa_max.min(ps.len() / 2);
    let mut buckets: Vec<Vec<&OrientedCut>> = vec![Vec::new(); hard_cap];
    for c in &cuts {
        if c.outside < hard_cap {
            buckets[c.outside].push(c);
        }
    }
    let mut body = Body::unit_cube(dim);
    let mut regions = Vec::new();
    for (idx, bucket) in buckets.iter().enumerate() {
        for cut in bucket {
            body.clip(&cut.normal, cut.offset);
            if body.is_empty() {
                break;
            }
        }
        if body.is_empty() {
            break;
        }
        let _ = idx;
        regions.push(body.snapshot());
    }
    Ok(RegionChain { dim, regions })
}

/// The single region `D_P(kappa)`; `None` when empty.
pub fn tukey_region(ps: &PointSet, kappa: usize) -> Result<Option<Polytope>> {
    if kappa == 0 {
        return Err(Error::InvalidParam("kappa must be at least 1".into()));
    }
    let chain = region_chain(ps, kappa)?;
    Ok(chain.region(kappa).cloned())
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::geo::point::Point;
    use crate::tukey::depth::tukey_depth;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    fn square_set() -> PointSet {
        let pts = vec![
            Point::new(vec![0.0, 0.0]),
            Point::new(vec![1.0, 0.0]),
            Point::new(vec![1.0, 1.0]),
            Point::new(vec![0.0, 1.0]),
        ];
        PointSet::new(pts, 2, 8).unwrap()
    }

    pub(crate) fn uniform_set(n: usize, dim: usize, seed: u64) -> PointSet {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let step = 2.0_f64.powi(-8);
        let pts: Vec<Point> = (0..n)
            .map(|_| {
                Point::new(
                    (0..dim)
                        .map(|_| ((rng.gen::<f64>() / step).round() * step).clamp(0.0, 1.0))
                        .collect(),
                )
            })
            .collect();
        PointSet::new(pts, dim, 8).unwrap()
    }

    #[test]
    fn region_one_is_convex_hull() {
        let r = tukey_region(&square_set(), 1).unwrap().unwrap();
        assert_eq!(r.vertices().len(), 4);
        assert!((r.volume().unwrap() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn region_beyond_half_is_empty() {
        assert!(tukey_region(&square_set(), 3).unwrap().is_none());
    }

    #[test]
    fn square_chain_has_center_at_depth_two() {
        let chain = region_chain(&square_set(), 10).unwrap();
        assert_eq!(chain.kappa_max(), 2);
        let d2 = chain.region(2).unwrap();
        assert!(d2.is_degenerate());
        for v in d2.vertices() {
            assert!((v[0] - 0.5).abs() < 1e-9 && (v[1] - 0.5).abs() < 1e-9);
        }
    }

    #[test]
    fn empty_chain_for_kappa_zero() {
        let chain = region_chain(&square_set(), 0).unwrap();
        assert_eq!(chain.kappa_max(), 0);
    }

    #[test]
    fn region_vertices_reach_declared_depth() {
        let ps = uniform_set(100, 2, 5);
        let chain = region_chain(&ps, 5).unwrap();
        let r = chain.region(5).unwrap();
        for v in r.vertices() {
            assert!(tukey_depth(v.coords(), ps.points()) >= 5);
        }
        // Points of depth below 5 lie outside.
        for p in ps.points() {
            if tukey_depth(p.coords(), ps.points()) < 5 {
                assert!(!r.contains(p.coords(), -1e-7));
            }
        }
    }

    #[test]
    fn region_vertices_reach_declared_depth_3d() {
        let ps = uniform_set(24, 3, 6);
        let chain = region_chain(&ps, 4).unwrap();
        for kappa in [2usize, 4] {
            if let Some(r) = chain.region(kappa) {
                for v in r.vertices() {
                    assert!(
                        tukey_depth(v.coords(), ps.points()) >= kappa,
                        "3-d duality broken at depth {kappa}"
                    );
                }
            }
        }
    }

    #[test]
    fn nesting_holds_on_random_sets() {
        for seed in [1u64, 2, 3] {
            let ps = uniform_set(50, 2, seed);
            let chain = region_chain(&ps, 25).unwrap();
            for k in 1..chain.kappa_max() {
                let outer = chain.region(k).unwrap();
                let inner = chain.region(k + 1).unwrap();
                for v in inner.vertices() {
                    assert!(outer.contains(v.coords(), 1e-7), "seed {seed} depth {k}");
                }
            }
        }
    }

    #[test]
    fn centerpoint_depth_is_reached() {
        for seed in [7u64, 8] {
            for (n, dim) in [(30usize, 2usize), (20, 3)] {
                let ps = uniform_set(n, dim, seed);
                let target = n.div_ceil(dim + 1);
                let chain = region_chain(&ps, target).unwrap();
                assert!(
                    chain.kappa_max() >= target,
                    "centerpoint depth {target} missing (n={n}, d={dim})"
                );
            }
        }
    }

    #[test]
    fn depth_sensitivity_under_one_extra_point() {
        let mut rng = ChaCha8Rng::seed_from_u64(40);
        for _ in 0..50 {
            let ps = uniform_set(20, 2, rng.gen());
            let x = [rng.gen::<f64>(), rng.gen::<f64>()];
            let y = Point::new(vec![
                (rng.gen::<f64>() * 256.0).round() / 256.0,
                (rng.gen::<f64>() * 256.0).round() / 256.0,
            ]);
            let before = tukey_depth(&x, ps.points());
            let after = tukey_depth(&x, ps.with_point(y).unwrap().points());
            assert!(after == before || after == before + 1);
        }
    }
}
