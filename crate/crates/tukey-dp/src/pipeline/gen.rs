//! Synthetic point-set families behind a name registry: uniform,
//! gaussian-clipped, ring, and the adversarial volatile-depth family whose
//! pivotal last point controls the width of the hull.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::geo::point::Point;
use crate::tukey::PointSet;

pub trait PointGenerator: Sync {
    fn name(&self) -> &'static str;
    fn generate(&self, n: usize, dim: usize, upsilon: u32, seed: u64) -> Result<PointSet>;
}

pub fn generators() -> Vec<Box<dyn PointGenerator>> {
    vec![
        Box::new(Uniform),
        Box::new(GaussianClipped),
        Box::new(Ring),
        Box::new(VolatileDepth),
    ]
}

pub fn generator_by_name(name: &str) -> Option<Box<dyn PointGenerator>> {
    generators().into_iter().find(|g| g.name() == name)
}

pub fn generator_names() -> Vec<&'static str> {
    generators().iter().map(|g| g.name()).collect()
}

fn snap(x: f64, upsilon: u32) -> f64 {
    let scale = 2.0_f64.powi(upsilon as i32);
    ((x.clamp(0.0, 1.0) * scale).round() / scale).clamp(0.0, 1.0)
}

fn check_n(n: usize, dim: usize) -> Result<()> {
    if n < dim + 1 {
        return Err(Error::InvalidParam(format!(
            "need at least d+1 = {} points, got {n}",
            dim + 1
        )));
    }
    Ok(())
}

pub struct Uniform;

impl PointGenerator for Uniform {
    fn name(&self) -> &'static str {
        "uniform"
    }

    fn generate(&self, n: usize, dim: usize, upsilon: u32, seed: u64) -> Result<PointSet> {
        check_n(n, dim)?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let pts = (0..n)
            .map(|_| Point::new((0..dim).map(|_| snap(rng.gen(), upsilon)).collect()))
            .collect();
        PointSet::new(pts, dim, upsilon)
    }
}

pub struct GaussianClipped;

impl PointGenerator for GaussianClipped {
    fn name(&self) -> &'static str {
        "gaussian-clipped"
    }

    fn generate(&self, n: usize, dim: usize, upsilon: u32, seed: u64) -> Result<PointSet> {
        check_n(n, dim)?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut normal = move || {
            // Box-Muller.
            let u1: f64 = rng.gen::<f64>().max(1e-12);
            let u2: f64 = rng.gen();
            (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
        };
        let pts = (0..n)
            .map(|_| {
                Point::new(
                    (0..dim)
                        .map(|_| snap(0.5 + 0.15 * normal(), upsilon))
                        .collect(),
                )
            })
            .collect();
        PointSet::new(pts, dim, upsilon)
    }
}

pub struct Ring;

impl PointGenerator for Ring {
    fn name(&self) -> &'static str {
        "ring"
    }

    fn generate(&self, n: usize, dim: usize, upsilon: u32, seed: u64) -> Result<PointSet> {
        check_n(n, dim)?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let pts = (0..n)
            .map(|_| {
                let r = 0.35 + 0.05 * (rng.gen::<f64>() - 0.5);
                let coords = match dim {
                    2 => {
                        let th = rng.gen::<f64>() * std::f64::consts::TAU;
                        vec![0.5 + r * th.cos(), 0.5 + r * th.sin()]
                    }
                    _ => {
                        let th = rng.gen::<f64>() * std::f64::consts::TAU;
                        let z = rng.gen::<f64>() * 2.0 - 1.0;
                        let s = (1.0 - z * z).sqrt();
                        vec![
                            0.5 + r * s * th.cos(),
                            0.5 + r * s * th.sin(),
                            0.5 + r * z,
                        ]
                    }
                };
                Point::new(coords.into_iter().map(|c| snap(c, upsilon)).collect())
            })
            .collect();
        PointSet::new(pts, dim, upsilon)
    }
}

/// A thin band plus one pivotal point far above it: removing the last point
/// collapses the width of the hull by a large factor.
pub struct VolatileDepth;

impl PointGenerator for VolatileDepth {
    fn name(&self) -> &'static str {
        "volatile-depth"
    }

    fn generate(&self, n: usize, dim: usize, upsilon: u32, seed: u64) -> Result<PointSet> {
        check_n(n.max(1) - 1, dim)?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let band = 2.0_f64.powi(-(upsilon.min(7) as i32));
        let mut pts: Vec<Point> = (0..n - 1)
            .map(|i| {
                let x = 0.1 + 0.8 * (i as f64 + rng.gen::<f64>()) / (n as f64);
                let off = if rng.gen::<bool>() { band } else { 0.0 };
                let mut coords = vec![snap(x, upsilon)];
                for _ in 1..dim - 1 {
                    coords.push(snap(0.3 + 0.4 * rng.gen::<f64>(), upsilon));
                }
                coords.push(snap(0.5 + off, upsilon));
                Point::new(coords)
            })
            .collect();
        let mut pivot = vec![0.5; dim];
        pivot[dim - 1] = snap(0.9, upsilon);
        pts.push(Point::new(pivot));
        PointSet::new(pts, dim, upsilon)
    }
}
