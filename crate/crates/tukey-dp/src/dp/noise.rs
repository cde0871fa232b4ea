//! Seedable, splittable randomness for the mechanisms. `Disabled` mode makes
//! every draw return 0 (and zeroes SVT margins downstream), collapsing each
//! private algorithm to its exact analogue for testing. It voids privacy.

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum NoiseMode {
    Seeded(u64),
    Disabled,
}

impl NoiseMode {
    pub fn is_disabled(&self) -> bool {
        matches!(self, NoiseMode::Disabled)
    }

    /// Opens the numbered root stream of this mode.
    pub fn stream(&self, id: u64) -> NoiseStream {
        match self {
            NoiseMode::Disabled => NoiseStream::Disabled,
            NoiseMode::Seeded(seed) => {
                let mut rng = ChaCha8Rng::seed_from_u64(*seed);
                rng.set_stream(id);
                NoiseStream::Rng(rng)
            }
        }
    }
}

/// One independent randomness stream. Mechanisms take a stream explicitly so
/// parallel invocations never share state.
#[derive(Clone, Debug)]
pub enum NoiseStream {
    Disabled,
    Rng(ChaCha8Rng),
}

impl NoiseStream {
    pub fn is_disabled(&self) -> bool {
        matches!(self, NoiseStream::Disabled)
    }

    /// Derives an independent child stream.
    pub fn split(&mut self, tag: u64) -> NoiseStream {
        match self {
            NoiseStream::Disabled => NoiseStream::Disabled,
            NoiseStream::Rng(rng) => {
                let mut child = ChaCha8Rng::seed_from_u64(rng.next_u64() ^ tag.wrapping_mul(0x9E37_79B9_7F4A_7C15));
                child.set_stream(tag);
                NoiseStream::Rng(child)
            }
        }
    }

    pub fn uniform(&mut self) -> f64 {
        match self {
            NoiseStream::Disabled => 0.5,
            NoiseStream::Rng(rng) => rng.gen::<f64>(),
        }
    }

    /// Laplace(scale) by inverse CDF; exactly 0 when disabled.
    pub fn laplace(&mut self, scale: f64) -> f64 {
        match self {
            NoiseStream::Disabled => 0.0,
            NoiseStream::Rng(rng) => {
                let u: f64 = rng.gen::<f64>() - 0.5;
                -scale * u.signum() * (1.0 - 2.0 * u.abs()).ln()
            }
        }
    }

    /// Discrete Laplace with `Pr[X = i]` proportional to `exp(-|i|/b)`,
    /// sampled as the difference of two geometrics.
    pub fn discrete_laplace(&mut self, b: f64) -> i64 {
        match self {
            NoiseStream::Disabled => 0,
            NoiseStream::Rng(rng) => {
                let q = (-1.0 / b).exp();
                let geom = |rng: &mut ChaCha8Rng| -> i64 {
                    let u: f64 = rng.gen::<f64>();
                    // floor(ln u / ln q), support {0, 1, 2, ...}
                    (u.ln() / q.ln()).floor() as i64
                };
                geom(rng) - geom(rng)
            }
        }
    }
}

/// Laplace sampler as a standalone operation.
pub fn sample_laplace(scale: f64, stream: &mut NoiseStream) -> f64 {
    stream.laplace(scale)
}

/// Discrete Laplace sampler as a standalone operation.
pub fn sample_discrete_laplace(b: f64, stream: &mut NoiseStream) -> i64 {
    stream.discrete_laplace(b)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn disabled_draws_are_zero() {
        let mut s = NoiseMode::Disabled.stream(0);
        assert_eq!(sample_laplace(1.0, &mut s), 0.0);
        assert_eq!(sample_discrete_laplace(8.0, &mut s), 0);
    }

    #[test]
    fn same_seed_same_draw() {
        let mut s1 = NoiseMode::Seeded(42).stream(7);
        let mut s2 = NoiseMode::Seeded(42).stream(7);
        for _ in 0..10 {
            assert_eq!(sample_laplace(2.0, &mut s1), sample_laplace(2.0, &mut s2));
        }
        let mut s3 = NoiseMode::Seeded(42).stream(8);
        assert_ne!(sample_laplace(2.0, &mut s1), sample_laplace(2.0, &mut s3));
    }

    #[test]
    fn laplace_moments() {
        let mut s = NoiseMode::Seeded(1).stream(0);
        let n = 1_000_000;
        let mut sum = 0.0;
        let mut sumsq = 0.0;
        for _ in 0..n {
            let x = sample_laplace(1.0, &mut s);
            sum += x;
            sumsq += x * x;
        }
        let mean = sum / n as f64;
        let var = sumsq / n as f64 - mean * mean;
        assert!(mean.abs() < 0.01, "mean {mean}");
        assert!((1.9..=2.1).contains(&var), "var {var}");
    }

    #[test]
    fn discrete_laplace_pmf() {
        // Pr[X=0] = (1-q)/(1+q) for q = e^{-1/b}; b = 8/eps with eps = 1.
        let b = 8.0;
        let q = (-1.0_f64 / b).exp();
        let p0 = (1.0 - q) / (1.0 + q);
        let mut s = NoiseMode::Seeded(2).stream(0);
        let n = 1_000_000;
        let mut zero = 0usize;
        let mut counts = std::collections::HashMap::new();
        for _ in 0..n {
            let x = sample_discrete_laplace(b, &mut s);
            if x == 0 {
                zero += 1;
            }
            *counts.entry(x).or_insert(0usize) += 1;
        }
        let emp0 = zero as f64 / n as f64;
        assert!((emp0 - p0).abs() < 0.005, "emp {emp0} vs {p0}");

        // Total variation against the exact two-sided geometric pmf.
        let mut tv = 0.0;
        for i in -200i64..=200 {
            let p = p0 * q.powi(i.unsigned_abs() as i32);
            let e = counts.get(&i).copied().unwrap_or(0) as f64 / n as f64;
            tv += (p - e).abs();
        }
        assert!(tv / 2.0 < 0.01, "tv {}", tv / 2.0);
    }
}
