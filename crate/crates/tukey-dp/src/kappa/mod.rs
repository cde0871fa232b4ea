//! Private selection of a depth whose region volume is stable: the
//! volume-ratio query `q_P(kappa)` and the Shifted Exponential Mechanism
//! (exponential-mechanism index choice plus additive discrete Laplace on
//! the index), which is pure epsilon-DP for `m >= 16/epsilon`.

use serde::Serialize;

use crate::dp::expmech::exp_mechanism_sample;
use crate::dp::noise::NoiseStream;
use crate::error::{Error, Result};
use crate::geo::point::Point;
use crate::tukey::region::{region_chain, RegionChain};
use crate::tukey::PointSet;

/// Largest outward reach `i` with `vol(D(kappa+i)) / vol(D(kappa-i)) >= 1/2`.
/// Volumes of empty regions are 0; a 0/0 ratio counts as satisfied (by
/// nesting a zero denominator with nonzero numerator cannot occur).
pub fn q_query(volumes: &[f64], kappa: usize, m: usize) -> usize {
    debug_assert!(kappa >= 1 && kappa <= m);
    let vol = |k: usize| {
        if k >= 1 && k <= volumes.len() {
            volumes[k - 1]
        } else {
            0.0
        }
    };
    let max_i = (kappa - 1).min(m - kappa);
    for i in (0..=max_i).rev() {
        let num = vol(kappa + i);
        let den = vol(kappa - i);
        let ok = if den == 0.0 { num == 0.0 } else { num / den >= 0.5 };
        if ok {
            return i;
        }
    }
    0
}

#[derive(Clone, Debug, Serialize)]
pub struct KappaQueryTable {
    pub m: usize,
    /// `vol(D_P(k))` for `k = 1..=m`; 0 past the chain.
    pub volumes: Vec<f64>,
    pub q: Vec<usize>,
}

impl KappaQueryTable {
    pub fn from_chain(chain: &RegionChain, m: usize) -> KappaQueryTable {
        let mut volumes = chain.volumes();
        volumes.resize(m, 0.0);
        volumes.truncate(m);
        let q = (1..=m).map(|k| q_query(&volumes, k, m)).collect();
        KappaQueryTable { m, volumes, q }
    }

    pub fn max_q(&self) -> usize {
        self.q.iter().copied().max().unwrap_or(0)
    }
}

/// Exponential weights `exp((eps/8) q)` over `[1, m]`, then an additive
/// discrete Laplace `DLap(8/eps)` shift. Output support is all integers;
/// callers clamp before downstream use. Requires `m >= 16/eps` (and the
/// privacy theorem wants `eps < 1`).
pub fn shifted_exp_mechanism(
    table: &KappaQueryTable,
    epsilon: f64,
    stream: &mut NoiseStream,
) -> Result<i64> {
    if !(epsilon > 0.0) {
        return Err(Error::InvalidParam("epsilon must be positive".into()));
    }
    if (table.m as f64) < 16.0 / epsilon {
        return Err(Error::MTooSmall {
            m: table.m,
            min: 16.0 / epsilon,
        });
    }
    let weights: Vec<f64> = table
        .q
        .iter()
        .map(|&q| (epsilon / 8.0 * q as f64).exp())
        .collect();
    let idx = exp_mechanism_sample(&weights, stream);
    let kappa = (idx + 1) as i64;
    let shift = stream.discrete_laplace(8.0 / epsilon);
    Ok(kappa + shift)
}

/// Exact output distribution of the mechanism over a window of integers;
/// test oracle for the analytic privacy check (the tail mass beyond the
/// window is provably below any tolerance once the window is wide enough).
pub fn output_distribution(table: &KappaQueryTable, epsilon: f64, window: i64) -> Vec<(i64, f64)> {
    let weights: Vec<f64> = table
        .q
        .iter()
        .map(|&q| (epsilon / 8.0 * q as f64).exp())
        .collect();
    let w_total: f64 = weights.iter().sum();
    let q_dl = (-epsilon / 8.0).exp();
    let dl_norm = (1.0 - q_dl) / (1.0 + q_dl);
    let mut out = Vec::new();
    for j in (1 - window)..=(table.m as i64 + window) {
        let mut p = 0.0;
        for (idx, w) in weights.iter().enumerate() {
            let kappa = (idx + 1) as i64;
            let shift = (j - kappa).unsigned_abs() as i32;
            p += w / w_total * dl_norm * q_dl.powi(shift);
        }
        out.push((j, p));
    }
    out
}

/// Non-private audit of the shifted sensitivity: builds both query tables
/// exactly and returns `max_kappa |q_P(kappa) - q_{P + x}(kappa + 1)|`.
pub fn q_sensitivity_audit(ps: &PointSet, x: &Point, m: usize) -> Result<usize> {
    let chain_p = region_chain(ps, m)?;
    let extended = ps.with_point(x.clone())?;
    let chain_q = region_chain(&extended, m + 1)?;
    let table_p = KappaQueryTable::from_chain(&chain_p, m);
    let table_q = KappaQueryTable::from_chain(&chain_q, m + 1);
    let mut worst = 0usize;
    for kappa in 1..m {
        let a = table_p.q[kappa - 1] as i64;
        let b = table_q.q[kappa] as i64;
        worst = worst.max((a - b).unsigned_abs() as usize);
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dp::noise::NoiseMode;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn q_is_zero_at_the_ends() {
        let volumes = vec![1.0, 0.9, 0.8, 0.7, 0.6];
        assert_eq!(q_query(&volumes, 1, 5), 0);
        assert_eq!(q_query(&volumes, 5, 5), 0);
    }

    #[test]
    fn constant_volumes_reach_the_range_limit() {
        let volumes = vec![1.0; 9];
        for kappa in 1..=9 {
            assert_eq!(q_query(&volumes, kappa, 9), (kappa - 1).min(9 - kappa));
        }
    }

    #[test]
    fn halving_volumes_give_zero() {
        let volumes: Vec<f64> = (1..=9).map(|k| 2.0_f64.powi(-k)).collect();
        // ratio over reach i is 2^{-2i} >= 1/2 only at i = 0.
        assert_eq!(q_query(&volumes, 5, 9), 0);
    }

    #[test]
    fn disabled_mechanism_is_argmax() {
        let table = KappaQueryTable {
            m: 20,
            volumes: vec![1.0; 20],
            q: {
                let mut q = vec![0usize; 20];
                q[7] = 5;
                q
            },
        };
        let mut s = NoiseMode::Disabled.stream(0);
        assert_eq!(shifted_exp_mechanism(&table, 0.9, &mut s).unwrap(), 8);
        // Uniform q: lowest index wins.
        let flat = KappaQueryTable {
            m: 20,
            volumes: vec![1.0; 20],
            q: vec![3; 20],
        };
        assert_eq!(shifted_exp_mechanism(&flat, 0.9, &mut s).unwrap(), 1);
    }

    #[test]
    fn m_too_small_rejected() {
        let table = KappaQueryTable {
            m: 10,
            volumes: vec![1.0; 10],
            q: vec![0; 10],
        };
        let mut s = NoiseMode::Disabled.stream(0);
        assert!(matches!(
            shifted_exp_mechanism(&table, 0.9, &mut s),
            Err(Error::MTooSmall { .. })
        ));
    }

    #[test]
    fn closed_form_matches_empirical_pmf() {
        // 6-point d=2 instance, m = 20, eps = 0.9.
        let pts = vec![
            Point::new(vec![0.0, 0.0]),
            Point::new(vec![1.0, 0.0]),
            Point::new(vec![1.0, 1.0]),
            Point::new(vec![0.0, 1.0]),
            Point::new(vec![0.5, 0.25]),
            Point::new(vec![0.25, 0.5]),
        ];
        let ps = PointSet::new(pts, 2, 8).unwrap();
        let chain = region_chain(&ps, 20).unwrap();
        let table = KappaQueryTable::from_chain(&chain, 20);
        let eps = 0.9;
        let exact = output_distribution(&table, eps, 80);
        let mut emp: std::collections::HashMap<i64, usize> = Default::default();
        let n = 1_000_000usize;
        let mut s = NoiseMode::Seeded(3).stream(0);
        for _ in 0..n {
            *emp.entry(shifted_exp_mechanism(&table, eps, &mut s).unwrap())
                .or_insert(0) += 1;
        }
        let mut tv = 0.0;
        for (j, p) in &exact {
            let e = emp.get(j).copied().unwrap_or(0) as f64 / n as f64;
            tv += (p - e).abs();
        }
        assert!(tv / 2.0 < 0.01, "tv {}", tv / 2.0);
    }

    #[test]
    fn audit_stays_below_one_on_random_neighbors() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for trial in 0..20 {
            let pts: Vec<Point> = (0..10)
                .map(|_| {
                    Point::new(vec![
                        (rng.gen::<f64>() * 256.0).round() / 256.0,
                        (rng.gen::<f64>() * 256.0).round() / 256.0,
                    ])
                })
                .collect();
            let ps = PointSet::new(pts, 2, 8).unwrap();
            let x = Point::new(vec![
                (rng.gen::<f64>() * 256.0).round() / 256.0,
                (rng.gen::<f64>() * 256.0).round() / 256.0,
            ]);
            let worst = q_sensitivity_audit(&ps, &x, 8).unwrap();
            assert!(worst <= 1, "trial {trial}: audit {worst}");
        }
    }

    #[test]
    fn table_invariants_on_real_chains() {
        let mut rng = ChaCha8Rng::seed_from_u64(55);
        for _ in 0..10 {
            let pts: Vec<Point> = (0..20)
                .map(|_| {
                    Point::new(vec![
                        (rng.gen::<f64>() * 256.0).round() / 256.0,
                        (rng.gen::<f64>() * 256.0).round() / 256.0,
                    ])
                })
                .collect();
            let ps = PointSet::new(pts, 2, 8).unwrap();
            let m = 10;
            let chain = region_chain(&ps, m).unwrap();
            let table = KappaQueryTable::from_chain(&chain, m);
            assert_eq!(table.q[0], 0);
            assert_eq!(table.q[m - 1], 0);
            // Unshifted adjacent sensitivity.
            for w in table.q.windows(2) {
                assert!((w[0] as i64 - w[1] as i64).abs() <= 1);
            }
        }
    }

    #[test]
    fn audit_handles_duplicate_point() {
        let pts = vec![
            Point::new(vec![0.0, 0.0]),
            Point::new(vec![1.0, 0.0]),
            Point::new(vec![1.0, 1.0]),
            Point::new(vec![0.0, 1.0]),
            Point::new(vec![0.5, 0.5]),
        ];
        let ps = PointSet::new(pts, 2, 8).unwrap();
        let dup = Point::new(vec![0.5, 0.5]);
        assert!(q_sensitivity_audit(&ps, &dup, 4).unwrap() <= 1);
        // m = 2: single comparable index.
        assert!(q_sensitivity_audit(&ps, &dup, 2).unwrap() <= 1);
    }
}
