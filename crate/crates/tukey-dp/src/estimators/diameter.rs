//! `DPTukeyDiam`: SVT over a shrinking length sequence. The query for a
//! length `l` asks for the best depth at which two points of that region are
//! `l` apart along some cover direction, i.e. the max over the cover of the
//! shifted-TDC maximum, which reduces to a span comparison per depth.

use crate::dp::budget::PrivacyBudget;
use crate::dp::noise::NoiseStream;
use crate::dp::svt::svt_run;
use crate::error::Result;
use crate::estimators::report::{svt_delta_depth, svt_margin, DpParams, EstimateReport};
use crate::geo::cover::angle_cover;
use crate::tukey::region::RegionChain;

/// Non-increasing span lengths per depth along one direction.
pub(crate) fn span_lengths(chain: &RegionChain, dir: &[f64]) -> Vec<f64> {
    chain.spans(dir).iter().map(|(lo, hi)| hi - lo).collect()
}

/// Deepest level whose span along the direction reaches `ell`; this is
/// `max_x ell-TDC` for the rotated data.
pub(crate) fn deepest_span_reaching(spans: &[f64], ell: f64) -> usize {
    spans.partition_point(|&s| s >= ell)
}

pub fn dp_diameter(
    chain: &RegionChain,
    params: &DpParams,
    budget: &mut PrivacyBudget,
    stream: &mut NoiseStream,
) -> Result<EstimateReport> {
    params.validate()?;
    let d = chain.dim();
    let alpha = params.alpha;
    let zeta = (alpha / 2.0).sqrt();
    let cover = angle_cover(zeta, d)?;
    let upsilon = params.upsilon as f64;
    let t = ((2.0 * upsilon + (d as f64).ln()) / alpha).ceil() as usize;
    let lengths: Vec<f64> = (0..=t)
        .map(|i| (d as f64).sqrt() * (1.0 - alpha / 2.0).powi(i as i32))
        .collect();

    let spans: Vec<Vec<f64>> = cover
        .directions
        .iter()
        .map(|v| span_lengths(chain, v.components()))
        .collect();
    let query = |i: usize| {
        spans
            .iter()
            .map(|s| deepest_span_reaching(s, lengths[i]))
            .max()
            .unwrap_or(0) as f64
    };

    let margin = svt_margin(params.epsilon, params.beta, (t + 2) as f64);
    let out = svt_run(
        lengths.len(),
        query,
        params.kappa as f64,
        params.epsilon,
        margin,
        stream,
    );
    budget.charge("dp_diameter", params.epsilon, 0.0)?;
    Ok(EstimateReport {
        value: out.halt.map_or(0.0, |i| lengths[i]),
        delta_depth: svt_delta_depth(params.epsilon, params.beta, (t + 2) as f64),
        margin: if params.mode.is_disabled() { 0.0 } else { margin },
        halt: out.halt,
        trace: out.noisy,
        epsilon: params.epsilon,
        delta: 0.0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dp::noise::NoiseMode;
    use crate::geo::point::Point;
    use crate::tukey::{region_chain, PointSet};

    fn square_chain() -> RegionChain {
        let pts = vec![
            Point::new(vec![0.0, 0.0]),
            Point::new(vec![1.0, 0.0]),
            Point::new(vec![1.0, 1.0]),
            Point::new(vec![0.0, 1.0]),
        ];
        region_chain(&PointSet::new(pts, 2, 8).unwrap(), 10).unwrap()
    }

    fn params(kappa: usize, alpha: f64) -> DpParams {
        DpParams {
            epsilon: 1.0,
            delta: 0.0,
            alpha,
            beta: 0.05,
            kappa,
            upsilon: 8,
            mode: NoiseMode::Disabled,
        }
    }

    #[test]
    fn disabled_square_diameter() {
        let chain = square_chain();
        let mut budget = PrivacyBudget::new();
        let mut s = NoiseMode::Disabled.stream(0);
        let rep = dp_diameter(&chain, &params(1, 0.1), &mut budget, &mut s).unwrap();
        let exact = 2.0_f64.sqrt();
        assert!(
            rep.value >= 0.9 * exact && rep.value <= exact,
            "value {} vs diameter {exact}",
            rep.value
        );
        assert_eq!(budget.entries().len(), 1);
        assert!((budget.epsilon_spent() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn disabled_singleton_region() {
        let chain = square_chain();
        let mut budget = PrivacyBudget::new();
        let mut s = NoiseMode::Disabled.stream(0);
        let rep = dp_diameter(&chain, &params(2, 0.1), &mut budget, &mut s).unwrap();
        // D(2) is a single point: either nothing registers (0) or only the
        // last, tiny length does.
        assert!(rep.value <= 1e-3, "value {}", rep.value);
    }

    #[test]
    fn cover_discretization_sandwiches_the_diameter() {
        // (1 - zeta^2) diam <= max over the cover of the directional span
        // <= diam, with zeta = sqrt(alpha/2).
        use rand::prelude::*;
        use rand_chacha::ChaCha8Rng;
        use crate::geo::hull::convex_hull;
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        for alpha in [0.1, 0.3] {
            let zeta = (alpha / 2.0_f64).sqrt();
            let cover = angle_cover(zeta, 2).unwrap();
            for _ in 0..20 {
                let pts: Vec<Point> = (0..9)
                    .map(|_| Point::new(vec![rng.gen(), rng.gen()]))
                    .collect();
                let Ok(hull) = convex_hull(&pts) else { continue };
                let diam = hull.diameter().0;
                let best = cover
                    .directions
                    .iter()
                    .map(|v| {
                        let (lo, hi) = hull.extent(v.components());
                        hi - lo
                    })
                    .fold(f64::NEG_INFINITY, f64::max);
                assert!(best <= diam + 1e-9);
                assert!(best >= (1.0 - zeta * zeta) * diam - 1e-9);
            }
        }
    }

    #[test]
    fn query_monotone_over_evaluated_prefix() {
        let chain = square_chain();
        let alpha = 0.2;
        let zeta = (alpha / 2.0_f64).sqrt();
        let cover = angle_cover(zeta, 2).unwrap();
        let spans: Vec<Vec<f64>> = cover
            .directions
            .iter()
            .map(|v| span_lengths(&chain, v.components()))
            .collect();
        let mut prev = 0;
        for i in 0..60 {
            let ell = 2.0_f64.sqrt() * (1.0 - alpha / 2.0).powi(i);
            let q = spans
                .iter()
                .map(|s| deepest_span_reaching(s, ell))
                .max()
                .unwrap();
            assert!(q >= prev, "lengths shrink, query must not drop");
            prev = q;
        }
    }
}
