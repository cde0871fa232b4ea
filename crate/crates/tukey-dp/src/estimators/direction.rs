//! Large-depth direction scan: walks a direction list in order and returns
//! the first one whose prescribed projection value can be completed to a
//! deep point, under an SVT-style noisy test with a shared threshold draw
//! `X ~ Lap(3/eps)` sampled once before the loop, mirroring the diameter
//! estimator's SVT pattern. Charges a single epsilon.

use crate::dp::budget::PrivacyBudget;
use crate::dp::noise::NoiseStream;
use crate::dp::svt::svt_run;
use crate::error::Result;
use crate::estimators::report::{DpParams, EstimateReport};
use crate::geo::point::{Direction, Point};
use crate::tukey::region::RegionChain;
use crate::tukey::tdc::{directional_intervals, UnimodalProfile};

/// Depth-shift guarantee `12 ln((|V|+1)/beta) / epsilon`.
pub fn delta_large_tdc_dir(epsilon: f64, beta: f64, n_dirs: usize) -> f64 {
    12.0 * ((n_dirs as f64 + 1.0) / beta).ln() / epsilon
}

pub fn dp_large_tdc_direction(
    chain: &RegionChain,
    params: &DpParams,
    dirs: &[Direction],
    p: &Point,
    lambda: f64,
    budget: &mut PrivacyBudget,
    stream: &mut NoiseStream,
) -> Result<(Option<Direction>, EstimateReport)> {
    params.validate()?;
    let t = dirs.len();
    // The halting test uses 6 ln((T+1)/beta)/eps with T = |V|.
    let margin = 6.0 * ((t as f64 + 1.0) / params.beta).ln() / params.epsilon;
    let query = |i: usize| {
        let v = &dirs[i];
        let x = v.dot(p.coords()) + lambda;
        directional_intervals(chain, v.components()).value_at(x) as f64
    };
    let out = svt_run(t, query, params.kappa as f64, params.epsilon, margin, stream);
    budget.charge("dp_large_tdc_direction", params.epsilon, 0.0)?;
    let found = out.halt.map(|i| dirs[i].clone());
    Ok((
        found,
        EstimateReport {
            value: lambda,
            delta_depth: delta_large_tdc_dir(params.epsilon, params.beta, t),
            margin: if params.mode.is_disabled() { 0.0 } else { margin },
            halt: out.halt,
            trace: out.noisy,
            epsilon: params.epsilon,
            delta: 0.0,
        },
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dp::noise::NoiseMode;
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

    fn params(kappa: usize) -> DpParams {
        DpParams {
            epsilon: 1.0,
            delta: 0.0,
            alpha: 0.1,
            beta: 0.05,
            kappa,
            upsilon: 8,
            mode: NoiseMode::Disabled,
        }
    }

    fn axes() -> Vec<Direction> {
        vec![Direction::axis(0, 2), Direction::axis(1, 2)]
    }

    #[test]
    fn finds_first_feasible_direction() {
        let chain = square_chain();
        let mut budget = PrivacyBudget::new();
        let mut s = NoiseMode::Disabled.stream(0);
        let (found, _) = dp_large_tdc_direction(
            &chain,
            &params(1),
            &axes(),
            &Point::new(vec![0.5, 0.5]),
            0.5,
            &mut budget,
            &mut s,
        )
        .unwrap();
        let v = found.expect("x = 1.0 slice holds a depth-1 point");
        assert_eq!(v.components(), &[1.0, 0.0]);
    }

    #[test]
    fn infeasible_offset_returns_bottom() {
        let chain = square_chain();
        let mut budget = PrivacyBudget::new();
        let mut s = NoiseMode::Disabled.stream(0);
        let (found, rep) = dp_large_tdc_direction(
            &chain,
            &params(1),
            &axes(),
            &Point::new(vec![0.5, 0.5]),
            10.0,
            &mut budget,
            &mut s,
        )
        .unwrap();
        assert!(found.is_none());
        assert!(rep.halt.is_none());
    }

    #[test]
    fn zero_offset_takes_first_direction() {
        let chain = square_chain();
        let mut budget = PrivacyBudget::new();
        let mut s = NoiseMode::Disabled.stream(0);
        let (found, _) = dp_large_tdc_direction(
            &chain,
            &params(1),
            &axes(),
            &Point::new(vec![0.5, 0.5]),
            0.0,
            &mut budget,
            &mut s,
        )
        .unwrap();
        assert_eq!(found.unwrap().components(), &[1.0, 0.0]);
    }
}
