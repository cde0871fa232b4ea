//! Private interior points: sequential TDC maximization over prefixes
//! (DPPointInTukeyRegion) and the pair-at-prescribed-separation variant.

use crate::dp::budget::PrivacyBudget;
use crate::dp::noise::NoiseStream;
use crate::dp::qc::{dp_binary_search_qc, SearchGrid};
use crate::error::{Error, Result};
use crate::estimators::oracles::ProfileOracle;
use crate::estimators::report::DpParams;
use crate::geo::point::Point;
use crate::tukey::region::RegionChain;
use crate::tukey::tdc::tdc_precompute;

/// Extends `prefix` to a full point by one noisy TDC maximization per
/// missing coordinate, each spending `(eps_each, delta_each, beta_each)`.
pub fn dp_complete_prefix(
    chain: &RegionChain,
    mut prefix: Vec<f64>,
    eps_each: f64,
    delta_each: f64,
    beta_each: f64,
    grid: SearchGrid,
    label: &str,
    budget: &mut PrivacyBudget,
    stream: &mut NoiseStream,
) -> Result<Point> {
    let d = chain.dim();
    while prefix.len() < d {
        let ni = tdc_precompute(chain, &prefix)?;
        let oracle = ProfileOracle { profile: &ni, grid };
        let x = dp_binary_search_qc(&oracle, eps_each, beta_each, stream);
        budget.charge(label, eps_each, delta_each)?;
        prefix.push(x);
    }
    Ok(Point::new(prefix))
}

/// `DPPointInTukeyRegion`: `d` sequential completions with budget
/// `epsilon/d` each. In disabled mode the result is an exact deepest point.
pub fn dp_point_in_region(
    chain: &RegionChain,
    params: &DpParams,
    grid: SearchGrid,
    budget: &mut PrivacyBudget,
    stream: &mut NoiseStream,
) -> Result<Point> {
    params.validate()?;
    if chain.kappa_max() < params.kappa {
        return Err(Error::EmptyRegion {
            requested: params.kappa,
            max: chain.kappa_max(),
        });
    }
    let d = chain.dim() as f64;
    dp_complete_prefix(
        chain,
        Vec::new(),
        params.epsilon / d,
        params.delta / d,
        params.beta / d,
        grid,
        "dp_point_in_region",
        budget,
        stream,
    )
}

#[derive(Clone, Debug)]
pub struct PairResult {
    pub first: Point,
    pub second: Point,
    /// Depths of the two endpoints against the chain; diagnostic only.
    pub depth_first: usize,
    pub depth_second: usize,
}

/// Returns a pair separated by exactly `ell` in the first coordinate, both
/// of near-maximal depth among such pairs. One shifted-TDC search plus
/// `2(d-1)` completions, each at budget `epsilon/(2d-1)`.
pub fn dp_pair_at_distance(
    chain: &RegionChain,
    params: &DpParams,
    ell: f64,
    grid: SearchGrid,
    budget: &mut PrivacyBudget,
    stream: &mut NoiseStream,
) -> Result<PairResult> {
    params.validate()?;
    if chain.kappa_max() == 0 {
        return Err(Error::EmptyRegion {
            requested: params.kappa,
            max: 0,
        });
    }
    let d = chain.dim();
    let k = (2 * d - 1) as f64;
    let (eps0, delta0, beta0) = (params.epsilon / k, params.delta / k, params.beta / k);

    let ni = tdc_precompute(chain, &[])?;
    let shifted = ni.shifted(ell);
    let oracle = ProfileOracle {
        profile: &shifted,
        grid,
    };
    let x1 = dp_binary_search_qc(&oracle, eps0, beta0, stream);
    budget.charge("dp_pair_at_distance", eps0, delta0)?;

    let first = dp_complete_prefix(
        chain,
        vec![x1],
        eps0,
        delta0,
        beta0,
        grid,
        "dp_pair_at_distance",
        budget,
        stream,
    )?;
    let second = dp_complete_prefix(
        chain,
        vec![x1 + ell],
        eps0,
        delta0,
        beta0,
        grid,
        "dp_pair_at_distance",
        budget,
        stream,
    )?;
    let tol = 1e-7;
    Ok(PairResult {
        depth_first: chain.depth_of(first.coords(), tol),
        depth_second: chain.depth_of(second.coords(), tol),
        first,
        second,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dp::noise::NoiseMode;
    use crate::tukey::{region_chain, tukey_depth, PointSet};

    fn square_chain() -> (PointSet, RegionChain) {
        let pts = vec![
            Point::new(vec![0.0, 0.0]),
            Point::new(vec![1.0, 0.0]),
            Point::new(vec![1.0, 1.0]),
            Point::new(vec![0.0, 1.0]),
        ];
        let ps = PointSet::new(pts, 2, 8).unwrap();
        let chain = region_chain(&ps, 10).unwrap();
        (ps, chain)
    }

    fn params(kappa: usize, mode: NoiseMode) -> DpParams {
        DpParams {
            epsilon: 1.0,
            delta: 1e-6,
            alpha: 0.1,
            beta: 0.05,
            kappa,
            upsilon: 8,
            mode,
        }
    }

    #[test]
    fn disabled_square_center() {
        let (_, chain) = square_chain();
        let mut budget = PrivacyBudget::new();
        let mut s = NoiseMode::Disabled.stream(0);
        let p = dp_point_in_region(
            &chain,
            &params(2, NoiseMode::Disabled),
            SearchGrid::unit(8),
            &mut budget,
            &mut s,
        )
        .unwrap();
        assert!((p[0] - 0.5).abs() < 1e-9 && (p[1] - 0.5).abs() < 1e-9);
        assert!((budget.epsilon_spent() - 1.0).abs() < 1e-12);
        assert_eq!(budget.entries().len(), 2);
    }

    #[test]
    fn disabled_depth_at_least_kappa() {
        let (ps, chain) = square_chain();
        let mut budget = PrivacyBudget::new();
        let mut s = NoiseMode::Disabled.stream(0);
        let p = dp_point_in_region(
            &chain,
            &params(1, NoiseMode::Disabled),
            SearchGrid::unit(8),
            &mut budget,
            &mut s,
        )
        .unwrap();
        assert!(tukey_depth(p.coords(), ps.points()) >= 1);
    }

    #[test]
    fn empty_region_rejected() {
        let (_, chain) = square_chain();
        let mut budget = PrivacyBudget::new();
        let mut s = NoiseMode::Disabled.stream(0);
        let err = dp_point_in_region(
            &chain,
            &params(3, NoiseMode::Disabled),
            SearchGrid::unit(8),
            &mut budget,
            &mut s,
        );
        assert!(matches!(err, Err(Error::EmptyRegion { .. })));
    }

    #[test]
    fn pair_spans_the_square() {
        let (ps, chain) = square_chain();
        let mut budget = PrivacyBudget::new();
        let mut s = NoiseMode::Disabled.stream(0);
        let pair = dp_pair_at_distance(
            &chain,
            &params(1, NoiseMode::Disabled),
            1.0,
            SearchGrid::unit(8),
            &mut budget,
            &mut s,
        )
        .unwrap();
        assert!((pair.second[0] - pair.first[0] - 1.0).abs() < 1e-9);
        assert!(pair.first[0].abs() < 1e-9);
        assert!(tukey_depth(pair.first.coords(), ps.points()) >= 1);
        assert!(tukey_depth(pair.second.coords(), ps.points()) >= 1);
        assert_eq!(budget.entries().len(), 3, "2d-1 charges");
    }

    #[test]
    fn pair_with_zero_separation_is_center() {
        let (_, chain) = square_chain();
        let mut budget = PrivacyBudget::new();
        let mut s = NoiseMode::Disabled.stream(0);
        let pair = dp_pair_at_distance(
            &chain,
            &params(2, NoiseMode::Disabled),
            0.0,
            SearchGrid::unit(8),
            &mut budget,
            &mut s,
        )
        .unwrap();
        for p in [&pair.first, &pair.second] {
            assert!((p[0] - 0.5).abs() < 1e-9 && (p[1] - 0.5).abs() < 1e-9);
        }
    }

    #[test]
    fn infeasible_separation_reports_low_depth() {
        let (_, chain) = square_chain();
        let mut budget = PrivacyBudget::new();
        let mut s = NoiseMode::Disabled.stream(0);
        let pair = dp_pair_at_distance(
            &chain,
            &params(1, NoiseMode::Disabled),
            2.0,
            SearchGrid::unit(8),
            &mut budget,
            &mut s,
        )
        .unwrap();
        // No pair of depth-1 points is 2.0 apart on the first axis.
        assert!(pair.depth_first == 0 || pair.depth_second == 0);
    }
}
