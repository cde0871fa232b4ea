//! Adapters exposing TDC profiles as grid oracles for the private
//! quasi-concave maximizer.

use crate::dp::qc::{QuasiConcaveOracle, SearchGrid};
use crate::tukey::tdc::UnimodalProfile;

pub struct ProfileOracle<'a, P: UnimodalProfile> {
    pub profile: &'a P,
    pub grid: SearchGrid,
}

impl<P: UnimodalProfile> ProfileOracle<'_, P> {
    /// Grid-restricted interval max of a unimodal step function: the best
    /// grid point is either inside the plateau or the grid point nearest to
    /// it from each flank.
    fn grid_max(&self, lo: f64, hi: f64) -> usize {
        let Some((plo, phi)) = self.profile.plateau() else {
            return 0;
        };
        let mut best = 0usize;
        let mut try_point = |x: Option<f64>| {
            if let Some(g) = x {
                if g >= lo - 1e-12 && g <= hi + 1e-12 {
                    best = best.max(self.profile.value_at(g));
                }
            }
        };
        try_point(self.grid.largest_leq(hi.min(phi)));
        try_point(self.grid.smallest_geq(lo.max(plo)));
        try_point(self.grid.largest_leq(hi));
        try_point(self.grid.smallest_geq(lo));
        best
    }
}

impl<P: UnimodalProfile> QuasiConcaveOracle for ProfileOracle<'_, P> {
    fn grid(&self) -> SearchGrid {
        self.grid
    }

    fn grid_interval_max(&self, lo: f64, hi: f64) -> f64 {
        self.grid_max(lo, hi) as f64
    }

    fn plateau(&self) -> Option<(f64, f64)> {
        self.profile.plateau()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geo::point::Point;
    use crate::tukey::tdc::tdc_precompute;
    use crate::tukey::{region_chain, PointSet};

    #[test]
    fn grid_max_matches_scan() {
        let ps = PointSet::new(
            vec![
                Point::new(vec![0.0, 0.0]),
                Point::new(vec![1.0, 0.0]),
                Point::new(vec![1.0, 1.0]),
                Point::new(vec![0.0, 1.0]),
                Point::new(vec![0.5, 0.25]),
                Point::new(vec![0.25, 0.75]),
            ],
            2,
            4,
        )
        .unwrap();
        let chain = region_chain(&ps, 10).unwrap();
        let ni = tdc_precompute(&chain, &[]).unwrap();
        let grid = SearchGrid::unit(4);
        let oracle = ProfileOracle { profile: &ni, grid };
        for (lo, hi) in [(0.0, 1.0), (0.1, 0.3), (0.55, 0.8), (0.9, 1.0), (0.0, 0.05)] {
            let mut scan = 0usize;
            for k in 0..=grid.count {
                let x = grid.point(k);
                if x >= lo && x <= hi {
                    scan = scan.max(crate::tukey::tdc::UnimodalProfile::value_at(&ni, x));
                }
            }
            assert_eq!(oracle.grid_max(lo, hi), scan, "window [{lo}, {hi}]");
        }
    }
}
