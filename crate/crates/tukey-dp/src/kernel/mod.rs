//! Kernel construction for fat Tukey regions. The two constructions — the
//! grid kernel for absolutely-fat regions and the direction-cover kernel for
//! relatively-fat regions — sit behind a common strategy trait, registered
//! by name and selected at runtime via config or CLI.

pub mod certify;
pub mod directional;
pub mod fatness;
pub mod grid;

pub use certify::{kernel_certify, CertifyReport};
pub use directional::{gamma_kernel_formula, DirectionalKernel};
pub use fatness::{c_max, fatness_select, FatnessSpec, SelectOutcome};
pub use grid::{delta_kernel_formula, GridKernel};

use serde::Serialize;

use crate::dp::budget::PrivacyBudget;
use crate::dp::noise::NoiseStream;
use crate::dp::qc::SearchGrid;
use crate::error::Result;
use crate::estimators::report::DpParams;
use crate::geo::point::Point;
use crate::tukey::region::RegionChain;

/// Selected depth, kernel point set, base point (directional strategy only)
/// and the depth-shift constant of the relevant guarantee.
#[derive(Clone, Debug, Serialize)]
pub struct KernelResult {
    pub kappa: usize,
    pub points: Vec<Point>,
    pub base: Option<Point>,
    pub alpha: f64,
    pub gamma_kernel: f64,
    pub strategy: String,
    pub certification: Option<CertifyReport>,
}

/// One interchangeable kernel construction.
pub trait KernelStrategy: Sync {
    fn name(&self) -> &'static str;

    fn build(
        &self,
        chain: &RegionChain,
        params: &DpParams,
        c_d: f64,
        grid: SearchGrid,
        budget: &mut PrivacyBudget,
        stream: &mut NoiseStream,
    ) -> Result<KernelResult>;
}

/// All registered strategies, in registration order.
pub fn strategies() -> Vec<Box<dyn KernelStrategy>> {
    vec![Box::new(GridKernel), Box::new(DirectionalKernel)]
}

pub fn strategy_by_name(name: &str) -> Option<Box<dyn KernelStrategy>> {
    strategies().into_iter().find(|s| s.name() == name)
}

pub fn strategy_names() -> Vec<&'static str> {
    strategies().iter().map(|s| s.name()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn registry_resolves_by_name() {
        assert_eq!(strategy_names(), vec!["grid", "directional"]);
        assert!(strategy_by_name("grid").is_some());
        assert!(strategy_by_name("directional").is_some());
        assert!(strategy_by_name("nope").is_none());
    }
}
