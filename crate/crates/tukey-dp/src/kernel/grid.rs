//! Grid kernel for absolutely-fat regions: partition the unit cube into
//! cells of edge `zeta = alpha / (c_d sqrt(d))`, run one noisy max-depth
//! test per cell, and keep the centers of passing cells. The per-cell query
//! `max_{x in C} TD(x, P)` is the largest depth whose region still meets the
//! cell, found by feasibility LPs over the memoized chain.

use crate::dp::budget::PrivacyBudget;
use crate::dp::noise::NoiseStream;
use crate::dp::qc::SearchGrid;
use crate::error::{Error, Result};
use crate::estimators::report::DpParams;
use crate::geo::lp::feasible;
use crate::geo::point::Point;
use crate::kernel::{KernelResult, KernelStrategy};
use crate::tukey::region::RegionChain;

const CELL_CAP: usize = 1_000_000;

/// Depth shift `2 ln(1/beta_0) / eps_0` of the grid-kernel guarantee, with
/// `eps_0 = eps / (2 sqrt(k ln(1/delta)))` and `beta_0 = beta / k` over
/// `k = ceil(1/zeta)^d` cells.
pub fn delta_kernel_formula(
    dim: usize,
    c_d: f64,
    alpha: f64,
    beta: f64,
    epsilon: f64,
    delta: f64,
) -> f64 {
    let zeta = alpha / (c_d * (dim as f64).sqrt());
    let per_axis = (1.0 / zeta).ceil();
    let k = per_axis.powi(dim as i32);
    let eps0 = epsilon / (2.0 * (k * (1.0 / delta).ln()).sqrt());
    let beta0 = beta / k;
    2.0 * (1.0 / beta0).ln() / eps0
}

pub struct GridKernel;

impl KernelStrategy for GridKernel {
    fn name(&self) -> &'static str {
        "grid"
    }

    fn build(
        &self,
        chain: &RegionChain,
        params: &DpParams,
        c_d: f64,
        _grid: SearchGrid,
        budget: &mut PrivacyBudget,
        stream: &mut NoiseStream,
    ) -> Result<KernelResult> {
        params.validate()?;
        if !(params.delta > 0.0) {
            return Err(Error::InvalidParam(
                "grid kernel needs delta > 0 for advanced composition".into(),
            ));
        }
        if c_d < 1.0 {
            return Err(Error::InvalidParam("c_d must be at least 1".into()));
        }
        let d = chain.dim();
        let zeta = params.alpha / (c_d * (d as f64).sqrt());
        let per_axis = (1.0 / zeta).ceil() as usize;
        let k = per_axis.pow(d as u32);
        if k > CELL_CAP {
            return Err(Error::CellBudgetOverflow {
                cells: k,
                cap: CELL_CAP,
            });
        }
        let eps0 = params.epsilon / (2.0 * (k as f64 * (1.0 / params.delta).ln()).sqrt());
        let beta0 = params.beta / k as f64;
        let margin = if params.mode.is_disabled() {
            0.0
        } else {
            (1.0 / beta0).ln() / eps0
        };

        let cell_edge = 1.0 / per_axis as f64;
        let mut points = Vec::new();
        // Canonical row-major cell order keeps the output deterministic.
        for flat in 0..k {
            let mut idx = flat;
            let mut lo = vec![0.0; d];
            for c in lo.iter_mut() {
                *c = (idx % per_axis) as f64 * cell_edge;
                idx /= per_axis;
            }
            let q = max_depth_in_cell(chain, &lo, cell_edge);
            let noisy = q as f64 + stream.laplace(1.0 / eps0);
            if noisy >= params.kappa as f64 - margin {
                points.push(Point::new(lo.iter().map(|&l| l + cell_edge / 2.0).collect()));
            }
        }
        budget.charge("kernel_grid", params.epsilon, params.delta)?;
        Ok(KernelResult {
            kappa: params.kappa,
            points,
            base: None,
            alpha: params.alpha,
            gamma_kernel: delta_kernel_formula(
                d,
                c_d,
                params.alpha,
                params.beta,
                params.epsilon,
                params.delta,
            ),
            strategy: "grid".into(),
            certification: None,
        })
    }
}

/// Largest depth whose region intersects the axis cell `[lo, lo + edge]^d`,
/// by binary search over the nested chain with a feasibility LP per probe.
fn max_depth_in_cell(chain: &RegionChain, lo: &[f64], edge: f64) -> usize {
    let d = chain.dim();
    let meets = |kappa: usize| -> bool {
        let region = match chain.region(kappa) {
            Some(r) => r,
            None => return false,
        };
        let mut rows: Vec<(Vec<f64>, f64)> = region
            .facets()
            .iter()
            .map(|h| (h.normal.components().to_vec(), h.offset))
            .collect();
        for i in 0..d {
            let mut up = vec![0.0; d];
            up[i] = 1.0;
            rows.push((up.clone(), lo[i] + edge));
            let mut down = vec![0.0; d];
            down[i] = -1.0;
            rows.push((down, -lo[i]));
        }
        feasible(&rows, d)
    };
    let (mut lo_k, mut hi_k) = (0usize, chain.kappa_max());
    while lo_k < hi_k {
        let mid = lo_k + (hi_k - lo_k + 1) / 2;
        if meets(mid) {
            lo_k = mid;
        } else {
            hi_k = mid - 1;
        }
    }
    lo_k
}
