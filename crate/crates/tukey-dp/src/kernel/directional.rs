//! Direction-cover kernel for relatively-fat regions: find a private base
//! point `c`, then for each direction of a `zeta`-cover approximate the max
//! projection from `c` and complete it to an interior point one coordinate
//! at a time on the rotated chain. `k = d(|V|+1)` subcalls at
//! `(eps_0, delta_0)` each, composed by the advanced theorem.

use crate::dp::budget::PrivacyBudget;
use crate::dp::noise::NoiseStream;
use crate::dp::qc::{alpha_qc, SearchGrid};
use crate::error::{Error, Result};
use crate::estimators::point_in_region::dp_complete_prefix;
use crate::estimators::projection::dp_max_projection;
use crate::estimators::report::{svt_delta_depth, DpParams};
use crate::geo::cover::angle_cover;
use crate::geo::point::{Point, Rotation};
use crate::kernel::{KernelResult, KernelStrategy};
use crate::tukey::region::RegionChain;

fn cover_zeta(alpha: f64, c_d: f64) -> f64 {
    (alpha / (2.0 * 2.0_f64.sqrt() * c_d)).min(0.5)
}

fn max_proj_queries(upsilon: u32, alpha: f64, d_upper: f64) -> usize {
    ((2.0 * upsilon as f64 + 2.0 * d_upper.ln()) / alpha).ceil().max(1.0) as usize
}

/// Closed-form depth shift of the directional kernel: the max-projection
/// shift at `(eps_0, beta_0)` plus `d-1` completion losses.
pub fn gamma_kernel_formula(
    dim: usize,
    c_d: f64,
    alpha: f64,
    beta: f64,
    epsilon: f64,
    delta: f64,
    upsilon: u32,
) -> f64 {
    let zeta = cover_zeta(alpha, c_d);
    let m = (std::f64::consts::PI / zeta).ceil();
    let n_dirs = 2.0 * m.powi(dim as i32 - 1);
    let k = dim as f64 * (n_dirs + 1.0);
    let eps0 = epsilon / (2.0 * (k * (2.0 / delta).ln()).sqrt());
    let delta0 = delta / (2.0 * k);
    let beta0 = beta / k;
    let t = max_proj_queries(upsilon, alpha, (dim as f64).sqrt());
    svt_delta_depth(eps0, beta0, (t + 2) as f64)
        + (dim as f64 - 1.0) * alpha_qc(eps0, delta0, beta0, upsilon)
}

pub struct DirectionalKernel;

impl KernelStrategy for DirectionalKernel {
    fn name(&self) -> &'static str {
        "directional"
    }

    fn build(
        &self,
        chain: &RegionChain,
        params: &DpParams,
        c_d: f64,
        grid: SearchGrid,
        budget: &mut PrivacyBudget,
        stream: &mut NoiseStream,
    ) -> Result<KernelResult> {
        params.validate()?;
        if !(params.delta > 0.0) {
            return Err(Error::InvalidParam(
                "directional kernel needs delta > 0 for advanced composition".into(),
            ));
        }
        if c_d < 1.0 {
            return Err(Error::InvalidParam("c_d must be at least 1".into()));
        }
        if chain.kappa_max() < params.kappa {
            return Err(Error::EmptyRegion {
                requested: params.kappa,
                max: chain.kappa_max(),
            });
        }
        let d = chain.dim();
        let zeta = cover_zeta(params.alpha, c_d);
        let cover = angle_cover(zeta, d)?;
        let k = d * (cover.directions.len() + 1);
        let eps0 = params.epsilon / (2.0 * (k as f64 * (2.0 / params.delta).ln()).sqrt());
        let delta0 = params.delta / (2.0 * k as f64);
        let beta0 = params.beta / k as f64;
        let d_upper = (d as f64).sqrt();
        // Rotated coordinates range over [-r, r] for the chain's coordinate
        // radius r; the completion searches run on a symmetric grid.
        let radius = (d as f64).sqrt() * grid.lo.abs().max(grid.hi().abs()).max(1.0);
        let rot_grid = SearchGrid::symmetric(radius, params.upsilon);

        let mut scratch = PrivacyBudget::new();
        let base = dp_complete_prefix(
            chain,
            Vec::new(),
            eps0,
            delta0,
            beta0,
            grid,
            "kernel_directional",
            &mut scratch,
            stream,
        )?;
        for _ in 0..d {
            budget.charge("kernel_directional", eps0, delta0)?;
        }

        let mut points = vec![base.clone()];
        let proj_params = DpParams {
            epsilon: eps0,
            beta: beta0,
            ..*params
        };
        for v in &cover.directions {
            let rep = dp_max_projection(
                chain,
                &proj_params,
                v,
                &base,
                d_upper,
                &mut scratch,
                stream,
            )?;
            budget.charge("kernel_directional", eps0, delta0)?;
            let ell = if rep.halt.is_some() { rep.value } else { 0.0 };
            let rot = Rotation::to_first_axis(v);
            let rot_chain = chain.rotate(&rot);
            let x_target = v.dot(base.coords()) + ell;
            let q_rot = dp_complete_prefix(
                &rot_chain,
                vec![x_target],
                eps0,
                delta0,
                beta0,
                rot_grid,
                "kernel_directional",
                &mut scratch,
                stream,
            )?;
            for _ in 0..d - 1 {
                budget.charge("kernel_directional", eps0, delta0)?;
            }
            points.push(Point::new(rot.apply_inverse(q_rot.coords())));
        }

        Ok(KernelResult {
            kappa: params.kappa,
            points,
            base: Some(base),
            alpha: params.alpha,
            gamma_kernel: gamma_kernel_formula(
                d,
                c_d,
                params.alpha,
                params.beta,
                params.epsilon,
                params.delta,
                params.upsilon,
            ),
            strategy: "directional".into(),
            certification: None,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dp::noise::NoiseMode;
    use crate::tukey::{region_chain, tukey_depth, PointSet};

    fn square() -> (PointSet, RegionChain) {
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

    fn params(kappa: usize, alpha: f64) -> DpParams {
        DpParams {
            epsilon: 1.0,
            delta: 1e-6,
            alpha,
            beta: 0.05,
            kappa,
            upsilon: 8,
            mode: NoiseMode::Disabled,
        }
    }

    #[test]
    fn disabled_members_have_full_depth_and_sit_on_their_slices() {
        let (ps, chain) = square();
        let mut budget = PrivacyBudget::new();
        let mut s = NoiseMode::Disabled.stream(0);
        let c_d = 2.0_f64.sqrt();
        let alpha = 0.2;
        let res = DirectionalKernel
            .build(
                &chain,
                &params(1, alpha),
                c_d,
                SearchGrid::unit(8),
                &mut budget,
                &mut s,
            )
            .unwrap();
        let base = res.base.clone().unwrap();
        let zeta = cover_zeta(alpha, c_d);
        let cover = angle_cover(zeta, 2).unwrap();
        assert_eq!(res.points.len(), cover.directions.len() + 1);
        let region = chain.region(1).unwrap();
        for (q, v) in res.points[1..].iter().zip(&cover.directions) {
            assert!(
                tukey_depth(q.coords(), ps.points()) >= 1,
                "kernel member outside D(1)"
            );
            // q sits on the slice <., v> = <c, v> + ell_v; with zero noise
            // ell_v is a (1 - alpha)-approximation of the reach from c.
            let reach = v.dot(q.coords()) - v.dot(base.coords());
            let max_reach = region
                .vertices()
                .iter()
                .map(|p| v.dot(p.coords()) - v.dot(base.coords()))
                .fold(f64::NEG_INFINITY, f64::max);
            assert!(reach <= max_reach + 1e-9);
            assert!(reach >= (1.0 - alpha) * max_reach - 1e-9, "reach {reach} of {max_reach}");
        }
    }

    #[test]
    fn disabled_singleton_region_collapses_to_center() {
        let (_, chain) = square();
        let mut budget = PrivacyBudget::new();
        let mut s = NoiseMode::Disabled.stream(0);
        let res = DirectionalKernel
            .build(
                &chain,
                &params(2, 0.2),
                2.0_f64.sqrt(),
                SearchGrid::unit(8),
                &mut budget,
                &mut s,
            )
            .unwrap();
        for p in &res.points {
            assert!((p[0] - 0.5).abs() < 1e-6 && (p[1] - 0.5).abs() < 1e-6);
        }
    }

    #[test]
    fn budget_is_k_uniform_charges() {
        let (_, chain) = square();
        let mut budget = PrivacyBudget::new();
        let mut s = NoiseMode::Disabled.stream(0);
        let alpha = 0.2;
        let c_d = 2.0_f64.sqrt();
        let p = params(1, alpha);
        DirectionalKernel
            .build(&chain, &p, c_d, SearchGrid::unit(8), &mut budget, &mut s)
            .unwrap();
        let zeta = cover_zeta(alpha, c_d);
        let n_dirs = angle_cover(zeta, 2).unwrap().directions.len();
        let k = 2 * (n_dirs + 1);
        assert_eq!(budget.entries().len(), k);
        let eps0 = p.epsilon / (2.0 * (k as f64 * (2.0 / p.delta).ln()).sqrt());
        assert!((budget.epsilon_spent() - k as f64 * eps0).abs() < 1e-9);
        let delta0 = p.delta / (2.0 * k as f64);
        assert!((budget.delta_spent() - k as f64 * delta0).abs() < 1e-15);
    }
}
