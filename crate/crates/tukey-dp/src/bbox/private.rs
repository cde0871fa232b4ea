//! Private bounding box of a Tukey region. Per dimension, working on the
//! projected chain: find an interior point, a private diameter, a direction
//! admitting a deep point at offset `0.45 l`, complete it, record the
//! interval `<s,u> +- (10/9) l` along the realized segment direction, then
//! project the whole chain orthogonally and recurse. The budget splits over
//! exactly `k = d^2 + 2d - 1` subcalls.

use serde::Serialize;

use crate::dp::budget::PrivacyBudget;
use crate::dp::noise::NoiseStream;
use crate::dp::qc::{alpha_qc, SearchGrid};
use crate::error::{Error, Result};
use crate::estimators::diameter::dp_diameter;
use crate::estimators::direction::{delta_large_tdc_dir, dp_large_tdc_direction};
use crate::estimators::point_in_region::dp_complete_prefix;
use crate::estimators::report::{svt_delta_depth, DpParams};
use crate::geo::cover::angle_cover;
use crate::geo::point::{norm, sub, Direction, Rotation};
use crate::tukey::region::RegionChain;

use super::oriented::OrientedBox;

/// The inner diameter call runs with fixed constants: a 0.9 shrink factor
/// (alpha = 0.2 in the (1-alpha/2) schedule), offsets at 0.45 l, and
/// intervals inflated to (10/9) l.
const INNER_ALPHA: f64 = 0.2;
const DIR_ZETA_INV_COS: f64 = 10.0;

#[derive(Clone, Debug, Serialize)]
pub struct BoxReport {
    /// Summands of the depth shift: diameter, direction scan, completions.
    pub delta_diam: f64,
    pub delta_dir: f64,
    pub delta_completions: f64,
    pub delta_bb: f64,
    /// Levels that collapsed to a point interval.
    pub degenerate_levels: Vec<usize>,
    pub epsilon: f64,
    pub delta: f64,
}

/// Closed-form `Delta_BB = Delta_diam + Delta_LargeTDCDir + d * alpha_qc`
/// at the per-call budget `eps/(d^2+2d-1)`.
pub fn delta_bb_formula(dim: usize, epsilon: f64, delta: f64, beta: f64, upsilon: u32) -> BoxReport {
    let k = (dim * dim + 2 * dim - 1) as f64;
    let (eps0, delta0, beta0) = (epsilon / k, delta / k, beta / k);
    let t_diam = ((2.0 * upsilon as f64 + (dim as f64).ln()) / INNER_ALPHA).ceil();
    let zeta = (1.0 / DIR_ZETA_INV_COS).acos();
    let m = (std::f64::consts::PI / zeta).ceil();
    let n_dirs = (2.0 * m.powi(dim as i32 - 1)) as usize;
    let delta_diam = svt_delta_depth(eps0, beta0, t_diam + 2.0);
    let delta_dir = delta_large_tdc_dir(eps0, beta0, n_dirs);
    let delta_completions = dim as f64 * alpha_qc(eps0, delta0, beta0, upsilon);
    BoxReport {
        delta_diam,
        delta_dir,
        delta_completions,
        delta_bb: delta_diam + delta_dir + delta_completions,
        degenerate_levels: Vec::new(),
        epsilon,
        delta,
    }
}

pub fn bbox_private(
    chain: &RegionChain,
    params: &DpParams,
    budget: &mut PrivacyBudget,
    stream: &mut NoiseStream,
) -> Result<(OrientedBox, BoxReport)> {
    params.validate()?;
    let d = chain.dim();
    if chain.kappa_max() < params.kappa {
        return Err(Error::EmptyRegion {
            requested: params.kappa,
            max: chain.kappa_max(),
        });
    }
    let k = (d * d + 2 * d - 1) as f64;
    let (eps0, delta0, beta0) = (params.epsilon / k, params.delta / k, params.beta / k);
    let charge = |budget: &mut PrivacyBudget, n: usize| -> Result<()> {
        for _ in 0..n {
            budget.charge("bbox_private", eps0, delta0)?;
        }
        Ok(())
    };
    let mut report = delta_bb_formula(d, params.epsilon, params.delta, params.beta, params.upsilon);
    let radius = (d as f64).sqrt() + 1.0;
    let grid = SearchGrid::symmetric(radius, params.upsilon);
    let zeta = (1.0 / DIR_ZETA_INV_COS).acos();

    let mut embed: Vec<Vec<f64>> = (0..d)
        .map(|i| {
            let mut r = vec![0.0; d];
            r[i] = 1.0;
            r
        })
        .collect();
    let mut cur = chain.clone();
    let mut axes: Vec<Direction> = Vec::new();
    let mut intervals: Vec<(f64, f64)> = Vec::new();
    let mut scratch = PrivacyBudget::new();

    let sub_params = |kappa: usize| DpParams {
        epsilon: eps0,
        delta: delta0,
        alpha: INNER_ALPHA,
        beta: beta0,
        kappa,
        upsilon: params.upsilon,
        mode: params.mode,
    };

    for level in (2..=d).rev() {
        // Interior point: `level` completions.
        let s = dp_complete_prefix(
            &cur,
            Vec::new(),
            eps0,
            delta0,
            beta0,
            grid,
            "bbox_private",
            &mut scratch,
            stream,
        )?;
        charge(budget, level)?;

        // Private diameter of the projected region at depth kappa.
        let diam_rep = dp_diameter(&cur, &sub_params(params.kappa), &mut scratch, stream)?;
        charge(budget, 1)?;
        let ell = diam_rep.value;

        if ell <= 1e-9 {
            // Zero-width slice: point interval, advance along the first axis.
            let e1 = Direction::axis(0, level);
            let t0 = e1.dot(s.coords());
            push_axis(&mut axes, &mut intervals, &embed, &e1, (t0, t0));
            report.degenerate_levels.push(level);
            charge(budget, level)?; // the direction scan and completions still spend
            let rot = Rotation::to_first_axis(&e1);
            cur = project_chain(&cur, &rot);
            embed = project_embed(&embed, &rot, d);
            continue;
        }

        // Direction admitting a deep point at offset 0.45 l, scanned at
        // depth kappa - Delta_diam.
        let cover = angle_cover(zeta, level)?;
        let dir_kappa =
            (params.kappa as f64 - params.effective_shift(report.delta_diam)).max(1.0) as usize;
        let (found, _) = dp_large_tdc_direction(
            &cur,
            &sub_params(dir_kappa),
            &cover.directions,
            &s,
            0.45 * ell,
            &mut scratch,
            stream,
        )?;
        charge(budget, 1)?;
        let v = found.ok_or(Error::BoxSearchFailed)?;

        // Complete the prescribed offset to a point t on the rotated chain.
        let rot_v = Rotation::to_first_axis(&v);
        let rotated = cur.rotate(&rot_v);
        let x_target = v.dot(s.coords()) + 0.45 * ell;
        let t_rot = dp_complete_prefix(
            &rotated,
            vec![x_target],
            eps0,
            delta0,
            beta0,
            grid,
            "bbox_private",
            &mut scratch,
            stream,
        )?;
        charge(budget, level - 1)?;
        let t = rot_v.apply_inverse(t_rot.coords());

        let seg = sub(&t, s.coords());
        let seg_len = norm(&seg);
        let u = if seg_len > 1e-9 {
            Direction::new(seg)?
        } else {
            v.clone()
        };
        let mid = u.dot(s.coords());
        push_axis(
            &mut axes,
            &mut intervals,
            &embed,
            &u,
            (mid - 10.0 / 9.0 * ell, mid + 10.0 / 9.0 * ell),
        );
        let rot_u = Rotation::to_first_axis(&u);
        cur = project_chain(&cur, &rot_u);
        embed = project_embed(&embed, &rot_u, d);
    }

    // Dimension one: an interior point and a diameter close the box.
    let s1 = dp_complete_prefix(
        &cur,
        Vec::new(),
        eps0,
        delta0,
        beta0,
        grid,
        "bbox_private",
        &mut scratch,
        stream,
    )?;
    charge(budget, 1)?;
    let diam_rep = dp_diameter(&cur, &sub_params(params.kappa), &mut scratch, stream)?;
    charge(budget, 1)?;
    let ell = diam_rep.value;
    let e1 = Direction::axis(0, 1);
    push_axis(
        &mut axes,
        &mut intervals,
        &embed,
        &e1,
        (s1[0] - 10.0 / 9.0 * ell, s1[0] + 10.0 / 9.0 * ell),
    );

    axes.reverse();
    intervals.reverse();
    Ok((OrientedBox { axes, intervals }, report))
}

fn push_axis(
    axes: &mut Vec<Direction>,
    intervals: &mut Vec<(f64, f64)>,
    embed: &[Vec<f64>],
    u_cur: &Direction,
    interval: (f64, f64),
) {
    let d = embed[0].len();
    let mut w = vec![0.0; d];
    for (c, row) in u_cur.components().iter().zip(embed) {
        for k in 0..d {
            w[k] += c * row[k];
        }
    }
    axes.push(Direction::new(w).expect("embedding preserves norm"));
    intervals.push(interval);
}

fn project_chain(cur: &RegionChain, rot: &Rotation) -> RegionChain {
    let rotated = cur.rotate(rot);
    let dim = cur.dim() - 1;
    let regions = rotated
        .regions()
        .iter()
        .map(|r| {
            let pts: Vec<Vec<f64>> = r
                .vertices()
                .iter()
                .map(|v| v.coords()[1..].to_vec())
                .collect();
            crate::geo::polytope::Polytope::from_points(dim, &pts)
        })
        .collect();
    RegionChain::from_regions(dim, regions)
}

fn project_embed(embed: &[Vec<f64>], rot: &Rotation, d: usize) -> Vec<Vec<f64>> {
    rot.rows()[1..]
        .iter()
        .map(|rrow| {
            let mut row = vec![0.0; d];
            for (c, erow) in rrow.iter().zip(embed) {
                for k in 0..d {
                    row[k] += c * erow[k];
                }
            }
            row
        })
        .collect()
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

    fn params(kappa: usize) -> DpParams {
        DpParams {
            epsilon: 1.0,
            delta: 1e-6,
            alpha: 0.2,
            beta: 0.05,
            kappa,
            upsilon: 8,
            mode: NoiseMode::Disabled,
        }
    }

    #[test]
    fn disabled_square_box_contains_and_bounds_volume() {
        let chain = square_chain();
        let mut budget = PrivacyBudget::new();
        let mut s = NoiseMode::Disabled.stream(0);
        let (bbox, _) = bbox_private(&chain, &params(1), &mut budget, &mut s).unwrap();
        assert!(bbox.axes_orthonormal(1e-9));
        let region = chain.region(1).unwrap();
        for v in region.vertices() {
            assert!(bbox.contains(v.coords(), 1e-7));
        }
        // Disabled-mode volume bound: 5^d d! vol(D(kappa)) = 50.
        assert!(bbox.volume() <= 50.0 * region.volume().unwrap() + 1e-9);
        // Exactly d^2 + 2d - 1 = 7 uniform charges.
        assert_eq!(budget.entries().len(), 7);
        let eps0 = 1.0 / 7.0;
        assert!((budget.epsilon_spent() - 7.0 * eps0).abs() < 1e-12);
    }

    #[test]
    fn disabled_singleton_region_degenerates() {
        let chain = square_chain();
        let mut budget = PrivacyBudget::new();
        let mut s = NoiseMode::Disabled.stream(0);
        let (bbox, report) = bbox_private(&chain, &params(2), &mut budget, &mut s).unwrap();
        // All intervals collapse around the center point.
        assert!(bbox.volume() <= 1e-6, "vol {}", bbox.volume());
        assert!(bbox.contains(&[0.5, 0.5], 1e-6));
        let _ = report;
    }
}
