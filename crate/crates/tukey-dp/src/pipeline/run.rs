//! The end-to-end pipeline: abort check and (non-private) degeneracy rank
//! check, private depth selection, an optional absolute-fatness width
//! probe, private bounding box plus fattening transform when the probe
//! fails, kernel construction on the (possibly transformed) chain, and a
//! post-processed report.

use std::time::Instant;

use serde::Serialize;

use crate::bbox::private::{bbox_private, BoxReport};
use crate::bbox::transform::{fattening_transform, FatteningTransform};
use crate::dp::budget::PrivacyBudget;
use crate::dp::noise::NoiseMode;
use crate::dp::qc::SearchGrid;
use crate::error::{Error, Result};
use crate::estimators::report::{svt_delta_depth, DpParams};
use crate::geo::point::{affine_rank, Point};
use crate::kappa::{shifted_exp_mechanism, KappaQueryTable};
use crate::kernel::certify::{alpha_prime_additive, alpha_prime_based, kernel_certify};
use crate::kernel::fatness::factorial;
use crate::kernel::grid::delta_kernel_formula;
use crate::kernel::{strategy_by_name, CertifyReport, KernelResult};
use crate::pipeline::measures::{applied_measures, Measures};
use crate::tukey::region::{region_chain, RegionChain};
use crate::tukey::PointSet;

#[derive(Clone, Debug)]
pub struct PipelineConfig {
    pub epsilon: f64,
    pub delta: f64,
    pub alpha: f64,
    pub beta: f64,
    pub mode: NoiseMode,
    /// Override the selected depth (stage 1 still runs for its budget).
    pub kappa_override: Option<usize>,
    pub c_d_override: Option<f64>,
    pub m_override: Option<usize>,
    pub kernel_strategy: String,
    pub skip_width_probe: bool,
    pub include_timings: bool,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            epsilon: 1.0,
            delta: 1e-6,
            alpha: 0.25,
            beta: 0.05,
            mode: NoiseMode::Disabled,
            kappa_override: None,
            c_d_override: None,
            m_override: None,
            kernel_strategy: "directional".into(),
            skip_width_probe: false,
            include_timings: false,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct StageCharge {
    pub stage: String,
    pub epsilon: f64,
    pub delta: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct BudgetSection {
    pub stages: Vec<StageCharge>,
    pub total_epsilon: f64,
    pub total_delta: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct WidthProbe {
    pub value: f64,
    pub probed_kappa: usize,
    pub threshold: f64,
    pub passed: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct BoxSection {
    pub axes: Vec<Vec<f64>>,
    pub intervals: Vec<(f64, f64)>,
    pub volume: f64,
    pub report: BoxReport,
}

#[derive(Clone, Debug, Serialize)]
pub struct PipelineReport {
    pub schema_version: String,
    pub dim: usize,
    pub grid_exponent: u32,
    pub mode: String,
    pub epsilon_per_stage: f64,
    pub delta_per_stage: f64,
    pub alpha: f64,
    pub beta: f64,
    pub noisy_count: f64,
    /// `m = 4 ceil(d^3 upsilon + d^3 log2 d) * Delta_kernel`, verbatim.
    pub prescribed_m_formula: String,
    pub delta_kernel_closed_form: f64,
    pub prescribed_m: f64,
    pub used_m: usize,
    pub chosen_kappa_raw: i64,
    pub chosen_kappa: usize,
    pub c_d: f64,
    pub width_probe: Option<WidthProbe>,
    pub bounding_box: Option<BoxSection>,
    pub transform_applied: bool,
    pub kernel: KernelSection,
    pub certification: CertifyReport,
    pub measures: Measures,
    pub budget: BudgetSection,
    pub warnings: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timings_ms: Option<Vec<(String, u128)>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct KernelSection {
    pub strategy: String,
    pub kappa: usize,
    pub gamma_kernel: f64,
    pub base: Option<Vec<f64>>,
    pub n_points: usize,
    pub points: Vec<Vec<f64>>,
}

/// Geometry needed by the SVG renderer, returned alongside the report.
pub struct PipelineArtifacts {
    pub chain: RegionChain,
    pub kernel_points: Vec<Point>,
    pub outer_kappa: usize,
    pub bbox_corners: Option<Vec<Vec<f64>>>,
}

pub fn run_pipeline(ps: &PointSet, cfg: &PipelineConfig) -> Result<(PipelineReport, PipelineArtifacts)> {
    let d = ps.dim();
    let upsilon = ps.grid_exponent();
    let eps = cfg.epsilon;
    let mut budget = PrivacyBudget::new();
    let mut warnings: Vec<String> = Vec::new();
    let mut timings: Vec<(String, u128)> = Vec::new();
    let mut stage_marks: Vec<(String, usize)> = Vec::new();

    // Stage 0: noisy size check and a clearly non-private rank check.
    let t0 = Instant::now();
    let mut stream0 = cfg.mode.stream(0);
    let noisy_count = ps.len() as f64 + stream0.laplace(1.0 / eps);
    budget.charge("stage0_count", eps, 0.0)?;
    stage_marks.push(("stage0_count".into(), budget.entries().len()));

    let c_d_default = 2.0 * d as f64 * 5.0_f64.powi(d as i32) * factorial(d);
    let c_d = cfg.c_d_override.unwrap_or(c_d_default);
    let delta_kernel =
        delta_kernel_formula(d, c_d_default, cfg.alpha, cfg.beta, eps, cfg.delta.max(1e-12));
    let prescribed_m =
        4.0 * (d.pow(3) as f64 * upsilon as f64 + d.pow(3) as f64 * (d as f64).log2()).ceil()
            * delta_kernel;
    let m_required = (16.0 / eps).ceil() as usize;
    let m_feasible = (noisy_count / (2.0 * (d as f64 + 1.0))).floor().max(0.0) as usize;
    if m_feasible < m_required {
        return Err(Error::AbortTooSmall {
            noisy: noisy_count,
            required: 2.0 * (d as f64 + 1.0) * m_required as f64,
        });
    }
    let mut used_m = m_feasible
        .min(if prescribed_m.is_finite() && prescribed_m < 1e9 {
            prescribed_m as usize
        } else {
            usize::MAX
        })
        .min(cfg.m_override.unwrap_or(usize::MAX));
    if used_m < prescribed_m.min(1e18) as usize {
        warnings.push(format!(
            "prescribed m = {prescribed_m:.3e} exceeds feasibility; capped to {used_m}"
        ));
    }
    if used_m < m_required {
        return Err(Error::AbortTooSmall {
            noisy: noisy_count,
            required: 2.0 * (d as f64 + 1.0) * m_required as f64,
        });
    }
    // Degeneracy preprocessing stands in for the out-of-scope private
    // detection; it reads the raw data.
    let vecs: Vec<Vec<f64>> = ps.points().iter().map(|p| p.coords().to_vec()).collect();
    let rank = affine_rank(&vecs, 1e-9);
    if rank < d {
        return Err(Error::stage(
            "stage0_rank_check",
            Error::DegenerateInput { dim: d, rank },
        ));
    }
    warnings.push("stage 0 rank check is NOT private (replaces out-of-scope preprocessing)".into());
    timings.push(("stage0".into(), t0.elapsed().as_millis()));

    // Region chain, memoized for every later stage.
    let t1 = Instant::now();
    let chain = region_chain(ps, used_m)?;
    if chain.kappa_max() < used_m {
        warnings.push(format!(
            "chain ends at depth {}; m capped from {used_m}",
            chain.kappa_max()
        ));
        used_m = chain.kappa_max();
        if used_m < m_required {
            return Err(Error::AbortTooSmall {
                noisy: noisy_count,
                required: 2.0 * (d as f64 + 1.0) * m_required as f64,
            });
        }
    }

    // Stage 1: private depth selection.
    let table = KappaQueryTable::from_chain(&chain, used_m);
    let mut stream1 = cfg.mode.stream(1);
    let kappa_raw = shifted_exp_mechanism(&table, eps, &mut stream1)?;
    budget.charge("stage1_select_kappa", eps, 0.0)?;
    stage_marks.push(("stage1_select_kappa".into(), budget.entries().len()));
    let mut chosen = kappa_raw.clamp(1, used_m as i64) as usize;
    if kappa_raw < 1 || kappa_raw > used_m as i64 {
        warnings.push(format!("selected index {kappa_raw} clamped into [1, {used_m}]"));
    }
    if let Some(k) = cfg.kappa_override {
        chosen = k.clamp(1, used_m);
        warnings.push(format!("kappa overridden to {chosen}"));
    }
    timings.push(("stage1".into(), t1.elapsed().as_millis()));

    let params = DpParams {
        epsilon: eps,
        delta: cfg.delta,
        alpha: cfg.alpha,
        beta: cfg.beta,
        kappa: chosen,
        upsilon,
        mode: cfg.mode,
    };

    // Stage 2: optional absolute-fatness width probe at depth
    // kappa + Delta_width.
    let t2 = Instant::now();
    let mut width_probe = None;
    let mut fat_enough = false;
    if !cfg.skip_width_probe {
        let b_lower = 1.0 / (2.0 * c_d);
        let d_upper = (d as f64).sqrt();
        let t_probe = ((2.0 * (d_upper / b_lower).ln()) / cfg.alpha).ceil();
        let shift = params.effective_shift(svt_delta_depth(eps, cfg.beta, t_probe + 2.0));
        let probed_kappa = chosen + shift.ceil() as usize;
        let mut stream2 = cfg.mode.stream(2);
        let probe_params = DpParams {
            kappa: probed_kappa,
            ..params
        };
        let mut scratch = PrivacyBudget::new();
        match crate::estimators::width::dp_width(
            &chain,
            &probe_params,
            d_upper,
            b_lower,
            &mut scratch,
            &mut stream2,
        ) {
            Ok(rep) => {
                let threshold = (1.0 + cfg.alpha) / c_d;
                fat_enough = rep.value >= threshold;
                width_probe = Some(WidthProbe {
                    value: rep.value,
                    probed_kappa,
                    threshold,
                    passed: fat_enough,
                });
            }
            Err(e) => warnings.push(format!("width probe failed open: {e}")),
        }
        budget.charge("stage2_width_probe", eps, 0.0)?;
        stage_marks.push(("stage2_width_probe".into(), budget.entries().len()));
    }
    timings.push(("stage2".into(), t2.elapsed().as_millis()));

    // Stage 3: private bounding box and fattening transform when the probe
    // did not certify fatness.
    let t3 = Instant::now();
    let mut box_section = None;
    let mut bbox_corners = None;
    let mut transform: Option<FatteningTransform> = None;
    let mut work_chain = chain.clone();
    if !fat_enough {
        let mut stream3 = cfg.mode.stream(3);
        let (bbox, box_report) = bbox_private(&chain, &params, &mut budget, &mut stream3)
            .map_err(|e| Error::stage("stage3_bounding_box", e))?;
        let ft = fattening_transform(&bbox, true)
            .map_err(|e| Error::stage("stage3_bounding_box", e))?;
        work_chain = ft.apply_chain(&chain);
        bbox_corners = Some(bbox.corners());
        box_section = Some(BoxSection {
            axes: bbox.axes.iter().map(|a| a.components().to_vec()).collect(),
            intervals: bbox.intervals.clone(),
            volume: bbox.volume(),
            report: box_report,
        });
        transform = Some(ft);
        stage_marks.push(("stage3_bounding_box".into(), budget.entries().len()));
    }
    timings.push(("stage3".into(), t3.elapsed().as_millis()));

    // Stage 4: kernel construction, pulled back through the transform.
    let t4 = Instant::now();
    let strategy = strategy_by_name(&cfg.kernel_strategy).ok_or_else(|| {
        Error::InvalidParam(format!(
            "unknown kernel strategy `{}`; registered: {:?}",
            cfg.kernel_strategy,
            crate::kernel::strategy_names()
        ))
    })?;
    let mut stream4 = cfg.mode.stream(4);
    let kern: KernelResult = strategy
        .build(
            &work_chain,
            &params,
            c_d,
            SearchGrid::unit(upsilon),
            &mut budget,
            &mut stream4,
        )
        .map_err(|e| Error::stage("stage4_kernel", e))?;
    stage_marks.push(("stage4_kernel".into(), budget.entries().len()));
    let pull = |p: &Point| -> Point {
        match &transform {
            Some(ft) => Point::new(ft.pull_back(p.coords())),
            None => p.clone(),
        }
    };
    let kernel_points: Vec<Point> = kern.points.iter().map(&pull).collect();
    let base = kern.base.as_ref().map(&pull);
    timings.push(("stage4".into(), t4.elapsed().as_millis()));

    // Stage 5: certification diagnostics and post-processed measures.
    let t5 = Instant::now();
    let inner = chain.region(chosen).expect("chosen <= kappa_max");
    let gamma_eff = params.effective_shift(kern.gamma_kernel);
    let outer_kappa = (chosen as f64 - gamma_eff).max(1.0) as usize;
    let outer = chain.region(outer_kappa).expect("outer_kappa <= chosen");
    let alpha_prime = if kern.strategy == "grid" {
        alpha_prime_additive(cfg.alpha, d)
    } else {
        alpha_prime_based(cfg.alpha, d)
    };
    let mut cert = kernel_certify(&kernel_points, inner, outer, alpha_prime)?;
    if let Some(b) = &base {
        let snap = inner
            .facets()
            .iter()
            .map(|h| h.eval(b.coords()))
            .fold(0.0_f64, f64::max);
        cert.base_snap_distance = Some(snap.max(0.0));
    }
    let measures = applied_measures(&kernel_points)?;
    timings.push(("stage5".into(), t5.elapsed().as_millis()));

    // Per-stage budget roll-up from the ledger marks.
    let mut stages = Vec::new();
    let mut prev = 0usize;
    for (name, upto) in &stage_marks {
        let slice = &budget.entries()[prev..*upto];
        stages.push(StageCharge {
            stage: name.clone(),
            epsilon: slice.iter().map(|e| e.epsilon).sum(),
            delta: slice.iter().map(|e| e.delta).sum(),
        });
        prev = *upto;
    }
    let report = PipelineReport {
        schema_version: "tukey-dp-report/v1".into(),
        dim: d,
        grid_exponent: upsilon,
        mode: match cfg.mode {
            NoiseMode::Disabled => "disabled".into(),
            NoiseMode::Seeded(s) => format!("seeded:{s}"),
        },
        epsilon_per_stage: eps,
        delta_per_stage: cfg.delta,
        alpha: cfg.alpha,
        beta: cfg.beta,
        noisy_count,
        prescribed_m_formula: "4*ceil(d^3*upsilon + d^3*log2(d))*delta_kernel".into(),
        delta_kernel_closed_form: delta_kernel,
        prescribed_m,
        used_m,
        chosen_kappa_raw: kappa_raw,
        chosen_kappa: chosen,
        c_d,
        width_probe,
        bounding_box: box_section,
        transform_applied: transform.is_some(),
        kernel: KernelSection {
            strategy: kern.strategy.clone(),
            kappa: kern.kappa,
            gamma_kernel: kern.gamma_kernel,
            base: base.as_ref().map(|b| b.coords().to_vec()),
            n_points: kernel_points.len(),
            points: kernel_points.iter().map(|p| p.coords().to_vec()).collect(),
        },
        certification: cert,
        measures,
        budget: BudgetSection {
            total_epsilon: budget.epsilon_spent(),
            total_delta: budget.delta_spent(),
            stages,
        },
        warnings,
        timings_ms: if cfg.include_timings { Some(timings) } else { None },
    };
    let artifacts = PipelineArtifacts {
        bbox_corners,
        chain,
        kernel_points,
        outer_kappa,
    };
    Ok((report, artifacts))
}
