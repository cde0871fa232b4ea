//! Command-line interface: exact depth/region queries, the private
//! estimators, kernel construction, depth selection, the end-to-end
//! pipeline, synthetic data generation, and the sensitivity audit.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use tukey_dp::bbox::{bbox_nonprivate, bbox_private, fattening_transform};
use tukey_dp::dp::budget::PrivacyBudget;
use tukey_dp::dp::noise::NoiseMode;
use tukey_dp::dp::qc::SearchGrid;
use tukey_dp::error::Error;
use tukey_dp::estimators::report::DpParams;
use tukey_dp::estimators::{dp_diameter, dp_width};
use tukey_dp::geo::point::Point;
use tukey_dp::kappa::{shifted_exp_mechanism, q_sensitivity_audit, KappaQueryTable};
use tukey_dp::kernel::strategy_by_name;
use tukey_dp::pipeline::gen::generator_by_name;
use tukey_dp::pipeline::io::{emit_report, load_points, save_points_csv, save_points_json};
use tukey_dp::pipeline::run::{run_pipeline, PipelineConfig};
use tukey_dp::pipeline::svg::{render_svg, SvgScene};
use tukey_dp::tukey::{region_chain, tukey_depth, PointSet, RegionChain};

#[derive(Parser)]
#[command(name = "tukey-dp", version, about = "Differentially private geometric features of Tukey regions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Common {
    /// Input points: CSV with d numeric columns, or JSON array of d-arrays.
    #[arg(long)]
    input: Option<PathBuf>,
    #[arg(long, default_value_t = 2)]
    dim: usize,
    /// Grid exponent: coordinates are multiples of 2^-grid-exp in [0,1].
    #[arg(long = "grid-exp", default_value_t = 8)]
    grid_exp: u32,
    #[arg(long, default_value_t = 1.0)]
    epsilon: f64,
    #[arg(long, default_value_t = 1e-6)]
    delta: f64,
    #[arg(long, default_value_t = 0.25)]
    alpha: f64,
    #[arg(long, default_value_t = 0.05)]
    beta: f64,
    #[arg(long)]
    kappa: Option<usize>,
    /// RNG seed; omit for entropy-seeded noise.
    #[arg(long, conflicts_with = "no_noise")]
    seed: Option<u64>,
    /// Zero all noise and margins. Voids privacy; for testing only.
    #[arg(long = "no-noise")]
    no_noise: bool,
    /// Write the result here instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long, default_value = "json")]
    format: String,
}

impl Common {
    fn mode(&self) -> NoiseMode {
        if self.no_noise {
            NoiseMode::Disabled
        } else {
            NoiseMode::Seeded(self.seed.unwrap_or_else(rand::random))
        }
    }

    fn load(&self) -> Result<PointSet, Error> {
        let path = self
            .input
            .clone()
            .ok_or_else(|| Error::InvalidParam("--input is required".into()))?;
        load_points(&path, self.dim, self.grid_exp)
    }

    fn params(&self, kappa: usize) -> Result<DpParams, Error> {
        if !(4..=32).contains(&self.grid_exp) {
            return Err(Error::InvalidParam("grid-exp must lie in [4, 32]".into()));
        }
        let p = DpParams {
            epsilon: self.epsilon,
            delta: self.delta,
            alpha: self.alpha,
            beta: self.beta,
            kappa,
            upsilon: self.grid_exp,
            mode: self.mode(),
        };
        p.validate()?;
        Ok(p)
    }

    fn emit(&self, value: &serde_json::Value) -> Result<(), Error> {
        match &self.output {
            Some(path) => emit_report(value, path),
            None => {
                println!("{}", serde_json::to_string_pretty(value)?);
                Ok(())
            }
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Exact (non-private) Tukey depth of a query point, or the depth range.
    Depth {
        #[command(flatten)]
        common: Common,
        /// Query point as comma-separated coordinates.
        #[arg(long)]
        point: Option<String>,
    },
    /// Exact (non-private) Tukey region at a depth.
    Region {
        #[command(flatten)]
        common: Common,
    },
    /// Private diameter estimate of the kappa-Tukey region.
    Diam {
        #[command(flatten)]
        common: Common,
    },
    /// Private width estimate of the kappa-Tukey region.
    Width {
        #[command(flatten)]
        common: Common,
        #[arg(long = "d-upper")]
        d_upper: Option<f64>,
        #[arg(long = "b-lower")]
        b_lower: Option<f64>,
    },
    /// Private (or, with --non-private, exact recursive) bounding box.
    Bbox {
        #[command(flatten)]
        common: Common,
        #[arg(long = "non-private")]
        non_private: bool,
        /// Diameter slack factor for the non-private recursion.
        #[arg(long, default_value_t = 1.0)]
        gamma: f64,
    },
    /// Private kernel of the kappa-Tukey region.
    Kernel {
        #[command(flatten)]
        common: Common,
        /// Registered strategy: grid | directional.
        #[arg(long, default_value = "directional")]
        strategy: String,
        #[arg(long = "c-d")]
        c_d: Option<f64>,
    },
    /// Private selection of a depth with stable region volume.
    SelectKappa {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        m: Option<usize>,
    },
    /// Full pipeline: select kappa, fatten if needed, build the kernel.
    Pipeline {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value = "directional")]
        strategy: String,
        #[arg(long = "c-d")]
        c_d: Option<f64>,
        #[arg(long)]
        m: Option<usize>,
        #[arg(long = "skip-width-probe")]
        skip_width_probe: bool,
        /// Include per-stage timings (breaks byte-stable output).
        #[arg(long)]
        timings: bool,
    },
    /// Generate a synthetic point set.
    Gen {
        #[command(flatten)]
        common: Common,
        /// Registered family: uniform | gaussian-clipped | ring | volatile-depth.
        #[arg(long, default_value = "uniform")]
        family: String,
        #[arg(long, default_value_t = 100)]
        n: usize,
    },
    /// Non-private audit of the shifted query sensitivity.
    Audit {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 8)]
        m: usize,
        #[arg(long, default_value_t = 10)]
        trials: usize,
    },
}

fn full_chain(ps: &PointSet) -> Result<RegionChain, Error> {
    region_chain(ps, ps.len() / 2)
}

fn run(cli: Cli) -> Result<(), Error> {
    match cli.command {
        Command::Depth { common, point } => {
            let ps = common.load()?;
            let out = match point {
                Some(text) => {
                    let coords: Result<Vec<f64>, _> =
                        text.split(',').map(|c| c.trim().parse::<f64>()).collect();
                    let coords = coords
                        .map_err(|e| Error::InvalidParam(format!("bad --point: {e}")))?;
                    if coords.len() != ps.dim() {
                        return Err(Error::InvalidParam("point dimension mismatch".into()));
                    }
                    json!({ "point": coords, "depth": tukey_depth(&coords, ps.points()) })
                }
                None => {
                    let chain = full_chain(&ps)?;
                    json!({ "n": ps.len(), "kappa_max": chain.kappa_max() })
                }
            };
            common.emit(&out)
        }
        Command::Region { common } => {
            let kappa = common.kappa.unwrap_or(1);
            let ps = common.load()?;
            let chain = region_chain(&ps, kappa)?;
            let region = chain.region(kappa);
            if common.format == "svg" {
                let path = common
                    .output
                    .clone()
                    .ok_or_else(|| Error::InvalidParam("--output required for svg".into()))?;
                if ps.dim() != 2 {
                    return Err(Error::InvalidParam("svg output is 2-d only".into()));
                }
                let mut polygons = Vec::new();
                if let Some(r) = region {
                    polygons.push((ring2(r), "steelblue".to_string()));
                }
                let scene = SvgScene {
                    points: ps.points().iter().map(|p| [p[0], p[1]]).collect(),
                    polygons,
                };
                return render_svg(&scene, &path);
            }
            let out = match region {
                Some(r) => json!({
                    "kappa": kappa,
                    "vertices": r.vertices().iter().map(|v| v.coords().to_vec()).collect::<Vec<_>>(),
                    "volume": r.volume().unwrap_or(0.0),
                    "degenerate": r.is_degenerate(),
                }),
                None => json!({ "kappa": kappa, "empty": true }),
            };
            common.emit(&out)
        }
        Command::Diam { common } => {
            let kappa = common.kappa.unwrap_or(1);
            let ps = common.load()?;
            let params = common.params(kappa)?;
            let chain = full_chain(&ps)?;
            let mut budget = PrivacyBudget::new();
            let mut stream = params.mode.stream(0);
            let rep = dp_diameter(&chain, &params, &mut budget, &mut stream)?;
            common.emit(&json!({
                "kappa": kappa,
                "value": rep.value,
                "delta_depth": rep.delta_depth,
                "halted": rep.halt,
                "epsilon": rep.epsilon,
            }))
        }
        Command::Width {
            common,
            d_upper,
            b_lower,
        } => {
            let kappa = common.kappa.unwrap_or(1);
            let ps = common.load()?;
            let params = common.params(kappa)?;
            let d_upper = d_upper.unwrap_or((ps.dim() as f64).sqrt());
            let b_lower = match b_lower {
                Some(b) => b,
                None => {
                    eprintln!(
                        "warning: --b-lower left at the naive grid bound; runtime degrades \
                         toward poly(1/grid)"
                    );
                    2.0_f64.powi(-(common.grid_exp as i32))
                }
            };
            let chain = full_chain(&ps)?;
            let mut budget = PrivacyBudget::new();
            let mut stream = params.mode.stream(0);
            let rep = dp_width(&chain, &params, d_upper, b_lower, &mut budget, &mut stream)?;
            common.emit(&json!({
                "kappa": kappa,
                "value": rep.value,
                "delta_depth": rep.delta_depth,
                "halted": rep.halt,
                "epsilon": rep.epsilon,
            }))
        }
        Command::Bbox {
            common,
            non_private,
            gamma,
        } => {
            let kappa = common.kappa.unwrap_or(1);
            let ps = common.load()?;
            if non_private {
                let b = bbox_nonprivate(ps.points(), gamma)?;
                return common.emit(&json!({
                    "axes": b.axes.iter().map(|a| a.components().to_vec()).collect::<Vec<_>>(),
                    "intervals": b.intervals,
                    "volume": b.volume(),
                }));
            }
            let params = common.params(kappa)?;
            let chain = full_chain(&ps)?;
            let mut budget = PrivacyBudget::new();
            let mut stream = params.mode.stream(0);
            let (b, report) = bbox_private(&chain, &params, &mut budget, &mut stream)?;
            let transform = fattening_transform(&b, true)?;
            common.emit(&json!({
                "axes": b.axes.iter().map(|a| a.components().to_vec()).collect::<Vec<_>>(),
                "intervals": b.intervals,
                "volume": b.volume(),
                "delta_bb": report.delta_bb,
                "delta_summands": {
                    "diam": report.delta_diam,
                    "direction": report.delta_dir,
                    "completions": report.delta_completions,
                },
                "transform_forward_shift": transform.forward.shift,
            }))
        }
        Command::Kernel {
            common,
            strategy,
            c_d,
        } => {
            let kappa = common.kappa.unwrap_or(1);
            let ps = common.load()?;
            let params = common.params(kappa)?;
            let chain = full_chain(&ps)?;
            let strat = strategy_by_name(&strategy).ok_or_else(|| {
                Error::InvalidParam(format!(
                    "unknown strategy `{strategy}`; registered: {:?}",
                    tukey_dp::kernel::strategy_names()
                ))
            })?;
            let c_d = c_d.unwrap_or(2.0 * ps.dim() as f64);
            let mut budget = PrivacyBudget::new();
            let mut stream = params.mode.stream(0);
            let res = strat.build(
                &chain,
                &params,
                c_d,
                SearchGrid::unit(common.grid_exp),
                &mut budget,
                &mut stream,
            )?;
            if common.format == "svg" {
                let path = common
                    .output
                    .clone()
                    .ok_or_else(|| Error::InvalidParam("--output required for svg".into()))?;
                if ps.dim() != 2 {
                    return Err(Error::InvalidParam("svg output is 2-d only".into()));
                }
                let mut polygons = Vec::new();
                if let Some(r) = chain.region(kappa) {
                    polygons.push((ring2(r), "steelblue".to_string()));
                }
                if let Ok(hull) = tukey_dp::geo::hull::convex_hull(&res.points) {
                    polygons.push((ring2(&hull), "darkorange".to_string()));
                }
                let scene = SvgScene {
                    points: ps.points().iter().map(|p| [p[0], p[1]]).collect(),
                    polygons,
                };
                return render_svg(&scene, &path);
            }
            common.emit(&json!({
                "strategy": res.strategy,
                "kappa": res.kappa,
                "gamma_kernel": res.gamma_kernel,
                "base": res.base.as_ref().map(|b| b.coords().to_vec()),
                "n_points": res.points.len(),
                "points": res.points.iter().map(|p| p.coords().to_vec()).collect::<Vec<_>>(),
                "budget_epsilon": budget.epsilon_spent(),
                "budget_delta": budget.delta_spent(),
            }))
        }
        Command::SelectKappa { common, m } => {
            let ps = common.load()?;
            let m = m.unwrap_or_else(|| (16.0 / common.epsilon).ceil() as usize);
            let chain = region_chain(&ps, m)?;
            let table = KappaQueryTable::from_chain(&chain, m);
            let mut stream = common.mode().stream(0);
            let selected = shifted_exp_mechanism(&table, common.epsilon, &mut stream)?;
            common.emit(&json!({
                "m": m,
                "selected_raw": selected,
                "selected": selected.clamp(1, m as i64),
                "epsilon": common.epsilon,
            }))
        }
        Command::Pipeline {
            common,
            strategy,
            c_d,
            m,
            skip_width_probe,
            timings,
        } => {
            let ps = common.load()?;
            let cfg = PipelineConfig {
                epsilon: common.epsilon,
                delta: common.delta,
                alpha: common.alpha,
                beta: common.beta,
                mode: common.mode(),
                kappa_override: common.kappa,
                c_d_override: c_d,
                m_override: m,
                kernel_strategy: strategy,
                skip_width_probe,
                include_timings: timings,
            };
            let (report, artifacts) = run_pipeline(&ps, &cfg)?;
            if common.format == "svg" {
                let path = common
                    .output
                    .clone()
                    .ok_or_else(|| Error::InvalidParam("--output required for svg".into()))?;
                if ps.dim() != 2 {
                    // 3-d scenes ship the JSON geometry for external viewers.
                    return emit_report(&report, &path);
                }
                let mut polygons = Vec::new();
                if let Some(r) = artifacts.chain.region(report.chosen_kappa) {
                    polygons.push((ring2(r), "steelblue".to_string()));
                }
                if artifacts.outer_kappa < report.chosen_kappa {
                    if let Some(r) = artifacts.chain.region(artifacts.outer_kappa) {
                        polygons.push((ring2(r), "seagreen".to_string()));
                    }
                }
                if let Ok(hull) = tukey_dp::geo::hull::convex_hull(&artifacts.kernel_points) {
                    polygons.push((ring2(&hull), "darkorange".to_string()));
                }
                if let Some(corners) = &artifacts.bbox_corners {
                    let ring: Vec<[f64; 2]> =
                        tukey_dp::geo::hull::hull_ring2(&corners.iter().map(|c| [c[0], c[1]]).collect::<Vec<_>>());
                    polygons.push((ring, "crimson".to_string()));
                }
                let scene = SvgScene {
                    points: ps.points().iter().map(|p| [p[0], p[1]]).collect(),
                    polygons,
                };
                return render_svg(&scene, &path);
            }
            match &common.output {
                Some(path) => emit_report(&report, path),
                None => {
                    println!("{}", serde_json::to_string_pretty(&report)?);
                    Ok(())
                }
            }
        }
        Command::Gen { common, family, n } => {
            let gen = generator_by_name(&family).ok_or_else(|| {
                Error::InvalidParam(format!(
                    "unknown family `{family}`; registered: {:?}",
                    tukey_dp::pipeline::gen::generator_names()
                ))
            })?;
            let seed = common.seed.unwrap_or(0);
            let ps = gen.generate(n, common.dim, common.grid_exp, seed)?;
            match &common.output {
                Some(path) if path.extension().and_then(|e| e.to_str()) == Some("json") => {
                    save_points_json(&ps, path)
                }
                Some(path) => save_points_csv(&ps, path),
                None => {
                    for p in ps.points() {
                        let row: Vec<String> =
                            p.coords().iter().map(|c| format!("{c}")).collect();
                        println!("{}", row.join(","));
                    }
                    Ok(())
                }
            }
        }
        Command::Audit { common, m, trials } => {
            let ps = common.load()?;
            use rand::prelude::*;
            let mut rng = rand_seed(common.seed.unwrap_or(0));
            let step = 2.0_f64.powi(-(common.grid_exp as i32));
            let mut worst = 0usize;
            for _ in 0..trials {
                let x = Point::new(
                    (0..ps.dim())
                        .map(|_| ((rng.gen::<f64>() / step).round() * step).clamp(0.0, 1.0))
                        .collect(),
                );
                worst = worst.max(q_sensitivity_audit(&ps, &x, m)?);
            }
            common.emit(&json!({
                "m": m,
                "trials": trials,
                "max_shifted_difference": worst,
                "bound": 1,
                "within_bound": worst <= 1,
            }))
        }
    }
}

fn ring2(p: &tukey_dp::geo::polytope::Polytope) -> Vec<[f64; 2]> {
    p.vertices().iter().map(|v| [v[0], v[1]]).collect()
}

fn rand_seed(seed: u64) -> rand_chacha::ChaCha8Rng {
    use rand::SeedableRng;
    rand_chacha::ChaCha8Rng::seed_from_u64(seed)
}

fn exit_code_for(err: &Error) -> u8 {
    match err {
        Error::Parse { .. }
        | Error::OffGrid { .. }
        | Error::InvalidParam(_)
        | Error::MTooSmall { .. }
        | Error::UnsupportedDimension(_)
        | Error::DegenerateInput { .. } => 2,
        Error::AbortTooSmall { .. } => 3,
        _ => 4,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            let mut src = std::error::Error::source(&e);
            while let Some(s) = src {
                eprintln!("  caused by: {s}");
                src = s.source();
            }
            ExitCode::from(exit_code_for(&e))
        }
    }
}
