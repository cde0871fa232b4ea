//! End-to-end pipeline, data ingestion, synthetic generators, reporting and
//! 2-d SVG rendering.

pub mod gen;
pub mod io;
pub mod measures;
pub mod run;
pub mod schema;
pub mod svg;

pub use gen::{generator_by_name, generator_names, generators, PointGenerator};
pub use io::{emit_report, load_points, save_points_csv, save_points_json};
pub use measures::{applied_measures, min_enclosing_ball, Measures};
pub use run::{run_pipeline, PipelineArtifacts, PipelineConfig, PipelineReport};
pub use svg::{render_svg, SvgScene};
