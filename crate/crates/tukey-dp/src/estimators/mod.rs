//! Private estimators over a memoized region chain: interior point, pair at
//! prescribed separation, diameter, width, max projection and the
//! large-depth direction scan.

pub mod diameter;
pub mod direction;
pub mod oracles;
pub mod point_in_region;
pub mod projection;
pub mod report;
pub mod width;

pub use diameter::dp_diameter;
pub use direction::{delta_large_tdc_dir, dp_large_tdc_direction};
pub use point_in_region::{dp_complete_prefix, dp_pair_at_distance, dp_point_in_region, PairResult};
pub use projection::dp_max_projection;
pub use report::{svt_delta_depth, svt_margin, DpParams, EstimateReport};
pub use width::dp_width;
