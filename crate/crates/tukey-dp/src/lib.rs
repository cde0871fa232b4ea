//! Exact Tukey-depth machinery for low-dimensional point sets, plus
//! differentially private estimators of geometric features of Tukey regions:
//! interior points, diameter, width, minimum bounding boxes, kernels, and a
//! private selector for a depth whose region has stable volume.

pub mod error;
pub mod geo;
pub mod dp;
pub mod estimators;
pub mod bbox;
pub mod kappa;
pub mod kernel;
pub mod pipeline;
pub mod tukey;

pub use error::{Error, Result};
