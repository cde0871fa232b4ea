//! Randomness and mechanism plumbing: Laplace samplers, the sparse-vector
//! runner, exponential-mechanism sampling, the private quasi-concave
//! maximizer, and the privacy-budget ledger.

pub mod budget;
pub mod expmech;
pub mod noise;
pub mod qc;
pub mod svt;

pub use budget::{advanced_composition, PrivacyBudget};
pub use expmech::exp_mechanism_sample;
pub use noise::{sample_discrete_laplace, sample_laplace, NoiseMode, NoiseStream};
pub use qc::{alpha_qc, dp_binary_search_qc, QuasiConcaveOracle, SearchGrid};
pub use svt::{svt_run, SvtOutcome};
