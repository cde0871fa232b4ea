//! Bounding boxes: the non-private recursive approximation, the private
//! bounding box of a Tukey region, and the fattening transforms derived
//! from it.

pub mod nonprivate;
pub mod oriented;
pub mod private;
pub mod transform;

pub use nonprivate::bbox_nonprivate;
pub use oriented::OrientedBox;
pub use private::{bbox_private, delta_bb_formula, BoxReport};
pub use transform::{fattening_transform, FatteningTransform};
