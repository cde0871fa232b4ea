//! Exact (non-private) convex geometry: hulls, halfspace intersections, LPs,
//! volumes, extents, rotations and sphere covers. Everything here is a pure
//! function of its inputs and safe to call concurrently.

pub mod affine;
pub mod clip;
pub mod cover;
pub mod halfspace;
pub mod hull;
pub mod lp;
pub mod point;
pub mod polytope;

pub use affine::AffineMap;
pub use cover::{angle_cover, AngleCover};
pub use halfspace::Halfspace;
pub use hull::{convex_hull, halfspace_intersection};
pub use lp::{lp_solve, Sense};
pub use point::{Direction, Point, Rotation};
pub use polytope::Polytope;
