//! Exact geometry of l1, l2 and linf preference profiles in the plane.

pub mod arrangement;
pub mod constructions;
pub mod geometry;
pub mod profiles;
