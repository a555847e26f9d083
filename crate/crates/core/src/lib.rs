//! Littlewood-Richardson coefficients as lattice-point counts of hive polytopes.

pub mod counting;
pub mod hive;
pub mod klimyk;
pub mod latte;
pub mod linalg;
pub mod lll;
pub mod polyhedra;
pub mod saturation;
pub mod serde_util;
pub mod stretch;
pub mod triangulation;
pub mod weights;
