//! Bohr and Rogosinski radii for sense-preserving K-quasiconformal harmonic
//! mappings over concave, convex and starlike families, with a numerical
//! certifier for the resulting inequalities.

pub mod certify;
pub mod error;
pub mod families;
pub mod series;
pub mod solver;
