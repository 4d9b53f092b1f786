//! Forward spectral problem on an equilateral tree: potentials, fundamental
//! solutions, characteristic matrices and eigenvalues.

pub mod eigen;
pub mod fundamental;
pub mod identities;
pub mod matrix;
pub mod potential;

pub use eigen::{eigenvalues_in_interval, Eigenvalue};
pub use fundamental::{fundamental_values, FundamentalValues, LatticePoint};
pub use matrix::{char_functions, EndCondition, Problem, TreePolynomials};
pub use potential::Potential;
