//! Shape recovery: interpolation of the polynomial pair from scattering data
//! and the branched reconstruction of the tree.

pub mod diophantine;
pub mod interpolate;
pub mod linear;
pub mod recover;
pub mod snowflake;

pub use diophantine::{diophantine_reciprocals, diophantine_reciprocals_bounded};
pub use interpolate::{interpolate_polynomials, interpolate_values};
pub use recover::{
    reciprocal_sum, recover_d0, recover_from_ratio, recover_shape, split_psihat, undetermined_coefficients,
    RecoveryResult, TraceEntry,
};
pub use snowflake::recover_snowflake;
