//! The tree with a lead at its root: Jost and S-functions, common
//! eigenvalues, and the limit data used for shape recovery.

pub mod common;
pub mod jost;
pub mod record;

pub use common::{common_spectrum, CommonSpectrum};
pub use jost::{absorb_pendant_root, count_negative_eigenvalues, emat_residual, jost, s_function, LeadTree};
pub use record::{scattering_info, ScatterOptions, ScatteringRecord};
