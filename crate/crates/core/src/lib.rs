pub mod bcf;
pub mod catalog;
pub mod charpoly;
pub mod checks;
pub mod cli;
pub mod error;
pub mod format;
pub mod inverse;
pub mod poly;
pub mod scattering;
pub mod spectral;
pub mod tree;
