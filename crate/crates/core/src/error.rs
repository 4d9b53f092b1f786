use thiserror::Error;

/// Every failure the toolkit reports. The display strings are part of the
/// machine-readable error contract of the command-line tool.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("not a tree")]
    NotATree,
    #[error("bad vertex id")]
    BadVertexId,
    #[error("single vertex")]
    SingleVertex,
    #[error("p out of range")]
    POutOfRange,
    #[error("inexact division")]
    InexactDivision,
    #[error("pole at z")]
    PoleAtZ,
    #[error("integration tolerance not met")]
    IntegrationTolerance,
    #[error("hypothesis violated")]
    HypothesisViolated,
    #[error("cannot certify multiplicity")]
    CannotCertifyMultiplicity,
    #[error("cannot certify")]
    CannotCertify,
    #[error("pole of S")]
    PoleOfS,
    #[error("limit not converged")]
    LimitNotConverged,
    #[error("root near axis endpoint, enlarge T")]
    RootNearAxisEndpoint,
    #[error("s vanishes at λ")]
    SVanishes,
    #[error("rounding margin exceeded, increase n_schedule")]
    RoundingMarginExceeded,
    #[error("consistency check failed (ψ(±1)≠0)")]
    ConsistencyCheckFailed,
    #[error("non-integer degree ratio, inconsistent input")]
    NonIntegerDegreeRatio,
    #[error("no admissible splitting")]
    NoAdmissibleSplitting,
    #[error("singular system")]
    SingularSystem,
    #[error("degree overflow")]
    DegreeOverflow,
    #[error("no shape found")]
    NoShapeFound,
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("io error: {0}")]
    Io(String),
}

impl Error {
    /// Stable short identifier used in the JSON error object.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::NotATree => "not_a_tree",
            Error::BadVertexId => "bad_vertex_id",
            Error::SingleVertex => "single_vertex",
            Error::POutOfRange => "p_out_of_range",
            Error::InexactDivision => "inexact_division",
            Error::PoleAtZ => "pole_at_z",
            Error::IntegrationTolerance => "integration_tolerance",
            Error::HypothesisViolated => "hypothesis_violated",
            Error::CannotCertifyMultiplicity => "cannot_certify_multiplicity",
            Error::CannotCertify => "cannot_certify",
            Error::PoleOfS => "pole_of_s",
            Error::LimitNotConverged => "limit_not_converged",
            Error::RootNearAxisEndpoint => "root_near_axis_endpoint",
            Error::SVanishes => "s_vanishes",
            Error::RoundingMarginExceeded => "rounding_margin_exceeded",
            Error::ConsistencyCheckFailed => "consistency_check_failed",
            Error::NonIntegerDegreeRatio => "non_integer_degree_ratio",
            Error::NoAdmissibleSplitting => "no_admissible_splitting",
            Error::SingularSystem => "singular_system",
            Error::DegreeOverflow => "degree_overflow",
            Error::NoShapeFound => "no_shape_found",
            Error::InvalidInput(_) => "invalid_input",
            Error::Parse(_) => "parse_error",
            Error::Io(_) => "io_error",
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
