use thiserror::Error;

/// Errors raised by the numerical pipeline.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("chain of {n_sites} sites exceeds the dense limit of {max} sites")]
    TooManySites { n_sites: usize, max: usize },

    #[error("chain needs at least {min} sites, got {n_sites}")]
    TooFewSites { n_sites: usize, min: usize },

    #[error("site {site} out of range 1..={n_sites}")]
    SiteOutOfRange { site: usize, n_sites: usize },

    #[error("two-site operator needs distinct sites, got {0} twice")]
    SameSite(usize),

    #[error("a standalone sigma^y is imaginary; only sigma^y sigma^y pairs are supported")]
    ImaginaryOperator,

    #[error("invalid chain parameters: {0}")]
    InvalidSpec(String),

    #[error("bond {bond} is not part of a chain with {n_sites} sites ({boundary})")]
    BondOutOfRange {
        bond: usize,
        n_sites: usize,
        boundary: &'static str,
    },

    #[error("matrix is not symmetric: |a_ij - a_ji| = {deviation:e} at ({row}, {col})")]
    NotSymmetric {
        row: usize,
        col: usize,
        deviation: f64,
    },

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("hamiltonian does not conserve the magnetization: element ({row}, {col}) = {value:e} couples different sectors")]
    SectorLeak { row: usize, col: usize, value: f64 },

    #[error("temperature must be positive, got kT = {0}")]
    NonPositiveTemperature(f64),

    #[error("weights do not sum to one (sum = {0})")]
    UnnormalizedWeights(f64),

    #[error("sector field shift requested but the decomposition carries no magnetization labels")]
    MissingSectorLabels,

    #[error("eigensolver failed: {0}")]
    Eigensolver(String),

    #[error("invalid two-qubit state: {0}")]
    InvalidState(String),

    #[error("invalid sweep request: {0}")]
    InvalidSweep(String),

    #[error("series has {len} points, fewer than the minimum plateau width {min_width}")]
    SeriesTooShort { len: usize, min_width: usize },

    #[error("concurrence never drops below {zero_tol:e} at the end of the sweep; extend the field range")]
    NoCriticalField { zero_tol: f64 },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
