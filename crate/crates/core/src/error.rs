use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Every failure the simulator can report.
///
/// `module()` and `code()` give stable machine-readable labels so front ends
/// can serialize errors without matching on display strings.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid sector: {0}")]
    InvalidSector(String),

    #[error("invalid momentum: {0}")]
    InvalidMomentum(String),

    #[error("Lanczos did not converge after {iterations} iterations (best residual {residual:.3e})")]
    Convergence { iterations: usize, residual: f64 },

    #[error("degenerate spectrum: spectral width is zero on a {dimension}-dimensional space")]
    DegenerateSpectrum { dimension: usize },

    #[error("scaled eigenvalue {lambda} lies outside [0, 1]")]
    SpectrumOutOfRange { lambda: f64 },

    #[error("capacity exceeded: {0}")]
    Capacity(String),

    #[error("excitation operator annihilates the ground state")]
    NullExcitation,

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("inconsistent inputs: {0}")]
    InconsistentInputs(String),

    #[error("argument out of domain: {0}")]
    Domain(String),

    #[error("outcome y = {y} has probability {probability:.3e}; cannot condition on it")]
    ImprobableOutcome { y: usize, probability: f64 },

    #[error("conditioning event has probability {probability:.3e}")]
    NullCondition { probability: f64 },

    #[error("operator contract violated: {0}")]
    Contract(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
}

impl Error {
    /// Short snake-case identifier for the error kind.
    pub fn code(&self) -> &'static str {
        match self {
            Error::InvalidSector(_) => "invalid_sector",
            Error::InvalidMomentum(_) => "invalid_momentum",
            Error::Convergence { .. } => "convergence",
            Error::DegenerateSpectrum { .. } => "degenerate_spectrum",
            Error::SpectrumOutOfRange { .. } => "spectrum_out_of_range",
            Error::Capacity(_) => "capacity",
            Error::NullExcitation => "null_excitation",
            Error::Numerical(_) => "numerical",
            Error::InconsistentInputs(_) => "inconsistent_inputs",
            Error::Domain(_) => "domain",
            Error::ImprobableOutcome { .. } => "improbable_outcome",
            Error::NullCondition { .. } => "null_condition",
            Error::Contract(_) => "contract",
            Error::DimensionMismatch { .. } => "dimension_mismatch",
        }
    }

    /// The library module that raises this kind of error.
    pub fn module(&self) -> &'static str {
        match self {
            Error::InvalidSector(_) | Error::InvalidMomentum(_) => "model",
            Error::Convergence { .. } | Error::DegenerateSpectrum { .. } | Error::SpectrumOutOfRange { .. } => {
                "spectral"
            }
            Error::NullExcitation | Error::InconsistentInputs(_) => "prep",
            Error::ImprobableOutcome { .. } | Error::NullCondition { .. } | Error::Contract(_) => "finalstate",
            Error::Capacity(_) | Error::Domain(_) => "response",
            Error::Numerical(_) | Error::DimensionMismatch { .. } => "linalg",
        }
    }
}
