use thiserror::Error;

/// Errors raised by the laboratory.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum LabError {
    #[error("eigensolver did not converge (off-diagonal residual {residual:.3e})")]
    EigFailure { residual: f64 },

    #[error("eigenvalue {value} at index {index} lies within {tol:.3e} of threshold {lambda}")]
    TieAtThreshold {
        lambda: f64,
        index: usize,
        value: f64,
        tol: f64,
    },

    #[error("bad parameters: {0}")]
    BadParams(String),

    #[error("quadrature did not reach relative accuracy {target:.1e} (last change {achieved:.3e})")]
    QuadratureFailure { target: f64, achieved: f64 },

    #[error("eigenvalue {value} of D lies outside [-1-tau, 1+tau]")]
    NotAProjectionDifference { value: f64 },

    #[error("interval ({lo}, {hi}) contains eigenvalue {value} of the unperturbed operator")]
    GapNotEmpty { lo: f64, hi: f64, value: f64 },

    #[error("admissible probe subspace exhausted after {produced} probes")]
    ProbeExhausted { produced: usize },

    #[error("vector is cyclic (Krylov dimension {dim} equals the order); complement is empty")]
    NothingToCheck { dim: usize },

    #[error("correction needs {required} shifts but the budget sequence holds {available}")]
    CorrectionInfeasible { required: usize, available: usize },

    #[error("shifted operator is singular (smallest |eigenvalue| {min_abs:.3e})")]
    SingularShift { min_abs: f64 },

    #[error("lambda {lambda} outside the admissible range of the resolvent map (bound {bound})")]
    OutOfRange { lambda: f64, bound: f64 },

    #[error("eigenvalues {index} and {} are not separated (gap {gap:.3e})", index + 1)]
    DegenerateSpectrum { index: usize, gap: f64 },

    #[error("vector has vanishing overlap {overlap:.3e} with eigenvector {index}")]
    NotCyclic { index: usize, overlap: f64 },

    #[error("atom {x} of the perturbed measure collides with atom {t} (separation {sep:.3e})")]
    AtomCollision { x: f64, t: f64, sep: f64 },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, LabError>;

impl LabError {
    /// Variant name, used as a stable tag in diagnostics.
    pub fn name(&self) -> &'static str {
        match self {
            LabError::EigFailure { .. } => "EigFailure",
            LabError::TieAtThreshold { .. } => "TieAtThreshold",
            LabError::BadParams(_) => "BadParams",
            LabError::QuadratureFailure { .. } => "QuadratureFailure",
            LabError::NotAProjectionDifference { .. } => "NotAProjectionDifference",
            LabError::GapNotEmpty { .. } => "GapNotEmpty",
            LabError::ProbeExhausted { .. } => "ProbeExhausted",
            LabError::NothingToCheck { .. } => "NothingToCheck",
            LabError::CorrectionInfeasible { .. } => "CorrectionInfeasible",
            LabError::SingularShift { .. } => "SingularShift",
            LabError::OutOfRange { .. } => "OutOfRange",
            LabError::DegenerateSpectrum { .. } => "DegenerateSpectrum",
            LabError::NotCyclic { .. } => "NotCyclic",
            LabError::AtomCollision { .. } => "AtomCollision",
            LabError::DimensionMismatch { .. } => "DimensionMismatch",
            LabError::Config(_) => "Config",
            LabError::Io(_) => "Io",
        }
    }
}

impl From<std::io::Error> for LabError {
    fn from(e: std::io::Error) -> Self {
        LabError::Io(e.to_string())
    }
}

impl From<serde_json::Error> for LabError {
    fn from(e: serde_json::Error) -> Self {
        LabError::Config(e.to_string())
    }
}
