use thiserror::Error;

/// Which symmetric-subspace condition a two-qubit matrix failed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SymmetryCheck {
    /// Local Bloch vectors of the two qubits differ.
    LocalVectors,
    /// The correlation tensor is not symmetric.
    CorrelationTensor,
    /// The state has weight on the singlet.
    SingletOverlap,
}

impl std::fmt::Display for SymmetryCheck {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let name = match self {
            SymmetryCheck::LocalVectors => "local_vectors",
            SymmetryCheck::CorrelationTensor => "correlation_tensor",
            SymmetryCheck::SingletOverlap => "singlet_overlap",
        };
        f.write_str(name)
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not Hermitian: entry ({row}, {col}) deviates by {deviation:e}")]
    NotHermitian { row: usize, col: usize, deviation: f64 },
    #[error("trace is {trace}, expected 1")]
    TraceNotOne { trace: f64 },
    #[error("inconsistent state parameters: {0}")]
    InconsistentParams(String),
    #[error("metric tensor undefined: det(1 - T) = {det:e}")]
    MetricUndefined { det: f64 },
    #[error("matrix is not positive semidefinite: minimum eigenvalue {min_eigenvalue:e}")]
    NotPositive { min_eigenvalue: f64 },
    #[error("invalid state: {0}")]
    InvalidState(String),
    #[error("not a symmetric two-qubit state: {check} check failed ({value:e})")]
    NotSymmetricState { check: SymmetryCheck, value: f64 },
    #[error("amplitudes are not normalized: norm² = {norm_sq}")]
    NotNormalized { norm_sq: f64 },
    #[error("Bloch vector outside the pseudo-qubit ball: a·a = {norm_sq} > 4/9")]
    OutOfBall { norm_sq: f64 },
    #[error("scene of case {case} has no closed surface to mesh")]
    DegenerateMesh { case: &'static str },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("mesh resolution lat={lat}, lon={lon} below minimum lat=4, lon=8")]
    MeshResolution { lat: usize, lon: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
