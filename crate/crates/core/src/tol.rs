//! Numerical tolerances shared by every module.

/// Maximum entrywise deviation `|M - M†|` accepted for a Hermitian input.
pub const HERM_TOL: f64 = 1e-10;
/// Target accuracy of the eigensolver and of unitarity checks.
pub const EIG_TOL: f64 = 1e-12;
/// Eigenvalues of a density matrix above this count toward its rank; below
/// `-RANK_TOL` the matrix is not positive semidefinite.
pub const RANK_TOL: f64 = 1e-9;
/// `det(1 - T)` at or below this value leaves the metric tensor undefined.
pub const SING_TOL: f64 = 1e-10;
/// Semi-axes at or below this length count as vanished.
pub const AXIS_TOL: f64 = 1e-7;
/// Allowed deviation of a density-matrix trace from one.
pub const TRACE_TOL: f64 = 1e-12;
/// Eigenvalues closer than this are treated as one degenerate cluster.
pub const DEGEN_TOL: f64 = 1e-9;
/// Consistency of `omega` with the diagonal of `T`.
pub const PARAM_TOL: f64 = 1e-12;
/// Singlet weight, `a - b` and `T - Tᵀ` limits for symmetric two-qubit input.
pub const SYMMETRIC_TOL: f64 = 1e-10;
/// Normalization slack for pure-state amplitudes.
pub const NORM_TOL: f64 = 1e-10;
/// Inner products and r/k conditions below this are zero.
pub const ORTHO_TOL: f64 = 1e-10;
/// Minimum partial-transpose eigenvalue still counted as positive.
pub const PPT_TOL: f64 = 1e-9;
/// Modulus below which an amplitude is skipped when fixing the global phase.
pub const GAUGE_TOL: f64 = 1e-12;
/// Slack on the pseudo-qubit ball `a·a <= 4/9`.
pub const BALL_TOL: f64 = 1e-12;
