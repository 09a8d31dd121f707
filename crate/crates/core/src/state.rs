//! Qutrit density matrices and their (a, q, ω, T̂) parametrization.
//!
//! The density matrix is read in the spin-1 Cartesian basis where `S_j²` is
//! diagonal. Its real part fixes the correlation tensor `T̂ = 1 - 2 Re ρ`
//! and the antisymmetric imaginary part carries the Bloch vector:
//!
//! ```text
//! ρ = ½ [ (1 - T̂) - i E(a) ],   E(a)_jk = Σ_l ε_jkl a_l
//! ```
//!
//! so `a_x = 2 Im ρ[2][1]`, `a_y = 2 Im ρ[0][2]`, `a_z = 2 Im ρ[1][0]`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{
    dot, eig_hermitian3, mat_vec, transpose, ComplexMat3, EigenSystem3, RealEigenSystem3,
    RealSymMat3, Vec3, C64,
};
use crate::tol::{AXIS_TOL, PARAM_TOL, RANK_TOL, SING_TOL, TRACE_TOL};

pub type BlochVector = Vec3;
pub type CorrelationTensor = RealSymMat3;

/// Hermitian, unit-trace 3×3 matrix.
///
/// Construction checks Hermiticity and trace only; positivity is checked on
/// demand by [`QutritDensity::ensure_positive`] since boundary states need a
/// tolerance decision the caller should see.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QutritDensity {
    mat: ComplexMat3,
}

impl QutritDensity {
    pub fn new(mat: ComplexMat3) -> Result<Self> {
        mat.check_hermitian()?;
        let trace = mat.trace().re;
        if (trace - 1.0).abs() > TRACE_TOL {
            return Err(Error::TraceNotOne { trace });
        }
        Ok(QutritDensity {
            mat: mat.hermitian_part(),
        })
    }

    /// Maximally mixed state `1/3`.
    pub fn maximally_mixed() -> Self {
        QutritDensity {
            mat: ComplexMat3::identity().scale_real(1.0 / 3.0),
        }
    }

    /// `|ψ⟩⟨ψ|` for amplitudes normalized to within `TRACE_TOL`.
    pub fn from_pure(amp: &[C64; 3]) -> Result<Self> {
        Self::new(ComplexMat3::outer(amp))
    }

    pub fn matrix(&self) -> &ComplexMat3 {
        &self.mat
    }

    pub fn eigen(&self) -> EigenSystem3 {
        eig_hermitian3(&self.mat).expect("stored matrix is Hermitian")
    }

    pub fn eigenvalues(&self) -> Vec3 {
        self.eigen().values
    }

    pub fn det(&self) -> f64 {
        self.mat.det().re
    }

    pub fn purity(&self) -> f64 {
        (self.mat * self.mat).trace().re
    }

    pub fn ensure_positive(&self) -> Result<()> {
        let min = self.eigen().min_value();
        if min < -RANK_TOL {
            return Err(Error::NotPositive {
                min_eigenvalue: min,
            });
        }
        Ok(())
    }
}

/// The full parameter bundle of a qutrit state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StateParams {
    /// Bloch vector `a_j = ⟨S_j⟩`.
    pub a: BlochVector,
    /// Off-diagonal correlations `q_x = T_yz`, `q_y = T_xz`, `q_z = T_xy`.
    pub q: Vec3,
    /// Diagonal weights `ω_j = (1 - T_jj) / 2 = ρ_jj`.
    pub omega: Vec3,
    #[serde(with = "sym_rows")]
    pub t: CorrelationTensor,
}

mod sym_rows {
    use super::RealSymMat3;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(m: &RealSymMat3, s: S) -> Result<S::Ok, S::Error> {
        m.rows().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<RealSymMat3, D::Error> {
        Ok(RealSymMat3::from_rows(<[[f64; 3]; 3]>::deserialize(d)?))
    }
}

impl StateParams {
    /// Derives `q` and `ω` from `T`.
    pub fn from_bloch_and_tensor(a: BlochVector, t: CorrelationTensor) -> Self {
        StateParams {
            a,
            q: [t.get(1, 2), t.get(0, 2), t.get(0, 1)],
            omega: [0, 1, 2].map(|j| 0.5 * (1.0 - t.get(j, j))),
            t,
        }
    }
}

/// Splits a density matrix into `(a, q, ω, T̂)`.
pub fn decompose(rho: &QutritDensity) -> StateParams {
    let m = rho.matrix();
    let mut rows = [[0.0; 3]; 3];
    for (j, row) in rows.iter_mut().enumerate() {
        for (k, x) in row.iter_mut().enumerate() {
            let delta = if j == k { 1.0 } else { 0.0 };
            *x = delta - 2.0 * m[(j, k)].re;
        }
    }
    let t = RealSymMat3::from_rows(rows);
    let a = [
        m[(2, 1)].im - m[(1, 2)].im,
        m[(0, 2)].im - m[(2, 0)].im,
        m[(1, 0)].im - m[(0, 1)].im,
    ];
    let mut p = StateParams::from_bloch_and_tensor(a, t);
    p.omega = [0, 1, 2].map(|j| m[(j, j)].re);
    p
}

/// Same as [`decompose`] but for a raw matrix, after the Hermitian and trace
/// checks.
pub fn decompose_matrix(m: &ComplexMat3) -> Result<StateParams> {
    Ok(decompose(&QutritDensity::new(*m)?))
}

/// Inverse of [`decompose`]: `ρ = ½[(1 - T) - i E(a)]`.
pub fn compose(p: &StateParams) -> Result<QutritDensity> {
    let t = &p.t;
    for j in 0..3 {
        let expected = 0.5 * (1.0 - t.get(j, j));
        if (p.omega[j] - expected).abs() > PARAM_TOL {
            return Err(Error::InconsistentParams(format!(
                "omega[{j}] = {} but (1 - T[{j}][{j}]) / 2 = {expected}",
                p.omega[j]
            )));
        }
    }
    let sum: f64 = p.omega.iter().sum();
    if (sum - 1.0).abs() > PARAM_TOL {
        return Err(Error::InconsistentParams(format!(
            "omega sums to {sum}, trace(T) = {}",
            t.trace()
        )));
    }
    Ok(QutritDensity {
        mat: compose_unchecked(&p.a, t),
    })
}

/// `½[(1 - T) - i E(a)]` with no consistency checks.
pub(crate) fn compose_unchecked(a: &Vec3, t: &RealSymMat3) -> ComplexMat3 {
    let e = levi_civita_contract(a);
    let mut m = ComplexMat3::zeros();
    for j in 0..3 {
        for k in 0..3 {
            let delta = if j == k { 1.0 } else { 0.0 };
            m[(j, k)] = C64::new(0.5 * (delta - t.get(j, k)), -0.5 * e[j][k]);
        }
    }
    m
}

/// `E(a)_jk = Σ_l ε_jkl a_l`
fn levi_civita_contract(a: &Vec3) -> [[f64; 3]; 3] {
    [
        [0.0, a[2], -a[1]],
        [-a[2], 0.0, a[0]],
        [a[1], -a[0], 0.0],
    ]
}

/// Outcome of the principal-minor positivity test.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidityReport {
    pub c1_ok: bool,
    pub c2_ok: bool,
    pub c3_ok: bool,
    pub overall: bool,
    /// Human-readable name of the first failing condition.
    pub violation: Option<String>,
}

const AXES: [&str; 3] = ["x", "y", "z"];

/// Positivity of the composed density matrix via its principal minors.
///
/// * c1: `0 ≤ ω_j ≤ 1` (diagonal entries)
/// * c2: `4 ω_j ω_k ≥ a_l² + q_l²` (2×2 minors; `q_l` vanishes when T̂ is
///   diagonal)
/// * c3: `4 ω̃_x ω̃_y ω̃_z ≥ Σ_j ω̃_j ã_j²` in the eigenbasis of T̂, which is
///   `4 det ρ ≥ 0` and stays finite when the metric tensor is singular.
///
/// Every comparison carries a one-sided slack of `RANK_TOL`.
pub fn validate(p: &StateParams) -> ValidityReport {
    let tol = RANK_TOL;
    let mut violation = None;

    let mut c1_ok = true;
    for j in 0..3 {
        let w = p.omega[j];
        if !(w >= -tol && w <= 1.0 + tol) {
            c1_ok = false;
            violation.get_or_insert_with(|| format!("c1: 0 <= omega_{} <= 1 (omega_{0} = {w})", AXES[j]));
        }
    }

    let mut c2_ok = true;
    for (l, (j, k)) in [(1, 2), (0, 2), (0, 1)].into_iter().enumerate() {
        let lhs = 4.0 * p.omega[j] * p.omega[k];
        let rhs = p.a[l] * p.a[l] + p.q[l] * p.q[l];
        if !(lhs >= rhs - tol) {
            c2_ok = false;
            violation.get_or_insert_with(|| {
                format!(
                    "c2: 4 omega_{} omega_{} >= a_{l}^2 + q_{l}^2 ({lhs} < {rhs})",
                    AXES[j],
                    AXES[k],
                    l = AXES[l]
                )
            });
        }
    }

    let lhs_rhs = c3_terms(&p.a, &p.t);
    let c3_ok = lhs_rhs.0 >= lhs_rhs.1 - tol;
    if !c3_ok {
        violation.get_or_insert_with(|| {
            format!(
                "c3: 4 w_u w_v w_w >= sum_j w_j a_j^2 in the T eigenbasis ({} < {})",
                lhs_rhs.0, lhs_rhs.1
            )
        });
    }

    ValidityReport {
        c1_ok,
        c2_ok,
        c3_ok,
        overall: c1_ok && c2_ok && c3_ok,
        violation,
    }
}

/// Both sides of the determinant condition in the eigenbasis of T̂.
fn c3_terms(a: &Vec3, t: &RealSymMat3) -> (f64, f64) {
    let sys = t.eig();
    let w = sys.values.map(|l| 0.5 * (1.0 - l));
    let at = sys.vectors.map(|v| dot(&v, a));
    let lhs = 4.0 * w[0] * w[1] * w[2];
    let rhs = (0..3).map(|j| w[j] * at[j] * at[j]).sum::<f64>();
    (lhs, rhs)
}

/// `Γ̂ = (1 - T̂) / det(1 - T̂)`, or `None` when the determinant is at or
/// below `SING_TOL`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricTensor {
    pub gamma: Option<RealSymMat3>,
    /// `det(1 - T̂)`
    pub det: f64,
}

impl MetricTensor {
    pub fn is_defined(&self) -> bool {
        self.gamma.is_some()
    }
}

pub fn metric_tensor(t: &CorrelationTensor) -> MetricTensor {
    let one_minus = t.one_minus();
    let det = one_minus.det();
    let gamma = (det > SING_TOL).then(|| one_minus.scale(1.0 / det));
    MetricTensor { gamma, det }
}

/// `a · Γ̂ · a`
pub fn gamma_norm(a: &BlochVector, t: &CorrelationTensor) -> Result<f64> {
    let m = metric_tensor(t);
    match m.gamma {
        Some(g) => Ok(g.quad_form(a)),
        None => Err(Error::MetricUndefined { det: m.det }),
    }
}

/// Ellipsoid semi-axes `ε_j = √((1-λ_k)(1-λ_l))` for eigenvalues sorted
/// `λ_u ≥ λ_v ≥ λ_w`, which makes `ε_u ≥ ε_v ≥ ε_w`.
///
/// An eigenvalue error of δ near `λ = 1` becomes an axis of size `√δ`, so
/// axes below `AXIS_TOL` are reported as exactly zero.
pub fn semi_axes(lambda: &Vec3) -> Vec3 {
    let f = |k: usize, l: usize| {
        let e = ((1.0 - lambda[k]) * (1.0 - lambda[l])).max(0.0).sqrt();
        if e < AXIS_TOL {
            0.0
        } else {
            e
        }
    };
    [f(1, 2), f(0, 2), f(0, 1)]
}

/// Eigen-decomposition of T̂ plus the derived semi-axes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TensorGeometry {
    pub eigen: RealEigenSystem3,
    pub semi_axes: Vec3,
}

pub fn tensor_geometry(t: &CorrelationTensor) -> TensorGeometry {
    let eigen = t.eig();
    TensorGeometry {
        semi_axes: semi_axes(&eigen.values),
        eigen,
    }
}

impl TensorGeometry {
    /// Bloch vector expressed in the `(u, v, w)` principal frame.
    pub fn to_principal(&self, a: &Vec3) -> Vec3 {
        mat_vec(&transpose(&self.eigen.frame()), a)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RankCase {
    /// Rank 3: `a` strictly inside a three-dimensional ellipsoid.
    Full3D,
    /// Rank 2: `a` on the surface of a three-dimensional ellipsoid.
    Surface3D,
    /// Rank 2: segment ellipsoid with `|a| < ε_u`.
    SegmentInterior,
    /// Rank 1: segment ellipsoid with `|a| = ε_u`.
    SegmentEndpoint,
    /// Rank 1: the ellipsoid collapsed to the origin.
    Point,
}

impl RankCase {
    pub fn as_str(&self) -> &'static str {
        match self {
            RankCase::Full3D => "full_3d",
            RankCase::Surface3D => "surface_3d",
            RankCase::SegmentInterior => "segment_interior",
            RankCase::SegmentEndpoint => "segment_endpoint",
            RankCase::Point => "point",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RankReport {
    pub rank: u8,
    pub case: RankCase,
    /// Eigenvalues of ρ, descending.
    pub eigenvalues: Vec3,
}

/// Rank of ρ and where its Bloch vector sits relative to the ellipsoid.
pub fn classify_rank(rho: &QutritDensity) -> Result<RankReport> {
    let eigenvalues = rho.eigenvalues();
    if eigenvalues[2] < -RANK_TOL {
        return Err(Error::NotPositive {
            min_eigenvalue: eigenvalues[2],
        });
    }
    let rank = eigenvalues.iter().filter(|&&l| l > RANK_TOL).count() as u8;
    let p = decompose(rho);
    let geo = tensor_geometry(&p.t);
    let eps = geo.semi_axes;
    let open_axes = eps.iter().filter(|&&e| e > AXIS_TOL).count();
    let lam = geo.eigen.values;

    let case = match rank {
        3 => RankCase::Full3D,
        2 if open_axes == 3 => RankCase::Surface3D,
        2 => {
            debug_assert!((lam[1] + lam[2]).abs() < 1e-6, "segment needs λ_v = -λ_w");
            RankCase::SegmentInterior
        }
        _ if open_axes == 0 => RankCase::Point,
        _ => {
            debug_assert!((lam[1] + lam[2]).abs() < 1e-6, "segment needs λ_v = -λ_w");
            RankCase::SegmentEndpoint
        }
    };
    Ok(RankReport {
        rank: rank.max(1),
        case,
        eigenvalues,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{ComplexMat3, C64};
    use std::f64::consts::PI;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    fn pseudo(a: Vec3) -> QutritDensity {
        let p = StateParams::from_bloch_and_tensor(a, RealSymMat3::identity().scale(1.0 / 3.0));
        compose(&p).unwrap()
    }

    #[test]
    fn maximally_mixed_decomposes_trivially() {
        let p = decompose(&QutritDensity::maximally_mixed());
        assert_eq!(p.a, [0.0; 3]);
        assert_eq!(p.q, [0.0; 3]);
        for j in 0..3 {
            assert!(close(p.omega[j], 1.0 / 3.0, 1e-16));
            assert!(close(p.t.get(j, j), 1.0 / 3.0, 1e-15));
        }
    }

    #[test]
    fn pseudo_qubit_matrix_layout() {
        let rho = pseudo([0.0, 0.0, 2.0 / 3.0]);
        let m = rho.matrix();
        assert!(close(m[(0, 1)].im, -1.0 / 3.0, 1e-16));
        assert!(close(m[(1, 0)].im, 1.0 / 3.0, 1e-16));
        assert_eq!(m[(0, 2)], C64::new(0.0, 0.0));
        let p = decompose(&rho);
        assert!(close(p.a[2], 2.0 / 3.0, 1e-16));
        assert!(close(p.t.get(0, 0), 1.0 / 3.0, 1e-15));
    }

    #[test]
    fn basis_state_tensor() {
        let rho = QutritDensity::from_pure(&[C64::new(1.0, 0.0), C64::new(0.0, 0.0), C64::new(0.0, 0.0)])
            .unwrap();
        let p = decompose(&rho);
        assert_eq!(p.a, [0.0; 3]);
        assert_eq!(p.omega, [1.0, 0.0, 0.0]);
        // explicit 1 - 2 Re(rho) = diag(-1, 1, 1)
        assert_eq!(p.t.rows(), [[-1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]]);
        assert_eq!(p.t.eig().values, [1.0, 1.0, -1.0]);
    }

    #[test]
    fn decompose_rejects_bad_input() {
        let mut m = ComplexMat3::identity().scale_real(1.0 / 3.0);
        m[(0, 1)] = C64::new(0.1, 0.0);
        assert!(matches!(decompose_matrix(&m), Err(Error::NotHermitian { .. })));
        let m = ComplexMat3::identity().scale_real(0.5);
        assert!(matches!(decompose_matrix(&m), Err(Error::TraceNotOne { .. })));
    }

    #[test]
    fn compose_rejects_inconsistent_omega() {
        let mut p = decompose(&QutritDensity::maximally_mixed());
        p.omega[0] += 1e-6;
        assert!(matches!(compose(&p), Err(Error::InconsistentParams(_))));
    }

    #[test]
    fn validate_examples() {
        let r = validate(&decompose(&QutritDensity::maximally_mixed()));
        assert!(r.overall && r.violation.is_none());

        let p = StateParams::from_bloch_and_tensor([0.0, 0.0, 1.0], RealSymMat3::identity().scale(1.0 / 3.0));
        let r = validate(&p);
        assert!(!r.c2_ok && !r.overall);
        assert!(r.violation.as_deref().unwrap().starts_with("c2"));
        // oracle: composed matrix has a negative eigenvalue
        assert!(compose(&p).unwrap().eigenvalues()[2] < 0.0);

        let boundary = decompose(&pseudo([0.0, 2.0 / 3.0, 0.0]));
        let (lhs, rhs) = c3_terms(&boundary.a, &boundary.t);
        assert!(close(lhs, rhs, 1e-12));
        assert!(validate(&boundary).overall);
    }

    #[test]
    fn c2_needs_off_diagonal_correlations() {
        // eigenvalues (2, -1/2, -1/2) along (1,1,1)/√3: real, positive
        // diagonal, positive determinant, a = 0
        let x = 2.5 / 3.0;
        let m = ComplexMat3::from_real([[x - 0.5, x, x], [x, x - 0.5, x], [x, x, x - 0.5]]);
        let p = decompose_matrix(&m).unwrap();
        let r = validate(&p);
        assert!(r.c1_ok && r.c3_ok);
        assert!(!r.c2_ok && !r.overall);
    }

    #[test]
    fn metric_examples() {
        let m = metric_tensor(&RealSymMat3::identity().scale(1.0 / 3.0));
        let g = m.gamma.unwrap();
        for j in 0..3 {
            assert!(close(g.get(j, j), 9.0 / 4.0, 1e-14));
        }
        assert!(close(1.0 / g.get(0, 0).sqrt(), 2.0 / 3.0, 1e-15));

        let pure = decompose(&QutritDensity::from_pure(&[C64::new(1.0, 0.0), C64::new(0.0, 0.0), C64::new(0.0, 0.0)]).unwrap());
        assert!(!metric_tensor(&pure.t).is_defined());
        assert!(matches!(gamma_norm(&pure.a, &pure.t), Err(Error::MetricUndefined { .. })));

        let lam = 0.25;
        let t = RealSymMat3::diag([lam, lam, 1.0 - 2.0 * lam]);
        let g = metric_tensor(&t).gamma.unwrap();
        let l = [lam, lam, 1.0 - 2.0 * lam];
        let formula = [(1, 2), (0, 2), (0, 1)].map(|(k, m)| 1.0 / ((1.0 - l[k]) * (1.0 - l[m])));
        assert!(close(formula[0], 8.0 / 3.0, 1e-15) && close(formula[2], 16.0 / 9.0, 1e-15));
        for j in 0..3 {
            assert!(close(g.get(j, j), formula[j], 1e-14));
        }
    }

    #[test]
    fn gamma_norm_examples() {
        let t = RealSymMat3::identity().scale(1.0 / 3.0);
        assert_eq!(gamma_norm(&[0.0; 3], &t).unwrap(), 0.0);
        assert!(close(gamma_norm(&[0.0, 0.0, 2.0 / 3.0], &t).unwrap(), 1.0, 1e-14));
        assert!(close(gamma_norm(&[0.0, 0.0, 1.0 / 3.0], &t).unwrap(), 0.25, 1e-14));
    }

    #[test]
    fn rank_examples() {
        let r = classify_rank(&QutritDensity::maximally_mixed()).unwrap();
        assert_eq!((r.rank, r.case), (3, RankCase::Full3D));

        let half = ComplexMat3::from_real([[0.5, 0.0, 0.0], [0.0, 0.5, 0.0], [0.0, 0.0, 0.0]]);
        let rho = QutritDensity::new(half).unwrap();
        let r = classify_rank(&rho).unwrap();
        assert_eq!((r.rank, r.case), (2, RankCase::SegmentInterior));
        let geo = tensor_geometry(&decompose(&rho).t);
        assert_eq!(geo.eigen.values, [1.0, 0.0, 0.0]);
        assert!(close(geo.semi_axes[0], 1.0, 1e-15) && geo.semi_axes[1] == 0.0);

        let th = PI / 6.0;
        let psi = [C64::new(th.cos(), 0.0), C64::new(0.0, th.sin()), C64::new(0.0, 0.0)];
        let rho = QutritDensity::from_pure(&psi).unwrap();
        let r = classify_rank(&rho).unwrap();
        assert_eq!((r.rank, r.case), (1, RankCase::SegmentEndpoint));
        let p = decompose(&rho);
        let eps_u = tensor_geometry(&p.t).semi_axes[0];
        // T = diag(-cos 2θ, cos 2θ, 1), ε_u = |sin 2θ|
        assert!(close(eps_u, (2.0 * th).sin(), 1e-12));
        assert!(close(crate::linalg::norm(&p.a), 3f64.sqrt() / 2.0, 1e-15));

        let bad = ComplexMat3::from_real([[1.2, 0.0, 0.0], [0.0, -0.2, 0.0], [0.0, 0.0, 0.0]]);
        assert!(matches!(
            classify_rank(&QutritDensity::new(bad).unwrap()),
            Err(Error::NotPositive { .. })
        ));
    }

    #[test]
    fn surface_state_from_pseudo_qubit_boundary() {
        let r = classify_rank(&pseudo([0.4, 0.0, (4.0f64 / 9.0 - 0.16).sqrt()])).unwrap();
        assert_eq!((r.rank, r.case), (2, RankCase::Surface3D));
    }
}
