//! Spin-1 operators in the Cartesian basis and the bridge to symmetric
//! two-qubit states.
//!
//! In this basis `(S_j)_kl = -i ε_jkl`, every `S_j²` is diagonal, and the
//! anticommutators `A_j = S_k S_l + S_l S_k` are real symmetric. A qutrit
//! with parameters `(a, T̂)` is the symmetric two-qubit state
//!
//! ```text
//! ρ₄ = ¼ [1⊗1 + Σ_j a_j (σ_j⊗1 + 1⊗σ_j) + Σ_jk T_jk σ_j⊗σ_k]
//! ```
//!
//! which has no weight on the singlet exactly when `tr T̂ = 1`.

use crate::error::{Error, Result, SymmetryCheck};
use crate::linalg::{
    eig_hermitian4, kron2, partial_transpose, ComplexMat3, ComplexMat4, Vec3, C64, I, ONE, ZERO,
};
use crate::state::{compose_unchecked, decompose, QutritDensity};
use crate::tol::{PPT_TOL, RANK_TOL, SYMMETRIC_TOL, TRACE_TOL};
use crate::linalg::RealSymMat3;

/// The nine spin-1 operators used as generators and observables.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Spin1Set {
    pub s: [ComplexMat3; 3],
    pub s2: [ComplexMat3; 3],
    pub a: [ComplexMat3; 3],
}

/// Levi-Civita symbol on indices 0..3.
pub fn levi_civita(j: usize, k: usize, l: usize) -> f64 {
    match (j, k, l) {
        (0, 1, 2) | (1, 2, 0) | (2, 0, 1) => 1.0,
        (0, 2, 1) | (2, 1, 0) | (1, 0, 2) => -1.0,
        _ => 0.0,
    }
}

/// `S_j` with entries `-i ε_jkl`.
pub fn spin(j: usize) -> ComplexMat3 {
    let mut m = ComplexMat3::zeros();
    for k in 0..3 {
        for l in 0..3 {
            m[(k, l)] = C64::new(0.0, -levi_civita(j, k, l));
        }
    }
    m
}

/// `S_j²`: diagonal, zero at position `j`.
pub fn spin_sq(j: usize) -> ComplexMat3 {
    let mut m = ComplexMat3::identity();
    m[(j, j)] = ZERO;
    m
}

/// `A_j = S_k S_l + S_l S_k` with `(j, k, l)` cyclic.
pub fn anticommutator(j: usize) -> ComplexMat3 {
    let (k, l) = ((j + 1) % 3, (j + 2) % 3);
    spin(k) * spin(l) + spin(l) * spin(k)
}

pub fn spin_set() -> Spin1Set {
    Spin1Set {
        s: [0, 1, 2].map(spin),
        s2: [0, 1, 2].map(spin_sq),
        a: [0, 1, 2].map(anticommutator),
    }
}

/// Expectation values `⟨S_j⟩`, `⟨S_j²⟩`, `⟨A_j⟩`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Expectations {
    pub sv: Vec3,
    pub s2v: Vec3,
    pub av: Vec3,
}

pub fn expectations(rho: &QutritDensity) -> Expectations {
    let set = spin_set();
    let m = rho.matrix();
    let ev = |op: &ComplexMat3| (*m * *op).trace().re;
    let out = Expectations {
        sv: set.s.each_ref().map(ev),
        s2v: set.s2.each_ref().map(ev),
        av: set.a.each_ref().map(ev),
    };
    debug_assert!({
        let p = decompose(rho);
        (0..3).all(|j| {
            (out.sv[j] - p.a[j]).abs() < 1e-12
                && (out.s2v[j] - 0.5 * (1.0 + p.t.get(j, j))).abs() < 1e-12
                && (out.av[j] - p.q[j]).abs() < 1e-12
        })
    });
    out
}

pub fn pauli(j: usize) -> [[C64; 2]; 2] {
    match j {
        0 => [[ZERO, ONE], [ONE, ZERO]],
        1 => [[ZERO, -I], [I, ZERO]],
        _ => [[ONE, ZERO], [ZERO, -ONE]],
    }
}

const ID2: [[C64; 2]; 2] = [[ONE, ZERO], [ZERO, ONE]];

/// `(|01⟩ - |10⟩)/√2`
pub fn singlet() -> [C64; 4] {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    [ZERO, C64::from(h), C64::from(-h), ZERO]
}

/// Two-qubit density matrix in the product basis |00⟩, |01⟩, |10⟩, |11⟩.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoQubitDensity {
    mat: ComplexMat4,
}

/// Local vectors and correlation tensor of a two-qubit operator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoQubitParams {
    pub a: Vec3,
    pub b: Vec3,
    pub t: [[f64; 3]; 3],
}

impl TwoQubitDensity {
    /// Checks Hermiticity, unit trace and positivity.
    pub fn new(mat: ComplexMat4) -> Result<Self> {
        let sys = eig_hermitian4(&mat)?;
        let trace = mat.trace().re;
        if (trace - 1.0).abs() > TRACE_TOL {
            return Err(Error::TraceNotOne { trace });
        }
        if sys.min_value() < -RANK_TOL {
            return Err(Error::InvalidState(format!(
                "two-qubit matrix has eigenvalue {:e}",
                sys.min_value()
            )));
        }
        Ok(TwoQubitDensity {
            mat: mat.hermitian_part(),
        })
    }

    pub fn matrix(&self) -> &ComplexMat4 {
        &self.mat
    }

    pub fn params(&self) -> TwoQubitParams {
        let ev = |op: ComplexMat4| (self.mat * op).trace().re;
        TwoQubitParams {
            a: [0, 1, 2].map(|j| ev(kron2(&pauli(j), &ID2))),
            b: [0, 1, 2].map(|j| ev(kron2(&ID2, &pauli(j)))),
            t: [0, 1, 2].map(|j| [0, 1, 2].map(|k| ev(kron2(&pauli(j), &pauli(k))))),
        }
    }

    pub fn singlet_overlap(&self) -> f64 {
        let s = singlet();
        let ms = self.mat.mul_vec(&s);
        crate::linalg::inner(&s, &ms).re
    }
}

/// Embeds a qutrit into the symmetric subspace of two qubits.
pub fn to_two_qubit(rho: &QutritDensity) -> Result<TwoQubitDensity> {
    rho.ensure_positive()
        .map_err(|e| Error::InvalidState(e.to_string()))?;
    let p = decompose(rho);
    let mut m = ComplexMat4::identity();
    for j in 0..3 {
        let local = kron2(&pauli(j), &ID2) + kron2(&ID2, &pauli(j));
        m = m + local.scale_real(p.a[j]);
        for k in 0..3 {
            m = m + kron2(&pauli(j), &pauli(k)).scale_real(p.t.get(j, k));
        }
    }
    Ok(TwoQubitDensity {
        mat: m.scale_real(0.25).hermitian_part(),
    })
}

/// Inverse of [`to_two_qubit`] for states in the symmetric subspace.
pub fn from_two_qubit(rho4: &TwoQubitDensity) -> Result<QutritDensity> {
    let p = rho4.params();
    let ab = (0..3).map(|j| (p.a[j] - p.b[j]).abs()).fold(0.0, f64::max);
    if ab > SYMMETRIC_TOL {
        return Err(Error::NotSymmetricState {
            check: SymmetryCheck::LocalVectors,
            value: ab,
        });
    }
    let mut asym: f64 = 0.0;
    for j in 0..3 {
        for k in 0..3 {
            asym = asym.max((p.t[j][k] - p.t[k][j]).abs());
        }
    }
    if asym > SYMMETRIC_TOL {
        return Err(Error::NotSymmetricState {
            check: SymmetryCheck::CorrelationTensor,
            value: asym,
        });
    }
    let overlap = rho4.singlet_overlap();
    if overlap.abs() > SYMMETRIC_TOL {
        return Err(Error::NotSymmetricState {
            check: SymmetryCheck::SingletOverlap,
            value: overlap,
        });
    }
    let a = [0, 1, 2].map(|j| 0.5 * (p.a[j] + p.b[j]));
    let t = RealSymMat3::from_rows(p.t);
    let m = compose_unchecked(&a, &t);
    // residual singlet weight shows up as trace 1 + 2·overlap; project it out
    let trace = m.trace().re;
    QutritDensity::new(m.scale_real(1.0 / trace))
}

/// Minimum eigenvalue of the partial transpose.
pub fn ppt_min_eigenvalue(rho4: &TwoQubitDensity) -> f64 {
    eig_hermitian4(&partial_transpose(rho4.matrix()))
        .expect("partial transpose of a Hermitian matrix is Hermitian")
        .min_value()
}

/// Peres–Horodecki verdict; for two qubits PPT is equivalent to separability.
pub fn ppt_separable(rho4: &TwoQubitDensity) -> bool {
    ppt_min_eigenvalue(rho4) >= -PPT_TOL
}
