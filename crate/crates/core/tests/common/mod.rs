//! Helpers shared by the integration suites, including independent
//! nalgebra-based oracles.

#![allow(dead_code)]

use nalgebra::{Complex, Matrix3, Matrix4};
use qutrit_core::linalg::{ComplexMat3, ComplexMat4, C64};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn to_na3(m: &ComplexMat3) -> Matrix3<Complex<f64>> {
    Matrix3::from_fn(|i, j| m[(i, j)])
}

pub fn to_na4(m: &ComplexMat4) -> Matrix4<Complex<f64>> {
    Matrix4::from_fn(|i, j| m[(i, j)])
}

fn sorted_desc(mut v: Vec<f64>) -> Vec<f64> {
    v.sort_by(|a, b| b.total_cmp(a));
    v
}

/// Eigenvalues from nalgebra's Hermitian solver, descending.
pub fn oracle_eigs3(m: &ComplexMat3) -> [f64; 3] {
    let v = sorted_desc(to_na3(m).symmetric_eigenvalues().iter().copied().collect());
    [v[0], v[1], v[2]]
}

pub fn oracle_eigs4(m: &ComplexMat4) -> [f64; 4] {
    let v = sorted_desc(to_na4(m).symmetric_eigenvalues().iter().copied().collect());
    [v[0], v[1], v[2], v[3]]
}

/// `Σ_i conj(u_i) v_i`, written out independently of the library.
pub fn oracle_inner(u: &[C64; 3], v: &[C64; 3]) -> C64 {
    u.iter().zip(v).map(|(a, b)| a.conj() * b).sum()
}

pub fn max_diff<const N: usize>(a: &[f64; N], b: &[f64; N]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

/// Both vectors sorted, then compared entrywise.
pub fn multiset_diff(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    let mut a = *a;
    let mut b = *b;
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    max_diff(&a, &b)
}
