//! Dense linear algebra for the two fixed dimensions used throughout the
//! crate: 3×3 (qutrit) and 4×4 (two qubits).
//!
//! Everything here works on stack arrays. The Hermitian eigensolver is a
//! cyclic complex Jacobi iteration, which converges unconditionally at these
//! sizes and returns eigenvectors that are orthonormal to machine precision.

use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::tol::{DEGEN_TOL, HERM_TOL};

pub type C64 = Complex64;
pub type Vec3 = [f64; 3];

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

/// Square complex matrix of fixed dimension, stored row-major.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CMat<const N: usize>(pub [[C64; N]; N]);

pub type ComplexMat3 = CMat<3>;
pub type ComplexMat4 = CMat<4>;

impl<const N: usize> Default for CMat<N> {
    fn default() -> Self {
        Self::zeros()
    }
}

impl<const N: usize> CMat<N> {
    pub fn zeros() -> Self {
        CMat([[ZERO; N]; N])
    }

    pub fn identity() -> Self {
        let mut m = Self::zeros();
        for i in 0..N {
            m.0[i][i] = ONE;
        }
        m
    }

    pub fn from_real(re: [[f64; N]; N]) -> Self {
        Self::from_parts(re, [[0.0; N]; N])
    }

    pub fn from_parts(re: [[f64; N]; N], im: [[f64; N]; N]) -> Self {
        let mut m = Self::zeros();
        for i in 0..N {
            for j in 0..N {
                m.0[i][j] = C64::new(re[i][j], im[i][j]);
            }
        }
        m
    }

    pub fn re(&self) -> [[f64; N]; N] {
        self.0.map(|row| row.map(|z| z.re))
    }

    pub fn im(&self) -> [[f64; N]; N] {
        self.0.map(|row| row.map(|z| z.im))
    }

    /// Projector `|v⟩⟨v|`.
    pub fn outer(v: &[C64; N]) -> Self {
        let mut m = Self::zeros();
        for i in 0..N {
            for j in 0..N {
                m.0[i][j] = v[i] * v[j].conj();
            }
        }
        m
    }

    pub fn adjoint(&self) -> Self {
        let mut m = Self::zeros();
        for i in 0..N {
            for j in 0..N {
                m.0[i][j] = self.0[j][i].conj();
            }
        }
        m
    }

    pub fn scale(&self, s: C64) -> Self {
        CMat(self.0.map(|row| row.map(|z| z * s)))
    }

    pub fn scale_real(&self, s: f64) -> Self {
        CMat(self.0.map(|row| row.map(|z| z * s)))
    }

    pub fn trace(&self) -> C64 {
        (0..N).map(|i| self.0[i][i]).sum()
    }

    pub fn mul_vec(&self, v: &[C64; N]) -> [C64; N] {
        let mut out = [ZERO; N];
        for (i, o) in out.iter_mut().enumerate() {
            *o = (0..N).map(|j| self.0[i][j] * v[j]).sum();
        }
        out
    }

    /// `M U M†`-style sandwich: returns `self · m · self†`.
    pub fn conjugate(&self, m: &Self) -> Self {
        *self * *m * self.adjoint()
    }

    pub fn max_abs(&self) -> f64 {
        self.0
            .iter()
            .flatten()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }

    /// Largest entrywise distance to another matrix.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        (*self - *other).max_abs()
    }

    /// Largest deviation `|M_ij - conj(M_ji)|` and where it occurs.
    pub fn hermiticity_defect(&self) -> (f64, usize, usize) {
        let mut worst = (0.0, 0, 0);
        for i in 0..N {
            for j in i..N {
                let d = (self.0[i][j] - self.0[j][i].conj()).norm();
                if d > worst.0 {
                    worst = (d, i, j);
                }
            }
        }
        worst
    }

    /// Errors with the offending entry if the matrix is not Hermitian within
    /// `HERM_TOL` (scaled by the matrix magnitude once it exceeds one).
    pub fn check_hermitian(&self) -> Result<()> {
        let (dev, row, col) = self.hermiticity_defect();
        if dev.is_nan() || dev > HERM_TOL * self.max_abs().max(1.0) || !self.is_finite() {
            return Err(Error::NotHermitian {
                row,
                col,
                deviation: dev,
            });
        }
        Ok(())
    }

    /// `(M + M†) / 2`
    pub fn hermitian_part(&self) -> Self {
        (*self + self.adjoint()).scale_real(0.5)
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().flatten().all(|z| z.re.is_finite() && z.im.is_finite())
    }
}

impl<const N: usize> Index<(usize, usize)> for CMat<N> {
    type Output = C64;
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.0[i][j]
    }
}

impl<const N: usize> IndexMut<(usize, usize)> for CMat<N> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.0[i][j]
    }
}

impl<const N: usize> Add for CMat<N> {
    type Output = Self;
    fn add(mut self, rhs: Self) -> Self {
        for i in 0..N {
            for j in 0..N {
                self.0[i][j] += rhs.0[i][j];
            }
        }
        self
    }
}

impl<const N: usize> Sub for CMat<N> {
    type Output = Self;
    fn sub(mut self, rhs: Self) -> Self {
        for i in 0..N {
            for j in 0..N {
                self.0[i][j] -= rhs.0[i][j];
            }
        }
        self
    }
}

impl<const N: usize> Mul for CMat<N> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let mut m = Self::zeros();
        for i in 0..N {
            for k in 0..N {
                let a = self.0[i][k];
                for j in 0..N {
                    m.0[i][j] += a * rhs.0[k][j];
                }
            }
        }
        m
    }
}

impl CMat<3> {
    pub fn det(&self) -> C64 {
        let m = &self.0;
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    }
}

/// Real symmetric 3×3 matrix. Every constructor mirrors the upper triangle,
/// so `get(j, k) == get(k, j)` holds bitwise.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RealSymMat3([[f64; 3]; 3]);

impl RealSymMat3 {
    /// Builds from full rows, averaging each off-diagonal pair.
    pub fn from_rows(rows: [[f64; 3]; 3]) -> Self {
        let mut m = rows;
        for j in 0..3 {
            for k in (j + 1)..3 {
                let v = 0.5 * (rows[j][k] + rows[k][j]);
                m[j][k] = v;
                m[k][j] = v;
            }
        }
        RealSymMat3(m)
    }

    /// Builds from the diagonal and the upper triangle `(xy, xz, yz)`.
    pub fn from_upper(diag: Vec3, xy: f64, xz: f64, yz: f64) -> Self {
        RealSymMat3([
            [diag[0], xy, xz],
            [xy, diag[1], yz],
            [xz, yz, diag[2]],
        ])
    }

    pub fn diag(d: Vec3) -> Self {
        Self::from_upper(d, 0.0, 0.0, 0.0)
    }

    pub fn identity() -> Self {
        Self::diag([1.0; 3])
    }

    pub fn get(&self, j: usize, k: usize) -> f64 {
        self.0[j][k]
    }

    pub fn rows(&self) -> [[f64; 3]; 3] {
        self.0
    }

    pub fn trace(&self) -> f64 {
        self.0[0][0] + self.0[1][1] + self.0[2][2]
    }

    pub fn det(&self) -> f64 {
        let m = &self.0;
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    }

    pub fn scale(&self, s: f64) -> Self {
        RealSymMat3(self.0.map(|r| r.map(|x| x * s)))
    }

    /// `1 - self`
    pub fn one_minus(&self) -> Self {
        let mut m = self.0.map(|r| r.map(|x| -x));
        for (i, row) in m.iter_mut().enumerate() {
            row[i] += 1.0;
        }
        RealSymMat3(m)
    }

    pub fn mul_vec(&self, v: &Vec3) -> Vec3 {
        let m = &self.0;
        [0, 1, 2].map(|i| m[i][0] * v[0] + m[i][1] * v[1] + m[i][2] * v[2])
    }

    /// Quadratic form `v · M · v`.
    pub fn quad_form(&self, v: &Vec3) -> f64 {
        dot(v, &self.mul_vec(v))
    }

    /// `R · M · Rᵀ` for an arbitrary real `R`.
    pub fn rotate(&self, r: &[[f64; 3]; 3]) -> Self {
        let mut out = [[0.0; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                let mut s = 0.0;
                for k in 0..3 {
                    for l in 0..3 {
                        s += r[i][k] * self.0[k][l] * r[j][l];
                    }
                }
                out[i][j] = s;
            }
        }
        Self::from_rows(out)
    }

    pub fn to_complex(&self) -> ComplexMat3 {
        CMat::from_real(self.0)
    }

    /// Eigen-decomposition with real eigenvectors, sorted descending.
    pub fn eig(&self) -> RealEigenSystem3 {
        // Jacobi on real symmetric input keeps every rotation phase at ±1,
        // so the complex solver returns exactly real vectors here.
        let sys = eig_sorted(&self.to_complex());
        RealEigenSystem3 {
            values: sys.values,
            vectors: sys.vectors.map(|v| v.map(|z| z.re)),
        }
    }
}

/// Eigenvalues sorted descending with matching orthonormal eigenvectors;
/// `vectors[i]` belongs to `values[i]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenSystem<const N: usize> {
    pub values: [f64; N],
    pub vectors: [[C64; N]; N],
}

pub type EigenSystem3 = EigenSystem<3>;
pub type EigenSystem4 = EigenSystem<4>;

impl<const N: usize> EigenSystem<N> {
    /// `V · diag(values) · V†`
    pub fn reconstruct(&self) -> CMat<N> {
        let mut m = CMat::zeros();
        for (val, v) in self.values.iter().zip(&self.vectors) {
            m = m + CMat::outer(v).scale_real(*val);
        }
        m
    }

    pub fn min_value(&self) -> f64 {
        self.values[N - 1]
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RealEigenSystem3 {
    pub values: Vec3,
    pub vectors: [Vec3; 3],
}

impl RealEigenSystem3 {
    /// Matrix whose columns are the eigenvectors.
    pub fn frame(&self) -> [[f64; 3]; 3] {
        let v = &self.vectors;
        [0, 1, 2].map(|i| [v[0][i], v[1][i], v[2][i]])
    }
}

/// Raw cyclic Jacobi. Returns the (unsorted) diagonal and the accumulated
/// unitary whose columns are the eigenvectors.
fn jacobi<const N: usize>(m: &CMat<N>) -> ([f64; N], CMat<N>) {
    let mut a = m.hermitian_part();
    let mut v = CMat::<N>::identity();
    let scale = a.max_abs();
    if scale == 0.0 {
        return ([0.0; N], v);
    }
    for _sweep in 0..64 {
        let mut off = 0.0;
        for p in 0..N {
            for q in (p + 1)..N {
                off += a.0[p][q].norm_sqr();
            }
        }
        if off.sqrt() <= 1e-18 * scale {
            break;
        }
        for p in 0..N {
            for q in (p + 1)..N {
                let apq = a.0[p][q];
                let mag = apq.norm();
                if mag <= 1e-20 * scale {
                    continue;
                }
                let phase = apq / mag;
                let app = a.0[p][p].re;
                let aqq = a.0[q][q].re;
                let theta = (aqq - app) / (2.0 * mag);
                let t = if theta.abs() > 1e150 {
                    0.5 / theta
                } else {
                    let sgn = if theta >= 0.0 { 1.0 } else { -1.0 };
                    sgn / (theta.abs() + (theta * theta + 1.0).sqrt())
                };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                let pc = phase.conj();
                // U = diag(1, conj(phase)) · [[c, s], [-s, c]] on the (p, q) plane
                let (upp, upq, uqp, uqq) = (C64::from(c), C64::from(s), -pc * s, pc * c);
                for k in 0..N {
                    let akp = a.0[k][p];
                    let akq = a.0[k][q];
                    a.0[k][p] = akp * upp + akq * uqp;
                    a.0[k][q] = akp * upq + akq * uqq;
                    let vkp = v.0[k][p];
                    let vkq = v.0[k][q];
                    v.0[k][p] = vkp * upp + vkq * uqp;
                    v.0[k][q] = vkp * upq + vkq * uqq;
                }
                for k in 0..N {
                    let apk = a.0[p][k];
                    let aqk = a.0[q][k];
                    a.0[p][k] = upp.conj() * apk + uqp.conj() * aqk;
                    a.0[q][k] = upq.conj() * apk + uqq.conj() * aqk;
                }
                a.0[p][q] = ZERO;
                a.0[q][p] = ZERO;
                a.0[p][p] = C64::from(a.0[p][p].re);
                a.0[q][q] = C64::from(a.0[q][q].re);
            }
        }
    }
    let mut values = [0.0; N];
    for (i, val) in values.iter_mut().enumerate() {
        *val = a.0[i][i].re;
    }
    (values, v)
}

/// Sorted, phase-fixed eigensystem of a matrix already known to be Hermitian.
fn eig_sorted<const N: usize>(m: &CMat<N>) -> EigenSystem<N> {
    let (raw, v) = jacobi(m);
    let mut order: [usize; N] = std::array::from_fn(|i| i);
    // stable: equal eigenvalues keep their index order
    order.sort_by(|&i, &j| raw[j].total_cmp(&raw[i]));

    let values = order.map(|i| raw[i]);
    let mut vectors: [[C64; N]; N] = order.map(|col| std::array::from_fn(|row| v.0[row][col]));

    let mut start = 0;
    while start < N {
        let mut end = start + 1;
        while end < N && values[end - 1] - values[end] < DEGEN_TOL {
            end += 1;
        }
        if end - start > 1 {
            gram_schmidt(&mut vectors[start..end]);
        }
        start = end;
    }
    for vec in vectors.iter_mut() {
        fix_phase(vec);
    }
    EigenSystem { values, vectors }
}

fn gram_schmidt<const N: usize>(vs: &mut [[C64; N]]) {
    for i in 0..vs.len() {
        for j in 0..i {
            let proj = inner(&vs[j], &vs[i]);
            let prev = vs[j];
            for (x, y) in vs[i].iter_mut().zip(prev.iter()) {
                *x -= proj * y;
            }
        }
        let n = inner(&vs[i], &vs[i]).re.sqrt();
        for x in vs[i].iter_mut() {
            *x /= n;
        }
    }
}

/// Rotates the global phase so the largest-magnitude component (first one on
/// ties) is real and positive.
fn fix_phase<const N: usize>(v: &mut [C64; N]) {
    let max = v.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if max == 0.0 {
        return;
    }
    let pivot = v
        .iter()
        .position(|z| z.norm() >= max - 1e-12 * max)
        .unwrap_or(0);
    let rot = v[pivot].conj() / v[pivot].norm();
    for z in v.iter_mut() {
        *z *= rot;
    }
    v[pivot] = C64::from(v[pivot].re);
}

/// `⟨u|v⟩`, conjugate-linear in the first argument.
pub fn inner<const N: usize>(u: &[C64; N], v: &[C64; N]) -> C64 {
    u.iter().zip(v).map(|(a, b)| a.conj() * b).sum()
}

pub fn eig_hermitian3(m: &ComplexMat3) -> Result<EigenSystem3> {
    m.check_hermitian()?;
    Ok(eig_sorted(m))
}

pub fn eig_hermitian4(m: &ComplexMat4) -> Result<EigenSystem4> {
    m.check_hermitian()?;
    Ok(eig_sorted(m))
}

/// Principal minors of a Hermitian 3×3 matrix.
///
/// `d2[l]` is the determinant of the 2×2 submatrix that omits index `l`, so
/// `d2[0]` is built on rows/columns (1, 2).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PrincipalMinors {
    pub d1: Vec3,
    pub d2: Vec3,
    pub d3: f64,
}

pub fn principal_minors3(m: &ComplexMat3) -> Result<PrincipalMinors> {
    m.check_hermitian()?;
    let h = m.hermitian_part();
    let d1 = [0, 1, 2].map(|i| h.0[i][i].re);
    let d2 = [(1, 2), (0, 2), (0, 1)]
        .map(|(j, k)| h.0[j][j].re * h.0[k][k].re - h.0[j][k].norm_sqr());
    let d3 = h.det().re;
    Ok(PrincipalMinors { d1, d2, d3 })
}

/// `exp(-iθG)` for Hermitian `G`.
pub fn exp_i_hermitian3(g: &ComplexMat3, theta: f64) -> Result<ComplexMat3> {
    let sys = eig_hermitian3(g)?;
    let mut u = CMat::zeros();
    for (lam, v) in sys.values.iter().zip(&sys.vectors) {
        let phase = C64::from_polar(1.0, -theta * lam);
        u = u + CMat::outer(v).scale(phase);
    }
    Ok(u)
}

/// Transpose on the second qubit in the product basis |00⟩, |01⟩, |10⟩, |11⟩.
pub fn partial_transpose(m: &ComplexMat4) -> ComplexMat4 {
    let mut out = CMat::zeros();
    for a in 0..2 {
        for b in 0..2 {
            for c in 0..2 {
                for d in 0..2 {
                    out.0[2 * a + b][2 * c + d] = m.0[2 * a + d][2 * c + b];
                }
            }
        }
    }
    out
}

/// Kronecker product of two 2×2 matrices.
pub fn kron2(a: &[[C64; 2]; 2], b: &[[C64; 2]; 2]) -> ComplexMat4 {
    let mut out = CMat::zeros();
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                for l in 0..2 {
                    out.0[2 * i + k][2 * j + l] = a[i][j] * b[k][l];
                }
            }
        }
    }
    out
}

pub fn dot(a: &Vec3, b: &Vec3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

pub fn cross(a: &Vec3, b: &Vec3) -> Vec3 {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

pub fn norm(a: &Vec3) -> f64 {
    dot(a, a).sqrt()
}

/// `r · v` for a row-major real 3×3 matrix.
pub fn mat_vec(r: &[[f64; 3]; 3], v: &Vec3) -> Vec3 {
    [0, 1, 2].map(|i| dot(&r[i], v))
}

pub fn transpose(r: &[[f64; 3]; 3]) -> [[f64; 3]; 3] {
    [0, 1, 2].map(|i| [r[0][i], r[1][i], r[2][i]])
}
