//! Pure qutrit states written as `|ψ⟩ = r + i k` with real `r`, `k`.
//!
//! The Bloch vector of a pure state is `a = 2 r × k`; it vanishes for real
//! states, which instead show up as the `-1` eigenvector of T̂ along `r`.

use crate::error::{Error, Result};
use crate::linalg::{cross, dot, inner, Vec3, C64, ONE};
use crate::state::QutritDensity;
use crate::tol::{BALL_TOL, GAUGE_TOL, NORM_TOL, ORTHO_TOL};

/// Normalized amplitudes with the global phase fixed: the first component
/// whose modulus exceeds `GAUGE_TOL` is real and positive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PureState {
    amp: [C64; 3],
    r: Vec3,
    k: Vec3,
}

impl PureState {
    pub fn amplitudes(&self) -> &[C64; 3] {
        &self.amp
    }

    pub fn r(&self) -> &Vec3 {
        &self.r
    }

    pub fn k(&self) -> &Vec3 {
        &self.k
    }

    pub fn density(&self) -> QutritDensity {
        QutritDensity::from_pure(&self.amp).expect("normalized amplitudes")
    }

    pub fn is_real(&self) -> bool {
        self.k.iter().all(|x| x.abs() <= GAUGE_TOL)
    }
}

pub fn rik_decompose(amp: &[C64; 3]) -> Result<PureState> {
    let norm_sq = inner(amp, amp).re;
    if !((norm_sq - 1.0).abs() <= NORM_TOL) {
        return Err(Error::NotNormalized { norm_sq });
    }
    let n = norm_sq.sqrt();
    let mut v = amp.map(|z| z / n);
    if let Some(pivot) = v.iter().position(|z| z.norm() > GAUGE_TOL) {
        let rot = v[pivot].conj() / v[pivot].norm();
        for z in v.iter_mut() {
            *z *= rot;
        }
        v[pivot] = C64::from(v[pivot].re);
    }
    Ok(PureState {
        amp: v,
        r: v.map(|z| z.re),
        k: v.map(|z| z.im),
    })
}

/// `a = 2 r × k`
pub fn bloch_from_pure(p: &PureState) -> Vec3 {
    cross(&p.r, &p.k).map(|x| 2.0 * x)
}

/// `⟨ψ|ψ′⟩ = (r·r′ + k·k′) + i (r·k′ - k·r′)`
pub fn overlap_rk(p: &PureState, q: &PureState) -> C64 {
    C64::new(
        dot(&p.r, &q.r) + dot(&p.k, &q.k),
        dot(&p.r, &q.k) - dot(&q.r, &p.k),
    )
}

/// Orthogonality from the real conditions `r·r′ = -k·k′` and `r·k′ = r′·k`.
pub fn orthogonal(p: &PureState, q: &PureState) -> bool {
    overlap_rk(p, q).norm() < ORTHO_TOL
}

/// `(cos θ, i sin θ, 0)`
pub fn reference_state(theta: f64) -> [C64; 3] {
    [
        C64::from(theta.cos()),
        C64::new(0.0, theta.sin()),
        C64::from(0.0),
    ]
}

/// `(sin θ cos φ, -i cos θ cos φ, e^{iχ} sin φ)`, orthogonal to
/// [`reference_state`] for every `φ`, `χ`.
pub fn orthogonal_partner(theta: f64, phi: f64, chi: f64) -> [C64; 3] {
    [
        C64::from(theta.sin() * phi.cos()),
        C64::new(0.0, -theta.cos() * phi.cos()),
        C64::from_polar(phi.sin(), chi),
    ]
}

/// Bloch vectors of [`reference_state`] and [`orthogonal_partner`] in closed
/// form.
///
/// The `y` component carries `-sin χ`, matching `2 r′ × k′` of the partner
/// state (equivalently `a_y = 2 Im ρ[0][2]`).
pub fn orthogonal_bloch_family(theta: f64, phi: f64, chi: f64) -> (Vec3, Vec3) {
    let (st, ct) = theta.sin_cos();
    let (sp, cp) = phi.sin_cos();
    let (sc, cc) = chi.sin_cos();
    let a = [0.0, 0.0, 2.0 * ct * st];
    let a_prime = [
        2.0 * cp * sp * ct * cc,
        -2.0 * cp * sp * st * sc,
        -2.0 * cp * cp * ct * st,
    ];
    (a, a_prime)
}

/// The four mutually unbiased bases of C³, as printed with
/// `η = exp(2πi/3)`; `bases[b][i]` is vector `i + 1` of basis `b + 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct MubFamily {
    pub bases: [[PureState; 3]; 4],
}

/// Raw MUB amplitudes before gauge fixing.
pub fn mub_vector(basis: usize, index: usize) -> [C64; 3] {
    let s = 1.0 / 3f64.sqrt();
    let one = C64::from(s);
    // η/√3 and η*/√3 with √3/2 · 1/√3 = 1/2 kept exact
    let eta = C64::new(-0.5 * s, 0.5);
    let eta_c = eta.conj();
    let zero = C64::from(0.0);
    match (basis, index) {
        (0, i) => {
            let mut v = [zero; 3];
            v[i] = ONE;
            v
        }
        (1, 0) => [one, one, one],
        (1, 1) => [one, eta, eta_c],
        (1, 2) => [one, eta_c, eta],
        (2, i) => {
            let mut v = [one; 3];
            v[i] = eta;
            v
        }
        (3, i) => {
            let mut v = [one; 3];
            v[i] = eta_c;
            v
        }
        _ => panic!("MUB index out of range: basis {basis}, vector {index}"),
    }
}

pub fn mub_bases() -> MubFamily {
    let bases = std::array::from_fn(|b| {
        std::array::from_fn(|i| rik_decompose(&mub_vector(b, i)).expect("unit vectors"))
    });
    MubFamily { bases }
}

/// Qutrit with `T̂ = 1/3` and Bloch vector inside the ball `a·a ≤ 4/9`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PseudoQubit {
    a: Vec3,
}

impl PseudoQubit {
    pub fn new(a: Vec3) -> Result<Self> {
        let norm_sq = dot(&a, &a);
        if !(norm_sq <= 4.0 / 9.0 + BALL_TOL) {
            return Err(Error::OutOfBall { norm_sq });
        }
        Ok(PseudoQubit { a })
    }

    pub fn bloch(&self) -> &Vec3 {
        &self.a
    }

    pub fn density(&self) -> QutritDensity {
        let a = &self.a;
        let third = C64::from(1.0 / 3.0);
        let h = |x: f64| C64::new(0.0, 0.5 * x);
        let m = crate::linalg::CMat([
            [third, -h(a[2]), h(a[1])],
            [h(a[2]), third, -h(a[0])],
            [-h(a[1]), h(a[0]), third],
        ]);
        QutritDensity::new(m).expect("pseudo-qubit matrix is Hermitian with unit trace")
    }
}

pub fn pseudo_qubit(a: Vec3) -> Result<QutritDensity> {
    Ok(PseudoQubit::new(a)?.density())
}

/// `Tr(ρ_a ρ_b) = 1/3 + a·b/2`
pub fn pseudo_overlap(a: Vec3, b: Vec3) -> Result<f64> {
    PseudoQubit::new(a)?;
    PseudoQubit::new(b)?;
    Ok(1.0 / 3.0 + 0.5 * dot(&a, &b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::decompose;
    use std::f64::consts::{FRAC_1_SQRT_2, PI};

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn rik_examples() {
        let p = rik_decompose(&[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]).unwrap();
        assert_eq!((p.r, p.k), ([1.0, 0.0, 0.0], [0.0; 3]));

        let p = rik_decompose(&reference_state(PI / 4.0)).unwrap();
        assert!((p.r[0] - FRAC_1_SQRT_2).abs() < 1e-15 && p.r[1] == 0.0);
        assert!((p.k[1] - FRAC_1_SQRT_2).abs() < 1e-15 && p.k[0] == 0.0);

        let ph = C64::from_polar(1.0, PI / 3.0);
        let p = rik_decompose(&[ph, c(0.0, 0.0), c(0.0, 0.0)]).unwrap();
        assert!((p.r[0] - 1.0).abs() < 1e-15);
        assert!(p.k.iter().all(|x| x.abs() < 1e-15));
    }

    #[test]
    fn gauge_skips_vanishing_first_amplitude() {
        let p = rik_decompose(&[c(0.0, 0.0), c(0.0, 0.6), c(0.8, 0.0)]).unwrap();
        assert_eq!(p.amp[1], c(0.6, 0.0));
        assert!((p.amp[2] - c(0.0, -0.8)).norm() < 1e-15);
    }

    #[test]
    fn rejects_unnormalized() {
        assert!(matches!(
            rik_decompose(&[c(1.0, 0.0), c(0.1, 0.0), c(0.0, 0.0)]),
            Err(Error::NotNormalized { .. })
        ));
    }

    #[test]
    fn bloch_examples() {
        let real = rik_decompose(&mub_vector(1, 0)).unwrap();
        assert_eq!(bloch_from_pure(&real), [0.0; 3]);

        let p = rik_decompose(&reference_state(PI / 4.0)).unwrap();
        let a = bloch_from_pure(&p);
        assert!(a[0].abs() < 1e-16 && a[1].abs() < 1e-16 && (a[2] - 1.0).abs() < 1e-15);

        let p = rik_decompose(&reference_state(PI / 6.0)).unwrap();
        let a = bloch_from_pure(&p);
        assert!((a[2] - 3f64.sqrt() / 2.0).abs() < 1e-15);
        let from_rho = decompose(&p.density()).a;
        for j in 0..3 {
            assert!((a[j] - from_rho[j]).abs() < 1e-15);
        }
    }

    #[test]
    fn orthogonality_examples() {
        let e0 = rik_decompose(&mub_vector(0, 0)).unwrap();
        let e1 = rik_decompose(&mub_vector(0, 1)).unwrap();
        assert!(orthogonal(&e0, &e1));
        let h = FRAC_1_SQRT_2;
        let d = rik_decompose(&[c(h, 0.0), c(h, 0.0), c(0.0, 0.0)]).unwrap();
        assert!(!orthogonal(&e0, &d));
    }

    #[test]
    fn partner_family_is_orthogonal_on_grid() {
        for i in 0..10 {
            let th = PI / 2.0 * i as f64 / 9.0;
            let p = rik_decompose(&reference_state(th)).unwrap();
            for j in 0..10 {
                let phi = 2.0 * PI * j as f64 / 10.0;
                for l in 0..10 {
                    let chi = 2.0 * PI * l as f64 / 10.0;
                    let q = rik_decompose(&orthogonal_partner(th, phi, chi)).unwrap();
                    assert!(orthogonal(&p, &q), "θ={th} φ={phi} χ={chi}");
                    let (a, ap) = orthogonal_bloch_family(th, phi, chi);
                    let direct = bloch_from_pure(&q);
                    for m in 0..3 {
                        assert!((ap[m] - direct[m]).abs() < 1e-12);
                    }
                    assert!(dot(&a, &ap) <= 1e-12);
                    let expected = -4.0 * phi.cos().powi(2) * (th.cos() * th.sin()).powi(2);
                    assert!((dot(&a, &ap) - expected).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn family_closed_form_examples() {
        let (_, ap) = orthogonal_bloch_family(0.3, PI / 2.0, 1.1);
        assert!(ap.iter().all(|x| x.abs() < 1e-15));
        let (_, ap) = orthogonal_bloch_family(PI / 4.0, PI / 4.0, 0.0);
        let want = [FRAC_1_SQRT_2, 0.0, -0.5];
        for m in 0..3 {
            assert!((ap[m] - want[m]).abs() < 1e-15);
        }
    }

    #[test]
    fn mub_layout() {
        let fam = mub_bases();
        for i in 0..3 {
            let mut e = [C64::from(0.0); 3];
            e[i] = ONE;
            assert_eq!(*fam.bases[0][i].amplitudes(), e);
        }
        let ov = inner(fam.bases[0][0].amplitudes(), fam.bases[1][0].amplitudes()).norm();
        assert!((ov - 1.0 / 3f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn pseudo_qubit_examples() {
        let rho = pseudo_qubit([0.0; 3]).unwrap();
        assert!(rho.matrix().max_abs_diff(QutritDensity::maximally_mixed().matrix()) < 1e-16);

        let rho = pseudo_qubit([0.0, 2.0 / 3.0, 0.0]).unwrap();
        let ev = rho.eigenvalues();
        for (got, want) in ev.iter().zip([2.0 / 3.0, 1.0 / 3.0, 0.0]) {
            assert!((got - want).abs() < 1e-12);
        }

        assert!(matches!(pseudo_qubit([0.0, 0.0, 0.7]), Err(Error::OutOfBall { .. })));

        let p = decompose(&pseudo_qubit([0.1, -0.2, 0.3]).unwrap());
        for j in 0..3 {
            for k in 0..3 {
                let want = if j == k { 1.0 / 3.0 } else { 0.0 };
                assert!((p.t.get(j, k) - want).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn pseudo_overlap_examples() {
        assert!((pseudo_overlap([0.0; 3], [0.0; 3]).unwrap() - 1.0 / 3.0).abs() < 1e-16);
        let a = [2.0 / 3.0, 0.0, 0.0];
        let b = [-2.0 / 3.0, 0.0, 0.0];
        assert!((pseudo_overlap(a, b).unwrap() - 1.0 / 9.0).abs() < 1e-15);
        let same = pseudo_overlap(a, a).unwrap();
        assert!((same - 5.0 / 9.0).abs() < 1e-15);
        // purity of the rank-2 boundary state: (2/3)² + (1/3)²
        let rho = pseudo_qubit(a).unwrap();
        assert!((rho.purity() - same).abs() < 1e-15);
        assert!(pseudo_overlap([0.0, 0.0, 0.7], a).is_err());
    }
}
