//! Seeded random states for tests, benchmarks and the `random` command.
//!
//! Valid states are mixtures `Σ p_i |ψ_i⟩⟨ψ_i|` of Haar-random pure states
//! with flat Dirichlet weights, which gives direct control over the rank.

use rand::Rng;
use rand_distr::{Exp1, StandardNormal};

use crate::linalg::{inner, ComplexMat3, Vec3, C64};
use crate::state::QutritDensity;

pub fn gaussian_c64<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Haar-random unit vector in C³.
pub fn haar_pure<R: Rng + ?Sized>(rng: &mut R) -> [C64; 3] {
    loop {
        let v: [C64; 3] = std::array::from_fn(|_| gaussian_c64(rng));
        let n = inner(&v, &v).re.sqrt();
        if n > 1e-6 {
            return v.map(|z| z / n);
        }
    }
}

/// Haar-random unitary; columns from Gram–Schmidt on complex Gaussians.
pub fn haar_unitary<R: Rng + ?Sized>(rng: &mut R) -> ComplexMat3 {
    let mut cols = [haar_pure(rng), haar_pure(rng), haar_pure(rng)];
    for i in 0..3 {
        for j in 0..i {
            let proj = inner(&cols[j], &cols[i]);
            let prev = cols[j];
            for (x, y) in cols[i].iter_mut().zip(prev.iter()) {
                *x -= proj * y;
            }
        }
        let n = inner(&cols[i], &cols[i]).re.sqrt();
        for x in cols[i].iter_mut() {
            *x /= n;
        }
    }
    let mut u = ComplexMat3::zeros();
    for (j, col) in cols.iter().enumerate() {
        for i in 0..3 {
            u[(i, j)] = col[i];
        }
    }
    u
}

/// Flat Dirichlet weights of length `n`.
pub fn dirichlet_weights<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<f64> {
    let raw: Vec<f64> = (0..n).map(|_| rng.sample::<f64, _>(Exp1) + 1e-12).collect();
    let sum: f64 = raw.iter().sum();
    raw.into_iter().map(|x| x / sum).collect()
}

/// Mixture of `rank` Haar-random pure states (`rank` in 1..=3).
pub fn random_state<R: Rng + ?Sized>(rng: &mut R, rank: usize) -> QutritDensity {
    assert!((1..=3).contains(&rank), "rank must be 1, 2 or 3");
    let weights = dirichlet_weights(rng, rank);
    let mut m = ComplexMat3::zeros();
    for w in weights {
        m = m + ComplexMat3::outer(&haar_pure(rng)).scale_real(w);
    }
    let tr = m.trace().re;
    QutritDensity::new(m.scale_real(1.0 / tr)).expect("mixture is a density matrix")
}

/// Valid state of uniformly chosen rank.
pub fn random_valid_state<R: Rng + ?Sized>(rng: &mut R) -> QutritDensity {
    let rank = rng.random_range(1..=3);
    random_state(rng, rank)
}

/// Hermitian trace-one matrix that is a density matrix about half the time.
///
/// Draws a spectrum summing to one, either from the simplex (valid) or with
/// at least one negative entry (invalid), and rotates it by a Haar unitary.
pub fn random_hermitian_trace_one<R: Rng + ?Sized>(rng: &mut R) -> ComplexMat3 {
    let spectrum: Vec3 = if rng.random_bool(0.5) {
        let rank = rng.random_range(1..=3);
        let mut w = dirichlet_weights(rng, rank);
        w.resize(3, 0.0);
        [w[0], w[1], w[2]]
    } else {
        loop {
            let x: Vec3 = std::array::from_fn(|_| rng.random_range(-0.6..1.2));
            let sum: f64 = x.iter().sum();
            if sum.abs() > 0.2 {
                let s = x.map(|v| v / sum);
                if s.iter().any(|&v| v < 0.0) {
                    break s;
                }
            }
        }
    };
    let u = haar_unitary(rng);
    let mut d = ComplexMat3::zeros();
    for i in 0..3 {
        d[(i, i)] = C64::from(spectrum[i]);
    }
    u.conjugate(&d).hermitian_part()
}

/// Haar-random rotation in SO(3).
pub fn random_rotation<R: Rng + ?Sized>(rng: &mut R) -> [[f64; 3]; 3] {
    let mut cols = [[0.0; 3]; 3];
    for i in 0..3 {
        loop {
            let mut v: Vec3 = std::array::from_fn(|_| rng.sample(StandardNormal));
            for prev in cols.iter().take(i) {
                let p = crate::linalg::dot(prev, &v);
                for k in 0..3 {
                    v[k] -= p * prev[k];
                }
            }
            let n = crate::linalg::norm(&v);
            if n > 1e-6 {
                cols[i] = v.map(|x| x / n);
                break;
            }
        }
    }
    let mut r = crate::linalg::transpose(&cols);
    // flip the last column if the frame came out left-handed
    let c = crate::linalg::cross(&cols[0], &cols[1]);
    if crate::linalg::dot(&c, &cols[2]) < 0.0 {
        for row in r.iter_mut() {
            row[2] = -row[2];
        }
    }
    r
}
