//! Unitary spin-1 dynamics `ρ → U ρ U†` with `U = exp(-iθG)`.
//!
//! The nine canonical generators are the rotations `S_j`, the one-axis
//! twists `S_j²` and the two-axis countertwists `A_j = S_k S_l + S_l S_k`.
//! Rotations act on the picture as rigid SO(3) rotations; the twists deform
//! the ellipsoid.

use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::geometry::{build_scene, EllipsoidScene};
use crate::linalg::{exp_i_hermitian3, ComplexMat3};
use crate::spin1::{anticommutator, spin, spin_sq};
use crate::state::QutritDensity;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::X, Axis::Y, Axis::Z];

    pub fn index(self) -> usize {
        match self {
            Axis::X => 0,
            Axis::Y => 1,
            Axis::Z => 2,
        }
    }

    fn name(self) -> &'static str {
        ["x", "y", "z"][self.index()]
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Generator {
    Rotation(Axis),
    OneAxisTwist(Axis),
    TwoAxisCounter(Axis),
    Custom(ComplexMat3),
}

impl Generator {
    /// The nine built-in generators.
    pub fn canonical() -> [Generator; 9] {
        let mut out = [Generator::Rotation(Axis::X); 9];
        for (i, axis) in Axis::ALL.into_iter().enumerate() {
            out[i] = Generator::Rotation(axis);
            out[3 + i] = Generator::OneAxisTwist(axis);
            out[6 + i] = Generator::TwoAxisCounter(axis);
        }
        out
    }

    pub fn is_rotation(&self) -> bool {
        matches!(self, Generator::Rotation(_))
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Generator::Rotation(a) => write!(f, "rot:{}", a.name()),
            Generator::OneAxisTwist(a) => write!(f, "twist:{}", a.name()),
            Generator::TwoAxisCounter(a) => write!(f, "counter:{}", a.name()),
            Generator::Custom(_) => write!(f, "custom"),
        }
    }
}

/// Parses `rot:x`, `twist:y`, `counter:z`. Custom generators come from a
/// file and are built by the caller.
impl FromStr for Generator {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (kind, axis) = s
            .split_once(':')
            .ok_or_else(|| Error::InvalidArgument(format!("generator '{s}' is not kind:axis")))?;
        let axis = match axis {
            "x" => Axis::X,
            "y" => Axis::Y,
            "z" => Axis::Z,
            other => return Err(Error::InvalidArgument(format!("unknown axis '{other}'"))),
        };
        match kind {
            "rot" => Ok(Generator::Rotation(axis)),
            "twist" => Ok(Generator::OneAxisTwist(axis)),
            "counter" => Ok(Generator::TwoAxisCounter(axis)),
            other => Err(Error::InvalidArgument(format!("unknown generator kind '{other}'"))),
        }
    }
}

pub fn generator_matrix(g: &Generator) -> Result<ComplexMat3> {
    match g {
        Generator::Rotation(a) => Ok(spin(a.index())),
        Generator::OneAxisTwist(a) => Ok(spin_sq(a.index())),
        Generator::TwoAxisCounter(a) => Ok(anticommutator(a.index())),
        Generator::Custom(h) => {
            h.check_hermitian()?;
            Ok(h.hermitian_part())
        }
    }
}

/// `S_n` for a real unit direction `n`.
pub fn spin_along(n: &[f64; 3]) -> ComplexMat3 {
    (0..3).fold(ComplexMat3::zeros(), |acc, j| acc + spin(j).scale_real(n[j]))
}

/// `S_{i+}² - S_{i-}²` with `i± = (j ± k)/√2` and `(i, j, k)` cyclic. Equal
/// to `A_i`.
pub fn countertwist_from_twists(axis: Axis) -> ComplexMat3 {
    let i = axis.index();
    let (j, k) = ((i + 1) % 3, (i + 2) % 3);
    let mut plus = [0.0; 3];
    let mut minus = [0.0; 3];
    plus[j] = FRAC_1_SQRT_2;
    plus[k] = FRAC_1_SQRT_2;
    minus[j] = FRAC_1_SQRT_2;
    minus[k] = -FRAC_1_SQRT_2;
    let sp = spin_along(&plus);
    let sm = spin_along(&minus);
    sp * sp - sm * sm
}

pub fn evolve(rho: &QutritDensity, g: &Generator, theta: f64) -> Result<QutritDensity> {
    rho.ensure_positive()
        .map_err(|e| Error::InvalidState(e.to_string()))?;
    let u = exp_i_hermitian3(&generator_matrix(g)?, theta)?;
    QutritDensity::new(u.conjugate(rho.matrix()))
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub thetas: Vec<f64>,
    pub states: Vec<QutritDensity>,
    pub scenes: Option<Vec<EllipsoidScene>>,
}

/// `n` states on the uniform grid `[0, θ_max]`, each evolved directly from
/// `rho0`.
pub fn trajectory(
    rho0: &QutritDensity,
    g: &Generator,
    theta_max: f64,
    n: usize,
    with_scenes: bool,
) -> Result<Trajectory> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("trajectory needs n >= 2, got {n}")));
    }
    rho0.ensure_positive()
        .map_err(|e| Error::InvalidState(e.to_string()))?;
    let h = generator_matrix(g)?;
    let thetas: Vec<f64> = (0..n)
        .map(|i| theta_max * i as f64 / (n - 1) as f64)
        .collect();
    let states = thetas
        .iter()
        .map(|&th| {
            let u = exp_i_hermitian3(&h, th)?;
            QutritDensity::new(u.conjugate(rho0.matrix()))
        })
        .collect::<Result<Vec<_>>>()?;
    let scenes = if with_scenes {
        Some(states.iter().map(build_scene).collect::<Result<Vec<_>>>()?)
    } else {
        None
    };
    Ok(Trajectory {
        thetas,
        states,
        scenes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{RealSymMat3, C64};
    use crate::state::{compose, decompose, StateParams};
    use std::f64::consts::PI;

    fn taylor_exp(g: &ComplexMat3, theta: f64) -> ComplexMat3 {
        let x = g.scale(C64::new(0.0, -theta));
        let mut term = ComplexMat3::identity();
        let mut sum = term;
        for n in 1..120 {
            term = (term * x).scale_real(1.0 / n as f64);
            sum = sum + term;
        }
        sum
    }

    fn sample_state() -> QutritDensity {
        let t = RealSymMat3::from_upper([0.2, 0.3, 0.5], 0.05, -0.04, 0.1);
        compose(&StateParams::from_bloch_and_tensor([0.3, 0.0, 0.0], t)).unwrap()
    }

    #[test]
    fn generator_matrices() {
        assert_eq!(generator_matrix(&Generator::Rotation(Axis::Z)).unwrap(), spin(2));
        let sy2 = generator_matrix(&Generator::OneAxisTwist(Axis::Y)).unwrap();
        assert_eq!(sy2.re(), [[1.0, 0.0, 0.0], [0.0, 0.0, 0.0], [0.0, 0.0, 1.0]]);
        let ay = generator_matrix(&Generator::TwoAxisCounter(Axis::Y)).unwrap();
        assert_eq!(ay, spin(2) * spin(0) + spin(0) * spin(2));
        for axis in Axis::ALL {
            let a = anticommutator(axis.index());
            assert!(countertwist_from_twists(axis).max_abs_diff(&a) < 1e-12);
        }
    }

    #[test]
    fn custom_generator_must_be_hermitian() {
        let mut h = ComplexMat3::zeros();
        h[(0, 1)] = C64::new(1.0, 0.0);
        assert!(matches!(
            generator_matrix(&Generator::Custom(h)),
            Err(Error::NotHermitian { .. })
        ));
        let diff = spin_sq(0) - spin_sq(1);
        assert_eq!(generator_matrix(&Generator::Custom(diff)).unwrap(), diff);
    }

    #[test]
    fn parse_generator_flags() {
        assert_eq!("rot:z".parse::<Generator>().unwrap(), Generator::Rotation(Axis::Z));
        assert_eq!("twist:x".parse::<Generator>().unwrap(), Generator::OneAxisTwist(Axis::X));
        assert_eq!("counter:y".parse::<Generator>().unwrap(), Generator::TwoAxisCounter(Axis::Y));
        assert!("spin:z".parse::<Generator>().is_err());
        assert!("rot:w".parse::<Generator>().is_err());
        assert!("rot".parse::<Generator>().is_err());
        for g in Generator::canonical() {
            assert_eq!(g.to_string().parse::<Generator>().unwrap(), g);
        }
    }

    #[test]
    fn zero_angle_and_commuting_state() {
        let rho = sample_state();
        let out = evolve(&rho, &Generator::OneAxisTwist(Axis::X), 0.0).unwrap();
        assert!(out.matrix().max_abs_diff(rho.matrix()) < 1e-15);
        let mixed = QutritDensity::maximally_mixed();
        let out = evolve(&mixed, &Generator::Rotation(Axis::Z), 1.234).unwrap();
        assert!(out.matrix().max_abs_diff(mixed.matrix()) < 1e-15);
    }

    #[test]
    fn quarter_rotation_about_z_moves_x_to_y() {
        let rho = sample_state();
        let out = evolve(&rho, &Generator::Rotation(Axis::Z), PI / 2.0).unwrap();
        // oracle: conjugation with the Taylor-series unitary
        let u = taylor_exp(&spin(2), PI / 2.0);
        let oracle = decompose(&QutritDensity::new(u.conjugate(rho.matrix())).unwrap());
        let p = decompose(&out);
        for j in 0..3 {
            assert!((p.a[j] - oracle.a[j]).abs() < 1e-12);
        }
        assert!((p.a[1] - 0.3).abs() < 1e-12 && p.a[0].abs() < 1e-12);
        // T' = R T Rᵀ with R the rotation by π/2 about z
        let r = [[0.0, -1.0, 0.0], [1.0, 0.0, 0.0], [0.0, 0.0, 1.0]];
        let want = decompose(&rho).t.rotate(&r);
        for j in 0..3 {
            for k in 0..3 {
                assert!((p.t.get(j, k) - want.get(j, k)).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn evolution_preserves_spectrum() {
        let rho = sample_state();
        let ev = rho.eigenvalues();
        for g in Generator::canonical() {
            let out = evolve(&rho, &g, 0.77).unwrap();
            let ev2 = out.eigenvalues();
            for i in 0..3 {
                assert!((ev[i] - ev2[i]).abs() < 1e-12, "{g}");
            }
            assert!((out.det() - rho.det()).abs() < 1e-12);
        }
    }

    #[test]
    fn trajectory_examples() {
        let rho = sample_state();
        let tr = trajectory(&rho, &Generator::Rotation(Axis::X), 0.0, 2, false).unwrap();
        assert_eq!(tr.states[0], tr.states[1]);
        assert!(tr.scenes.is_none());

        let tr = trajectory(&rho, &Generator::Rotation(Axis::Y), 2.0 * PI, 5, true).unwrap();
        assert_eq!(tr.thetas.len(), 5);
        assert!(tr.states[4].matrix().max_abs_diff(tr.states[0].matrix()) < 1e-10);
        assert_eq!(tr.scenes.as_ref().unwrap().len(), 5);

        assert!(matches!(
            trajectory(&rho, &Generator::Rotation(Axis::Y), 1.0, 1, false),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn twisting_deforms_ellipsoid_but_keeps_determinant() {
        let rho = sample_state();
        let tr = trajectory(&rho, &Generator::OneAxisTwist(Axis::Y), PI, 9, true).unwrap();
        let scenes = tr.scenes.unwrap();
        let first = scenes[0].semi_axes;
        let spread = scenes
            .iter()
            .map(|s| (0..3).map(|i| (s.semi_axes[i] - first[i]).abs()).fold(0.0, f64::max))
            .fold(0.0, f64::max);
        assert!(spread > 1e-3, "spread {spread}");
        for s in &tr.states {
            assert!((s.det() - rho.det()).abs() < 1e-12);
        }
    }

    #[test]
    fn invalid_state_is_rejected() {
        let m = ComplexMat3::from_real([[1.2, 0.0, 0.0], [0.0, -0.2, 0.0], [0.0, 0.0, 0.0]]);
        let rho = QutritDensity::new(m).unwrap();
        assert!(matches!(
            evolve(&rho, &Generator::Rotation(Axis::X), 0.1),
            Err(Error::InvalidState(_))
        ));
    }
}
