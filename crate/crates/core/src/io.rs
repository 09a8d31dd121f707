//! JSON file formats.
//!
//! * density: `{"re": 3×3, "im": 3×3}`
//! * pure state: `{"amplitudes": [[re, im], [re, im], [re, im]]}`
//! * two-qubit density: `{"re": 4×4, "im": 4×4}`
//! * generator: same layout as a density, Hermitian but any trace
//! * trajectory: `[{"theta": f, "state": density, "scene": scene?}, ...]`
//!
//! Output goes through [`canonical_json`]: keys sorted, `-0` written as `0`,
//! numbers as shortest round-trip decimals.

use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

use crate::dynamics::Trajectory;
use crate::error::Error;
use crate::geometry::scene_json_value;
use crate::linalg::{CMat, ComplexMat3, ComplexMat4, C64};
use crate::purestates::{rik_decompose, PureState};
use crate::spin1::TwoQubitDensity;
use crate::state::QutritDensity;

#[derive(Debug, Error)]
pub enum LoadError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("{0}")]
    Parse(String),
    #[error(transparent)]
    State(#[from] Error),
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MatrixDoc<const N: usize> {
    #[serde(with = "rows")]
    re: [[f64; N]; N],
    #[serde(with = "rows")]
    im: [[f64; N]; N],
}

// serde only implements fixed-size arrays up to 32 for concrete sizes, so
// rows go through Vec with a length check.
mod rows {
    use serde::de::Error as _;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer, const N: usize>(
        m: &[[f64; N]; N],
        s: S,
    ) -> Result<S::Ok, S::Error> {
        m.iter().map(|r| r.to_vec()).collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>, const N: usize>(
        d: D,
    ) -> Result<[[f64; N]; N], D::Error> {
        let v = Vec::<Vec<f64>>::deserialize(d)?;
        if v.len() != N {
            return Err(D::Error::custom(format!("expected {N} rows, found {}", v.len())));
        }
        let mut out = [[0.0; N]; N];
        for (i, row) in v.iter().enumerate() {
            if row.len() != N {
                return Err(D::Error::custom(format!(
                    "row {i}: expected {N} columns, found {}",
                    row.len()
                )));
            }
            out[i].copy_from_slice(row);
        }
        Ok(out)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PureDoc {
    amplitudes: [[f64; 2]; 3],
}

/// Contents of a state file.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StateInput {
    Density(QutritDensity),
    Pure(PureState),
}

impl StateInput {
    pub fn density(&self) -> QutritDensity {
        match self {
            StateInput::Density(rho) => *rho,
            StateInput::Pure(p) => p.density(),
        }
    }
}

fn parse_doc<T: DeserializeOwned>(text: &str) -> Result<T, LoadError> {
    serde_json::from_str(text).map_err(|e| LoadError::Parse(format!("parse error: {e}")))
}

fn matrix_from_doc<const N: usize>(doc: &MatrixDoc<N>) -> Result<CMat<N>, LoadError> {
    let m = CMat::from_parts(doc.re, doc.im);
    if !m.is_finite() {
        return Err(LoadError::Parse("matrix has non-finite entries".into()));
    }
    Ok(m)
}

/// Density or pure state, told apart by the top-level keys.
pub fn parse_state(text: &str) -> Result<StateInput, LoadError> {
    let probe: Value = parse_doc(text)?;
    let obj = probe
        .as_object()
        .ok_or_else(|| LoadError::Parse("state file must hold a JSON object".into()))?;
    if obj.contains_key("amplitudes") {
        let doc: PureDoc = parse_doc(text)?;
        let amp = doc.amplitudes.map(|[re, im]| C64::new(re, im));
        if amp.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(LoadError::Parse("amplitudes must be finite".into()));
        }
        Ok(StateInput::Pure(rik_decompose(&amp)?))
    } else if obj.contains_key("re") || obj.contains_key("im") {
        let doc: MatrixDoc<3> = parse_doc(text)?;
        Ok(StateInput::Density(QutritDensity::new(matrix_from_doc(&doc)?)?))
    } else {
        Err(LoadError::Parse(
            "state file needs either \"re\"/\"im\" or \"amplitudes\"".into(),
        ))
    }
}

pub fn parse_two_qubit(text: &str) -> Result<TwoQubitDensity, LoadError> {
    let doc: MatrixDoc<4> = parse_doc(text)?;
    Ok(TwoQubitDensity::new(matrix_from_doc(&doc)?)?)
}

/// Hermitian 3×3 generator; the Hermiticity check happens on use.
pub fn parse_generator(text: &str) -> Result<ComplexMat3, LoadError> {
    let doc: MatrixDoc<3> = parse_doc(text)?;
    matrix_from_doc(&doc)
}

pub fn read_text(path: &Path) -> Result<String, LoadError> {
    std::fs::read_to_string(path).map_err(|source| LoadError::Io {
        path: path.display().to_string(),
        source,
    })
}

pub fn load_state(path: &Path) -> Result<StateInput, LoadError> {
    parse_state(&read_text(path)?)
}

/// Shortest round-trip decimal; scientific notation outside
/// `[1e-5, 1e16)`, and `0` for either zero.
pub fn fmt_real(x: f64) -> String {
    let a = x.abs();
    if x == 0.0 {
        "0".to_string()
    } else if (1e-5..1e16).contains(&a) || !a.is_finite() {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

fn zero_signs(v: &mut Value) {
    match v {
        Value::Number(n) => {
            if n.as_f64() == Some(0.0) && n.is_f64() {
                *v = Value::from(0.0);
            }
        }
        Value::Array(a) => a.iter_mut().for_each(zero_signs),
        Value::Object(o) => o.values_mut().for_each(zero_signs),
        _ => {}
    }
}

/// Compact JSON with sorted keys and no negative zeros.
pub fn canonical_json<T: Serialize + ?Sized>(value: &T) -> String {
    let mut v = serde_json::to_value(value).expect("value serializes to JSON");
    zero_signs(&mut v);
    v.to_string()
}

pub fn matrix_value<const N: usize>(m: &CMat<N>) -> Value {
    serde_json::to_value(MatrixDoc { re: m.re(), im: m.im() }).expect("matrix serializes")
}

pub fn density_json(rho: &QutritDensity) -> String {
    canonical_json(&matrix_value(rho.matrix()))
}

pub fn two_qubit_json(m: &ComplexMat4) -> String {
    canonical_json(&matrix_value(m))
}

pub fn pure_json(p: &PureState) -> String {
    let doc = PureDoc {
        amplitudes: p.amplitudes().map(|z| [z.re, z.im]),
    };
    canonical_json(&doc)
}

pub fn trajectory_json(tr: &Trajectory) -> String {
    let records: Vec<Value> = tr
        .thetas
        .iter()
        .zip(&tr.states)
        .enumerate()
        .map(|(i, (theta, rho))| {
            let mut rec = serde_json::Map::new();
            rec.insert("theta".into(), Value::from(*theta));
            rec.insert("state".into(), matrix_value(rho.matrix()));
            if let Some(scenes) = &tr.scenes {
                rec.insert("scene".into(), scene_json_value(&scenes[i]));
            }
            Value::Object(rec)
        })
        .collect();
    canonical_json(&records)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{trajectory, Axis, Generator};
    use crate::linalg::ONE;

    const MIXED: &str = r#"{"re": [[0.3333333333333333, 0, 0], [0, 0.3333333333333333, 0], [0, 0, 0.33333333333333337]],
        "im": [[0, 0, 0], [0, 0, 0], [0, 0, 0]]}"#;

    #[test]
    fn density_round_trip() {
        let rho = parse_state(MIXED).unwrap().density();
        let text = density_json(&rho);
        assert!(text.starts_with("{\"im\":"));
        assert_eq!(parse_state(&text).unwrap().density(), rho);
    }

    #[test]
    fn pure_round_trip() {
        let s = r#"{"amplitudes": [[0.6, 0], [0, 0.8], [0, 0]]}"#;
        let StateInput::Pure(p) = parse_state(s).unwrap() else {
            panic!("expected a pure state");
        };
        let again = parse_state(&pure_json(&p)).unwrap();
        assert_eq!(again, StateInput::Pure(p));
        assert!((again.density().matrix()[(0, 0)].re - 0.36).abs() < 1e-15);
    }

    #[test]
    fn parse_errors_carry_position() {
        let err = parse_state("{\"re\": [[1, 0, 0],\n [0, 0 0]]}").unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("line 2"), "{msg}");
        let err = parse_state(r#"{"re": [[1,0],[0,0]], "im": [[0,0],[0,0]]}"#).unwrap_err();
        assert!(err.to_string().contains("expected 3"), "{err}");
        assert!(matches!(parse_state("[1, 2]"), Err(LoadError::Parse(_))));
        assert!(matches!(parse_state("{\"x\": 1}"), Err(LoadError::Parse(_))));
    }

    #[test]
    fn state_checks_run_on_load() {
        let bad_trace = r#"{"re": [[1,0,0],[0,1,0],[0,0,0]], "im": [[0,0,0],[0,0,0],[0,0,0]]}"#;
        assert!(matches!(
            parse_state(bad_trace),
            Err(LoadError::State(Error::TraceNotOne { .. }))
        ));
        let not_herm = r#"{"re": [[1,0.5,0],[0,0,0],[0,0,0]], "im": [[0,0,0],[0,0,0],[0,0,0]]}"#;
        assert!(matches!(
            parse_state(not_herm),
            Err(LoadError::State(Error::NotHermitian { .. }))
        ));
        let unnormalized = r#"{"amplitudes": [[1, 0], [1, 0], [0, 0]]}"#;
        assert!(matches!(
            parse_state(unnormalized),
            Err(LoadError::State(Error::NotNormalized { .. }))
        ));
    }

    #[test]
    fn canonical_form() {
        assert_eq!(canonical_json(&[-0.0, 1.0, 0.1]), "[0.0,1.0,0.1]");
        assert_eq!(fmt_real(-0.0), "0");
        assert_eq!(fmt_real(2.0 / 3.0), "0.6666666666666666");
        assert_eq!(fmt_real(-8.486965773710193e-19), "-8.486965773710193e-19");
        assert_eq!(fmt_real(1.0), "1");
        let rho = QutritDensity::from_pure(&[ONE, crate::linalg::ZERO, crate::linalg::ZERO]).unwrap();
        let tr = trajectory(&rho, &Generator::Rotation(Axis::Z), 1.0, 2, true).unwrap();
        let v: Value = serde_json::from_str(&trajectory_json(&tr)).unwrap();
        let recs = v.as_array().unwrap();
        assert_eq!(recs.len(), 2);
        assert_eq!(recs[1]["theta"], 1.0);
        assert_eq!(recs[0]["scene"]["case"], "point");
    }
}
