//! Ellipsoid-plus-vector scenes and their export.
//!
//! A state is drawn as the ellipsoid `{a : a·Γ̂·a ≤ 1}` with semi-axes
//! `ε_u ≥ ε_v ≥ ε_w` along the eigenvectors of T̂, together with its Bloch
//! vector. When axes collapse the orientation of T̂ is no longer visible, so
//! unit rays are added:
//!
//! | case     | rays                                             |
//! |----------|--------------------------------------------------|
//! | three_d  | none                                             |
//! | segment  | `v` solid, `w` dashed                            |
//! | point    | `u` solid, `v` solid, `w` dashed                 |

use std::f64::consts::PI;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{mat_vec, Vec3};
use crate::state::{classify_rank, decompose, tensor_geometry, QutritDensity, RankCase};
use crate::tol::{AXIS_TOL, RANK_TOL};

pub const SCENE_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SceneCase {
    ThreeD,
    Segment,
    Point,
}

impl SceneCase {
    pub fn as_str(&self) -> &'static str {
        match self {
            SceneCase::ThreeD => "three_d",
            SceneCase::Segment => "segment",
            SceneCase::Point => "point",
        }
    }

    fn from_rank(case: RankCase) -> Self {
        match case {
            RankCase::Full3D | RankCase::Surface3D => SceneCase::ThreeD,
            RankCase::SegmentInterior | RankCase::SegmentEndpoint => SceneCase::Segment,
            RankCase::Point => SceneCase::Point,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RayStyle {
    Solid,
    Dashed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AxisLabel {
    U,
    V,
    W,
}

impl AxisLabel {
    fn index(self) -> usize {
        match self {
            AxisLabel::U => 0,
            AxisLabel::V => 1,
            AxisLabel::W => 2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Ray {
    pub dir: Vec3,
    pub style: RayStyle,
    pub label: AxisLabel,
}

/// Everything needed to draw a state.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EllipsoidScene {
    pub case: SceneCase,
    /// `ε_u ≥ ε_v ≥ ε_w`
    pub semi_axes: Vec3,
    /// Row-major; column `j` is the T̂ eigenvector for `λ_u`, `λ_v`, `λ_w`.
    pub frame: [[f64; 3]; 3],
    /// Bloch vector in the lab frame.
    pub bloch: Vec3,
    pub rays: Vec<Ray>,
}

impl EllipsoidScene {
    pub fn axis(&self, j: usize) -> Vec3 {
        [self.frame[0][j], self.frame[1][j], self.frame[2][j]]
    }
}

pub fn build_scene(rho: &QutritDensity) -> Result<EllipsoidScene> {
    let rank = classify_rank(rho).map_err(|e| Error::InvalidState(e.to_string()))?;
    let p = decompose(rho);
    let geo = tensor_geometry(&p.t);
    let eps = geo.semi_axes;

    let by_axes = match eps.iter().filter(|&&e| e > AXIS_TOL).count() {
        3 => SceneCase::ThreeD,
        1 | 2 => SceneCase::Segment,
        _ => SceneCase::Point,
    };
    // the rank verdict wins where the two disagree near tolerance
    let by_rank = SceneCase::from_rank(rank.case);
    let case = if by_axes == by_rank { by_axes } else { by_rank };

    let frame = geo.eigen.frame();
    let ray = |label: AxisLabel, style| Ray {
        dir: geo.eigen.vectors[label.index()],
        style,
        label,
    };
    let rays = match case {
        SceneCase::ThreeD => Vec::new(),
        SceneCase::Segment => vec![
            ray(AxisLabel::V, RayStyle::Solid),
            ray(AxisLabel::W, RayStyle::Dashed),
        ],
        SceneCase::Point => vec![
            ray(AxisLabel::U, RayStyle::Solid),
            ray(AxisLabel::V, RayStyle::Solid),
            ray(AxisLabel::W, RayStyle::Dashed),
        ],
    };
    Ok(EllipsoidScene {
        case,
        semi_axes: eps,
        frame,
        bloch: p.a,
        rays,
    })
}

#[derive(Serialize, Deserialize)]
struct SceneDoc {
    version: u32,
    case: SceneCase,
    semi_axes: Vec3,
    frame: [[f64; 3]; 3],
    bloch: Vec3,
    rays: Vec<Ray>,
}

impl From<&EllipsoidScene> for SceneDoc {
    fn from(s: &EllipsoidScene) -> Self {
        SceneDoc {
            version: SCENE_VERSION,
            case: s.case,
            semi_axes: s.semi_axes,
            frame: s.frame,
            bloch: s.bloch,
            rays: s.rays.clone(),
        }
    }
}

/// Versioned scene document in canonical one-line form.
pub fn export_scene_json(s: &EllipsoidScene) -> String {
    crate::io::canonical_json(&SceneDoc::from(s))
}

/// Serde value of the versioned document, for embedding in larger files.
pub fn scene_json_value(s: &EllipsoidScene) -> serde_json::Value {
    serde_json::to_value(SceneDoc::from(s)).expect("scene serializes")
}

pub fn import_scene_json(text: &str) -> std::result::Result<EllipsoidScene, String> {
    let doc: SceneDoc = serde_json::from_str(text).map_err(|e| e.to_string())?;
    if doc.version != SCENE_VERSION {
        return Err(format!("unsupported scene version {}", doc.version));
    }
    Ok(EllipsoidScene {
        case: doc.case,
        semi_axes: doc.semi_axes,
        frame: doc.frame,
        bloch: doc.bloch,
        rays: doc.rays,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ObjOptions {
    /// Latitude rings, excluding the poles.
    pub lat: usize,
    /// Vertices per ring.
    pub lon: usize,
    /// Emit only the closed ellipsoid surface.
    pub surface_only: bool,
}

impl Default for ObjOptions {
    fn default() -> Self {
        ObjOptions {
            lat: 16,
            lon: 32,
            surface_only: false,
        }
    }
}

/// Lab `(x, y, z)` to OBJ `(X, Y, Z) = (x, z, -y)`: right-handed, y-up.
fn to_obj(v: &Vec3) -> Vec3 {
    [v[0], v[2], -v[1]]
}

fn num(x: f64) -> String {
    crate::io::fmt_real(x)
}

struct ObjWriter {
    out: String,
    count: usize,
}

impl ObjWriter {
    fn vertex(&mut self, lab: &Vec3) -> usize {
        let v = to_obj(lab);
        let _ = writeln!(self.out, "v {} {} {}", num(v[0]), num(v[1]), num(v[2]));
        self.count += 1;
        self.count
    }

    fn line(&mut self, from: &Vec3, to: &Vec3) {
        let a = self.vertex(from);
        let b = self.vertex(to);
        let _ = writeln!(self.out, "l {a} {b}");
    }
}

/// Wavefront OBJ: a UV-sphere mesh of `lat·lon + 2` vertices scaled by the
/// semi-axes (pole along `u`) for three-dimensional scenes, line elements
/// for the segment, the rays and the Bloch vector otherwise.
pub fn export_scene_obj(s: &EllipsoidScene, opts: &ObjOptions) -> Result<String> {
    if opts.lat < 4 || opts.lon < 8 {
        return Err(Error::MeshResolution {
            lat: opts.lat,
            lon: opts.lon,
        });
    }
    if opts.surface_only && s.case != SceneCase::ThreeD {
        return Err(Error::DegenerateMesh {
            case: s.case.as_str(),
        });
    }
    let mut w = ObjWriter {
        out: String::new(),
        count: 0,
    };
    let _ = writeln!(w.out, "# qutrit ellipsoid scene");
    let _ = writeln!(w.out, "# case {}", s.case.as_str());
    let _ = writeln!(
        w.out,
        "# semi_axes {} {} {}",
        num(s.semi_axes[0]),
        num(s.semi_axes[1]),
        num(s.semi_axes[2])
    );
    let _ = writeln!(w.out, "# tolerances axis_tol={AXIS_TOL:e} rank_tol={RANK_TOL:e}");
    let _ = writeln!(w.out, "# axes right-handed y-up: (X, Y, Z) = lab (x, z, -y)");

    let axes = [s.axis(0), s.axis(1), s.axis(2)];
    let place = |local: Vec3| -> Vec3 {
        // local = (along u, along v, along w), already scaled
        let m = s.frame;
        mat_vec(&m, &local)
    };

    match s.case {
        SceneCase::ThreeD => {
            let _ = writeln!(w.out, "o ellipsoid");
            let [eu, ev, ew] = s.semi_axes;
            let base = w.vertex(&place([eu, 0.0, 0.0]));
            for i in 1..=opts.lat {
                let polar = PI * i as f64 / (opts.lat + 1) as f64;
                let (sp, cp) = polar.sin_cos();
                for j in 0..opts.lon {
                    let az = 2.0 * PI * j as f64 / opts.lon as f64;
                    let (sa, ca) = az.sin_cos();
                    w.vertex(&place([eu * cp, ev * sp * ca, ew * sp * sa]));
                }
            }
            let south = w.vertex(&place([-eu, 0.0, 0.0]));
            let ring = |i: usize, j: usize| base + 1 + (i - 1) * opts.lon + (j % opts.lon);
            for j in 0..opts.lon {
                let _ = writeln!(w.out, "f {} {} {}", base, ring(1, j), ring(1, j + 1));
            }
            for i in 1..opts.lat {
                for j in 0..opts.lon {
                    let _ = writeln!(
                        w.out,
                        "f {} {} {} {}",
                        ring(i, j),
                        ring(i + 1, j),
                        ring(i + 1, j + 1),
                        ring(i, j + 1)
                    );
                }
            }
            for j in 0..opts.lon {
                let _ = writeln!(
                    w.out,
                    "f {} {} {}",
                    south,
                    ring(opts.lat, j + 1),
                    ring(opts.lat, j)
                );
            }
        }
        SceneCase::Segment => {
            let _ = writeln!(w.out, "o segment");
            let e = s.semi_axes[0];
            let u = axes[0];
            w.line(&u.map(|x| -e * x), &u.map(|x| e * x));
        }
        SceneCase::Point => {
            let _ = writeln!(w.out, "o point");
            let p = w.vertex(&[0.0; 3]);
            let _ = writeln!(w.out, "p {p}");
        }
    }
    if opts.surface_only {
        return Ok(w.out);
    }
    for ray in &s.rays {
        let style = match ray.style {
            RayStyle::Solid => "solid",
            RayStyle::Dashed => "dashed",
        };
        let label = ["u", "v", "w"][ray.label.index()];
        let _ = writeln!(w.out, "o ray_{label}");
        let _ = writeln!(w.out, "# ray {label} {style}");
        w.line(&[0.0; 3], &ray.dir);
    }
    let _ = writeln!(w.out, "o bloch");
    let _ = writeln!(w.out, "# bloch vector");
    w.line(&[0.0; 3], &s.bloch);
    Ok(w.out)
}
