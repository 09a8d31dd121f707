//! The `qutrit` command-line tool.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::dynamics::{trajectory, Generator};
use crate::error::Error;
use crate::geometry::{build_scene, export_scene_json, export_scene_obj, ObjOptions, SceneCase};
use crate::io::{
    canonical_json, density_json, load_state, parse_generator, parse_two_qubit, pure_json,
    read_text, trajectory_json, two_qubit_json, LoadError, StateInput,
};
use crate::linalg::{inner, Vec3};
use crate::purestates::{mub_bases, orthogonal, overlap_rk, pseudo_qubit};
use crate::sampling::random_state;
use crate::spin1::{from_two_qubit, ppt_min_eigenvalue, ppt_separable, to_two_qubit};
use crate::state::{
    classify_rank, decompose, gamma_norm, metric_tensor, semi_axes, validate, QutritDensity,
    RankReport, StateParams, ValidityReport,
};
use crate::tol::ORTHO_TOL;

const EXIT_CODES: &str = "\
Exit codes:
  0  success
  1  I/O, parse or argument error
  2  invalid state (not Hermitian, wrong trace, not positive, ...)
  3  internal inconsistency between two independent checks

Time evolution uses U = exp(-i theta G).";

#[derive(Debug, Parser)]
#[command(name = "qutrit", version, about = "Analyze and draw qutrit states as ellipsoids")]
#[command(after_help = EXIT_CODES)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum SceneFormat {
    Json,
    Obj,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Direction {
    /// Qutrit file to a symmetric two-qubit matrix
    To2q,
    /// Symmetric two-qubit matrix to a qutrit file
    From2q,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print the Bloch vector, correlation tensor data, validity and rank
    Analyze {
        path: PathBuf,
        /// Emit the report as JSON
        #[arg(long)]
        json: bool,
    },
    /// Export the ellipsoid scene
    Scene {
        path: PathBuf,
        #[arg(long, value_enum, default_value = "json")]
        format: SceneFormat,
        /// Latitude rings of the OBJ mesh
        #[arg(long, default_value_t = 16)]
        lat: usize,
        /// Vertices per ring of the OBJ mesh
        #[arg(long, default_value_t = 32)]
        lon: usize,
        /// OBJ: only the ellipsoid surface, no rays or Bloch vector
        #[arg(long)]
        surface_only: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// One of the four mutually unbiased bases
    Mub {
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=4))]
        basis: u8,
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=3))]
        vector: u8,
        /// Write the state file here instead of printing it
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Pseudo-qubit state with T = 1/3; components accept decimals or p/q
    Pseudo {
        #[arg(long, value_parser = parse_real, allow_hyphen_values = true)]
        ax: f64,
        #[arg(long, value_parser = parse_real, allow_hyphen_values = true)]
        ay: f64,
        #[arg(long, value_parser = parse_real, allow_hyphen_values = true)]
        az: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Unitary trajectory on a uniform grid over [0, theta]
    Evolve {
        path: PathBuf,
        /// rot:x|y|z, twist:x|y|z, counter:x|y|z or custom:<file>
        #[arg(long)]
        generator: String,
        #[arg(long, allow_hyphen_values = true)]
        theta: f64,
        /// Number of grid points, at least 2
        #[arg(long, default_value_t = 2)]
        steps: usize,
        /// Attach a scene to every grid point
        #[arg(long)]
        scenes: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Convert between a qutrit and a symmetric two-qubit state
    Bridge {
        path: PathBuf,
        #[arg(long, value_enum)]
        direction: Direction,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check whether two pure states are orthogonal, two ways
    Ortho { a: PathBuf, b: PathBuf },
    /// Random state of a given rank
    Random {
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=3))]
        rank: u8,
        #[arg(long, env = "QUTRIT_SEED", default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn parse_real(s: &str) -> Result<f64, String> {
    let value = match s.split_once('/') {
        Some((p, q)) => {
            let p: f64 = p.trim().parse().map_err(|e| format!("numerator: {e}"))?;
            let q: f64 = q.trim().parse().map_err(|e| format!("denominator: {e}"))?;
            if q == 0.0 {
                return Err("zero denominator".into());
            }
            p / q
        }
        None => s.trim().parse().map_err(|e| format!("{e}"))?,
    };
    if value.is_finite() {
        Ok(value)
    } else {
        Err("value must be finite".into())
    }
}

/// `"degenerate"` in JSON.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Degenerate {
    Degenerate,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MetricReport {
    Defined {
        gamma: [[f64; 3]; 3],
        /// `det(1 - T̂)`
        det: f64,
    },
    Degenerate(Degenerate),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SceneSummary {
    pub case: SceneCase,
    pub semi_axes: Vec3,
    pub rays: usize,
}

/// Everything `analyze` prints.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub params: StateParams,
    /// Eigenvalues of T̂, descending.
    pub tensor_eigenvalues: Vec3,
    pub semi_axes: Vec3,
    pub validity: ValidityReport,
    /// Present exactly when the state is valid.
    pub rank: Option<RankReport>,
    pub metric: MetricReport,
    pub gamma_norm: Option<f64>,
    pub scene: Option<SceneSummary>,
}

/// Builds the report; fails when the minor conditions and the spectrum
/// disagree about validity.
pub fn analyze(rho: &QutritDensity) -> Result<Report, String> {
    let params = decompose(rho);
    let validity = validate(&params);
    let rank = classify_rank(rho).ok();
    if validity.overall != rank.is_some() {
        return Err(format!(
            "validity verdict {} disagrees with minimum eigenvalue {:e}",
            validity.overall,
            rho.eigenvalues()[2]
        ));
    }
    let lambda = params.t.eig().values;
    let metric = match metric_tensor(&params.t) {
        m if m.is_defined() => MetricReport::Defined {
            gamma: m.gamma.expect("defined").rows(),
            det: m.det,
        },
        _ => MetricReport::Degenerate(Degenerate::Degenerate),
    };
    let scene = match rank {
        Some(_) => {
            let s = build_scene(rho).map_err(|e| e.to_string())?;
            Some(SceneSummary {
                case: s.case,
                semi_axes: s.semi_axes,
                rays: s.rays.len(),
            })
        }
        None => None,
    };
    Ok(Report {
        gamma_norm: gamma_norm(&params.a, &params.t).ok(),
        params,
        tensor_eigenvalues: lambda,
        semi_axes: semi_axes(&lambda),
        validity,
        rank,
        metric,
        scene,
    })
}

fn num(x: f64) -> String {
    crate::io::fmt_real(x)
}

fn vec3(v: &Vec3) -> String {
    format!("{} {} {}", num(v[0]), num(v[1]), num(v[2]))
}

fn flag(ok: bool) -> &'static str {
    if ok {
        "ok"
    } else {
        "FAIL"
    }
}

pub fn render_report(r: &Report) -> String {
    let mut s = String::new();
    let p = &r.params;
    let v = &r.validity;
    let _ = writeln!(s, "a          {}", vec3(&p.a));
    let _ = writeln!(s, "q          {}", vec3(&p.q));
    let _ = writeln!(s, "omega      {}", vec3(&p.omega));
    let _ = writeln!(s, "lambda     {}", vec3(&r.tensor_eigenvalues));
    let _ = writeln!(s, "eps        {}", vec3(&r.semi_axes));
    let _ = writeln!(
        s,
        "valid      {} (c1 {}, c2 {}, c3 {})",
        if v.overall { "yes" } else { "no" },
        flag(v.c1_ok),
        flag(v.c2_ok),
        flag(v.c3_ok)
    );
    if let Some(why) = &v.violation {
        let _ = writeln!(s, "violation  {why}");
    }
    match (&r.metric, r.gamma_norm) {
        (MetricReport::Defined { det, .. }, Some(g)) => {
            let _ = writeln!(s, "gamma_norm {} (det(1-T) = {})", num(g), num(*det));
        }
        _ => {
            let _ = writeln!(s, "gamma_norm degenerate");
        }
    }
    match &r.rank {
        Some(rank) => {
            let _ = writeln!(s, "rank       {} {}", rank.rank, rank.case.as_str());
            let _ = writeln!(s, "rho_eig    {}", vec3(&rank.eigenvalues));
        }
        None => {
            let _ = writeln!(s, "rank       n/a");
        }
    }
    if let Some(sc) = &r.scene {
        let _ = writeln!(s, "scene      {} with {} rays", sc.case.as_str(), sc.rays);
    }
    s
}

struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn new(code: i32, message: impl Into<String>) -> Self {
        Failure {
            code,
            message: message.into(),
        }
    }
}

fn error_code(e: &Error) -> i32 {
    match e {
        Error::InvalidArgument(_) | Error::MeshResolution { .. } => 1,
        Error::MetricUndefined { .. } => 3,
        _ => 2,
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::new(error_code(&e), e.to_string())
    }
}

impl From<LoadError> for Failure {
    fn from(e: LoadError) -> Self {
        match e {
            LoadError::State(inner) => inner.into(),
            other => Failure::new(1, other.to_string()),
        }
    }
}

fn io_failure(path: &Path, e: std::io::Error) -> Failure {
    Failure::new(1, format!("{}: {e}", path.display()))
}

/// Writes `text` to `out`, or to stdout when no path is given.
fn emit(stdout: &mut dyn Write, out: Option<&Path>, text: &str) -> Result<(), Failure> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|e| io_failure(path, e)),
        None => stdout
            .write_all(text.as_bytes())
            .map_err(|e| Failure::new(1, format!("stdout: {e}"))),
    }
}

fn print(stdout: &mut dyn Write, text: &str) -> Result<(), Failure> {
    emit(stdout, None, text)
}

fn state_with_report(
    stdout: &mut dyn Write,
    out: Option<&Path>,
    state_line: String,
    rho: &QutritDensity,
) -> Result<i32, Failure> {
    let report = analyze(rho).map_err(|m| Failure::new(3, m))?;
    match out {
        Some(path) => emit(stdout, Some(path), &(state_line + "\n"))?,
        None => print(stdout, &format!("state      {state_line}\n"))?,
    }
    print(stdout, &render_report(&report))?;
    Ok(if report.validity.overall { 0 } else { 2 })
}

fn cmd_analyze(stdout: &mut dyn Write, path: &Path, json: bool) -> Result<i32, Failure> {
    let rho = load_state(path)?.density();
    let report = analyze(&rho).map_err(|m| Failure::new(3, m))?;
    let text = if json {
        canonical_json(&report) + "\n"
    } else {
        render_report(&report)
    };
    print(stdout, &text)?;
    if report.validity.overall {
        Ok(0)
    } else {
        let why = report.validity.violation.unwrap_or_default();
        Err(Failure::new(2, format!("invalid state: {why}")))
    }
}

fn cmd_scene(
    stdout: &mut dyn Write,
    path: &Path,
    format: SceneFormat,
    opts: ObjOptions,
    out: Option<&Path>,
) -> Result<i32, Failure> {
    let rho = load_state(path)?.density();
    let scene = build_scene(&rho)?;
    let text = match format {
        SceneFormat::Json => export_scene_json(&scene) + "\n",
        SceneFormat::Obj => export_scene_obj(&scene, &opts)?,
    };
    emit(stdout, out, &text)?;
    Ok(0)
}

fn cmd_mub(stdout: &mut dyn Write, basis: u8, vector: u8, out: Option<&Path>) -> Result<i32, Failure> {
    let family = mub_bases();
    let p = family.bases[basis as usize - 1][vector as usize - 1];
    let code = state_with_report(stdout, out, pure_json(&p), &p.density())?;
    let mut s = String::from("overlaps\n");
    for (b, base) in family.bases.iter().enumerate() {
        let moduli: Vec<String> = base
            .iter()
            .map(|q| num(inner(p.amplitudes(), q.amplitudes()).norm()))
            .collect();
        let _ = writeln!(s, "  basis {} {}", b + 1, moduli.join(" "));
    }
    print(stdout, &s)?;
    Ok(code)
}

fn cmd_pseudo(stdout: &mut dyn Write, a: Vec3, out: Option<&Path>) -> Result<i32, Failure> {
    let rho = pseudo_qubit(a)?;
    state_with_report(stdout, out, density_json(&rho), &rho)
}

fn cmd_evolve(
    stdout: &mut dyn Write,
    path: &Path,
    generator: &str,
    theta: f64,
    steps: usize,
    scenes: bool,
    out: Option<&Path>,
) -> Result<i32, Failure> {
    let g = match generator.strip_prefix("custom:") {
        Some(file) => Generator::Custom(parse_generator(&read_text(Path::new(file))?)?),
        None => generator.parse::<Generator>()?,
    };
    if !theta.is_finite() {
        return Err(Failure::new(1, "theta must be finite"));
    }
    let rho = load_state(path)?.density();
    let tr = trajectory(&rho, &g, theta, steps, scenes)?;
    emit(stdout, out, &(trajectory_json(&tr) + "\n"))?;
    Ok(0)
}

fn cmd_bridge(
    stdout: &mut dyn Write,
    path: &Path,
    direction: Direction,
    out: Option<&Path>,
) -> Result<i32, Failure> {
    match direction {
        Direction::To2q => {
            let rho = load_state(path)?.density();
            let rho4 = to_two_qubit(&rho)?;
            emit(stdout, out, &(two_qubit_json(rho4.matrix()) + "\n"))?;
            if out.is_some() {
                let summary = format!(
                    "singlet_overlap {}\nppt_min_eigenvalue {}\nseparable {}\n",
                    num(rho4.singlet_overlap()),
                    num(ppt_min_eigenvalue(&rho4)),
                    if ppt_separable(&rho4) { "yes" } else { "no" }
                );
                print(stdout, &summary)?;
            }
        }
        Direction::From2q => {
            let rho4 = parse_two_qubit(&read_text(path)?)?;
            let rho = from_two_qubit(&rho4)?;
            emit(stdout, out, &(density_json(&rho) + "\n"))?;
        }
    }
    Ok(0)
}

fn cmd_ortho(stdout: &mut dyn Write, a: &Path, b: &Path) -> Result<i32, Failure> {
    let pure = |path: &Path| match load_state(path)? {
        StateInput::Pure(p) => Ok(p),
        StateInput::Density(_) => Err(Failure::new(
            1,
            format!("{}: expected a pure-state file with \"amplitudes\"", path.display()),
        )),
    };
    let (p, q) = (pure(a)?, pure(b)?);
    let ip = inner(p.amplitudes(), q.amplitudes()).norm();
    let by_ip = ip < ORTHO_TOL;
    let rk = overlap_rk(&p, &q);
    let by_rk = orthogonal(&p, &q);
    let verdict = |o: bool| if o { "orthogonal" } else { "not orthogonal" };
    let text = format!(
        "inner_product |<a|b>| = {} : {}\nrk_conditions r.r'+k.k' = {}, r.k'-k.r' = {} : {}\n",
        num(ip),
        verdict(by_ip),
        num(rk.re),
        num(rk.im),
        verdict(by_rk)
    );
    print(stdout, &text)?;
    if by_ip != by_rk {
        return Err(Failure::new(3, "inner-product and r/k verdicts disagree"));
    }
    Ok(0)
}

fn cmd_random(stdout: &mut dyn Write, rank: u8, seed: u64, out: Option<&Path>) -> Result<i32, Failure> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rho = random_state(&mut rng, rank as usize);
    let achieved = classify_rank(&rho)?;
    match out {
        Some(path) => emit(stdout, Some(path), &(density_json(&rho) + "\n"))?,
        None => print(stdout, &format!("state      {}\n", density_json(&rho)))?,
    }
    print(
        stdout,
        &format!("rank       {} {}\n", achieved.rank, achieved.case.as_str()),
    )?;
    Ok(0)
}

fn dispatch(cli: Cli, stdout: &mut dyn Write) -> Result<i32, Failure> {
    match cli.command {
        Command::Analyze { path, json } => cmd_analyze(stdout, &path, json),
        Command::Scene {
            path,
            format,
            lat,
            lon,
            surface_only,
            out,
        } => cmd_scene(
            stdout,
            &path,
            format,
            ObjOptions {
                lat,
                lon,
                surface_only,
            },
            out.as_deref(),
        ),
        Command::Mub { basis, vector, out } => cmd_mub(stdout, basis, vector, out.as_deref()),
        Command::Pseudo { ax, ay, az, out } => cmd_pseudo(stdout, [ax, ay, az], out.as_deref()),
        Command::Evolve {
            path,
            generator,
            theta,
            steps,
            scenes,
            out,
        } => cmd_evolve(stdout, &path, &generator, theta, steps, scenes, out.as_deref()),
        Command::Bridge {
            path,
            direction,
            out,
        } => cmd_bridge(stdout, &path, direction, out.as_deref()),
        Command::Ortho { a, b } => cmd_ortho(stdout, &a, &b),
        Command::Random { rank, seed, out } => cmd_random(stdout, rank, seed, out.as_deref()),
    }
}

/// Runs the tool and returns the process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = stderr.write_all(text.as_bytes());
                1
            } else {
                let _ = stdout.write_all(text.as_bytes());
                0
            };
        }
    };
    match dispatch(cli, stdout) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(stderr, "error: {}", f.message);
            f.code
        }
    }
}
