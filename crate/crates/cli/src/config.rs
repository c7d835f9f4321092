//! Run configuration: a single flat JSON document, merged with command-line
//! overrides (flags win), validated into library types with field-path
//! error messages.
//!
//! Schema (all keys optional unless a command needs them):
//!
//! ```json
//! {
//!   "a": 1.0, "sigma": 0.0, "k3_0": -0.5,
//!   "case": "I", "j": 0,
//!   "kind": "conformon_lattice", "kappa": 0.75,
//!   "C2": 1.25, "tau0": 0.5, "v": 0.0,
//!   "s_range": [-7.8, 7.8], "step": 0.001,
//!   "n_grid": 2048, "snapshot_time": 0.0,
//!   "output_dir": "out", "formats": ["csv", "ply"],
//!   "tube_radius": 0.08, "ring_resolution": 16,
//!   "tol_ode": 1e-9, "tol_static": 1e-8, "tol_schrodinger": 1e-9
//! }
//! ```
//!
//! `kind` is one of `conformon_lattice` (needs `kappa`), `solitary`,
//! `circular_ring`. The torsion is taken from the explicit `tau0` key when
//! present, otherwise computed from the material (`a`, `sigma`, `k3_0`)
//! and case; a `circular_ring` always has zero torsion.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use conformon::rod::{CaseId, CurvatureProfile, RodMaterial, SolutionCase};
use conformon::Modulus;

use crate::CliError;

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    // material
    pub a: Option<f64>,
    pub sigma: Option<f64>,
    pub k3_0: Option<f64>,
    // case selection
    pub case: Option<String>,
    pub j: Option<u8>,
    // profile
    pub kind: Option<String>,
    pub kappa: Option<f64>,
    #[serde(rename = "C2")]
    pub c2: Option<f64>,
    pub tau0: Option<f64>,
    pub v: Option<f64>,
    // run parameters
    pub s_range: Option<[f64; 2]>,
    pub step: Option<f64>,
    pub n_grid: Option<usize>,
    pub snapshot_time: Option<f64>,
    pub output_dir: Option<PathBuf>,
    pub formats: Option<Vec<String>>,
    pub tube_radius: Option<f64>,
    pub ring_resolution: Option<usize>,
    // residual tolerances
    pub tol_ode: Option<f64>,
    pub tol_static: Option<f64>,
    pub tol_schrodinger: Option<f64>,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Invalid(format!("{}: {e}", path.display())))?;
        serde_json::from_str(&text)
            .map_err(|e| CliError::Invalid(format!("{}: {e}", path.display())))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Tau0Source {
    Explicit,
    Material,
    RingZero,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct Tolerances {
    pub ode: f64,
    pub statics: f64,
    pub schrodinger: f64,
}

/// Fully validated configuration, plus the populated flat echo that goes
/// into every metadata file.
#[derive(Debug, Clone)]
pub struct Resolved {
    pub material: Option<RodMaterial>,
    pub case: Option<SolutionCase>,
    pub profile: CurvatureProfile,
    pub tau0_source: Tau0Source,
    pub s_range: [f64; 2],
    pub step: f64,
    pub n_grid: usize,
    pub snapshot_time: f64,
    pub output_dir: Option<PathBuf>,
    pub formats: Vec<String>,
    pub tube_radius: f64,
    pub ring_resolution: usize,
    pub tolerances: Tolerances,
    pub echo: RunConfig,
}

fn require<T: Copy>(field: Option<T>, name: &str) -> Result<T, CliError> {
    field.ok_or_else(|| CliError::Invalid(format!("{name}: missing required key")))
}

pub fn resolve(config: &RunConfig) -> Result<Resolved, CliError> {
    let material = match (config.a, config.sigma, config.k3_0) {
        (None, None, None) => None,
        (a, sigma, k3_0) => {
            let a = require(a, "a")?;
            let sigma = require(sigma, "sigma")?;
            let k3_0 = require(k3_0, "k3_0")?;
            Some(
                RodMaterial::new(a, sigma, k3_0)
                    .map_err(|e| CliError::Invalid(format!("material: {e}")))?,
            )
        }
    };

    let case = match &config.case {
        None => None,
        Some(label) => {
            let case_id = match label.as_str() {
                "I" | "i" | "1" => CaseId::I,
                "II" | "ii" | "2" => CaseId::II,
                other => {
                    return Err(CliError::Invalid(format!(
                        "case: expected \"I\" or \"II\", got \"{other}\""
                    )))
                }
            };
            let j = config.j.unwrap_or(0);
            Some(
                SolutionCase::new(case_id, j)
                    .map_err(|e| CliError::Invalid(format!("j: {e}")))?,
            )
        }
    };

    let kind = config.kind.as_deref().unwrap_or("conformon_lattice");
    let c2 = require(config.c2, "C2")?;
    let v = config.v.unwrap_or(0.0);

    let (profile, tau0_source) = match kind {
        "circular_ring" => {
            if let Some(tau0) = config.tau0 {
                if tau0 != 0.0 {
                    return Err(CliError::Invalid(format!(
                        "tau0: circular_ring requires tau0 = 0, got {tau0}"
                    )));
                }
            }
            let profile = CurvatureProfile::circular_ring(c2, v)
                .map_err(|e| CliError::Invalid(format!("C2: {e}")))?;
            (profile, Tau0Source::RingZero)
        }
        "conformon_lattice" | "solitary" => {
            let (tau0, source) = match config.tau0 {
                Some(tau0) => (tau0, Tau0Source::Explicit),
                None => {
                    let mat = material.as_ref().ok_or_else(|| {
                        CliError::Invalid(
                            "tau0: provide tau0 explicitly, or a material (a, sigma, k3_0) \
                             with a case to derive it"
                                .into(),
                        )
                    })?;
                    let case = case.ok_or_else(|| {
                        CliError::Invalid(
                            "case: required to derive tau0 from the material".into(),
                        )
                    })?;
                    let tau0 = conformon::rod::torsion_from_twist(mat, case)
                        .map_err(|e| CliError::Invalid(format!("tau0: {e}")))?;
                    (tau0, Tau0Source::Material)
                }
            };
            let profile = if kind == "solitary" {
                CurvatureProfile::solitary(c2, tau0, v)
                    .map_err(|e| CliError::Invalid(format!("C2: {e}")))?
            } else {
                let kappa = require(config.kappa, "kappa")?;
                let kappa = Modulus::new(kappa)
                    .map_err(|e| CliError::Invalid(format!("kappa: {e}")))?;
                CurvatureProfile::conformon_lattice(kappa, c2, tau0, v)
                    .map_err(|e| CliError::Invalid(format!("C2: {e}")))?
            };
            (profile, source)
        }
        other => {
            return Err(CliError::Invalid(format!(
                "kind: expected conformon_lattice | solitary | circular_ring, got \"{other}\""
            )))
        }
    };

    let s_range = config.s_range.unwrap_or([-10.0, 10.0]);
    if !(s_range[1] > s_range[0]) {
        return Err(CliError::Invalid(format!(
            "s_range: end {} must exceed start {}",
            s_range[1], s_range[0]
        )));
    }
    let step = config.step.unwrap_or(1e-3);
    if !(step > 0.0) {
        return Err(CliError::Invalid(format!("step: must be positive, got {step}")));
    }
    let n_grid = config.n_grid.unwrap_or(2048);
    let snapshot_time = config.snapshot_time.unwrap_or(0.0);
    let formats = config
        .formats
        .clone()
        .unwrap_or_else(|| vec!["csv".to_string()]);
    for f in &formats {
        if f != "csv" && f != "ply" {
            return Err(CliError::Invalid(format!(
                "formats: expected \"csv\" or \"ply\", got \"{f}\""
            )));
        }
    }
    let tube_radius = config.tube_radius.unwrap_or(0.08);
    let ring_resolution = config.ring_resolution.unwrap_or(16);
    let tolerances = Tolerances {
        ode: config.tol_ode.unwrap_or(1e-9),
        statics: config.tol_static.unwrap_or(1e-8),
        schrodinger: config.tol_schrodinger.unwrap_or(1e-9),
    };

    // Fully populated flat echo for metadata files: re-running with this
    // document reproduces the run byte for byte.
    let echo = RunConfig {
        a: material.as_ref().map(|m| m.bending_ratio()),
        sigma: material.as_ref().map(|m| m.poisson_ratio()),
        k3_0: material.as_ref().map(|m| m.intrinsic_twist()),
        case: case.map(|c| {
            match c.case_id() {
                CaseId::I => "I",
                CaseId::II => "II",
            }
            .to_string()
        }),
        j: case.map(|c| c.parity()),
        kind: Some(kind.to_string()),
        kappa: profile.kappa().map(|k| k.value()),
        c2: Some(c2),
        tau0: Some(profile.tau0()),
        v: Some(v),
        s_range: Some(s_range),
        step: Some(step),
        n_grid: Some(n_grid),
        snapshot_time: Some(snapshot_time),
        output_dir: config.output_dir.clone(),
        formats: Some(formats.clone()),
        tube_radius: Some(tube_radius),
        ring_resolution: Some(ring_resolution),
        tol_ode: Some(tolerances.ode),
        tol_static: Some(tolerances.statics),
        tol_schrodinger: Some(tolerances.schrodinger),
    };

    Ok(Resolved {
        material,
        case,
        profile,
        tau0_source,
        s_range,
        step,
        n_grid,
        snapshot_time,
        output_dir: config.output_dir.clone(),
        formats,
        tube_radius,
        ring_resolution,
        tolerances,
        echo,
    })
}

impl Resolved {
    /// Output directory, falling back to the `--out` flag having been merged
    /// already; commands that write files require one.
    pub fn require_output_dir(&self) -> Result<&Path, CliError> {
        self.output_dir
            .as_deref()
            .ok_or_else(|| CliError::Invalid("output_dir: missing required key (or pass --out)".into()))
    }

    pub fn require_material(&self) -> Result<&RodMaterial, CliError> {
        self.material
            .as_ref()
            .ok_or_else(|| CliError::Invalid("a: missing required key (material needed)".into()))
    }

    pub fn require_case(&self) -> Result<SolutionCase, CliError> {
        self.case
            .ok_or_else(|| CliError::Invalid("case: missing required key".into()))
    }
}
