//! Reconstruction of the 3D tube axis from a curvature profile by
//! integrating the Frenet frame equations, recovery of curvature and
//! torsion from discrete positions, the closed-tube commensurability
//! condition, and geometry export (CSV centerline, PLY tube mesh).

use std::io::Write as _;

use nalgebra::Vector3;
use thiserror::Error;

use crate::elliptic::{complete_k, Modulus};
use crate::rod::CurvatureProfile;

/// Largest modulus the closed-tube solver will bracket; above this the
/// distance to 1 is no longer resolvable in f64.
const KAPPA_MAX: f64 = 1.0 - 1e-14;

/// Curvatures below this leave the torsion numerically undefined.
const TORSION_CURVATURE_FLOOR: f64 = 1e-8;

#[derive(Debug, Error, PartialEq)]
pub enum GeometryError {
    #[error("step must be positive, got {0}")]
    NonPositiveStep(f64),
    #[error("arclength range is empty: start {start}, end {end}")]
    EmptyRange { start: f64, end: f64 },
    #[error("integration produced a non-finite state at s = {0}")]
    NonFiniteState(f64),
    #[error("need at least 5 samples to recover curvature and torsion, got {0}")]
    TooFewSamples(usize),
    #[error("sampling too coarse: max |k|*step = {0}, must stay below 0.5")]
    StepTooCoarse(f64),
    #[error("conformation is empty")]
    EmptyConformation,
    #[error("tube radius must be non-negative, got {0}")]
    NegativeTubeRadius(f64),
    #[error("ring resolution must be at least 3 for a tube mesh, got {0}")]
    RingResolutionTooSmall(usize),
    #[error("closed-tube condition needs C2 - tau0^2 > 0, got {0}")]
    NonPositiveTensionGap(f64),
    #[error("tube length must be positive, got {0}")]
    NonPositiveLength(f64),
    #[error("winding count must be at least 1")]
    ZeroWindings,
    #[error(
        "tube too short for {windings} winding(s): length {length} is below the minimum {min_length}"
    )]
    TubeTooShort {
        length: f64,
        windings: u32,
        min_length: f64,
    },
    #[error("tube so long that the required modulus is indistinguishable from 1 in f64")]
    ModulusSaturated,
}

/// Position and Frenet triad at one arclength sample.
#[derive(Debug, Clone, Copy)]
pub struct FrameState {
    pub s: f64,
    pub position: Vector3<f64>,
    pub tangent: Vector3<f64>,
    pub normal: Vector3<f64>,
    pub binormal: Vector3<f64>,
}

/// A sampled space curve produced by [`integrate_frame`], with the profile
/// it came from.
#[derive(Debug, Clone)]
pub struct Conformation {
    samples: Vec<FrameState>,
    profile: CurvatureProfile,
    step: f64,
    t_snapshot: f64,
}

impl Conformation {
    pub fn samples(&self) -> &[FrameState] {
        &self.samples
    }

    pub fn profile(&self) -> &CurvatureProfile {
        &self.profile
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    pub fn snapshot_time(&self) -> f64 {
        self.t_snapshot
    }

    /// Worst deviation from orthonormality over all samples: the largest
    /// |dot - expected| among the six pairings of the triad.
    pub fn orthonormality_drift(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for f in &self.samples {
            worst = worst.max((f.tangent.norm() - 1.0).abs());
            worst = worst.max((f.normal.norm() - 1.0).abs());
            worst = worst.max((f.binormal.norm() - 1.0).abs());
            worst = worst.max(f.tangent.dot(&f.normal).abs());
            worst = worst.max(f.tangent.dot(&f.binormal).abs());
            worst = worst.max(f.normal.dot(&f.binormal).abs());
        }
        worst
    }
}

#[derive(Clone, Copy)]
struct Frame {
    r: Vector3<f64>,
    t: Vector3<f64>,
    n: Vector3<f64>,
    b: Vector3<f64>,
}

impl Frame {
    fn canonical() -> Self {
        Frame {
            r: Vector3::zeros(),
            t: Vector3::z(),
            n: Vector3::x(),
            b: Vector3::y(),
        }
    }

    fn derivative(&self, k: f64, tau: f64) -> Frame {
        Frame {
            r: self.t,
            t: k * self.n,
            n: -k * self.t + tau * self.b,
            b: -tau * self.n,
        }
    }

    fn axpy(&self, h: f64, d: &Frame) -> Frame {
        Frame {
            r: self.r + h * d.r,
            t: self.t + h * d.t,
            n: self.n + h * d.n,
            b: self.b + h * d.b,
        }
    }

    /// Modified Gram-Schmidt in the order t, n, then b = t x n.
    fn orthonormalize(&mut self) {
        self.t.normalize_mut();
        self.n -= self.t * self.n.dot(&self.t);
        self.n.normalize_mut();
        self.b = self.t.cross(&self.n);
    }

    fn is_finite(&self) -> bool {
        [self.r, self.t, self.n, self.b]
            .iter()
            .all(|v| v.iter().all(|x| x.is_finite()))
    }
}

/// Integrate the Frenet system `t' = k n`, `n' = -k t + tau b`,
/// `b' = -tau n` with classical fixed-step RK4, starting from the canonical
/// frame (origin, `t = +z`, `n = +x`, `b = +y`).
///
/// The curvature comes from `profile.evaluate(s, t_snapshot)` and the
/// torsion is the profile's constant `tau0`. The frame is re-orthonormalized
/// after every step, which keeps the drift at rounding level over millions
/// of steps. The range is covered by `round((s_end - s_start)/step)` equal
/// steps, with the step adjusted so the last sample lands exactly on
/// `s_end`; the stored step is the adjusted one.
pub fn integrate_frame(
    profile: &CurvatureProfile,
    s_start: f64,
    s_end: f64,
    step: f64,
    t_snapshot: f64,
) -> Result<Conformation, GeometryError> {
    if !(step > 0.0) {
        return Err(GeometryError::NonPositiveStep(step));
    }
    if !(s_end > s_start) {
        return Err(GeometryError::EmptyRange {
            start: s_start,
            end: s_end,
        });
    }
    let n_steps = (((s_end - s_start) / step).round() as usize).max(1);
    let step = (s_end - s_start) / n_steps as f64;
    let tau = profile.tau0();
    let k_at = |s: f64| profile.evaluate(s, t_snapshot).k;

    let mut samples = Vec::with_capacity(n_steps + 1);
    let mut frame = Frame::canonical();
    let mut s = s_start;
    push_state(&mut samples, s, &frame);

    for i in 1..=n_steps {
        let h = step;
        let k1 = frame.derivative(k_at(s), tau);
        let mid = s + 0.5 * h;
        let k_mid = k_at(mid);
        let k2 = frame.axpy(0.5 * h, &k1).derivative(k_mid, tau);
        let k3 = frame.axpy(0.5 * h, &k2).derivative(k_mid, tau);
        let s_next = s_start + i as f64 * step;
        let k4 = frame.axpy(h, &k3).derivative(k_at(s_next), tau);

        frame = Frame {
            r: frame.r + h / 6.0 * (k1.r + 2.0 * k2.r + 2.0 * k3.r + k4.r),
            t: frame.t + h / 6.0 * (k1.t + 2.0 * k2.t + 2.0 * k3.t + k4.t),
            n: frame.n + h / 6.0 * (k1.n + 2.0 * k2.n + 2.0 * k3.n + k4.n),
            b: frame.b + h / 6.0 * (k1.b + 2.0 * k2.b + 2.0 * k3.b + k4.b),
        };
        frame.orthonormalize();
        if !frame.is_finite() {
            return Err(GeometryError::NonFiniteState(s_next));
        }
        s = s_next;
        push_state(&mut samples, s, &frame);
    }

    Ok(Conformation {
        samples,
        profile: *profile,
        step,
        t_snapshot,
    })
}

fn push_state(samples: &mut Vec<FrameState>, s: f64, frame: &Frame) {
    samples.push(FrameState {
        s,
        position: frame.r,
        tangent: frame.t,
        normal: frame.n,
        binormal: frame.b,
    });
}

/// Curvature and torsion estimated from positions alone.
#[derive(Debug, Clone, Copy)]
pub struct RecoveredSample {
    pub s: f64,
    pub curvature: f64,
    /// `None` where the curvature is numerically zero and the torsion is
    /// undefined (straight segments).
    pub torsion: Option<f64>,
}

/// Second-order finite-difference recovery of `k(s)` and `tau(s)` from the
/// sampled positions, using
/// `k = |R' x R''| / |R'|^3` and `tau = (R' x R'') . R''' / |R' x R''|^2`.
///
/// Round-trips [`integrate_frame`] input at O(step^2). Interior points only
/// (two samples are dropped at each end).
pub fn recover_curvature_torsion(
    conf: &Conformation,
) -> Result<Vec<RecoveredSample>, GeometryError> {
    let pts = conf.samples();
    if pts.len() < 5 {
        return Err(GeometryError::TooFewSamples(pts.len()));
    }
    let h = conf.step();

    let mut out = Vec::with_capacity(pts.len() - 4);
    let mut max_k_step: f64 = 0.0;
    for i in 2..pts.len() - 2 {
        let r = |j: usize| pts[j].position;
        let d1 = (r(i + 1) - r(i - 1)) / (2.0 * h);
        let d2 = (r(i + 1) - 2.0 * r(i) + r(i - 1)) / (h * h);
        let d3 = (r(i + 2) - 2.0 * r(i + 1) + 2.0 * r(i - 1) - r(i - 2)) / (2.0 * h * h * h);

        let cross = d1.cross(&d2);
        let curvature = cross.norm() / d1.norm().powi(3);
        max_k_step = max_k_step.max(curvature.abs() * h);
        let torsion = if curvature < TORSION_CURVATURE_FLOOR {
            None
        } else {
            Some(cross.dot(&d3) / cross.norm_squared())
        };
        out.push(RecoveredSample {
            s: pts[i].s,
            curvature,
            torsion,
        });
    }
    if max_k_step >= 0.5 {
        return Err(GeometryError::StepTooCoarse(max_k_step));
    }
    Ok(out)
}

/// Modulus at which a closed tube of length `length` fits exactly
/// `windings` curvature periods:
/// `length * sqrt((C2 - tau0^2)/(2 - kappa^2)) = 2 m K(kappa)`.
///
/// The left side rearranges to `2 m K(kappa) sqrt(2 - kappa^2) =
/// length * sqrt(C2 - tau0^2)`, whose left-hand side is strictly increasing
/// in `kappa` from `m pi sqrt(2)`, so bisection on `[0, 1)` finds the root.
/// Lengths below `m pi sqrt(2) / sqrt(C2 - tau0^2)` admit no solution.
pub fn closed_tube_kappa(
    length: f64,
    windings: u32,
    c2: f64,
    tau0: f64,
) -> Result<Modulus, GeometryError> {
    let gap = c2 - tau0 * tau0;
    if !(gap > 0.0) {
        return Err(GeometryError::NonPositiveTensionGap(gap));
    }
    if !(length > 0.0) {
        return Err(GeometryError::NonPositiveLength(length));
    }
    if windings == 0 {
        return Err(GeometryError::ZeroWindings);
    }

    let target = length * gap.sqrt();
    let m = f64::from(windings);
    let condition = |kappa: f64| -> f64 {
        let modulus = Modulus::new(kappa).expect("kappa in [0, 1)");
        let big_k = complete_k(modulus).expect("kappa < 1");
        2.0 * m * big_k * (2.0 - kappa * kappa).sqrt() - target
    };

    let at_zero = condition(0.0); // = m pi sqrt(2) - target
    if at_zero.abs() <= 1e-12 {
        return Ok(Modulus::new(0.0).unwrap());
    }
    if at_zero > 0.0 {
        let min_length = m * std::f64::consts::PI * 2.0_f64.sqrt() / gap.sqrt();
        return Err(GeometryError::TubeTooShort {
            length,
            windings,
            min_length,
        });
    }
    if condition(KAPPA_MAX) < 0.0 {
        return Err(GeometryError::ModulusSaturated);
    }

    let mut lo = 0.0_f64;
    let mut hi = KAPPA_MAX;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let f_mid = condition(mid);
        if f_mid == 0.0 {
            return Ok(Modulus::new(mid).unwrap());
        }
        if f_mid < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let root = if condition(lo).abs() <= condition(hi).abs() {
        lo
    } else {
        hi
    };
    Ok(Modulus::new(root).unwrap())
}

/// Residual of the closed-tube condition at a candidate modulus, in the
/// monotone form `2 m K(kappa) sqrt(2 - kappa^2) - L sqrt(C2 - tau0^2)`.
pub fn closed_tube_residual(kappa: Modulus, length: f64, windings: u32, c2: f64, tau0: f64) -> f64 {
    let gap = c2 - tau0 * tau0;
    let big_k = complete_k(kappa).expect("kappa < 1");
    let k = kappa.value();
    2.0 * f64::from(windings) * big_k * (2.0 - k * k).sqrt() - length * gap.sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GeometryFormat {
    Csv,
    Ply,
}

/// Serialize a conformation.
///
/// CSV: header `s,x,y,z,k,tau`, one row per sample, every value printed
/// with 17 significant digits so doubles round-trip exactly.
///
/// PLY: binary little-endian. With `tube_radius > 0` the centerline is
/// swept by a circle of that radius in the `(n, b)` plane, giving
/// `samples * ring_resolution` vertices and a triangulated open tube; with
/// `tube_radius = 0` only the centerline vertices are written (no faces).
pub fn export_geometry(
    conf: &Conformation,
    format: GeometryFormat,
    tube_radius: f64,
    ring_resolution: usize,
) -> Result<Vec<u8>, GeometryError> {
    if conf.samples().is_empty() {
        return Err(GeometryError::EmptyConformation);
    }
    if tube_radius < 0.0 {
        return Err(GeometryError::NegativeTubeRadius(tube_radius));
    }
    match format {
        GeometryFormat::Csv => Ok(export_csv(conf)),
        GeometryFormat::Ply => {
            if tube_radius > 0.0 && ring_resolution < 3 {
                return Err(GeometryError::RingResolutionTooSmall(ring_resolution));
            }
            Ok(export_ply(conf, tube_radius, ring_resolution))
        }
    }
}

fn export_csv(conf: &Conformation) -> Vec<u8> {
    let mut out = Vec::with_capacity(conf.samples().len() * 140 + 16);
    out.extend_from_slice(b"s,x,y,z,k,tau\n");
    let tau = conf.profile().tau0();
    for f in conf.samples() {
        let k = conf.profile().evaluate(f.s, conf.snapshot_time()).k;
        let _ = writeln!(
            out,
            "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}",
            f.s, f.position.x, f.position.y, f.position.z, k, tau
        );
    }
    out
}

fn export_ply(conf: &Conformation, tube_radius: f64, ring_resolution: usize) -> Vec<u8> {
    let samples = conf.samples();
    let centerline_only = tube_radius == 0.0;
    let ring = if centerline_only { 1 } else { ring_resolution };
    let n_vertices = samples.len() * ring;
    let n_faces = if centerline_only {
        0
    } else {
        (samples.len() - 1) * ring * 2
    };

    let mut out = Vec::with_capacity(128 + n_vertices * 24 + n_faces * 13);
    let _ = write!(
        out,
        "ply\nformat binary_little_endian 1.0\n\
         element vertex {n_vertices}\n\
         property double x\nproperty double y\nproperty double z\n\
         element face {n_faces}\n\
         property list uchar int vertex_indices\n\
         end_header\n"
    );

    let mut push_vertex = |p: Vector3<f64>| {
        out.extend_from_slice(&p.x.to_le_bytes());
        out.extend_from_slice(&p.y.to_le_bytes());
        out.extend_from_slice(&p.z.to_le_bytes());
    };
    if centerline_only {
        for f in samples {
            push_vertex(f.position);
        }
        return out;
    }
    for f in samples {
        for j in 0..ring {
            let theta = 2.0 * std::f64::consts::PI * j as f64 / ring as f64;
            let offset = tube_radius * (theta.cos() * f.normal + theta.sin() * f.binormal);
            push_vertex(f.position + offset);
        }
    }
    for i in 0..samples.len() - 1 {
        for j in 0..ring {
            let jn = (j + 1) % ring;
            let a = (i * ring + j) as i32;
            let b = (i * ring + jn) as i32;
            let c = ((i + 1) * ring + jn) as i32;
            let d = ((i + 1) * ring + j) as i32;
            for tri in [[a, b, c], [a, c, d]] {
                out.push(3u8);
                for idx in tri {
                    out.extend_from_slice(&idx.to_le_bytes());
                }
            }
        }
    }
    out
}
