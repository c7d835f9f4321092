//! Elastic material law for a thin tube with intrinsic twist, the two
//! constant-angle solution cases of the static balance equations, the
//! torsion/twist relations, and the exact curvature profiles.
//!
//! Dimensionless units throughout. The scalar curvature `k(s)` of every
//! profile solves
//!
//! ```text
//! k_ss + k^3 / 2 = (C2 - tau0^2) k
//! ```
//!
//! where `C2` is the scaled straight-rod tension and `tau0` the constant
//! torsion. The single combination `C2 - tau0^2` (the "tension gap") fixes
//! the amplitude and length scale of every solution.

use thiserror::Error;

use crate::elliptic::{self, EllipticError, Modulus};

/// Absolute tolerance for the profile-vs-material torsion consistency gate
/// in [`force_field`]. All quantities are O(1) dimensionless.
pub const TORSION_CONSISTENCY_TOL: f64 = 1e-12;

/// Torsion denominators closer to zero than this count as degenerate
/// material (the zero-twist loci, where the formulas pin sigma instead).
const DEGENERATE_DENOMINATOR_TOL: f64 = 1e-12;

#[derive(Debug, Error, PartialEq)]
pub enum RodError {
    #[error("bending ratio a must satisfy 0 < a <= 1, got {0}")]
    BendingRatioOutOfRange(f64),
    #[error("Poisson ratio must lie in [-1, 1/2], got {0}")]
    PoissonRatioOutOfRange(f64),
    #[error("intrinsic twist must be finite, got {0}")]
    NonFiniteTwist(f64),
    #[error("parity j must be 0 or 1, got {0}")]
    ParityOutOfRange(u8),
    #[error("twisting rigidity b diverges at sigma = -1")]
    TwistingRigidityUndefined,
    #[error(
        "degenerate material for case {case:?}: torsion denominator {denominator:e} vanishes \
         (zero-twist locus at sigma = {zero_twist_sigma})"
    )]
    DegenerateMaterial {
        case: CaseId,
        denominator: f64,
        zero_twist_sigma: f64,
    },
    #[error("torsion is zero; the ratio -k3_0/tau0 is undefined")]
    ZeroTorsion,
    #[error("profile requires C2 - tau0^2 > 0, got {0}")]
    NonPositiveTensionGap(f64),
    #[error("circular ring requires C2 > 0, got {0}")]
    NonPositiveRingTension(f64),
    #[error(
        "profile torsion {profile} and material torsion {material} differ by more than {TORSION_CONSISTENCY_TOL:e}"
    )]
    TorsionMismatch { profile: f64, material: f64 },
    #[error(transparent)]
    Elliptic(#[from] EllipticError),
}

/// Elastic constants of the tube cross-section.
///
/// `a = I1/I2` is the bending rigidity ratio (sections oriented so that
/// `I1 <= I2`, hence `0 < a <= 1`; `a = 1` for a circular section),
/// `sigma` the Poisson ratio (thermodynamically `-1 <= sigma <= 1/2`), and
/// `k3_0` the intrinsic twist rate of the relaxed straight tube.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RodMaterial {
    a: f64,
    sigma: f64,
    k3_0: f64,
}

impl RodMaterial {
    pub fn new(a: f64, sigma: f64, k3_0: f64) -> Result<Self, RodError> {
        if !(a > 0.0 && a <= 1.0) {
            return Err(RodError::BendingRatioOutOfRange(a));
        }
        if !(-1.0..=0.5).contains(&sigma) {
            return Err(RodError::PoissonRatioOutOfRange(sigma));
        }
        if !k3_0.is_finite() {
            return Err(RodError::NonFiniteTwist(k3_0));
        }
        Ok(Self { a, sigma, k3_0 })
    }

    pub fn bending_ratio(&self) -> f64 {
        self.a
    }

    pub fn poisson_ratio(&self) -> f64 {
        self.sigma
    }

    pub fn intrinsic_twist(&self) -> f64 {
        self.k3_0
    }
}

/// Twisting rigidity `b = 2a / [(1 + sigma)(1 + a)]`.
pub fn twisting_rigidity(mat: &RodMaterial) -> Result<f64, RodError> {
    if mat.sigma == -1.0 {
        return Err(RodError::TwistingRigidityUndefined);
    }
    Ok(2.0 * mat.a / ((1.0 + mat.sigma) * (1.0 + mat.a)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CaseId {
    /// Material frame angle `phi = j pi`: curvature lies along `d2`
    /// (`k1 = 0`, `k2 = (-1)^j k`).
    I,
    /// Material frame angle `phi = (j + 1/2) pi`: curvature lies along `d1`
    /// (`k1 = (-1)^j k`, `k2 = 0`).
    II,
}

/// One of the two constant-angle solution branches, with its parity.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SolutionCase {
    case_id: CaseId,
    j: u8,
}

impl SolutionCase {
    pub fn new(case_id: CaseId, j: u8) -> Result<Self, RodError> {
        if j > 1 {
            return Err(RodError::ParityOutOfRange(j));
        }
        Ok(Self { case_id, j })
    }

    pub fn case_id(&self) -> CaseId {
        self.case_id
    }

    pub fn parity(&self) -> u8 {
        self.j
    }

    /// `(-1)^j`.
    pub fn parity_sign(&self) -> f64 {
        if self.j == 0 {
            1.0
        } else {
            -1.0
        }
    }

    /// Constant angle between the material director `d1` and the normal.
    pub fn frame_angle(&self) -> f64 {
        let j = f64::from(self.j);
        match self.case_id {
            CaseId::I => j * std::f64::consts::PI,
            CaseId::II => (j + 0.5) * std::f64::consts::PI,
        }
    }

    /// Curvature-vector components `(k1, k2, k3)` in the material frame,
    /// given the scalar curvature `k` and the torsion.
    pub fn frame_curvatures(&self, k: f64, tau0: f64) -> (f64, f64, f64) {
        let sign = self.parity_sign();
        match self.case_id {
            CaseId::I => (0.0, sign * k, tau0),
            CaseId::II => (sign * k, 0.0, tau0),
        }
    }

    fn torsion_denominator(&self, mat: &RodMaterial) -> f64 {
        match self.case_id {
            CaseId::I => mat.a + mat.sigma * (mat.a + 1.0),
            CaseId::II => 1.0 + mat.sigma * (mat.a + 1.0),
        }
    }
}

/// Torsion selected by the intrinsic twist.
///
/// Case I: `tau0 = -k3_0 / [a + sigma (a + 1)]`;
/// Case II: `tau0 = -a k3_0 / [1 + sigma (a + 1)]`.
///
/// For `sigma > 0` the torsion and the intrinsic twist carry opposite
/// signs in both cases. A vanishing denominator means the material sits on
/// its zero-twist locus, where the torsion is no longer selected by `k3_0`;
/// that is reported as [`RodError::DegenerateMaterial`].
pub fn torsion_from_twist(mat: &RodMaterial, case: SolutionCase) -> Result<f64, RodError> {
    let denominator = case.torsion_denominator(mat);
    if denominator.abs() < DEGENERATE_DENOMINATOR_TOL {
        return Err(RodError::DegenerateMaterial {
            case: case.case_id,
            denominator,
            zero_twist_sigma: zero_twist_sigma(mat.a, case),
        });
    }
    Ok(match case.case_id {
        CaseId::I => -mat.k3_0 / denominator,
        CaseId::II => -mat.a * mat.k3_0 / denominator,
    })
}

/// The Poisson ratio forced by a twist-free tube (`k3_0 = 0`) that still
/// carries nonzero torsion.
///
/// Case I requires `b = 2a`, i.e. `sigma = -a/(1+a)`, which sweeps
/// `[-1/2, 0)` as `a` runs over `(0, 1]`; Case II requires `b = 2`, i.e.
/// `sigma = -1/(1+a)`, sweeping `(-1, -1/2]`. Both loci are negative for
/// every admissible `a`, and they are exactly where
/// [`torsion_from_twist`] reports a degenerate material.
pub fn zero_twist_sigma(a: f64, case: SolutionCase) -> f64 {
    debug_assert!(a > 0.0 && a <= 1.0, "bending ratio out of range: {a}");
    match case.case_id {
        CaseId::I => -a / (1.0 + a),
        CaseId::II => -1.0 / (1.0 + a),
    }
}

/// Whether `sigma < -k3_0/tau0 <= 2 sigma + 1`.
///
/// Every `(material, torsion)` pair produced by the Case I torsion formula
/// satisfies this for `0 < a <= 1`; the Case II formula instead gives
/// `-k3_0/tau0 >= 2 sigma + 1` (equality at `a = 1`, where the two cases
/// coincide).
pub fn check_sigma_inequality(mat: &RodMaterial, tau0: f64) -> Result<bool, RodError> {
    if tau0 == 0.0 {
        return Err(RodError::ZeroTorsion);
    }
    let ratio = -mat.k3_0 / tau0;
    Ok(mat.sigma < ratio && ratio <= 2.0 * mat.sigma + 1.0)
}

/// An exact solution of the curvature equation, together with the constant
/// torsion and an optional traveling-wave speed (`v = 0` for statics; a
/// nonzero `v` only shifts the argument to `s - v t`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CurvatureProfile {
    /// `k = 2 alpha dn(alpha (s - vt), kappa)` with
    /// `alpha = sqrt((C2 - tau0^2)/(2 - kappa^2))`; spatially periodic with
    /// period `2 K(kappa)/alpha` for `kappa < 1`.
    ConformonLattice {
        kappa: Modulus,
        c2: f64,
        tau0: f64,
        v: f64,
    },
    /// `k = 2 beta sech(beta (s - vt))` with `beta = sqrt(C2 - tau0^2)`;
    /// the `kappa = 1` limit of the lattice, a single localized loop.
    Solitary { c2: f64, tau0: f64, v: f64 },
    /// Constant curvature `k = sqrt(2 C2)` with zero torsion: a planar
    /// circle of radius `1/k`.
    CircularRing { c2: f64, v: f64 },
}

/// `k` and its first two arclength derivatives at a point.
#[derive(Debug, Clone, Copy)]
pub struct CurvatureSample {
    pub k: f64,
    pub k_s: f64,
    pub k_ss: f64,
}

impl CurvatureProfile {
    pub fn conformon_lattice(
        kappa: Modulus,
        c2: f64,
        tau0: f64,
        v: f64,
    ) -> Result<Self, RodError> {
        let gap = c2 - tau0 * tau0;
        if !(gap > 0.0) {
            return Err(RodError::NonPositiveTensionGap(gap));
        }
        Ok(Self::ConformonLattice { kappa, c2, tau0, v })
    }

    pub fn solitary(c2: f64, tau0: f64, v: f64) -> Result<Self, RodError> {
        let gap = c2 - tau0 * tau0;
        if !(gap > 0.0) {
            return Err(RodError::NonPositiveTensionGap(gap));
        }
        Ok(Self::Solitary { c2, tau0, v })
    }

    pub fn circular_ring(c2: f64, v: f64) -> Result<Self, RodError> {
        if !(c2 > 0.0) {
            return Err(RodError::NonPositiveRingTension(c2));
        }
        Ok(Self::CircularRing { c2, v })
    }

    pub fn c2(&self) -> f64 {
        match *self {
            Self::ConformonLattice { c2, .. }
            | Self::Solitary { c2, .. }
            | Self::CircularRing { c2, .. } => c2,
        }
    }

    pub fn tau0(&self) -> f64 {
        match *self {
            Self::ConformonLattice { tau0, .. } | Self::Solitary { tau0, .. } => tau0,
            Self::CircularRing { .. } => 0.0,
        }
    }

    pub fn wave_speed(&self) -> f64 {
        match *self {
            Self::ConformonLattice { v, .. }
            | Self::Solitary { v, .. }
            | Self::CircularRing { v, .. } => v,
        }
    }

    pub fn kappa(&self) -> Option<Modulus> {
        match *self {
            Self::ConformonLattice { kappa, .. } => Some(kappa),
            _ => None,
        }
    }

    /// `C2 - tau0^2`, the parameter controlling the whole solution family.
    pub fn tension_gap(&self) -> f64 {
        self.c2() - self.tau0() * self.tau0()
    }

    /// Inverse length scale of the profile: `alpha` for the lattice,
    /// `beta` for the solitary loop, the curvature itself for the ring.
    pub fn scale(&self) -> f64 {
        match *self {
            Self::ConformonLattice { kappa, .. } => {
                (self.tension_gap() / (2.0 - kappa.value() * kappa.value())).sqrt()
            }
            Self::Solitary { .. } => self.tension_gap().sqrt(),
            Self::CircularRing { c2, .. } => (2.0 * c2).sqrt(),
        }
    }

    /// Spatial period of the curvature, when finite: `2 K(kappa)/alpha` for
    /// the lattice with `kappa < 1`.
    pub fn curvature_period(&self) -> Option<f64> {
        match *self {
            Self::ConformonLattice { kappa, .. } if !kappa.is_unit() => {
                let big_k = elliptic::complete_k(kappa).expect("kappa < 1");
                Some(2.0 * big_k / self.scale())
            }
            _ => None,
        }
    }

    /// Curvature and its analytic first and second arclength derivatives at
    /// arclength `s` and time `t` (the profile argument is `s - v t`).
    pub fn evaluate(&self, s: f64, t: f64) -> CurvatureSample {
        let xi = s - self.wave_speed() * t;
        match *self {
            Self::ConformonLattice { kappa, .. } => {
                let alpha = self.scale();
                let kap2 = kappa.value() * kappa.value();
                let (sn, cn, dn) = elliptic::jacobi_sn_cn_dn(alpha * xi, kappa);
                CurvatureSample {
                    k: 2.0 * alpha * dn,
                    k_s: -2.0 * alpha * alpha * kap2 * sn * cn,
                    k_ss: 2.0 * alpha.powi(3) * ((2.0 - kap2) * dn - 2.0 * dn.powi(3)),
                }
            }
            Self::Solitary { .. } => {
                let beta = self.scale();
                let sech = 1.0 / (beta * xi).cosh();
                let tanh = (beta * xi).tanh();
                CurvatureSample {
                    k: 2.0 * beta * sech,
                    k_s: -2.0 * beta * beta * sech * tanh,
                    k_ss: 2.0 * beta.powi(3) * (sech - 2.0 * sech.powi(3)),
                }
            }
            Self::CircularRing { c2, .. } => CurvatureSample {
                k: (2.0 * c2).sqrt(),
                k_s: 0.0,
                k_ss: 0.0,
            },
        }
    }

    /// Residual of `k_ss + k^3/2 - (C2 - tau0^2) k` with analytic
    /// derivatives; below 1e-9 in magnitude for every valid profile.
    pub fn ode_residual(&self, s: f64) -> f64 {
        let CurvatureSample { k, k_ss, .. } = self.evaluate(s, 0.0);
        k_ss + 0.5 * k * k * k - self.tension_gap() * k
    }
}

/// Internal force components `(g1, g2, g3)` and torque components
/// `(m1, m2, m3) = (k1, a k2, b (k3 - k3_0))` along the material frame.
#[derive(Debug, Clone, Copy)]
pub struct ForceField {
    pub g1: f64,
    pub g2: f64,
    pub g3: f64,
    pub m1: f64,
    pub m2: f64,
    pub m3: f64,
}

/// Internal force and torque of the static solution at arclength `s`.
///
/// Case I: `g = (-1)^j a (tau0 k d2 - k_s d1) + (a C2 - a k^2/2) d3`;
/// Case II: `g = (-1)^j (tau0 k d1 + k_s d2) + (C2 - k^2/2) d3`.
/// The straight-rod tension is `C = a C2` in Case I and `C = C2` in
/// Case II.
///
/// The profile torsion must match [`torsion_from_twist`] within
/// [`TORSION_CONSISTENCY_TOL`]; otherwise the profile does not solve the
/// static equations for this material and an error is returned. Use
/// [`force_field_unchecked`] to evaluate the case formulas regardless.
pub fn force_field(
    mat: &RodMaterial,
    case: SolutionCase,
    profile: &CurvatureProfile,
    s: f64,
) -> Result<ForceField, RodError> {
    let material_tau = torsion_from_twist(mat, case)?;
    let profile_tau = profile.tau0();
    if (material_tau - profile_tau).abs() > TORSION_CONSISTENCY_TOL {
        return Err(RodError::TorsionMismatch {
            profile: profile_tau,
            material: material_tau,
        });
    }
    force_field_unchecked(mat, case, profile, s)
}

/// Same formulas as [`force_field`] but trusting the profile's own torsion:
/// with an inconsistent torsion the result no longer satisfies the torque
/// balance, which is exactly what residual scans on perturbed inputs need.
pub fn force_field_unchecked(
    mat: &RodMaterial,
    case: SolutionCase,
    profile: &CurvatureProfile,
    s: f64,
) -> Result<ForceField, RodError> {
    let b = twisting_rigidity(mat)?;
    let CurvatureSample { k, k_s, .. } = profile.evaluate(s, 0.0);
    let tau0 = profile.tau0();
    let sign = case.parity_sign();
    let (g1, g2, g3) = match case.case_id() {
        CaseId::I => (
            -sign * mat.a * k_s,
            sign * mat.a * tau0 * k,
            mat.a * profile.c2() - 0.5 * mat.a * k * k,
        ),
        CaseId::II => (
            sign * tau0 * k,
            sign * k_s,
            profile.c2() - 0.5 * k * k,
        ),
    };
    let (k1, k2, k3) = case.frame_curvatures(k, tau0);
    Ok(ForceField {
        g1,
        g2,
        g3,
        m1: k1,
        m2: mat.a * k2,
        m3: b * (k3 - mat.k3_0),
    })
}

/// Residuals of the six static balance equations at arclength `s`:
///
/// ```text
/// r1 = g1_s + k2 g3 - k3 g2
/// r2 = g2_s + k3 g1 - k1 g3
/// r3 = g3_s + k1 g2 - k2 g1
/// r4 = g2 - [k1_s + (b - a) k2 k3 - b k3_0 k2]
/// r5 = g1 - [-a k2_s + (b - 1) k1 k3 - b k3_0 k1]
/// r6 = b k3_s + (a - 1) k1 k2
/// ```
///
/// All arclength derivatives are Richardson-extrapolated central
/// differences of the analytic component functions, so the residuals are an
/// independent check that the force formulas actually close the system.
/// Exact solutions stay below 1e-8 at `fd_step = 1e-5`.
pub fn kirchhoff_static_residuals(
    mat: &RodMaterial,
    case: SolutionCase,
    profile: &CurvatureProfile,
    s: f64,
    fd_step: f64,
) -> Result<[f64; 6], RodError> {
    let b = twisting_rigidity(mat)?;
    let g = |s: f64| -> (f64, f64, f64) {
        let f = force_field_unchecked(mat, case, profile, s).expect("rigidity checked above");
        (f.g1, f.g2, f.g3)
    };
    let kc = |s: f64| -> (f64, f64, f64) {
        let k = profile.evaluate(s, 0.0).k;
        case.frame_curvatures(k, profile.tau0())
    };

    let (g1, g2, g3) = g(s);
    let (k1, k2, k3) = kc(s);
    let g1_s = richardson_derivative(|x| g(x).0, s, fd_step);
    let g2_s = richardson_derivative(|x| g(x).1, s, fd_step);
    let g3_s = richardson_derivative(|x| g(x).2, s, fd_step);
    let k1_s = richardson_derivative(|x| kc(x).0, s, fd_step);
    let k2_s = richardson_derivative(|x| kc(x).1, s, fd_step);
    let k3_s = richardson_derivative(|x| kc(x).2, s, fd_step);

    Ok([
        g1_s + k2 * g3 - k3 * g2,
        g2_s + k3 * g1 - k1 * g3,
        g3_s + k1 * g2 - k2 * g1,
        g2 - (k1_s + (b - mat.a) * k2 * k3 - b * mat.k3_0 * k2),
        g1 - (-mat.a * k2_s + (b - 1.0) * k1 * k3 - b * mat.k3_0 * k1),
        b * k3_s + (mat.a - 1.0) * k1 * k2,
    ])
}

/// Fourth-order central difference: Richardson extrapolation of the
/// three-point stencil at steps `h` and `h/2`.
pub fn richardson_derivative<F: Fn(f64) -> f64>(f: F, s: f64, h: f64) -> f64 {
    let central = |h: f64| (f(s + h) - f(s - h)) / (2.0 * h);
    (4.0 * central(0.5 * h) - central(h)) / 3.0
}

#[cfg(test)]
mod tests {
    use super::*;

    fn modulus(k: f64) -> Modulus {
        Modulus::new(k).unwrap()
    }

    fn case(id: CaseId, j: u8) -> SolutionCase {
        SolutionCase::new(id, j).unwrap()
    }

    #[test]
    fn material_validation() {
        assert!(RodMaterial::new(1.0, 0.0, 0.0).is_ok());
        assert!(RodMaterial::new(1.0, 0.5, 3.0).is_ok());
        assert!(RodMaterial::new(1.0, -1.0, 0.0).is_ok());
        assert_eq!(
            RodMaterial::new(0.0, 0.0, 0.0),
            Err(RodError::BendingRatioOutOfRange(0.0))
        );
        assert_eq!(
            RodMaterial::new(1.5, 0.0, 0.0),
            Err(RodError::BendingRatioOutOfRange(1.5))
        );
        assert_eq!(
            RodMaterial::new(0.5, 0.6, 0.0),
            Err(RodError::PoissonRatioOutOfRange(0.6))
        );
        assert!(RodMaterial::new(0.5, f64::NAN, 0.0).is_err());
    }

    #[test]
    fn twisting_rigidity_values() {
        let b = |a, s| twisting_rigidity(&RodMaterial::new(a, s, 0.0).unwrap()).unwrap();
        assert!((b(1.0, 0.0) - 1.0).abs() < 1e-15);
        assert!((b(1.0, 0.5) - 2.0 / 3.0).abs() < 1e-15);
        assert!((b(0.5, 0.25) - 2.0 * 0.5 / (1.25 * 1.5)).abs() < 1e-15);
        assert_eq!(
            twisting_rigidity(&RodMaterial::new(0.5, -1.0, 0.0).unwrap()),
            Err(RodError::TwistingRigidityUndefined)
        );
    }

    #[test]
    fn torsion_case_i() {
        let mat = RodMaterial::new(1.0, 0.5, 10.0).unwrap();
        let tau0 = torsion_from_twist(&mat, case(CaseId::I, 0)).unwrap();
        assert!((tau0 - (-5.0)).abs() < 1e-14);
    }

    #[test]
    fn torsion_case_ii() {
        let mat = RodMaterial::new(1.0, 0.0, 1.0).unwrap();
        let tau0 = torsion_from_twist(&mat, case(CaseId::II, 0)).unwrap();
        assert!((tau0 - (-1.0)).abs() < 1e-15);
    }

    #[test]
    fn torsion_degenerate_material() {
        // a = 1, sigma = -1/2 sits on both zero-twist loci.
        let mat = RodMaterial::new(1.0, -0.5, 0.3).unwrap();
        for id in [CaseId::I, CaseId::II] {
            match torsion_from_twist(&mat, case(id, 0)) {
                Err(RodError::DegenerateMaterial { case: got, .. }) => assert_eq!(got, id),
                other => panic!("expected degenerate material, got {other:?}"),
            }
        }
    }

    #[test]
    fn torsion_independent_of_parity() {
        let mat = RodMaterial::new(0.7, 0.2, 1.3).unwrap();
        for id in [CaseId::I, CaseId::II] {
            let t0 = torsion_from_twist(&mat, case(id, 0)).unwrap();
            let t1 = torsion_from_twist(&mat, case(id, 1)).unwrap();
            assert_eq!(t0, t1);
        }
    }

    #[test]
    fn zero_twist_sigma_values() {
        assert!((zero_twist_sigma(1.0, case(CaseId::I, 0)) + 0.5).abs() < 1e-15);
        assert!((zero_twist_sigma(1.0, case(CaseId::II, 0)) + 0.5).abs() < 1e-15);
        // Case I locus sweeps [-1/2, 0) as a -> 0+, Case II sweeps (-1, -1/2].
        assert!(zero_twist_sigma(1e-9, case(CaseId::I, 0)).abs() < 1e-8);
        assert!((zero_twist_sigma(1e-9, case(CaseId::II, 0)) + 1.0).abs() < 1e-8);
        for i in 1..=20 {
            let a = i as f64 / 20.0;
            let s1 = zero_twist_sigma(a, case(CaseId::I, 0));
            let s2 = zero_twist_sigma(a, case(CaseId::II, 0));
            assert!((-0.5..0.0).contains(&s1) || s1 == -0.5);
            assert!((-1.0..=-0.5).contains(&s2));
        }
    }

    #[test]
    fn zero_twist_sigma_is_the_degeneracy_locus() {
        // torsion_from_twist must fail exactly on the sigma returned by
        // zero_twist_sigma, and succeed a little away from it.
        for i in 1..=10 {
            let a = i as f64 / 10.0;
            for id in [CaseId::I, CaseId::II] {
                let c = case(id, 0);
                let sigma = zero_twist_sigma(a, c);
                let mat = RodMaterial::new(a, sigma, 0.7).unwrap();
                assert!(
                    matches!(
                        torsion_from_twist(&mat, c),
                        Err(RodError::DegenerateMaterial { .. })
                    ),
                    "expected degeneracy at a={a}, sigma={sigma}, case {id:?}"
                );
                let nearby = RodMaterial::new(a, sigma + 1e-6, 0.7).unwrap();
                assert!(torsion_from_twist(&nearby, c).is_ok());
            }
        }
    }

    #[test]
    fn torsion_twist_sign_opposition() {
        for i in 0..200 {
            let a = 0.05 + 0.95 * (i % 20) as f64 / 19.0;
            let sigma = 0.025 + 0.475 * (i / 20) as f64 / 9.0; // sigma > 0
            let k3_0 = if i % 2 == 0 { 0.8 } else { -1.7 };
            let mat = RodMaterial::new(a, sigma, k3_0).unwrap();
            for id in [CaseId::I, CaseId::II] {
                let tau0 = torsion_from_twist(&mat, case(id, 0)).unwrap();
                assert!(
                    tau0 * k3_0 < 0.0,
                    "sign opposition violated: a={a}, sigma={sigma}, k3_0={k3_0}, tau0={tau0}"
                );
            }
        }
    }

    #[test]
    fn sigma_inequality_examples() {
        // Consistent Case I pair: -k3_0/tau0 = a + sigma(a+1) = 0.875.
        let mat = RodMaterial::new(0.5, 0.25, 1.0).unwrap();
        let tau0 = torsion_from_twist(&mat, case(CaseId::I, 0)).unwrap();
        assert!((-1.0 / tau0 - 0.875).abs() < 1e-14);
        assert!(check_sigma_inequality(&mat, tau0).unwrap());

        // Ratio above the upper bound 2 sigma + 1 = 2.
        let mat = RodMaterial::new(1.0, 0.5, 1.0).unwrap();
        assert!(!check_sigma_inequality(&mat, -1.0 / 2.5).unwrap());

        assert_eq!(
            check_sigma_inequality(&mat, 0.0),
            Err(RodError::ZeroTorsion)
        );
    }

    #[test]
    fn sigma_inequality_case_ii_is_complementary() {
        // Case II pairs satisfy -k3_0/tau0 >= 2 sigma + 1 instead, with
        // equality only at a = 1.
        let mat = RodMaterial::new(0.5, 0.25, 1.0).unwrap();
        let tau0 = torsion_from_twist(&mat, case(CaseId::II, 0)).unwrap();
        let ratio = -mat.intrinsic_twist() / tau0;
        assert!(ratio >= 2.0 * mat.poisson_ratio() + 1.0);
        assert!(!check_sigma_inequality(&mat, tau0).unwrap());

        let mat = RodMaterial::new(1.0, 0.25, 1.0).unwrap();
        let tau0 = torsion_from_twist(&mat, case(CaseId::II, 0)).unwrap();
        let ratio = -mat.intrinsic_twist() / tau0;
        assert!((ratio - (2.0 * mat.poisson_ratio() + 1.0)).abs() < 1e-14);
    }

    #[test]
    fn profile_validation() {
        assert!(CurvatureProfile::conformon_lattice(modulus(0.5), 1.25, 0.5, 0.0).is_ok());
        assert_eq!(
            CurvatureProfile::conformon_lattice(modulus(0.5), 0.25, 0.5, 0.0),
            Err(RodError::NonPositiveTensionGap(0.0))
        );
        assert_eq!(
            CurvatureProfile::solitary(0.1, 0.5, 0.0),
            Err(RodError::NonPositiveTensionGap(0.1 - 0.25))
        );
        assert_eq!(
            CurvatureProfile::circular_ring(0.0, 0.0),
            Err(RodError::NonPositiveRingTension(0.0))
        );
    }

    #[test]
    fn curvature_peak_and_constant_cases() {
        // kappa = 1, gap = 1: sech peak of height 2 at s = 0.
        let p = CurvatureProfile::conformon_lattice(modulus(1.0), 1.0, 0.0, 0.0).unwrap();
        assert!((p.evaluate(0.0, 0.0).k - 2.0).abs() < 1e-15);

        // kappa = 0, gap = 1: constant k = sqrt(2).
        let p = CurvatureProfile::conformon_lattice(modulus(0.0), 1.25, 0.5, 0.0).unwrap();
        for s in [-4.0, 0.0, 13.7] {
            assert!((p.evaluate(s, 0.0).k - 2.0_f64.sqrt()).abs() < 1e-15);
        }

        // Solitary, gap = 1: k(3) = 2 sech(3).
        let p = CurvatureProfile::solitary(1.0, 0.0, 0.0).unwrap();
        let expected = 0.19865585483886642; // 2 sech(3), mpmath
        assert!((p.evaluate(3.0, 0.0).k - expected).abs() < 1e-15);
    }

    #[test]
    fn lattice_at_unit_modulus_matches_solitary() {
        let lattice = CurvatureProfile::conformon_lattice(modulus(1.0), 1.25, 0.5, 0.0).unwrap();
        let solitary = CurvatureProfile::solitary(1.25, 0.5, 0.0).unwrap();
        for i in 0..=100 {
            let s = -5.0 + 0.1 * i as f64;
            let (a, b) = (lattice.evaluate(s, 0.0), solitary.evaluate(s, 0.0));
            assert!((a.k - b.k).abs() < 1e-14);
            assert!((a.k_s - b.k_s).abs() < 1e-14);
            assert!((a.k_ss - b.k_ss).abs() < 1e-14);
        }
    }

    #[test]
    fn lattice_near_unit_modulus_approaches_solitary() {
        let lattice = CurvatureProfile::conformon_lattice(
            modulus(1.0 - 1e-10),
            1.25,
            0.5,
            0.0,
        )
        .unwrap();
        let solitary = CurvatureProfile::solitary(1.25, 0.5, 0.0).unwrap();
        for i in 0..=100 {
            let s = -5.0 + 0.1 * i as f64;
            let diff = (lattice.evaluate(s, 0.0).k - solitary.evaluate(s, 0.0).k).abs();
            assert!(diff < 1e-6, "kappa -> 1 limit broken at s = {s}: {diff}");
        }
    }

    #[test]
    fn traveling_wave_shifts_argument() {
        let p = CurvatureProfile::conformon_lattice(modulus(0.75), 1.25, 0.5, 2.0).unwrap();
        let static_p = CurvatureProfile::conformon_lattice(modulus(0.75), 1.25, 0.5, 0.0).unwrap();
        let (s, t) = (1.3, 0.7);
        assert_eq!(p.evaluate(s, t).k, static_p.evaluate(s - 2.0 * t, 0.0).k);
    }

    #[test]
    fn ode_residual_analytic() {
        let profiles = [
            CurvatureProfile::conformon_lattice(modulus(0.75), 1.25, 0.5, 0.0).unwrap(),
            CurvatureProfile::solitary(1.25, 0.5, 0.0).unwrap(),
            CurvatureProfile::circular_ring(2.0, 0.0).unwrap(),
        ];
        for p in &profiles {
            for i in 0..=200 {
                let s = -8.0 + 0.08 * i as f64;
                let r = p.ode_residual(s);
                assert!(r.abs() < 1e-9, "ODE residual {r} at s = {s} for {p:?}");
            }
        }
    }

    #[test]
    fn ode_residual_finite_difference_cross_check() {
        let p = CurvatureProfile::conformon_lattice(modulus(0.75), 1.25, 0.5, 0.0).unwrap();
        let h = 1e-4;
        let period = p.curvature_period().unwrap();
        for i in 0..=100 {
            let s = 2.0 * period * i as f64 / 100.0;
            let k = |s: f64| p.evaluate(s, 0.0).k;
            let k_ss_fd = (k(s + h) - 2.0 * k(s) + k(s - h)) / (h * h);
            let res = k_ss_fd + 0.5 * k(s).powi(3) - p.tension_gap() * k(s);
            assert!(res.abs() < 1e-6, "FD residual {res} at s = {s}");
        }
    }

    #[test]
    fn force_field_consistency_gate() {
        let mat = RodMaterial::new(1.0, 0.0, -0.5).unwrap();
        let c = case(CaseId::I, 0);
        // torsion_from_twist gives tau0 = 0.5 here
        let good = CurvatureProfile::conformon_lattice(modulus(0.5), 1.25, 0.5, 0.0).unwrap();
        assert!(force_field(&mat, c, &good, 0.3).is_ok());
        let bad = CurvatureProfile::conformon_lattice(modulus(0.5), 1.25, 0.55, 0.0).unwrap();
        assert!(matches!(
            force_field(&mat, c, &bad, 0.3),
            Err(RodError::TorsionMismatch { .. })
        ));
    }

    #[test]
    fn force_vanishing_transverse_component_at_extrema() {
        // g1 in Case I is proportional to k_s, which vanishes at the dn peak.
        let mat = RodMaterial::new(1.0, 0.0, -0.5).unwrap();
        let c = case(CaseId::I, 0);
        let p = CurvatureProfile::conformon_lattice(modulus(0.75), 1.25, 0.5, 0.0).unwrap();
        let f = force_field(&mat, c, &p, 0.0).unwrap();
        assert!(f.g1.abs() < 1e-14);
    }

    #[test]
    fn force_parity_flip() {
        let mat = RodMaterial::new(1.0, 0.0, -0.5).unwrap();
        let p = CurvatureProfile::conformon_lattice(modulus(0.75), 1.25, 0.5, 0.0).unwrap();
        let s = 0.8;
        let f0 = force_field(&mat, case(CaseId::I, 0), &p, s).unwrap();
        let f1 = force_field(&mat, case(CaseId::I, 1), &p, s).unwrap();
        assert!((f0.g1 + f1.g1).abs() < 1e-14);
        assert!((f0.g2 + f1.g2).abs() < 1e-14);
        assert_eq!(f0.g3, f1.g3);
    }

    #[test]
    fn tension_component_formula() {
        // g3 = a(C2 - k^2/2) in Case I and C2 - k^2/2 in Case II.
        let mat = RodMaterial::new(0.8, 0.1, 1.0).unwrap();
        let s = 0.37;
        for (id, scale) in [(CaseId::I, 0.8), (CaseId::II, 1.0)] {
            let c = case(id, 0);
            let tau0 = torsion_from_twist(&mat, c).unwrap();
            let p = CurvatureProfile::conformon_lattice(modulus(0.6), tau0 * tau0 + 1.0, tau0, 0.0)
                .unwrap();
            let f = force_field(&mat, c, &p, s).unwrap();
            let k = p.evaluate(s, 0.0).k;
            assert!((f.g3 - scale * (p.c2() - 0.5 * k * k)).abs() < 1e-14);
        }
    }

    #[test]
    fn static_equations_close_for_exact_solutions() {
        let mat = RodMaterial::new(0.65, 0.2, 1.1).unwrap();
        for id in [CaseId::I, CaseId::II] {
            for j in [0, 1] {
                let c = case(id, j);
                let tau0 = torsion_from_twist(&mat, c).unwrap();
                let p = CurvatureProfile::conformon_lattice(
                    modulus(0.8),
                    tau0 * tau0 + 0.9,
                    tau0,
                    0.0,
                )
                .unwrap();
                let period = p.curvature_period().unwrap();
                for i in 0..=60 {
                    let s = 2.0 * period * i as f64 / 60.0;
                    let res = kirchhoff_static_residuals(&mat, c, &p, s, 1e-5).unwrap();
                    for (eq, r) in res.iter().enumerate() {
                        assert!(
                            r.abs() < 1e-8,
                            "residual r{} = {r} at s = {s}, case {id:?}, j = {j}",
                            eq + 1
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn static_equations_detect_perturbed_torsion() {
        let mat = RodMaterial::new(1.0, 0.0, -0.5).unwrap();
        let c = case(CaseId::I, 0);
        let tau0 = torsion_from_twist(&mat, c).unwrap();
        let p = CurvatureProfile::conformon_lattice(
            modulus(0.75),
            1.1 * 1.1 * tau0 * tau0 + 1.0,
            1.1 * tau0,
            0.0,
        )
        .unwrap();
        let mut worst: f64 = 0.0;
        for i in 0..=50 {
            let s = 0.2 * i as f64;
            let res = kirchhoff_static_residuals(&mat, c, &p, s, 1e-5).unwrap();
            for r in res {
                worst = worst.max(r.abs());
            }
        }
        assert!(
            worst > 1e-3,
            "perturbed torsion should break the torque balance, worst = {worst}"
        );
    }
}
