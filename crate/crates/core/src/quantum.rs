//! The effective potential that a curved, twisted tube induces for an
//! electron confined to it, the exact delocalised eigenstate whose amplitude
//! is the curvature profile itself, and a finite-difference eigensolver used
//! to verify that state numerically.
//!
//! Everything except [`effective_potential_raw`] works in the rescaled
//! variables where `hbar = mu = 1` and the stationary problem reads
//! `-psi'' - V(s) psi = E psi` with `V(s) = -k(s)^2 / 2`; the constant
//! torsion offset has already been removed by a gauge transformation.

use nalgebra::DMatrix;
use num_complex::Complex64;
use thiserror::Error;

use crate::elliptic::complete_k;
use crate::rod::CurvatureProfile;

#[derive(Debug, Error, PartialEq)]
pub enum QuantumError {
    #[error("hbar and mu must be strictly positive, got hbar = {hbar}, mu = {mu}")]
    NonPositiveUnits { hbar: f64, mu: f64 },
    #[error("grid size {0} outside the supported dense-solver range [64, 4096]")]
    GridSizeOutOfRange(usize),
    #[error("potential needs at least 4 samples, got {0}")]
    PotentialTooSmall(usize),
    #[error("domain length must be positive, got {0}")]
    NonPositiveDomain(f64),
    #[error("profile has an infinite period (kappa = 1); use the truncated-domain solver")]
    InfinitePeriod,
    #[error("profile has a finite period; use the periodic band solver")]
    FinitePeriod,
}

/// Physical constants of the raw (unscaled) problem. The library's exact
/// results live in the rescaled variables, so these only enter
/// [`effective_potential_raw`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuantumUnits {
    hbar: f64,
    mu: f64,
}

impl QuantumUnits {
    pub fn new(hbar: f64, mu: f64) -> Result<Self, QuantumError> {
        if !(hbar > 0.0 && mu > 0.0) {
            return Err(QuantumError::NonPositiveUnits { hbar, mu });
        }
        Ok(Self { hbar, mu })
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }
}

impl Default for QuantumUnits {
    fn default() -> Self {
        Self { hbar: 1.0, mu: 1.0 }
    }
}

/// Geometry-induced potential in raw units:
/// `V_eff = (hbar^2 / 2 mu) (-k^2/4 + tau0^2/2)`.
pub fn effective_potential_raw(k: f64, tau0: f64, units: &QuantumUnits) -> f64 {
    units.hbar * units.hbar / (2.0 * units.mu) * (-0.25 * k * k + 0.5 * tau0 * tau0)
}

/// Rescaled potential `V(s) = -k(s)^2 / 2 <= 0`. For the lattice this is
/// `-2 (C2 - tau0^2)/(2 - kappa^2) dn^2(alpha s, kappa)`.
pub fn lattice_potential(profile: &CurvatureProfile, s: f64) -> f64 {
    match profile {
        CurvatureProfile::ConformonLattice { kappa, .. } => {
            let alpha = profile.scale();
            let dn = crate::elliptic::jacobi_dn(alpha * s, *kappa);
            -2.0 * alpha * alpha * dn * dn
        }
        CurvatureProfile::Solitary { .. } => {
            let beta = profile.scale();
            let sech = 1.0 / (beta * s).cosh();
            -2.0 * beta * beta * sech * sech
        }
        CurvatureProfile::CircularRing { c2, .. } => -c2,
    }
}

/// Deepest value of the rescaled potential,
/// `V_min = -(C2 - tau0^2) / (1 - kappa^2/2)` for the lattice.
pub fn potential_minimum(profile: &CurvatureProfile) -> f64 {
    match profile {
        CurvatureProfile::ConformonLattice { kappa, .. } => {
            let k = kappa.value();
            -profile.tension_gap() / (1.0 - 0.5 * k * k)
        }
        CurvatureProfile::Solitary { .. } => -2.0 * profile.tension_gap(),
        CurvatureProfile::CircularRing { c2, .. } => -c2,
    }
}

/// Energy of the exact stationary state: `E = -(C2 - tau0^2) < 0`,
/// independent of `kappa`. Satisfies `0 >= E >= V_min`, with equality on
/// the right exactly at `kappa = 0`.
pub fn exact_energy(profile: &CurvatureProfile) -> f64 {
    -profile.tension_gap()
}

/// The exact stationary wave function
/// `psi(s1, u) = k(s1) exp(i (C2 - tau0^2) u)`: its amplitude is the
/// curvature profile itself, so `|psi|^2 > 0` everywhere for `kappa < 1`.
pub fn exact_wavefunction(profile: &CurvatureProfile, s1: f64, u: f64) -> Complex64 {
    let amplitude = profile.evaluate(s1, 0.0).k;
    Complex64::from_polar(amplitude, profile.tension_gap() * u)
}

/// Residual of the stationary equation `k_s1s1 + k^3/2 + E k` with
/// `E` from [`exact_energy`] and analytic derivatives; below 1e-9 for every
/// valid profile (the stationary equation is the curvature equation read
/// backwards).
pub fn schrodinger_residual(profile: &CurvatureProfile, s1: f64) -> f64 {
    let sample = profile.evaluate(s1, 0.0);
    sample.k_ss + 0.5 * sample.k.powi(3) + exact_energy(profile) * sample.k
}

/// Contrast of the stationary probability density,
/// `min |psi|^2 / max |psi|^2 = 1 - kappa^2`: strictly positive for every
/// `kappa < 1` (delocalised state), zero at `kappa = 1` (localised loop),
/// one for the flat cases.
pub fn delocalization_ratio(profile: &CurvatureProfile) -> f64 {
    match profile {
        CurvatureProfile::ConformonLattice { kappa, .. } => {
            let k = kappa.value();
            1.0 - k * k
        }
        CurvatureProfile::Solitary { .. } => 0.0,
        CurvatureProfile::CircularRing { .. } => 1.0,
    }
}

/// Spectrum of a discretised one-dimensional Schrödinger operator.
#[derive(Debug, Clone)]
pub struct SpectralResult {
    /// Cell-centered grid points.
    pub grid: Vec<f64>,
    /// Potential samples on the grid.
    pub potential: Vec<f64>,
    /// Eigenvalues in ascending order.
    pub eigenvalues: Vec<f64>,
    /// `eigenvectors[i]` belongs to `eigenvalues[i]`, normalised so that
    /// `sum psi^2 * step = 1`.
    pub eigenvectors: Vec<Vec<f64>>,
    /// Grid spacing.
    pub step: f64,
}

impl SpectralResult {
    pub fn ground_energy(&self) -> f64 {
        self.eigenvalues[0]
    }

    pub fn ground_state(&self) -> &[f64] {
        &self.eigenvectors[0]
    }
}

/// Dense symmetric eigendecomposition of
/// `-d^2/ds^2 + V` on a periodic cell of length `period`, second-order
/// three-point stencil, cell-centered samples.
pub fn solve_periodic_potential(
    potential: &[f64],
    period: f64,
) -> Result<SpectralResult, QuantumError> {
    solve_fd(potential, period, true)
}

/// Same discretisation with hard-wall (Dirichlet) boundaries on a domain of
/// the given length.
pub fn solve_dirichlet_potential(
    potential: &[f64],
    domain: f64,
) -> Result<SpectralResult, QuantumError> {
    solve_fd(potential, domain, false)
}

fn solve_fd(potential: &[f64], extent: f64, periodic: bool) -> Result<SpectralResult, QuantumError> {
    let n = potential.len();
    if n < 4 {
        return Err(QuantumError::PotentialTooSmall(n));
    }
    if !(extent > 0.0) {
        return Err(QuantumError::NonPositiveDomain(extent));
    }
    let h = extent / n as f64;
    let inv_h2 = 1.0 / (h * h);

    let mut matrix = DMatrix::<f64>::zeros(n, n);
    for i in 0..n {
        matrix[(i, i)] = 2.0 * inv_h2 + potential[i];
        if i + 1 < n {
            matrix[(i, i + 1)] = -inv_h2;
            matrix[(i + 1, i)] = -inv_h2;
        }
    }
    if periodic {
        matrix[(0, n - 1)] += -inv_h2;
        matrix[(n - 1, 0)] += -inv_h2;
    }

    let eig = matrix.symmetric_eigen();

    // The returned basis is orthonormal, but the eigenvalue list can come
    // back desynchronized from the columns on larger matrices. Recompute
    // each eigenvalue as the Rayleigh quotient of its column, applying the
    // operator through its tridiagonal-plus-corners structure.
    let apply_h = |v: &[f64]| -> Vec<f64> {
        let mut out = vec![0.0; n];
        for i in 0..n {
            let mut acc = (2.0 * inv_h2 + potential[i]) * v[i];
            if i > 0 {
                acc -= inv_h2 * v[i - 1];
            }
            if i + 1 < n {
                acc -= inv_h2 * v[i + 1];
            }
            out[i] = acc;
        }
        if periodic {
            out[0] -= inv_h2 * v[n - 1];
            out[n - 1] -= inv_h2 * v[0];
        }
        out
    };

    let mut pairs: Vec<(f64, Vec<f64>)> = (0..n)
        .map(|i| {
            let column: Vec<f64> = eig.eigenvectors.column(i).iter().cloned().collect();
            let hv = apply_h(&column);
            let rayleigh: f64 = column.iter().zip(&hv).map(|(a, b)| a * b).sum();
            (rayleigh, column)
        })
        .collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));

    let norm = 1.0 / h.sqrt();
    let mut eigenvalues = Vec::with_capacity(n);
    let mut eigenvectors = Vec::with_capacity(n);
    for (value, column) in pairs {
        eigenvalues.push(value);
        // Deterministic sign: largest-magnitude entry positive.
        let pivot = column
            .iter()
            .cloned()
            .max_by(|a, b| a.abs().total_cmp(&b.abs()))
            .unwrap_or(1.0);
        let sign = if pivot < 0.0 { -1.0 } else { 1.0 };
        eigenvectors.push(column.iter().map(|x| x * sign * norm).collect());
    }

    let half = 0.5 * h;
    let start = if periodic { 0.0 } else { -0.5 * extent };
    let grid = (0..n).map(|j| start + half + j as f64 * h).collect();
    Ok(SpectralResult {
        grid,
        potential: potential.to_vec(),
        eigenvalues,
        eigenvectors,
        step: h,
    })
}

/// Band ground state of the lattice potential over one period
/// `[0, 2 K(kappa)/alpha)` with periodic boundaries.
///
/// The lowest eigenvalue converges to [`exact_energy`] and the ground
/// eigenvector to the normalised `dn` profile, both at O((period/N)^2).
/// Requires `kappa < 1`; at `kappa = 1` the period is infinite and
/// [`solve_truncated_ground_state`] applies instead.
pub fn solve_band_ground_state(
    profile: &CurvatureProfile,
    n: usize,
) -> Result<SpectralResult, QuantumError> {
    let kappa = match profile {
        CurvatureProfile::ConformonLattice { kappa, .. } => *kappa,
        CurvatureProfile::Solitary { .. } => return Err(QuantumError::InfinitePeriod),
        CurvatureProfile::CircularRing { .. } => return Err(QuantumError::FinitePeriod),
    };
    if kappa.is_unit() {
        return Err(QuantumError::InfinitePeriod);
    }
    if !(64..=4096).contains(&n) {
        return Err(QuantumError::GridSizeOutOfRange(n));
    }
    let period = 2.0 * complete_k(kappa).expect("kappa < 1") / profile.scale();
    let h = period / n as f64;
    let potential: Vec<f64> = (0..n)
        .map(|j| lattice_potential(profile, (j as f64 + 0.5) * h))
        .collect();
    solve_periodic_potential(&potential, period)
}

/// Half-width used for the hard-wall domain of the truncated solver, in
/// units of the decay length `1/beta`.
const TRUNCATED_HALF_WIDTH: f64 = 20.0;

/// Ground state of the solitary (`kappa = 1`) potential well
/// `-2 beta^2 sech^2(beta s)` on the truncated domain
/// `[-20/beta, 20/beta]` with hard walls. The bound state sits at
/// `E = -beta^2` with amplitude `sech(beta s)`; the truncation error is
/// O(exp(-2 * 20)) and far below the grid error.
pub fn solve_truncated_ground_state(
    profile: &CurvatureProfile,
    n: usize,
) -> Result<SpectralResult, QuantumError> {
    let infinite_period = match profile {
        CurvatureProfile::ConformonLattice { kappa, .. } => kappa.is_unit(),
        CurvatureProfile::Solitary { .. } => true,
        CurvatureProfile::CircularRing { .. } => false,
    };
    if !infinite_period {
        return Err(QuantumError::FinitePeriod);
    }
    if !(64..=4096).contains(&n) {
        return Err(QuantumError::GridSizeOutOfRange(n));
    }
    let beta = profile.scale();
    let domain = 2.0 * TRUNCATED_HALF_WIDTH / beta;
    let h = domain / n as f64;
    let potential: Vec<f64> = (0..n)
        .map(|j| {
            let s = -0.5 * domain + (j as f64 + 0.5) * h;
            lattice_potential(profile, s)
        })
        .collect();
    solve_dirichlet_potential(&potential, domain)
}
