//! Exact static solutions of a thin elastic tube with intrinsic twist, the
//! 3D conformations they describe, and the quantum potential that the curved
//! geometry induces for an electron confined to the tube.
//!
//! The crate is organised in four layers:
//!
//! * [`elliptic`] — Jacobi elliptic functions and the complete elliptic
//!   integral of the first kind (AGM based, modulus convention).
//! * [`rod`] — the elastic material law, the two static solution cases,
//!   torsion/twist relations, and the curvature profiles that solve the
//!   static balance equations.
//! * [`geometry`] — Frenet frame integration from a curvature profile,
//!   curvature/torsion recovery from discrete curves, the closed-tube
//!   commensurability condition, and CSV/PLY export.
//! * [`quantum`] — the curvature-induced effective potential, its exact
//!   delocalised eigenstate, and a finite-difference band solver used to
//!   verify that eigenstate numerically.

// Guards written as !(x > 0.0) also reject NaN; reference tables keep every
// digit printed by the multiprecision oracle.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::excessive_precision)]

pub mod elliptic;
pub mod geometry;
pub mod quantum;
pub mod rod;

pub use elliptic::Modulus;
pub use geometry::Conformation;
pub use quantum::SpectralResult;
pub use rod::{CurvatureProfile, RodMaterial, SolutionCase};
