//! Exact-arithmetic symbolic verification of a degenerating Brauer-Severi
//! surface bundle over the affine plane: the defining quadrics, their
//! freeness/flatness certificate, the singular-fiber geometry, the blow-up
//! chart section spaces, and the ampleness-region inequalities.
//!
//! Everything is computed over the field Q(z) of Eisenstein rationals with
//! arbitrary-precision arithmetic; there is no floating point and no
//! randomized specialization anywhere, so every reported result is a
//! certificate.
//!
//! The crate is organized as:
//!
//! * [`scalars`] - the coefficient field Q(z);
//! * [`polyring`] - sparse multivariate polynomials, fraction-free
//!   elimination, kernels over the field;
//! * [`sections`] - the section-module membership calculus and the blow-up
//!   chart calculus, certifying the two 10-element free bases;
//! * [`relations`] - derivation and certification of the 27 defining
//!   quadrics;
//! * [`freeness`] - the rank-9 freeness certificate via multiplication
//!   matrices;
//! * [`fiber`] - central-fiber geometry: torus weights, the twisted-cubic
//!   cone, tangent dimensions, Jacobian smoothness checks;
//! * [`ampleness`] - intersection tables and the ample-region and
//!   contraction-twist inequalities;
//! * [`fixtures`] / [`report`] / [`suites`] - fixture loading, the
//!   machine-readable report, and the suite runner behind the `verify` CLI.

// Indexed loops and tuple-heavy signatures are the natural shape of the
// elimination and grading code here.
#![allow(clippy::needless_range_loop, clippy::type_complexity)]

pub mod ampleness;
pub mod fiber;
pub mod fixtures;
pub mod freeness;
pub mod polyring;
pub mod relations;
pub mod report;
pub mod scalars;
pub mod sections;
pub mod suites;

pub use report::{CheckResult, RunConfig, Status, Suite, VerificationReport};
pub use scalars::{Eisenstein, Rational};
