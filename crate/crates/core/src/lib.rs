//! Exact computer algebra for circle-equivariant localization.
//!
//! The crate provides, bottom to top:
//! - `laurent`, `ratfn`, `point`: the representation ring Z[g^{1/2}, g^{-1/2}],
//!   its fraction field, and exact vanishing tests at circle points;
//! - `cyclo`, `reconstruct`: cyclotomic sampling and Cauchy rational
//!   interpolation with integer coefficients;
//! - `symfun`, `chern`: truncated symmetric-function calculus in Chern
//!   roots, characteristic series and their equivariant twists;
//! - `cdga`, `gamma_ring`: a finite graded-commutative model of the form
//!   algebra with its transgression product and pre-lambda operations;
//! - `bundle`, `lambda_engine`: the exterior-power word algebra, gamma
//!   operations, and the truncated inverse of the alternating sum of
//!   conormal exterior powers;
//! - `localize`, `eta`: fixed-point assembly of localized indices and the
//!   circle eta invariant with its independent numerical oracle;
//! - `verify`: seeded, reportable identity suites driven by the CLI.

pub mod bundle;
pub mod cdga;
pub mod chern;
pub mod cyclo;
pub mod error;
pub mod eta;
pub mod gamma_ring;
pub mod lambda_engine;
pub mod laurent;
pub mod linalg;
pub mod localize;
pub mod localized;
pub mod point;
pub mod poly;
pub mod ratfn;
pub mod reconstruct;
pub mod symfun;
pub mod verify;

pub use error::{EtaError, LocalizeError, ModelError, ReconstructError, RingError};
pub use laurent::HalfLaurent;
pub use point::{vanishes_at, CirclePoint};
pub use ratfn::RationalFn;
