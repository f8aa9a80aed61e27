//! Exact supersymmetric ground states and spectra of `V(r) = -a/r + b r + c r^2`
//! in `N` dimensions, with a finite-difference eigensolver and a polynomial
//! ansatz solver as independent cross-checks.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod config;
pub mod error;
pub mod exact;
pub mod laurent;
pub mod model;
pub mod numerics;
pub mod poly;
pub mod qes;
pub mod report;
pub mod susy;
pub mod verify;

pub use config::Tolerances;
pub use error::{Error, Result};
pub use laurent::LaurentForm;
pub use model::{dimension_reduce, DimensionSpec, PhysicalParams, PotentialParams};
