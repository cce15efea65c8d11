//! Generalized hypergeometric coherent states on truncated Fock spaces.
//!
//! A family is fixed by parameter lists `a` (length p) and `b` (length q).
//! The crate builds its ladder operators, Barut-Girardello and
//! Klauder-Perelomov states, shifted-argument states and displacement
//! operators, and checks the identities they satisfy: normalization,
//! eigenvalue equations, resolution of the identity through Stieltjes
//! moments, reproducing kernels, and the canonical and pseudoharmonic limits.
//!
//! ```
//! use hypercs::{states, Model};
//! use num_complex::Complex64;
//!
//! let model: Model = "p=0,q=1;a=;b=1.5".parse().unwrap();
//! let psi = states::bg_state(&model, Complex64::new(1.0, 0.0), 1e-12).unwrap();
//! assert!((psi.coeffs[0].re - (2.0 / 2f64.sinh()).sqrt()).abs() < 1e-15);
//! ```

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod fock;
pub mod kernels;
pub mod model;
pub mod specfun;
pub mod states;
pub mod verify;

pub use error::{Error, Result};
pub use fock::{LadderKind, LadderOperator, StateVector};
pub use model::{Model, ModelParams, StructureTable};
pub use specfun::SeriesResult;
