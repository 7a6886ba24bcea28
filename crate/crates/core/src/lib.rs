//! Certified evaluation of the basic hypergeometric series ₂φ₁ and the
//! q-Pochhammer symbol, the order-12 Heine transformation group with its
//! automorphy cocycle, and numerical plus exact verification of the classical
//! identities built on them: the q-binomial series, the Heine transformation
//! and its iterates, the q-Euler transformation, the Abel limit at `z = 1`,
//! and the q-Gauss summation.
//!
//! The runnable programs under `examples/` walk through each capability;
//! the `qheine` binary exposes them on the command line.

// `!(x < y)` is used on purpose so that NaN fails domain checks
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod ball;
pub mod cli;
pub mod error;
pub mod exact;
pub mod heine;
pub mod identities;
pub mod qnum;
mod serde_complex;

pub use ball::Ball;
pub use error::{QError, Result};
pub use exact::ExactRational;
pub use heine::{GroupElement, Orbit, OrbitEntry};
pub use identities::{IdentityName, VerificationReport};
pub use qnum::{CertifiedValue, EvalConfig, HeineState, QBase};

pub use num_complex::Complex64;
