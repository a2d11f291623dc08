//! Rational Krylov model-order reduction for single-input single-output
//! linear systems `h(z) = c^H (zE - A)^{-1} b`.

pub mod cli;
pub mod error;
pub mod greedy;
pub mod krylov;
pub mod model;
pub mod numkernel;
pub mod remainder;

pub use error::{Error, Result};
