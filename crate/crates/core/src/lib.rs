//! Generalized n-th order arctangent.
//!
//! For an integer order `n >= 2` the function
//!
//! ```text
//! arctan_n(u_1, ..., u_{n-1}) = ∫_0^{u_1} ... ∫_0^{u_{n-1}} dx / (1 + x_1^n + ... + x_{n-1}^n)
//! ```
//!
//! reduces to the ordinary arctangent at `n = 2`. This crate evaluates it with
//! an adaptive cubature engine and checks the functional relations it
//! satisfies against closed-form constants built from `Γ(1/n)`.
//!
//! The crate is `no_std` and needs only `alloc`. Modules:
//!
//! * [`special`]: Gamma function, the constants `C_n = n (Γ(1/n)/n)^n`, and
//!   quadrature cross-checks of `n ∫_0^∞ e^{-x^n} dx = Γ(1/n)`.
//! * [`cubature`]: adaptive tensor/Genz–Malik cubature, scrambled Sobol QMC,
//!   and the semi-infinite change of variables.
//! * [`arctann`]: `arctan_n`, reflection arguments, the n-term relation and
//!   the derived `F` and `Φ` combinations.
//! * [`reduction`]: the double-integral and n-fold reduction formulas checked
//!   on a fixed registry of integrands.

#![no_std]
#![forbid(unsafe_code)]
// `!(x > 0.0)` style tests are used on purpose: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod arctann;
pub mod cubature;
mod error;
mod math;
pub mod reduction;
pub mod special;

pub use arctann::{ArgVector, Order};
pub use cubature::{EvalResult, Hyperbox, Method, QuadratureConfig};
pub use error::{Error, Result, Side};
