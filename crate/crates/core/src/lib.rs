//! The Rice Ie-function, `Ie(k, x) = ∫₀ˣ e^{-t} I₀(kt) dt` for `0 <= k <= 1`.
//!
//! The crate evaluates `Ie` along six independent routes (two integral
//! forms, two series, two Marcum-Q identities), an integration-by-parts
//! form used as a cross-check, and closed-form upper and lower bounds that
//! bracket it.
//!
//! All large-argument products such as `e^{-x} I₀(kx)` are formed in
//! log-scaled arithmetic ([`ScaledValue`]), so `x` in the hundreds is safe.

// `!(v > 0.0)` is used deliberately so that NaN arguments are rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bounds;
pub mod error;
pub mod ie;
pub mod marcum;
pub mod quadrature;
pub mod scaled;
pub mod specfun;

pub use bounds::{Bracket, ErrorRecord};
pub use error::{Error, Result};
pub use quadrature::{QuadratureConfig, QuadratureResult};
pub use scaled::ScaledValue;
pub use ie::{AbParams, EvalPoint, Method, MethodResult};
pub use marcum::{MarcumArgs, MarcumOrder};
