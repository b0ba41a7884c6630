//! Error function and the Gaussian tail probability.

use std::f64::consts::SQRT_2;

/// The error function `2/√π ∫₀ˣ e^{-t²} dt`.
pub fn erf(x: f64) -> f64 {
    libm::erf(x)
}

/// `1 - erf(x)` without cancellation for large positive `x`.
pub fn erfc(x: f64) -> f64 {
    libm::erfc(x)
}

/// Upper tail of the standard normal, `Q(x) = erfc(x/√2) / 2`.
pub fn gaussian_q(x: f64) -> f64 {
    0.5 * erfc(x / SQRT_2)
}
