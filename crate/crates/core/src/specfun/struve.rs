//! Modified Struve function `L_ν` at half-integer orders.

use std::f64::consts::PI;

use super::gamma::ln_gamma_positive;
use super::ln_positive_series;
use crate::error::{domain, Result};
use crate::scaled::ScaledValue;

/// Largest order accepted, as `ν + 1/2`.
const MAX_ORDER_INDEX: f64 = 10_000.0;

/// `e^{-x} L_ν(x)` for `ν ∈ {-1/2, 1/2, 3/2, ...}` and `x > 0`.
///
/// Orders `∓1/2` use the elementary forms `√(2/(πx)) sinh x` and
/// `√(2/(πx)) (cosh x - 1)`; higher orders sum the ascending series
/// `Σ (x/2)^{2j+ν+1} / (Γ(j+3/2) Γ(j+ν+3/2))`, which has positive terms.
pub fn struve_l_half(nu: f64, x: f64) -> Result<ScaledValue> {
    let index = nu + 0.5;
    if !(index >= 0.0) || index.fract() != 0.0 || index > MAX_ORDER_INDEX {
        return Err(domain(format!(
            "struve_l_half requires a half-integer order >= -1/2, got {nu}"
        )));
    }
    if !(x > 0.0) || !x.is_finite() {
        return Err(domain(format!("struve_l_half requires finite x > 0, got {x}")));
    }
    if x < super::bessel::TINY_ARGUMENT {
        return Ok(ScaledValue::from_ln(leading_ln(nu, x) - x, false));
    }
    if index == 0.0 {
        return Ok(ScaledValue::from_real(
            -(-2.0 * x).exp_m1() / (2.0 * PI * x).sqrt(),
        ));
    }
    if index == 1.0 {
        let d = (-x).exp_m1();
        return Ok(ScaledValue::from_real(d * d / (2.0 * PI * x).sqrt()));
    }
    let q = 0.25 * x * x;
    let ln_sum = ln_positive_series(|j| q / ((j + 0.5) * (j + nu + 0.5)));
    Ok(ScaledValue::from_ln(leading_ln(nu, x) + ln_sum - x, false))
}

fn leading_ln(nu: f64, x: f64) -> f64 {
    (nu + 1.0) * (0.5 * x).ln() - ln_gamma_positive(1.5) - ln_gamma_positive(nu + 1.5)
}
