//! Modified Bessel functions of the first kind, exponentially scaled.
//!
//! Every function here returns `e^{-x} I_ν(x)` as a [`ScaledValue`]. The
//! scaled value never exceeds one for `ν >= -1/2`, and its log scale keeps
//! high orders at small arguments from underflowing.

use std::f64::consts::PI;

use super::gamma::ln_gamma_positive;
use super::ln_positive_series;
use crate::error::{domain, Result};
use crate::scaled::ScaledValue;

/// Above this argument integer orders switch from the ascending series to
/// Miller's backward recurrence.
pub const SERIES_CUTOFF: f64 = 30.0;

/// Below this argument half-order functions return their leading series term.
pub const TINY_ARGUMENT: f64 = 1e-8;

/// `e^{-x} I_n(x)` for integer `n >= 0` and `x >= 0`.
pub fn bessel_i_scaled(n: u32, x: f64) -> Result<ScaledValue> {
    if !(x >= 0.0) || !x.is_finite() {
        return Err(domain(format!("bessel_i_scaled requires finite x >= 0, got {x}")));
    }
    if x == 0.0 {
        return Ok(if n == 0 {
            ScaledValue::ONE
        } else {
            ScaledValue::ZERO
        });
    }
    if x <= SERIES_CUTOFF {
        Ok(series_scaled(n as f64, x))
    } else {
        Ok(miller_scaled(n, x))
    }
}

/// `I_n(x)` itself, carried in log-scaled form.
pub fn bessel_i(n: u32, x: f64) -> Result<ScaledValue> {
    Ok(bessel_i_scaled(n, x)?.mul_exp(x))
}

/// `e^{-x} I_{n+1/2}(x)` for `x > 0`.
///
/// Uses the finite elementary sum
/// `I_{n+1/2}(x) = Σ_{j=0}^{n} (n+j)! [(-1)^j e^x + (-1)^{n+1} e^{-x}] / (√π j! (n-j)! (2x)^{j+1/2})`.
/// Its terms alternate, so for `x < n²` (where they cancel) the ascending
/// series is used instead.
pub fn bessel_i_half(n: u32, x: f64) -> Result<ScaledValue> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(domain(format!("bessel_i_half requires finite x > 0, got {x}")));
    }
    let nu = n as f64 + 0.5;
    if x < TINY_ARGUMENT {
        return Ok(leading_term_scaled(nu, x));
    }
    if n == 0 {
        // (e^x - e^{-x}) / √(2πx), scaled by e^{-x}
        return Ok(ScaledValue::from_real(-(-2.0 * x).exp_m1() / (2.0 * PI * x).sqrt()));
    }
    let nf = n as f64;
    if x < nf * nf {
        return Ok(series_scaled(nu, x));
    }
    Ok(ScaledValue::from_real(half_order_finite_sum(n, x)))
}

/// `e^{-x} I_{-1/2}(x) = (1 + e^{-2x}) / √(2πx)` for `x > 0`.
pub fn bessel_i_neg_half(x: f64) -> Result<ScaledValue> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(domain(format!("bessel_i_neg_half requires finite x > 0, got {x}")));
    }
    Ok(ScaledValue::from_real(
        (1.0 + (-2.0 * x).exp()) / (2.0 * PI * x).sqrt(),
    ))
}

fn half_order_finite_sum(n: u32, x: f64) -> f64 {
    let damp = (-2.0 * x).exp();
    let sign_tail = if n.is_multiple_of(2) { -1.0 } else { 1.0 };
    let two_x = 2.0 * x;
    // coefficient (n+j)! / (j! (n-j)!), built incrementally
    let mut coef = 1.0;
    let mut pow = two_x.sqrt();
    let mut sum = 0.0;
    for j in 0..=n {
        if j > 0 {
            let jf = j as f64;
            coef *= (n as f64 + jf) * (n as f64 - jf + 1.0) / jf;
            pow *= two_x;
        }
        let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
        sum += coef * (sign + sign_tail * damp) / pow;
    }
    sum / PI.sqrt()
}

/// Leading ascending-series term `(x/2)^ν / Γ(ν+1)`, scaled by `e^{-x}`.
pub(crate) fn leading_term_scaled(nu: f64, x: f64) -> ScaledValue {
    ScaledValue::from_ln(nu * (0.5 * x).ln() - ln_gamma_positive(nu + 1.0) - x, false)
}

/// Ascending series `Σ (x/2)^{2j+ν} / (j! Γ(j+ν+1))` times `e^{-x}`.
///
/// All terms are positive, so the relative error stays at a few ulps per
/// term regardless of argument size.
pub(crate) fn series_scaled(nu: f64, x: f64) -> ScaledValue {
    let q = 0.25 * x * x;
    let ln_sum = ln_positive_series(|j| q / (j * (j + nu)));
    ScaledValue::from_ln(
        nu * (0.5 * x).ln() - ln_gamma_positive(nu + 1.0) + ln_sum - x,
        false,
    )
}

/// Miller's backward recurrence normalized by `I_0 + 2 Σ_{k>=1} I_k = e^x`.
fn miller_scaled(n: u32, x: f64) -> ScaledValue {
    const RESCALE_AT: f64 = 1e250;
    let nf = n as f64;
    let start = ((nf * nf + 100.0 * x).sqrt().ceil() as u32).max(n) + 30;

    let mut above = 0.0; // i_{k+1}
    let mut current = 1.0; // i_k
    let mut total = 0.0;
    let mut shift = 0.0; // ln of the factor divided out so far
    let mut recorded = (0.0, 0.0);

    let mut k = start;
    loop {
        if k == n {
            recorded = (current, shift);
        }
        total += if k == 0 { current } else { 2.0 * current };
        if k == 0 {
            break;
        }
        let below = 2.0 * k as f64 / x * current + above;
        above = current;
        current = below;
        k -= 1;
        if current > RESCALE_AT {
            current /= RESCALE_AT;
            above /= RESCALE_AT;
            total /= RESCALE_AT;
            shift += RESCALE_AT.ln();
        }
    }
    let (value, shift_at_record) = recorded;
    if value == 0.0 {
        return ScaledValue::ZERO;
    }
    ScaledValue::from_ln(value.ln() - total.ln() + (shift - shift_at_record), false)
}
