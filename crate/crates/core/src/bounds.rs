//! Closed-form bounds on `Ie(k, x)` and the tightness metric.
//!
//! Upper bound, with `c = √(1-k)` and `d = √(1+k)`:
//! `1 - e^{-x} I₀(kx) + √(k/2) [erf(c√x)/c - erf(d√x)/d]`.
//!
//! Lower bound, with `(a, b)` from [`ab_params`] and `Q` the Gaussian tail:
//! `[2Q(b+a) + 2Q(b-a) - e^{-x} I₀(kx) - 1] / √(1-k²)`.
//!
//! Tightness is the absolute relative error `ε_ar = |Ie - bound| / Ie`,
//! measured against the quadrature reference.

use std::f64::consts::PI;

use crate::error::{domain, Error, Result};
use crate::ie::{self, ab_params, one_minus_damped_i0, AbParams, EvalPoint, Method};
use crate::quadrature::{integrate_finite_with, QuadratureConfig, QuadratureResult};
use crate::specfun::{bessel_i_half, erf, gaussian_q};

/// Below this value of `c²x` the ratio `erf(c√x)/c` is taken from its
/// Maclaurin expansion instead of dividing two small numbers.
pub const ERF_RATIO_SWITCH: f64 = 1e-6;

/// `erf(c√x)/c`, continuous through `c = 0` where it equals `2√(x/π)`.
pub fn erf_ratio(c: f64, x: f64) -> f64 {
    let z2 = c * c * x;
    if z2 < ERF_RATIO_SWITCH {
        2.0 / PI.sqrt() * x.sqrt() * (1.0 - z2 / 3.0 + z2 * z2 / 10.0)
    } else {
        erf(c * x.sqrt()) / c
    }
}

/// The upper bound; defined on the whole domain `0 <= k <= 1`.
pub fn upper_bound(p: &EvalPoint) -> f64 {
    let (k, x) = (p.k(), p.x());
    let c = (1.0 - k).sqrt();
    let d = (1.0 + k).sqrt();
    one_minus_damped_i0(p) + (0.5 * k).sqrt() * (erf_ratio(c, x) - erf_ratio(d, x))
}

/// The lower bound; a domain error at `k = 1`.
///
/// Since `b <= a`, the numerator's `2Q(b+a) + 2Q(b-a) - 2` is rewritten as
/// `2[Q(a+b) - Q(a-b)]`, which keeps the small difference of two tails
/// instead of subtracting from two.
pub fn lower_bound(p: &EvalPoint) -> Result<f64> {
    if !p.allows_marcum_forms() {
        return Err(domain(
            "the lower bound is undefined at k = 1 (1/sqrt(1-k^2) diverges)",
        ));
    }
    let AbParams { a, b } = ab_params(p);
    let tails = gaussian_q(a + b) - gaussian_q(a - b);
    Ok((one_minus_damped_i0(p) + 2.0 * tails) / p.cofactor())
}

/// Both bounds at one point; an invalid side holds NaN.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Bracket {
    pub lower: f64,
    pub upper: f64,
    pub point: EvalPoint,
    pub lower_valid: bool,
    pub upper_valid: bool,
}

impl Bracket {
    /// Whether `value` lies strictly inside, allowing `slack` on each side.
    pub fn contains(&self, value: f64, slack: f64) -> bool {
        let above = !self.lower_valid || self.lower < value + slack;
        let below = !self.upper_valid || value < self.upper + slack;
        above && below
    }
}

pub fn bracket(p: &EvalPoint) -> Bracket {
    let lower = lower_bound(p).ok();
    Bracket {
        lower: lower.unwrap_or(f64::NAN),
        upper: upper_bound(p),
        point: *p,
        lower_valid: lower.is_some(),
        upper_valid: true,
    }
}

/// Reference value, bounds and their relative errors at one point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ErrorRecord {
    pub point: EvalPoint,
    pub oracle: f64,
    /// The reference quadrature's own error estimate.
    pub oracle_error: f64,
    pub lower: f64,
    pub upper: f64,
    /// NaN where the lower bound is undefined.
    pub eps_ar_lower: f64,
    pub eps_ar_upper: f64,
    /// Largest pairwise relative spread among the converged routes.
    pub method_disagreement: f64,
}

/// The reference value `ie_eq1` at `tol`, failing if it did not converge.
pub fn oracle(p: &EvalPoint, tol: f64) -> Result<ie::MethodResult> {
    let r = ie::ie_eq1(p, tol)?;
    if !r.converged {
        return Err(Error::NonConvergence {
            what: "reference quadrature",
            estimate: r.error_estimate,
        });
    }
    Ok(r)
}

/// Builds the error record at `p`; needs `x > 0` so that `Ie > 0`.
pub fn error_record(p: &EvalPoint, oracle_tol: f64) -> Result<ErrorRecord> {
    if !(p.x() > 0.0) {
        return Err(domain("relative errors need x > 0"));
    }
    let reference = oracle(p, oracle_tol)?;
    let value = reference.value;
    let br = bracket(p);
    let eps = |bound: f64| (value - bound).abs() / value;
    Ok(ErrorRecord {
        point: *p,
        oracle: value,
        oracle_error: reference.error_estimate,
        lower: br.lower,
        upper: br.upper,
        eps_ar_lower: if br.lower_valid { eps(br.lower) } else { f64::NAN },
        eps_ar_upper: eps(br.upper),
        method_disagreement: route_disagreement(p, value, oracle_tol),
    })
}

/// Largest `|v_i - v_j| / oracle` over the converged routes at `p`.
pub fn route_disagreement(p: &EvalPoint, oracle: f64, tol: f64) -> f64 {
    let values: Vec<f64> = Method::ROUTES
        .iter()
        .filter(|m| m.applies_to(p))
        .filter_map(|&m| ie::evaluate(m, p, tol, ie::DEFAULT_MAX_TERMS).ok())
        .filter(|r| r.converged && r.value.is_finite())
        .map(|r| r.value)
        .collect();
    let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
    if values.len() < 2 {
        0.0
    } else {
        (hi - lo) / oracle
    }
}

fn half_order_bound_integral(p: &EvalPoint, n: u32, cfg: &QuadratureConfig) -> Result<QuadratureResult> {
    let k = p.k();
    integrate_finite_with(
        |t| {
            if t == 0.0 || k == 0.0 {
                return 0.0;
            }
            let scaled = bessel_i_half(n, k * t).map(|v| v.to_real()).unwrap_or(f64::NAN);
            (-(1.0 - k) * t).exp() * scaled
        },
        0.0,
        p.x(),
        cfg,
    )
}

/// `1 - e^{-x} I₀(kx) + k ∫₀ˣ e^{-t} I_{1/2}(kt) dt` by quadrature: the
/// integral form the closed upper bound evaluates.
pub fn upper_bound_integral_form(p: &EvalPoint, tol: f64) -> Result<QuadratureResult> {
    integral_form(p, 0, tol)
}

/// `1 - e^{-x} I₀(kx) + k ∫₀ˣ e^{-t} I_{3/2}(kt) dt` by quadrature: a
/// lower bound with no closed form, checked numerically only.
pub fn lower_bound_integral_form(p: &EvalPoint, tol: f64) -> Result<QuadratureResult> {
    integral_form(p, 1, tol)
}

fn integral_form(p: &EvalPoint, n: u32, tol: f64) -> Result<QuadratureResult> {
    let cfg = QuadratureConfig::with_tolerances(tol * 1e-2, tol);
    let q = half_order_bound_integral(p, n, &cfg)?;
    Ok(QuadratureResult {
        value: one_minus_damped_i0(p) + p.k() * q.value,
        abs_error_estimate: p.k() * q.abs_error_estimate,
        ..q
    })
}
