//! Evaluation routes for the Rice Ie-function.
//!
//! | route | form |
//! |-------|------|
//! | [`ie_eq1`] | `∫₀ˣ e^{-t} I₀(kt) dt` by quadrature (the reference) |
//! | [`ie_eq2`] | `1/√(1-k²) - (1/π) ∫₀^π e^{-x(1-k cos θ)} / (1 - k cos θ) dθ` |
//! | [`ie_series_eq3`] | modified-Struve series, fast when `x√(1-k²)` is large and `kx` small |
//! | [`ie_series_eq4`] | Bessel/Gamma series, fast when `x√(1-k²)` is small and `kx` large |
//! | [`ie_marcum_eq5`] | `[2 Q₁(a, b) - e^{-x} I₀(kx) - 1] / √(1-k²)` |
//! | [`ie_marcum_eq6`] | `[Q₁(a, b) - Q₁(b, a)] / √(1-k²)` |
//! | [`ie_lemma1`] | `1 - e^{-x} I₀(kx) + k ∫₀ˣ e^{-t} I₁(kt) dt` |
//!
//! with `a = √x √(1 + √(1-k²))` and `b = √x √(1 - √(1-k²))`.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use crate::error::{domain, Error, Result};
use crate::marcum::{self, MarcumArgs};
use crate::quadrature::{integrate_finite_with, QuadratureConfig, QuadratureResult};
use crate::scaled::ScaledValue;
use crate::specfun::gamma::ln_gamma_positive;
use crate::specfun::{bessel_i_scaled, struve_l_half};

/// Quadrature tolerance at which [`ie_eq1`] serves as the reference value.
pub const ORACLE_TOL: f64 = 1e-12;

/// Default cap on series terms for the two series routes.
pub const DEFAULT_MAX_TERMS: usize = 200;

/// Below this `x` the Marcum identity cancels badly and [`ie_auto`]
/// integrates directly.
pub const MARCUM_MIN_X: f64 = 0.05;

/// Series stop once a term drops below this fraction of the partial sum.
const SERIES_REL_TOL: f64 = 1e-15;

/// A point `(k, x)` with `0 <= k <= 1` and `x >= 0`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EvalPoint {
    k: f64,
    x: f64,
}

impl EvalPoint {
    pub fn new(k: f64, x: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&k) {
            return Err(domain(format!("k must lie in [0, 1], got {k}")));
        }
        if !(x >= 0.0) || !x.is_finite() {
            return Err(domain(format!("x must be finite and nonnegative, got {x}")));
        }
        Ok(EvalPoint { k, x })
    }

    pub fn k(&self) -> f64 {
        self.k
    }

    pub fn x(&self) -> f64 {
        self.x
    }

    /// Routes with a `1/√(1-k²)` prefactor need `k < 1`.
    pub fn allows_marcum_forms(&self) -> bool {
        self.k < 1.0
    }

    /// `√(1-k²)`, formed as `√((1-k)(1+k))`.
    pub fn cofactor(&self) -> f64 {
        ((1.0 - self.k) * (1.0 + self.k)).sqrt()
    }

    fn require_k_below_one(&self, route: &str) -> Result<()> {
        if self.k < 1.0 {
            Ok(())
        } else {
            Err(domain(format!(
                "{route} is undefined at k = 1 (1/sqrt(1-k^2) diverges)"
            )))
        }
    }
}

/// Which route produced a value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Method {
    Eq1Quad,
    Eq2Quad,
    SeriesEq3,
    SeriesEq4,
    MarcumEq5,
    MarcumEq6,
    Lemma1,
    /// `k = 0` or `x = 0`, where `Ie` is elementary.
    ClosedForm,
}

impl Method {
    pub const ROUTES: [Method; 7] = [
        Method::Eq1Quad,
        Method::Eq2Quad,
        Method::SeriesEq3,
        Method::SeriesEq4,
        Method::MarcumEq5,
        Method::MarcumEq6,
        Method::Lemma1,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            Method::Eq1Quad => "eq1",
            Method::Eq2Quad => "eq2",
            Method::SeriesEq3 => "eq3",
            Method::SeriesEq4 => "eq4",
            Method::MarcumEq5 => "eq5",
            Method::MarcumEq6 => "eq6",
            Method::Lemma1 => "lemma1",
            Method::ClosedForm => "closed-form",
        }
    }

    pub fn is_series(self) -> bool {
        matches!(self, Method::SeriesEq3 | Method::SeriesEq4)
    }

    /// Whether the route is defined at `p`.
    pub fn applies_to(self, p: &EvalPoint) -> bool {
        match self {
            Method::Eq1Quad | Method::Lemma1 => true,
            Method::Eq2Quad | Method::MarcumEq5 | Method::MarcumEq6 => p.k < 1.0,
            Method::SeriesEq3 => p.k > 0.0 && p.k < 1.0 && p.x > 0.0,
            Method::SeriesEq4 => p.k > 0.0 && p.x > 0.0,
            Method::ClosedForm => p.k == 0.0 || p.x == 0.0,
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "eq1" => Ok(Method::Eq1Quad),
            "eq2" => Ok(Method::Eq2Quad),
            "eq3" => Ok(Method::SeriesEq3),
            "eq4" => Ok(Method::SeriesEq4),
            "eq5" => Ok(Method::MarcumEq5),
            "eq6" => Ok(Method::MarcumEq6),
            "lemma1" => Ok(Method::Lemma1),
            "closed-form" => Ok(Method::ClosedForm),
            other => Err(domain(format!("unknown method '{other}'"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MethodResult {
    pub value: f64,
    pub method: Method,
    pub error_estimate: f64,
    /// Series terms summed, or quadrature bisections.
    pub terms_or_panels: usize,
    pub converged: bool,
}

impl MethodResult {
    fn exact(value: f64, method: Method) -> Self {
        MethodResult {
            value,
            method,
            error_estimate: 0.0,
            terms_or_panels: 0,
            converged: true,
        }
    }

    fn from_quadrature(base: f64, sign: f64, q: &QuadratureResult, method: Method) -> Self {
        MethodResult {
            value: base + sign * q.value,
            method,
            error_estimate: q.abs_error_estimate,
            terms_or_panels: q.subdivisions,
            converged: q.converged,
        }
    }
}

/// Marcum arguments `(a, b)` belonging to a point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AbParams {
    pub a: f64,
    pub b: f64,
}

/// `a = √x √(1 + √(1-k²))`, `b = √x √(1 - √(1-k²))`.
///
/// `b` is formed as `k√x / √(1 + √(1-k²))`, the same quantity without the
/// cancellation in `1 - √(1-k²)` at small `k`.
pub fn ab_params(p: &EvalPoint) -> AbParams {
    let root_x = p.x.sqrt();
    let lift = (1.0 + p.cofactor()).sqrt();
    AbParams {
        a: root_x * lift,
        b: p.k * root_x / lift,
    }
}

/// Which series the qualitative convergence guidance favours at `p`:
/// the Struve series when `x√(1-k²) >= kx` (that is `k <= 1/√2`).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SeriesRegime {
    Eq3,
    Eq4,
}

pub fn series_regime(p: &EvalPoint) -> SeriesRegime {
    if p.x * p.cofactor() >= p.k * p.x {
        SeriesRegime::Eq3
    } else {
        SeriesRegime::Eq4
    }
}

/// `e^{-x} I₀(kx)` in log-scaled form.
pub fn damped_i0(p: &EvalPoint) -> ScaledValue {
    bessel_i_scaled(0, p.k * p.x)
        .expect("kx >= 0 on a valid point")
        .mul_exp(-(1.0 - p.k) * p.x)
}

/// `1 - e^{-x} I₀(kx)`, accurate for small `x`.
pub fn one_minus_damped_i0(p: &EvalPoint) -> f64 {
    let v = damped_i0(p);
    if v.is_zero() {
        return 1.0;
    }
    -v.ln_abs().exp_m1()
}

fn quad_config(tol: f64) -> Result<QuadratureConfig> {
    if !(tol > 0.0) {
        return Err(domain(format!("tolerance must be positive, got {tol}")));
    }
    Ok(QuadratureConfig::with_tolerances(tol * 1e-2, tol))
}

fn nan_on_err(v: Result<ScaledValue>) -> f64 {
    v.map(|s| s.to_real()).unwrap_or(f64::NAN)
}

/// The defining integral by adaptive quadrature of `e^{-(1-k)t} [e^{-kt} I₀(kt)]`.
pub fn ie_eq1(p: &EvalPoint, tol: f64) -> Result<MethodResult> {
    let cfg = quad_config(tol)?;
    let k = p.k;
    let q = integrate_finite_with(
        |t| (-(1.0 - k) * t).exp() * nan_on_err(bessel_i_scaled(0, k * t)),
        0.0,
        p.x,
        &cfg,
    )?;
    Ok(MethodResult::from_quadrature(0.0, 1.0, &q, Method::Eq1Quad))
}

/// The trigonometric integral form over `[0, π]`.
pub fn ie_eq2(p: &EvalPoint, tol: f64) -> Result<MethodResult> {
    p.require_k_below_one("the trigonometric integral")?;
    let cfg = quad_config(tol)?;
    let (k, x) = (p.k, p.x);
    let q = integrate_finite_with(
        |theta: f64| {
            let half_sin = (0.5 * theta).sin();
            // 1 - k cos θ = (1 - k) + 2k sin²(θ/2), free of cancellation near θ = 0
            let w = (1.0 - k) + 2.0 * k * half_sin * half_sin;
            (-x * w).exp() / w
        },
        0.0,
        PI,
        &cfg,
    )?;
    let mut r = MethodResult::from_quadrature(1.0 / p.cofactor(), -1.0 / PI, &q, Method::Eq2Quad);
    r.error_estimate /= PI;
    Ok(r)
}

/// Compensated running sum of positive series terms with the shared stopping rule.
struct SeriesSum {
    sum: f64,
    comp: f64,
    last: f64,
    terms: usize,
}

impl SeriesSum {
    fn new() -> Self {
        SeriesSum {
            sum: 0.0,
            comp: 0.0,
            last: f64::INFINITY,
            terms: 0,
        }
    }

    /// Adds a term; returns true once the series has converged.
    fn push(&mut self, term: f64) -> bool {
        let y = term - self.comp;
        let t = self.sum + y;
        self.comp = (t - self.sum) - y;
        self.sum = t;
        self.terms += 1;
        let done = term <= self.last && term.abs() < SERIES_REL_TOL * self.sum.abs();
        self.last = term;
        done
    }

    fn finish(self, method: Method, converged: bool) -> MethodResult {
        MethodResult {
            value: self.sum,
            method,
            error_estimate: if self.last.is_finite() { self.last.abs() } else { 0.0 },
            terms_or_panels: self.terms,
            converged,
        }
    }
}

/// Modified-Struve series
/// `√(xπ/(2s)) e^{-x} Σ_n (1/n!) (x k²/(2s))^n [L_{n+1/2}(xs)/s + L_{n-1/2}(xs)]`
/// with `s = √(1-k²)`.
pub fn ie_series_eq3(p: &EvalPoint, max_terms: usize) -> Result<MethodResult> {
    let (k, x) = (p.k, p.x);
    if !(k > 0.0 && k < 1.0 && x > 0.0) {
        return Err(domain(format!(
            "the Struve series needs 0 < k < 1 and x > 0, got k={k}, x={x}"
        )));
    }
    let s = p.cofactor();
    let y = x * s;
    let ln_ratio = (x * k * k / (2.0 * s)).ln();
    // prefactor, with the e^{-y} scaling of the Struve values undone
    let ln_pref = 0.5 * (x * PI / (2.0 * s)).ln() - x + y;

    let mut acc = SeriesSum::new();
    let mut lower = struve_l_half(-0.5, y)?;
    for n in 0..max_terms {
        let nf = n as f64;
        let upper = struve_l_half(nf + 0.5, y)?;
        let bracket = upper.scale(1.0 / s) + lower;
        let ln_term = ln_pref + nf * ln_ratio - ln_gamma_positive(nf + 1.0) + bracket.ln_abs();
        if acc.push(ln_term.exp()) {
            return Ok(acc.finish(Method::SeriesEq3, true));
        }
        lower = upper;
    }
    Ok(acc.finish(Method::SeriesEq3, false))
}

/// Bessel series
/// `x e^{-x} (√π/2) Σ_n r^{n+1} I_{n+1}(kx)/Γ(n+5/2)
///  + x e^{-x} [I₀(kx) + (√π/(2k)) Σ_n r^n I_{n+1}(kx)/Γ(n+3/2)]`
/// with `r = x(1-k²)/(2k)`.
pub fn ie_series_eq4(p: &EvalPoint, max_terms: usize) -> Result<MethodResult> {
    let (k, x) = (p.k, p.x);
    if !(k > 0.0 && x > 0.0) {
        return Err(domain(format!(
            "the Bessel series needs 0 < k <= 1 and x > 0, got k={k}, x={x}"
        )));
    }
    let kx = k * x;
    let r = x * (1.0 - k) * (1.0 + k) / (2.0 * k);
    let ln_r = if r > 0.0 { r.ln() } else { f64::NEG_INFINITY };
    let ln_pow = |m: f64| if m == 0.0 { 0.0 } else { m * ln_r };
    let ln_x = x.ln();
    let ln_half_sqrt_pi = (0.5 * PI.sqrt()).ln();
    let ln_k = k.ln();
    // e^{-x} I_m(kx) = e^{-(1-k)x} [e^{-kx} I_m(kx)]
    let ln_damped_i = |m: u32| -> Result<f64> { Ok(bessel_i_scaled(m, kx)?.ln_abs() - (1.0 - k) * x) };

    let mut acc = SeriesSum::new();
    acc.push((ln_x + ln_damped_i(0)?).exp());
    for n in 0..max_terms {
        let nf = n as f64;
        let ln_i = ln_x + ln_damped_i(n as u32 + 1)?;
        let first = ln_i + ln_half_sqrt_pi + ln_pow(nf + 1.0) - ln_gamma_positive(nf + 2.5);
        let second = ln_i + ln_half_sqrt_pi - ln_k + ln_pow(nf) - ln_gamma_positive(nf + 1.5);
        if acc.push(first.exp() + second.exp()) {
            return Ok(acc.finish(Method::SeriesEq4, true));
        }
    }
    Ok(acc.finish(Method::SeriesEq4, false))
}

fn marcum_parts(p: &EvalPoint, swapped: bool) -> Result<QuadratureResult> {
    let AbParams { a, b } = ab_params(p);
    let args = if swapped {
        MarcumArgs::new(b, a)?
    } else {
        MarcumArgs::new(a, b)?
    };
    marcum::marcum_q1_quadrature(args, &marcum::default_config())
}

/// `[2 Q₁(a, b) - e^{-x} I₀(kx) - 1] / √(1-k²)`.
pub fn ie_marcum_eq5(p: &EvalPoint) -> Result<MethodResult> {
    p.require_k_below_one("the Marcum identity")?;
    let s = p.cofactor();
    let q = marcum_parts(p, false)?;
    let value = (one_minus_damped_i0(p) + 2.0 * (q.value - 1.0)) / s;
    Ok(MethodResult {
        value,
        method: Method::MarcumEq5,
        error_estimate: 2.0 * q.abs_error_estimate / s,
        terms_or_panels: q.subdivisions,
        converged: q.converged,
    })
}

/// `[Q₁(a, b) - Q₁(b, a)] / √(1-k²)`.
pub fn ie_marcum_eq6(p: &EvalPoint) -> Result<MethodResult> {
    p.require_k_below_one("the Marcum difference identity")?;
    let s = p.cofactor();
    let qab = marcum_parts(p, false)?;
    let qba = marcum_parts(p, true)?;
    Ok(MethodResult {
        value: (qab.value - qba.value) / s,
        method: Method::MarcumEq6,
        error_estimate: (qab.abs_error_estimate + qba.abs_error_estimate) / s,
        terms_or_panels: qab.subdivisions + qba.subdivisions,
        converged: qab.converged && qba.converged,
    })
}

/// Integration-by-parts form `1 - e^{-x} I₀(kx) + k ∫₀ˣ e^{-t} I₁(kt) dt`.
pub fn ie_lemma1(p: &EvalPoint, tol: f64) -> Result<MethodResult> {
    let cfg = quad_config(tol)?;
    let k = p.k;
    let base = one_minus_damped_i0(p);
    if k == 0.0 {
        return Ok(MethodResult::exact(base, Method::Lemma1));
    }
    let q = integrate_finite_with(
        |t| (-(1.0 - k) * t).exp() * nan_on_err(bessel_i_scaled(1, k * t)),
        0.0,
        p.x,
        &cfg,
    )?;
    let mut r = MethodResult::from_quadrature(base, k, &q, Method::Lemma1);
    r.error_estimate *= k;
    Ok(r)
}

/// Evaluates one route by tag; `tol` applies to the quadrature routes and
/// `max_terms` to the series.
pub fn evaluate(method: Method, p: &EvalPoint, tol: f64, max_terms: usize) -> Result<MethodResult> {
    match method {
        Method::Eq1Quad => ie_eq1(p, tol),
        Method::Eq2Quad => ie_eq2(p, tol),
        Method::SeriesEq3 => ie_series_eq3(p, max_terms),
        Method::SeriesEq4 => ie_series_eq4(p, max_terms),
        Method::MarcumEq5 => ie_marcum_eq5(p),
        Method::MarcumEq6 => ie_marcum_eq6(p),
        Method::Lemma1 => ie_lemma1(p, tol),
        Method::ClosedForm => closed_form(p)
            .map(|v| MethodResult::exact(v, Method::ClosedForm))
            .ok_or_else(|| domain("closed form needs k = 0 or x = 0")),
    }
}

fn closed_form(p: &EvalPoint) -> Option<f64> {
    if p.x == 0.0 {
        Some(0.0)
    } else if p.k == 0.0 {
        Some(-(-p.x).exp_m1())
    } else {
        None
    }
}

/// Picks a route: closed forms at `k = 0` or `x = 0`, direct quadrature at
/// `k = 1` or small `x`, the Marcum identity otherwise, and quadrature again
/// if the Marcum evaluation does not converge.
pub fn ie_auto(p: &EvalPoint) -> Result<MethodResult> {
    if let Some(v) = closed_form(p) {
        return Ok(MethodResult::exact(v, Method::ClosedForm));
    }
    if p.k >= 1.0 || p.x < MARCUM_MIN_X {
        return ie_eq1(p, ORACLE_TOL);
    }
    match ie_marcum_eq5(p) {
        Ok(r) if r.converged => Ok(r),
        Ok(_) | Err(Error::NonConvergence { .. }) | Err(Error::NotANumber(_)) => ie_eq1(p, ORACLE_TOL),
        Err(e) => Err(e),
    }
}
