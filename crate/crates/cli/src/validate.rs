//! Property suites run by `validate`, each reporting pass/fail and its
//! worst-case margin (positive means the property holds with room to spare).

use std::fmt;
use std::str::FromStr;

use rice_ie::bounds;
use rice_ie::ie::{self, ab_params, damped_i0, EvalPoint, Method, DEFAULT_MAX_TERMS};
use rice_ie::marcum::{marcum_q1, marcum_q_half, marcum_q_m, MarcumArgs, MarcumOrder};
use rice_ie::specfun::{bessel_i, bessel_i_half};
use rice_ie::{Error, Result};

use crate::grid::{spaced, Spacing};

/// Absolute slack added to the reference estimate when checking the bracket.
pub const BRACKET_SLACK: f64 = 1e-10;
/// Relative agreement of the series routes with the reference.
pub const SERIES_AGREEMENT: f64 = 1e-8;
/// Relative agreement of the integral and Marcum routes with the reference.
pub const ROUTE_AGREEMENT: f64 = 1e-9;
/// Absolute residual of `Q₁(a,b) + Q₁(b,a) - 1 - e^{-x}I₀(kx)`.
pub const MARCUM_IDENTITY: f64 = 1e-10;
/// Closed-form against quadrature `Q_{1/2}`.
pub const HALF_ORDER_AGREEMENT: f64 = 1e-10;
/// Minimum gap in the order-monotonicity chains.
pub const ORDER_MARGIN: f64 = 1e-12;
/// Calibrated ceilings on `max_k ε_ar` of the lower bound.
pub const CEILING_X40: f64 = 1e-2;
pub const CEILING_X80: f64 = 1e-3;
/// Integral form of the upper bound against its closed form.
pub const INTEGRAL_FORM: f64 = 1e-10;
/// Routes against the elementary values at `k = 0` and `x = 0`.
pub const CLOSED_FORM: f64 = 1e-12;
/// Relative collapse of both bounds at `k = 0`.
pub const COLLAPSE_REL: f64 = 1e-13;
/// Absolute collapse of both bounds at `x = 0`.
pub const COLLAPSE_ABS: f64 = 1e-15;
/// Allowed increase of `ε_ar` along `x` attributable to reference noise.
pub const TIGHTENING_NOISE: f64 = 1e-10;
/// Relative distance from `1/√(1-k²)` at `x = 200`.
pub const LIMIT_REL: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Level {
    Quick,
    Full,
}

impl FromStr for Level {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "quick" => Ok(Level::Quick),
            "full" => Ok(Level::Full),
            other => Err(Error::Domain(format!("unknown level '{other}'"))),
        }
    }
}

/// The bound implementations under test; swapped in by mutation checks.
#[derive(Clone, Copy)]
pub struct BoundFns {
    pub upper: fn(&EvalPoint) -> f64,
    pub lower: fn(&EvalPoint) -> Result<f64>,
}

impl Default for BoundFns {
    fn default() -> Self {
        BoundFns {
            upper: bounds::upper_bound,
            lower: bounds::lower_bound,
        }
    }
}

impl BoundFns {
    fn lower_or_nan(&self, p: &EvalPoint) -> f64 {
        (self.lower)(p).unwrap_or(f64::NAN)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SuiteResult {
    pub name: &'static str,
    pub passed: bool,
    pub worst_margin: f64,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    pub level: Level,
    pub suites: Vec<SuiteResult>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.suites.iter().all(|s| s.passed)
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.suites {
            writeln!(
                f,
                "{} {:<28} worst margin {:>12.4e}  {}",
                if s.passed { "PASS" } else { "FAIL" },
                s.name,
                s.worst_margin,
                s.detail
            )?;
        }
        let failed = self.suites.iter().filter(|s| !s.passed).count();
        write!(f, "{} suites, {} failed", self.suites.len(), failed)
    }
}

/// Tracks the smallest margin seen and the first violation.
struct Tracker {
    name: &'static str,
    worst: f64,
    checks: usize,
    failures: usize,
    first_failure: Option<String>,
    error: Option<String>,
}

impl Tracker {
    fn new(name: &'static str) -> Self {
        Tracker {
            name,
            worst: f64::INFINITY,
            checks: 0,
            failures: 0,
            first_failure: None,
            error: None,
        }
    }

    /// Records a margin; NaN counts as a violation.
    fn check(&mut self, margin: f64, label: impl FnOnce() -> String) {
        self.checks += 1;
        let m = if margin.is_nan() { f64::NEG_INFINITY } else { margin };
        self.worst = self.worst.min(m);
        if !(margin > 0.0) {
            self.failures += 1;
            self.first_failure.get_or_insert_with(label);
        }
    }

    fn absorb<T>(&mut self, r: Result<T>) -> Option<T> {
        match r {
            Ok(v) => Some(v),
            Err(e) => {
                self.failures += 1;
                self.worst = f64::NEG_INFINITY;
                self.error.get_or_insert_with(|| e.to_string());
                None
            }
        }
    }

    fn finish(self, extra: String) -> SuiteResult {
        let mut detail = format!("{} checks", self.checks);
        if !extra.is_empty() {
            detail.push_str(", ");
            detail.push_str(&extra);
        }
        if let Some(e) = &self.error {
            detail.push_str(&format!(", error: {e}"));
        }
        if let Some(first) = &self.first_failure {
            detail.push_str(&format!(", {} violations, first at {first}", self.failures));
        }
        SuiteResult {
            name: self.name,
            passed: self.failures == 0 && self.checks > 0,
            worst_margin: self.worst,
            detail,
        }
    }
}

fn pt(k: f64, x: f64) -> EvalPoint {
    EvalPoint::new(k, x).expect("suite grids lie in the domain")
}

fn reference(p: &EvalPoint) -> Result<(f64, f64)> {
    let r = bounds::oracle(p, ie::ORACLE_TOL)?;
    Ok((r.value, r.error_estimate))
}

fn twentieths() -> Vec<f64> {
    (1..=19).map(|i| i as f64 / 20.0).collect()
}

struct Grids {
    bracket_x: Vec<f64>,
    route_k: Vec<f64>,
    route_x: Vec<f64>,
    crossover_x: Vec<f64>,
    eps_k: Vec<f64>,
}

impl Grids {
    fn for_level(level: Level) -> Self {
        let nine_k: Vec<f64> = (1..=9).map(|i| i as f64 / 10.0).collect();
        let nine_x = vec![0.5, 1.0, 2.0, 5.0, 7.0, 10.0, 20.0, 40.0, 80.0];
        match level {
            Level::Full => Grids {
                bracket_x: spaced(0.1, 100.0, 50, Spacing::Log),
                route_k: nine_k,
                route_x: nine_x,
                crossover_x: spaced(0.1, 40.0, 200, Spacing::Log),
                eps_k: (5..=95).map(|i| i as f64 / 100.0).collect(),
            },
            Level::Quick => Grids {
                bracket_x: spaced(0.1, 100.0, 8, Spacing::Log),
                route_k: vec![0.1, 0.5, 0.9],
                route_x: vec![0.5, 7.0, 80.0],
                crossover_x: spaced(0.1, 40.0, 40, Spacing::Log),
                eps_k: twentieths(),
            },
        }
    }
}

/// Runs every suite of `level` against the given bounds.
pub fn run(level: Level, fns: &BoundFns) -> Report {
    let g = Grids::for_level(level);
    let mut suites = vec![
        bracketing(fns, &twentieths(), &g.bracket_x, "bracketing"),
        bracketing(fns, &(1..=9).map(|i| i as f64 / 10.0).collect::<Vec<_>>(), &[7.0], "bracketing at x=7"),
        route_agreement(&g.route_k, &g.route_x),
        marcum_consistency(&g.route_k, &g.route_x),
        order_monotonicity(),
        crossover(fns, &g.crossover_x),
        approximation(fns, &g.eps_k),
        integral_forms(fns, &g.route_k, &g.route_x),
        closed_forms(fns),
    ];
    if level == Level::Full {
        suites.push(tightening(fns));
        suites.push(limits_and_growth());
    }
    Report { level, suites }
}

pub fn bracketing(fns: &BoundFns, ks: &[f64], xs: &[f64], name: &'static str) -> SuiteResult {
    let mut t = Tracker::new(name);
    let mut resolved = 0usize;
    for &k in ks {
        for &x in xs {
            let p = pt(k, x);
            let Some((o, est)) = t.absorb(reference(&p)) else { continue };
            let slack = BRACKET_SLACK + est;
            let (lo, hi) = (fns.lower_or_nan(&p), (fns.upper)(&p));
            t.check((o + slack - lo).min(hi + slack - o), || format!("k={k} x={x}"));
            if o - lo > slack && hi - o > slack {
                resolved += 1;
            }
        }
    }
    t.finish(format!("{resolved} with both gaps beyond the slack"))
}

pub fn route_agreement(ks: &[f64], xs: &[f64]) -> SuiteResult {
    let mut t = Tracker::new("route agreement");
    let mut skipped = 0usize;
    for &k in ks {
        for &x in xs {
            let p = pt(k, x);
            let Some((o, _)) = t.absorb(reference(&p)) else { continue };
            for m in Method::ROUTES.iter().filter(|m| m.applies_to(&p)) {
                let Some(r) = t.absorb(ie::evaluate(*m, &p, ie::ORACLE_TOL, DEFAULT_MAX_TERMS)) else {
                    continue;
                };
                if !r.converged {
                    skipped += 1;
                    continue;
                }
                let tol = if m.is_series() { SERIES_AGREEMENT } else { ROUTE_AGREEMENT };
                t.check(tol - ((r.value - o) / o).abs(), || format!("{m} k={k} x={x}"));
            }
        }
    }
    t.finish(format!("{skipped} non-converged results skipped"))
}

pub fn marcum_consistency(ks: &[f64], xs: &[f64]) -> SuiteResult {
    let mut t = Tracker::new("marcum consistency");
    for &k in ks {
        for &x in xs {
            let p = pt(k, x);
            let ab = ab_params(&p);
            let qab = t.absorb(MarcumArgs::new(ab.a, ab.b).and_then(marcum_q1));
            let qba = t.absorb(MarcumArgs::new(ab.b, ab.a).and_then(marcum_q1));
            if let (Some(qab), Some(qba)) = (qab, qba) {
                let residual = (qab + qba - 1.0 - damped_i0(&p).to_real()).abs();
                t.check(MARCUM_IDENTITY - residual, || format!("k={k} x={x}"));
            }
        }
    }
    let grid = [0.5, 1.0, 2.0, 4.0];
    for &a in &grid {
        for &b in &grid {
            let args = MarcumArgs::new(a, b).expect("positive grid");
            if let Some(q) = t.absorb(marcum_q_m(MarcumOrder::Half, args)) {
                t.check(HALF_ORDER_AGREEMENT - (q - marcum_q_half(args)).abs(), || {
                    format!("Q_1/2 a={a} b={b}")
                });
            }
        }
    }
    t.finish(String::new())
}

/// `I_ν(x)` for `ν` a nonnegative multiple of one half.
fn bessel_i_any(twice_nu: u32, x: f64) -> Result<f64> {
    if twice_nu.is_multiple_of(2) {
        Ok(bessel_i(twice_nu / 2, x)?.to_real())
    } else {
        Ok(bessel_i_half(twice_nu / 2, x)?.mul_exp(x).to_real())
    }
}

pub fn order_monotonicity() -> SuiteResult {
    let mut t = Tracker::new("order monotonicity");
    for &x in &[0.5, 1.0, 2.0, 5.0, 10.0, 50.0] {
        // ν = 0, 1/2, …, 3
        let values: Vec<Option<f64>> = (0..=6).map(|n| t.absorb(bessel_i_any(n, x))).collect();
        for (i, w) in values.windows(2).enumerate() {
            if let [Some(a), Some(b)] = w {
                t.check(a - b - ORDER_MARGIN, || format!("I at x={x}, order {}/2", i + 1));
            }
        }
    }
    let grid = [0.5, 1.0, 2.0, 4.0];
    for &a in &grid {
        for &b in &grid {
            let args = MarcumArgs::new(a, b).expect("positive grid");
            let one = t.absorb(marcum_q1(args));
            let three = t.absorb(marcum_q_m(MarcumOrder::ThreeHalves, args));
            if let (Some(one), Some(three)) = (one, three) {
                let half = marcum_q_half(args);
                t.check((one - half).min(three - one) - ORDER_MARGIN, || format!("Q_m a={a} b={b}"));
            }
        }
    }
    t.finish(String::new())
}

fn eps_pair(fns: &BoundFns, p: &EvalPoint) -> Result<(f64, f64)> {
    let (o, _) = reference(p)?;
    Ok((((fns.upper)(p) - o).abs() / o, (fns.lower_or_nan(p) - o).abs() / o))
}

pub fn crossover(fns: &BoundFns, xs: &[f64]) -> SuiteResult {
    let mut t = Tracker::new("crossover at k=0.5");
    let diffs: Vec<f64> = xs
        .iter()
        .filter_map(|&x| t.absorb(eps_pair(fns, &pt(0.5, x))))
        .map(|(u, l)| u - l)
        .collect();
    if diffs.len() != xs.len() {
        return t.finish(String::new());
    }
    let changes = diffs.windows(2).filter(|w| (w[0] < 0.0) != (w[1] < 0.0)).count();
    let first = diffs[0];
    let last = *diffs.last().expect("non-empty grid");
    t.check(-first, || "upper bound not tighter at the smallest x".into());
    t.check(last, || "lower bound not tighter at the largest x".into());
    t.check(if changes == 1 { 1.0 } else { -(changes as f64) }, || {
        format!("{changes} sign changes")
    });
    let at = diffs
        .windows(2)
        .position(|w| (w[0] < 0.0) != (w[1] < 0.0))
        .map(|i| format!(" between x={:.4} and x={:.4}", xs[i], xs[i + 1]))
        .unwrap_or_default();
    t.finish(format!("{changes} sign change(s){at}"))
}

pub fn approximation(fns: &BoundFns, ks: &[f64]) -> SuiteResult {
    let mut t = Tracker::new("lower-bound accuracy");
    let worst = |x: f64, t: &mut Tracker| -> f64 {
        ks.iter()
            .filter_map(|&k| t.absorb(eps_pair(fns, &pt(k, x))))
            .map(|(_, l)| if l.is_nan() { f64::INFINITY } else { l })
            .fold(0.0, f64::max)
    };
    let m40 = worst(40.0, &mut t);
    let m80 = worst(80.0, &mut t);
    t.check(CEILING_X40 - m40, || format!("x=40 max {m40:e}"));
    t.check(CEILING_X80 - m80, || format!("x=80 max {m80:e}"));
    t.check(m40 - m80, || "no improvement from x=40 to x=80".into());
    t.finish(format!("max eps_ar_lower {m40:.4e} at x=40, {m80:.4e} at x=80"))
}

pub fn integral_forms(fns: &BoundFns, ks: &[f64], xs: &[f64]) -> SuiteResult {
    let mut t = Tracker::new("integral forms");
    for &k in ks {
        for &x in xs {
            let p = pt(k, x);
            if let Some(q) = t.absorb(bounds::upper_bound_integral_form(&p, 1e-13)) {
                t.check(INTEGRAL_FORM - (q.value - (fns.upper)(&p)).abs(), || {
                    format!("upper k={k} x={x}")
                });
            }
            if x <= 20.0 {
                let q = t.absorb(bounds::lower_bound_integral_form(&p, ie::ORACLE_TOL));
                let o = t.absorb(reference(&p));
                if let (Some(q), Some((o, _))) = (q, o) {
                    t.check(o - q.value, || format!("three-halves form k={k} x={x}"));
                }
            }
        }
    }
    t.finish(String::new())
}

pub fn closed_forms(fns: &BoundFns) -> SuiteResult {
    let mut t = Tracker::new("closed forms");
    for &x in &[0.1f64, 1.0, 10.0, 80.0] {
        let p = pt(0.0, x);
        let want = -(-x).exp_m1();
        for m in Method::ROUTES.iter().filter(|m| m.applies_to(&p)) {
            if let Some(r) = t.absorb(ie::evaluate(*m, &p, ie::ORACLE_TOL, DEFAULT_MAX_TERMS)) {
                t.check(CLOSED_FORM - ((r.value - want) / want).abs(), || format!("{m} k=0 x={x}"));
            }
        }
        let up = ((fns.upper)(&p) - want).abs() / want;
        let lo = (fns.lower_or_nan(&p) - want).abs() / want;
        t.check(COLLAPSE_REL - up.max(lo), || format!("bounds at k=0 x={x}"));
    }
    for &k in &[0.0, 0.3, 0.7, 0.95] {
        let p = pt(k, 0.0);
        for m in Method::ROUTES.iter().filter(|m| m.applies_to(&p)) {
            if let Some(r) = t.absorb(ie::evaluate(*m, &p, ie::ORACLE_TOL, DEFAULT_MAX_TERMS)) {
                t.check(CLOSED_FORM - r.value.abs(), || format!("{m} k={k} x=0"));
            }
        }
        let worst = (fns.upper)(&p).abs().max(fns.lower_or_nan(&p).abs());
        t.check(COLLAPSE_ABS - worst, || format!("bounds at k={k} x=0"));
    }
    t.finish(String::new())
}

pub fn tightening(fns: &BoundFns) -> SuiteResult {
    let mut t = Tracker::new("lower-bound tightening");
    let xs = spaced(10.0, 100.0, 20, Spacing::Log);
    for &k in &[0.3, 0.5, 0.7] {
        let eps: Vec<Option<f64>> = xs.iter().map(|&x| t.absorb(eps_pair(fns, &pt(k, x))).map(|e| e.1)).collect();
        for (i, w) in eps.windows(2).enumerate() {
            if let [Some(a), Some(b)] = w {
                t.check(a + TIGHTENING_NOISE - b, || format!("k={k} x={:.3}", xs[i + 1]));
            }
        }
    }
    t.finish(String::new())
}

pub fn limits_and_growth() -> SuiteResult {
    let mut t = Tracker::new("limit and growth in x");
    for &k in &[0.0f64, 0.1, 0.3, 0.5, 0.7, 0.9] {
        let cap = 1.0 / ((1.0 - k) * (1.0 + k)).sqrt();
        if let Some((o, _)) = t.absorb(reference(&pt(k, 200.0))) {
            t.check(LIMIT_REL - ((o - cap) / cap).abs(), || format!("limit k={k}"));
        }
    }
    let xs = spaced(0.01, 20.0, 40, Spacing::Log);
    for &k in &[0.1, 0.5, 0.9, 1.0] {
        let values: Vec<Option<f64>> = xs.iter().map(|&x| t.absorb(reference(&pt(k, x))).map(|r| r.0)).collect();
        for (i, w) in values.windows(2).enumerate() {
            if let [Some(a), Some(b)] = w {
                t.check(b - a, || format!("growth k={k} x={:.3}", xs[i + 1]));
            }
        }
    }
    t.finish(String::new())
}
