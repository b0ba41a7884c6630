//! Adaptive Gauss-Kronrod quadrature.
//!
//! Finite intervals are bisected panel by panel, always splitting the panel
//! with the largest error estimate, until the summed estimate meets
//! `max(abs_tol, rel_tol * |value|)` or the subdivision cap is reached.
//! Semi-infinite intervals are covered by a sequence of doubling windows.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{domain, Error, Result};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadratureConfig {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_subdivisions: usize,
    /// Width of the first window on `[a, ∞)`; later windows double.
    pub initial_window: f64,
    /// Number of windows tried on `[a, ∞)` before giving up.
    pub max_windows: usize,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        QuadratureConfig {
            abs_tol: 1e-14,
            rel_tol: 1e-12,
            max_subdivisions: 2000,
            initial_window: 16.0,
            max_windows: 60,
        }
    }
}

impl QuadratureConfig {
    pub fn with_tolerances(abs_tol: f64, rel_tol: f64) -> Self {
        QuadratureConfig {
            abs_tol,
            rel_tol,
            ..Default::default()
        }
    }

    fn validate(&self) -> Result<()> {
        if !(self.abs_tol > 0.0) || !(self.rel_tol > 0.0) {
            return Err(domain("quadrature tolerances must be positive"));
        }
        if !(self.initial_window > 0.0) {
            return Err(domain("initial window must be positive"));
        }
        Ok(())
    }

    fn target(&self, value: f64) -> f64 {
        self.abs_tol.max(self.rel_tol * value.abs())
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadratureResult {
    pub value: f64,
    pub abs_error_estimate: f64,
    /// Bisections performed (summed over windows for semi-infinite ranges).
    pub subdivisions: usize,
    pub converged: bool,
}

/// `∫ₐᵇ f` with the default subdivision cap.
pub fn integrate_finite<F>(f: F, a: f64, b: f64, abs_tol: f64, rel_tol: f64) -> Result<QuadratureResult>
where
    F: FnMut(f64) -> f64,
{
    integrate_finite_with(f, a, b, &QuadratureConfig::with_tolerances(abs_tol, rel_tol))
}

/// `∫ₐ^∞ f` with the default window schedule.
pub fn integrate_semi_infinite<F>(f: F, a: f64, abs_tol: f64, rel_tol: f64) -> Result<QuadratureResult>
where
    F: FnMut(f64) -> f64,
{
    integrate_semi_infinite_with(f, a, &QuadratureConfig::with_tolerances(abs_tol, rel_tol))
}

pub fn integrate_finite_with<F>(mut f: F, a: f64, b: f64, cfg: &QuadratureConfig) -> Result<QuadratureResult>
where
    F: FnMut(f64) -> f64,
{
    cfg.validate()?;
    if !(a <= b) || !a.is_finite() || !b.is_finite() {
        return Err(domain(format!("integration bounds must satisfy a <= b, got [{a}, {b}]")));
    }
    if a == b {
        return Ok(QuadratureResult {
            value: 0.0,
            abs_error_estimate: 0.0,
            subdivisions: 0,
            converged: true,
        });
    }

    let mut heap = BinaryHeap::new();
    let first = gauss_kronrod21(&mut f, a, b)?;
    let mut value = first.value;
    let mut error = first.error;
    heap.push(first);
    let mut subdivisions = 0;

    while error > cfg.target(value) && subdivisions < cfg.max_subdivisions {
        let worst = heap.pop().expect("heap holds at least one panel");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            // panel is at floating-point resolution
            heap.push(worst);
            break;
        }
        let left = gauss_kronrod21(&mut f, worst.a, mid)?;
        let right = gauss_kronrod21(&mut f, mid, worst.b)?;
        value += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        subdivisions += 1;
    }

    // resum to shed drift from the running updates
    let (mut value, mut error) = (0.0, 0.0);
    let mut comp = 0.0;
    for p in heap.iter() {
        let y = p.value - comp;
        let t = value + y;
        comp = (t - value) - y;
        value = t;
        error += p.error;
    }
    Ok(QuadratureResult {
        value,
        abs_error_estimate: error,
        subdivisions,
        converged: error <= cfg.target(value),
    })
}

pub fn integrate_semi_infinite_with<F>(mut f: F, a: f64, cfg: &QuadratureConfig) -> Result<QuadratureResult>
where
    F: FnMut(f64) -> f64,
{
    cfg.validate()?;
    if !a.is_finite() {
        return Err(domain(format!("lower bound must be finite, got {a}")));
    }
    let tail_tol = cfg.abs_tol / 10.0;
    let mut lo = a;
    let mut width = cfg.initial_window;
    let mut value = 0.0;
    let mut error = 0.0;
    let mut subdivisions = 0;
    let mut all_converged = true;
    let mut quiet_windows = 0;

    for _ in 0..cfg.max_windows {
        let hi = lo + width;
        let part = integrate_finite_with(&mut f, lo, hi, cfg)?;
        value += part.value;
        error += part.abs_error_estimate;
        subdivisions += part.subdivisions;
        all_converged &= part.converged;
        if part.value.abs() + part.abs_error_estimate < tail_tol {
            quiet_windows += 1;
            if quiet_windows >= 2 {
                return Ok(QuadratureResult {
                    value,
                    abs_error_estimate: error,
                    subdivisions,
                    converged: all_converged && error <= cfg.target(value),
                });
            }
        } else {
            quiet_windows = 0;
        }
        lo = hi;
        width *= 2.0;
    }
    Ok(QuadratureResult {
        value,
        abs_error_estimate: error,
        subdivisions,
        converged: false,
    })
}

#[derive(Clone, Copy, Debug)]
struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.error.total_cmp(&other.error) == Ordering::Equal
    }
}

impl Eq for Panel {}

impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

// 21-point Kronrod extension of the 10-point Gauss rule (QUADPACK qk21).
#[allow(clippy::excessive_precision)]
const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];
#[allow(clippy::excessive_precision)]
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];
#[allow(clippy::excessive_precision)]
const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_958_109_831_074,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

fn gauss_kronrod21<F>(f: &mut F, a: f64, b: f64) -> Result<Panel>
where
    F: FnMut(f64) -> f64,
{
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut eval = |t: f64| -> Result<f64> {
        let v = f(t);
        if v.is_nan() {
            Err(Error::NotANumber(t))
        } else {
            Ok(v)
        }
    };

    let mut fv1 = [0.0; 10];
    let mut fv2 = [0.0; 10];
    let f_center = eval(center)?;
    // the 10-point Gauss rule has no center node
    let mut res_gauss = 0.0;
    let mut res_kronrod = f_center * WGK[10];
    let mut res_abs = res_kronrod.abs();

    for (j, wg) in WG.iter().enumerate() {
        let jtw = 2 * j + 1;
        let dx = half * XGK[jtw];
        let (f1, f2) = (eval(center - dx)?, eval(center + dx)?);
        fv1[jtw] = f1;
        fv2[jtw] = f2;
        res_gauss += wg * (f1 + f2);
        res_kronrod += WGK[jtw] * (f1 + f2);
        res_abs += WGK[jtw] * (f1.abs() + f2.abs());
    }
    for j in 0..5 {
        let jtwm1 = 2 * j;
        let dx = half * XGK[jtwm1];
        let (f1, f2) = (eval(center - dx)?, eval(center + dx)?);
        fv1[jtwm1] = f1;
        fv2[jtwm1] = f2;
        res_kronrod += WGK[jtwm1] * (f1 + f2);
        res_abs += WGK[jtwm1] * (f1.abs() + f2.abs());
    }

    let mean = 0.5 * res_kronrod;
    let mut res_asc = WGK[10] * (f_center - mean).abs();
    for j in 0..10 {
        res_asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let abs_half = half.abs();
    let value = res_kronrod * half;
    let error = rescale_error(
        ((res_kronrod - res_gauss) * half).abs(),
        res_abs * abs_half,
        res_asc * abs_half,
    );
    Ok(Panel { a, b, value, error })
}

/// QUADPACK's empirical rescaling of the raw Gauss/Kronrod difference.
fn rescale_error(raw: f64, res_abs: f64, res_asc: f64) -> f64 {
    let mut err = raw;
    if res_asc != 0.0 && err != 0.0 {
        let scale = (200.0 * err / res_asc).powf(1.5);
        err = if scale < 1.0 { res_asc * scale } else { res_asc };
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * res_abs);
    }
    err
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::bessel_i_scaled;

    fn ie_integrand(k: f64) -> impl Fn(f64) -> f64 {
        move |t: f64| (-(1.0 - k) * t).exp() * bessel_i_scaled(0, k * t).unwrap().to_real()
    }

    #[test]
    fn constant_integrand() {
        let r = integrate_finite(|_| 1.0, 0.0, 1.0, 1e-14, 1e-12).unwrap();
        assert!(r.converged);
        assert!((r.value - 1.0).abs() < 1e-15);
    }

    #[test]
    fn exponential_on_finite_interval() {
        for &x in &[0.1f64, 1.0, 7.0, 80.0] {
            let r = integrate_finite(|t: f64| (-t).exp(), 0.0, x, 1e-14, 1e-12).unwrap();
            let want = -(-x).exp_m1();
            assert!(r.converged);
            assert!((r.value - want).abs() <= 1e-12 * want, "x={x}");
        }
    }

    #[test]
    fn empty_interval_and_bad_bounds() {
        let r = integrate_finite(|t| t, 3.0, 3.0, 1e-14, 1e-12).unwrap();
        assert_eq!(r.value, 0.0);
        assert!(r.converged);
        assert!(integrate_finite(|t| t, 3.0, 1.0, 1e-14, 1e-12).is_err());
        assert!(integrate_finite(|t| t, 0.0, 1.0, 0.0, 1e-12).is_err());
    }

    #[test]
    fn nan_integrand_is_an_error() {
        let r = integrate_finite(|t: f64| if t > 0.5 { f64::NAN } else { t }, 0.0, 1.0, 1e-14, 1e-12);
        assert!(matches!(r, Err(Error::NotANumber(_))));
    }

    #[test]
    fn non_convergence_is_reported() {
        let cfg = QuadratureConfig {
            max_subdivisions: 3,
            ..Default::default()
        };
        let r = integrate_finite_with(|t: f64| (100.0 * t).sin(), 0.0, 100.0, &cfg).unwrap();
        assert!(!r.converged);
        assert!(r.subdivisions <= 3);
    }

    #[test]
    fn self_refinement_on_ie_integrand() {
        let f = ie_integrand(0.5);
        let coarse = integrate_finite(&f, 0.0, 7.0, 1e-14, 1e-12).unwrap();
        let fine_cfg = QuadratureConfig {
            abs_tol: 1e-15,
            rel_tol: 1e-13,
            max_subdivisions: 4000,
            ..Default::default()
        };
        let fine = integrate_finite_with(&f, 0.0, 7.0, &fine_cfg).unwrap();
        assert!(coarse.converged && fine.converged);
        assert!((coarse.value - fine.value).abs() <= coarse.abs_error_estimate.max(1e-15));
        assert!((coarse.value - fine.value).abs() <= 1e-12 * fine.value);
    }

    #[test]
    fn semi_infinite_tails() {
        let r = integrate_semi_infinite(|t: f64| (-t).exp(), 0.0, 1e-14, 1e-12).unwrap();
        assert!(r.converged);
        assert!((r.value - 1.0).abs() < 1e-13);
        for &b in &[0.0f64, 0.5, 2.0, 5.0] {
            let r = integrate_semi_infinite(|t: f64| t * (-0.5 * t * t).exp(), b, 1e-14, 1e-12).unwrap();
            let want = (-0.5 * b * b).exp();
            assert!(r.converged);
            assert!((r.value - want).abs() < 1e-13, "b={b}");
        }
    }

    #[test]
    fn semi_infinite_gives_up_on_slow_tail() {
        let cfg = QuadratureConfig {
            max_windows: 5,
            ..Default::default()
        };
        let r = integrate_semi_infinite_with(|t: f64| 1.0 / (1.0 + t), 0.0, &cfg).unwrap();
        assert!(!r.converged);
    }

    #[test]
    fn linearity() {
        let f = ie_integrand(0.3);
        let base = integrate_finite(&f, 0.0, 10.0, 1e-15, 1e-14).unwrap().value;
        for &alpha in &[-2.0, 0.5, 10.0] {
            let scaled = integrate_finite(|t| alpha * f(t), 0.0, 10.0, 1e-15, 1e-14).unwrap().value;
            assert!((scaled - alpha * base).abs() <= 1e-13 * (alpha * base).abs());
        }
    }

    #[test]
    fn interval_additivity() {
        let f = ie_integrand(0.7);
        let ab = integrate_finite(&f, 0.0, 3.0, 1e-14, 1e-12).unwrap();
        let bc = integrate_finite(&f, 3.0, 11.0, 1e-14, 1e-12).unwrap();
        let ac = integrate_finite(&f, 0.0, 11.0, 1e-14, 1e-12).unwrap();
        let slack = ab.abs_error_estimate + bc.abs_error_estimate + ac.abs_error_estimate;
        assert!((ab.value + bc.value - ac.value).abs() <= slack.max(4.0 * f64::EPSILON * ac.value));
    }

    #[test]
    fn tightening_stays_within_loose_estimate() {
        let f = ie_integrand(0.9);
        let loose = integrate_finite(&f, 0.0, 20.0, 1e-8, 1e-8).unwrap();
        let tight = integrate_finite(&f, 0.0, 20.0, 1e-14, 1e-13).unwrap();
        assert!((loose.value - tight.value).abs() <= loose.abs_error_estimate);
    }
}
