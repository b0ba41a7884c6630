//! Reference implementations shared by the integration tests. They use no
//! code from the crate under test.

#![allow(dead_code)]

/// `ln n!` by direct summation (exact enough for n below a few thousand).
fn ln_factorial(n: u32) -> f64 {
    (2..=n).map(|i| (i as f64).ln()).sum()
}

/// Regularized lower incomplete gamma `P(n+1, x)` for integer `n`.
///
/// Uses `e^{-x} Σ_{m>n} x^m/m!` (all positive) when `n+1 > x`, and the
/// complement `1 - e^{-x} Σ_{m<=n} x^m/m!` otherwise.
fn lower_gamma_p(n: u32, x: f64) -> f64 {
    if x == 0.0 {
        return 0.0;
    }
    let nf = n as f64;
    if nf + 1.0 > x {
        let ln_lead = (nf + 1.0) * x.ln() - ln_factorial(n + 1) - x;
        let mut term = 1.0;
        let mut sum = 1.0;
        let mut m = nf + 1.0;
        while term > 1e-18 * sum {
            m += 1.0;
            term *= x / m;
            sum += term;
        }
        (ln_lead + sum.ln()).exp()
    } else {
        let mut term = (-x).exp();
        let mut sum = term;
        for m in 1..=n {
            term *= x / m as f64;
            sum += term;
        }
        1.0 - sum
    }
}

/// `Ie(k, x)` from termwise integration of the I₀ power series:
/// `Σ_j C(2j, j) (k/2)^{2j} P(2j+1, x)`, a sum of positive terms.
pub fn ie_reference(k: f64, x: f64) -> f64 {
    let mut sum = 0.0;
    let mut weight = 1.0; // C(2j, j) (k/2)^{2j}
    let mut j = 0u32;
    loop {
        let term = weight * lower_gamma_p(2 * j, x);
        sum += term;
        if term < 1e-17 * sum && j > 0 || j > 20_000 {
            return sum;
        }
        let jf = j as f64;
        weight *= (2.0 * jf + 1.0) * (2.0 * jf + 2.0) / ((jf + 1.0) * (jf + 1.0)) * (0.25 * k * k);
        j += 1;
    }
}

pub fn rel(got: f64, want: f64) -> f64 {
    ((got - want) / want).abs()
}

/// `n` points from `lo` to `hi` inclusive, evenly spaced in `ln x`.
pub fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let (a, b) = (lo.ln(), hi.ln());
    (0..n)
        .map(|i| (a + (b - a) * i as f64 / (n - 1) as f64).exp())
        .collect()
}

pub const GRID_K: [f64; 9] = [0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9];
pub const GRID_X: [f64; 9] = [0.5, 1.0, 2.0, 5.0, 7.0, 10.0, 20.0, 40.0, 80.0];
