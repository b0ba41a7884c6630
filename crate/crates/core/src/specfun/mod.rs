//! Special functions needed by the Ie evaluators and the bounds.

pub mod bessel;
pub mod erf;
pub mod gamma;
pub mod struve;

pub use bessel::{bessel_i, bessel_i_half, bessel_i_neg_half, bessel_i_scaled};
pub use erf::{erf, erfc, gaussian_q};
pub use gamma::ln_gamma;
pub use struve::struve_l_half;

/// `ln(1 + r(1) + r(1) r(2) + ...)` for a positive ratio sequence that
/// eventually decreases below one. The partial sum is rescaled as it grows,
/// so sums far beyond `f64::MAX` are fine.
pub(crate) fn ln_positive_series(mut ratio: impl FnMut(f64) -> f64) -> f64 {
    const RESCALE_AT: f64 = 1e280;
    const MAX_TERMS: u32 = 100_000;
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut shift = 0.0;
    for j in 1..=MAX_TERMS {
        let r = ratio(j as f64);
        term *= r;
        sum += term;
        if term < 0.5 * f64::EPSILON * sum && r < 1.0 {
            break;
        }
        if sum > RESCALE_AT {
            sum /= RESCALE_AT;
            term /= RESCALE_AT;
            shift += RESCALE_AT.ln();
        }
    }
    sum.ln() + shift
}
