//! Log-scaled real numbers.
//!
//! Quantities such as `e^{-x} I_0(kx)` at `x = 80` are products of a huge and
//! a tiny factor. [`ScaledValue`] keeps the natural-log exponent apart from a
//! bounded mantissa so those products never pass through `e^{80}`.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use std::f64::consts::E;

/// A real number stored as `mantissa * e^(log_scale)`.
///
/// After normalization the mantissa is either exactly zero or satisfies
/// `1 <= |mantissa| < e`, and `log_scale` is an integer-valued float.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScaledValue {
    mantissa: f64,
    log_scale: f64,
}

impl ScaledValue {
    pub const ZERO: ScaledValue = ScaledValue {
        mantissa: 0.0,
        log_scale: 0.0,
    };

    pub const ONE: ScaledValue = ScaledValue {
        mantissa: 1.0,
        log_scale: 0.0,
    };

    /// Builds `mantissa * e^(log_scale)` and normalizes it.
    pub fn new(mantissa: f64, log_scale: f64) -> Self {
        if mantissa == 0.0 || !mantissa.is_finite() || !log_scale.is_finite() {
            return ScaledValue {
                mantissa: if mantissa == 0.0 { 0.0 } else { mantissa },
                log_scale: if mantissa == 0.0 { 0.0 } else { log_scale },
            };
        }
        // fold the fractional part of the incoming scale into the mantissa
        let base = log_scale.floor();
        let frac = log_scale - base;
        let mantissa = if frac != 0.0 {
            mantissa * frac.exp()
        } else {
            mantissa
        };
        let shift = mantissa.abs().ln().floor();
        let mut m = if shift == 0.0 {
            mantissa
        } else if shift.abs() > 600.0 {
            // e^{-shift} alone would overflow for subnormal or huge inputs
            let half = (-0.5 * shift).exp();
            mantissa * half * half
        } else {
            mantissa * (-shift).exp()
        };
        let mut s = base + shift;
        // exp/ln rounding can leave the mantissa one ulp outside [1, e)
        if m.abs() >= E {
            m /= E;
            s += 1.0;
        } else if m.abs() < 1.0 {
            m *= E;
            s -= 1.0;
        }
        ScaledValue {
            mantissa: m,
            log_scale: s,
        }
    }

    pub fn from_real(v: f64) -> Self {
        ScaledValue::new(v, 0.0)
    }

    /// Builds `±e^(ln_abs)`; `ln_abs = -inf` gives zero.
    pub fn from_ln(ln_abs: f64, negative: bool) -> Self {
        if ln_abs == f64::NEG_INFINITY {
            return ScaledValue::ZERO;
        }
        let s = ln_abs.floor();
        let m = (ln_abs - s).exp();
        ScaledValue::new(if negative { -m } else { m }, s)
    }

    pub fn mantissa(&self) -> f64 {
        self.mantissa
    }

    pub fn log_scale(&self) -> f64 {
        self.log_scale
    }

    pub fn is_zero(&self) -> bool {
        self.mantissa == 0.0
    }

    pub fn is_negative(&self) -> bool {
        self.mantissa < 0.0
    }

    /// Collapses to an `f64`; overflows to infinity and underflows to zero
    /// exactly where the plain value would.
    pub fn to_real(&self) -> f64 {
        if self.mantissa == 0.0 {
            return 0.0;
        }
        if self.log_scale < -700.0 {
            // split the exponent so subnormal results survive
            return self.mantissa * (self.log_scale + 60.0).exp() * (-60.0f64).exp();
        }
        self.mantissa * self.log_scale.exp()
    }

    /// Natural log of the absolute value (`-inf` for zero).
    pub fn ln_abs(&self) -> f64 {
        if self.mantissa == 0.0 {
            f64::NEG_INFINITY
        } else {
            self.mantissa.abs().ln() + self.log_scale
        }
    }

    /// Multiplies by `e^(delta)` without forming `e^(delta)`.
    pub fn mul_exp(self, delta: f64) -> Self {
        if self.mantissa == 0.0 {
            return self;
        }
        ScaledValue::new(self.mantissa, self.log_scale + delta)
    }

    pub fn scale(self, factor: f64) -> Self {
        ScaledValue::new(self.mantissa * factor, self.log_scale)
    }

    pub fn abs(self) -> Self {
        ScaledValue {
            mantissa: self.mantissa.abs(),
            log_scale: self.log_scale,
        }
    }

    pub fn compare(&self, other: &ScaledValue) -> Ordering {
        let diff = *self - *other;
        diff.mantissa.partial_cmp(&0.0).unwrap_or(Ordering::Equal)
    }
}

impl Default for ScaledValue {
    fn default() -> Self {
        ScaledValue::ZERO
    }
}

impl From<f64> for ScaledValue {
    fn from(v: f64) -> Self {
        ScaledValue::from_real(v)
    }
}

/// Sum of two scaled values, aligned to the larger exponent.
impl Add for ScaledValue {
    type Output = ScaledValue;

    fn add(self, other: ScaledValue) -> ScaledValue {
        if self.mantissa == 0.0 {
            return other;
        }
        if other.mantissa == 0.0 {
            return self;
        }
        let (big, small) = if self.log_scale >= other.log_scale {
            (self, other)
        } else {
            (other, self)
        };
        let gap = small.log_scale - big.log_scale;
        if gap < -800.0 {
            return big;
        }
        ScaledValue::new(big.mantissa + small.mantissa * gap.exp(), big.log_scale)
    }
}

impl Sub for ScaledValue {
    type Output = ScaledValue;

    fn sub(self, other: ScaledValue) -> ScaledValue {
        self + -other
    }
}

impl Neg for ScaledValue {
    type Output = ScaledValue;
    fn neg(self) -> ScaledValue {
        ScaledValue {
            mantissa: -self.mantissa,
            log_scale: self.log_scale,
        }
    }
}

impl Mul for ScaledValue {
    type Output = ScaledValue;
    fn mul(self, rhs: ScaledValue) -> ScaledValue {
        ScaledValue::new(self.mantissa * rhs.mantissa, self.log_scale + rhs.log_scale)
    }
}

impl Div for ScaledValue {
    type Output = ScaledValue;
    fn div(self, rhs: ScaledValue) -> ScaledValue {
        ScaledValue::new(self.mantissa / rhs.mantissa, self.log_scale - rhs.log_scale)
    }
}

impl fmt::Display for ScaledValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}*e^{}", self.mantissa, self.log_scale)
    }
}
