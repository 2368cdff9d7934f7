//! Extended-precision real numbers.
//!
//! [`ExtReal`] wraps an MPFR float. Binary operations produce a result at the
//! larger of the two operand precisions; mixed operations with `f64`/`i32`
//! keep the precision of the extended operand. Only exactly representable
//! `f64` constants should be mixed in.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Div, DivAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use rug::float::Constant;
use rug::ops::Pow;
use rug::Float;

use crate::error::{Error, Result};

/// Smallest working precision accepted anywhere in the crate.
pub const MIN_PRECISION: u32 = 64;

/// Default working precision in bits.
pub const DEFAULT_PRECISION: u32 = 256;

#[derive(Clone, Debug)]
pub struct ExtReal(Float);

impl ExtReal {
    fn check(prec: u32) -> u32 {
        prec.max(MIN_PRECISION)
    }

    pub fn from_f64(value: f64, prec: u32) -> Self {
        ExtReal(Float::with_val(Self::check(prec), value))
    }

    pub fn from_i64(value: i64, prec: u32) -> Self {
        ExtReal(Float::with_val(Self::check(prec), value))
    }

    /// Exact ratio `num/den` rounded once at `prec`.
    pub fn ratio(num: i64, den: i64, prec: u32) -> Self {
        let prec = Self::check(prec);
        ExtReal(Float::with_val(prec, num) / Float::with_val(prec, den))
    }

    pub fn zero(prec: u32) -> Self {
        Self::from_i64(0, prec)
    }

    pub fn one(prec: u32) -> Self {
        Self::from_i64(1, prec)
    }

    pub fn pi(prec: u32) -> Self {
        ExtReal(Float::with_val(Self::check(prec), Constant::Pi))
    }

    pub fn sqrt2(prec: u32) -> Self {
        Self::from_i64(2, prec).sqrt()
    }

    /// `2^exp` exactly.
    pub fn pow2(exp: i32, prec: u32) -> Self {
        let mut f = Float::with_val(Self::check(prec), 1);
        f <<= exp;
        ExtReal(f)
    }

    /// Parses a decimal literal such as `"0.1"` or `"-2.5e3"`, rounding once
    /// at `prec`.
    pub fn parse(text: &str, prec: u32) -> Result<Self> {
        let parsed = Float::parse(text.trim()).map_err(|e| Error::Parse {
            input: text.to_string(),
            reason: e.to_string(),
        })?;
        Ok(ExtReal(Float::with_val(Self::check(prec), parsed)))
    }

    pub fn from_float(f: Float) -> Self {
        ExtReal(f)
    }

    pub fn as_float(&self) -> &Float {
        &self.0
    }

    pub fn into_float(self) -> Float {
        self.0
    }

    pub fn prec(&self) -> u32 {
        self.0.prec()
    }

    /// The same value rounded (or exactly widened) to `prec` bits.
    pub fn with_prec(&self, prec: u32) -> Self {
        ExtReal(Float::with_val(Self::check(prec), &self.0))
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_finite(&self) -> bool {
        self.0.is_finite()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_sign_positive() && !self.0.is_zero() && !self.0.is_nan()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_sign_negative() && !self.0.is_zero() && !self.0.is_nan()
    }

    pub fn abs(&self) -> Self {
        ExtReal(Float::with_val(self.prec(), self.0.abs_ref()))
    }

    pub fn sqrt(&self) -> Self {
        ExtReal(Float::with_val(self.prec(), self.0.sqrt_ref()))
    }

    pub fn exp(&self) -> Self {
        ExtReal(Float::with_val(self.prec(), self.0.exp_ref()))
    }

    pub fn ln(&self) -> Self {
        ExtReal(Float::with_val(self.prec(), self.0.ln_ref()))
    }

    pub fn recip(&self) -> Self {
        ExtReal(Float::with_val(self.prec(), self.0.recip_ref()))
    }

    pub fn square(&self) -> Self {
        ExtReal(Float::with_val(self.prec(), self.0.square_ref()))
    }

    pub fn powi(&self, exp: i32) -> Self {
        ExtReal(Float::with_val(self.prec(), (&self.0).pow(exp)))
    }

    pub fn powf(&self, exp: &ExtReal) -> Self {
        let prec = self.prec().max(exp.prec());
        ExtReal(Float::with_val(prec, (&self.0).pow(&exp.0)))
    }

    /// Euler's gamma function evaluated by MPFR; see [`crate::numerics::gamma`]
    /// for the checked public entry point.
    pub(crate) fn gamma_unchecked(&self) -> Self {
        ExtReal(Float::with_val(self.prec(), self.0.gamma_ref()))
    }

    pub fn max(self, other: Self) -> Self {
        if other > self {
            other
        } else {
            self
        }
    }

    pub fn min(self, other: Self) -> Self {
        if other < self {
            other
        } else {
            self
        }
    }

    /// Base-2 exponent `e` such that `2^(e-1) <= |x| < 2^e`, or `None` for zero.
    pub fn exponent(&self) -> Option<i32> {
        self.0.get_exp()
    }

    /// Scientific rendering with exactly `digits` significant digits, e.g.
    /// `8.862e-1`. Identical values and digit counts render identically.
    pub fn to_decimal(&self, digits: usize) -> String {
        format!("{:.*e}", digits.max(1), self.0)
    }
}

/// Significant decimal digits carried by `prec` bits, `ceil(prec * log10 2)`.
pub fn decimal_digits(prec: u32) -> usize {
    (prec as f64 * std::f64::consts::LOG10_2).ceil() as usize
}

/// `|a - b|` as `f64`, convenient for tolerance checks.
pub fn abs_diff(a: &ExtReal, b: &ExtReal) -> f64 {
    (a - b).abs().to_f64()
}

/// `|a - b| / max(|b|, tiny)` as `f64`.
pub fn rel_diff(a: &ExtReal, b: &ExtReal) -> f64 {
    let scale = b.abs().to_f64().max(f64::MIN_POSITIVE);
    abs_diff(a, b) / scale
}

impl fmt::Display for ExtReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_decimal(decimal_digits(self.prec())))
    }
}

impl PartialEq for ExtReal {
    fn eq(&self, other: &Self) -> bool {
        self.0 == other.0
    }
}

impl PartialOrd for ExtReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.0.partial_cmp(&other.0)
    }
}

impl PartialEq<f64> for ExtReal {
    fn eq(&self, other: &f64) -> bool {
        self.0 == *other
    }
}

impl PartialOrd<f64> for ExtReal {
    fn partial_cmp(&self, other: &f64) -> Option<Ordering> {
        self.0.partial_cmp(other)
    }
}

impl Neg for ExtReal {
    type Output = ExtReal;
    fn neg(self) -> ExtReal {
        ExtReal(-self.0)
    }
}

impl Neg for &ExtReal {
    type Output = ExtReal;
    fn neg(self) -> ExtReal {
        ExtReal(Float::with_val(self.prec(), -&self.0))
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident, $assign_trait:ident, $assign:ident, $op:tt, $aop:tt) => {
        impl $trait<&ExtReal> for &ExtReal {
            type Output = ExtReal;
            fn $method(self, rhs: &ExtReal) -> ExtReal {
                let prec = self.prec().max(rhs.prec());
                ExtReal(Float::with_val(prec, &self.0 $op &rhs.0))
            }
        }

        impl $trait<ExtReal> for ExtReal {
            type Output = ExtReal;
            fn $method(self, rhs: ExtReal) -> ExtReal {
                (&self).$method(&rhs)
            }
        }

        impl $trait<&ExtReal> for ExtReal {
            type Output = ExtReal;
            fn $method(self, rhs: &ExtReal) -> ExtReal {
                (&self).$method(rhs)
            }
        }

        impl $trait<ExtReal> for &ExtReal {
            type Output = ExtReal;
            fn $method(self, rhs: ExtReal) -> ExtReal {
                self.$method(&rhs)
            }
        }

        impl $trait<f64> for &ExtReal {
            type Output = ExtReal;
            fn $method(self, rhs: f64) -> ExtReal {
                ExtReal(Float::with_val(self.prec(), &self.0 $op rhs))
            }
        }

        impl $trait<f64> for ExtReal {
            type Output = ExtReal;
            fn $method(self, rhs: f64) -> ExtReal {
                (&self).$method(rhs)
            }
        }

        impl $trait<&ExtReal> for f64 {
            type Output = ExtReal;
            fn $method(self, rhs: &ExtReal) -> ExtReal {
                ExtReal(Float::with_val(rhs.prec(), self $op &rhs.0))
            }
        }

        impl $trait<ExtReal> for f64 {
            type Output = ExtReal;
            fn $method(self, rhs: ExtReal) -> ExtReal {
                self.$method(&rhs)
            }
        }

        impl $assign_trait<&ExtReal> for ExtReal {
            fn $assign(&mut self, rhs: &ExtReal) {
                if rhs.prec() > self.prec() {
                    self.0.set_prec(rhs.prec());
                }
                self.0 $aop &rhs.0;
            }
        }

        impl $assign_trait<ExtReal> for ExtReal {
            fn $assign(&mut self, rhs: ExtReal) {
                *self $aop &rhs;
            }
        }

        impl $assign_trait<f64> for ExtReal {
            fn $assign(&mut self, rhs: f64) {
                self.0 $aop rhs;
            }
        }
    };
}

binop!(Add, add, AddAssign, add_assign, +, +=);
binop!(Sub, sub, SubAssign, sub_assign, -, -=);
binop!(Mul, mul, MulAssign, mul_assign, *, *=);
binop!(Div, div, DivAssign, div_assign, /, /=);

/// Neumaier-compensated sum of extended values.
pub fn compensated_sum<'a, I>(values: I, prec: u32) -> ExtReal
where
    I: IntoIterator<Item = &'a ExtReal>,
{
    let mut sum = ExtReal::zero(prec);
    let mut comp = ExtReal::zero(prec);
    for v in values {
        let next = &sum + v;
        if sum.abs() >= v.abs() {
            comp += (&sum - &next) + v;
        } else {
            comp += (v - &next) + &sum;
        }
        sum = next;
    }
    sum + comp
}
