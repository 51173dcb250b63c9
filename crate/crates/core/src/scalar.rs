//! Scalar abstractions.
//!
//! Bound computations run over any [`Scalar`]: `f32`, `f64`, or exact
//! [`BigRational`]. Geometry needs transcendental functions and is generic
//! over [`Real`] (floating point only).

use std::fmt::Debug;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Float, FloatConst, FromPrimitive, Num, One, Signed, ToPrimitive};

/// Arithmetic shared by floating-point and exact rational scalars.
pub trait Scalar:
    Clone + Debug + PartialOrd + Num + Signed + FromPrimitive + Send + Sync + 'static
{
    /// Whether arithmetic in this type is exact.
    const EXACT: bool;

    /// Converts an exact rational; floating types round to nearest.
    fn from_rational(q: &BigRational) -> Self;

    /// Converts a finite `f64` without loss, if the type can represent it.
    fn from_f64_exact(x: f64) -> Option<Self>;

    /// `2^exp`.
    fn pow2(exp: i64) -> Self;

    /// Square root, `None` when the type cannot represent it exactly.
    fn sqrt_checked(&self) -> Option<Self>;

    /// Smallest integer `m` with `m >= self`.
    fn ceil_int(&self) -> Option<BigInt>;

    fn to_f64_lossy(&self) -> f64;

    /// Exact rational value; `None` for non-finite floats.
    fn to_rational(&self) -> Option<BigRational>;

    /// `ceil(-log2(self))` for `self > 0`: the smallest integer `m` with
    /// `2^-m <= self`.
    fn ceil_neg_log2(&self) -> Option<i64> {
        if *self <= Self::zero() {
            return None;
        }
        let guess = -self.to_f64_lossy().log2();
        let mut m = if guess.is_finite() {
            guess.ceil() as i64
        } else {
            return None;
        };
        // the float guess may be off by one in either direction
        while Self::pow2(-(m - 1)) <= *self {
            m -= 1;
        }
        while Self::pow2(-m) > *self {
            m += 1;
        }
        Some(m)
    }

    /// `ceil` as an unsigned machine integer, `None` on overflow or negatives.
    fn ceil_u64(&self) -> Option<u64> {
        self.ceil_int().and_then(|c| c.to_u64())
    }
}

macro_rules! float_scalar {
    ($t:ty) => {
        impl Scalar for $t {
            const EXACT: bool = false;

            fn from_rational(q: &BigRational) -> Self {
                q.to_f64().map(|v| v as $t).unwrap_or(<$t>::NAN)
            }

            fn from_f64_exact(x: f64) -> Option<Self> {
                let y = x as $t;
                (y as f64 == x).then_some(y)
            }

            fn pow2(exp: i64) -> Self {
                let e = exp.clamp(i32::MIN as i64, i32::MAX as i64) as i32;
                (2.0 as $t).powi(e)
            }

            fn sqrt_checked(&self) -> Option<Self> {
                (*self >= 0.0).then(|| self.sqrt())
            }

            fn ceil_int(&self) -> Option<BigInt> {
                if !self.is_finite() {
                    return None;
                }
                BigInt::from_f64(self.ceil() as f64)
            }

            fn to_f64_lossy(&self) -> f64 {
                *self as f64
            }

            fn to_rational(&self) -> Option<BigRational> {
                BigRational::from_float(*self as f64)
            }
        }
    };
}

float_scalar!(f32);
float_scalar!(f64);

impl Scalar for BigRational {
    const EXACT: bool = true;

    fn from_rational(q: &BigRational) -> Self {
        q.clone()
    }

    fn from_f64_exact(x: f64) -> Option<Self> {
        BigRational::from_float(x)
    }

    fn pow2(exp: i64) -> Self {
        let p = BigInt::one() << exp.unsigned_abs();
        if exp >= 0 {
            BigRational::from_integer(p)
        } else {
            BigRational::new(BigInt::one(), p)
        }
    }

    fn sqrt_checked(&self) -> Option<Self> {
        if self.is_negative() {
            return None;
        }
        let n = self.numer().sqrt();
        let d = self.denom().sqrt();
        let root = BigRational::new(n, d);
        (&root * &root == *self).then_some(root)
    }

    fn ceil_int(&self) -> Option<BigInt> {
        Some(self.ceil().to_integer())
    }

    fn to_f64_lossy(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    fn to_rational(&self) -> Option<BigRational> {
        Some(self.clone())
    }

    fn ceil_neg_log2(&self) -> Option<i64> {
        if !self.is_positive() {
            return None;
        }
        // bit lengths bracket log2 within one; fix up exactly
        let est = self.denom().bits() as i64 - self.numer().bits() as i64;
        let mut m = est;
        while Self::pow2(-(m - 1)) <= *self {
            m -= 1;
        }
        while Self::pow2(-m) > *self {
            m += 1;
        }
        Some(m)
    }
}

/// Floating-point scalars usable for geometry.
pub trait Real: Scalar + Float + FloatConst {
    /// Poincaré points must satisfy `|p|^2 < 1 - disk_margin()`.
    fn disk_margin() -> Self;
    /// Default verification slack.
    fn tolerance() -> Self;
}

impl Real for f64 {
    fn disk_margin() -> Self {
        1e-12
    }
    fn tolerance() -> Self {
        1e-9
    }
}

impl Real for f32 {
    fn disk_margin() -> Self {
        1e-6
    }
    fn tolerance() -> Self {
        1e-4
    }
}

/// Exact rational for a positive integer ratio; panics on a zero denominator.
pub fn ratio(numer: i64, denom: i64) -> BigRational {
    BigRational::new(BigInt::from(numer), BigInt::from(denom))
}

/// `ceil(q)` for a non-negative exact rational as `u64`.
pub fn ceil_rational_u64(q: &BigRational) -> Option<u64> {
    let c = q.ceil().to_integer();
    if c.is_negative() {
        return None;
    }
    c.to_u64()
}
