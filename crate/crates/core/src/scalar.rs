//! Coefficient field abstraction.
//!
//! Every algebraic routine in the crate is generic over [`Scalar`]. Two
//! families are provided: exact rationals (`BigRational`, the default for
//! anything that claims equality) and IEEE floats (`f64`, `f32`) for root
//! systems whose coordinates are irrational.

use std::fmt::{Debug, Display};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Num, One, Signed, ToPrimitive, Zero};

/// A real coefficient field.
pub trait Scalar:
    Clone + Debug + Display + PartialEq + PartialOrd + Num + Signed + Send + Sync + 'static
{
    /// `true` when arithmetic is exact and `==` is meaningful.
    const EXACT: bool;

    fn from_ratio(num: i64, den: i64) -> Self;

    fn from_rational(q: &BigRational) -> Self;

    /// Exact value as a rational; `None` for float types.
    fn to_rational(&self) -> Option<BigRational>;

    fn to_f64(&self) -> f64;

    /// Float construction; exact types refuse, since a binary approximation
    /// of an irrational number would silently break exactness.
    fn try_from_float(x: f64) -> Option<Self>;

    /// Equality for exact types, relative closeness for floats.
    fn close_to(&self, other: &Self) -> bool;

    /// Zero test. Exact types ignore `abs_tol`.
    fn is_negligible(&self, abs_tol: f64) -> bool;

    fn is_finite(&self) -> bool;

    /// The value as a machine integer, if it is one.
    fn as_integer(&self) -> Option<i64>;

    fn from_int(n: i64) -> Self {
        Self::from_ratio(n, 1)
    }
}

impl Scalar for BigRational {
    const EXACT: bool = true;

    fn from_ratio(num: i64, den: i64) -> Self {
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }

    fn from_rational(q: &BigRational) -> Self {
        q.clone()
    }

    fn to_rational(&self) -> Option<BigRational> {
        Some(self.clone())
    }

    fn to_f64(&self) -> f64 {
        if let Some(x) = ToPrimitive::to_f64(self) {
            if x.is_finite() {
                return x;
            }
        }
        // Huge numerator and denominator: divide in log space.
        let n = self.numer().to_f64().unwrap_or(f64::INFINITY);
        let d = self.denom().to_f64().unwrap_or(f64::INFINITY);
        if n.is_finite() && d.is_finite() {
            n / d
        } else {
            let bits_n = self.numer().bits() as i64;
            let bits_d = self.denom().bits() as i64;
            let shift = (bits_n.max(bits_d) - 60).max(0) as usize;
            let n = (self.numer() >> shift).to_f64().unwrap_or(0.0);
            let d = (self.denom() >> shift).to_f64().unwrap_or(0.0);
            if d == 0.0 {
                if n.is_sign_negative() {
                    f64::NEG_INFINITY
                } else {
                    f64::INFINITY
                }
            } else {
                n / d
            }
        }
    }

    fn try_from_float(_x: f64) -> Option<Self> {
        None
    }

    fn close_to(&self, other: &Self) -> bool {
        self == other
    }

    fn is_negligible(&self, _abs_tol: f64) -> bool {
        self.is_zero()
    }

    fn is_finite(&self) -> bool {
        true
    }

    fn as_integer(&self) -> Option<i64> {
        if self.denom().is_one() {
            self.numer().to_i64()
        } else {
            None
        }
    }
}

macro_rules! float_scalar {
    ($t:ty, $rel:expr) => {
        impl Scalar for $t {
            const EXACT: bool = false;

            fn from_ratio(num: i64, den: i64) -> Self {
                (num as f64 / den as f64) as $t
            }

            fn from_rational(q: &BigRational) -> Self {
                Scalar::to_f64(q) as $t
            }

            fn to_rational(&self) -> Option<BigRational> {
                None
            }

            fn to_f64(&self) -> f64 {
                *self as f64
            }

            fn try_from_float(x: f64) -> Option<Self> {
                Some(x as $t)
            }

            fn close_to(&self, other: &Self) -> bool {
                let scale = 1.0f64.max(self.abs() as f64).max(other.abs() as f64);
                ((*self - *other).abs() as f64) <= $rel * scale
            }

            fn is_negligible(&self, abs_tol: f64) -> bool {
                (self.abs() as f64) <= abs_tol
            }

            fn is_finite(&self) -> bool {
                <$t>::is_finite(*self)
            }

            fn as_integer(&self) -> Option<i64> {
                if self.fract() == 0.0 && self.abs() < 9.0e15 {
                    Some(*self as i64)
                } else {
                    None
                }
            }
        }
    };
}

float_scalar!(f64, 1e-9);
float_scalar!(f32, 1e-4);

/// Parses `"p"`, `"p/q"` or `"-p/q"` into an exact rational.
pub fn parse_rational(text: &str) -> Option<BigRational> {
    let text = text.trim();
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (text, "1"),
    };
    let num: BigInt = num.parse().ok()?;
    let den: BigInt = den.parse().ok()?;
    if den.is_zero() {
        return None;
    }
    Some(BigRational::new(num, den))
}

/// Parses a scalar literal. Exact types accept only rationals; float types
/// also accept decimal notation.
pub fn parse_scalar<S: Scalar>(text: &str) -> Option<S> {
    if let Some(q) = parse_rational(text) {
        return Some(S::from_rational(&q));
    }
    if S::EXACT {
        return None;
    }
    let x: f64 = text.trim().parse().ok()?;
    if x.is_finite() {
        S::try_from_float(x)
    } else {
        None
    }
}

/// Rising factorial `(a)_k = a (a+1) ... (a+k-1)`.
pub fn pochhammer<S: Scalar>(a: &S, k: u32) -> S {
    let mut acc = S::one();
    let mut term = a.clone();
    for _ in 0..k {
        acc = acc * term.clone();
        term = term + S::one();
    }
    acc
}
