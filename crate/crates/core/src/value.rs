use std::fmt;
use std::ops::{Add, Mul};

use num::{BigInt, BigRational, One, Signed};

/// Codomain of every lifting depth: an exact rational, ∞, or "could not be
/// decided at the working precision".
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ValueExt {
    Finite(BigRational),
    Infinite,
    InsufficientPrecision,
}

impl ValueExt {
    pub fn from_int(n: i64) -> Self {
        ValueExt::Finite(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn ratio(n: i64, d: i64) -> Self {
        ValueExt::Finite(BigRational::new(BigInt::from(n), BigInt::from(d)))
    }

    pub fn finite(&self) -> Option<&BigRational> {
        match self {
            ValueExt::Finite(x) => Some(x),
            _ => None,
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, ValueExt::Finite(_))
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, ValueExt::Infinite)
    }

    pub fn is_integer(&self) -> bool {
        self.finite().is_some_and(|x| x.is_integer())
    }

    pub fn is_nonnegative_integer(&self) -> bool {
        self.finite().is_some_and(|x| x.is_integer() && !x.is_negative())
    }

    /// Stable text form: `num/den`, `Infinite` or `InsufficientPrecision`.
    pub fn to_report_string(&self) -> String {
        match self {
            ValueExt::Finite(x) => rational_string(x),
            ValueExt::Infinite => "Infinite".to_string(),
            ValueExt::InsufficientPrecision => "InsufficientPrecision".to_string(),
        }
    }

    fn combine(self, rhs: ValueExt, f: impl FnOnce(BigRational, BigRational) -> BigRational) -> ValueExt {
        match (self, rhs) {
            (ValueExt::InsufficientPrecision, _) | (_, ValueExt::InsufficientPrecision) => {
                ValueExt::InsufficientPrecision
            }
            (ValueExt::Infinite, _) | (_, ValueExt::Infinite) => ValueExt::Infinite,
            (ValueExt::Finite(a), ValueExt::Finite(b)) => ValueExt::Finite(f(a, b)),
        }
    }

    pub fn scale(self, c: &BigRational) -> ValueExt {
        match self {
            ValueExt::Finite(x) => ValueExt::Finite(x * c),
            other => other,
        }
    }
}

/// `num/den` in lowest terms, denominator always printed.
pub fn rational_string(x: &BigRational) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

impl From<BigRational> for ValueExt {
    fn from(x: BigRational) -> Self {
        ValueExt::Finite(x)
    }
}

impl Add for ValueExt {
    type Output = ValueExt;
    fn add(self, rhs: ValueExt) -> ValueExt {
        self.combine(rhs, |a, b| a + b)
    }
}

impl Mul for ValueExt {
    type Output = ValueExt;
    fn mul(self, rhs: ValueExt) -> ValueExt {
        self.combine(rhs, |a, b| a * b)
    }
}

impl fmt::Display for ValueExt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_report_string())
    }
}

/// q^e as an exact rational (e may be negative).
pub fn q_pow(q: u32, e: i64) -> BigRational {
    let base = BigInt::from(q);
    let p = num::pow(base, e.unsigned_abs() as usize);
    if e >= 0 {
        BigRational::from_integer(p)
    } else {
        BigRational::new(BigInt::one(), p)
    }
}

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}
