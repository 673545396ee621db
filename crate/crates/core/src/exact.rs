//! Exact extended rationals: arbitrary-precision fractions plus `+inf`.
//!
//! Every cost, marginal and objective in this crate is an [`ExactValue`].
//! Comparisons are total and exact, so argmin tie-breaking never depends on
//! floating-point rounding.

use std::cmp::Ordering;
use std::fmt;
use std::iter::Sum;
use std::ops::{Add, Mul};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// A finite rational number or `+inf`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ExactValue {
    Finite(BigRational),
    Infinite,
}

impl ExactValue {
    pub fn zero() -> Self {
        ExactValue::Finite(BigRational::zero())
    }

    pub fn one() -> Self {
        ExactValue::Finite(BigRational::one())
    }

    pub fn infinity() -> Self {
        ExactValue::Infinite
    }

    pub fn from_integer(n: i64) -> Self {
        ExactValue::Finite(BigRational::from_integer(BigInt::from(n)))
    }

    /// `numer / denom`; panics on a zero denominator.
    pub fn ratio(numer: i64, denom: i64) -> Self {
        assert!(denom != 0, "zero denominator");
        ExactValue::Finite(BigRational::new(BigInt::from(numer), BigInt::from(denom)))
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, ExactValue::Finite(_))
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, ExactValue::Infinite)
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            ExactValue::Finite(r) => Some(r),
            ExactValue::Infinite => None,
        }
    }

    pub fn is_negative(&self) -> bool {
        matches!(self, ExactValue::Finite(r) if r.is_negative())
    }

    /// `self - other`. Fails only for `inf - inf`; `finite - inf` is also
    /// rejected because the value domain has no `-inf`.
    pub fn checked_sub(&self, other: &ExactValue) -> Result<ExactValue> {
        match (self, other) {
            (ExactValue::Finite(a), ExactValue::Finite(b)) => Ok(ExactValue::Finite(a - b)),
            (ExactValue::Infinite, ExactValue::Finite(_)) => Ok(ExactValue::Infinite),
            (ExactValue::Infinite, ExactValue::Infinite) => {
                Err(Error::Arithmetic("inf - inf is undefined".into()))
            }
            (ExactValue::Finite(_), ExactValue::Infinite) => Err(Error::Arithmetic(
                "finite - inf has no representation".into(),
            )),
        }
    }

    /// Multiply by a nonnegative integer. `inf * 0` is taken as `0`, which is
    /// what `c(load) * units` needs when a player puts no units on a resource.
    pub fn mul_count(&self, k: u64) -> ExactValue {
        match self {
            ExactValue::Finite(r) => {
                ExactValue::Finite(r * BigRational::from_integer(BigInt::from(k)))
            }
            ExactValue::Infinite if k == 0 => ExactValue::zero(),
            ExactValue::Infinite => ExactValue::Infinite,
        }
    }
}

impl Ord for ExactValue {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (ExactValue::Finite(a), ExactValue::Finite(b)) => a.cmp(b),
            (ExactValue::Finite(_), ExactValue::Infinite) => Ordering::Less,
            (ExactValue::Infinite, ExactValue::Finite(_)) => Ordering::Greater,
            (ExactValue::Infinite, ExactValue::Infinite) => Ordering::Equal,
        }
    }
}

impl PartialOrd for ExactValue {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Add for ExactValue {
    type Output = ExactValue;
    fn add(self, rhs: ExactValue) -> ExactValue {
        match (self, rhs) {
            (ExactValue::Finite(a), ExactValue::Finite(b)) => ExactValue::Finite(a + b),
            _ => ExactValue::Infinite,
        }
    }
}

impl<'a> Add<&'a ExactValue> for &'a ExactValue {
    type Output = ExactValue;
    fn add(self, rhs: &'a ExactValue) -> ExactValue {
        match (self, rhs) {
            (ExactValue::Finite(a), ExactValue::Finite(b)) => ExactValue::Finite(a + b),
            _ => ExactValue::Infinite,
        }
    }
}

impl Mul<&BigRational> for &ExactValue {
    type Output = ExactValue;
    fn mul(self, rhs: &BigRational) -> ExactValue {
        match self {
            ExactValue::Finite(a) => ExactValue::Finite(a * rhs),
            ExactValue::Infinite if rhs.is_zero() => ExactValue::zero(),
            ExactValue::Infinite => ExactValue::Infinite,
        }
    }
}

impl Sum for ExactValue {
    fn sum<I: Iterator<Item = ExactValue>>(iter: I) -> ExactValue {
        iter.fold(ExactValue::zero(), |acc, v| acc + v)
    }
}

impl From<BigRational> for ExactValue {
    fn from(r: BigRational) -> Self {
        ExactValue::Finite(r)
    }
}

impl From<i64> for ExactValue {
    fn from(n: i64) -> Self {
        ExactValue::from_integer(n)
    }
}

/// Serialized as `p/q`, `p` for integers, or `inf`.
impl fmt::Display for ExactValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExactValue::Finite(r) => write!(f, "{r}"),
            ExactValue::Infinite => f.write_str("inf"),
        }
    }
}

impl FromStr for ExactValue {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "inf" || s == "+inf" {
            return Ok(ExactValue::Infinite);
        }
        parse_rational(s).map(ExactValue::Finite)
    }
}

/// Parse `p`, `-p`, `p/q` into a reduced rational.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let bad = || Error::Parse(format!("not an exact rational: {s:?}"));
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s.trim(), "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(bad());
    }
    Ok(BigRational::new(num, den))
}

/// Lexicographic comparison of two equal-length descending-sorted vectors.
pub fn lex_cmp(a: &[ExactValue], b: &[ExactValue]) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        match x.cmp(y) {
            Ordering::Equal => continue,
            other => return other,
        }
    }
    a.len().cmp(&b.len())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn infinity_is_top() {
        let big = ExactValue::from_integer(1_000_000_000);
        assert!(big < ExactValue::Infinite);
        assert_eq!(ExactValue::Infinite, ExactValue::Infinite);
        assert_eq!(
            ExactValue::Infinite.cmp(&ExactValue::Infinite),
            Ordering::Equal
        );
    }

    #[test]
    fn subtraction_rules() {
        let a = ExactValue::ratio(1, 2);
        let b = ExactValue::ratio(1, 3);
        assert_eq!(a.checked_sub(&b).unwrap(), ExactValue::ratio(1, 6));
        assert_eq!(
            ExactValue::Infinite.checked_sub(&a).unwrap(),
            ExactValue::Infinite
        );
        assert!(matches!(
            ExactValue::Infinite.checked_sub(&ExactValue::Infinite),
            Err(Error::Arithmetic(_))
        ));
        assert_eq!(a.clone() + ExactValue::Infinite, ExactValue::Infinite);
    }

    #[test]
    fn display_and_parse() {
        assert_eq!(ExactValue::ratio(2, 4).to_string(), "1/2");
        assert_eq!(ExactValue::from_integer(3).to_string(), "3");
        assert_eq!(ExactValue::Infinite.to_string(), "inf");
        for s in ["1/2", "3", "inf", "-7/3", "0"] {
            let v: ExactValue = s.parse().unwrap();
            assert_eq!(v.to_string(), s);
        }
        assert!("1/0".parse::<ExactValue>().is_err());
        assert!("0.5".parse::<ExactValue>().is_err());
    }

    #[test]
    fn lexicographic_order() {
        let v = |xs: &[i64]| {
            xs.iter()
                .map(|&x| ExactValue::from_integer(x))
                .collect::<Vec<_>>()
        };
        assert_eq!(lex_cmp(&v(&[3, 1]), &v(&[2, 9])), Ordering::Greater);
        assert_eq!(lex_cmp(&v(&[3, 1]), &v(&[3, 1])), Ordering::Equal);
        assert_eq!(lex_cmp(&v(&[3, 1]), &v(&[3, 2])), Ordering::Less);
    }
}
