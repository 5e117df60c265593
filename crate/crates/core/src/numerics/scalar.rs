use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Comparison thresholds used by the float backend.
///
/// The exact backend ignores these; they are still recorded in reports so
/// every float-mode result states the tolerances it was computed under.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tolerance {
    pub eps_rank: f64,
    pub eps_feas: f64,
    pub eps_compare: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance {
            eps_rank: 1e-9,
            eps_feas: 1e-9,
            eps_compare: 1e-9,
        }
    }
}

impl Tolerance {
    pub fn new(eps_rank: f64, eps_feas: f64, eps_compare: f64) -> Result<Self> {
        let t = Tolerance {
            eps_rank,
            eps_feas,
            eps_compare,
        };
        t.check()?;
        Ok(t)
    }

    /// All three thresholds set to the same value.
    pub fn uniform(eps: f64) -> Result<Self> {
        Self::new(eps, eps, eps)
    }

    pub fn check(&self) -> Result<()> {
        for (name, v) in [
            ("eps_rank", self.eps_rank),
            ("eps_feas", self.eps_feas),
            ("eps_compare", self.eps_compare),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidInput(format!(
                    "tolerance {name} must be finite and strictly positive, got {v}"
                )));
            }
        }
        Ok(())
    }
}

/// Field element used throughout the crate.
///
/// Two implementations exist: [`BigRational`] (exact, lowest terms,
/// positive denominator) and `f64` (compared against a [`Tolerance`]).
/// A computation is generic over one `Scalar`, so exact and float values
/// can never meet in the same expression.
pub trait Scalar:
    Clone
    + fmt::Debug
    + fmt::Display
    + PartialEq
    + PartialOrd
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    const EXACT: bool;

    fn zero() -> Self;
    fn one() -> Self;
    fn from_i64(v: i64) -> Self;
    /// `num / den`; panics on a zero denominator.
    fn from_ratio(num: i64, den: i64) -> Self;
    /// Float import. Exact mode takes the binary value of `v` exactly.
    fn from_f64(v: f64) -> Option<Self>;
    fn to_f64(&self) -> f64;
    /// Exact square root where one exists in the field.
    fn sqrt(&self) -> Option<Self>;

    /// Sign of `self` with `|self| <= eps` counted as zero (float only).
    fn sign(&self, eps: f64) -> Ordering;

    fn abs(&self) -> Self {
        if self.sign(0.0) == Ordering::Less {
            -self.clone()
        } else {
            self.clone()
        }
    }

    fn is_zero_eps(&self, eps: f64) -> bool {
        self.sign(eps) == Ordering::Equal
    }

    fn is_pos(&self, eps: f64) -> bool {
        self.sign(eps) == Ordering::Greater
    }

    fn is_neg(&self, eps: f64) -> bool {
        self.sign(eps) == Ordering::Less
    }

    /// Three-way comparison of `self` and `other` with `eps` slack.
    fn cmp_eps(&self, other: &Self, eps: f64) -> Ordering {
        (self.clone() - other.clone()).sign(eps)
    }

    fn max_of(a: Self, b: Self) -> Self {
        if a >= b {
            a
        } else {
            b
        }
    }

    /// JSON encoding: `"p/q"` strings in exact mode, numbers in float mode.
    fn to_json(&self) -> serde_json::Value;
    /// Parses the textual rational form `p`, `-p` or `p/q`.
    fn parse_rational(text: &str) -> Result<Self>;
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn from_i64(v: i64) -> Self {
        v as f64
    }
    fn from_ratio(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        num as f64 / den as f64
    }
    fn from_f64(v: f64) -> Option<Self> {
        v.is_finite().then_some(v)
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn sqrt(&self) -> Option<Self> {
        if *self < 0.0 {
            None
        } else {
            Some(f64::sqrt(*self))
        }
    }
    fn sign(&self, eps: f64) -> Ordering {
        if *self > eps {
            Ordering::Greater
        } else if *self < -eps {
            Ordering::Less
        } else {
            Ordering::Equal
        }
    }
    fn abs(&self) -> Self {
        f64::abs(*self)
    }
    fn to_json(&self) -> serde_json::Value {
        // `-0.0` prints as "-0.0"; the sign carries no information here.
        let x = if *self == 0.0 { 0.0 } else { *self };
        serde_json::Number::from_f64(x)
            .map(serde_json::Value::Number)
            .unwrap_or(serde_json::Value::Null)
    }
    fn parse_rational(text: &str) -> Result<Self> {
        let r = parse_big_rational(text)?;
        Ok(Scalar::to_f64(&r))
    }
}

impl Scalar for BigRational {
    const EXACT: bool = true;

    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn from_i64(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }
    fn from_ratio(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }
    fn from_f64(v: f64) -> Option<Self> {
        BigRational::from_float(v)
    }
    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
    fn sqrt(&self) -> Option<Self> {
        if self.is_negative() {
            return None;
        }
        let n = self.numer().sqrt();
        let d = self.denom().sqrt();
        if &(&n * &n) == self.numer() && &(&d * &d) == self.denom() {
            Some(BigRational::new(n, d))
        } else {
            None
        }
    }
    fn sign(&self, _eps: f64) -> Ordering {
        if self.is_positive() {
            Ordering::Greater
        } else if self.is_negative() {
            Ordering::Less
        } else {
            Ordering::Equal
        }
    }
    fn to_json(&self) -> serde_json::Value {
        serde_json::Value::String(format_rational(self))
    }
    fn parse_rational(text: &str) -> Result<Self> {
        parse_big_rational(text)
    }
}

pub fn format_rational(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn parse_big_rational(text: &str) -> Result<BigRational> {
    let bad = || Error::Parse(format!("not a rational number: {text:?}"));
    let text = text.trim();
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (text, "1"),
    };
    let valid = |s: &str, signed: bool| {
        let digits = if signed {
            s.strip_prefix('-').or_else(|| s.strip_prefix('+')).unwrap_or(s)
        } else {
            s
        };
        !digits.is_empty() && digits.len() <= 4096 && digits.bytes().all(|b| b.is_ascii_digit())
    };
    if !valid(num, true) || !valid(den, false) {
        return Err(bad());
    }
    let n: BigInt = num.parse().map_err(|_| bad())?;
    let d: BigInt = den.parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(Error::Parse(format!("zero denominator in {text:?}")));
    }
    Ok(BigRational::new(n, d))
}

pub fn dot<T: Scalar>(a: &[T], b: &[T]) -> T {
    debug_assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .fold(T::zero(), |acc, (x, y)| acc + x.clone() * y.clone())
}

pub fn add_vec<T: Scalar>(a: &[T], b: &[T]) -> Vec<T> {
    a.iter().zip(b).map(|(x, y)| x.clone() + y.clone()).collect()
}

pub fn sub_vec<T: Scalar>(a: &[T], b: &[T]) -> Vec<T> {
    a.iter().zip(b).map(|(x, y)| x.clone() - y.clone()).collect()
}

pub fn scale_vec<T: Scalar>(c: &T, a: &[T]) -> Vec<T> {
    a.iter().map(|x| c.clone() * x.clone()).collect()
}

/// `acc += c * a`
pub fn axpy<T: Scalar>(acc: &mut [T], c: &T, a: &[T]) {
    for (x, y) in acc.iter_mut().zip(a) {
        *x = x.clone() + c.clone() * y.clone();
    }
}

pub fn zeros<T: Scalar>(n: usize) -> Vec<T> {
    vec![T::zero(); n]
}

pub fn max_abs<T: Scalar>(a: &[T]) -> T {
    a.iter().fold(T::zero(), |m, x| T::max_of(m, x.abs()))
}

/// Componentwise equality within `eps`.
pub fn vec_eq<T: Scalar>(a: &[T], b: &[T], eps: f64) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| x.cmp_eps(y, eps) == Ordering::Equal)
}

pub fn is_zero_vec<T: Scalar>(a: &[T], eps: f64) -> bool {
    a.iter().all(|x| x.is_zero_eps(eps))
}

pub fn to_f64_vec<T: Scalar>(a: &[T]) -> Vec<f64> {
    a.iter().map(Scalar::to_f64).collect()
}

/// Converts between backends; exact → float rounds, float → exact is the
/// exact binary value.
pub fn convert<S: Scalar, T: Scalar>(x: &S) -> Result<T> {
    T::from_f64(x.to_f64()).ok_or_else(|| Error::InvalidInput(format!("non-finite value {x}")))
}

pub fn convert_vec<S: Scalar, T: Scalar>(a: &[S]) -> Result<Vec<T>> {
    a.iter().map(convert).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::from_ratio(n, d)
    }

    #[test]
    fn rationals_are_reduced() {
        let r = q(6, -4);
        assert_eq!(r.numer(), &BigInt::from(-3));
        assert_eq!(r.denom(), &BigInt::from(2));
        assert_eq!(format_rational(&r), "-3/2");
        assert_eq!(format_rational(&q(4, 2)), "2");
    }

    #[test]
    fn parse_rational_forms() {
        assert_eq!(parse_big_rational("3/6").unwrap(), q(1, 2));
        assert_eq!(parse_big_rational("-7").unwrap(), q(-7, 1));
        assert_eq!(parse_big_rational(" 2 / 3 ").unwrap(), q(2, 3));
        assert!(parse_big_rational("1/0").is_err());
        assert!(parse_big_rational("1/-2").is_err());
        assert!(parse_big_rational("abc").is_err());
        assert!(parse_big_rational("").is_err());
        assert!(parse_big_rational("0.5").is_err());
    }

    #[test]
    fn exact_sqrt_only_for_squares() {
        assert_eq!(Scalar::sqrt(&q(9, 4)), Some(q(3, 2)));
        assert_eq!(Scalar::sqrt(&q(2, 1)), None);
        assert_eq!(Scalar::sqrt(&q(-1, 1)), None);
    }

    #[test]
    fn float_sign_uses_eps() {
        assert_eq!(1e-12f64.sign(1e-9), Ordering::Equal);
        assert_eq!((-1e-6f64).sign(1e-9), Ordering::Less);
        assert_eq!(q(1, 1_000_000_000_000).sign(1e-9), Ordering::Greater);
    }

    #[test]
    fn tolerance_must_be_positive() {
        assert!(Tolerance::new(0.0, 1e-9, 1e-9).is_err());
        assert!(Tolerance::uniform(f64::NAN).is_err());
        assert!(Tolerance::default().check().is_ok());
    }
}
