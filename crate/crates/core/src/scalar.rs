//! Dual-mode arithmetic shared by every module.
//!
//! A [`Scalar`] is either an exact arbitrary-precision rational or an `f64`.
//! Exact values compare literally; float values compare within a
//! process-wide tolerance ([`epsilon`]). Mixing the two modes in one
//! operation is a usage error and panics; fallible entry points
//! ([`Scalar::try_eq`], [`Scalar::try_add`]) report it as [`Error::ModeMismatch`].

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;
use std::sync::atomic::{AtomicU64, Ordering as AtomicOrdering};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{de, Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Tolerance used by float-mode comparisons unless overridden.
pub const DEFAULT_EPSILON: f64 = 1e-9;

const UNSET: u64 = u64::MAX;
static EPSILON_BITS: AtomicU64 = AtomicU64::new(UNSET);

/// Current float-mode tolerance.
pub fn epsilon() -> f64 {
    match EPSILON_BITS.load(AtomicOrdering::Relaxed) {
        UNSET => DEFAULT_EPSILON,
        bits => f64::from_bits(bits),
    }
}

/// Overrides the float-mode tolerance for the whole process.
pub fn set_epsilon(eps: f64) -> Result<()> {
    if !eps.is_finite() || eps < 0.0 {
        return Err(Error::ScalarSyntax(eps.to_string()));
    }
    EPSILON_BITS.store(eps.to_bits(), AtomicOrdering::Relaxed);
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exact,
    Float,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Scalar {
    Exact(BigRational),
    Float(f64),
}

impl Scalar {
    pub fn zero(mode: Mode) -> Self {
        match mode {
            Mode::Exact => Scalar::Exact(BigRational::zero()),
            Mode::Float => Scalar::Float(0.0),
        }
    }

    pub fn one(mode: Mode) -> Self {
        Self::from_i64(1, mode)
    }

    pub fn from_i64(value: i64, mode: Mode) -> Self {
        match mode {
            Mode::Exact => Scalar::Exact(BigRational::from_integer(BigInt::from(value))),
            Mode::Float => Scalar::Float(value as f64),
        }
    }

    /// Exact `numer / denom`. Panics if `denom == 0`.
    pub fn ratio(numer: i64, denom: i64) -> Self {
        Scalar::Exact(BigRational::new(BigInt::from(numer), BigInt::from(denom)))
    }

    pub fn float(value: f64) -> Self {
        Scalar::Float(value)
    }

    pub fn mode(&self) -> Mode {
        match self {
            Scalar::Exact(_) => Mode::Exact,
            Scalar::Float(_) => Mode::Float,
        }
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            Scalar::Exact(r) => Some(r),
            Scalar::Float(_) => None,
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Scalar::Exact(r) => r.to_f64().unwrap_or(f64::NAN),
            Scalar::Float(x) => *x,
        }
    }

    /// Converts to `mode`. Floats become the exact rational of their binary value.
    pub fn to_mode(&self, mode: Mode) -> Result<Self> {
        match (self, mode) {
            (Scalar::Exact(_), Mode::Exact) | (Scalar::Float(_), Mode::Float) => Ok(self.clone()),
            (Scalar::Exact(_), Mode::Float) => Ok(Scalar::Float(self.to_f64())),
            (Scalar::Float(x), Mode::Exact) => BigRational::from_float(*x)
                .map(Scalar::Exact)
                .ok_or_else(|| Error::ScalarSyntax(x.to_string())),
        }
    }

    pub fn is_finite(&self) -> bool {
        match self {
            Scalar::Exact(_) => true,
            Scalar::Float(x) => x.is_finite(),
        }
    }

    /// Mode-checked equality: literal for exact values, `|a - b| <= epsilon()` for floats.
    pub fn try_eq(&self, other: &Scalar) -> Result<bool> {
        match (self, other) {
            (Scalar::Exact(a), Scalar::Exact(b)) => Ok(a == b),
            (Scalar::Float(a), Scalar::Float(b)) => Ok((a - b).abs() <= epsilon()),
            _ => Err(Error::ModeMismatch),
        }
    }

    /// Like [`Scalar::try_eq`] but panics on mixed modes.
    pub fn approx_eq(&self, other: &Scalar) -> bool {
        self.try_eq(other).expect("mixed scalar modes")
    }

    /// Tolerant three-way comparison: float values within `epsilon()` are `Equal`.
    pub fn compare(&self, other: &Scalar) -> Ordering {
        match (self, other) {
            (Scalar::Exact(a), Scalar::Exact(b)) => a.cmp(b),
            (Scalar::Float(a), Scalar::Float(b)) => {
                if (a - b).abs() <= epsilon() {
                    Ordering::Equal
                } else if a < b {
                    Ordering::Less
                } else {
                    Ordering::Greater
                }
            }
            _ => panic!("mixed scalar modes"),
        }
    }

    pub fn le(&self, other: &Scalar) -> bool {
        self.compare(other) != Ordering::Greater
    }

    pub fn ge(&self, other: &Scalar) -> bool {
        self.compare(other) != Ordering::Less
    }

    pub fn lt(&self, other: &Scalar) -> bool {
        self.compare(other) == Ordering::Less
    }

    pub fn gt(&self, other: &Scalar) -> bool {
        self.compare(other) == Ordering::Greater
    }

    /// Strictly below zero, beyond tolerance in float mode.
    pub fn is_negative(&self) -> bool {
        self.lt(&Scalar::zero(self.mode()))
    }

    pub fn is_zero(&self) -> bool {
        self.compare(&Scalar::zero(self.mode())) == Ordering::Equal
    }

    pub fn abs(&self) -> Scalar {
        match self {
            Scalar::Exact(r) => Scalar::Exact(r.abs()),
            Scalar::Float(x) => Scalar::Float(x.abs()),
        }
    }

    pub fn max(self, other: Scalar) -> Scalar {
        if other.gt(&self) {
            other
        } else {
            self
        }
    }

    /// Sum in `mode`; the empty sum is zero.
    pub fn sum<'a, I>(mode: Mode, items: I) -> Scalar
    where
        I: IntoIterator<Item = &'a Scalar>,
    {
        items
            .into_iter()
            .fold(Scalar::zero(mode), |acc, x| &acc + x)
    }

    pub fn try_add(&self, other: &Scalar) -> Result<Scalar> {
        binary(self, other, |a, b| a + b, |a, b| a + b)
    }

    pub fn try_sub(&self, other: &Scalar) -> Result<Scalar> {
        binary(self, other, |a, b| a - b, |a, b| a - b)
    }

    pub fn try_mul(&self, other: &Scalar) -> Result<Scalar> {
        binary(self, other, |a, b| a * b, |a, b| a * b)
    }

    pub fn try_div(&self, other: &Scalar) -> Result<Scalar> {
        if let Scalar::Exact(b) = other {
            if b.is_zero() {
                return Err(Error::DivisionByZero);
            }
        }
        binary(self, other, |a, b| a / b, |a, b| a / b)
    }
}

fn binary(
    a: &Scalar,
    b: &Scalar,
    exact: impl FnOnce(&BigRational, &BigRational) -> BigRational,
    float: impl FnOnce(f64, f64) -> f64,
) -> Result<Scalar> {
    match (a, b) {
        (Scalar::Exact(x), Scalar::Exact(y)) => Ok(Scalar::Exact(exact(x, y))),
        (Scalar::Float(x), Scalar::Float(y)) => Ok(Scalar::Float(float(*x, *y))),
        _ => Err(Error::ModeMismatch),
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $try:ident) => {
        impl $trait<&Scalar> for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                self.$try(rhs).expect("scalar arithmetic")
            }
        }
        impl $trait<Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                (&self).$try(&rhs).expect("scalar arithmetic")
            }
        }
        impl $trait<&Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                (&self).$try(rhs).expect("scalar arithmetic")
            }
        }
        impl $trait<Scalar> for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                self.$try(&rhs).expect("scalar arithmetic")
            }
        }
    };
}

forward_binop!(Add, add, try_add);
forward_binop!(Sub, sub, try_sub);
forward_binop!(Mul, mul, try_mul);
forward_binop!(Div, div, try_div);

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Exact(r) => Scalar::Exact(-r),
            Scalar::Float(x) => Scalar::Float(-x),
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Exact(r) if r.denom().is_one() => write!(f, "{}", r.numer()),
            Scalar::Exact(r) => write!(f, "{}/{}", r.numer(), r.denom()),
            Scalar::Float(x) => write!(f, "{x}"),
        }
    }
}

/// Parses `p/q`, an integer, or a decimal with optional exponent, all exactly.
impl FromStr for Scalar {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let text = s.trim();
        let bad = || Error::ScalarSyntax(s.to_string());
        if let Some((p, q)) = text.split_once('/') {
            let numer: BigInt = p.trim().parse().map_err(|_| bad())?;
            let denom: BigInt = q.trim().parse().map_err(|_| bad())?;
            if denom.is_zero() {
                return Err(Error::DivisionByZero);
            }
            return Ok(Scalar::Exact(BigRational::new(numer, denom)));
        }
        parse_decimal(text).map(Scalar::Exact).ok_or_else(bad)
    }
}

fn parse_decimal(text: &str) -> Option<BigRational> {
    let (mantissa, exponent) = match text.find(['e', 'E']) {
        Some(pos) => (&text[..pos], text[pos + 1..].parse::<i32>().ok()?),
        None => (text, 0),
    };
    let (negative, digits) = match mantissa.as_bytes().first()? {
        b'-' => (true, &mantissa[1..]),
        b'+' => (false, &mantissa[1..]),
        _ => (false, mantissa),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part
        .bytes()
        .chain(frac_part.bytes())
        .all(|b| b.is_ascii_digit())
    {
        return None;
    }
    let all: BigInt = format!("0{int_part}{frac_part}").parse().ok()?;
    let scale = exponent - frac_part.len() as i32;
    let ten = BigInt::from(10);
    let mut value = BigRational::from_integer(all);
    if scale >= 0 {
        value *= BigRational::from_integer(num_traits::pow(ten, scale as usize));
    } else {
        value /= BigRational::from_integer(num_traits::pow(ten, (-scale) as usize));
    }
    Some(if negative { -value } else { value })
}

impl Serialize for Scalar {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Scalar::Exact(_) => serializer.collect_str(self),
            Scalar::Float(x) => serializer.serialize_f64(*x),
        }
    }
}

/// Strings parse exactly; integer JSON numbers are exact; other numbers are floats.
impl<'de> Deserialize<'de> for Scalar {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        struct Visitor;

        impl de::Visitor<'_> for Visitor {
            type Value = Scalar;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a number, a decimal string, or a \"p/q\" string")
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<Scalar, E> {
                Ok(Scalar::from_i64(v, Mode::Exact))
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<Scalar, E> {
                Ok(Scalar::Exact(BigRational::from_integer(BigInt::from(v))))
            }

            fn visit_f64<E: de::Error>(self, v: f64) -> std::result::Result<Scalar, E> {
                if !v.is_finite() {
                    return Err(E::custom("non-finite scalar"));
                }
                Ok(Scalar::Float(v))
            }

            fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<Scalar, E> {
                v.parse().map_err(E::custom)
            }
        }

        deserializer.deserialize_any(Visitor)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_equality_is_literal_and_canonical() {
        assert!(Scalar::ratio(1, 3).try_eq(&Scalar::ratio(1, 3)).unwrap());
        assert!(Scalar::ratio(5, 9).try_eq(&Scalar::ratio(10, 18)).unwrap());
        assert!(!Scalar::ratio(1, 3)
            .try_eq(&"0.333333333".parse().unwrap())
            .unwrap());
    }

    #[test]
    fn float_equality_uses_tolerance() {
        // |0.333333333 - 1/3| = 3.33e-10, inside the default 1e-9 band.
        let diff = (0.333333333f64 - 1.0 / 3.0).abs();
        assert!(diff > 3.3e-10 && diff < 3.4e-10);
        let a = Scalar::float(0.333333333);
        let b = Scalar::float(1.0 / 3.0);
        assert!(a.try_eq(&b).unwrap());
        assert!(b.try_eq(&a).unwrap());
        assert!(!Scalar::float(0.3333333).try_eq(&b).unwrap());
    }

    #[test]
    fn mixed_modes_are_rejected() {
        assert_eq!(
            Scalar::ratio(1, 2).try_eq(&Scalar::float(0.5)),
            Err(Error::ModeMismatch)
        );
        assert_eq!(
            Scalar::ratio(1, 2).try_add(&Scalar::float(0.5)),
            Err(Error::ModeMismatch)
        );
    }

    #[test]
    #[should_panic(expected = "scalar arithmetic")]
    fn mixed_mode_operator_panics() {
        let _ = Scalar::ratio(1, 2) + Scalar::float(0.5);
    }

    #[test]
    fn parses_rationals_and_decimals() {
        assert_eq!("10/18".parse::<Scalar>().unwrap(), Scalar::ratio(5, 9));
        assert_eq!("-0.25".parse::<Scalar>().unwrap(), Scalar::ratio(-1, 4));
        assert_eq!("1.5e2".parse::<Scalar>().unwrap(), Scalar::ratio(150, 1));
        assert_eq!("25e-3".parse::<Scalar>().unwrap(), Scalar::ratio(1, 40));
        assert_eq!(".5".parse::<Scalar>().unwrap(), Scalar::ratio(1, 2));
        assert!("abc".parse::<Scalar>().is_err());
        assert!("1/0".parse::<Scalar>().is_err());
        assert!("".parse::<Scalar>().is_err());
        assert!("1.2.3".parse::<Scalar>().is_err());
    }

    #[test]
    fn json_round_trip_keeps_mode() {
        let exact: Scalar = serde_json::from_str("\"4/9\"").unwrap();
        assert_eq!(exact, Scalar::ratio(4, 9));
        assert_eq!(serde_json::to_string(&exact).unwrap(), "\"4/9\"");
        let int: Scalar = serde_json::from_str("3").unwrap();
        assert_eq!(int, Scalar::ratio(3, 1));
        let float: Scalar = serde_json::from_str("0.5").unwrap();
        assert_eq!(float, Scalar::float(0.5));
        assert_eq!(serde_json::to_string(&float).unwrap(), "0.5");
    }

    #[test]
    fn tolerant_ordering() {
        let a = Scalar::float(1.0);
        let b = Scalar::float(1.0 + 1e-12);
        assert!(a.le(&b) && b.le(&a));
        assert!(!Scalar::float(-1e-12).is_negative());
        assert!(Scalar::float(-1e-6).is_negative());
        assert!(Scalar::ratio(-1, 1_000_000_000_000).is_negative());
    }
}
