//! Scalar types the tensor kernels are generic over.
//!
//! Integer arithmetic is checked: every kernel propagates overflow as
//! [`Error::Overflow`] instead of wrapping.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde_json::Value;

use crate::error::{Error, Result};

/// Tag naming a concrete scalar type in serialized files.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ScalarKind {
    Int,
    Rational,
    Gf2,
    F64,
}

impl ScalarKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ScalarKind::Int => "int",
            ScalarKind::Rational => "rational",
            ScalarKind::Gf2 => "gf2",
            ScalarKind::F64 => "f64",
        }
    }
}

impl fmt::Display for ScalarKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ScalarKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "int" => Ok(ScalarKind::Int),
            "rational" => Ok(ScalarKind::Rational),
            "gf2" => Ok(ScalarKind::Gf2),
            "f64" => Ok(ScalarKind::F64),
            other => Err(Error::parse(format!("unknown scalar type {other:?}"))),
        }
    }
}

/// A ring element usable as a tensor entry.
pub trait Scalar: Clone + PartialEq + fmt::Debug + Send + Sync + 'static {
    const KIND: ScalarKind;

    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn checked_add(&self, rhs: &Self) -> Option<Self>;
    fn checked_mul(&self, rhs: &Self) -> Option<Self>;
    fn checked_neg(&self) -> Option<Self>;
    /// Image of an integer under the canonical ring map.
    fn from_i64(v: i64) -> Option<Self>;

    fn to_json(&self) -> Value;
    fn from_json(v: &Value) -> Result<Self>;

    fn try_add(&self, rhs: &Self) -> Result<Self> {
        self.checked_add(rhs).ok_or(Error::Overflow)
    }

    fn try_mul(&self, rhs: &Self) -> Result<Self> {
        self.checked_mul(rhs).ok_or(Error::Overflow)
    }

    fn try_sub(&self, rhs: &Self) -> Result<Self> {
        self.try_add(&rhs.checked_neg().ok_or(Error::Overflow)?)
    }

    fn try_from_i64(v: i64) -> Result<Self> {
        Self::from_i64(v).ok_or(Error::Overflow)
    }
}

/// A scalar type with multiplicative inverses.
pub trait Field: Scalar {
    fn inverse(&self) -> Option<Self>;
}

impl Scalar for i64 {
    const KIND: ScalarKind = ScalarKind::Int;

    fn zero() -> Self {
        0
    }
    fn one() -> Self {
        1
    }
    fn is_zero(&self) -> bool {
        *self == 0
    }
    fn checked_add(&self, rhs: &Self) -> Option<Self> {
        i64::checked_add(*self, *rhs)
    }
    fn checked_mul(&self, rhs: &Self) -> Option<Self> {
        i64::checked_mul(*self, *rhs)
    }
    fn checked_neg(&self) -> Option<Self> {
        i64::checked_neg(*self)
    }
    fn from_i64(v: i64) -> Option<Self> {
        Some(v)
    }
    fn to_json(&self) -> Value {
        Value::from(*self)
    }
    fn from_json(v: &Value) -> Result<Self> {
        v.as_i64()
            .ok_or_else(|| Error::parse(format!("expected an integer, got {v}")))
    }
}

impl Scalar for f64 {
    const KIND: ScalarKind = ScalarKind::F64;

    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn is_zero(&self) -> bool {
        *self == 0.0
    }
    fn checked_add(&self, rhs: &Self) -> Option<Self> {
        Some(self + rhs)
    }
    fn checked_mul(&self, rhs: &Self) -> Option<Self> {
        Some(self * rhs)
    }
    fn checked_neg(&self) -> Option<Self> {
        Some(-self)
    }
    fn from_i64(v: i64) -> Option<Self> {
        Some(v as f64)
    }
    fn to_json(&self) -> Value {
        // Non-finite values have no JSON representation and serialize as null.
        Value::from(*self)
    }
    fn from_json(v: &Value) -> Result<Self> {
        v.as_f64()
            .ok_or_else(|| Error::parse(format!("expected a number, got {v}")))
    }
}

impl Scalar for BigRational {
    const KIND: ScalarKind = ScalarKind::Rational;

    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn checked_add(&self, rhs: &Self) -> Option<Self> {
        Some(self + rhs)
    }
    fn checked_mul(&self, rhs: &Self) -> Option<Self> {
        Some(self * rhs)
    }
    fn checked_neg(&self) -> Option<Self> {
        Some(-self)
    }
    fn from_i64(v: i64) -> Option<Self> {
        Some(BigRational::from_integer(BigInt::from(v)))
    }
    fn to_json(&self) -> Value {
        Value::String(format!("{}/{}", self.numer(), self.denom()))
    }
    fn from_json(v: &Value) -> Result<Self> {
        match v {
            Value::String(s) => parse_rational(s),
            Value::Number(num) => num
                .as_i64()
                .map(|i| BigRational::from_integer(BigInt::from(i)))
                .ok_or_else(|| Error::parse(format!("expected an integer or \"p/q\", got {v}"))),
            _ => Err(Error::parse(format!("expected \"p/q\", got {v}"))),
        }
    }
}

impl Field for BigRational {
    fn inverse(&self) -> Option<Self> {
        if Zero::is_zero(self) {
            None
        } else {
            Some(self.recip())
        }
    }
}

fn parse_rational(s: &str) -> Result<BigRational> {
    let bad = || Error::parse(format!("malformed rational {s:?}"));
    let (numer, denom) = match s.split_once('/') {
        Some((p, q)) => (p.trim(), q.trim()),
        None => (s.trim(), "1"),
    };
    let numer: BigInt = numer.parse().map_err(|_| bad())?;
    let denom: BigInt = denom.parse().map_err(|_| bad())?;
    if Zero::is_zero(&denom) {
        return Err(Error::parse(format!("zero denominator in {s:?}")));
    }
    Ok(BigRational::new(numer, denom))
}

/// Element of the two-element field.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Gf2(pub bool);

impl Gf2 {
    pub const ZERO: Gf2 = Gf2(false);
    pub const ONE: Gf2 = Gf2(true);
}

impl Scalar for Gf2 {
    const KIND: ScalarKind = ScalarKind::Gf2;

    fn zero() -> Self {
        Gf2::ZERO
    }
    fn one() -> Self {
        Gf2::ONE
    }
    fn is_zero(&self) -> bool {
        !self.0
    }
    fn checked_add(&self, rhs: &Self) -> Option<Self> {
        Some(Gf2(self.0 ^ rhs.0))
    }
    fn checked_mul(&self, rhs: &Self) -> Option<Self> {
        Some(Gf2(self.0 & rhs.0))
    }
    fn checked_neg(&self) -> Option<Self> {
        Some(*self)
    }
    fn from_i64(v: i64) -> Option<Self> {
        Some(Gf2(v.rem_euclid(2) == 1))
    }
    fn to_json(&self) -> Value {
        Value::from(u8::from(self.0))
    }
    fn from_json(v: &Value) -> Result<Self> {
        match v.as_u64() {
            Some(0) => Ok(Gf2::ZERO),
            Some(1) => Ok(Gf2::ONE),
            _ => Err(Error::parse(format!("expected 0 or 1, got {v}"))),
        }
    }
}

impl Field for Gf2 {
    fn inverse(&self) -> Option<Self> {
        self.0.then_some(Gf2::ONE)
    }
}

/// Converts an exact rational to `i64` when it is an integer in range.
pub fn rational_to_i64(r: &BigRational) -> Option<i64> {
    if r.is_integer() {
        r.to_integer().to_i64()
    } else {
        None
    }
}
