//! Coefficient rings for polynomial and series arithmetic.
//!
//! Everything in this crate that stores coefficients is generic over [`Coeff`].
//! The integral presentations use [`BigInt`]; the Riemann–Roch transport and
//! rational window algebra use [`BigRational`]. Machine integers are supported
//! for quick experiments but can overflow.

use std::fmt::Debug;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::{BigRational, Ratio};
use num_traits::{One, ToPrimitive, Zero};
use serde_json::Value;

/// An exact commutative coefficient ring.
pub trait Coeff:
    Clone
    + Debug
    + PartialEq
    + Eq
    + Zero
    + One
    + Neg<Output = Self>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Send
    + Sync
{
    /// `Some(q)` with `q * rhs == self`, or `None` when no such `q` exists.
    fn div_exact(&self, rhs: &Self) -> Option<Self>;

    fn from_i64(v: i64) -> Self;

    /// JSON form: a number when it fits in `i64`, otherwise a decimal string
    /// (rationals use `"p/q"`).
    fn to_json(&self) -> Value;

    fn from_json(v: &Value) -> Option<Self>;
}

fn bigint_to_json(v: &BigInt) -> Value {
    match v.to_i64() {
        Some(x) => Value::from(x),
        None => Value::String(v.to_string()),
    }
}

fn bigint_from_json(v: &Value) -> Option<BigInt> {
    match v {
        Value::Number(n) => n.as_i64().map(BigInt::from),
        Value::String(s) => s.parse().ok(),
        _ => None,
    }
}

impl Coeff for BigInt {
    fn div_exact(&self, rhs: &Self) -> Option<Self> {
        if rhs.is_zero() {
            return None;
        }
        let (q, r) = self.div_rem(rhs);
        r.is_zero().then_some(q)
    }

    fn from_i64(v: i64) -> Self {
        BigInt::from(v)
    }

    fn to_json(&self) -> Value {
        bigint_to_json(self)
    }

    fn from_json(v: &Value) -> Option<Self> {
        bigint_from_json(v)
    }
}

impl Coeff for BigRational {
    fn div_exact(&self, rhs: &Self) -> Option<Self> {
        (!rhs.is_zero()).then(|| self / rhs)
    }

    fn from_i64(v: i64) -> Self {
        Ratio::from_integer(BigInt::from(v))
    }

    fn to_json(&self) -> Value {
        if self.is_integer() {
            bigint_to_json(self.numer())
        } else {
            Value::String(format!("{}/{}", self.numer(), self.denom()))
        }
    }

    fn from_json(v: &Value) -> Option<Self> {
        if let Value::String(s) = v {
            if let Some((p, q)) = s.split_once('/') {
                let q: BigInt = q.trim().parse().ok()?;
                if q.is_zero() {
                    return None;
                }
                return Some(Ratio::new(p.trim().parse().ok()?, q));
            }
        }
        bigint_from_json(v).map(Ratio::from_integer)
    }
}

macro_rules! machine_int_coeff {
    ($($t:ty),*) => {$(
        impl Coeff for $t {
            fn div_exact(&self, rhs: &Self) -> Option<Self> {
                if *rhs == 0 {
                    return None;
                }
                (self % rhs == 0).then(|| self / rhs)
            }

            fn from_i64(v: i64) -> Self {
                v as $t
            }

            fn to_json(&self) -> Value {
                bigint_to_json(&BigInt::from(*self))
            }

            fn from_json(v: &Value) -> Option<Self> {
                bigint_from_json(v)?.try_into().ok()
            }
        }
    )*};
}

machine_int_coeff!(i64, i128);

/// Lift an integer into the rationals.
pub fn to_rational(v: &BigInt) -> BigRational {
    Ratio::from_integer(v.clone())
}
