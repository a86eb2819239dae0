//! Coefficient fields.
//!
//! Place functions and atom vectors are generic over [`Scalar`]. Canonical
//! forms compare coefficients for equality, so exact rationals are the
//! intended instance; `f64` works for dyadic data.

use std::fmt::{Debug, Display};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, Signed};
use rand::Rng;

/// A signed ordered field of coefficients.
pub trait Scalar: Signed + FromPrimitive + Clone + PartialOrd + Debug + Display + FromStr {
    fn from_int(v: i64) -> Self {
        Self::from_i64(v).expect("integer coefficient must be representable")
    }

    fn ratio(num: i64, den: i64) -> Self {
        Self::from_int(num) / Self::from_int(den)
    }
}

impl<T> Scalar for T where T: Signed + FromPrimitive + Clone + PartialOrd + Debug + Display + FromStr {}

/// Exact rational scalar used throughout the verification suites.
pub type Rational = BigRational;

pub fn rational(num: i64, den: i64) -> Rational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Small nonzero coefficient `p/q` with `|p| <= 5`, `q <= 4`.
pub fn random_nonzero<S: Scalar, R: Rng + ?Sized>(rng: &mut R) -> S {
    let mut p = 0;
    while p == 0 {
        p = rng.gen_range(-5..=5);
    }
    S::ratio(p, rng.gen_range(1..=4))
}

pub(crate) fn max_of<S: Scalar>(a: &S, b: &S) -> S {
    if a >= b {
        a.clone()
    } else {
        b.clone()
    }
}

pub(crate) fn min_of<S: Scalar>(a: &S, b: &S) -> S {
    if a <= b {
        a.clone()
    } else {
        b.clone()
    }
}

/// Parses `p`, `-p` or `p/q`; falls back on the scalar's own `FromStr`.
pub fn parse_scalar<S: Scalar>(text: &str) -> Option<S> {
    let text = text.trim();
    if let Some((n, d)) = text.split_once('/') {
        let n: i64 = n.trim().parse().ok()?;
        let d: i64 = d.trim().parse().ok()?;
        if d == 0 {
            return None;
        }
        return Some(S::ratio(n, d));
    }
    if let Ok(v) = text.parse::<i64>() {
        return Some(S::from_int(v));
    }
    text.parse::<S>().ok()
}
