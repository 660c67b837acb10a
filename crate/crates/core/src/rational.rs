//! The exact coefficient field.
//!
//! `Rational` is an arbitrary-precision fraction, always stored reduced with a
//! positive denominator.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Rational = BigRational;

/// Integer-valued rational.
pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `p/q`; panics on `q == 0`.
pub fn ratio(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

/// Renders a rational as `p/q` (the denominator is always written).
pub fn to_pq(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Parses `p`, `-p`, or `p/q`.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().ok()?;
            let q: BigInt = q.trim().parse().ok()?;
            if q.is_zero() {
                return None;
            }
            Some(Rational::new(p, q))
        }
        None => s.parse::<BigInt>().ok().map(Rational::from_integer),
    }
}

/// The integer value of `r`, if it is one and fits in an `i64`.
pub fn as_i64(r: &Rational) -> Option<i64> {
    if r.is_integer() {
        r.numer().to_i64()
    } else {
        None
    }
}

/// `base^exp` for an integer exponent of either sign. Panics on `0^negative`.
pub fn pow_i64(base: &Rational, exp: i64) -> Rational {
    let mut acc = Rational::one();
    let mut b = if exp < 0 { base.recip() } else { base.clone() };
    let mut e = exp.unsigned_abs();
    while e > 0 {
        if e.is_odd() {
            acc *= &b;
        }
        e >>= 1;
        if e > 0 {
            b = &b * &b;
        }
    }
    acc
}

/// Generalized binomial coefficient `top (top-1) ... (top-bottom+1) / bottom!`.
///
/// `top` may be negative; the value for `bottom = 0` is 1. The result is always
/// an integer and vanishes exactly when `0 <= top < bottom`.
pub fn binom_general(top: &BigInt, bottom: u64) -> Rational {
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for i in 0..bottom {
        num *= top - BigInt::from(i);
        den *= BigInt::from(i + 1);
    }
    Rational::new(num, den)
}

/// [`binom_general`] for machine-sized arguments.
pub fn binom(top: i64, bottom: u64) -> Rational {
    binom_general(&BigInt::from(top), bottom)
}

/// Whether the rational is a non-negative integer.
pub fn is_natural(r: &Rational) -> bool {
    r.is_integer() && !r.is_negative()
}
