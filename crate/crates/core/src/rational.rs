//! Exact rational numbers.
//!
//! `Rational` is `num`'s arbitrary-precision `BigRational`: always reduced,
//! denominator always positive. Helpers below cover the construction and
//! parsing patterns used throughout the crate.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

/// Integer as a rational.
pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Quotient of two integers. Panics on zero denominator.
pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// n-th power of an integer as a rational.
pub fn int_pow(base: i64, exp: u32) -> Rational {
    Rational::from_integer(BigInt::from(base).pow(exp))
}

/// 1/k! as a rational.
pub fn inv_factorial(k: u32) -> Rational {
    let mut f = BigInt::one();
    for i in 2..=k.max(1) {
        f *= BigInt::from(i);
    }
    Rational::new(BigInt::one(), f)
}

/// Parse `p`, `-p`, or `p/q` into a rational.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let parse_int = |t: &str| -> Result<BigInt> {
        t.parse::<BigInt>()
            .map_err(|_| Error::SpecError(format!("`{t}` is not an integer")))
    };
    match s.split_once('/') {
        None => Ok(Rational::from_integer(parse_int(s)?)),
        Some((p, q)) => {
            let den = parse_int(q)?;
            if den.is_zero() {
                return Err(Error::SpecError(format!("zero denominator in `{s}`")));
            }
            Ok(Rational::new(parse_int(p)?, den))
        }
    }
}

/// Canonical rendering: `p` for integers, `p/q` otherwise.
pub fn render(q: &Rational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// True if the rational is negative (used by renderers).
pub fn is_negative(q: &Rational) -> bool {
    q.is_negative()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduced_and_positive_denominator() {
        let q = ratio(4, -6);
        assert_eq!(render(&q), "-2/3");
        assert_eq!(q.denom(), &BigInt::from(3));
    }

    #[test]
    fn parse_roundtrip() {
        assert_eq!(parse_rational("7").unwrap(), rat(7));
        assert_eq!(parse_rational("-3/9").unwrap(), ratio(-1, 3));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn inv_factorial_values() {
        assert_eq!(inv_factorial(0), rat(1));
        assert_eq!(inv_factorial(1), rat(1));
        assert_eq!(inv_factorial(4), ratio(1, 24));
    }
}
