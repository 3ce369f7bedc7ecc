//! Exact rational scalars and their `"p/q"` text form.

use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use thiserror::Error;

/// Arbitrary precision rational, always kept in lowest terms with a
/// positive denominator.
pub type Rational = num_rational::BigRational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("malformed rational {0:?}: expected \"p/q\" or \"p\" with q > 0")]
pub struct ParseRationalError(pub String);

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn frac(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

pub fn zero() -> Rational {
    Rational::zero()
}

pub fn one() -> Rational {
    Rational::one()
}

/// Canonical interchange form. Integers are still written with a `/1`
/// denominator so every value has the same shape on the wire.
pub fn to_string(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Accepts `"p/q"` (any sign on `p`, `q > 0`) or a bare integer `"p"`.
/// Non-reduced input is reduced.
pub fn parse(s: &str) -> Result<Rational, ParseRationalError> {
    let err = || ParseRationalError(s.to_string());
    let trimmed = s.trim();
    match trimmed.split_once('/') {
        Some((p, q)) => {
            let p = BigInt::from_str(p.trim()).map_err(|_| err())?;
            let q = BigInt::from_str(q.trim()).map_err(|_| err())?;
            if q <= BigInt::zero() {
                return Err(err());
            }
            Ok(Rational::new(p, q))
        }
        None => BigInt::from_str(trimmed)
            .map(Rational::from_integer)
            .map_err(|_| err()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_form_is_canonical() {
        assert_eq!(to_string(&frac(2, -4)), "-1/2");
        assert_eq!(to_string(&int(3)), "3/1");
        assert_eq!(to_string(&zero()), "0/1");
    }

    #[test]
    fn parse_accepts_both_shapes() {
        assert_eq!(parse("6/4").unwrap(), frac(3, 2));
        assert_eq!(parse("-7").unwrap(), int(-7));
        assert_eq!(parse(" 1 / 3 ").unwrap(), frac(1, 3));
    }

    #[test]
    fn parse_rejects_garbage() {
        assert!(parse("1/0").is_err());
        assert!(parse("1/-2").is_err());
        assert!(parse("x").is_err());
        assert!(parse("").is_err());
    }
}
