//! Helpers for exact rationals: "p/q" string encoding, serde adapters and
//! a few integer utilities shared by the other modules.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serializer};

use crate::error::{OrbError, Result};

/// Formats a rational as `"p"` when integral and `"p/q"` otherwise.
pub fn format_rational(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses `"p"` or `"p/q"` (no decimal points).
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || OrbError::Parse(format!("not a rational literal: {s:?}"));
    match s.split_once('/') {
        None => {
            let n: BigInt = s.parse().map_err(|_| bad())?;
            Ok(BigRational::from_integer(n))
        }
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().map_err(|_| bad())?;
            let q: BigInt = q.trim().parse().map_err(|_| bad())?;
            if q.is_zero() {
                return Err(OrbError::Parse(format!("zero denominator in {s:?}")));
            }
            Ok(BigRational::new(p, q))
        }
    }
}

pub fn int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn ratio(p: i64, q: i64) -> BigRational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

pub fn from_biguint(n: &BigUint) -> BigRational {
    BigRational::from_integer(BigInt::from(n.clone()))
}

/// Exact integer value of a rational, if it is a non-negative integer.
pub fn to_biguint(r: &BigRational) -> Option<BigUint> {
    if r.is_integer() && !r.is_negative() {
        r.numer().to_biguint()
    } else {
        None
    }
}

pub fn factorial(n: u64) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, k| acc * k)
}

/// Generalised binomial coefficient `binom(m, j)` for any integer `m` and `j >= 0`.
pub fn binomial_signed(m: i64, j: i64) -> BigInt {
    if j < 0 {
        return BigInt::zero();
    }
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for i in 0..j {
        num *= BigInt::from(m - i);
        den *= BigInt::from(i + 1);
    }
    num / den
}

pub fn binomial(n: &BigUint, k: u64) -> BigUint {
    let mut acc = BigUint::one();
    for i in 0..k {
        if *n < BigUint::from(i + 1) {
            return BigUint::zero();
        }
        acc = acc * (n - BigUint::from(i)) / BigUint::from(i + 1);
    }
    acc
}

/// Natural log of a positive big integer, accurate to f64 precision.
pub fn ln_biguint(n: &BigUint) -> f64 {
    let bits = n.bits();
    if bits <= 1000 {
        if let Some(f) = n.to_f64() {
            return f.ln();
        }
    }
    let shift = bits.saturating_sub(64);
    let top = (n >> shift).to_f64().unwrap_or(f64::MAX);
    top.ln() + (shift as f64) * std::f64::consts::LN_2
}

pub fn rational_to_f64(r: &BigRational) -> f64 {
    if let Some(f) = r.to_f64() {
        if f.is_finite() {
            return f;
        }
    }
    let sign = if r.is_negative() { -1.0 } else { 1.0 };
    let n = r.numer().abs().to_biguint().unwrap_or_default();
    let d = r.denom().to_biguint().unwrap_or_else(BigUint::one);
    if n.is_zero() {
        return 0.0;
    }
    sign * (ln_biguint(&n) - ln_biguint(&d)).exp()
}

pub fn gcd_u64(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

/// Serde adapter: a `BigRational` stored as a `"p/q"` string.
pub mod serde_rational {
    use super::*;

    pub fn serialize<S: Serializer>(r: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<BigRational, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).map_err(serde::de::Error::custom)
    }
}

/// Serde adapter for `Vec<BigRational>` as a list of strings.
pub mod serde_rational_vec {
    use super::*;
    use serde::ser::SerializeSeq;

    pub fn serialize<S: Serializer>(v: &[BigRational], s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(v.len()))?;
        for r in v {
            seq.serialize_element(&format_rational(r))?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<BigRational>, D::Error> {
        let v = Vec::<String>::deserialize(d)?;
        v.iter()
            .map(|s| parse_rational(s).map_err(serde::de::Error::custom))
            .collect()
    }
}

/// Serde adapter for `Option<BigRational>` (`null` or `"p/q"`).
pub mod serde_rational_opt {
    use super::*;

    pub fn serialize<S: Serializer>(r: &Option<BigRational>, s: S) -> std::result::Result<S::Ok, S::Error> {
        match r {
            Some(r) => s.serialize_some(&format_rational(r)),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Option<BigRational>, D::Error> {
        Option::<String>::deserialize(d)?
            .map(|s| parse_rational(&s).map_err(serde::de::Error::custom))
            .transpose()
    }
}

/// Serde adapter: a `BigUint` stored as a decimal string.
pub mod serde_biguint {
    use super::*;

    pub fn serialize<S: Serializer>(n: &BigUint, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&n.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<BigUint, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_strings() {
        assert_eq!(format_rational(&ratio(6, 4)), "3/2");
        assert_eq!(format_rational(&int(-7)), "-7");
        assert_eq!(parse_rational("3/2").unwrap(), ratio(3, 2));
        assert_eq!(parse_rational(" 10 ").unwrap(), int(10));
        assert!(parse_rational("1.5").is_err());
        assert!(parse_rational("1/0").is_err());
    }

    #[test]
    fn generalised_binomials() {
        assert_eq!(binomial_signed(5, 2), BigInt::from(10));
        assert_eq!(binomial_signed(-1, 3), BigInt::from(-1));
        assert_eq!(binomial_signed(-2, 2), BigInt::from(3));
        assert_eq!(binomial_signed(0, 1), BigInt::zero());
        assert_eq!(binomial_signed(3, -1), BigInt::zero());
        assert_eq!(binomial(&BigUint::from(4u32), 2), BigUint::from(6u32));
        assert_eq!(binomial(&BigUint::from(1u32), 2), BigUint::zero());
    }

    #[test]
    fn log_of_huge_integer() {
        let n = factorial(300);
        let direct: f64 = (1..=300).map(|k| (k as f64).ln()).sum();
        assert!((ln_biguint(&n) - direct).abs() < 1e-9 * direct);
    }
}
