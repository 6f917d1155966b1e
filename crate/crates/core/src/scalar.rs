//! Scalars for structure constants.
//!
//! Normalisation factors `A^{-1/2}` and seed constants such as `sqrt(2)` rule
//! out plain rationals.  Values are kept exact as finite sums `sum_i r_i sqrt(s_i)`
//! with rational `r_i` and distinct square-free integer radicands `s_i`; the
//! square roots of distinct square-free integers are linearly independent over
//! the rationals, so structural equality is exact equality.  A radicand whose
//! square-free part cannot be certified by trial division falls back to a
//! high-precision rational approximation (`Approx`).

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::OnceLock;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{OrbError, Result};
use crate::rational::{format_rational, parse_rational, rational_to_f64};

/// Default working precision of the float tier, in bits.
pub const DEFAULT_PRECISION: u32 = 113;

const SIEVE_LIMIT: usize = 1 << 20;

fn small_primes() -> &'static [u32] {
    static PRIMES: OnceLock<Vec<u32>> = OnceLock::new();
    PRIMES.get_or_init(|| {
        let mut is_composite = vec![false; SIEVE_LIMIT + 1];
        let mut primes = Vec::new();
        for i in 2..=SIEVE_LIMIT {
            if !is_composite[i] {
                primes.push(i as u32);
                let mut j = i * i;
                while j <= SIEVE_LIMIT {
                    is_composite[j] = true;
                    j += i;
                }
            }
        }
        primes
    })
}

/// Splits `n = t^2 * u` with `u` square-free. Returns `None` when the
/// cofactor left after trial division cannot be certified square-free.
pub fn squarefree_split(n: &BigUint) -> Option<(BigUint, BigUint)> {
    if n.is_zero() {
        return Some((BigUint::zero(), BigUint::one()));
    }
    let mut rest = n.clone();
    let mut square = BigUint::one();
    let mut free = BigUint::one();
    for &p in small_primes() {
        let p_big = BigUint::from(p);
        if &p_big * &p_big > rest {
            break;
        }
        let mut e = 0u32;
        loop {
            let (q, r) = rest.div_rem(&p_big);
            if !r.is_zero() {
                break;
            }
            rest = q;
            e += 1;
        }
        if e > 0 {
            square *= p_big.pow(e / 2);
            if e % 2 == 1 {
                free *= &p_big;
            }
        }
    }
    if rest > BigUint::one() {
        let limit = BigUint::from(SIEVE_LIMIT as u64);
        if rest <= &limit * &limit {
            // no factor up to sqrt(rest): prime
            free *= rest;
        } else {
            let root = rest.sqrt();
            if &root * &root == rest {
                square *= root;
            } else {
                return None;
            }
        }
    }
    Some((square, free))
}

/// Exact value `sum_i coef_i * sqrt(radicand_i)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Surd {
    terms: BTreeMap<BigUint, BigRational>,
}

impl Surd {
    pub fn zero() -> Self {
        Surd { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Surd::from_rational(BigRational::one())
    }

    pub fn from_rational(r: BigRational) -> Self {
        let mut terms = BTreeMap::new();
        if !r.is_zero() {
            terms.insert(BigUint::one(), r);
        }
        Surd { terms }
    }

    /// `coef * sqrt(rad)` for a non-negative rational radicand.
    pub fn radical(coef: BigRational, rad: &BigRational) -> Option<Self> {
        if rad.is_negative() {
            return None;
        }
        Some(Self::sqrt_rational(rad)?.scale(&coef))
    }

    /// `sqrt(r)` for `r >= 0`; `None` if `r < 0` or the radicand cannot be certified.
    pub fn sqrt_rational(r: &BigRational) -> Option<Self> {
        if r.is_negative() {
            return None;
        }
        if r.is_zero() {
            return Some(Surd::zero());
        }
        // sqrt(p/q) = sqrt(p q) / q
        let p = r.numer().to_biguint()?;
        let q = r.denom().to_biguint()?;
        let (t, u) = squarefree_split(&(p * &q))?;
        let coef = BigRational::new(BigInt::from(t), BigInt::from(q));
        let mut terms = BTreeMap::new();
        terms.insert(u, coef);
        Some(Surd { terms })
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&BigUint, &BigRational)> {
        self.terms.iter()
    }

    pub fn as_rational(&self) -> Option<BigRational> {
        match self.terms.len() {
            0 => Some(BigRational::zero()),
            1 => {
                let (rad, coef) = self.terms.iter().next().unwrap();
                rad.is_one().then(|| coef.clone())
            }
            _ => None,
        }
    }

    /// `(coef, radicand)` when the value is a single radical term.
    pub fn as_single_radical(&self) -> Option<(BigRational, BigUint)> {
        match self.terms.len() {
            0 => Some((BigRational::zero(), BigUint::one())),
            1 => {
                let (rad, coef) = self.terms.iter().next().unwrap();
                Some((coef.clone(), rad.clone()))
            }
            _ => None,
        }
    }

    pub fn scale(&self, r: &BigRational) -> Self {
        if r.is_zero() {
            return Surd::zero();
        }
        Surd {
            terms: self.terms.iter().map(|(k, v)| (k.clone(), v * r)).collect(),
        }
    }

    fn add_term(&mut self, rad: BigUint, coef: BigRational) {
        if coef.is_zero() {
            return;
        }
        let slot = self.terms.entry(rad).or_insert_with(BigRational::zero);
        *slot += coef;
        if slot.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
    }

    pub fn add_assign_ref(&mut self, other: &Surd) {
        for (rad, coef) in &other.terms {
            self.add_term(rad.clone(), coef.clone());
        }
    }

    pub fn mul_ref(&self, other: &Surd) -> Surd {
        let mut out = Surd::zero();
        for (r1, c1) in &self.terms {
            for (r2, c2) in &other.terms {
                // both square-free: r1 r2 = g^2 (r1/g)(r2/g)
                let g = r1.gcd(r2);
                let rad = (r1 / &g) * (r2 / &g);
                let coef = c1 * c2 * BigRational::from_integer(BigInt::from(g));
                out.add_term(rad, coef);
            }
        }
        out
    }

    /// Square of the value, exact.
    pub fn square(&self) -> Surd {
        self.mul_ref(self)
    }

    pub fn to_f64(&self) -> f64 {
        self.terms
            .iter()
            .map(|(rad, coef)| rational_to_f64(coef) * rad.to_f64().unwrap_or(f64::MAX).sqrt())
            .sum()
    }

    /// Rational approximation with absolute error below `2^-bits` per term.
    pub fn approximate(&self, bits: u32) -> BigRational {
        let mut acc = BigRational::zero();
        for (rad, coef) in &self.terms {
            acc += coef * sqrt_approx(&BigRational::from_integer(BigInt::from(rad.clone())), bits + coef_bits(coef));
        }
        acc
    }

    /// Sign of the value (-1, 0, 1), decided by refining approximations.
    pub fn signum(&self) -> i32 {
        if self.is_zero() {
            return 0;
        }
        if let Some(r) = self.as_rational() {
            return if r.is_positive() { 1 } else { -1 };
        }
        let mut bits = 64;
        loop {
            let approx = self.approximate(bits);
            let err = BigRational::new(
                BigInt::from(self.terms.len() as u64 + 1),
                BigInt::one() << bits,
            );
            if approx > err {
                return 1;
            }
            if approx < -err {
                return -1;
            }
            bits *= 2;
            // distinct square-free radicals are independent, so a nonzero
            // value is eventually separated from zero
            assert!(bits < 1 << 20, "sign refinement did not terminate");
        }
    }
}

fn coef_bits(c: &BigRational) -> u32 {
    let n = c.numer().bits();
    let d = c.denom().bits();
    (n.saturating_sub(d) as u32) + 2
}

/// `sqrt(x)` rounded down to a multiple of `2^-bits`, for `x >= 0`.
pub fn sqrt_approx(x: &BigRational, bits: u32) -> BigRational {
    if !x.is_positive() {
        return BigRational::zero();
    }
    let scale = BigInt::one() << (2 * bits as usize);
    let scaled = (x.numer() * &scale) / x.denom();
    let root = scaled.sqrt();
    BigRational::new(root, BigInt::one() << bits as usize)
}

impl fmt::Display for Surd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (rad, coef) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if rad.is_one() {
                write!(f, "{}", format_rational(coef))?;
            } else if coef.is_one() {
                write!(f, "sqrt({rad})")?;
            } else {
                write!(f, "{}*sqrt({rad})", format_rational(coef))?;
            }
        }
        Ok(())
    }
}

/// A rational approximation carrying its working precision in bits.
#[derive(Clone, Debug, PartialEq)]
pub struct Approx {
    pub value: BigRational,
    pub bits: u32,
}

impl Approx {
    fn rounded(value: BigRational, bits: u32) -> Self {
        let denom = BigInt::one() << (bits as usize + 8);
        let scaled = (value * BigRational::from_integer(denom.clone())).round();
        Approx {
            value: BigRational::new(scaled.to_integer(), denom),
            bits,
        }
    }
}

/// Structure-constant scalar: exact surd or tracked-precision approximation.
#[derive(Clone, Debug, PartialEq)]
pub enum Scalar {
    Exact(Surd),
    Approx(Approx),
}

impl Default for Scalar {
    fn default() -> Self {
        Scalar::zero()
    }
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar::Exact(Surd::zero())
    }

    pub fn one() -> Self {
        Scalar::Exact(Surd::one())
    }

    pub fn rational(r: BigRational) -> Self {
        Scalar::Exact(Surd::from_rational(r))
    }

    pub fn from_f64(x: f64) -> Self {
        let value = BigRational::from_float(x).unwrap_or_else(BigRational::zero);
        Scalar::Approx(Approx { value, bits: 53 })
    }

    /// `sqrt(r)`, exact when the radicand can be certified.
    pub fn sqrt_rational(r: &BigRational) -> Result<Self> {
        if r.is_negative() {
            return Err(OrbError::Invalid(format!("square root of negative {}", format_rational(r))));
        }
        Ok(match Surd::sqrt_rational(r) {
            Some(s) => Scalar::Exact(s),
            None => Scalar::Approx(Approx {
                value: sqrt_approx(r, DEFAULT_PRECISION),
                bits: DEFAULT_PRECISION,
            }),
        })
    }

    /// `1/sqrt(r)` for `r > 0`.
    pub fn inv_sqrt_rational(r: &BigRational) -> Result<Self> {
        if !r.is_positive() {
            return Err(OrbError::Invalid(format!("inverse square root of {}", format_rational(r))));
        }
        Self::sqrt_rational(&r.recip())
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Exact(s) => s.is_zero(),
            Scalar::Approx(a) => a.value.is_zero(),
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Scalar::Exact(_))
    }

    pub fn as_surd(&self) -> Option<&Surd> {
        match self {
            Scalar::Exact(s) => Some(s),
            Scalar::Approx(_) => None,
        }
    }

    pub fn as_rational(&self) -> Option<BigRational> {
        self.as_surd().and_then(Surd::as_rational)
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Scalar::Exact(s) => s.to_f64(),
            Scalar::Approx(a) => rational_to_f64(&a.value),
        }
    }

    pub fn approximate(&self, bits: u32) -> BigRational {
        match self {
            Scalar::Exact(s) => s.approximate(bits),
            Scalar::Approx(a) => a.value.clone(),
        }
    }

    fn precision(&self) -> u32 {
        match self {
            Scalar::Exact(_) => DEFAULT_PRECISION,
            Scalar::Approx(a) => a.bits,
        }
    }

    pub fn scale(&self, r: &BigRational) -> Scalar {
        match self {
            Scalar::Exact(s) => Scalar::Exact(s.scale(r)),
            Scalar::Approx(a) => Scalar::Approx(Approx::rounded(&a.value * r, a.bits)),
        }
    }

    pub fn square(&self) -> Scalar {
        self * self
    }

    /// Exact equality for exact operands; otherwise agreement to a relative
    /// tolerance of `2^-rel_bits`.
    pub fn approx_eq(&self, other: &Scalar, rel_bits: u32) -> bool {
        if let (Scalar::Exact(a), Scalar::Exact(b)) = (self, other) {
            return a == b;
        }
        let bits = self.precision().min(other.precision()).max(rel_bits + 8);
        let a = self.approximate(bits);
        let b = other.approximate(bits);
        let scale = a.abs().max(b.abs()).max(BigRational::one());
        // never demand more agreement than the operands carry
        let tol_bits = rel_bits.min(self.precision().min(other.precision()).saturating_sub(8));
        let tol = scale * BigRational::new(BigInt::one(), BigInt::one() << tol_bits as usize);
        (a - b).abs() <= tol
    }

    /// Equality by squared magnitude and sign.
    pub fn squared_eq(&self, other: &Scalar) -> bool {
        match (self, other) {
            (Scalar::Exact(a), Scalar::Exact(b)) => a.signum() == b.signum() && a.square() == b.square(),
            _ => self.approx_eq(other, 80),
        }
    }
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, rhs: &'a Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Exact(a), Scalar::Exact(b)) => {
                let mut out = a.clone();
                out.add_assign_ref(b);
                Scalar::Exact(out)
            }
            _ => {
                let bits = self.precision().min(rhs.precision());
                Scalar::Approx(Approx::rounded(self.approximate(bits + 8) + rhs.approximate(bits + 8), bits))
            }
        }
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &'a Scalar) -> Scalar {
        self + &(-rhs)
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &'a Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Exact(a), Scalar::Exact(b)) => Scalar::Exact(a.mul_ref(b)),
            _ => {
                let bits = self.precision().min(rhs.precision());
                Scalar::Approx(Approx::rounded(self.approximate(bits + 8) * rhs.approximate(bits + 8), bits))
            }
        }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        self.scale(&-BigRational::one())
    }
}

impl Add for Scalar {
    type Output = Scalar;
    fn add(self, rhs: Scalar) -> Scalar {
        &self + &rhs
    }
}

impl Mul for Scalar {
    type Output = Scalar;
    fn mul(self, rhs: Scalar) -> Scalar {
        &self * &rhs
    }
}

impl std::iter::Sum for Scalar {
    fn sum<I: Iterator<Item = Scalar>>(iter: I) -> Scalar {
        let mut acc = Scalar::zero();
        for x in iter {
            acc = &acc + &x;
        }
        acc
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Exact(s) => write!(f, "{s}"),
            Scalar::Approx(a) => write!(f, "~{:.20e}", rational_to_f64(&a.value)),
        }
    }
}

/// JSON form of a scalar: `"p/q"`, `{"rad": "p/q", "coef": "r/s"}`, a list of
/// such radical terms, or a plain float.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(untagged)]
pub enum ScalarJson {
    Rational(String),
    Radical { rad: String, coef: String },
    Terms(Vec<RadicalTerm>),
    Float(f64),
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct RadicalTerm {
    pub rad: String,
    pub coef: String,
}

impl From<&Scalar> for ScalarJson {
    fn from(s: &Scalar) -> Self {
        match s {
            Scalar::Exact(surd) => {
                if let Some(r) = surd.as_rational() {
                    return ScalarJson::Rational(format_rational(&r));
                }
                if let Some((coef, rad)) = surd.as_single_radical() {
                    return ScalarJson::Radical {
                        rad: rad.to_string(),
                        coef: format_rational(&coef),
                    };
                }
                ScalarJson::Terms(
                    surd.terms()
                        .map(|(rad, coef)| RadicalTerm {
                            rad: rad.to_string(),
                            coef: format_rational(coef),
                        })
                        .collect(),
                )
            }
            Scalar::Approx(a) => ScalarJson::Float(rational_to_f64(&a.value)),
        }
    }
}

impl TryFrom<&ScalarJson> for Scalar {
    type Error = OrbError;
    fn try_from(j: &ScalarJson) -> Result<Scalar> {
        let radical = |rad: &str, coef: &str| -> Result<Scalar> {
            let rad = parse_rational(rad)?;
            let coef = parse_rational(coef)?;
            Ok(&Scalar::sqrt_rational(&rad)? * &Scalar::rational(coef))
        };
        match j {
            ScalarJson::Rational(s) => Ok(Scalar::rational(parse_rational(s)?)),
            ScalarJson::Radical { rad, coef } => radical(rad, coef),
            ScalarJson::Terms(ts) => {
                let mut acc = Scalar::zero();
                for t in ts {
                    acc = &acc + &radical(&t.rad, &t.coef)?;
                }
                Ok(acc)
            }
            ScalarJson::Float(x) => {
                if !x.is_finite() {
                    return Err(OrbError::Parse("non-finite float constant".into()));
                }
                Ok(Scalar::from_f64(*x))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};
    use proptest::prelude::*;

    fn sqrt(r: BigRational) -> Scalar {
        Scalar::sqrt_rational(&r).unwrap()
    }

    #[test]
    fn squarefree_parts() {
        let (t, u) = squarefree_split(&BigUint::from(72u32)).unwrap();
        assert_eq!((t, u), (BigUint::from(6u32), BigUint::from(2u32)));
        let (t, u) = squarefree_split(&BigUint::from(1u32)).unwrap();
        assert_eq!((t, u), (BigUint::one(), BigUint::one()));
        // a prime beyond the sieve
        let p = BigUint::from(1_000_003u64);
        let (t, u) = squarefree_split(&(&p * &p * 3u32)).unwrap();
        assert_eq!((t, u), (p, BigUint::from(3u32)));
    }

    #[test]
    fn radicals_multiply_exactly() {
        let s2 = sqrt(int(2));
        let s3 = sqrt(int(3));
        let s6 = sqrt(int(6));
        assert_eq!(&s2 * &s3, s6);
        assert_eq!(&s2 * &s2, Scalar::rational(int(2)));
        // 2/sqrt(3) = (2/3) sqrt(3)
        let v = Scalar::inv_sqrt_rational(&ratio(3, 4)).unwrap();
        assert_eq!(v.to_string(), "2/3*sqrt(3)");
        assert_eq!(v.square(), Scalar::rational(ratio(4, 3)));
    }

    #[test]
    fn sums_of_independent_radicals() {
        let a = &sqrt(int(2)) + &sqrt(int(3));
        let b = &sqrt(int(3)) + &sqrt(int(2));
        assert_eq!(a, b);
        assert!((&a - &b).is_zero());
        assert_eq!(a.as_surd().unwrap().signum(), 1);
        let c = &sqrt(int(2)) - &Scalar::rational(ratio(3, 2));
        assert_eq!(c.as_surd().unwrap().signum(), -1);
        assert!((a.to_f64() - (2f64.sqrt() + 3f64.sqrt())).abs() < 1e-12);
    }

    #[test]
    fn squared_comparison() {
        let a = Scalar::rational(ratio(1, 2));
        let b = Scalar::sqrt_rational(&ratio(1, 4)).unwrap();
        assert!(a.squared_eq(&b));
        assert!(!a.squared_eq(&-&b));
    }

    #[test]
    fn approx_tier_mixes_with_exact() {
        let x = Scalar::from_f64(0.5);
        let y = &x + &Scalar::rational(ratio(1, 2));
        assert!(y.approx_eq(&Scalar::one(), 40));
        assert!(!y.is_exact());
    }

    #[test]
    fn json_forms() {
        let v = &Scalar::rational(ratio(3, 2)) * &sqrt(int(2));
        let j = ScalarJson::from(&v);
        assert_eq!(j, ScalarJson::Radical { rad: "2".into(), coef: "3/2".into() });
        assert_eq!(Scalar::try_from(&j).unwrap(), v);
        let w = &v + &Scalar::one();
        let back = Scalar::try_from(&ScalarJson::from(&w)).unwrap();
        assert_eq!(back, w);
        let parsed: ScalarJson = serde_json::from_str(r#"{"rad": "1/2", "coef": "2"}"#).unwrap();
        assert_eq!(Scalar::try_from(&parsed).unwrap(), sqrt(int(2)));
    }

    fn small_surd() -> impl Strategy<Value = Scalar> {
        prop::collection::vec((-6i64..7, 1i64..5, 1i64..13), 1..4).prop_map(|terms| {
            terms
                .into_iter()
                .map(|(p, q, rad)| &Scalar::rational(ratio(p, q)) * &sqrt(int(rad)))
                .sum()
        })
    }

    proptest! {
        #[test]
        fn surd_ring_laws(a in small_surd(), b in small_surd(), c in small_surd()) {
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&a + &b, &b + &a);
            prop_assert!((&a - &a).is_zero());
            let f = (&a * &b).to_f64();
            prop_assert!((f - a.to_f64() * b.to_f64()).abs() < 1e-9 * (1.0 + f.abs()));
        }
    }
}
