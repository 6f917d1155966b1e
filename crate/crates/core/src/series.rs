//! Exact truncated power series and the character formulas built on them.
//!
//! Every series carries an explicit inclusive truncation order. Binary
//! operations work at the smaller of the two orders and never extend it.

use std::collections::HashMap;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{OrbError, Result};
use crate::groups::CycleIndex;
use crate::rational::{binomial, format_rational, serde_rational_vec, to_biguint};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "SeriesRepr", into = "SeriesRepr")]
pub struct TruncatedSeries {
    order: usize,
    coeffs: Vec<BigRational>,
}

#[derive(Serialize, Deserialize)]
struct SeriesRepr {
    order: usize,
    #[serde(with = "serde_rational_vec")]
    coeffs: Vec<BigRational>,
}

impl TryFrom<SeriesRepr> for TruncatedSeries {
    type Error = OrbError;
    fn try_from(r: SeriesRepr) -> Result<Self> {
        if r.coeffs.len() != r.order + 1 {
            return Err(OrbError::Parse(format!(
                "series of order {} needs {} coefficients, got {}",
                r.order,
                r.order + 1,
                r.coeffs.len()
            )));
        }
        Ok(TruncatedSeries { order: r.order, coeffs: r.coeffs })
    }
}

impl From<TruncatedSeries> for SeriesRepr {
    fn from(s: TruncatedSeries) -> Self {
        SeriesRepr { order: s.order, coeffs: s.coeffs }
    }
}

/// Binary/unary operations accepted by [`series_arith`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SeriesOp {
    Add,
    Mul,
    Pow(u32),
    Recip,
}

impl TruncatedSeries {
    pub fn zero(order: usize) -> Self {
        TruncatedSeries { order, coeffs: vec![BigRational::zero(); order + 1] }
    }

    pub fn one(order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = BigRational::one();
        s
    }

    /// Builds a series from leading coefficients, zero-padded up to `order`.
    pub fn from_coeffs(coeffs: Vec<BigRational>, order: usize) -> Self {
        let mut s = Self::zero(order);
        for (slot, c) in s.coeffs.iter_mut().zip(coeffs) {
            *slot = c;
        }
        s
    }

    pub fn from_integers(coeffs: &[i64], order: usize) -> Self {
        Self::from_coeffs(coeffs.iter().map(|&c| BigRational::from_integer(c.into())).collect(), order)
    }

    pub fn from_biguints(coeffs: &[BigUint], order: usize) -> Self {
        Self::from_coeffs(
            coeffs.iter().map(|c| BigRational::from_integer(BigInt::from(c.clone()))).collect(),
            order,
        )
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    /// Coefficient of `t^n`, or `None` past the truncation order.
    pub fn coeff(&self, n: usize) -> Option<&BigRational> {
        self.coeffs.get(n)
    }

    pub fn truncate(&self, order: usize) -> Self {
        let order = order.min(self.order);
        TruncatedSeries { order, coeffs: self.coeffs[..=order].to_vec() }
    }

    /// Integer coefficients, if all coefficients are non-negative integers.
    pub fn to_biguints(&self) -> Option<Vec<BigUint>> {
        self.coeffs.iter().map(to_biguint).collect()
    }

    pub fn is_nonneg_integral(&self) -> bool {
        self.to_biguints().is_some()
    }

    pub fn add(&self, other: &Self) -> Self {
        let order = self.order.min(other.order);
        TruncatedSeries {
            order,
            coeffs: (0..=order).map(|i| &self.coeffs[i] + &other.coeffs[i]).collect(),
        }
    }

    pub fn scale(&self, r: &BigRational) -> Self {
        TruncatedSeries { order: self.order, coeffs: self.coeffs.iter().map(|c| c * r).collect() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let order = self.order.min(other.order);
        let mut out = vec![BigRational::zero(); order + 1];
        for (i, a) in self.coeffs.iter().enumerate().take(order + 1) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(order + 1 - i) {
                if !b.is_zero() {
                    out[i + j] += a * b;
                }
            }
        }
        TruncatedSeries { order, coeffs: out }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut result = Self::one(self.order);
        let mut base = self.clone();
        let mut e = k;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        result
    }

    pub fn recip(&self) -> Result<Self> {
        let c0 = &self.coeffs[0];
        if c0.is_zero() {
            return Err(OrbError::Invalid("reciprocal of a series with zero constant term".into()));
        }
        let inv0 = c0.recip();
        let mut out = vec![BigRational::zero(); self.order + 1];
        out[0] = inv0.clone();
        for n in 1..=self.order {
            let mut acc = BigRational::zero();
            for k in 1..=n {
                if !self.coeffs[k].is_zero() {
                    acc += &self.coeffs[k] * &out[n - k];
                }
            }
            out[n] = -acc * &inv0;
        }
        Ok(TruncatedSeries { order: self.order, coeffs: out })
    }

    /// Substitution `t -> t^k`, kept at the same truncation order.
    pub fn dilate(&self, k: usize) -> Self {
        assert!(k >= 1);
        let mut out = Self::zero(self.order);
        for (i, c) in self.coeffs.iter().enumerate() {
            if i * k > self.order {
                break;
            }
            out.coeffs[i * k] = c.clone();
        }
        out
    }
}

impl fmt::Display for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let c = format_rational(c);
            parts.push(match i {
                0 => c,
                1 => format!("{c}*t"),
                _ => format!("{c}*t^{i}"),
            });
        }
        if parts.is_empty() {
            parts.push("0".into());
        }
        write!(f, "{} + O(t^{})", parts.join(" + "), self.order + 1)
    }
}

/// Applies `op` to `a` (and `b` for binary operations).
pub fn series_arith(a: &TruncatedSeries, b: Option<&TruncatedSeries>, op: SeriesOp) -> Result<TruncatedSeries> {
    let need_b = || b.ok_or_else(|| OrbError::Invalid(format!("{op:?} needs two operands")));
    match op {
        SeriesOp::Add => Ok(a.add(need_b()?)),
        SeriesOp::Mul => Ok(a.mul(need_b()?)),
        SeriesOp::Pow(k) => Ok(a.pow(k)),
        SeriesOp::Recip => a.recip(),
    }
}

/// Fixed-point character `Z(t) = chi(a(t), a(t^2), ...)`: substitutes
/// `s_k -> a(t^k)` in every cycle-type monomial of `z` and sums with the
/// monomial weights. Output coefficients are orbit counts `b_n`.
pub fn cycle_index_character(z: &CycleIndex, a: &TruncatedSeries, order: usize) -> Result<TruncatedSeries> {
    if a.coeffs[0] != BigRational::one() {
        return Err(OrbError::Invalid("seed character must have constant term 1".into()));
    }
    let order = order.min(a.order());
    let a = a.truncate(order);
    let mut powers: HashMap<(usize, usize), TruncatedSeries> = HashMap::new();
    let mut total = TruncatedSeries::zero(order);
    for (cycle_type, weight) in z.terms() {
        let mut term = TruncatedSeries::one(order);
        for (&k, &m) in cycle_type.multiplicities() {
            if k as usize > order {
                // a(t^k) = 1 + O(t^{k}) is invisible at this order
                continue;
            }
            let key = (k as usize, m as usize);
            let factor = powers
                .entry(key)
                .or_insert_with(|| a.dilate(k as usize).pow(m));
            term = term.mul(factor);
        }
        total = total.add(&term.scale(weight));
    }
    if !total.is_nonneg_integral() {
        return Err(OrbError::Validation(format!(
            "cycle-index substitution produced non-integral coefficients ({total}); the cycle index is inconsistent with a group"
        )));
    }
    Ok(total)
}

/// `prod_{m>=1} (1 - t^m)^{-a_m}`: the multiset (symmetric-group limit) character.
pub fn sym_limit_character(a: &TruncatedSeries, order: usize) -> Result<TruncatedSeries> {
    if a.coeffs[0] != BigRational::one() {
        return Err(OrbError::Invalid("seed character must have constant term 1".into()));
    }
    let order = order.min(a.order());
    let mut out = TruncatedSeries::one(order);
    for m in 1..=order {
        let am = &a.coeffs[m];
        if am.is_negative() || !am.is_integer() {
            return Err(OrbError::Invalid(format!(
                "coefficient a_{m} = {} is not a non-negative integer",
                format_rational(am)
            )));
        }
        let am = am.to_integer().to_biguint().unwrap();
        if am.is_zero() {
            continue;
        }
        // (1 - t^m)^{-a} = sum_j binom(a + j - 1, j) t^{m j}
        let mut factor = TruncatedSeries::zero(order);
        for j in 0..=(order / m) {
            let top = &am + BigUint::from(j) - BigUint::one();
            let c = if j == 0 { BigUint::one() } else { binomial(&top, j as u64) };
            factor.coeffs[m * j] = BigRational::from_integer(BigInt::from(c));
        }
        out = out.mul(&factor);
    }
    Ok(out)
}

/// Number of E8 lattice vectors of norm `2m` for `m = 0..=order`.
///
/// The lattice is `D8 ∪ (D8 + (1/2)^8)`; both cosets are counted shell by
/// shell with a coordinate-by-coordinate dynamic programme over
/// (partial norm, partial coordinate sum).
pub fn e8_theta_coefficients(order: usize) -> Vec<BigUint> {
    let max_norm = 2 * order;
    // integer coset: x in Z^8, sum even
    let bound = (max_norm as f64).sqrt().floor() as i64;
    let mut dp = vec![[0u128; 2]; max_norm + 1];
    dp[0][0] = 1;
    for _ in 0..8 {
        let mut next = vec![[0u128; 2]; max_norm + 1];
        for norm in 0..=max_norm {
            for parity in 0..2 {
                let cnt = dp[norm][parity];
                if cnt == 0 {
                    continue;
                }
                for x in -bound..=bound {
                    let nn = norm + (x * x) as usize;
                    if nn > max_norm {
                        continue;
                    }
                    next[nn][(parity + x.rem_euclid(2) as usize) % 2] += cnt;
                }
            }
        }
        dp = next;
    }
    // half-integer coset in doubled coordinates y = 2x odd: sum y^2 = 4 norm,
    // sum x even <=> sum y = 0 mod 4
    let max4 = 4 * max_norm;
    let ybound = (max4 as f64).sqrt().floor() as i64;
    let mut hp = vec![[0u128; 4]; max4 + 1];
    hp[0][0] = 1;
    for _ in 0..8 {
        let mut next = vec![[0u128; 4]; max4 + 1];
        for n4 in 0..=max4 {
            for r in 0..4 {
                let cnt = hp[n4][r];
                if cnt == 0 {
                    continue;
                }
                let mut y = -ybound;
                while y <= ybound {
                    if y.rem_euclid(2) == 1 {
                        let nn = n4 + (y * y) as usize;
                        if nn <= max4 {
                            next[nn][(r + y.rem_euclid(4) as usize) % 4] += cnt;
                        }
                    }
                    y += 1;
                }
            }
        }
        hp = next;
    }
    (0..=order)
        .map(|m| BigUint::from(dp[2 * m][0]) + BigUint::from(hp[8 * m][0]))
        .collect()
}

/// `prod_{n=1}^{order} (1 - t^n)`.
pub fn euler_product(order: usize) -> TruncatedSeries {
    let mut out = TruncatedSeries::one(order);
    for n in 1..=order {
        let mut factor = TruncatedSeries::one(order);
        factor.coeffs[n] = -BigRational::one();
        out = out.mul(&factor);
    }
    out
}

/// Shifted character of the c = 24 seed `V_{E8}^{⊗3}`:
/// `a(t) = t (theta_E8 / eta^8)^3 = theta_E8(t)^3 / prod (1 - t^n)^24`.
pub fn e8cubed_character(order: usize) -> TruncatedSeries {
    let theta = TruncatedSeries::from_biguints(&e8_theta_coefficients(order), order);
    let denom = euler_product(order).pow(24);
    theta
        .pow(3)
        .mul(&denom.recip().expect("Euler product has constant term 1"))
}

/// Character of the rank-one Heisenberg seed: `prod (1 - t^n)^{-1}`.
pub fn heisenberg_character(order: usize) -> TruncatedSeries {
    euler_product(order).recip().expect("Euler product has constant term 1")
}

/// Evaluates the series' integer coefficients as `u64` where they fit.
pub fn coefficient_u64(s: &TruncatedSeries, n: usize) -> Option<u64> {
    s.coeff(n).and_then(|c| c.to_integer().to_u64())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::{build_group, GroupKind};
    use proptest::prelude::*;

    fn ints(s: &TruncatedSeries) -> Vec<i64> {
        s.coeffs().iter().map(|c| c.to_integer().to_i64().unwrap()).collect()
    }

    #[test]
    fn arithmetic_examples() {
        let a = TruncatedSeries::from_integers(&[1, 1], 2);
        assert_eq!(ints(&series_arith(&a, Some(&a), SeriesOp::Mul).unwrap()), vec![1, 2, 1]);
        let g = TruncatedSeries::from_integers(&[1, -1], 3);
        assert_eq!(ints(&series_arith(&g, None, SeriesOp::Recip).unwrap()), vec![1, 1, 1, 1]);
        let b = TruncatedSeries::from_integers(&[1, 744], 2);
        assert_eq!(ints(&b.pow(2))[2], 553536);
        assert_eq!(744 * 744, 553536);
    }

    #[test]
    fn recip_of_zero_constant_fails() {
        let a = TruncatedSeries::from_integers(&[0, 1], 3);
        assert!(matches!(a.recip(), Err(OrbError::Invalid(_))));
    }

    #[test]
    fn binary_ops_take_min_order() {
        let a = TruncatedSeries::from_integers(&[1, 1, 1], 5);
        let b = TruncatedSeries::from_integers(&[1, 2], 2);
        assert_eq!(a.mul(&b).order(), 2);
        assert_eq!(a.add(&b).order(), 2);
    }

    #[test]
    fn cycle_index_character_examples() {
        let s2 = build_group(GroupKind::Symmetric, 2).unwrap();
        let a = TruncatedSeries::from_integers(&[1, 1], 2);
        let z = cycle_index_character(&s2.cycle_index().unwrap(), &a, 2).unwrap();
        // ((1+t)^2 + (1+t^2)) / 2
        assert_eq!(ints(&z), vec![1, 1, 1]);

        let gl = build_group(GroupKind::GeneralLinear { q: 2 }, 2).unwrap();
        let a = TruncatedSeries::from_integers(&[1, 1], 4);
        let z = cycle_index_character(&gl.cycle_index().unwrap(), &a, 4).unwrap();
        assert_eq!(ints(&z), vec![1, 2, 2, 2, 1]);

        let trivial = TruncatedSeries::one(6);
        let z = cycle_index_character(&gl.cycle_index().unwrap(), &trivial, 6).unwrap();
        assert_eq!(z, TruncatedSeries::one(6));
    }

    #[test]
    fn corrupted_cycle_index_is_rejected() {
        let z = CycleIndex::from_terms(
            2,
            vec![
                (crate::groups::CycleType::from_pairs(&[(1, 2)]), crate::rational::ratio(1, 3)),
                (crate::groups::CycleType::from_pairs(&[(2, 1)]), crate::rational::ratio(2, 3)),
            ],
        )
        .unwrap();
        let a = TruncatedSeries::from_integers(&[1, 1], 2);
        assert!(matches!(cycle_index_character(&z, &a, 2), Err(OrbError::Validation(_))));
    }

    #[test]
    fn e8cubed_leading_coefficients() {
        let a = e8cubed_character(3);
        assert_eq!(ints(&a), vec![1, 744, 196884, 21493760]);
    }

    #[test]
    fn e8_theta_by_listing_vectors() {
        // brute-force oracle: list lattice vectors of norm <= 4 coordinate-wise
        let mut counts = [0u64; 3];
        let range = -2i32..=2;
        let mut x = [0i32; 8];
        fn rec(i: usize, x: &mut [i32; 8], range: &std::ops::RangeInclusive<i32>, counts: &mut [u64; 3]) {
            if i == 8 {
                let n: i32 = x.iter().map(|v| v * v).sum();
                let s: i32 = x.iter().sum();
                if s % 2 == 0 && n <= 4 {
                    counts[(n / 2) as usize] += 1;
                }
                return;
            }
            for v in range.clone() {
                x[i] = v;
                rec(i + 1, x, range, counts);
            }
        }
        rec(0, &mut x, &range, &mut counts);
        // half-integer coset: y = 2x odd in {-3,-1,1,3}
        let mut y = [0i32; 8];
        fn rec_half(i: usize, y: &mut [i32; 8], counts: &mut [u64; 3]) {
            if i == 8 {
                let n4: i32 = y.iter().map(|v| v * v).sum();
                let s: i32 = y.iter().sum();
                if s.rem_euclid(4) == 0 && n4 <= 16 && n4 % 8 == 0 {
                    counts[(n4 / 8) as usize] += 1;
                }
                return;
            }
            for v in [-3, -1, 1, 3] {
                y[i] = v;
                rec_half(i + 1, y, counts);
            }
        }
        rec_half(0, &mut y, &mut counts);
        let theta = e8_theta_coefficients(2);
        let theta: Vec<u64> = theta.iter().map(|c| c.to_u64().unwrap()).collect();
        assert_eq!(theta, counts.to_vec());
        // and against 240 sigma_3(n)
        let theta = e8_theta_coefficients(6);
        for (m, c) in theta.iter().enumerate().skip(1) {
            let sigma3: u64 = (1..=m as u64).filter(|d| (m as u64).is_multiple_of(*d)).map(|d| d * d * d).sum();
            assert_eq!(c.to_u64().unwrap(), 240 * sigma3);
        }
    }

    #[test]
    fn sym_limit_examples() {
        let a = TruncatedSeries::from_integers(&[1, 1], 6);
        assert_eq!(ints(&sym_limit_character(&a, 6).unwrap()), vec![1; 7]);
        let a = TruncatedSeries::from_integers(&[1, 1, 1], 4);
        assert_eq!(ints(&sym_limit_character(&a, 4).unwrap())[4], 3);
        let a = TruncatedSeries::from_integers(&[1, 744], 2);
        // multisets of size 2 from 744 labels
        assert_eq!(ints(&sym_limit_character(&a, 2).unwrap())[2], 744 * 745 / 2);
        let bad = TruncatedSeries::from_integers(&[1, -1], 2);
        assert!(sym_limit_character(&bad, 2).is_err());
    }

    #[test]
    fn json_shape() {
        let s = TruncatedSeries::from_coeffs(vec![BigRational::one(), crate::rational::ratio(1, 2)], 1);
        let j = serde_json::to_string(&s).unwrap();
        assert_eq!(j, r#"{"order":1,"coeffs":["1","1/2"]}"#);
        let back: TruncatedSeries = serde_json::from_str(&j).unwrap();
        assert_eq!(back, s);
        assert!(serde_json::from_str::<TruncatedSeries>(r#"{"order":2,"coeffs":["1"]}"#).is_err());
    }

    fn arb_series() -> impl Strategy<Value = TruncatedSeries> {
        (prop::collection::vec(-5i64..6, 1..7), 0usize..7).prop_map(|(mut c, order)| {
            c[0] = c[0].abs() + 1;
            TruncatedSeries::from_integers(&c, order)
        })
    }

    proptest! {
        #[test]
        fn recip_is_inverse(a in arb_series()) {
            let r = a.recip().unwrap();
            prop_assert_eq!(a.mul(&r), TruncatedSeries::one(a.order()));
        }

        #[test]
        fn mul_commutes_and_distributes(a in arb_series(), b in arb_series(), c in arb_series()) {
            prop_assert_eq!(a.mul(&b), b.mul(&a));
            prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
        }

        #[test]
        fn pow_matches_repeated_mul(a in arb_series(), k in 0u32..5) {
            let mut acc = TruncatedSeries::one(a.order());
            for _ in 0..k { acc = acc.mul(&a); }
            prop_assert_eq!(a.pow(k), acc);
        }
    }
}
