//! Rank-one Heisenberg (free boson) seed from its mode algebra.
//!
//! States are polynomials in the creation modes `a_{-k}` on the vacuum,
//! stored as partitions. Modes satisfy `[a_m, a_n] = m delta_{m+n,0}` and
//! `a_0 = 0` on the vacuum module.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{OrbError, Result};
use crate::groups::sym::partitions;
use crate::rational::{binomial_signed, factorial, from_biguint};
use crate::scalar::Scalar;
use crate::structure::{ConstantTable, Label, VACUUM};

pub const MAX_CUTOFF: u32 = 4;

/// Partition with parts in non-increasing order.
pub type Monomial = Vec<u32>;
/// Linear combination of monomial states.
pub type FockState = BTreeMap<Monomial, BigRational>;

fn insert_part(m: &Monomial, k: u32) -> Monomial {
    let mut out = m.clone();
    let pos = out.iter().position(|&p| p < k).unwrap_or(out.len());
    out.insert(pos, k);
    out
}

/// Applies `a_n` to a state.
pub fn apply_mode(n: i64, state: &FockState) -> FockState {
    let mut out = FockState::new();
    if n == 0 {
        return out;
    }
    for (m, c) in state {
        if n < 0 {
            let key = insert_part(m, (-n) as u32);
            *out.entry(key).or_insert_with(BigRational::zero) += c;
        } else {
            let k = n as u32;
            let count = m.iter().filter(|&&p| p == k).count();
            if count == 0 {
                continue;
            }
            let mut key = m.clone();
            let pos = key.iter().position(|&p| p == k).unwrap();
            key.remove(pos);
            *out.entry(key).or_insert_with(BigRational::zero) +=
                c * BigRational::from_integer(BigInt::from(n * count as i64));
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

pub fn weight(m: &Monomial) -> u32 {
    m.iter().sum()
}

/// `|a_{-lambda}|0>|^2 = prod_k k^(m_k) m_k!`.
pub fn norm_squared(m: &Monomial) -> BigRational {
    let mut mults: BTreeMap<u32, u32> = BTreeMap::new();
    for &p in m {
        *mults.entry(p).or_insert(0) += 1;
    }
    let mut n = BigRational::one();
    for (k, c) in mults {
        n *= BigRational::from_integer(BigInt::from(k).pow(c)) * from_biguint(&factorial(c as u64));
    }
    n
}

/// Mode `b_m c` for monomial states `b`, `c`, using
/// `Y(a_{-k_1}...a_{-k_r}|0>, z) = :prod_i d^(k_i - 1) a(z):` with
/// `d^(k-1) a(z) = sum_n binom(-n-1, k-1) a_n z^(-n-k)`.
pub fn mode_product(b: &Monomial, m: i64, c: &Monomial) -> FockState {
    let target = weight(b) as i64 + weight(c) as i64 - m - 1;
    let mut out = FockState::new();
    if target < 0 {
        return out;
    }
    let start: FockState = BTreeMap::from([(c.clone(), BigRational::one())]);
    if b.is_empty() {
        // Y(|0>, z) = id
        return if m == -1 { start } else { out };
    }
    let lo = -target;
    let hi = weight(c) as i64;
    let r = b.len();
    let mut modes = vec![0i64; r];
    // enumerate mode tuples with sum(n_i + k_i) = m + 1
    fn rec(
        i: usize,
        b: &Monomial,
        modes: &mut Vec<i64>,
        remaining: i64,
        lo: i64,
        hi: i64,
        start: &FockState,
        out: &mut FockState,
    ) {
        let r = b.len();
        if i == r {
            if remaining != 0 {
                return;
            }
            let mut coef = BigRational::one();
            for (n, &k) in modes.iter().zip(b) {
                coef *= BigRational::from_integer(binomial_signed(-n - 1, k as i64 - 1));
            }
            if coef.is_zero() {
                return;
            }
            // normal order: annihilators first, then creators
            let mut state = start.clone();
            for &n in modes.iter().filter(|&&n| n > 0) {
                state = apply_mode(n, &state);
            }
            for &n in modes.iter().filter(|&&n| n < 0) {
                state = apply_mode(n, &state);
            }
            for (mono, c) in state {
                *out.entry(mono).or_insert_with(BigRational::zero) += c * &coef;
            }
            return;
        }
        for n in lo..=hi {
            if n == 0 {
                continue;
            }
            modes[i] = n;
            rec(i + 1, b, modes, remaining - (n + b[i] as i64), lo, hi, start, out);
        }
    }
    rec(0, b, &mut modes, m + 1, lo, hi, &start, &mut out);
    out.retain(|_, c| !c.is_zero());
    out
}

/// Label id for a partition: `a` for `[1]`, `b` for `[2]`, `h` for `[1,1]`,
/// otherwise `a` followed by the parts.
pub fn label_id(m: &Monomial) -> String {
    match m.as_slice() {
        [] => VACUUM.to_string(),
        [1] => "a".into(),
        [2] => "b".into(),
        [1, 1] => "h".into(),
        parts => format!("a{}", parts.iter().map(u32::to_string).collect::<String>()),
    }
}

/// Orthonormal monomial basis up to `cutoff`, constants
/// `f_{xyz} = sqrt(N_x / (N_y N_z)) [x](y_m z)` with `m = wt y + wt z - wt x - 1`.
pub fn heisenberg_seed(cutoff: u32) -> Result<ConstantTable> {
    if cutoff > MAX_CUTOFF {
        return Err(OrbError::Invalid(format!(
            "Heisenberg seed cutoff {cutoff} exceeds the supported maximum {MAX_CUTOFF}"
        )));
    }
    let mut monos: Vec<Monomial> = Vec::new();
    for w in 0..=cutoff {
        let mut ps = partitions(w);
        ps.reverse();
        monos.extend(ps);
    }
    let labels: Vec<Label> = monos.iter().map(|m| Label { id: label_id(m), wt: weight(m) }).collect();
    let mut table = ConstantTable::new(format!("heis:{cutoff}"), cutoff, labels)?;
    for (iy, y) in monos.iter().enumerate() {
        for (iz, z) in monos.iter().enumerate() {
            for (ix, x) in monos.iter().enumerate() {
                let m = weight(y) as i64 + weight(z) as i64 - weight(x) as i64 - 1;
                let prod = mode_product(y, m, z);
                let Some(c) = prod.get(x) else { continue };
                let ratio = norm_squared(x) / (norm_squared(y) * norm_squared(z));
                let value = Scalar::sqrt_rational(&ratio)?.scale(c);
                table.set_at([ix, iy, iz], value);
            }
        }
    }
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    fn st(m: &[u32]) -> FockState {
        BTreeMap::from([(m.to_vec(), BigRational::one())])
    }

    #[test]
    fn commutator_from_modes() {
        // a_1 a_{-1}|0> = |0>, a_2 a_{-2}|0> = 2|0>
        assert_eq!(apply_mode(1, &apply_mode(-1, &st(&[]))), st(&[]));
        let two = apply_mode(2, &st(&[2]));
        assert_eq!(two.get(&vec![]), Some(&int(2)));
        // a_1 a_{-1}^2 |0> = 2 a_{-1}|0>
        assert_eq!(apply_mode(1, &st(&[1, 1])).get(&vec![1]), Some(&int(2)));
    }

    #[test]
    fn current_modes_match_direct_action() {
        // Y(a_{-1}|0>, z) = a(z): mode m of state [1] is a_m
        for m in -3..=3i64 {
            for c in [vec![], vec![1], vec![2], vec![1, 1], vec![2, 1]] {
                let direct = apply_mode(m, &st(&c));
                assert_eq!(mode_product(&vec![1], m, &c), direct, "m={m} c={c:?}");
            }
        }
    }

    #[test]
    fn derivative_field_modes() {
        // Y(a_{-2}|0>, z) = d a(z): mode m is -m a_{m-1}
        for m in -2..=3i64 {
            let c = vec![1];
            let direct: FockState = apply_mode(m - 1, &st(&c))
                .into_iter()
                .map(|(k, v)| (k, v * int(-m)))
                .filter(|(_, v)| !v.is_zero())
                .collect();
            assert_eq!(mode_product(&vec![2], m, &c), direct, "m={m}");
        }
    }

    #[test]
    fn seed_values() {
        let t1 = heisenberg_seed(1).unwrap();
        assert_eq!(t1.get("vac", "a", "a").unwrap(), Scalar::one());
        assert!(t1.get("a", "a", "a").unwrap().is_zero());
        let t2 = heisenberg_seed(2).unwrap();
        let sqrt2 = Scalar::sqrt_rational(&int(2)).unwrap();
        assert_eq!(t2.get("h", "a", "a").unwrap(), sqrt2);
        // L_{-1} a = a_{-2}|0> has norm^2 2
        assert_eq!(t2.get("b", "a", "vac").unwrap(), sqrt2);
        // <vac, h_3 h> = <h, h> = 1
        assert_eq!(t2.get("vac", "h", "h").unwrap(), Scalar::one());
        // b = L_{-1} a / sqrt(2) is not quasi-primary: <vac, b_3 b> = -3
        assert_eq!(t2.get("vac", "b", "b").unwrap(), Scalar::rational(int(-3)));
        // <a, a_0 ...> vanish at zero momentum
        assert!(t2.get("a", "a", "a").unwrap().is_zero());
        assert!(heisenberg_seed(5).is_err());
        let _ = ratio(1, 2);
    }

    #[test]
    fn creation_gives_the_state_itself() {
        let t = heisenberg_seed(4).unwrap();
        for l in t.labels() {
            assert_eq!(t.get(&l.id, &l.id, "vac").unwrap(), Scalar::one(), "{}", l.id);
            assert_eq!(t.get(&l.id, "vac", &l.id).unwrap(), Scalar::one(), "{}", l.id);
        }
    }
}
