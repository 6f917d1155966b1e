//! Symmetrized fixed-point states and the brute-force structure constant.

use std::collections::{BTreeSet, HashMap};

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{OrbError, Result};
use crate::groups::PermGroupHandle;
use crate::orbits::WeightedFunction;
use crate::rational::{from_biguint, serde_biguint};
use crate::scalar::Scalar;
use crate::structure::{ConstantTable, VACUUM};

/// Default cap on `|G|` for the brute-force triple sum.
pub const BRUTEFORCE_MAX_ORDER: u64 = 200;

/// `prod_x f_{g1(x) g2(x) g3(x)}` over the union of supports; vacuum
/// factors elsewhere contribute `f_{vac vac vac} = 1`.
pub fn tensor_constant(
    g1: &WeightedFunction,
    g2: &WeightedFunction,
    g3: &WeightedFunction,
    seed: &ConstantTable,
) -> Result<Scalar> {
    if g1.degree != g2.degree || g2.degree != g3.degree {
        return Err(OrbError::Invalid("functions live on different point sets".into()));
    }
    let points: BTreeSet<u32> = g1.support.keys().chain(g2.support.keys()).chain(g3.support.keys()).copied().collect();
    let mut keys = Vec::with_capacity(points.len());
    for x in points {
        let l = |g: &WeightedFunction| g.label_at(x).unwrap_or(VACUUM).to_string();
        let (a, b, c) = (l(g1), l(g2), l(g3));
        let key = [a.as_str(), b.as_str(), c.as_str()].map(|s| seed.index_of(s));
        match key {
            [Some(i), Some(j), Some(k)] => keys.push([i, j, k]),
            _ => return Err(OrbError::MissingConstant(a, b, c)),
        }
    }
    product_of(seed, &keys)
}

fn product_of(seed: &ConstantTable, keys: &[[usize; 3]]) -> Result<Scalar> {
    let mut acc = Scalar::one();
    for k in keys {
        match seed.get_ref(k) {
            None => return Ok(Scalar::zero()),
            Some(v) => acc = &acc * v,
        }
    }
    Ok(acc)
}

/// Normalization data of the symmetrized state built on `rep`:
/// `A(g) = |{rho in G(K) : rho g = g}|` and `A_full = A(g) |G| |G^K_pointwise|`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SymmetrizedState {
    pub rep: WeightedFunction,
    #[serde(rename = "N")]
    pub big_n: u32,
    #[serde(with = "serde_biguint")]
    pub a_reduced: BigUint,
    #[serde(with = "serde_biguint")]
    pub a_full: BigUint,
}

/// Labels of `g` in the order of its sorted support.
pub(crate) fn positional_labels(g: &WeightedFunction) -> Vec<&str> {
    g.support.values().map(String::as_str).collect()
}

pub(crate) fn reduced_norm(g: &WeightedFunction, restriction: &[Vec<usize>]) -> BigUint {
    let labels = positional_labels(g);
    let fixed = restriction
        .iter()
        .filter(|perm| perm.iter().enumerate().all(|(i, &j)| labels[i] == labels[j]))
        .count();
    BigUint::from(fixed)
}

pub fn normalization(g: &WeightedFunction, group: &PermGroupHandle, seed: &ConstantTable) -> Result<SymmetrizedState> {
    if g.degree != group.degree() {
        return Err(OrbError::Invalid(format!(
            "function on {} points used with {} of degree {}",
            g.degree,
            group.spec(),
            group.degree()
        )));
    }
    for l in g.support.values() {
        if seed.index_of(l).is_none() || l == VACUUM {
            return Err(OrbError::Invalid(format!("label {l:?} is not a non-vacuum seed label")));
        }
    }
    let st = group.stabilizers(&g.support_set())?;
    let a_reduced = reduced_norm(g, &st.restriction);
    let a_full = &a_reduced * group.order() * &st.pointwise;
    Ok(SymmetrizedState { rep: g.clone(), big_n: group.n(), a_reduced, a_full })
}

/// `(prod A_full)^(-1/2) sum_{sigma in G^3} C(sigma_1 g_1, sigma_2 g_2, sigma_3 g_3)`.
pub fn bruteforce_constant(
    g1: &WeightedFunction,
    g2: &WeightedFunction,
    g3: &WeightedFunction,
    group: &PermGroupHandle,
    seed: &ConstantTable,
) -> Result<Scalar> {
    bruteforce_constant_with_limit(g1, g2, g3, group, seed, BRUTEFORCE_MAX_ORDER)
}

pub fn bruteforce_constant_with_limit(
    g1: &WeightedFunction,
    g2: &WeightedFunction,
    g3: &WeightedFunction,
    group: &PermGroupHandle,
    seed: &ConstantTable,
    max_order: u64,
) -> Result<Scalar> {
    if *group.order() > BigUint::from(max_order) {
        return Err(OrbError::budget(format!("brute-force triple sum over {}", group.spec()), group.order(), max_order));
    }
    let states = [g1, g2, g3].map(|g| normalization(g, group, seed));
    let states = [states[0].clone()?, states[1].clone()?, states[2].clone()?];
    let elements = group.elements()?;
    // multiset of images sigma g_i, one entry per group element
    let images: Vec<HashMap<WeightedFunction, u64>> = [g1, g2, g3]
        .iter()
        .map(|g| {
            let mut m = HashMap::new();
            for p in &elements {
                *m.entry(g.act(p.images())).or_insert(0u64) += 1;
            }
            m
        })
        .collect();
    let mut total = Scalar::zero();
    for (h1, c1) in &images[0] {
        for (h2, c2) in &images[1] {
            for (h3, c3) in &images[2] {
                let c = tensor_constant(h1, h2, h3, seed)?;
                if !c.is_zero() {
                    let mult = BigRational::from_integer((c1 * c2 * c3).into());
                    total = &total + &c.scale(&mult);
                }
            }
        }
    }
    let norm: BigRational = states.iter().map(|s| from_biguint(&s.a_full)).fold(BigRational::one(), |a, b| a * b);
    if norm.is_zero() {
        return Err(OrbError::Invalid("zero normalization".into()));
    }
    Ok(&total * &Scalar::inv_sqrt_rational(&norm)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::{build_group, GroupKind};
    use crate::rational::{int, ratio};
    use crate::structure::unit1_seed;
    use std::collections::BTreeMap;

    fn f(degree: u32, pts: &[(u32, &str)]) -> WeightedFunction {
        WeightedFunction {
            degree,
            support: pts.iter().map(|&(p, l)| (p, l.to_string())).collect::<BTreeMap<_, _>>(),
            weight: pts.len() as u32,
        }
    }

    #[test]
    fn tensor_examples() {
        let seed = unit1_seed();
        let v = WeightedFunction::vacuum(2);
        assert_eq!(tensor_constant(&v, &v, &v, &seed).unwrap(), Scalar::one());
        let g1 = f(2, &[(0, "a"), (1, "a")]);
        let g2 = f(2, &[(0, "a")]);
        let g3 = f(2, &[(1, "a")]);
        assert_eq!(tensor_constant(&g1, &g2, &g3, &seed).unwrap(), Scalar::one());
        // exactly two vacua at point 1
        assert!(tensor_constant(&g1, &g2, &g2, &seed).unwrap().is_zero());
        let bad = f(2, &[(0, "zz")]);
        assert!(matches!(tensor_constant(&bad, &v, &v, &seed), Err(OrbError::MissingConstant(..))));
    }

    #[test]
    fn normalization_examples() {
        let seed = unit1_seed();
        let s2 = build_group(GroupKind::Symmetric, 2).unwrap();
        let st = normalization(&f(2, &[(0, "a")]), &s2, &seed).unwrap();
        assert_eq!((st.a_reduced.clone(), st.a_full.clone()), (BigUint::one(), BigUint::from(2u32)));
        let st = normalization(&f(2, &[(0, "a"), (1, "a")]), &s2, &seed).unwrap();
        assert_eq!((st.a_reduced, st.a_full), (BigUint::from(2u32), BigUint::from(4u32)));

        let two = crate::structure::heisenberg_seed(2).unwrap();
        let g = WeightedFunction { degree: 2, support: BTreeMap::from([(0, "a".into()), (1, "h".into())]), weight: 3 };
        let st = normalization(&g, &s2, &two).unwrap();
        assert_eq!((st.a_reduced, st.a_full), (BigUint::one(), BigUint::from(2u32)));
    }

    #[test]
    fn bruteforce_examples() {
        let seed = unit1_seed();
        let s2 = build_group(GroupKind::Symmetric, 2).unwrap();
        let aa = f(2, &[(0, "a"), (1, "a")]);
        let a = f(2, &[(0, "a")]);
        assert_eq!(bruteforce_constant(&aa, &a, &a, &s2, &seed).unwrap(), Scalar::one());

        let s3 = build_group(GroupKind::Symmetric, 3).unwrap();
        let aa = f(3, &[(0, "a"), (1, "a")]);
        let a = f(3, &[(0, "a")]);
        let v = bruteforce_constant(&aa, &a, &a, &s3, &seed).unwrap();
        // 2/sqrt(3)
        assert!(v.squared_eq(&Scalar::sqrt_rational(&ratio(4, 3)).unwrap()));
        assert_eq!(v.square().as_rational(), Some(ratio(4, 3)));

        let vac = WeightedFunction::vacuum(3);
        assert_eq!(bruteforce_constant(&aa, &aa, &vac, &s3, &seed).unwrap(), Scalar::one());
        assert!(bruteforce_constant(&aa, &a, &vac, &s3, &seed).unwrap().is_zero());
        let _ = int(0);
    }

    #[test]
    fn bruteforce_refuses_large_groups() {
        let seed = unit1_seed();
        let s6 = build_group(GroupKind::Symmetric, 6).unwrap();
        let a = f(6, &[(0, "a")]);
        assert!(matches!(bruteforce_constant(&a, &a, &a, &s6, &seed), Err(OrbError::Budget { .. })));
    }
}
