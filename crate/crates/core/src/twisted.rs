//! Conformal weights of twisted sectors from cycle types.
//!
//! A `t`-cycle of `g` contributes `(c/24)(t - 1/t)` to `rho_g`, that is
//! `(c/24)(1 - 1/t^2) >= c/32` per moved point, with equality for `t = 2`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{OrbError, Result};
use crate::groups::{build_group, CycleType, GroupKind, PermGroupHandle};
use crate::rational::{serde_rational, serde_rational_opt};

/// `(c/24) sum_t m_t (t - 1/t)`.
pub fn twisted_weight(ct: &CycleType, c: &BigRational) -> BigRational {
    let mut s = BigRational::zero();
    for (&t, &m) in ct.multiplicities() {
        let t = BigRational::from_integer(BigInt::from(t));
        s += (&t - t.recip()) * BigInt::from(m);
    }
    s * c / BigInt::from(24)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassWeight {
    pub cycle_type: String,
    pub moved: u32,
    #[serde(with = "serde_rational")]
    pub rho: BigRational,
    /// `moved * c / 32`.
    #[serde(with = "serde_rational")]
    pub bound: BigRational,
    pub equality: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TwistedWeightReport {
    pub group: String,
    #[serde(with = "serde_rational")]
    pub c: BigRational,
    pub classes: Vec<ClassWeight>,
    /// Minimum over non-identity cycle types (none for a trivial group).
    #[serde(with = "serde_rational_opt")]
    pub min_rho: Option<BigRational>,
    pub attained_by: Vec<String>,
    /// `rho_g >= r c / 32` for every non-identity cycle type.
    pub moved_bound_holds: bool,
    pub moved_bound_equality: Vec<String>,
    /// `(q-1) N c / 32` for GL.
    #[serde(with = "serde_rational_opt")]
    pub gl_bound: Option<BigRational>,
    pub gl_bound_holds: Option<bool>,
    pub gl_bound_equality: Option<bool>,
    /// Fewest moved points of a non-identity element.
    pub min_moved: Option<u32>,
}

pub fn min_twisted_weight(g: &PermGroupHandle, c: &BigRational) -> Result<TwistedWeightReport> {
    if c.is_negative() {
        return Err(OrbError::Invalid("central charge must be non-negative".into()));
    }
    let z = g.cycle_index()?;
    let mut classes = Vec::new();
    let mut min: Option<BigRational> = None;
    let mut attained: Vec<String> = Vec::new();
    let mut holds = true;
    let mut equality = Vec::new();
    let mut min_moved: Option<u32> = None;
    for (ct, _) in z.terms() {
        let rho = twisted_weight(ct, c);
        let moved = ct.moved_points();
        let bound = c * BigInt::from(moved) / BigInt::from(32);
        let eq = !ct.is_identity() && rho == bound;
        if !ct.is_identity() {
            if rho < bound {
                holds = false;
            }
            if eq {
                equality.push(ct.to_string());
            }
            min_moved = Some(min_moved.map_or(moved, |m| m.min(moved)));
            match &min {
                Some(m) if rho > *m => {}
                Some(m) if rho == *m => attained.push(ct.to_string()),
                _ => {
                    min = Some(rho.clone());
                    attained = vec![ct.to_string()];
                }
            }
        }
        classes.push(ClassWeight { cycle_type: ct.to_string(), moved, rho, bound, equality: eq });
    }
    let gl_bound = match g.kind() {
        GroupKind::GeneralLinear { q } => Some(c * BigInt::from((q - 1) * g.n()) / BigInt::from(32)),
        _ => None,
    };
    let gl_bound_holds = gl_bound.as_ref().map(|b| min.as_ref().is_none_or(|m| m >= b));
    let gl_bound_equality = gl_bound.as_ref().map(|b| min.as_ref() == Some(b));
    Ok(TwistedWeightReport {
        group: g.spec(),
        c: c.clone(),
        classes,
        min_rho: min,
        attained_by: attained,
        moved_bound_holds: holds,
        moved_bound_equality: equality,
        gl_bound,
        gl_bound_holds,
        gl_bound_equality,
        min_moved,
    })
}

/// Fewest points moved by a non-identity element, by direct sweep
/// (`None` for a trivial group).
pub fn min_moved_points(g: &PermGroupHandle) -> Result<Option<u32>> {
    g.par_fold(
        || None,
        |m: &mut Option<u32>, imgs| {
            let moved = imgs.iter().enumerate().filter(|&(x, &y)| x as u32 != y).count() as u32;
            if moved > 0 && m.is_none_or(|v| moved < v) {
                *m = Some(moved);
            }
        },
        |a, b| match (a, b) {
            (Some(x), Some(y)) => Some(x.min(y)),
            (x, y) => x.or(y),
        },
    )
}

/// Every non-identity element of GL(N,q) moves at least `(q-1)N` vectors.
pub fn gl_moved_points_check(g: &PermGroupHandle) -> Result<bool> {
    let GroupKind::GeneralLinear { q } = g.kind() else {
        return Err(OrbError::Invalid(format!("{} is not a general linear group", g.spec())));
    };
    Ok(min_moved_points(g)?.is_none_or(|m| m >= (q - 1) * g.n()))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OrbifoldRow {
    pub group: String,
    #[serde(rename = "N")]
    pub n: u32,
    pub q: Option<u32>,
    #[serde(with = "serde_rational")]
    pub c: BigRational,
    #[serde(with = "serde_rational_opt")]
    pub min_rho: Option<BigRational>,
    /// `(q-1)Nc/32` for GL, else the smallest `r c / 32`.
    #[serde(with = "serde_rational_opt")]
    pub bound: Option<BigRational>,
    pub attained_by: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OrbifoldLimitReport {
    pub family: String,
    #[serde(with = "serde_rational")]
    pub c: BigRational,
    pub rows: Vec<OrbifoldRow>,
    pub nondecreasing: bool,
    pub bound_holds: bool,
    pub verdict: String,
}

impl OrbifoldRow {
    pub fn from_report(r: &TwistedWeightReport, n: u32, q: Option<u32>) -> Self {
        let bound = match (&r.gl_bound, r.min_moved) {
            (Some(b), _) => Some(b.clone()),
            (None, Some(m)) => Some(&r.c * BigInt::from(m) / BigInt::from(32)),
            (None, None) => None,
        };
        OrbifoldRow {
            group: r.group.clone(),
            n,
            q,
            c: r.c.clone(),
            min_rho: r.min_rho.clone(),
            bound,
            attained_by: r.attained_by.join(" "),
        }
    }
}

pub fn orbifold_limit_report(kind: GroupKind, c: &BigRational, ns: &[u32], budget: u64) -> Result<OrbifoldLimitReport> {
    let q = match kind {
        GroupKind::GeneralLinear { q } => Some(q),
        _ => None,
    };
    let mut rows = Vec::new();
    for &n in ns {
        let g = build_group(kind, n)?.with_budget(budget);
        rows.push(OrbifoldRow::from_report(&min_twisted_weight(&g, c)?, n, q));
    }
    let bound_holds = rows.iter().all(|r| match (&r.min_rho, &r.bound) {
        (Some(m), Some(b)) => m >= b,
        _ => true,
    });
    let mins: Vec<&BigRational> = rows.iter().filter_map(|r| r.min_rho.as_ref()).collect();
    let nondecreasing = mins.windows(2).all(|w| w[0] <= w[1]);
    let growing = mins.len() >= 2 && mins.first() < mins.last();
    let verdict = if c.is_zero() {
        "degenerate: c = 0 gives every twisted sector weight 0".to_string()
    } else if matches!(kind, GroupKind::GeneralLinear { .. }) && bound_holds && nondecreasing {
        "twisted sectors decouple: for fixed weight n they contribute nothing once (q-1)Nc/32 > n, so b_n^orb = b_n for large N"
            .to_string()
    } else if growing && nondecreasing {
        "minimal twisted weight grows with N".to_string()
    } else {
        "twisted sectors persist: the minimal twisted weight stays bounded".to_string()
    };
    Ok(OrbifoldLimitReport { family: kind.family_name(), c: c.clone(), rows, nondecreasing, bound_holds, verdict })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};
    use proptest::prelude::*;

    #[test]
    fn weights_of_small_cycle_types() {
        let c = int(24);
        assert_eq!(twisted_weight(&CycleType::from_pairs(&[(1, 5)]), &c), int(0));
        assert_eq!(twisted_weight(&CycleType::from_pairs(&[(2, 1)]), &c), ratio(3, 2));
        assert_eq!(twisted_weight(&CycleType::from_pairs(&[(2, 2)]), &c), int(3));
        assert_eq!(twisted_weight(&CycleType::from_pairs(&[(3, 1), (1, 1)]), &c), ratio(8, 3));
    }

    #[test]
    fn group_minima() {
        let c = int(24);
        let r = min_twisted_weight(&build_group(GroupKind::GeneralLinear { q: 2 }, 2).unwrap(), &c).unwrap();
        assert_eq!(r.min_rho, Some(ratio(3, 2)));
        assert_eq!(r.gl_bound_equality, Some(true));
        let r = min_twisted_weight(&build_group(GroupKind::GeneralLinear { q: 2 }, 3).unwrap(), &c).unwrap();
        assert_eq!(r.min_rho, Some(int(3)));
        assert_eq!(r.gl_bound, Some(ratio(9, 4)));
        assert_eq!(r.attained_by, vec!["{1:4,2:2}".to_string()]);
        let r = min_twisted_weight(&build_group(GroupKind::Symmetric, 4).unwrap(), &c).unwrap();
        assert_eq!(r.min_rho, Some(ratio(3, 2)));
        assert!(r.moved_bound_holds);
        let r = min_twisted_weight(&build_group(GroupKind::Symmetric, 1).unwrap(), &c).unwrap();
        assert!(r.min_rho.is_none());
        let back: TwistedWeightReport = serde_json::from_str(&serde_json::to_string(&r).unwrap()).unwrap();
        assert_eq!(back, r);
    }

    #[test]
    fn family_reports() {
        let r = orbifold_limit_report(GroupKind::Symmetric, &int(24), &[2, 3, 4, 5], 1_000_000).unwrap();
        assert!(r.rows.iter().all(|x| x.min_rho == Some(ratio(3, 2))));
        assert!(r.verdict.contains("persist"));
        let r = orbifold_limit_report(GroupKind::GeneralLinear { q: 2 }, &int(24), &[2, 3], 1_000_000).unwrap();
        assert!(r.verdict.contains("decouple"));
        let r = orbifold_limit_report(GroupKind::Symmetric, &int(0), &[2, 3], 1_000_000).unwrap();
        assert!(r.verdict.contains("degenerate"));
    }

    #[test]
    fn moved_points_of_small_general_linear_groups() {
        for (n, q) in [(2, 2), (3, 2), (2, 3)] {
            let g = build_group(GroupKind::GeneralLinear { q }, n).unwrap();
            assert!(gl_moved_points_check(&g).unwrap());
            // a transvection fixes a hyperplane
            assert_eq!(min_moved_points(&g).unwrap(), Some(q.pow(n) - q.pow(n - 1)));
        }
    }

    proptest! {
        #[test]
        fn additive_and_bounded(a in proptest::collection::vec(1u32..7, 0..6), b in proptest::collection::vec(1u32..7, 0..6)) {
            let c = int(24);
            let ct = |v: &[u32]| CycleType::from_pairs(&v.iter().map(|&t| (t, 1)).collect::<Vec<_>>());
            let (x, y) = (ct(&a), ct(&b));
            prop_assert_eq!(twisted_weight(&x.join(&y), &c), twisted_weight(&x, &c) + twisted_weight(&y, &c));
            let rho = twisted_weight(&x, &c);
            let bound = &c * BigInt::from(x.moved_points()) / BigInt::from(32);
            prop_assert!(rho >= bound);
            let only_twos = x.multiplicities().keys().all(|&t| t <= 2);
            prop_assert_eq!(rho == bound, only_twos);
        }
    }
}
