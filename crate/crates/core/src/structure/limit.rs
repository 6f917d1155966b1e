//! Large-N limits of fixed-point structure constants and computed tables.
//!
//! At a reference `N` every class of the factored formula already appears
//! and its inner sum and `|Stab_R|` no longer depend on `N`. Only `M` does:
//!
//! ```text
//! S_N:       M^2 ~ N^(2U - K_1 - K_2 - K_3)
//! GL(N,q):   M^2 ~ q^(-N (d_1 + d_2 + d_3 - 2 d_U))
//! ```
//!
//! with the prefactor tending to one, so classes with exponent zero are kept
//! at `M = 1` and classes with negative exponent are dropped.

use num_bigint::BigUint;
use num_rational::BigRational;
use serde::Serialize;

use crate::error::{OrbError, Result};
use crate::groups::gl::{dim_span, Field};
use crate::groups::{build_group, GroupKind, PermGroupHandle};
use crate::orbits::{orbit_representatives, WeightedFunction, DEFAULT_STATE_BUDGET};
use crate::scalar::Scalar;
use crate::structure::coset::{class_inner_sum, coset_analysis, factored_constant, inv_sqrt_norms, state_data, CosetClass};
use crate::structure::{ConstantTable, Label, VACUUM};

/// Cap on subset-orbit pairs when choosing a GL reference dimension.
pub const GL_REFERENCE_PAIRS: u64 = 200_000;

#[derive(Clone, Debug, Serialize)]
pub struct ClassLimit {
    pub sets: [Vec<u32>; 3],
    pub n3: u32,
    /// `2U - sum K` (S_N) or `2 d_U - sum d_i` (GL).
    pub exponent: i64,
    pub inner: String,
    pub stab_r: String,
    /// Decay of `M` for dropped classes.
    pub rate: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct LimitResult {
    #[serde(skip)]
    pub value: Scalar,
    pub value_str: String,
    pub family: String,
    /// Group at which the class data was computed.
    pub reference: String,
    pub kept: Vec<ClassLimit>,
    pub dropped: Vec<ClassLimit>,
    /// Classes with growing `M` whose inner sum vanishes.
    pub vanishing: Vec<ClassLimit>,
    /// Whether the reference is large enough for every class to appear.
    pub complete: bool,
    pub certificate: Vec<String>,
}

fn max_point(gs: [&WeightedFunction; 3]) -> u32 {
    gs.iter().filter_map(|g| g.support.keys().next_back().copied()).max().map_or(0, |p| p + 1)
}

fn gl_dims_for(gs: [&WeightedFunction; 3], q: u32) -> ([u32; 3], u32) {
    let mut n0 = 1;
    let top = max_point(gs);
    while (q as u64).pow(n0) < top as u64 {
        n0 += 1;
    }
    let field = Field::new(q, n0);
    let dims = gs.map(|g| dim_span(&field, g.support_set().points()) as u32);
    (dims, n0)
}

/// Upper bound on `|orbit K_2| |orbit K_3|` in GL(N,q).
fn gl_pairs_bound(n: u32, q: u32, d2: u32, d3: u32) -> BigUint {
    let qn = BigUint::from(q).pow(n);
    let tuples = |d: u32| (0..d).fold(BigUint::from(1u32), |acc, i| acc * (&qn - BigUint::from(q).pow(i)));
    tuples(d2) * tuples(d3)
}

/// Picks the reference group for a triple.
fn reference_group(kind: GroupKind, gs: [&WeightedFunction; 3], budget: u64) -> Result<(PermGroupHandle, bool)> {
    match kind {
        GroupKind::Symmetric => {
            let total: u32 = gs.iter().map(|g| g.support.len() as u32).sum();
            let n = total.max(max_point(gs)).max(1);
            Ok((build_group(kind, n)?.with_budget(budget), true))
        }
        GroupKind::GeneralLinear { q } => {
            let (dims, n0) = gl_dims_for(gs, q);
            let sum: u32 = dims.iter().sum();
            let lo = n0.max(sum.div_ceil(2)).max(1);
            let cap = BigUint::from(budget.min(GL_REFERENCE_PAIRS));
            let mut n = lo;
            while n < sum && gl_pairs_bound(n + 1, q, dims[1], dims[2]) <= cap {
                n += 1;
            }
            if gl_pairs_bound(n, q, dims[1], dims[2]) > BigUint::from(budget) {
                return Err(OrbError::budget(format!("GL({n},{q}) reference classes"), gl_pairs_bound(n, q, dims[1], dims[2]), budget));
            }
            Ok((build_group(kind, n)?.with_budget(budget), n >= sum))
        }
        GroupKind::Cyclic => Err(OrbError::Invalid(
            "large-N limits need an oligomorphic family (S or GL); Z_N is not".into(),
        )),
    }
}

fn class_exponent(kind: GroupKind, class: &CosetClass) -> i64 {
    match kind {
        GroupKind::Symmetric => {
            let k: i64 = class.sets.iter().map(|s| s.len() as i64).sum();
            2 * class.union_size as i64 - k
        }
        _ => {
            let (d, du) = class.dims.expect("GL classes carry dimensions");
            2 * du as i64 - d.iter().map(|&x| x as i64).sum::<i64>()
        }
    }
}

fn rate(kind: GroupKind, exponent: i64) -> String {
    match kind {
        GroupKind::GeneralLinear { q } => format!("M = O({q}^(-N*{}/2))", -exponent),
        _ => format!("M = O(N^(-{}/2))", -exponent),
    }
}

/// `lim_{N -> inf} f(phi_{g1}, phi_{g2}, phi_{g3})` over the family of `kind`.
pub fn limit_constant(
    g1: &WeightedFunction,
    g2: &WeightedFunction,
    g3: &WeightedFunction,
    kind: GroupKind,
    seed: &ConstantTable,
    budget: u64,
) -> Result<LimitResult> {
    let (group, complete) = reference_group(kind, [g1, g2, g3], budget)?;
    let deg = group.degree();
    let gs = [g1.embed(deg), g2.embed(deg), g3.embed(deg)];
    let states = [state_data(&gs[0], &group, seed)?, state_data(&gs[1], &group, seed)?, state_data(&gs[2], &group, seed)?];
    let classes = coset_analysis(&states[0].support, &states[1].support, &states[2].support, &group)?;
    let mut kept = Vec::new();
    let mut dropped = Vec::new();
    let mut vanishing = Vec::new();
    let mut sum = Scalar::zero();
    for class in &classes {
        let inner = class_inner_sum(class, &states, seed);
        let e = class_exponent(kind, class);
        let entry = ClassLimit {
            sets: [0, 1, 2].map(|i| class.sets[i].points().to_vec()),
            n3: class.n3,
            exponent: e,
            inner: inner.to_string(),
            stab_r: class.stab_r.to_string(),
            rate: (e < 0).then(|| rate(kind, e)),
        };
        if e == 0 {
            let w = BigRational::new(1.into(), class.stab_r.clone().into());
            sum = &sum + &inner.scale(&w);
            kept.push(entry);
        } else if e < 0 {
            dropped.push(entry);
        } else if inner.is_zero() {
            vanishing.push(entry);
        } else {
            return Err(OrbError::LimitAnomaly(format!(
                "class {:?} of {} has growing M (exponent {e}) and inner sum {inner}",
                entry.sets,
                group.spec()
            )));
        }
    }
    let value = &sum * &inv_sqrt_norms(&states)?;
    let mut certificate = vec![format!(
        "{} classes at {}: {} kept (M -> 1), {} dropped, {} with vanishing inner sum",
        classes.len(),
        group.spec(),
        kept.len(),
        dropped.len(),
        vanishing.len()
    )];
    for d in &dropped {
        certificate.push(format!("dropped {:?}: n3 = {}, {}", d.sets, d.n3, d.rate.as_deref().unwrap_or("")));
    }
    if !complete {
        certificate.push(format!(
            "reference {} is below the dimension sum; classes needing more room were not scanned",
            group.spec()
        ));
    }
    Ok(LimitResult {
        value_str: value.to_string(),
        value,
        family: kind.family_name(),
        reference: group.spec(),
        kept,
        dropped,
        vanishing,
        complete,
        certificate,
    })
}

/// `(N, f^N)` from the factored formula at each `N`.
pub fn finite_sequence(
    g1: &WeightedFunction,
    g2: &WeightedFunction,
    g3: &WeightedFunction,
    kind: GroupKind,
    seed: &ConstantTable,
    ns: &[u32],
    budget: u64,
) -> Result<Vec<(u32, Scalar)>> {
    ns.iter()
        .map(|&n| {
            let g = build_group(kind, n)?.with_budget(budget);
            let d = g.degree();
            if max_point([g1, g2, g3]) > d {
                return Err(OrbError::Invalid(format!("functions do not fit in {}", g.spec())));
            }
            let v = factored_constant(&g1.embed(d), &g2.embed(d), &g3.embed(d), &g, seed)?.value;
            Ok((n, v))
        })
        .collect()
}

fn labels_for(reps: &[WeightedFunction]) -> Vec<Label> {
    reps.iter().map(|r| Label { id: r.to_string(), wt: r.weight }).collect()
}

fn representatives(g: &PermGroupHandle, seed: &ConstantTable, cap: u32) -> Result<Vec<WeightedFunction>> {
    let labels = seed.label_set();
    let mut reps = vec![WeightedFunction::vacuum(g.degree())];
    for n in 1..=cap {
        reps.extend(orbit_representatives(g, &labels, n, DEFAULT_STATE_BUDGET)?);
    }
    Ok(reps)
}

/// Constants of `V^G` among orbit representatives of weight at most
/// `min(cap, seed cutoff)`.
pub fn fixed_point_table(g: &PermGroupHandle, seed: &ConstantTable, cap: u32) -> Result<ConstantTable> {
    let cut = cap.min(seed.cutoff());
    let reps = representatives(g, seed, cut)?;
    let mut table = ConstantTable::new(format!("{}/{}", seed.name(), g.spec()), cut, labels_for(&reps))?
        .with_origin(g.spec(), g.n());
    for (i, x) in reps.iter().enumerate() {
        for (j, y) in reps.iter().enumerate() {
            for (k, z) in reps.iter().enumerate() {
                let v = factored_constant(x, y, z, g, seed)?.value;
                if !v.is_zero() {
                    table.set_at([i, j, k], v);
                }
            }
        }
    }
    Ok(table)
}

/// Limit constants among the stable orbit representatives of weight at most
/// `min(cap, seed cutoff)`.
pub fn limit_table(kind: GroupKind, seed: &ConstantTable, cap: u32, budget: u64) -> Result<ConstantTable> {
    let cut = cap.min(seed.cutoff());
    // supports of weight <= cut fit in cut points (S) or span at most cut dimensions (GL)
    let g = build_group(kind, cut.max(1))?.with_budget(budget);
    let reps = representatives(&g, seed, cut)?;
    let mut table = ConstantTable::new(format!("{}/{}-limit", seed.name(), kind.family_name()), cut, labels_for(&reps))?
        .with_origin(format!("{}-limit", kind.family_name()), g.n());
    for (i, x) in reps.iter().enumerate() {
        for (j, y) in reps.iter().enumerate() {
            for (k, z) in reps.iter().enumerate() {
                let v = if [x, y, z].iter().all(|f| f.support.is_empty()) {
                    Scalar::one()
                } else {
                    limit_constant(x, y, z, kind, seed, budget)?.value
                };
                if !v.is_zero() {
                    table.set_at([i, j, k], v);
                }
            }
        }
    }
    debug_assert_eq!(table.labels()[0].id, VACUUM);
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::DEFAULT_BUDGET;
    use crate::rational::{int, ratio};
    use crate::structure::jacobi_check;
    use crate::structure::{heisenberg_seed, unit1_seed};
    use std::collections::BTreeMap;

    fn f(pts: &[(u32, &str)]) -> WeightedFunction {
        let degree = pts.iter().map(|p| p.0 + 1).max().unwrap_or(1);
        WeightedFunction {
            degree,
            support: pts.iter().map(|&(p, l)| (p, l.to_string())).collect::<BTreeMap<_, _>>(),
            weight: pts.len() as u32,
        }
    }

    #[test]
    fn symmetric_worked_example() {
        let seed = unit1_seed();
        let aa = f(&[(0, "a"), (1, "a")]);
        let a = f(&[(0, "a")]);
        let r = limit_constant(&aa, &a, &a, GroupKind::Symmetric, &seed, DEFAULT_BUDGET).unwrap();
        assert_eq!(r.value.square().as_rational(), Some(int(2)));
        assert!(r.complete);
        assert!(!r.kept.is_empty());
        let seq = finite_sequence(&aa, &a, &a, GroupKind::Symmetric, &seed, &[2, 3, 4, 8], DEFAULT_BUDGET).unwrap();
        for (n, v) in seq {
            assert_eq!(v.square().as_rational(), Some(ratio(2 * (n as i64 - 1), n as i64)));
        }
    }

    #[test]
    fn single_trace_vanishes() {
        let mut seed = unit1_seed();
        seed.set("a", "a", "a", Scalar::one()).unwrap();
        let a = f(&[(0, "a")]);
        let r = limit_constant(&a, &a, &a, GroupKind::Symmetric, &seed, DEFAULT_BUDGET).unwrap();
        assert!(r.value.is_zero());
        assert!(r.dropped.iter().any(|d| d.n3 == 1 && d.rate.as_deref() == Some("M = O(N^(-1/2))")));
    }

    #[test]
    fn general_linear_example() {
        let seed = unit1_seed();
        // vectors e1, e2 and the one-point function on e1
        let two = f(&[(1, "a"), (2, "a")]);
        let one = f(&[(1, "a")]);
        let r = limit_constant(&two, &one, &one, GroupKind::GeneralLinear { q: 2 }, &seed, DEFAULT_BUDGET).unwrap();
        assert!(!r.value.is_zero());
        assert!(r.dropped.iter().all(|d| d.rate.as_deref().unwrap().starts_with("M = O(2^(-N*")));
        let seq = finite_sequence(&two, &one, &one, GroupKind::GeneralLinear { q: 2 }, &seed, &[2, 3], DEFAULT_BUDGET).unwrap();
        assert_eq!(seq.len(), 2);
        assert!(seq.iter().all(|(_, v)| !v.is_zero()));
    }

    #[test]
    fn cyclic_has_no_limit() {
        let a = f(&[(0, "a")]);
        assert!(limit_constant(&a, &a, &a, GroupKind::Cyclic, &unit1_seed(), DEFAULT_BUDGET).is_err());
    }

    #[test]
    fn computed_tables_satisfy_jacobi() {
        let s2 = build_group(GroupKind::Symmetric, 2).unwrap();
        let t = fixed_point_table(&s2, &heisenberg_seed(2).unwrap(), 2).unwrap();
        let r = jacobi_check(&t, 2).unwrap();
        assert!(r.passed, "{:?}", r.failures.first().map(|w| w.to_string()));
        let t = limit_table(GroupKind::Symmetric, &heisenberg_seed(2).unwrap(), 2, DEFAULT_BUDGET).unwrap();
        let r = jacobi_check(&t, 2).unwrap();
        assert!(r.passed, "{:?}", r.failures.first().map(|w| w.to_string()));
    }
}
