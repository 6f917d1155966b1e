//! Orbit counts of weighted functions and subsets, and the diagnostics built
//! on them (stabilization in N, the `b_n <= A(n)^n f_n` bound, growth rates).

use std::collections::{BTreeMap, HashSet};
use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{OrbError, Result};
use crate::groups::{build_group, GroupKind, PermGroupHandle, SubsetK};
use crate::rational::{binomial, ln_biguint, serde_biguint, to_biguint};
use crate::series::{cycle_index_character, TruncatedSeries};

/// Default cap on the number of weight-`n` functions a direct sweep visits.
pub const DEFAULT_STATE_BUDGET: u64 = 10_000_000;

/// Non-vacuum basis labels with their weights.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabelSet {
    labels: Vec<(String, u32)>,
}

impl LabelSet {
    pub fn new(labels: Vec<(String, u32)>) -> Result<Self> {
        if let Some((id, _)) = labels.iter().find(|(_, w)| *w == 0) {
            return Err(OrbError::Invalid(format!("label {id} has weight 0; only the vacuum may")));
        }
        let mut seen = HashSet::new();
        for (id, _) in &labels {
            if !seen.insert(id) {
                return Err(OrbError::Invalid(format!("duplicate label {id}")));
            }
        }
        Ok(LabelSet { labels })
    }

    /// Synthetic labels realising a character: `a_w` labels named `w<w>`
    /// (or `w<w>_<i>` when `a_w > 1`); a single weight-one label is `a`.
    pub fn from_character(a: &TruncatedSeries) -> Result<Self> {
        let counts = a
            .to_biguints()
            .ok_or_else(|| OrbError::Invalid("character coefficients must be non-negative integers".into()))?;
        if counts.first() != Some(&BigUint::one()) {
            return Err(OrbError::Invalid("character must start with 1".into()));
        }
        let mut labels = Vec::new();
        for (w, c) in counts.iter().enumerate().skip(1) {
            let c = c
                .to_u32()
                .filter(|&c| c <= 100_000)
                .ok_or_else(|| OrbError::Invalid(format!("too many labels at weight {w} to materialise")))?;
            for i in 0..c {
                let id = match (w, c) {
                    (1, 1) => "a".to_string(),
                    (_, 1) => format!("w{w}"),
                    _ => format!("w{w}_{i}"),
                };
                labels.push((id, w as u32));
            }
        }
        LabelSet::new(labels)
    }

    pub fn labels(&self) -> &[(String, u32)] {
        &self.labels
    }

    pub fn weight_of(&self, id: &str) -> Option<u32> {
        self.labels.iter().find(|(l, _)| l == id).map(|(_, w)| *w)
    }

    pub fn character(&self, order: usize) -> TruncatedSeries {
        let mut counts = vec![0i64; order + 1];
        counts[0] = 1;
        for (_, w) in &self.labels {
            if (*w as usize) <= order {
                counts[*w as usize] += 1;
            }
        }
        TruncatedSeries::from_integers(&counts, order)
    }
}

/// A function `X_N -> labels`, vacuum outside its support.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct WeightedFunction {
    pub degree: u32,
    pub support: BTreeMap<u32, String>,
    pub weight: u32,
}

impl WeightedFunction {
    pub fn new(degree: u32, support: BTreeMap<u32, String>, labels: &LabelSet) -> Result<Self> {
        let mut weight = 0;
        for (&p, id) in &support {
            if p >= degree {
                return Err(OrbError::Invalid(format!("point {p} outside 0..{degree}")));
            }
            weight += labels
                .weight_of(id)
                .ok_or_else(|| OrbError::Invalid(format!("unknown or vacuum label {id:?} in support")))?;
        }
        Ok(WeightedFunction { degree, support, weight })
    }

    /// Parses the displayed form: `vac` or `p:label,p:label,...`.
    pub fn parse(s: &str, degree: u32, labels: &LabelSet) -> Result<Self> {
        let s = s.trim();
        let mut support = BTreeMap::new();
        if s != "vac" && !s.is_empty() {
            for part in s.split(',') {
                let (p, l) = part
                    .split_once(':')
                    .ok_or_else(|| OrbError::Parse(format!("expected point:label, got {part:?}")))?;
                let p: u32 = p.trim().parse().map_err(|_| OrbError::Parse(format!("bad point in {part:?}")))?;
                if support.insert(p, l.trim().to_string()).is_some() {
                    return Err(OrbError::Parse(format!("point {p} repeated in {s:?}")));
                }
            }
        }
        Self::new(degree, support, labels)
    }

    pub fn vacuum(degree: u32) -> Self {
        WeightedFunction { degree, support: BTreeMap::new(), weight: 0 }
    }

    pub fn support_set(&self) -> SubsetK {
        SubsetK::new(self.support.keys().copied().collect()).expect("map keys are distinct")
    }

    pub fn label_at(&self, x: u32) -> Option<&str> {
        self.support.get(&x).map(String::as_str)
    }

    /// `(sigma g)(x sigma) = g(x)`.
    pub fn act(&self, images: &[u32]) -> Self {
        WeightedFunction {
            degree: self.degree,
            support: self.support.iter().map(|(&p, l)| (images[p as usize], l.clone())).collect(),
            weight: self.weight,
        }
    }

    /// Ordering key: sorted support points, then labels in point order.
    pub fn key(&self) -> (Vec<u32>, Vec<&str>) {
        (self.support.keys().copied().collect(), self.support.values().map(String::as_str).collect())
    }

    /// Same function on a larger point set (natural embedding `X_N -> X_M`).
    pub fn embed(&self, degree: u32) -> Self {
        WeightedFunction { degree, ..self.clone() }
    }
}

impl fmt::Display for WeightedFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.support.is_empty() {
            return write!(f, "vac");
        }
        let parts: Vec<String> = self.support.iter().map(|(p, l)| format!("{p}:{l}")).collect();
        write!(f, "{}", parts.join(","))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CountKind {
    Bn,
    Fn,
}

impl fmt::Display for CountKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CountKind::Bn => "bn",
            CountKind::Fn => "fn",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitRow {
    pub family: String,
    pub seed: String,
    pub n: u32,
    #[serde(rename = "N")]
    pub big_n: u32,
    #[serde(with = "serde_biguint")]
    pub count: BigUint,
    pub kind: CountKind,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitTable {
    pub rows: Vec<OrbitRow>,
}

impl OrbitTable {
    pub fn counts(&self) -> Vec<BigUint> {
        self.rows.iter().map(|r| r.count.clone()).collect()
    }

    pub fn extend(&mut self, other: OrbitTable) {
        self.rows.extend(other.rows);
    }
}

fn family_label(g: &PermGroupHandle) -> String {
    match g.kind() {
        GroupKind::Symmetric => "S".into(),
        GroupKind::Cyclic => "Z".into(),
        GroupKind::GeneralLinear { q } => format!("GL_{q}"),
    }
}

/// `b_n(G)` for `n <= n_max` through the cycle index.
pub fn bn_table(g: &PermGroupHandle, a: &TruncatedSeries, seed: &str, n_max: usize) -> Result<OrbitTable> {
    if n_max > a.order() {
        return Err(OrbError::Invalid(format!(
            "n_max = {n_max} exceeds the seed character order {}",
            a.order()
        )));
    }
    let z = cycle_index_character(&g.cycle_index()?, a, n_max)?;
    let counts = z.to_biguints().expect("checked integral");
    Ok(OrbitTable {
        rows: counts
            .into_iter()
            .enumerate()
            .map(|(n, count)| OrbitRow {
                family: family_label(g),
                seed: seed.into(),
                n: n as u32,
                big_n: g.n(),
                count,
                kind: CountKind::Bn,
            })
            .collect(),
    })
}

/// `f_n(G)`: orbits of `n`-subsets, via the cycle index with seed `1 + t`.
pub fn fn_table(g: &PermGroupHandle, n_max: usize) -> Result<OrbitTable> {
    let counts: Vec<BigUint> = match g.kind() {
        GroupKind::Symmetric => (0..=n_max)
            .map(|n| if n as u32 <= g.degree() { BigUint::one() } else { BigUint::zero() })
            .collect(),
        _ => {
            let a = TruncatedSeries::from_integers(&[1, 1], n_max);
            cycle_index_character(&g.cycle_index()?, &a, n_max)?.to_biguints().expect("integral")
        }
    };
    Ok(OrbitTable {
        rows: counts
            .into_iter()
            .enumerate()
            .map(|(n, count)| OrbitRow {
                family: family_label(g),
                seed: "-".into(),
                n: n as u32,
                big_n: g.n(),
                count,
                kind: CountKind::Fn,
            })
            .collect(),
    })
}

/// Number of weight-`n` functions on `degree` points.
fn function_count(labels: &LabelSet, degree: u32, n: usize) -> BigUint {
    let a = labels.character(n);
    let total = a.pow(degree);
    to_biguint(total.coeff(n).expect("order n")).unwrap_or_default()
}

/// Every weight-`n` function, supports in increasing point order.
pub fn weight_n_functions(labels: &LabelSet, degree: u32, n: u32, budget: u64) -> Result<Vec<WeightedFunction>> {
    let needed = function_count(labels, degree, n as usize);
    if needed > BigUint::from(budget) {
        return Err(OrbError::budget(format!("weight-{n} functions on {degree} points"), needed, budget));
    }
    let mut out = Vec::new();
    let mut cur = BTreeMap::new();
    fn rec(
        x: u32,
        rem: u32,
        degree: u32,
        labels: &LabelSet,
        cur: &mut BTreeMap<u32, String>,
        out: &mut Vec<WeightedFunction>,
        n: u32,
    ) {
        if rem == 0 {
            out.push(WeightedFunction { degree, support: cur.clone(), weight: n });
            return;
        }
        if x == degree {
            return;
        }
        for (id, w) in labels.labels() {
            if *w <= rem {
                cur.insert(x, id.clone());
                rec(x + 1, rem - w, degree, labels, cur, out, n);
                cur.remove(&x);
            }
        }
        rec(x + 1, rem, degree, labels, cur, out, n);
    }
    rec(0, n, degree, labels, &mut cur, &mut out, n);
    Ok(out)
}

/// One canonical (key-minimal) representative per orbit of weight-`n`
/// functions, found by sweeping the full element list.
pub fn orbit_representatives(
    g: &PermGroupHandle,
    labels: &LabelSet,
    n: u32,
    state_budget: u64,
) -> Result<Vec<WeightedFunction>> {
    let elements = g.elements()?;
    let functions = weight_n_functions(labels, g.degree(), n, state_budget)?;
    let mut visited: HashSet<WeightedFunction> = HashSet::new();
    let mut reps = Vec::new();
    for f in functions {
        if visited.contains(&f) {
            continue;
        }
        let mut best = f.clone();
        for p in &elements {
            let h = f.act(p.images());
            if h.key() < best.key() {
                best = h.clone();
            }
            visited.insert(h);
        }
        reps.push(best);
    }
    reps.sort_by(|a, b| a.key().cmp(&b.key()));
    Ok(reps)
}

/// Orbit count of `n`-subsets by direct sweep (independent of the cycle index).
pub fn fn_direct(g: &PermGroupHandle, n: usize) -> Result<u64> {
    let labels = LabelSet::new(vec![("a".into(), 1)])?;
    Ok(orbit_representatives(g, &labels, n as u32, DEFAULT_STATE_BUDGET)?.len() as u64)
}

/// Bounds `binom(q^m, m) <= f_n <= sum_K q^(K(n-K))` with `m = floor(n/2)`;
/// the lower bound is heuristic for odd `n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FnBounds {
    #[serde(with = "serde_biguint")]
    pub lower: BigUint,
    #[serde(with = "serde_biguint")]
    pub upper: BigUint,
    pub lower_heuristic: bool,
}

pub fn gl_fn_bounds(n: u32, q: u32) -> FnBounds {
    let upper = (0..=n).fold(BigUint::zero(), |acc, k| acc + BigUint::from(q).pow(k * (n - k)));
    let m = n / 2;
    let lower = binomial(&BigUint::from(q).pow(m), m as u64);
    FnBounds { lower, upper, lower_heuristic: n % 2 == 1 }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Stabilization {
    /// Constant from this N through N_max (at least two values).
    StableFrom(u32),
    /// Strictly increasing over the last three N.
    Increasing,
    Inconclusive,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BoundCheck {
    pub n: u32,
    #[serde(rename = "N")]
    pub big_n: u32,
    #[serde(with = "serde_biguint")]
    pub bn: BigUint,
    #[serde(with = "serde_biguint")]
    pub bound: BigUint,
    pub holds: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RestrictionCheck {
    pub subset: Vec<u32>,
    /// `(N, |G(K)_N|)` for every N where `K` fits.
    pub orders: Vec<(u32, usize)>,
    pub stable: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct OligoReport {
    pub family: String,
    pub table: OrbitTable,
    pub stabilization: Vec<(u32, Stabilization)>,
    pub bound_checks: Vec<BoundCheck>,
    pub restriction_checks: Vec<RestrictionCheck>,
    /// Members skipped because they exceed the element budget.
    pub skipped: Vec<u32>,
    pub verdict: String,
}

/// Finite-N diagnostics for the nested oligomorphic property.
pub fn oligomorphic_check(
    kind: GroupKind,
    a: &TruncatedSeries,
    seed: &str,
    n_max: usize,
    big_n_max: u32,
    budget: u64,
) -> Result<OligoReport> {
    let mut table = OrbitTable::default();
    let mut per_n: BTreeMap<u32, Vec<(u32, BigUint)>> = BTreeMap::new();
    let mut bound_checks = Vec::new();
    let mut skipped = Vec::new();
    let big_a: Vec<BigUint> = {
        let c = a.to_biguints().ok_or_else(|| OrbError::Invalid("seed character must be integral".into()))?;
        let mut acc = BigUint::zero();
        c.iter().map(|x| {
            acc += x;
            acc.clone()
        })
        .collect()
    };
    let mut groups = Vec::new();
    for big_n in 1..=big_n_max {
        let g = build_group(kind, big_n)?.with_budget(budget);
        let bn = match bn_table(&g, a, seed, n_max) {
            Ok(t) => t,
            Err(OrbError::Budget { .. }) => {
                skipped.push(big_n);
                continue;
            }
            Err(e) => return Err(e),
        };
        let fnt = fn_table(&g, n_max)?;
        for (row, f) in bn.rows.iter().zip(&fnt.rows) {
            per_n.entry(row.n).or_default().push((big_n, row.count.clone()));
            if g.degree() >= row.n && row.n >= 1 {
                let bound = big_a[row.n as usize].pow(row.n) * &f.count;
                bound_checks.push(BoundCheck {
                    n: row.n,
                    big_n,
                    bn: row.count.clone(),
                    holds: row.count <= bound,
                    bound,
                });
            }
        }
        table.extend(bn);
        groups.push(g);
    }
    let mut stabilization = Vec::new();
    for (&n, series) in &per_n {
        // only consecutive N count towards stabilization
        let mut stable_from = None;
        let last = series.last().map(|(nn, _)| *nn);
        for i in (0..series.len()).rev() {
            let consecutive = i + 1 == series.len() || series[i + 1].0 == series[i].0 + 1;
            if !consecutive || series[i].1 != series[series.len() - 1].1 {
                break;
            }
            stable_from = Some(series[i].0);
        }
        let verdict = match stable_from {
            Some(s) if Some(s) != last => Stabilization::StableFrom(s),
            _ => {
                let k = series.len();
                if k >= 3 && series[k - 3].1 < series[k - 2].1 && series[k - 2].1 < series[k - 1].1 {
                    Stabilization::Increasing
                } else {
                    Stabilization::Inconclusive
                }
            }
        };
        stabilization.push((n, verdict));
    }
    let mut restriction_checks = Vec::new();
    for size in 1..=n_max.min(3) {
        let subset: Vec<u32> = (0..size as u32).collect();
        let mut orders = Vec::new();
        for g in &groups {
            if (size as u32) <= g.degree() {
                let k = SubsetK::new(subset.clone())?;
                orders.push((g.n(), g.stabilizers(&k)?.restriction.len()));
            }
        }
        let stable = orders.len() >= 2 && orders[orders.len() - 2].1 == orders[orders.len() - 1].1;
        restriction_checks.push(RestrictionCheck { subset, orders, stable });
    }
    let bounds_ok = bound_checks.iter().all(|b| b.holds);
    let verdict = if stabilization.iter().any(|(_, s)| *s == Stabilization::Increasing) {
        "not oligomorphic".to_string()
    } else if stabilization.iter().all(|(_, s)| matches!(s, Stabilization::StableFrom(_)))
        && bounds_ok
        && restriction_checks.iter().all(|r| r.stable)
    {
        "consistent with nested oligomorphic".to_string()
    } else {
        "inconclusive".to_string()
    };
    Ok(OligoReport {
        family: kind.family_name(),
        table,
        stabilization,
        bound_checks,
        restriction_checks,
        skipped,
        verdict,
    })
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GrowthReport {
    /// `(n, log(b_n) / n^2)` for `n >= 1`.
    pub alpha: Vec<(u32, f64)>,
    /// `alpha_{n+1} - alpha_n`.
    pub differences: Vec<f64>,
}

/// `log(b_n)/n^2` and its successive differences for the rows of a table.
pub fn growth_exponent(counts: &[(u32, BigUint)]) -> Result<GrowthReport> {
    let positive: Vec<&(u32, BigUint)> = counts.iter().filter(|(n, _)| *n >= 1).collect();
    if positive.len() < 3 {
        return Err(OrbError::Invalid("growth estimate needs at least three entries with n >= 1".into()));
    }
    let mut alpha = Vec::new();
    for (n, c) in positive {
        if c.is_zero() {
            return Err(OrbError::Invalid(format!("zero count at n = {n}")));
        }
        alpha.push((*n, ln_biguint(c) / (*n as f64 * *n as f64)));
    }
    let differences = alpha.windows(2).map(|w| w[1].1 - w[0].1).collect();
    Ok(GrowthReport { alpha, differences })
}
