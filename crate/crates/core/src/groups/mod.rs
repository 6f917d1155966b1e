//! Permutation actions of S_N, Z_N and GL(N, q) on F_q^N.
//!
//! Permutations act on the right: `x -> x sigma = images[x]`, and on
//! functions by `(sigma g)(x sigma) = g(x)`.

pub mod gl;
pub mod sym;

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{OrbError, Result};
use crate::rational::{factorial, format_rational, from_biguint, parse_rational};
use gl::Field;

/// Default cap on the number of group elements (or candidate images) a
/// single enumeration may visit.
pub const DEFAULT_BUDGET: u64 = 20_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum GroupKind {
    Symmetric,
    Cyclic,
    GeneralLinear { q: u32 },
}

impl GroupKind {
    pub fn family_name(&self) -> String {
        match self {
            GroupKind::Symmetric => "S".into(),
            GroupKind::Cyclic => "Z".into(),
            GroupKind::GeneralLinear { q } => format!("GL:q={q}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Permutation {
    images: Vec<u32>,
}

impl Permutation {
    pub fn new(images: Vec<u32>) -> Result<Self> {
        let mut seen = vec![false; images.len()];
        for &i in &images {
            let slot = seen
                .get_mut(i as usize)
                .ok_or_else(|| OrbError::Invalid(format!("image {i} out of range")))?;
            if *slot {
                return Err(OrbError::Invalid(format!("image {i} repeated")));
            }
            *slot = true;
        }
        Ok(Permutation { images })
    }

    pub fn identity(degree: u32) -> Self {
        Permutation { images: (0..degree).collect() }
    }

    pub fn images(&self) -> &[u32] {
        &self.images
    }

    pub fn degree(&self) -> u32 {
        self.images.len() as u32
    }

    pub fn apply(&self, x: u32) -> u32 {
        self.images[x as usize]
    }

    /// `self` followed by `other` (right action).
    pub fn then(&self, other: &Permutation) -> Permutation {
        Permutation { images: self.images.iter().map(|&x| other.images[x as usize]).collect() }
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.images.len()];
        for (x, &y) in self.images.iter().enumerate() {
            inv[y as usize] = x as u32;
        }
        Permutation { images: inv }
    }
}

/// Multiset of cycle lengths, `k -> m_k`; zero multiplicities are not stored.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct CycleType {
    mults: BTreeMap<u32, u32>,
}

impl CycleType {
    pub fn from_pairs(pairs: &[(u32, u32)]) -> Self {
        let mut mults = BTreeMap::new();
        for &(k, m) in pairs {
            if m > 0 {
                *mults.entry(k).or_insert(0) += m;
            }
        }
        CycleType { mults }
    }

    pub fn multiplicities(&self) -> &BTreeMap<u32, u32> {
        &self.mults
    }

    pub fn degree(&self) -> u32 {
        self.mults.iter().map(|(k, m)| k * m).sum()
    }

    pub fn count(&self, k: u32) -> u32 {
        self.mults.get(&k).copied().unwrap_or(0)
    }

    pub fn moved_points(&self) -> u32 {
        self.degree() - self.count(1)
    }

    pub fn is_identity(&self) -> bool {
        self.mults.keys().all(|&k| k == 1)
    }

    /// Disjoint union of two cycle types.
    pub fn join(&self, other: &CycleType) -> CycleType {
        let mut out = self.clone();
        for (&k, &m) in &other.mults {
            *out.mults.entry(k).or_insert(0) += m;
        }
        out
    }

    fn from_counts(counts: &[u16]) -> Self {
        CycleType {
            mults: counts
                .iter()
                .enumerate()
                .filter(|(_, &m)| m > 0)
                .map(|(k, &m)| (k as u32, m as u32))
                .collect(),
        }
    }
}

impl fmt::Display for CycleType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.mults.iter().map(|(k, m)| format!("{k}:{m}")).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

pub fn cycle_type(p: &Permutation) -> CycleType {
    let mut counts = vec![0u16; p.images.len() + 1];
    cycle_counts(&p.images, &mut counts, &mut vec![false; p.images.len()]);
    CycleType::from_counts(&counts)
}

fn cycle_counts(images: &[u32], counts: &mut [u16], seen: &mut [bool]) {
    counts.iter_mut().for_each(|c| *c = 0);
    seen.iter_mut().for_each(|s| *s = false);
    for start in 0..images.len() {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut x = start;
        while !seen[x] {
            seen[x] = true;
            x = images[x] as usize;
            len += 1;
        }
        counts[len] += 1;
    }
}

/// Per-chunk cycle-type counts with reusable scratch space. Entries are
/// bucketed by an order-independent fingerprint and confirmed by comparing
/// the full count vectors.
struct CycleHistogram {
    counts: Vec<u16>,
    seen: Vec<bool>,
    buckets: HashMap<u64, Vec<(Vec<u16>, u64)>>,
}

impl CycleHistogram {
    fn new(degree: usize) -> Self {
        CycleHistogram { counts: vec![0; degree + 1], seen: vec![false; degree], buckets: HashMap::new() }
    }

    fn fingerprint(counts: &[u16]) -> u64 {
        counts.iter().enumerate().filter(|(_, &m)| m > 0).fold(0u64, |acc, (k, &m)| {
            acc.wrapping_add((k as u64 + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15).rotate_left(m as u32 % 64) ^ m as u64)
        })
    }

    fn add(&mut self, counts: &[u16], n: u64) {
        let bucket = self.buckets.entry(Self::fingerprint(counts)).or_default();
        match bucket.iter_mut().find(|(c, _)| c.as_slice() == counts) {
            Some((_, v)) => *v += n,
            None => bucket.push((counts.to_vec(), n)),
        }
    }

    fn record(&mut self, images: &[u32]) {
        cycle_counts(images, &mut self.counts, &mut self.seen);
        let counts = std::mem::take(&mut self.counts);
        self.add(&counts, 1);
        self.counts = counts;
    }

    fn absorb(&mut self, other: CycleHistogram) {
        for (_, bucket) in other.buckets {
            for (c, n) in bucket {
                self.add(&c, n);
            }
        }
    }

    fn into_map(self) -> HashMap<Vec<u16>, u64> {
        self.buckets.into_values().flatten().collect()
    }
}

/// Cycle index `sum_ct weight(ct) prod_k s_k^(m_k)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycleIndex {
    degree: u32,
    terms: BTreeMap<CycleType, BigRational>,
}

impl CycleIndex {
    pub fn from_terms(degree: u32, terms: Vec<(CycleType, BigRational)>) -> Result<Self> {
        let mut map: BTreeMap<CycleType, BigRational> = BTreeMap::new();
        for (ct, w) in terms {
            if ct.degree() != degree {
                return Err(OrbError::Invalid(format!("cycle type {ct} does not have degree {degree}")));
            }
            if w <= BigRational::zero() {
                return Err(OrbError::Invalid(format!("non-positive weight {}", format_rational(&w))));
            }
            *map.entry(ct).or_insert_with(BigRational::zero) += w;
        }
        let total: BigRational = map.values().cloned().sum();
        if total != BigRational::one() {
            return Err(OrbError::Invalid(format!("weights sum to {}", format_rational(&total))));
        }
        Ok(CycleIndex { degree, terms: map })
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn terms(&self) -> impl Iterator<Item = (&CycleType, &BigRational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn weight(&self, ct: &CycleType) -> Option<&BigRational> {
        self.terms.get(ct)
    }

    /// Value with every `s_k = 1`.
    pub fn total_weight(&self) -> BigRational {
        self.terms.values().cloned().sum()
    }

    fn from_histogram(degree: u32, order: &BigUint, hist: HashMap<Vec<u16>, u64>) -> Self {
        let order = from_biguint(order);
        let terms = hist
            .into_iter()
            .map(|(counts, n)| {
                (CycleType::from_counts(&counts), BigRational::from_integer(BigInt::from(n)) / &order)
            })
            .collect();
        CycleIndex { degree, terms }
    }
}

#[derive(Serialize, Deserialize)]
struct CycleTermJson {
    cycles: BTreeMap<String, u32>,
    weight: String,
}

impl Serialize for CycleIndex {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let v: Vec<CycleTermJson> = self
            .terms
            .iter()
            .map(|(ct, w)| CycleTermJson {
                cycles: ct.mults.iter().map(|(k, m)| (k.to_string(), *m)).collect(),
                weight: format_rational(w),
            })
            .collect();
        v.serialize(s)
    }
}

impl<'de> Deserialize<'de> for CycleIndex {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error;
        let v = Vec::<CycleTermJson>::deserialize(d)?;
        let mut terms = Vec::new();
        for t in v {
            let mut pairs = Vec::new();
            for (k, m) in t.cycles {
                pairs.push((k.parse::<u32>().map_err(D::Error::custom)?, m));
            }
            terms.push((CycleType::from_pairs(&pairs), parse_rational(&t.weight).map_err(D::Error::custom)?));
        }
        let degree = terms.first().map(|(ct, _)| ct.degree()).unwrap_or(0);
        CycleIndex::from_terms(degree, terms).map_err(D::Error::custom)
    }
}

/// Sorted point set `K`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
pub struct SubsetK {
    points: Vec<u32>,
}

impl SubsetK {
    pub fn new(mut points: Vec<u32>) -> Result<Self> {
        points.sort_unstable();
        if points.windows(2).any(|w| w[0] == w[1]) {
            return Err(OrbError::Invalid(format!("duplicate points in {points:?}")));
        }
        Ok(SubsetK { points })
    }

    pub fn points(&self) -> &[u32] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// Setwise and pointwise stabilizer orders of `K` and the restriction group,
/// as position permutations of `K` (`perm[i] = j`: `K[i] -> K[j]`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Stabilizers {
    pub setwise: BigUint,
    pub pointwise: BigUint,
    pub restriction: Vec<Vec<usize>>,
}

#[derive(Clone, Debug)]
pub struct PermGroupHandle {
    kind: GroupKind,
    n: u32,
    degree: u32,
    order: BigUint,
    budget: u64,
}

pub fn is_prime(q: u32) -> bool {
    q >= 2 && (2..).take_while(|d| d * d <= q).all(|d| !q.is_multiple_of(d))
}

pub fn build_group(kind: GroupKind, n: u32) -> Result<PermGroupHandle> {
    if n == 0 {
        return Err(OrbError::Invalid("N must be at least 1".into()));
    }
    let (degree, order) = match kind {
        GroupKind::Symmetric => (n, factorial(n as u64)),
        GroupKind::Cyclic => (n, BigUint::from(n)),
        GroupKind::GeneralLinear { q } => {
            if !is_prime(q) {
                return Err(OrbError::Invalid(format!("q = {q} is not prime")));
            }
            let degree = (q as u64)
                .checked_pow(n)
                .filter(|&d| d <= u32::MAX as u64 / 2)
                .ok_or_else(|| OrbError::Invalid(format!("q^N = {q}^{n} is too large")))?;
            (degree as u32, gl::gl_order(n, q))
        }
    };
    Ok(PermGroupHandle { kind, n, degree, order, budget: DEFAULT_BUDGET })
}

/// Parses `S:<N>`, `Z:<N>` or `GL:<N>:<q>`.
pub fn parse_group_spec(spec: &str) -> Result<PermGroupHandle> {
    let parts: Vec<&str> = spec.trim().split(':').collect();
    let num = |s: &str| -> Result<u32> {
        s.parse().map_err(|_| OrbError::Parse(format!("bad number {s:?} in group spec {spec:?}")))
    };
    match parts.as_slice() {
        ["S", n] => build_group(GroupKind::Symmetric, num(n)?),
        ["Z", n] => build_group(GroupKind::Cyclic, num(n)?),
        ["GL", n, q] => build_group(GroupKind::GeneralLinear { q: num(q)? }, num(n)?),
        _ => Err(OrbError::Parse(format!("malformed group spec {spec:?}; expected S:<N>, Z:<N> or GL:<N>:<q>"))),
    }
}

fn gl_cache() -> &'static Mutex<HashMap<(u32, u32), Arc<CycleIndex>>> {
    static CACHE: OnceLock<Mutex<HashMap<(u32, u32), Arc<CycleIndex>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

impl PermGroupHandle {
    pub fn kind(&self) -> GroupKind {
        self.kind
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn order(&self) -> &BigUint {
        &self.order
    }

    pub fn budget(&self) -> u64 {
        self.budget
    }

    pub fn with_budget(mut self, budget: u64) -> Self {
        self.budget = budget.max(1);
        self
    }

    pub fn spec(&self) -> String {
        match self.kind {
            GroupKind::Symmetric => format!("S:{}", self.n),
            GroupKind::Cyclic => format!("Z:{}", self.n),
            GroupKind::GeneralLinear { q } => format!("GL:{}:{}", self.n, q),
        }
    }

    /// The next member of the nested family (N + 1).
    pub fn successor(&self) -> Result<Self> {
        Ok(build_group(self.kind, self.n + 1)?.with_budget(self.budget))
    }

    pub fn field(&self) -> Option<Field> {
        match self.kind {
            GroupKind::GeneralLinear { q } => Some(Field::new(q, self.n)),
            _ => None,
        }
    }

    pub(crate) fn check_budget(&self, what: &str, needed: &BigUint) -> Result<()> {
        if *needed > BigUint::from(self.budget) {
            return Err(OrbError::budget(format!("{what} for {}", self.spec()), needed, self.budget));
        }
        Ok(())
    }

    pub fn check_enumerable(&self) -> Result<()> {
        self.check_budget("element enumeration", &self.order)
    }

    fn chunks(&self) -> Vec<Option<u32>> {
        match self.kind {
            GroupKind::Symmetric => (0..self.degree).map(Some).collect(),
            GroupKind::Cyclic => vec![None],
            GroupKind::GeneralLinear { .. } => (1..self.degree).map(Some).collect(),
        }
    }

    fn stream_chunk(&self, chunk: Option<u32>, f: &mut dyn FnMut(&[u32])) {
        match self.kind {
            GroupKind::Symmetric => sym::for_each_permutation(self.n, chunk, f),
            GroupKind::Cyclic => {
                let n = self.n;
                let mut imgs = vec![0u32; n as usize];
                for r in 0..n {
                    for (x, slot) in imgs.iter_mut().enumerate() {
                        *slot = (x as u32 + r) % n;
                    }
                    f(&imgs);
                }
            }
            GroupKind::GeneralLinear { q } => {
                let field = Field::new(q, self.n);
                gl::for_each_matrix(&field, chunk, &mut |_, imgs| f(imgs));
            }
        }
    }

    /// Streams every element in the documented order: lexicographic images
    /// for S_N, rotation amount for Z_N, lexicographic column tuples for GL.
    pub fn for_each_element(&self, f: &mut dyn FnMut(&[u32])) -> Result<()> {
        self.check_enumerable()?;
        for chunk in self.chunks() {
            self.stream_chunk(chunk, f);
        }
        Ok(())
    }

    /// Parallel fold over all elements; chunk results are merged in chunk
    /// order, so any commutative `merge` gives schedule-independent output.
    pub fn par_fold<T, I, F, M>(&self, init: I, fold: F, merge: M) -> Result<T>
    where
        T: Send,
        I: Fn() -> T + Sync,
        F: Fn(&mut T, &[u32]) + Sync,
        M: Fn(T, T) -> T,
    {
        self.check_enumerable()?;
        let parts: Vec<T> = self
            .chunks()
            .into_par_iter()
            .map(|chunk| {
                let mut acc = init();
                self.stream_chunk(chunk, &mut |p| fold(&mut acc, p));
                acc
            })
            .collect();
        Ok(parts.into_iter().fold(init(), merge))
    }

    pub fn elements(&self) -> Result<Vec<Permutation>> {
        let mut out = Vec::new();
        self.for_each_element(&mut |p| out.push(Permutation { images: p.to_vec() }))?;
        Ok(out)
    }

    pub fn cycle_index(&self) -> Result<CycleIndex> {
        match self.kind {
            GroupKind::Symmetric => Ok(symmetric_cycle_index(self.n)),
            GroupKind::Cyclic => Ok(cyclic_cycle_index(self.n)),
            GroupKind::GeneralLinear { q } => {
                let key = (self.n, q);
                if let Some(ci) = gl_cache().lock().unwrap().get(&key) {
                    return Ok((**ci).clone());
                }
                let ci = self.cycle_index_by_streaming()?;
                gl_cache().lock().unwrap().insert(key, Arc::new(ci.clone()));
                Ok(ci)
            }
        }
    }

    /// Cycle index from a histogram of streamed cycle types.
    pub fn cycle_index_by_streaming(&self) -> Result<CycleIndex> {
        let degree = self.degree as usize;
        let state = self.par_fold(
            || CycleHistogram::new(degree),
            |h, imgs| h.record(imgs),
            |mut a, b| {
                a.absorb(b);
                a
            },
        )?;
        Ok(CycleIndex::from_histogram(self.degree, &self.order, state.into_map()))
    }

    fn check_subset(&self, k: &SubsetK) -> Result<()> {
        if let Some(&p) = k.points.last() {
            if p >= self.degree {
                return Err(OrbError::Invalid(format!("point {p} outside 0..{}", self.degree)));
            }
        }
        Ok(())
    }

    pub fn stabilizers(&self, k: &SubsetK) -> Result<Stabilizers> {
        self.check_subset(k)?;
        let size = k.len();
        match self.kind {
            GroupKind::Symmetric => {
                let rest = factorial((self.n as usize - size) as u64);
                let mut restriction = Vec::new();
                sym::for_each_permutation(size as u32, None, &mut |p| {
                    restriction.push(p.iter().map(|&x| x as usize).collect())
                });
                Ok(Stabilizers {
                    setwise: &rest * factorial(size as u64),
                    pointwise: rest,
                    restriction,
                })
            }
            GroupKind::Cyclic => {
                let index: HashMap<u32, usize> = k.points.iter().enumerate().map(|(i, &p)| (p, i)).collect();
                let mut restriction = Vec::new();
                let mut pointwise = 0u32;
                for r in 0..self.n {
                    let perm: Option<Vec<usize>> =
                        k.points.iter().map(|&p| index.get(&((p + r) % self.n)).copied()).collect();
                    if let Some(perm) = perm {
                        if perm.iter().enumerate().all(|(i, &j)| i == j) {
                            pointwise += 1;
                        }
                        if !restriction.contains(&perm) {
                            restriction.push(perm);
                        }
                    }
                }
                restriction.sort();
                let setwise = BigUint::from(pointwise) * restriction.len();
                Ok(Stabilizers { setwise, pointwise: BigUint::from(pointwise), restriction })
            }
            GroupKind::GeneralLinear { q } => {
                let field = Field::new(q, self.n);
                let d = gl::dim_span(&field, &k.points) as u32;
                let pointwise = gl::pointwise_order(self.n, q, d);
                let restriction = gl::linear_symmetries(&field, &k.points);
                Ok(Stabilizers { setwise: &pointwise * restriction.len(), pointwise, restriction })
            }
        }
    }

    /// Order of the pointwise stabilizer of `K` (cheap closed forms for S_N and GL).
    pub fn pointwise_order(&self, k: &SubsetK) -> Result<BigUint> {
        match self.kind {
            GroupKind::Symmetric => Ok(factorial((self.n as usize - k.len()) as u64)),
            GroupKind::GeneralLinear { q } => {
                self.check_subset(k)?;
                let d = gl::dim_span(&Field::new(q, self.n), &k.points) as u32;
                Ok(gl::pointwise_order(self.n, q, d))
            }
            GroupKind::Cyclic => Ok(self.stabilizers(k)?.pointwise),
        }
    }

    /// The orbit of `K` as sorted image sets, each with a witness: the image
    /// of `K[i]` under one group element carrying `K` onto it.
    pub fn subset_orbit(&self, k: &SubsetK) -> Result<Vec<(SubsetK, Vec<u32>)>> {
        self.check_subset(k)?;
        let mut out: Vec<(SubsetK, Vec<u32>)> = Vec::new();
        match self.kind {
            GroupKind::Symmetric => {
                let count = crate::rational::binomial(&BigUint::from(self.n), k.len() as u64);
                self.check_budget("subset orbit", &count)?;
                for s in sym::subsets(self.n, k.len()) {
                    out.push((SubsetK { points: s.clone() }, s));
                }
            }
            GroupKind::Cyclic => {
                let mut seen = std::collections::HashSet::new();
                for r in 0..self.n {
                    let w: Vec<u32> = k.points.iter().map(|&p| (p + r) % self.n).collect();
                    let set = SubsetK::new(w.clone())?;
                    if seen.insert(set.clone()) {
                        out.push((set, w));
                    }
                }
            }
            GroupKind::GeneralLinear { q } => {
                let field = Field::new(q, self.n);
                let sd = gl::span_data(&field, &k.points);
                let d = sd.basis.len() as u32;
                let tuples = self.order.clone() / gl::pointwise_order(self.n, q, d);
                self.check_budget("subset orbit", &tuples)?;
                let mut seen = std::collections::HashSet::new();
                gl::for_each_independent_tuple(&field, d as usize, &mut |t| {
                    let w: Vec<u32> = k.points.iter().map(|p| field.combine(&sd.coords[p], t)).collect();
                    let mut s = w.clone();
                    s.sort_unstable();
                    let set = SubsetK { points: s };
                    if seen.insert(set.clone()) {
                        out.push((set, w));
                    }
                });
            }
        }
        out.sort_by(|a, b| a.0.cmp(&b.0));
        Ok(out)
    }
}

fn symmetric_cycle_index(n: u32) -> CycleIndex {
    let terms = sym::partitions(n)
        .into_iter()
        .map(|parts| {
            let ct = CycleType::from_pairs(&parts.iter().map(|&p| (p, 1)).collect::<Vec<_>>());
            let pairs: Vec<(u32, u32)> = ct.mults.iter().map(|(&k, &m)| (k, m)).collect();
            let z = sym::z_lambda(&pairs);
            (ct, BigRational::new(BigInt::one(), BigInt::from(z)))
        })
        .collect();
    CycleIndex { degree: n, terms }
}

fn euler_phi(n: u32) -> u32 {
    (1..=n).filter(|&k| crate::rational::gcd_u64(k as u64, n as u64) == 1).count() as u32
}

fn cyclic_cycle_index(n: u32) -> CycleIndex {
    let terms = (1..=n)
        .filter(|d| n.is_multiple_of(*d))
        .map(|d| {
            (
                CycleType::from_pairs(&[(d, n / d)]),
                BigRational::new(BigInt::from(euler_phi(d)), BigInt::from(n)),
            )
        })
        .collect();
    CycleIndex { degree: n, terms }
}

/// Exact `|GL(N,q)|` and its ratio to `q^(N^2) prod_{i=1}^{N} (1 - q^-i)`.
pub fn gl_order_asymptotic(n: u32, q: u32) -> Result<(BigUint, BigRational)> {
    if !is_prime(q) {
        return Err(OrbError::Invalid(format!("q = {q} is not prime")));
    }
    if n == 0 {
        return Err(OrbError::Invalid("N must be at least 1".into()));
    }
    let exact = gl::gl_order(n, q);
    let qr = BigRational::from_integer(BigInt::from(q));
    let mut main = BigRational::from_integer(BigInt::from(BigUint::from(q).pow(n * n)));
    for i in 1..=n {
        main *= BigRational::one() - BigRational::one() / num_traits::pow(qr.clone(), i as usize);
    }
    let ratio = from_biguint(&exact) / main;
    Ok((exact, ratio))
}

/// Checks the nesting condition for GL(N, q): every element preserving
/// `F_q^(N-1)` restricts to an element of GL(N-1, q).
pub fn gl_nesting_check(n: u32, q: u32) -> Result<bool> {
    if n < 2 {
        return Ok(true);
    }
    let big = build_group(GroupKind::GeneralLinear { q }, n)?;
    let small = build_group(GroupKind::GeneralLinear { q }, n - 1)?;
    let members: std::collections::HashSet<Vec<u32>> =
        small.elements()?.into_iter().map(|p| p.images).collect();
    let sub = small.degree() as usize;
    let mut ok = true;
    big.for_each_element(&mut |imgs| {
        if imgs[..sub].iter().all(|&y| (y as usize) < sub) && !members.contains(&imgs[..sub]) {
            ok = false;
        }
    })?;
    Ok(ok)
}

/// `|G|` as `f64` (for reports).
pub fn order_f64(g: &PermGroupHandle) -> f64 {
    g.order.to_f64().unwrap_or(f64::INFINITY)
}
