//! Double-coset factorisation of fixed-point structure constants.
//!
//! For supports `K_1, K_2, K_3` the triples `(A_1, A_2, A_3)` with `A_i` in
//! the orbit of `K_i` are grouped into diagonal classes. Each class carries
//!
//! ```text
//! M^2 = prod_i |G^{K_i}| / (|G| |G^U|^2)      (pointwise stabilizers, U = A_1 ∪ A_2 ∪ A_3)
//! |Stab_R| = |Stab_diag(A_1, A_2, A_3)| / |G^U|
//! ```
//!
//! and the constant is
//! `prod_i A(g_i)^(-1/2) sum_classes M / |Stab_R| sum_{rho in G(K_1) x G(K_2) x G(K_3)} C(sigma rho g)`.

use std::collections::{BTreeSet, HashMap};

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{OrbError, Result};
use crate::groups::gl::{dim_span, Field};
use crate::groups::{GroupKind, PermGroupHandle, SubsetK};
use crate::orbits::WeightedFunction;
use crate::rational::{factorial, format_rational, from_biguint, serde_biguint};
use crate::scalar::Scalar;
use crate::structure::states::{positional_labels, reduced_norm};
use crate::structure::{ConstantTable, VACUUM};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CosetClass {
    pub sets: [SubsetK; 3],
    /// `witnesses[i][j]`: image of `K_i[j]` under an element carrying `K_i` to `A_i`.
    pub witnesses: [Vec<u32>; 3],
    pub n3: u32,
    pub union_size: u32,
    /// Dimensions of `span A_i` and `span U` (GL only).
    pub dims: Option<([u32; 3], u32)>,
    /// Every point of the union lies in at least two of the `A_i`.
    pub admissible: bool,
    #[serde(with = "serde_biguint")]
    pub stab_diag: BigUint,
    #[serde(with = "serde_biguint")]
    pub pointwise_union: BigUint,
    #[serde(with = "serde_biguint")]
    pub stab_r: BigUint,
    #[serde(serialize_with = "ser_rational")]
    pub m_squared: BigRational,
}

fn ser_rational<S: serde::Serializer>(r: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&format_rational(r))
}

/// Complete invariant of a set triple under the diagonal action.
fn canonical_key(g: &PermGroupHandle, sets: [&[u32]; 3]) -> Vec<u64> {
    match g.kind() {
        GroupKind::Symmetric => {
            let mut regions = vec![0u64; 8];
            let union: BTreeSet<u32> = sets.iter().flat_map(|s| s.iter().copied()).collect();
            for x in union {
                let mask = sets.iter().enumerate().fold(0usize, |m, (i, s)| {
                    if s.binary_search(&x).is_ok() {
                        m | (1 << i)
                    } else {
                        m
                    }
                });
                regions[mask] += 1;
            }
            regions
        }
        GroupKind::Cyclic => {
            let n = g.n();
            (0..n)
                .map(|r| {
                    let mut key = Vec::new();
                    for s in sets {
                        let mut t: Vec<u64> = s.iter().map(|&p| ((p + r) % n) as u64).collect();
                        t.sort_unstable();
                        key.push(t.len() as u64);
                        key.extend(t);
                    }
                    key
                })
                .min()
                .expect("n >= 1")
        }
        GroupKind::GeneralLinear { q } => gl_canonical(&Field::new(q, g.n()), sets),
    }
}

/// Minimum over ordered bases of `span U` drawn from `U` of the coordinate
/// encoding of the three sets.
fn gl_canonical(field: &Field, sets: [&[u32]; 3]) -> Vec<u64> {
    let union: Vec<u32> = sets.iter().flat_map(|s| s.iter().copied()).collect::<BTreeSet<_>>().into_iter().collect();
    let d = dim_span(field, &union);
    let mut best: Option<Vec<u64>> = None;
    let span: HashMap<u32, u64> = HashMap::from([(0, 0)]);
    gl_rec(field, &union, sets, d, 0, &span, &mut best);
    let mut key = vec![d as u64];
    key.extend(best.expect("span has at least one basis"));
    key
}

fn gl_rec(
    field: &Field,
    union: &[u32],
    sets: [&[u32]; 3],
    d: usize,
    len: usize,
    span: &HashMap<u32, u64>,
    best: &mut Option<Vec<u64>>,
) {
    if len == d {
        let mut key = Vec::new();
        for s in sets {
            let mut codes: Vec<u64> = s.iter().map(|p| span[p]).collect();
            codes.sort_unstable();
            key.push(codes.len() as u64);
            key.extend(codes);
        }
        if best.as_ref().is_none_or(|b| key < *b) {
            *best = Some(key);
        }
        return;
    }
    let place = (field.q as u64).pow(len as u32);
    for &v in union {
        if span.contains_key(&v) {
            continue;
        }
        let mut next = HashMap::with_capacity(span.len() * field.q as usize);
        for (&s, &code) in span {
            for a in 0..field.q {
                next.insert(field.add(s, field.scale(a, v)), code + a as u64 * place);
            }
        }
        gl_rec(field, union, sets, d, len + 1, &next, best);
    }
}

fn triple_intersection(sets: [&[u32]; 3]) -> Vec<u32> {
    sets[0]
        .iter()
        .copied()
        .filter(|x| sets[1].binary_search(x).is_ok() && sets[2].binary_search(x).is_ok())
        .collect()
}

/// Diagonal classes of support triples with their multiplicity data.
pub fn coset_analysis(k1: &SubsetK, k2: &SubsetK, k3: &SubsetK, g: &PermGroupHandle) -> Result<Vec<CosetClass>> {
    let o1 = g.subset_orbit(k1)?;
    let o2 = g.subset_orbit(k2)?;
    let o3 = g.subset_orbit(k3)?;
    let pairs = BigUint::from(o2.len()) * o3.len();
    g.check_budget("coset class enumeration", &pairs)?;
    let first: Vec<u32> = k1.points().to_vec();
    // canonical key -> (count with A_1 = K_1, first representative)
    let keyed: Vec<(Vec<u64>, usize, usize)> = (0..o2.len())
        .into_par_iter()
        .flat_map_iter(|i| {
            let o3 = &o3;
            let o2 = &o2;
            let first = &first;
            (0..o3.len()).map(move |j| {
                (canonical_key(g, [first.as_slice(), o2[i].0.points(), o3[j].0.points()]), i, j)
            })
        })
        .collect();
    let mut classes: Vec<(Vec<u64>, u64, usize, usize)> = Vec::new();
    let mut pos: HashMap<Vec<u64>, usize> = HashMap::new();
    for (key, i, j) in keyed {
        match pos.get(&key) {
            Some(&p) => classes[p].1 += 1,
            None => {
                pos.insert(key.clone(), classes.len());
                classes.push((key, 1, i, j));
            }
        }
    }
    let pointwise: Vec<BigUint> = [k1, k2, k3].iter().map(|k| g.pointwise_order(k)).collect::<Result<_>>()?;
    let numerator = from_biguint(&(&pointwise[0] * &pointwise[1] * &pointwise[2]));
    let field = g.field();
    let mut out = Vec::with_capacity(classes.len());
    for (_, count, i, j) in classes {
        let sets = [k1.clone(), o2[i].0.clone(), o3[j].0.clone()];
        let witnesses = [first.clone(), o2[i].1.clone(), o3[j].1.clone()];
        let raw = [sets[0].points(), sets[1].points(), sets[2].points()];
        let union_pts: Vec<u32> = raw.iter().flat_map(|s| s.iter().copied()).collect::<BTreeSet<_>>().into_iter().collect();
        let admissible = union_pts
            .iter()
            .all(|x| raw.iter().filter(|s| s.binary_search(x).is_ok()).count() >= 2);
        let inter = triple_intersection(raw);
        let (n3, dims) = match &field {
            Some(f) => (
                dim_span(f, &inter) as u32,
                Some((raw.map(|s| dim_span(f, s) as u32), dim_span(f, &union_pts) as u32)),
            ),
            None => (inter.len() as u32, None),
        };
        let union = SubsetK::new(union_pts.clone())?;
        let pointwise_union = g.pointwise_order(&union)?;
        let orbit = BigUint::from(o1.len()) * count;
        let stab_diag = g.order() / &orbit;
        let stab_r = &stab_diag / &pointwise_union;
        let pu = from_biguint(&pointwise_union);
        let m_squared = &numerator / (from_biguint(g.order()) * &pu * &pu);
        out.push(CosetClass {
            sets,
            witnesses,
            n3,
            union_size: union_pts.len() as u32,
            dims,
            admissible,
            stab_diag,
            pointwise_union,
            stab_r,
            m_squared,
        });
    }
    Ok(out)
}

/// `M^2 = (N-K_1)! (N-K_2)! (N-K_3)! / (N! ((N-U)!)^2)` for S_N.
pub fn sn_m_squared(k: [u32; 3], union: u32, n: u32) -> Result<BigRational> {
    if union > n || k.iter().any(|&ki| ki > n || ki > union) {
        return Err(OrbError::Invalid(format!("configuration K = {k:?}, U = {union} does not fit in N = {n}")));
    }
    let f = |x: u32| from_biguint(&factorial(x as u64));
    let rest = f(n - union);
    Ok(f(n - k[0]) * f(n - k[1]) * f(n - k[2]) / (f(n) * &rest * &rest))
}

/// S_N closed form with the union size `(K_1 + K_2 + K_3 - n_3) / 2` of an
/// admissible configuration.
pub fn sn_m_closed_form(k1: u32, k2: u32, k3: u32, n3: u32, n: u32) -> Result<BigRational> {
    let twice = (k1 + k2 + k3)
        .checked_sub(n3)
        .ok_or_else(|| OrbError::Invalid("n3 exceeds K_1 + K_2 + K_3".into()))?;
    if twice % 2 == 1 {
        return Err(OrbError::Invalid(format!(
            "union size ({k1}+{k2}+{k3}-{n3})/2 is not an integer; such configurations contribute zero"
        )));
    }
    sn_m_squared([k1, k2, k3], twice / 2, n)
}

#[derive(Clone, Debug, Serialize)]
pub struct ClassTerm {
    pub class: CosetClass,
    /// `sum_rho C(sigma rho g)`.
    pub inner: String,
    /// `M / |Stab_R| * inner`.
    pub term: String,
    #[serde(skip)]
    pub inner_value: Scalar,
    #[serde(skip)]
    pub term_value: Scalar,
}

#[derive(Clone, Debug, Serialize)]
pub struct FactoredResult {
    #[serde(skip)]
    pub value: Scalar,
    /// Same sum without the `1/|Stab_R|` class weights (sum over elements
    /// rather than classes of relabelings).
    #[serde(skip)]
    pub element_reading: Scalar,
    pub value_str: String,
    pub element_reading_str: String,
    pub norms: [String; 3],
    pub classes: Vec<ClassTerm>,
}

/// Support, position labels, reduced norm and restriction group of a state.
pub(crate) struct StateData {
    pub support: SubsetK,
    pub labels: Vec<usize>,
    pub restriction: Vec<Vec<usize>>,
    pub a_reduced: BigUint,
}

pub(crate) fn state_data(g: &WeightedFunction, group: &PermGroupHandle, seed: &ConstantTable) -> Result<StateData> {
    if g.degree != group.degree() {
        return Err(OrbError::Invalid(format!("function on {} points used with {}", g.degree, group.spec())));
    }
    let support = g.support_set();
    let labels = positional_labels(g)
        .into_iter()
        .map(|l| {
            seed.index_of(l)
                .filter(|_| l != VACUUM)
                .ok_or_else(|| OrbError::MissingConstant(l.into(), "?".into(), "?".into()))
        })
        .collect::<Result<Vec<_>>>()?;
    let restriction = group.stabilizers(&support)?.restriction;
    let a_reduced = reduced_norm(g, &restriction);
    Ok(StateData { support, labels, restriction, a_reduced })
}

/// `sum_{rho} C(sigma_kappa rho g)` for one class.
pub(crate) fn class_inner_sum(class: &CosetClass, states: &[StateData; 3], seed: &ConstantTable) -> Scalar {
    let vac = seed.index_of(VACUUM).expect("validated seed has a vacuum");
    let union: Vec<u32> = class.sets.iter().flat_map(|s| s.points().iter().copied()).collect::<BTreeSet<_>>().into_iter().collect();
    let slot: HashMap<u32, usize> = union.iter().enumerate().map(|(i, &p)| (p, i)).collect();
    let mut total = Scalar::zero();
    let mut cells = vec![[vac; 3]; union.len()];
    for r1 in &states[0].restriction {
        for r2 in &states[1].restriction {
            for r3 in &states[2].restriction {
                cells.iter_mut().for_each(|c| *c = [vac; 3]);
                for (i, rho) in [r1, r2, r3].into_iter().enumerate() {
                    for (j, &label) in states[i].labels.iter().enumerate() {
                        let p = class.witnesses[i][rho[j]];
                        cells[slot[&p]][i] = label;
                    }
                }
                let mut acc = Scalar::one();
                for c in &cells {
                    match seed.get_ref(c) {
                        None => {
                            acc = Scalar::zero();
                            break;
                        }
                        Some(v) => acc = &acc * v,
                    }
                }
                if !acc.is_zero() {
                    total = &total + &acc;
                }
            }
        }
    }
    total
}

pub(crate) fn inv_sqrt_norms(states: &[StateData; 3]) -> Result<Scalar> {
    let prod = states.iter().fold(BigUint::one(), |acc, s| acc * &s.a_reduced);
    Scalar::inv_sqrt_rational(&from_biguint(&prod))
}

/// The class-sum form of the fixed-point constant. Agrees exactly with
/// [`crate::structure::bruteforce_constant`].
pub fn factored_constant(
    g1: &WeightedFunction,
    g2: &WeightedFunction,
    g3: &WeightedFunction,
    group: &PermGroupHandle,
    seed: &ConstantTable,
) -> Result<FactoredResult> {
    let states = [state_data(g1, group, seed)?, state_data(g2, group, seed)?, state_data(g3, group, seed)?];
    let classes = coset_analysis(&states[0].support, &states[1].support, &states[2].support, group)?;
    let terms: Vec<Result<ClassTerm>> = classes
        .into_par_iter()
        .map(|class| {
            let inner = class_inner_sum(&class, &states, seed);
            let m = Scalar::sqrt_rational(&class.m_squared)?;
            let r = BigRational::new(1.into(), class.stab_r.clone().into());
            let term = (&m * &inner).scale(&r);
            Ok(ClassTerm { inner: inner.to_string(), term: term.to_string(), inner_value: inner, term_value: term, class })
        })
        .collect();
    let terms: Vec<ClassTerm> = terms.into_iter().collect::<Result<_>>()?;
    let norm = inv_sqrt_norms(&states)?;
    let mut value = Scalar::zero();
    let mut element = Scalar::zero();
    for t in &terms {
        value = &value + &t.term_value;
        let m = Scalar::sqrt_rational(&t.class.m_squared)?;
        element = &element + &(&m * &t.inner_value);
    }
    let value = &value * &norm;
    let element_reading = &element * &norm;
    Ok(FactoredResult {
        value_str: value.to_string(),
        element_reading_str: element_reading.to_string(),
        norms: [0, 1, 2].map(|i| states[i].a_reduced.to_string()),
        value,
        element_reading,
        classes: terms,
    })
}

/// `log(M^2)` slope helper: `M^2` as `f64`.
pub fn m_squared_f64(c: &CosetClass) -> f64 {
    crate::rational::rational_to_f64(&c.m_squared)
}

/// Number of classes of a coset analysis as `u64` (reports).
pub fn class_count(classes: &[CosetClass]) -> u64 {
    classes.len().to_u64().unwrap_or(u64::MAX)
}
