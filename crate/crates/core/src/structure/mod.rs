//! Structure constants: seed tables, fixed-point states and constants,
//! double-coset factorisation, large-N limits and Jacobi verification.

pub mod coset;
pub mod freeness;
pub mod heisenberg;
pub mod jacobi;
pub mod limit;
pub mod states;

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{OrbError, Result};
use crate::orbits::LabelSet;
use crate::scalar::{Scalar, ScalarJson};
use crate::series::{e8cubed_character, heisenberg_character, TruncatedSeries};

pub use coset::{coset_analysis, factored_constant, sn_m_closed_form, CosetClass, FactoredResult};
pub use freeness::{freeness_report, FreenessReport};
pub use heisenberg::heisenberg_seed;
pub use jacobi::{jacobi_check, JacobiReport};
pub use limit::{fixed_point_table, limit_constant, limit_table, LimitResult};
pub use states::{bruteforce_constant, normalization, tensor_constant, SymmetrizedState};

pub const VACUUM: &str = "vac";

/// Relative tolerance (in bits) for comparisons involving approximate scalars.
pub const APPROX_TOLERANCE_BITS: u32 = 80;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Label {
    pub id: String,
    pub wt: u32,
}

/// Orthonormal-basis structure constants `f_{abc}`; triples not stored are zero.
///
/// Seeds and computed fixed-point or limit tables share this type; computed
/// tables also record the group and `N` they came from.
#[derive(Clone, Debug, PartialEq)]
pub struct ConstantTable {
    name: String,
    cutoff: u32,
    labels: Vec<Label>,
    index: HashMap<String, usize>,
    constants: HashMap<[usize; 3], Scalar>,
    big_n: Option<u32>,
    group: Option<String>,
}

#[derive(Serialize, Deserialize)]
struct ConstantJson {
    a: String,
    b: String,
    c: String,
    value: ScalarJson,
}

#[derive(Serialize, Deserialize)]
struct TableJson {
    name: String,
    cutoff: u32,
    labels: Vec<Label>,
    constants: Vec<ConstantJson>,
    #[serde(rename = "N", skip_serializing_if = "Option::is_none", default)]
    big_n: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    group: Option<String>,
}

impl ConstantTable {
    /// Builds a table without validation.
    pub fn new(name: impl Into<String>, cutoff: u32, labels: Vec<Label>) -> Result<Self> {
        let mut index = HashMap::new();
        for (i, l) in labels.iter().enumerate() {
            if index.insert(l.id.clone(), i).is_some() {
                return Err(OrbError::Invalid(format!("duplicate label {}", l.id)));
            }
        }
        Ok(ConstantTable {
            name: name.into(),
            cutoff,
            labels,
            index,
            constants: HashMap::new(),
            big_n: None,
            group: None,
        })
    }

    pub fn with_origin(mut self, group: String, big_n: u32) -> Self {
        self.group = Some(group);
        self.big_n = Some(big_n);
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn cutoff(&self) -> u32 {
        self.cutoff
    }

    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    pub fn big_n(&self) -> Option<u32> {
        self.big_n
    }

    pub fn group(&self) -> Option<&str> {
        self.group.as_deref()
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.index.get(id).copied()
    }

    pub fn weight(&self, id: &str) -> Option<u32> {
        self.index_of(id).map(|i| self.labels[i].wt)
    }

    pub fn weight_at(&self, i: usize) -> u32 {
        self.labels[i].wt
    }

    /// Non-vacuum labels, for orbit enumeration.
    pub fn label_set(&self) -> LabelSet {
        LabelSet::new(
            self.labels
                .iter()
                .filter(|l| l.id != VACUUM)
                .map(|l| (l.id.clone(), l.wt))
                .collect(),
        )
        .expect("table labels are distinct with positive non-vacuum weights")
    }

    pub fn character(&self) -> TruncatedSeries {
        self.label_set().character(self.cutoff as usize)
    }

    pub fn set(&mut self, a: &str, b: &str, c: &str, value: Scalar) -> Result<()> {
        let key = self.key(a, b, c)?;
        if value.is_zero() {
            self.constants.remove(&key);
        } else {
            self.constants.insert(key, value);
        }
        Ok(())
    }

    pub fn set_at(&mut self, key: [usize; 3], value: Scalar) {
        if value.is_zero() {
            self.constants.remove(&key);
        } else {
            self.constants.insert(key, value);
        }
    }

    fn key(&self, a: &str, b: &str, c: &str) -> Result<[usize; 3]> {
        let ix = |s: &str| self.index_of(s);
        match (ix(a), ix(b), ix(c)) {
            (Some(i), Some(j), Some(k)) => Ok([i, j, k]),
            _ => Err(OrbError::MissingConstant(a.into(), b.into(), c.into())),
        }
    }

    /// `f_{abc}`; unknown labels are reported as missing constants.
    pub fn get(&self, a: &str, b: &str, c: &str) -> Result<Scalar> {
        let key = self.key(a, b, c)?;
        Ok(self.get_at(key))
    }

    pub fn get_at(&self, key: [usize; 3]) -> Scalar {
        self.constants.get(&key).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn get_ref(&self, key: &[usize; 3]) -> Option<&Scalar> {
        self.constants.get(key)
    }

    pub fn nonzero_count(&self) -> usize {
        self.constants.len()
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        let mut keys: Vec<&[usize; 3]> = self.constants.keys().collect();
        keys.sort();
        let doc = TableJson {
            name: self.name.clone(),
            cutoff: self.cutoff,
            labels: self.labels.clone(),
            constants: keys
                .into_iter()
                .map(|k| ConstantJson {
                    a: self.labels[k[0]].id.clone(),
                    b: self.labels[k[1]].id.clone(),
                    c: self.labels[k[2]].id.clone(),
                    value: ScalarJson::from(&self.constants[k]),
                })
                .collect(),
            big_n: self.big_n,
            group: self.group.clone(),
        };
        serde_json::to_value(doc).expect("serialisable")
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_json_value()).expect("serialisable")
    }

    /// Parses a table document without validation.
    pub fn from_json(doc: &str) -> Result<Self> {
        let doc: TableJson = serde_json::from_str(doc).map_err(|e| OrbError::Parse(e.to_string()))?;
        let mut t = ConstantTable::new(doc.name, doc.cutoff, doc.labels)?;
        for c in doc.constants {
            let v = Scalar::try_from(&c.value)?;
            t.set(&c.a, &c.b, &c.c, v)?;
        }
        t.big_n = doc.big_n;
        t.group = doc.group;
        Ok(t)
    }

    /// Structural checks: vacuum, two-vacuum triples, vacuum and creation
    /// properties. Jacobi closure is checked separately.
    pub fn validate_basic(&self) -> Result<()> {
        let vac = self
            .index_of(VACUUM)
            .ok_or_else(|| OrbError::Validation("missing vacuum label \"vac\"".into()))?;
        if self.labels[vac].wt != 0 {
            return Err(OrbError::Validation("vacuum must have weight 0".into()));
        }
        if let Some(l) = self.labels.iter().find(|l| l.id != VACUUM && l.wt == 0) {
            return Err(OrbError::Validation(format!("label {} has weight 0", l.id)));
        }
        if let Some(l) = self.labels.iter().find(|l| l.wt > self.cutoff) {
            return Err(OrbError::Validation(format!("label {} exceeds the cutoff {}", l.id, self.cutoff)));
        }
        let one = Scalar::one();
        if !self.scalar_eq(&self.get_at([vac, vac, vac]), &one) {
            return Err(OrbError::Validation(format!(
                "f(vac,vac,vac) = {} instead of 1",
                self.get_at([vac, vac, vac])
            )));
        }
        for (x, l) in self.labels.iter().enumerate() {
            if x == vac {
                continue;
            }
            for key in [[vac, vac, x], [vac, x, vac], [x, vac, vac]] {
                let v = self.get_at(key);
                if !v.is_zero() {
                    return Err(OrbError::Validation(format!(
                        "two-vacuum constant f({},{},{}) = {v} must vanish",
                        self.labels[key[0]].id, self.labels[key[1]].id, self.labels[key[2]].id
                    )));
                }
            }
            let _ = l;
        }
        for (a, la) in self.labels.iter().enumerate() {
            for (b, lb) in self.labels.iter().enumerate() {
                let expected = if a == b { one.clone() } else { Scalar::zero() };
                let v = self.get_at([a, vac, b]);
                if !self.scalar_eq(&v, &expected) {
                    return Err(OrbError::Validation(format!(
                        "vacuum property: f({},vac,{}) = {v}, expected {expected}",
                        la.id, lb.id
                    )));
                }
                if la.wt == lb.wt {
                    let v = self.get_at([a, b, vac]);
                    if !self.scalar_eq(&v, &expected) {
                        return Err(OrbError::Validation(format!(
                            "creation property: f({},{},vac) = {v}, expected {expected}",
                            la.id, lb.id
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub(crate) fn scalar_eq(&self, x: &Scalar, y: &Scalar) -> bool {
        if x.is_exact() && y.is_exact() {
            (x - y).is_zero()
        } else {
            x.approx_eq(y, APPROX_TOLERANCE_BITS)
        }
    }
}

impl fmt::Display for ConstantTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (cutoff {}, {} labels, {} non-zero constants)", self.name, self.cutoff, self.labels.len(), self.constants.len())
    }
}

/// Parses and fully validates a seed document (including Jacobi closure
/// within the cutoff).
pub fn load_seed(doc: &str) -> Result<ConstantTable> {
    let t = ConstantTable::from_json(doc)?;
    validate_seed(&t)?;
    Ok(t)
}

pub fn validate_seed(t: &ConstantTable) -> Result<()> {
    t.validate_basic()?;
    let report = jacobi_check(t, t.cutoff())?;
    if let Some(w) = report.failures.first() {
        return Err(OrbError::Validation(format!("Jacobi identity fails: {w}")));
    }
    Ok(())
}

pub fn vacuum_seed() -> ConstantTable {
    let mut t = ConstantTable::new("vac", 0, vec![Label { id: VACUUM.into(), wt: 0 }]).expect("one label");
    t.set(VACUUM, VACUUM, VACUUM, Scalar::one()).expect("known labels");
    t
}

/// One weight-one label `a` with only the vacuum-type constants non-zero.
pub fn unit1_seed() -> ConstantTable {
    let mut t = ConstantTable::new(
        "unit1",
        1,
        vec![Label { id: VACUUM.into(), wt: 0 }, Label { id: "a".into(), wt: 1 }],
    )
    .expect("distinct labels");
    for (a, b, c) in [(VACUUM, VACUUM, VACUUM), (VACUUM, "a", "a"), ("a", VACUUM, "a"), ("a", "a", VACUUM)] {
        t.set(a, b, c, Scalar::one()).expect("known labels");
    }
    t
}

/// A seed as named on the command line.
#[derive(Clone, Debug)]
pub enum Seed {
    Table(ConstantTable),
    /// Character only (no constant table bundled).
    Character { name: String },
}

impl Seed {
    pub fn name(&self) -> String {
        match self {
            Seed::Table(t) => t.name().to_string(),
            Seed::Character { name } => name.clone(),
        }
    }

    /// Shifted character to the requested order. Builtin seeds with a
    /// closed-form character extend to any order; tables stop at the cutoff.
    pub fn character(&self, order: usize) -> TruncatedSeries {
        match self {
            Seed::Character { name } if name == "e8cubed" => e8cubed_character(order),
            Seed::Character { .. } => TruncatedSeries::one(order),
            Seed::Table(t) => match t.name() {
                "vac" => TruncatedSeries::one(order),
                "unit1" => TruncatedSeries::from_integers(&[1, 1], order),
                n if n.starts_with("heis:") => heisenberg_character(order),
                _ => t.character(),
            },
        }
    }

    pub fn table(&self) -> Result<&ConstantTable> {
        match self {
            Seed::Table(t) => Ok(t),
            Seed::Character { name } => Err(OrbError::Invalid(format!(
                "seed {name} is character-only; structure constants are not available"
            ))),
        }
    }
}

/// Resolves `vac`, `unit1`, `heis:<cutoff>`, `e8cubed` or a path to a seed JSON file.
pub fn resolve_seed(spec: &str) -> Result<Seed> {
    match spec {
        "vac" => Ok(Seed::Table(vacuum_seed())),
        "unit1" => Ok(Seed::Table(unit1_seed())),
        "e8cubed" => Ok(Seed::Character { name: "e8cubed".into() }),
        s if s.starts_with("heis:") => {
            let cutoff: u32 = s[5..]
                .parse()
                .map_err(|_| OrbError::Parse(format!("bad Heisenberg cutoff in {s:?}")))?;
            Ok(Seed::Table(heisenberg_seed(cutoff)?))
        }
        path => {
            let doc = std::fs::read_to_string(path)
                .map_err(|e| OrbError::Invalid(format!("cannot read seed file {path:?}: {e}")))?;
            Ok(Seed::Table(load_seed(&doc)?))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const TRIVIAL: &str = r#"{
        "name": "trivial", "cutoff": 1,
        "labels": [{"id": "vac", "wt": 0}, {"id": "aa", "wt": 1}],
        "constants": [
            {"a": "vac", "b": "vac", "c": "vac", "value": "1"},
            {"a": "vac", "b": "aa", "c": "aa", "value": "1"},
            {"a": "aa", "b": "vac", "c": "aa", "value": "1"},
            {"a": "aa", "b": "aa", "c": "vac", "value": "1"},
            {"a": "aa", "b": "aa", "c": "aa", "value": "0"}
        ]}"#;

    #[test]
    fn trivial_seed_loads() {
        let t = load_seed(TRIVIAL).unwrap();
        assert_eq!(t.get("vac", "aa", "aa").unwrap(), Scalar::one());
        assert!(t.get("aa", "aa", "aa").unwrap().is_zero());
        assert!(matches!(t.get("aa", "zz", "vac"), Err(OrbError::MissingConstant(..))));
    }

    #[test]
    fn corrupted_creation_constant_is_rejected() {
        let doc = TRIVIAL.replace(
            r#"{"a": "aa", "b": "aa", "c": "vac", "value": "1"}"#,
            r#"{"a": "aa", "b": "aa", "c": "vac", "value": "2"}"#,
        );
        let err = load_seed(&doc).unwrap_err();
        assert!(matches!(err, OrbError::Validation(ref m) if m.contains("f(aa,aa,vac)")), "{err}");
    }

    #[test]
    fn missing_vacuum_and_two_vacuum_errors() {
        let doc = r#"{"name":"x","cutoff":1,"labels":[{"id":"a","wt":1}],"constants":[]}"#;
        assert!(matches!(load_seed(doc), Err(OrbError::Validation(_))));
        let doc = TRIVIAL.replace(
            r#"{"a": "aa", "b": "aa", "c": "aa", "value": "0"}"#,
            r#"{"a": "vac", "b": "vac", "c": "aa", "value": "1/2"}"#,
        );
        assert!(matches!(load_seed(&doc), Err(OrbError::Validation(ref m)) if m.contains("two-vacuum")));
    }

    #[test]
    fn vacuum_only_seed() {
        let t = vacuum_seed();
        validate_seed(&t).unwrap();
        let back = load_seed(&t.to_json()).unwrap();
        assert_eq!(back, t);
    }

    #[test]
    fn builtin_seeds_validate_and_round_trip() {
        for name in ["vac", "unit1", "heis:1", "heis:2", "heis:3"] {
            let seed = resolve_seed(name).unwrap();
            let t = seed.table().unwrap();
            validate_seed(t).unwrap();
            let back = ConstantTable::from_json(&t.to_json()).unwrap();
            assert_eq!(&back, t, "{name}");
        }
        assert!(resolve_seed("e8cubed").unwrap().table().is_err());
        assert_eq!(resolve_seed("e8cubed").unwrap().character(1).coeffs()[1], crate::rational::int(744));
    }

    #[test]
    fn radical_values_in_json() {
        let t = heisenberg_seed(2).unwrap();
        let j = t.to_json();
        assert!(j.contains("\"rad\""), "{j}");
    }
}
