//! Freeness of large-N limits: triple constants of single-trace fields.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::groups::{build_group, GroupKind};
use crate::orbits::WeightedFunction;
use crate::rational::rational_to_f64;
use crate::scalar::Scalar;
use crate::structure::coset::{coset_analysis, factored_constant};
use crate::structure::limit::limit_constant;
use crate::structure::{sn_m_closed_form, ConstantTable, VACUUM};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SingleTraceLimit {
    pub states: [String; 3],
    pub value: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScalingEstimate {
    pub description: String,
    pub n_small: u32,
    pub n_large: u32,
    pub value_small: f64,
    pub value_large: f64,
    /// `log(v_large / v_small) / log(n_large / n_small)`.
    pub exponent: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FreenessReport {
    pub family: String,
    pub seed: String,
    pub cap: u32,
    pub single_trace: Vec<SingleTraceLimit>,
    pub nonvanishing: Vec<SingleTraceLimit>,
    /// `f(x, vac, y) = delta_xy`, and `f(x, y, vac) = delta_xy` at equal weight, in the limit.
    pub one_vacuum_norms_ok: bool,
    pub free: bool,
    pub verdict: String,
    pub scaling: Vec<ScalingEstimate>,
    pub certificates: Vec<String>,
}

fn single(point: u32, label: &str, weight: u32) -> WeightedFunction {
    WeightedFunction {
        degree: point + 1,
        support: BTreeMap::from([(point, label.to_string())]),
        weight,
    }
}

/// Lists the limit constants of all single-trace triples of weight at most
/// `min(cap, cutoff)` and estimates finite-N decay rates.
pub fn freeness_report(kind: GroupKind, seed: &ConstantTable, cap: u32, budget: u64) -> Result<FreenessReport> {
    let cut = cap.min(seed.cutoff());
    let labels: Vec<(String, u32)> = seed
        .labels()
        .iter()
        .filter(|l| l.id != VACUUM && l.wt <= cut)
        .map(|l| (l.id.clone(), l.wt))
        .collect();
    // single-trace fields sit on one moved point; GL also fixes the origin
    let mut points = vec![match kind {
        GroupKind::GeneralLinear { .. } => 1,
        _ => 0,
    }];
    if matches!(kind, GroupKind::GeneralLinear { .. }) {
        points.push(0);
    }
    let mut states: Vec<WeightedFunction> = Vec::new();
    for &p in &points {
        for (id, wt) in &labels {
            states.push(single(p, id, *wt));
        }
    }
    let mut single_trace = Vec::new();
    let mut nonvanishing = Vec::new();
    let mut certificates = Vec::new();
    for (i, x) in states.iter().enumerate() {
        for y in &states {
            for z in &states {
                let r = limit_constant(x, y, z, kind, seed, budget)?;
                let entry = SingleTraceLimit { states: [x.to_string(), y.to_string(), z.to_string()], value: r.value_str.clone() };
                if !r.value.is_zero() {
                    nonvanishing.push(entry.clone());
                }
                if i == 0 && certificates.len() < 8 {
                    certificates.extend(r.certificate.iter().skip(1).cloned());
                }
                single_trace.push(entry);
            }
        }
    }
    let mut one_vacuum_norms_ok = true;
    for x in &states {
        for y in &states {
            let vac = WeightedFunction::vacuum(1);
            let expected = if x == y { Scalar::one() } else { Scalar::zero() };
            for (b, c) in [(y, &vac), (&vac, y)] {
                // creation only reduces to a delta at equal weight
                if b == y && x.weight != y.weight {
                    continue;
                }
                let r = limit_constant(x, b, c, kind, seed, budget)?;
                if !seed.scalar_eq(&r.value, &expected) {
                    one_vacuum_norms_ok = false;
                }
            }
        }
    }
    let free = nonvanishing.is_empty() && one_vacuum_norms_ok;
    let verdict = if states.is_empty() {
        "free (vacuum only)".to_string()
    } else if free {
        "free".to_string()
    } else if nonvanishing.iter().all(|e| e.states.iter().all(|s| s.starts_with("0:")))
        && matches!(kind, GroupKind::GeneralLinear { .. })
    {
        "not free: the fixed origin carries a copy of the seed with its own constants".to_string()
    } else {
        "not free".to_string()
    };

    let mut scaling = Vec::new();
    if let Some((id, wt)) = labels.first() {
        match kind {
            GroupKind::Symmetric => {
                let closed = |n: u32| -> Result<f64> { Ok(rational_to_f64(&sn_m_closed_form(1, 1, 1, 1, n)?).sqrt()) };
                let (v8, v32) = (closed(8)?, closed(32)?);
                scaling.push(ScalingEstimate {
                    description: format!("closed-form M of the coincident single-trace class ({id},{id},{id})"),
                    n_small: 8,
                    n_large: 32,
                    value_small: v8,
                    value_large: v32,
                    exponent: (v32 / v8).ln() / 4f64.ln(),
                });
                let mut injected = seed.clone();
                injected.set(id, id, id, Scalar::one())?;
                let pipeline = |n: u32| -> Result<f64> {
                    let g = build_group(kind, n)?.with_budget(budget);
                    let s = single(0, id, *wt).embed(n);
                    Ok(factored_constant(&s, &s, &s, &g, &injected)?.value.to_f64())
                };
                let (p8, p32) = (pipeline(8)?, pipeline(32)?);
                scaling.push(ScalingEstimate {
                    description: format!("factored f({id},{id},{id}) with f_{id}{id}{id} = 1 injected"),
                    n_small: 8,
                    n_large: 32,
                    value_small: p8,
                    value_large: p32,
                    exponent: (p32 / p8).ln() / 4f64.ln(),
                });
            }
            GroupKind::GeneralLinear { q } => {
                let m_at = |n: u32| -> Result<f64> {
                    let g = build_group(kind, n)?.with_budget(budget);
                    let k = single(1, id, *wt).support_set();
                    let classes = coset_analysis(&k, &k, &k, &g)?;
                    let coincident = classes.iter().find(|c| c.union_size == 1).expect("coincident class exists");
                    Ok(rational_to_f64(&coincident.m_squared).sqrt())
                };
                let (m2, m3) = (m_at(2)?, m_at(3)?);
                let exponent = (m3 / m2).ln() / (q as f64).ln();
                certificates.push(format!(
                    "coincident single-trace class: M = {m2:.6} at N=2, {m3:.6} at N=3; log_q ratio {exponent:.4} (M = O({q}^(-N/2)))"
                ));
                scaling.push(ScalingEstimate {
                    description: "M of the coincident single-trace class per unit N (base q)".into(),
                    n_small: 2,
                    n_large: 3,
                    value_small: m2,
                    value_large: m3,
                    exponent,
                });
            }
            GroupKind::Cyclic => {}
        }
    }
    Ok(FreenessReport {
        family: kind.family_name(),
        seed: seed.name().to_string(),
        cap: cut,
        single_trace,
        nonvanishing,
        one_vacuum_norms_ok,
        free,
        verdict,
        scaling,
        certificates,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::DEFAULT_BUDGET;
    use crate::structure::{heisenberg_seed, unit1_seed, vacuum_seed};

    #[test]
    fn symmetric_unit1_is_free() {
        let r = freeness_report(GroupKind::Symmetric, &unit1_seed(), 2, DEFAULT_BUDGET).unwrap();
        assert!(r.free, "{}", r.verdict);
        assert_eq!(r.single_trace.len(), 1);
        for s in &r.scaling {
            assert!((s.exponent + 0.5).abs() < 0.1, "{s:?}");
        }
    }

    #[test]
    fn symmetric_heisenberg_is_free() {
        let r = freeness_report(GroupKind::Symmetric, &heisenberg_seed(2).unwrap(), 2, DEFAULT_BUDGET).unwrap();
        assert!(r.free, "{:?}", r.nonvanishing);
    }

    #[test]
    fn vacuum_trivially_free() {
        let r = freeness_report(GroupKind::Symmetric, &vacuum_seed(), 2, DEFAULT_BUDGET).unwrap();
        assert!(r.free);
        assert!(r.single_trace.is_empty());
    }

    #[test]
    fn general_linear_unit1() {
        let r = freeness_report(GroupKind::GeneralLinear { q: 2 }, &unit1_seed(), 1, DEFAULT_BUDGET).unwrap();
        assert!(r.free, "{:?}", r.nonvanishing);
        // M^2 = 1/(q^N - 1)
        let s = &r.scaling[0];
        let expected = (3f64 / 7.0).ln() / 2.0 / 2f64.ln();
        assert!((s.exponent - expected).abs() < 1e-12, "{s:?}");
    }

    #[test]
    fn general_linear_origin_sector() {
        let r = freeness_report(GroupKind::GeneralLinear { q: 2 }, &heisenberg_seed(2).unwrap(), 2, DEFAULT_BUDGET).unwrap();
        assert!(!r.free);
        assert!(r.verdict.contains("origin"));
    }
}
