//! Convergence and robustness metrics over per-change fronts.

mod hv;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

pub use hv::{hv_reference, hypervolume};

use crate::bench::{EnvId, ObjectiveVector};
use crate::error::{Error, Result};

fn check_sets(a: &[ObjectiveVector], b: &[ObjectiveVector]) -> Result<usize> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::arg("igd needs two nonempty sets"));
    }
    let m = a[0].len();
    if a.iter().chain(b).any(|v| v.len() != m) {
        return Err(Error::arg("igd sets mix objective counts"));
    }
    Ok(m)
}

/// Mean distance from each reference point to its nearest obtained point.
pub fn igd(p_star: &[ObjectiveVector], p: &[ObjectiveVector]) -> Result<f64> {
    check_sets(p_star, p)?;
    let total: f64 = p_star
        .iter()
        .map(|r| {
            p.iter()
                .map(|q| {
                    r.iter()
                        .zip(q.iter())
                        .map(|(a, b)| (a - b) * (a - b))
                        .sum::<f64>()
                })
                .fold(f64::INFINITY, f64::min)
                .sqrt()
        })
        .sum();
    Ok(total / p_star.len() as f64)
}

pub fn mean(values: &[f64]) -> Result<f64> {
    if values.is_empty() {
        return Err(Error::arg("mean of an empty series"));
    }
    Ok(values.iter().sum::<f64>() / values.len() as f64)
}

/// Sample variance (`n - 1` denominator); zero for a single value.
pub fn variance(values: &[f64]) -> Result<f64> {
    let m = mean(values)?;
    if values.len() < 2 {
        return Ok(0.0);
    }
    Ok(values.iter().map(|v| (v - m) * (v - m)).sum::<f64>() / (values.len() - 1) as f64)
}

pub fn migd(series: &[f64]) -> Result<f64> {
    mean(series)
}

fn mean_over_configs(per_config: &BTreeMap<EnvId, f64>, what: &str) -> Result<f64> {
    let missing: Vec<String> = EnvId::ALL
        .iter()
        .filter(|c| !per_config.contains_key(c))
        .map(|c| c.to_string())
        .collect();
    if !missing.is_empty() {
        return Err(Error::arg(format!(
            "{what} needs all eight configs, missing {}",
            missing.join(", ")
        )));
    }
    mean(&per_config.values().copied().collect::<Vec<_>>())
}

pub fn dmigd(per_config: &BTreeMap<EnvId, f64>) -> Result<f64> {
    mean_over_configs(per_config, "dmigd")
}

/// `acc(t) = HV(t) / max HV` over the run.
pub fn accuracy(hv: &[f64]) -> Result<Vec<f64>> {
    if hv.iter().any(|v| !(v.is_finite() && *v >= 0.0)) {
        return Err(Error::arg("hypervolume series must be finite and nonnegative"));
    }
    let max = hv.iter().copied().fold(0.0, f64::max);
    if max <= 0.0 {
        return Err(Error::Degenerate("hypervolume series is all zero".into()));
    }
    Ok(hv.iter().map(|v| v / max).collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReactValue {
    pub steps: usize,
    /// False when accuracy never recovered and `steps` is the remaining horizon.
    pub recovered: bool,
}

/// Steps after `t` until accuracy first returns to within `1 - epsilon` of `acc[t]`.
pub fn react(acc: &[f64], t: usize, epsilon: f64) -> Result<ReactValue> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::arg(format!("epsilon must lie in (0, 1), got {epsilon}")));
    }
    if t + 1 >= acc.len() {
        return Err(Error::arg("react is undefined at the last step"));
    }
    for (s, a) in acc[t + 1..].iter().enumerate() {
        if a / acc[t] >= 1.0 - epsilon {
            return Ok(ReactValue {
                steps: s + 1,
                recovered: true,
            });
        }
    }
    Ok(ReactValue {
        steps: acc.len() - 1 - t,
        recovered: false,
    })
}

/// React at every step but the last.
pub fn react_series(acc: &[f64], epsilon: f64) -> Result<Vec<ReactValue>> {
    (0..acc.len().saturating_sub(1))
        .map(|t| react(acc, t, epsilon))
        .collect()
}

pub fn mreact(reacts: &[ReactValue]) -> Result<f64> {
    mean(&reacts.iter().map(|r| r.steps as f64).collect::<Vec<_>>())
}

pub fn dmreact(per_config: &BTreeMap<EnvId, f64>) -> Result<f64> {
    mean_over_configs(per_config, "dmreact")
}

/// Percent MIGD change of `treated` relative to `base`; positive means improvement.
pub fn roc(base: f64, treated: f64) -> Result<f64> {
    if !(base > 0.0 && base.is_finite()) {
        return Err(Error::arg(format!("roc base must be positive, got {base}")));
    }
    Ok(100.0 * (base - treated) / base)
}
