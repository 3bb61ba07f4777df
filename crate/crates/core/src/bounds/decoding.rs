use serde::{Deserialize, Serialize};
use statrs::function::factorial::ln_binomial;

use super::exponent::type_exponent;
use super::report::BoundReport;
use super::scalar::h;
use crate::error::{Error, Result};
use crate::gf2::WeightDistribution;

/// First error weight included in the weighted sum. The plain-code form
/// starts at 1 (the zero error never fails); the coset form starts at 0.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SumStart {
    FromOne,
    FromZero,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum DecodingVariant {
    /// `ε Σ_k Ŵ(k) 2^{−n[1−h(min{k/n,1/2})−R]_+}`.
    Sum(SumStart),
    /// `⌊n/2+2⌋ ε 2^{−n min_q([1−h(q)−R]_+ + d(q‖p))}` for a BSC(p).
    TypeMethod { p: f64 },
}

/// `log₂ Σ_k W(k) 2^{−n[c − h(min{k/n,1/2})]_+}` for `k ≥ start`, from
/// `log₂ W(k)`, `k = 0..=n`.
pub(crate) fn log2_weighted_sum(log2_w: &[f64], c: f64, start: usize) -> f64 {
    let nf = (log2_w.len() - 1) as f64;
    let terms: Vec<f64> = log2_w
        .iter()
        .enumerate()
        .skip(start)
        .filter(|(_, m)| **m > f64::NEG_INFINITY)
        .map(|(k, m)| m - nf * (c - h((k as f64 / nf).min(0.5))).max(0.0))
        .collect();
    log2_sum_exp2(&terms)
}

/// `log₂` of the Binomial(n, p) weight masses, computed in the log domain.
pub fn binomial_log2_masses(n: usize, p: f64) -> Result<Vec<f64>> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::Domain(format!("p must lie in [0,1], got {p}")));
    }
    let term = |count: usize, x: f64| {
        if count == 0 {
            0.0
        } else {
            count as f64 * x.log2()
        }
    };
    Ok((0..=n)
        .map(|k| {
            ln_binomial(n as u64, k as u64) / std::f64::consts::LN_2 + term(k, p) + term(n - k, 1.0 - p)
        })
        .collect())
}

pub(crate) fn log2_sum_exp2(terms: &[f64]) -> f64 {
    let top = terms.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if top == f64::NEG_INFINITY {
        return top;
    }
    top + terms.iter().map(|t| (t - top).exp2()).sum::<f64>().log2()
}

/// Family-average decoding error bound for an ε-almost universal₂ family
/// (or extended family) of maximum dimension `nR`. Requires `ε ≥ 1`, where
/// the per-weight bound `min{·,1} ≤ ε 2^{−n[·]_+}` is valid.
pub fn weighted_decoding_bound(
    w: &WeightDistribution,
    r: f64,
    epsilon: f64,
    variant: DecodingVariant,
) -> Result<BoundReport> {
    weighted_decoding_bound_log2(&w.log2_masses(), r, epsilon, variant)
}

/// As [`weighted_decoding_bound`], from `log₂ W(k)`, `k = 0..=n`.
pub fn weighted_decoding_bound_log2(
    log2_w: &[f64],
    r: f64,
    epsilon: f64,
    variant: DecodingVariant,
) -> Result<BoundReport> {
    if !(0.0..=1.0).contains(&r) {
        return Err(Error::Domain(format!("R must lie in [0,1], got {r}")));
    }
    if !(epsilon >= 1.0) {
        return Err(Error::Domain(format!(
            "epsilon must be >= 1 for the clipped exponent min(.,1) <= eps*2^(-n[.]_+), got {epsilon}"
        )));
    }
    let n = log2_w.len().saturating_sub(1);
    if n == 0 {
        return Err(Error::Dimension("need n >= 1".into()));
    }
    let nf = n as f64;
    let le = epsilon.log2();
    match variant {
        DecodingVariant::Sum(start) => {
            let k0 = match start {
                SumStart::FromOne => 1,
                SumStart::FromZero => 0,
            };
            let lv = le + log2_weighted_sum(log2_w, 1.0 - r, k0);
            let id = match start {
                SumStart::FromOne => "decoding_sum",
                SumStart::FromZero => "decoding_sum_coset",
            };
            Ok(BoundReport::new(id, lv, &[("n", nf), ("R", r), ("epsilon", epsilon)]))
        }
        DecodingVariant::TypeMethod { p } => {
            if !(0.0..=0.5).contains(&p) {
                return Err(Error::Domain(format!("p must lie in [0,1/2], got {p}")));
            }
            let e = type_exponent(r, p)?;
            let lv = ((n / 2 + 2) as f64).log2() + le - nf * e;
            Ok(BoundReport::new(
                "decoding_type",
                lv,
                &[("n", nf), ("R", r), ("epsilon", epsilon), ("p", p)],
            ))
        }
    }
}
