//! Exact channel simulation at desk scale: syndrome decoding, decoding
//! error probabilities and their family averages, the classical key
//! distillation steps, wiretap secrecy and the leaky-family example.

mod decode;
mod error_prob;
mod leakage;
mod protocol;

use std::collections::BTreeMap;

use serde::Serialize;

use crate::bounds::{ser_sig, ser_sig_opt, BoundReport};

pub use decode::{decode, CosetDecoder, DecodeRule, SyndromeDecoder, DECODE_CAP};
pub use error_prob::{
    error_prob_from_counts, error_prob_from_counts_f64, exact_error_prob, family_average_exact,
    family_average_mc, wrong_decodings,
};
pub use leakage::{coset_key_information, counterexample_leakage};
pub use protocol::{distill_keys, wiretap_eval, DistillOutcome, KeyDistiller, WiretapEval};

/// A simulated quantity with the bounds it should respect.
#[derive(Clone, Debug, Serialize)]
pub struct SimResult {
    pub quantity: String,
    pub n: usize,
    #[serde(serialize_with = "ser_params")]
    pub params: BTreeMap<String, f64>,
    #[serde(serialize_with = "ser_sig")]
    pub value: f64,
    /// Exact rational text of `value`, when it was computed exactly.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exact_value: Option<String>,
    /// Two-sided 99% confidence interval for sampled values.
    #[serde(skip_serializing_if = "Option::is_none", serialize_with = "ser_interval")]
    pub interval: Option<[f64; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
    /// A lower bound the value must reach.
    #[serde(skip_serializing_if = "Option::is_none", serialize_with = "ser_sig_opt")]
    pub floor: Option<f64>,
    pub bounds: Vec<BoundReport>,
}

fn ser_params<S: serde::Serializer>(m: &BTreeMap<String, f64>, s: S) -> Result<S::Ok, S::Error> {
    s.collect_map(m.iter().map(|(k, v)| (k, crate::bounds::round_sig(*v))))
}

fn ser_interval<S: serde::Serializer>(v: &Option<[f64; 2]>, s: S) -> Result<S::Ok, S::Error> {
    let v = v.expect("skipped when absent");
    s.collect_seq(v.iter().map(|x| crate::bounds::round_sig(*x)))
}

impl SimResult {
    pub(crate) fn new(quantity: &str, n: usize, params: &[(&str, f64)], value: f64) -> Self {
        Self {
            quantity: quantity.to_string(),
            n,
            params: params.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
            value,
            exact_value: None,
            interval: None,
            samples: None,
            floor: None,
            bounds: Vec::new(),
        }
    }

    /// The value bound checks compare against: the upper confidence limit
    /// when sampled.
    pub fn checked_value(&self) -> f64 {
        self.interval.map_or(self.value, |ci| ci[1])
    }

    /// Every attached bound dominates the checked value, and the floor (if
    /// any) is reached.
    pub fn holds(&self, tol: f64) -> bool {
        let v = self.checked_value();
        self.bounds.iter().all(|b| v <= b.value + tol) && self.floor.map_or(true, |f| self.value >= f - tol)
    }
}
