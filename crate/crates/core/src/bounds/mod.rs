//! Scalar information-theoretic functions and closed-form decoding and
//! secrecy bounds. All logarithms are base 2.

mod decoding;
mod exponent;
mod optimize;
mod qkd;
mod report;
mod scalar;

pub use decoding::{binomial_log2_masses, weighted_decoding_bound, weighted_decoding_bound_log2, DecodingVariant, SumStart};
pub use exponent::{
    gallager_e0, gallager_family_bound, reliability_e, tilted_exponent, type_exponent,
    GallagerBound, Reliability,
};
pub use qkd::{approach_ratio, qkd_bounds, Approach, QkdParams};
pub use report::{format_real, reports_to_csv, round_sig, BoundReport};
pub use scalar::{
    binary_entropy, critical_rate, divergence, eta, p_theta, psi, psi_prime, renyi_h,
};

pub(crate) use report::{ser_sig, ser_sig_opt};
pub(crate) use scalar::{h, log2_eta};

use crate::error::{Error, Result};

/// A crossover probability.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ChannelParams {
    p: f64,
}

impl ChannelParams {
    pub fn new(p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::Domain(format!("crossover probability must lie in [0,1], got {p}")));
        }
        Ok(Self { p })
    }

    pub fn p(&self) -> f64 {
        self.p
    }
}
