use rand::Rng;
use serde::Serialize;

use super::density::{
    check_hermitian_psd, entropy_unnormalized, eigenvalues, random_gaussian, random_simplex,
    real_trace, support_power, trace_norm, trace_square, CMatrix, DensityOperator, C64, PSD_TOL,
};
use crate::bounds::ser_sig;
use crate::error::{Error, Result};
use crate::gf2::{BitVector, LinearCode};

/// `ρ^{AE} = Σ_a |a⟩⟨a| ⊗ B_a` with subnormalized blocks `B_a = P(a) ρ_a`.
/// Key values are indexed by their packed bits (bit `i` ↔ coordinate `i`).
#[derive(Clone, Debug)]
pub struct CQState {
    key_bits: usize,
    blocks: Vec<CMatrix>,
}

/// Cap on the classical register for dense storage.
pub const KEY_BITS_CAP: usize = 16;

impl CQState {
    pub fn new(key_bits: usize, blocks: Vec<CMatrix>) -> Result<Self> {
        crate::error::cap("key register bits", key_bits, KEY_BITS_CAP)?;
        if blocks.len() != 1 << key_bits {
            return Err(Error::LengthMismatch {
                expected: 1 << key_bits,
                got: blocks.len(),
            });
        }
        let d = blocks[0].nrows();
        for b in &blocks {
            if b.nrows() != d || b.ncols() != d {
                return Err(Error::Dimension("blocks must share one Eve dimension".into()));
            }
            check_hermitian_psd(b)?;
        }
        let s = Self { key_bits, blocks };
        let tr = s.total_trace();
        if !(tr > 0.0 && tr <= 1.0 + PSD_TOL) {
            return Err(Error::Domain(format!("total trace {tr} outside (0,1]")));
        }
        Ok(s)
    }

    pub(crate) fn from_blocks_unchecked(key_bits: usize, blocks: Vec<CMatrix>) -> Self {
        Self { key_bits, blocks }
    }

    /// `Σ_a P(a) |a⟩⟨a| ⊗ ρ_a`.
    pub fn from_ensemble(key_bits: usize, probs: &[f64], states: &[DensityOperator]) -> Result<Self> {
        if probs.len() != states.len() {
            return Err(Error::LengthMismatch {
                expected: probs.len(),
                got: states.len(),
            });
        }
        let blocks = probs
            .iter()
            .zip(states)
            .map(|(&p, s)| s.matrix() * C64::new(p, 0.0))
            .collect();
        Self::new(key_bits, blocks)
    }

    /// `ρ_mix^A ⊗ ρ^E`.
    pub fn product(key_bits: usize, rho_e: &DensityOperator) -> Result<Self> {
        let k = 1usize << key_bits;
        Self::new(key_bits, vec![rho_e.matrix() / C64::new(k as f64, 0.0); k])
    }

    /// One uniform bit copied into a qubit: `½ Σ_a |a⟩⟨a| ⊗ |a⟩⟨a|`.
    pub fn correlated_bit() -> Self {
        let blocks = (0..2)
            .map(|a| {
                let mut m = CMatrix::zeros(2, 2);
                m[(a, a)] = C64::new(0.5, 0.0);
                m
            })
            .collect();
        Self::from_blocks_unchecked(1, blocks)
    }

    /// Random key distribution with independent random Eve states.
    pub fn random<R: Rng + ?Sized>(key_bits: usize, eve_dim: usize, rng: &mut R) -> Self {
        let k = 1usize << key_bits;
        let probs = random_simplex(k, rng);
        let blocks = probs
            .into_iter()
            .map(|p| {
                // rank varies so σ-support edge cases get exercised
                let rank = rng.gen_range(1..=eve_dim);
                let g = random_gaussian(eve_dim, rank, rng);
                let m = &g * g.adjoint();
                let tr = real_trace(&m);
                m * C64::new(p / tr, 0.0)
            })
            .collect();
        Self::from_blocks_unchecked(key_bits, blocks)
    }

    pub fn key_bits(&self) -> usize {
        self.key_bits
    }

    pub fn eve_dim(&self) -> usize {
        self.blocks[0].nrows()
    }

    pub fn blocks(&self) -> &[CMatrix] {
        &self.blocks
    }

    pub fn total_trace(&self) -> f64 {
        self.blocks.iter().map(real_trace).sum()
    }

    pub fn key_distribution(&self) -> Vec<f64> {
        self.blocks.iter().map(real_trace).collect()
    }

    /// `ρ^E = Σ_a B_a`.
    pub fn rho_e(&self) -> DensityOperator {
        let mut acc = CMatrix::zeros(self.eve_dim(), self.eve_dim());
        for b in &self.blocks {
            acc += b;
        }
        DensityOperator::from_matrix_unchecked(acc)
    }
}

/// `‖ρ^{AE} − ρ_mix^A ⊗ ρ^E‖₁`, blockwise.
pub fn d1_distance(rho: &CQState) -> f64 {
    let k = rho.blocks.len() as f64;
    let mix = rho.rho_e().matrix() / C64::new(k, 0.0);
    rho.blocks.iter().map(|b| trace_norm(&(b - &mix))).sum()
}

#[derive(Clone, Copy, Debug, Serialize, PartialEq)]
pub struct RenyiQuantities {
    #[serde(serialize_with = "ser_sig")]
    pub h2: f64,
    #[serde(serialize_with = "ser_sig")]
    pub d2: f64,
    #[serde(serialize_with = "ser_sig")]
    pub hmin: f64,
}

fn check_sigma(rho: &CQState, sigma: &DensityOperator) -> Result<()> {
    if sigma.dim() != rho.eve_dim() {
        return Err(Error::LengthMismatch {
            expected: rho.eve_dim(),
            got: sigma.dim(),
        });
    }
    Ok(())
}

/// Conditional collision entropy, `d₂` and min-entropy relative to `σ`
/// (default `ρ^E`). Inverses are taken on the support of `σ`.
pub fn h2_d2_hmin(rho: &CQState, sigma: Option<&DensityOperator>) -> Result<RenyiQuantities> {
    let default;
    let sigma = match sigma {
        Some(s) => s,
        None => {
            default = rho.rho_e();
            &default
        }
    };
    check_sigma(rho, sigma)?;
    let q = support_power(sigma.matrix(), -0.25);
    let half = support_power(sigma.matrix(), -0.5);
    let collision: f64 = rho.blocks.iter().map(|b| trace_square(&(&q * b * &q))).sum();
    let marginal = trace_square(&(&q * rho.rho_e().matrix() * &q));
    let top = rho
        .blocks
        .iter()
        .map(|b| eigenvalues(&(&half * b * &half)).into_iter().fold(0.0, f64::max))
        .fold(0.0, f64::max);
    Ok(RenyiQuantities {
        h2: -collision.log2(),
        d2: collision - marginal / rho.blocks.len() as f64,
        hmin: -top.log2(),
    })
}

/// Holevo information `χ = S(ρ^E) + H(P) − S(ρ^{AE})` in bits.
pub fn holevo(rho: &CQState) -> f64 {
    let s_e = rho.rho_e().entropy();
    let h_p: f64 = rho
        .key_distribution()
        .into_iter()
        .filter(|&p| p > 0.0)
        .map(|p| -p * p.log2())
        .sum();
    let s_ae: f64 = rho.blocks.iter().map(entropy_unnormalized).sum();
    (s_e + h_p - s_ae).max(0.0)
}

/// `ρ * P^W = Σ_w P^W(w) Σ_a B_a ↦ |a+w⟩`.
pub fn convolve(rho: &CQState, pw: &[f64]) -> Result<CQState> {
    if pw.len() != rho.blocks.len() {
        return Err(Error::LengthMismatch {
            expected: rho.blocks.len(),
            got: pw.len(),
        });
    }
    let d = rho.eve_dim();
    let blocks = (0..rho.blocks.len())
        .map(|target| {
            let mut acc = CMatrix::zeros(d, d);
            for (w, &p) in pw.iter().enumerate() {
                if p != 0.0 {
                    acc += &rho.blocks[target ^ w] * C64::new(p, 0.0);
                }
            }
            acc
        })
        .collect();
    Ok(CQState::from_blocks_unchecked(rho.key_bits, blocks))
}

/// Coarse-grains the key register onto `A/C`; the coset of `a` is indexed
/// by its syndrome under a parity-check matrix of `C`.
pub fn hash_marginal(rho: &CQState, c: &LinearCode) -> Result<CQState> {
    let n = rho.key_bits;
    if c.len() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            got: c.len(),
        });
    }
    let h = c.parity_check_matrix();
    let out_bits = h.nrows();
    let d = rho.eve_dim();
    let mut blocks = vec![CMatrix::zeros(d, d); 1 << out_bits];
    for (a, b) in rho.blocks.iter().enumerate() {
        let s = h.mul_vec(&BitVector::from_u64(n, a as u64))?;
        let idx = s.to_u64().unwrap_or(0) as usize;
        blocks[idx] += b;
    }
    Ok(CQState::from_blocks_unchecked(out_bits, blocks))
}
