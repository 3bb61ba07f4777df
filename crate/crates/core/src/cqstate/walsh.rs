use num_bigint::BigInt;
use rayon::prelude::*;
use serde::Serialize;

use super::density::DensityOperator;
use super::state::{convolve, h2_d2_hmin, hash_marginal, CQState};
use crate::bounds::ser_sig;
use crate::error::{cap, Error, Result};
use crate::gf2::LinearCode;
use crate::rational::{display, pow2, to_f64, Rational};
use crate::universality::{epsilon_dual_universal, CodeFamily, Convention, AMBIENT_CAP};

/// In-place Walsh–Hadamard transform: `f̂(x) = Σ_w f(w)(−1)^{x·w}`.
pub fn fwht<T>(v: &mut [T])
where
    T: Copy + std::ops::Add<Output = T> + std::ops::Sub<Output = T>,
{
    assert!(v.len().is_power_of_two());
    let mut h = 1;
    while h < v.len() {
        for block in v.chunks_mut(2 * h) {
            let (lo, hi) = block.split_at_mut(h);
            for (a, b) in lo.iter_mut().zip(hi.iter_mut()) {
                let (x, y) = (*a, *b);
                *a = x + y;
                *b = x - y;
            }
        }
        h *= 2;
    }
}

/// Character expectations `E_W (−1)^{x·W}` for every `x`.
pub fn walsh_spectrum(dist: &[f64]) -> Result<Vec<f64>> {
    if !dist.len().is_power_of_two() {
        return Err(Error::Dimension("distribution length must be a power of two".into()));
    }
    let mut v = dist.to_vec();
    fwht(&mut v);
    Ok(v)
}

/// Unnormalized indicator spectrum `Σ_{w∈C} (−1)^{x·w}` over integers.
pub fn code_indicator_spectrum(c: &LinearCode) -> Result<Vec<i64>> {
    cap("ambient length", c.len(), AMBIENT_CAP)?;
    let mut v = vec![0i64; 1 << c.len()];
    for w in c.codeword_masks()? {
        v[w as usize] = 1;
    }
    fwht(&mut v);
    Ok(v)
}

pub fn uniform_on_code(c: &LinearCode) -> Result<Vec<f64>> {
    cap("ambient length", c.len(), AMBIENT_CAP)?;
    let mut v = vec![0.0; 1 << c.len()];
    let words = c.codeword_masks()?;
    let p = 1.0 / words.len() as f64;
    for w in words {
        v[w as usize] = p;
    }
    Ok(v)
}

/// A weighted family `{W_r}` of distributions on F₂ⁿ.
#[derive(Clone, Debug)]
pub struct WalshFamily {
    n: usize,
    members: Vec<Vec<f64>>,
    weights: Vec<f64>,
}

impl WalshFamily {
    pub fn uniform(members: Vec<Vec<f64>>) -> Result<Self> {
        let k = members.len();
        Self::weighted(members, vec![1.0 / k as f64; k])
    }

    pub fn weighted(members: Vec<Vec<f64>>, weights: Vec<f64>) -> Result<Self> {
        if members.is_empty() || members.len() != weights.len() {
            return Err(Error::LengthMismatch {
                expected: members.len(),
                got: weights.len(),
            });
        }
        let len = members[0].len();
        if !len.is_power_of_two() || members.iter().any(|m| m.len() != len) {
            return Err(Error::Dimension("members must share a power-of-two length".into()));
        }
        let n = len.trailing_zeros() as usize;
        cap("ambient length", n, AMBIENT_CAP)?;
        let total: f64 = weights.iter().sum();
        let weights = weights.into_iter().map(|w| w / total).collect();
        Ok(Self { n, members, weights })
    }

    /// `W_r` uniform on `C_r`, weighted as in the code family.
    pub fn from_codes(fam: &CodeFamily) -> Result<Self> {
        let members = fam.members().iter().map(uniform_on_code).collect::<Result<_>>()?;
        Self::weighted(members, fam.weights().iter().map(|&w| w as f64).collect())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn iter(&self) -> impl Iterator<Item = (&[f64], f64)> {
        self.members.iter().map(|m| m.as_slice()).zip(self.weights.iter().copied())
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct BiasReport {
    #[serde(serialize_with = "ser_sig")]
    pub delta: f64,
    /// Exact `δ²` when the family came from codes.
    #[serde(serialize_with = "ser_rational_opt")]
    pub delta_sq: Option<Rational>,
    pub worst_x: u64,
    /// `E_r Ŵ_r(x)²` for every `x` (entry 0 is always 1).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub per_x: Option<Vec<f64>>,
}

fn ser_rational_opt<S: serde::Serializer>(r: &Option<Rational>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match r {
        Some(r) => s.serialize_str(&display(r)),
        None => s.serialize_none(),
    }
}

fn argmax_nonzero(v: &[f64]) -> (u64, f64) {
    v.iter()
        .enumerate()
        .skip(1)
        .fold((0, 0.0), |best, (x, &s)| if s > best.1 { (x as u64, s) } else { best })
}

/// `δ = max_{x≠0} √(E_r Ŵ_r(x)²)`.
pub fn walsh_bias(fam: &WalshFamily, keep_spectrum: bool) -> BiasReport {
    let size = 1usize << fam.n;
    let acc = fam
        .members
        .par_iter()
        .zip(&fam.weights)
        .map(|(m, &w)| {
            let mut s = m.clone();
            fwht(&mut s);
            s.into_iter().map(|v| w * v * v).collect::<Vec<_>>()
        })
        .collect::<Vec<_>>()
        .into_iter()
        // sequential sum keeps the result independent of thread scheduling
        .fold(vec![0.0; size], |a, b| a.into_iter().zip(b).map(|(x, y)| x + y).collect());
    let (worst_x, sq) = argmax_nonzero(&acc);
    BiasReport {
        delta: sq.sqrt(),
        delta_sq: None,
        worst_x,
        per_x: keep_spectrum.then_some(acc),
    }
}

/// Exact bias of `{uniform on C_r}` from integer transforms.
pub fn code_family_bias(fam: &CodeFamily) -> Result<BiasReport> {
    let n = fam.n();
    cap("ambient length", n, AMBIENT_CAP)?;
    let t_max = fam.t_max();
    // Σ_r w_r (S_r(x)/|C_r|)², over the common denominator W·4^{t_max}
    let acc = fam
        .members()
        .par_iter()
        .zip(fam.weights())
        .map(|(c, &w)| -> Result<Vec<BigInt>> {
            let spec = code_indicator_spectrum(c)?;
            let scale = BigInt::from(w) << (2 * (t_max - c.dimension()));
            Ok(spec.into_iter().map(|s| BigInt::from(s * s) * &scale).collect())
        })
        .try_reduce(
            || vec![BigInt::from(0); 1 << n],
            |a, b| Ok(a.into_iter().zip(b).map(|(x, y)| x + y).collect()),
        )?;
    let den = Rational::from_integer(BigInt::from(fam.total_weight())) * pow2(2 * t_max as i64);
    let (worst_x, top) = acc
        .iter()
        .enumerate()
        .skip(1)
        .fold((0usize, BigInt::from(0)), |best, (x, v)| if *v > best.1 { (x, v.clone()) } else { best });
    let delta_sq = Rational::from_integer(top) / den;
    Ok(BiasReport {
        delta: to_f64(&delta_sq).sqrt(),
        delta_sq: Some(delta_sq),
        worst_x: worst_x as u64,
        per_x: None,
    })
}

/// Sides of the small-bias smoothing inequality
/// `E_r d₂(ρ * P^{W_r}‖σ) ≤ δ² 2^{−H₂(A|E‖σ)}`.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct InequalitySides {
    #[serde(serialize_with = "ser_sig")]
    pub lhs: f64,
    #[serde(serialize_with = "ser_sig")]
    pub rhs: f64,
}

impl InequalitySides {
    pub fn holds(&self, tol: f64) -> bool {
        self.lhs <= self.rhs + tol
    }

    pub fn margin(&self) -> f64 {
        self.rhs - self.lhs
    }
}

fn check_register(rho: &CQState, n: usize) -> Result<()> {
    if rho.key_bits() != n {
        return Err(Error::LengthMismatch {
            expected: rho.key_bits(),
            got: n,
        });
    }
    Ok(())
}

pub fn small_bias_inequality(
    rho: &CQState,
    sigma: Option<&DensityOperator>,
    fam: &WalshFamily,
) -> Result<InequalitySides> {
    check_register(rho, fam.n)?;
    let h2 = h2_d2_hmin(rho, sigma)?.h2;
    let delta = walsh_bias(fam, false).delta;
    let lhs = fam
        .iter()
        .map(|(w, p)| Ok(p * h2_d2_hmin(&convolve(rho, w)?, sigma)?.d2))
        .sum::<Result<f64>>()?;
    Ok(InequalitySides {
        lhs,
        rhs: delta * delta * (-h2).exp2(),
    })
}

/// Privacy amplification by an ε-almost dual universal₂ code family:
/// `E_r d₂(f_{C_r}(A):E‖σ) ≤ ε 2^{−H₂(A|E‖σ)}`.
#[derive(Clone, Debug, Serialize)]
pub struct PaCheck {
    #[serde(flatten)]
    pub sides: InequalitySides,
    #[serde(serialize_with = "ser_rational")]
    pub epsilon: Rational,
    /// Largest `|d₂(ρ * P^{W_C}) − 2^{−m} d₂(hash marginal)|` over members.
    #[serde(serialize_with = "ser_sig")]
    pub chain_residual: f64,
}

fn ser_rational<S: serde::Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&display(r))
}

/// The hashed side needs one code dimension across the family, since the
/// convolution picture scales each member by its own `2^{−m}`.
pub fn pa_bound_check(rho: &CQState, sigma: Option<&DensityOperator>, fam: &CodeFamily) -> Result<PaCheck> {
    check_register(rho, fam.n())?;
    if fam.t_min() != fam.t_max() {
        return Err(Error::Domain("family must have constant code dimension".into()));
    }
    let m = fam.t_min();
    let eps = epsilon_dual_universal(fam, Convention::MinDim)?.epsilon;
    let h2 = h2_d2_hmin(rho, sigma)?.h2;
    let total = fam.total_weight() as f64;
    let mut lhs = 0.0;
    let mut residual: f64 = 0.0;
    for (c, w) in fam.iter() {
        let hashed = h2_d2_hmin(&hash_marginal(rho, c)?, sigma)?.d2;
        let smeared = h2_d2_hmin(&convolve(rho, &uniform_on_code(c)?)?, sigma)?.d2;
        residual = residual.max((smeared - (-(m as f64)).exp2() * hashed).abs());
        lhs += w as f64 / total * hashed;
    }
    Ok(PaCheck {
        sides: InequalitySides {
            lhs,
            rhs: to_f64(&eps) * (-h2).exp2(),
        },
        epsilon: eps,
        chain_residual: residual,
    })
}
