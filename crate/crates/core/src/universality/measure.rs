use num_bigint::BigInt;
use num_traits::Zero;
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::family::{CodeFamily, CodePairFamily};
use crate::error::{cap, Error, Result};
use crate::gf2::{BitVector, LinearCode};
use crate::rational::{display, pow2, Rational};

/// Largest ambient length for exhaustive x-sweeps.
pub const AMBIENT_CAP: usize = 20;

/// Which family dimension enters `2^{t−n} ε`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Convention {
    MinDim,
    MaxDim,
}

impl Convention {
    pub fn swapped(self) -> Self {
        match self {
            Convention::MinDim => Convention::MaxDim,
            Convention::MaxDim => Convention::MinDim,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Convention::MinDim => "min_dim",
            Convention::MaxDim => "max_dim",
        }
    }

    fn pick(self, t_min: usize, t_max: usize) -> usize {
        match self {
            Convention::MinDim => t_min,
            Convention::MaxDim => t_max,
        }
    }
}

impl std::str::FromStr for Convention {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "min_dim" | "min" => Ok(Convention::MinDim),
            "max_dim" | "max" => Ok(Convention::MaxDim),
            _ => Err(Error::Domain(format!("unknown convention {s:?}"))),
        }
    }
}

/// Smallest ε for which the defining inequality holds, with its witness.
#[derive(Clone, Debug, PartialEq)]
pub struct UniversalityReport {
    pub epsilon: Rational,
    pub convention: Convention,
    pub t_min: usize,
    pub t_max: usize,
    /// The dimension `t` actually used.
    pub t: usize,
    pub worst_x: BitVector,
    /// `max_x Pr[x ∈ ·]` over the variant's domain.
    pub max_probability: Rational,
}

/// Flat serialization of a report.
#[derive(Clone, Debug, Serialize)]
pub struct UniversalityRecord {
    pub epsilon_num: String,
    pub epsilon_den: String,
    pub convention: &'static str,
    pub t_min: usize,
    pub t_max: usize,
    pub worst_x: String,
}

impl UniversalityReport {
    pub fn record(&self) -> UniversalityRecord {
        UniversalityRecord {
            epsilon_num: self.epsilon.numer().to_string(),
            epsilon_den: self.epsilon.denom().to_string(),
            convention: self.convention.as_str(),
            t_min: self.t_min,
            t_max: self.t_max,
            worst_x: self.worst_x.to_string(),
        }
    }

    pub fn epsilon_string(&self) -> String {
        display(&self.epsilon)
    }
}

/// `counts[x] = Σ_r w_r · 1[x ∈ C_r]` over all `x ∈ F₂ⁿ`, as packed indices.
pub(crate) fn membership_counts<'a, I>(n: usize, items: I) -> Result<Vec<u64>>
where
    I: IntoParallelIterator<Item = (&'a LinearCode, u64)>,
{
    cap("ambient length", n, AMBIENT_CAP)?;
    let size = 1usize << n;
    items
        .into_par_iter()
        .try_fold(
            || vec![0u64; size],
            |mut acc, (c, w)| {
                for x in c.codeword_masks()? {
                    acc[x as usize] += w;
                }
                Ok(acc)
            },
        )
        .try_reduce(
            || vec![0u64; size],
            |mut a, b| {
                for (x, y) in a.iter_mut().zip(b) {
                    *x += y;
                }
                Ok(a)
            },
        )
}

/// Per-x membership probabilities `Pr[x ∈ C_r]` (index = packed x).
pub fn membership_probabilities(family: &CodeFamily) -> Result<Vec<Rational>> {
    let counts = membership_counts(family.n(), family.iter().collect::<Vec<_>>())?;
    let total = BigInt::from(family.total_weight());
    Ok(counts
        .into_iter()
        .map(|c| Rational::new(BigInt::from(c), total.clone()))
        .collect())
}

/// Max of `counts` over `domain`, lowest index first on ties.
fn argmax(counts: &[u64], domain: impl Fn(usize) -> bool) -> (usize, u64) {
    let mut best = (usize::MAX, 0u64);
    for (x, &c) in counts.iter().enumerate() {
        if domain(x) && (best.0 == usize::MAX || c > best.1) {
            best = (x, c);
        }
    }
    best
}

struct Sweep {
    n: usize,
    worst: usize,
    count: u64,
    total: u64,
}

impl Sweep {
    fn probability(&self) -> Rational {
        Rational::new(BigInt::from(self.count), BigInt::from(self.total))
    }

    fn report(self, scale_exp: i64, convention: Convention, t_min: usize, t_max: usize, t: usize) -> UniversalityReport {
        let p = self.probability();
        let worst_x = if self.worst == usize::MAX {
            BitVector::zeros(self.n)
        } else {
            BitVector::from_u64(self.n, self.worst as u64)
        };
        UniversalityReport {
            epsilon: &p * pow2(scale_exp),
            convention,
            t_min,
            t_max,
            t,
            worst_x,
            max_probability: p,
        }
    }
}

/// Exact ε: `max_{x≠0} Pr[x ∈ C_r] · 2^{n−t}`.
pub fn epsilon_universal(family: &CodeFamily, convention: Convention) -> Result<UniversalityReport> {
    let n = family.n();
    let counts = membership_counts(n, family.iter().collect::<Vec<_>>())?;
    let (worst, count) = argmax(&counts, |x| x != 0);
    let (t_min, t_max) = (family.t_min(), family.t_max());
    let t = convention.pick(t_min, t_max);
    let sweep = Sweep {
        n,
        worst,
        count,
        total: family.total_weight(),
    };
    Ok(sweep.report(n as i64 - t as i64, convention, t_min, t_max, t))
}

/// ε of the dual family `{C_r⊥}`, measured under the swapped convention.
pub fn epsilon_dual_universal(family: &CodeFamily, convention: Convention) -> Result<UniversalityReport> {
    epsilon_universal(&family.dual(), convention.swapped())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PairVariant {
    /// Fixed smaller code `C₁`; `x ∉ C₁`, `Pr[x ∈ C_{2,r}] ≤ 2^{t−n} ε`.
    Extended,
    /// Fixed larger code `C₁` of dimension `m`; `x ∈ C₁∖{0}`, `Pr[x ∈ C_{2,r}] ≤ 2^{t−m} ε`.
    Subcode,
    /// `x ≠ 0`, `Pr[x ∈ larger_r ∖ smaller_r] ≤ 2^{t−n} ε`, `t` from the larger codes.
    Pair,
}

impl PairVariant {
    /// The variant describing the dual family.
    pub fn dual(self) -> Self {
        match self {
            PairVariant::Extended => PairVariant::Subcode,
            PairVariant::Subcode => PairVariant::Extended,
            PairVariant::Pair => PairVariant::Pair,
        }
    }
}

fn common_code<'a>(mut codes: impl Iterator<Item = &'a LinearCode>, what: &str) -> Result<&'a LinearCode> {
    let first = codes.next().ok_or(Error::Missing("family members"))?;
    if codes.any(|c| c != first) {
        return Err(Error::Containment(format!(
            "{what} family needs a single fixed base code"
        )));
    }
    Ok(first)
}

/// Exact ε for the extended / subcode / pair definitions.
pub fn epsilon_pair(
    family: &CodePairFamily,
    variant: PairVariant,
    convention: Convention,
) -> Result<UniversalityReport> {
    let n = family.n();
    cap("ambient length", n, AMBIENT_CAP)?;
    let total: u64 = family
        .weights()
        .iter()
        .try_fold(0u64, |a, &w| a.checked_add(w))
        .ok_or_else(|| Error::Domain("total family weight overflows u64".into()))?;
    let items: Vec<(&LinearCode, u64)>;
    match variant {
        PairVariant::Extended => {
            let base = common_code(family.pairs().iter().map(|p| &p.1), "extended")?;
            items = family.pairs().iter().map(|p| &p.0).zip(family.weights().iter().copied()).collect();
            let counts = membership_counts(n, items.clone())?;
            let (worst, count) =
                argmax(&counts, |x| !base.contains(&BitVector::from_u64(n, x as u64)));
            let dims: Vec<usize> = items.iter().map(|(c, _)| c.dimension()).collect();
            let (t_min, t_max) = min_max(&dims);
            let t = convention.pick(t_min, t_max);
            Ok(Sweep { n, worst, count, total }.report(n as i64 - t as i64, convention, t_min, t_max, t))
        }
        PairVariant::Subcode => {
            let base = common_code(family.pairs().iter().map(|p| &p.0), "subcode")?;
            let m = base.dimension();
            items = family.pairs().iter().map(|p| &p.1).zip(family.weights().iter().copied()).collect();
            let counts = membership_counts(n, items.clone())?;
            let (worst, count) =
                argmax(&counts, |x| x != 0 && base.contains(&BitVector::from_u64(n, x as u64)));
            let dims: Vec<usize> = items.iter().map(|(c, _)| c.dimension()).collect();
            let (t_min, t_max) = min_max(&dims);
            let t = convention.pick(t_min, t_max);
            Ok(Sweep { n, worst, count, total }.report(m as i64 - t as i64, convention, t_min, t_max, t))
        }
        PairVariant::Pair => {
            let big: Vec<(&LinearCode, u64)> =
                family.pairs().iter().map(|p| &p.0).zip(family.weights().iter().copied()).collect();
            let small: Vec<(&LinearCode, u64)> =
                family.pairs().iter().map(|p| &p.1).zip(family.weights().iter().copied()).collect();
            // small ⊆ big, so membership in the difference is a difference of counts
            let cb = membership_counts(n, big.clone())?;
            let cs = membership_counts(n, small)?;
            let diff: Vec<u64> = cb.iter().zip(&cs).map(|(a, b)| a - b).collect();
            let (worst, count) = argmax(&diff, |x| x != 0);
            let dims: Vec<usize> = big.iter().map(|(c, _)| c.dimension()).collect();
            let (t_min, t_max) = min_max(&dims);
            let t = convention.pick(t_min, t_max);
            Ok(Sweep { n, worst, count, total }.report(n as i64 - t as i64, convention, t_min, t_max, t))
        }
    }
}

/// The dual-universality counterpart: the matching variant on the dual pair
/// family, with the dimension convention swapped.
pub fn epsilon_pair_dual(
    family: &CodePairFamily,
    variant: PairVariant,
    convention: Convention,
) -> Result<UniversalityReport> {
    epsilon_pair(&family.dual(), variant.dual(), convention.swapped())
}

fn min_max(dims: &[usize]) -> (usize, usize) {
    (
        *dims.iter().min().expect("non-empty"),
        *dims.iter().max().expect("non-empty"),
    )
}

/// Sampled estimate of ε with a one-sided 99% lower confidence limit.
#[derive(Clone, Debug, Serialize)]
pub struct McReport {
    #[serde(serialize_with = "crate::bounds::ser_sig")]
    pub epsilon_estimate: f64,
    #[serde(serialize_with = "crate::bounds::ser_sig")]
    pub epsilon_lower: f64,
    pub samples: usize,
    pub convention: Convention,
    pub t: usize,
    pub worst_x: String,
}

/// Monte Carlo ε: members are drawn by `sampler`; the x-sweep stays exact.
/// `t` is the family dimension under the caller's convention.
pub fn epsilon_universal_mc<R, F>(
    n: usize,
    t: usize,
    convention: Convention,
    samples: usize,
    rng: &mut R,
    mut sampler: F,
) -> Result<McReport>
where
    R: Rng + ?Sized,
    F: FnMut(&mut R) -> LinearCode,
{
    if samples == 0 {
        return Err(Error::Domain("need at least one sample".into()));
    }
    cap("ambient length", n, AMBIENT_CAP)?;
    let mut counts = vec![0u64; 1 << n];
    for _ in 0..samples {
        let c = sampler(rng);
        if c.len() != n {
            return Err(Error::LengthMismatch {
                expected: n,
                got: c.len(),
            });
        }
        for x in c.codeword_masks()? {
            counts[x as usize] += 1;
        }
    }
    let (worst, count) = argmax(&counts, |x| x != 0);
    let k = samples as f64;
    let p = count as f64 / k;
    let lower = (p - 2.326_347_874 * (p * (1.0 - p) / k).sqrt()).max(0.0);
    let scale = 2f64.powi(n as i32 - t as i32);
    Ok(McReport {
        epsilon_estimate: p * scale,
        epsilon_lower: lower * scale,
        samples,
        convention,
        t,
        worst_x: BitVector::from_u64(n, worst as u64).to_string(),
    })
}

/// `(2ⁿ − 2^{n−t}) / (2ⁿ − 1)`, the least ε any family of minimum dimension
/// `t` can have.
pub fn epsilon_floor(n: usize, t: usize) -> Rational {
    let num = pow2(n as i64) - pow2(n as i64 - t as i64);
    let den = pow2(n as i64) - Rational::from_integer(BigInt::from(1));
    if den.is_zero() {
        return Rational::zero();
    }
    num / den
}
