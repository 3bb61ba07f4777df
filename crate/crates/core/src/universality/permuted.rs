use num_bigint::BigInt;
use num_traits::Zero;
use rand::Rng;
use serde::Serialize;

use crate::error::{cap, Error, Result};
use crate::gf2::{binomial, BitVector, LinearCode};
use crate::rational::{display, int, pow2, Rational};

/// `ε_k(C) = 2ⁿ Pr_C(k) / C(n,k)` for `k = 0..=n`.
pub fn permuted_epsilon_k(c: &LinearCode) -> Result<Vec<Rational>> {
    let n = c.len();
    let w = c.weight_distribution()?;
    Ok((0..=n)
        .map(|k| w.mass(k) * pow2(n as i64) / Rational::from_integer(binomial(n, k)))
        .collect())
}

/// `ε(C) = max_{1≤k≤n} ε_k(C)`: the universality of `{σ(C) : σ ∈ S_n}`.
pub fn permuted_epsilon(c: &LinearCode) -> Result<Rational> {
    Ok(permuted_epsilon_k(c)?
        .into_iter()
        .skip(1)
        .max()
        .unwrap_or_else(Rational::zero))
}

/// `ε(C₁/C₂) = max_k ε_k(C₁) − ε_k(C₂)|C₂|/|C₁|` for `C₂ ⊆ C₁`.
pub fn permuted_pair_epsilon(c1: &LinearCode, c2: &LinearCode) -> Result<Rational> {
    if !c2.is_subcode_of(c1) {
        return Err(Error::Containment(
            "second code is not contained in the first".into(),
        ));
    }
    let e1 = permuted_epsilon_k(c1)?;
    let e2 = permuted_epsilon_k(c2)?;
    let ratio = pow2(c2.dimension() as i64 - c1.dimension() as i64);
    Ok((1..=c1.len())
        .map(|k| &e1[k] - &e2[k] * &ratio)
        .max()
        .unwrap_or_else(Rational::zero))
}

/// Per-weight membership probabilities of the permuted family, by orbit
/// counting: `Pr_σ[x ∈ σ(C)]` depends only on `|x| = k` and equals the
/// fraction of weight-`k` vectors lying in `C`. Enumerates all of F₂ⁿ with
/// membership tests, independent of the weight distribution routine.
pub fn orbit_membership(c: &LinearCode) -> Result<Vec<Rational>> {
    let n = c.len();
    cap("ambient length", n, super::AMBIENT_CAP)?;
    let mut hits = vec![0u64; n + 1];
    for x in 0u64..(1u64 << n) {
        let v = BitVector::from_u64(n, x);
        if c.contains(&v) {
            hits[v.weight()] += 1;
        }
    }
    Ok((0..=n)
        .map(|k| Rational::new(BigInt::from(hits[k]), binomial(n, k)))
        .collect())
}

/// ε of the permuted family measured from [`orbit_membership`]:
/// `max_{x≠0} Pr[x ∈ σ(C)] · 2^{n−t}`.
pub fn permuted_family_epsilon_by_orbits(c: &LinearCode) -> Result<Rational> {
    let probs = orbit_membership(c)?;
    let scale = pow2(c.len() as i64 - c.dimension() as i64);
    Ok(probs.into_iter().skip(1).max().unwrap_or_else(Rational::zero) * scale)
}

/// Pair version: `max_{x≠0} Pr[x ∈ σ(C₁)∖σ(C₂)] · 2^{n−dim C₁}`.
pub fn permuted_pair_epsilon_by_orbits(c1: &LinearCode, c2: &LinearCode) -> Result<Rational> {
    if !c2.is_subcode_of(c1) {
        return Err(Error::Containment(
            "second code is not contained in the first".into(),
        ));
    }
    let p1 = orbit_membership(c1)?;
    let p2 = orbit_membership(c2)?;
    let scale = pow2(c1.len() as i64 - c1.dimension() as i64);
    Ok((1..p1.len())
        .map(|k| &p1[k] - &p2[k])
        .max()
        .unwrap_or_else(Rational::zero)
        * scale)
}

#[derive(Clone, Debug)]
pub enum SearchMode {
    /// Random `t`-dim codes; certify `ε(C) ≤ n+1`.
    Plain,
    /// Random `t`-dim extensions `C₁ ⊇ base`; certify `ε(C₁/base) ≤ n+1`.
    Extension(LinearCode),
    /// Random `t`-dim subcodes `C₁ ⊆ base` found by extending `base⊥`;
    /// certify `ε(C₁⊥/base⊥) ≤ n+1`.
    DualPair(LinearCode),
}

#[derive(Clone, Debug)]
pub struct SearchOutcome {
    /// `(larger, smaller)`; for plain mode `smaller` is `{0}`.
    pub larger: LinearCode,
    pub smaller: LinearCode,
    pub epsilon: Rational,
    pub trials: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct SearchRecord {
    pub epsilon: String,
    pub trials: usize,
    pub larger_dim: usize,
    pub smaller_dim: usize,
}

impl SearchOutcome {
    pub fn record(&self) -> SearchRecord {
        SearchRecord {
            epsilon: display(&self.epsilon),
            trials: self.trials,
            larger_dim: self.larger.dimension(),
            smaller_dim: self.smaller.dimension(),
        }
    }
}

/// Draws from the universal₂ (extension) family until the permuted-family
/// ε is at most `n + 1`.
pub fn search_permuted_code<R: Rng + ?Sized>(
    n: usize,
    t: usize,
    budget: usize,
    mode: &SearchMode,
    rng: &mut R,
) -> Result<SearchOutcome> {
    if budget == 0 {
        return Err(Error::Domain("budget must be at least 1".into()));
    }
    if t > n || n == 0 {
        return Err(Error::Dimension(format!("need t <= n, got t={t}, n={n}")));
    }
    let target = int(n as i64 + 1);
    let mut best: Option<Rational> = None;
    for trial in 1..=budget {
        let (larger, smaller, eps) = match mode {
            SearchMode::Plain => {
                let c = LinearCode::random(n, t, rng)?;
                let e = permuted_epsilon(&c)?;
                (c, LinearCode::zero(n), e)
            }
            SearchMode::Extension(base) => {
                let c1 = base.random_extension(t, rng)?;
                let e = permuted_pair_epsilon(&c1, base)?;
                (c1, base.clone(), e)
            }
            SearchMode::DualPair(base) => {
                if t > base.dimension() {
                    return Err(Error::Dimension(format!(
                        "subcode dimension {t} exceeds base dimension {}",
                        base.dimension()
                    )));
                }
                let bd = base.dual();
                let d = bd.random_extension(n - t, rng)?;
                let e = permuted_pair_epsilon(&d, &bd)?;
                (base.clone(), d.dual(), e)
            }
        };
        if eps <= target {
            return Ok(SearchOutcome {
                larger,
                smaller,
                epsilon: eps,
                trials: trial,
            });
        }
        if best.as_ref().map_or(true, |b| &eps < b) {
            best = Some(eps);
        }
    }
    Err(Error::BudgetExhausted {
        trials: budget,
        best: best.map(|b| display(&b)).unwrap_or_default(),
    })
}
