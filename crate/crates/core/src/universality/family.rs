use rand::Rng;

use crate::error::{Error, Result};
use crate::gf2::LinearCode;
use crate::hashfam::HashFamily;

/// A weighted family of equal-length codes. Integer weights stand in for
/// multiple copies, so "uniform choice over I" stays literal.
#[derive(Clone, Debug)]
pub struct CodeFamily {
    n: usize,
    members: Vec<LinearCode>,
    weights: Vec<u64>,
}

impl CodeFamily {
    pub fn uniform(members: Vec<LinearCode>) -> Result<Self> {
        let w = vec![1; members.len()];
        Self::weighted(members, w)
    }

    pub fn weighted(members: Vec<LinearCode>, weights: Vec<u64>) -> Result<Self> {
        let n = members.first().ok_or(Error::Missing("family members"))?.len();
        if weights.len() != members.len() {
            return Err(Error::LengthMismatch {
                expected: members.len(),
                got: weights.len(),
            });
        }
        if let Some(bad) = members.iter().find(|c| c.len() != n) {
            return Err(Error::LengthMismatch {
                expected: n,
                got: bad.len(),
            });
        }
        let total = weights
            .iter()
            .try_fold(0u64, |acc, &w| acc.checked_add(w))
            .ok_or_else(|| Error::Domain("total family weight overflows u64".into()))?;
        if total == 0 {
            return Err(Error::Domain("family has zero total weight".into()));
        }
        Ok(Self {
            n,
            members,
            weights,
        })
    }

    /// Kernels `Ker f_r` of every member of a hash family.
    pub fn from_hash_family(fam: &HashFamily) -> Result<Self> {
        Self::uniform(fam.kernel_codes()?)
    }

    /// `𝒞⊥ = {C_r⊥}` with the same weights.
    pub fn dual(&self) -> CodeFamily {
        CodeFamily {
            n: self.n,
            members: self.members.iter().map(LinearCode::dual).collect(),
            weights: self.weights.clone(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn members(&self) -> &[LinearCode] {
        &self.members
    }

    pub fn weights(&self) -> &[u64] {
        &self.weights
    }

    pub fn total_weight(&self) -> u64 {
        self.weights.iter().sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&LinearCode, u64)> {
        self.members.iter().zip(self.weights.iter().copied())
    }

    pub fn t_min(&self) -> usize {
        self.members.iter().map(LinearCode::dimension).min().unwrap()
    }

    pub fn t_max(&self) -> usize {
        self.members.iter().map(LinearCode::dimension).max().unwrap()
    }

    /// A member drawn with probability proportional to its weight.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> &LinearCode {
        let mut r = rng.gen_range(0..self.total_weight());
        for (c, w) in self.iter() {
            if r < w {
                return c;
            }
            r -= w;
        }
        unreachable!("weights sum to the sampled range")
    }
}

/// Nested pairs stored as `(larger, smaller)` with `smaller ⊆ larger`.
#[derive(Clone, Debug)]
pub struct CodePairFamily {
    n: usize,
    pairs: Vec<(LinearCode, LinearCode)>,
    weights: Vec<u64>,
}

impl CodePairFamily {
    pub fn uniform(pairs: Vec<(LinearCode, LinearCode)>) -> Result<Self> {
        let w = vec![1; pairs.len()];
        Self::weighted(pairs, w)
    }

    pub fn weighted(pairs: Vec<(LinearCode, LinearCode)>, weights: Vec<u64>) -> Result<Self> {
        let n = pairs.first().ok_or(Error::Missing("family members"))?.0.len();
        if weights.len() != pairs.len() {
            return Err(Error::LengthMismatch {
                expected: pairs.len(),
                got: weights.len(),
            });
        }
        for (i, (big, small)) in pairs.iter().enumerate() {
            if big.len() != n || small.len() != n {
                return Err(Error::LengthMismatch {
                    expected: n,
                    got: if big.len() != n { big.len() } else { small.len() },
                });
            }
            if !small.is_subcode_of(big) {
                return Err(Error::Containment(format!(
                    "member {i}: smaller code is not contained in the larger one"
                )));
            }
        }
        if weights.iter().all(|&w| w == 0) {
            return Err(Error::Domain("family has zero total weight".into()));
        }
        Ok(Self { n, pairs, weights })
    }

    /// Pairs `(C_{2,r}, base)` for an extended code family of `base`.
    pub fn extended(base: &LinearCode, family: &CodeFamily) -> Result<Self> {
        let pairs = family
            .members()
            .iter()
            .map(|c| (c.clone(), base.clone()))
            .collect();
        Self::weighted(pairs, family.weights().to_vec())
    }

    /// Pairs `(base, C_{2,r})` for a subcode family of `base`.
    pub fn subcode(base: &LinearCode, family: &CodeFamily) -> Result<Self> {
        let pairs = family
            .members()
            .iter()
            .map(|c| (base.clone(), c.clone()))
            .collect();
        Self::weighted(pairs, family.weights().to_vec())
    }

    /// `{small⊥ ⊇ large⊥}`.
    pub fn dual(&self) -> CodePairFamily {
        CodePairFamily {
            n: self.n,
            pairs: self
                .pairs
                .iter()
                .map(|(big, small)| (small.dual(), big.dual()))
                .collect(),
            weights: self.weights.clone(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn pairs(&self) -> &[(LinearCode, LinearCode)] {
        &self.pairs
    }

    pub fn weights(&self) -> &[u64] {
        &self.weights
    }

    pub fn larger(&self) -> CodeFamily {
        CodeFamily::weighted(
            self.pairs.iter().map(|p| p.0.clone()).collect(),
            self.weights.clone(),
        )
        .expect("pair family is non-empty")
    }

    pub fn smaller(&self) -> CodeFamily {
        CodeFamily::weighted(
            self.pairs.iter().map(|p| p.1.clone()).collect(),
            self.weights.clone(),
        )
        .expect("pair family is non-empty")
    }
}
