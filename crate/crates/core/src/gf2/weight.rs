use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{int, to_f64, Rational};

/// Probability mass over Hamming weights `0..=n`, kept exact.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct WeightDistribution {
    mass: Vec<Rational>,
}

/// `C(n, k)` as a big integer.
pub fn binomial(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// Krawtchouk polynomial `K_j(i) = Σ_l (−1)^l C(i,l) C(n−i, j−l)`.
pub fn krawtchouk(n: usize, j: usize, i: usize) -> BigInt {
    let mut acc = BigInt::zero();
    for l in 0..=j.min(i) {
        let term = binomial(i, l) * binomial(n - i, j - l);
        if l % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    acc
}

impl WeightDistribution {
    /// Normalizes raw per-weight counts (index = weight).
    pub fn from_counts(counts: &[u64]) -> Self {
        let total: u64 = counts.iter().sum();
        let total = BigInt::from(total);
        Self {
            mass: counts
                .iter()
                .map(|&c| Rational::new(BigInt::from(c), total.clone()))
                .collect(),
        }
    }

    /// Validates nonnegativity and unit total.
    pub fn from_masses(mass: Vec<Rational>) -> Result<Self> {
        if mass.is_empty() {
            return Err(Error::Dimension("weight distribution needs n >= 0".into()));
        }
        if mass.iter().any(Signed::is_negative) {
            return Err(Error::Domain("negative weight mass".into()));
        }
        let total: Rational = mass.iter().sum();
        if total != int(1) {
            return Err(Error::Domain(format!("weight masses sum to {total}, not 1")));
        }
        Ok(Self { mass })
    }

    pub fn point_mass(n: usize, k: usize) -> Self {
        let mut mass = vec![Rational::zero(); n + 1];
        mass[k] = int(1);
        Self { mass }
    }

    /// Weight of `n` iid Bernoulli(`p`) bits.
    pub fn binomial(n: usize, p: &Rational) -> Result<Self> {
        if p.is_negative() || p > &int(1) {
            return Err(Error::Domain(format!("probability {p} outside [0,1]")));
        }
        let q = int(1) - p;
        let mass = (0..=n)
            .map(|k| {
                Rational::from_integer(binomial(n, k))
                    * num_traits::pow(p.clone(), k)
                    * num_traits::pow(q.clone(), n - k)
            })
            .collect();
        Ok(Self { mass })
    }

    pub fn n(&self) -> usize {
        self.mass.len() - 1
    }

    pub fn mass(&self, k: usize) -> &Rational {
        &self.mass[k]
    }

    pub fn masses(&self) -> &[Rational] {
        &self.mass
    }

    pub fn masses_f64(&self) -> Vec<f64> {
        self.mass.iter().map(to_f64).collect()
    }

    /// `log₂` of every mass (`−∞` for empty weights), without underflow.
    pub fn log2_masses(&self) -> Vec<f64> {
        self.mass.iter().map(crate::rational::log2).collect()
    }

    pub fn total(&self) -> Rational {
        self.mass.iter().sum()
    }

    /// Distribution of the dual code's weights, given that `self` is the
    /// normalized distribution of a linear code (so `|C| = 1/Pr_C(0)`).
    pub fn macwilliams(&self) -> Result<Self> {
        let n = self.n();
        if self.mass[0].is_zero() {
            return Err(Error::Domain(
                "not a code weight distribution: no mass at weight 0".into(),
            ));
        }
        // Pr_{C⊥}(j) = Σ_i Pr_C(i) K_j(i) / (2^n Pr_C(0))
        let scale = Rational::from_integer(BigInt::one() << n) * &self.mass[0];
        let mass = (0..=n)
            .map(|j| {
                let s: Rational = (0..=n)
                    .filter(|&i| !self.mass[i].is_zero())
                    .map(|i| &self.mass[i] * Rational::from_integer(krawtchouk(n, j, i)))
                    .sum();
                s / &scale
            })
            .collect();
        Self::from_masses(mass)
    }
}
