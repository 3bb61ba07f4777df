use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

use super::duality::{duality_bound, max_tight_epsilon, BoundVariant};
use super::family::CodeFamily;
use super::measure::epsilon_floor;
use crate::error::{cap, Error, Result};
use crate::gf2::{BitVector, LinearCode};
use crate::rational::Rational;

/// Ambient length cap for subspace enumeration.
pub const SUBSPACE_CAP: usize = 8;

/// Every `t`-dimensional subspace of F₂ⁿ, each produced once from its RREF.
pub fn all_subspaces(n: usize, t: usize) -> Result<Vec<LinearCode>> {
    cap("subspace enumeration length", n, SUBSPACE_CAP)?;
    if t > n {
        return Err(Error::Dimension(format!("no {t}-dimensional subspace of F_2^{n}")));
    }
    let mut out = Vec::new();
    let mut pivots = Vec::with_capacity(t);
    choose_pivots(n, t, 0, &mut pivots, &mut out);
    Ok(out)
}

fn choose_pivots(n: usize, t: usize, start: usize, pivots: &mut Vec<usize>, out: &mut Vec<LinearCode>) {
    if pivots.len() == t {
        emit_rref(n, pivots, out);
        return;
    }
    for c in start..n {
        pivots.push(c);
        choose_pivots(n, t, c + 1, pivots, out);
        pivots.pop();
    }
}

fn emit_rref(n: usize, pivots: &[usize], out: &mut Vec<LinearCode>) {
    // free slots: row i, column j > pivot_i, j not a pivot column
    let mut slots = Vec::new();
    for (i, &p) in pivots.iter().enumerate() {
        for j in p + 1..n {
            if !pivots.contains(&j) {
                slots.push((i, j));
            }
        }
    }
    for fill in 0u64..(1u64 << slots.len()) {
        let mut rows: Vec<BitVector> = pivots.iter().map(|&p| BitVector::unit(n, p)).collect();
        for (s, &(i, j)) in slots.iter().enumerate() {
            if (fill >> s) & 1 == 1 {
                rows[i].set(j, true);
            }
        }
        out.push(LinearCode::span(n, rows).expect("rows have length n"));
    }
}

/// Number of `t`-dimensional subspaces of F₂ⁿ.
pub fn gaussian_binomial(n: usize, t: usize) -> BigInt {
    if t > n {
        return BigInt::zero();
    }
    let mut num = BigInt::from(1);
    let mut den = BigInt::from(1);
    for i in 0..t {
        num *= (BigInt::from(1) << (n - i)) - 1;
        den *= (BigInt::from(1) << (i + 1)) - 1;
    }
    num / den
}

/// All `t`-dimensional subspaces: the optimally universal₂ family.
pub fn optimal_family(n: usize, t: usize) -> Result<CodeFamily> {
    CodeFamily::uniform(all_subspaces(n, t)?)
}

/// Mixture of `𝒜` (`t`-dim subspaces of `V_x = {x}⊥`) and `𝓑` (`t`-dim
/// subspaces not inside `V_x`) with `Pr[𝒜] = p`, where `p` is the plain
/// duality bound at `ε`. Then `Pr[x ∈ C_r⊥] = p` exactly.
pub fn tight_family(n: usize, t: usize, epsilon: &Rational, x: &BitVector) -> Result<CodeFamily> {
    if x.len() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            got: x.len(),
        });
    }
    if x.is_zero() {
        return Err(Error::Domain("x must be nonzero".into()));
    }
    if t < 1 || t >= n {
        return Err(Error::Domain(format!("need 1 <= t <= n-1, got t={t}, n={n}")));
    }
    let floor = epsilon_floor(n, t);
    let top = max_tight_epsilon(n, t)?;
    if epsilon < &floor || epsilon > &top {
        return Err(Error::Domain(format!(
            "epsilon {epsilon} outside [{floor}, {top}] for n={n}, t={t}"
        )));
    }
    let p = duality_bound(epsilon, t, n, None, BoundVariant::Plain)?;
    debug_assert!(!p.is_negative());
    let (a, b) = (p.numer().clone(), p.denom().clone());

    let (fam_a, fam_b): (Vec<LinearCode>, Vec<LinearCode>) = all_subspaces(n, t)?
        .into_iter()
        .partition(|c| c.basis().iter().all(|v| !v.dot(x)));
    let (na, nb) = (BigInt::from(fam_a.len()), BigInt::from(fam_b.len()));
    // member weights ∝ p/|𝒜| and (1−p)/|𝓑|
    let wa = &a * &nb;
    let wb = (&b - &a) * &na;
    let g = num_integer::gcd(wa.clone(), wb.clone());
    let to_u64 = |w: BigInt| -> Result<u64> {
        w.to_u64()
            .ok_or_else(|| Error::Domain("mixture weights overflow u64".into()))
    };
    let (wa, wb) = if g.is_zero() {
        (0, 0)
    } else {
        (to_u64(wa / &g)?, to_u64(wb / &g)?)
    };
    let mut members = Vec::with_capacity(fam_a.len() + fam_b.len());
    let mut weights = Vec::with_capacity(members.capacity());
    for c in fam_a {
        members.push(c);
        weights.push(wa);
    }
    for c in fam_b {
        members.push(c);
        weights.push(wb);
    }
    // drop zero-weight members so t_min/t_max reflect the support
    let (members, weights): (Vec<_>, Vec<_>) = members
        .into_iter()
        .zip(weights)
        .filter(|(_, w)| *w > 0)
        .unzip();
    CodeFamily::weighted(members, weights)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn subspace_counts_match_gaussian_binomials() {
        for n in 1..=6 {
            for t in 0..=n {
                let subs = all_subspaces(n, t).unwrap();
                assert_eq!(BigInt::from(subs.len()), gaussian_binomial(n, t));
                assert!(subs.iter().all(|c| c.dimension() == t));
            }
        }
        // distinctness at a non-trivial size
        let subs = all_subspaces(5, 2).unwrap();
        let set: std::collections::HashSet<_> = subs.iter().collect();
        assert_eq!(set.len(), subs.len());
    }

    #[test]
    fn refuses_large_ambient_space() {
        assert!(all_subspaces(9, 2).is_err());
    }
}
