use num_traits::Signed;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::rational::{int, pow2, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundVariant {
    Plain,
    Subcode,
    Extended,
}

/// Upper bound on `Pr[x ∈ C_r⊥]` implied by ε-almost universality of
/// minimum dimension `t`.
///
/// * plain: `(1 − 2^{t−n}ε) 2^{1−t} + ε − 1`
/// * subcode of an `m`-dimensional code: `(1 − 2^{t−m}ε) 2^{1−t} + ε − 1`
/// * extended code of an `m`-dimensional code: `(1 − 2^{t−n}ε) 2^{m+1−t} + ε − 1`
pub fn duality_bound(
    epsilon: &Rational,
    t: usize,
    n: usize,
    m: Option<usize>,
    variant: BoundVariant,
) -> Result<Rational> {
    if epsilon.is_negative() {
        return Err(Error::Domain("epsilon must be nonnegative".into()));
    }
    let (t_, n_) = (t as i64, n as i64);
    match variant {
        BoundVariant::Plain => {
            if t < 1 || t > n {
                return Err(Error::Domain(format!("need 1 <= t <= n, got t={t}, n={n}")));
            }
            Ok((int(1) - pow2(t_ - n_) * epsilon) * pow2(1 - t_) + epsilon - int(1))
        }
        BoundVariant::Subcode => {
            let m = m.ok_or(Error::Missing("base dimension m"))?;
            if t < 1 || t > m || m > n {
                return Err(Error::Domain(format!(
                    "subcode bound needs 1 <= t <= m <= n, got t={t}, m={m}, n={n}"
                )));
            }
            Ok((int(1) - pow2(t_ - m as i64) * epsilon) * pow2(1 - t_) + epsilon - int(1))
        }
        BoundVariant::Extended => {
            let m = m.ok_or(Error::Missing("base dimension m"))?;
            if m > t || t > n {
                return Err(Error::Domain(format!(
                    "extended bound needs m <= t <= n, got t={t}, m={m}, n={n}"
                )));
            }
            Ok((int(1) - pow2(t_ - n_) * epsilon) * pow2(m as i64 + 1 - t_) + epsilon - int(1))
        }
    }
}

/// The largest ε whose plain duality bound stays ≤ 1:
/// `(2 − 2^{1−t}) / (1 − 2^{1−n})`.
pub fn max_tight_epsilon(n: usize, t: usize) -> Result<Rational> {
    if n < 2 {
        return Err(Error::Domain("need n >= 2".into()));
    }
    Ok((int(2) - pow2(1 - t as i64)) / (int(1) - pow2(1 - n as i64)))
}
