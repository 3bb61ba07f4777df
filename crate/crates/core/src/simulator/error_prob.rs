use num_traits::{One, Zero};
use rand::Rng;
use rayon::prelude::*;
use statrs::distribution::{ContinuousCDF, Normal};

use super::decode::{CosetDecoder, SyndromeDecoder};
use super::SimResult;
use crate::bounds::{gallager_family_bound, weighted_decoding_bound_log2, DecodingVariant, SumStart};
use crate::error::{Error, Result};
use crate::gf2::LinearCode;
use crate::rational::{display, to_f64, Rational};
use crate::universality::{epsilon_universal, CodeFamily, Convention};

/// `N_w`: how many weight-`w` error patterns the minimum-distance decoder
/// gets wrong. With `c2`, decoding only has to land in the right coset of
/// `C₁/C₂`.
pub fn wrong_decodings(c1: &LinearCode, c2: Option<&LinearCode>) -> Result<Vec<u64>> {
    let n = c1.len();
    let mut counts = vec![0u64; n + 1];
    match c2 {
        None => {
            let dec = SyndromeDecoder::new(c1)?;
            for e in 0..1u64 << n {
                if dec.leader(e) != e {
                    counts[e.count_ones() as usize] += 1;
                }
            }
        }
        Some(c2) => {
            let dec = CosetDecoder::new(c1, c2)?;
            for e in 0..1u64 << n {
                if !dec.corrects(e) {
                    counts[e.count_ones() as usize] += 1;
                }
            }
        }
    }
    Ok(counts)
}

fn check_p(p: &Rational) -> Result<()> {
    if *p < Rational::zero() || *p > Rational::one() {
        return Err(Error::Domain(format!("p must lie in [0,1], got {}", display(p))));
    }
    Ok(())
}

/// `Σ_w N_w p^w (1−p)^{n−w}`, exactly.
pub fn error_prob_from_counts(counts: &[u64], p: &Rational) -> Rational {
    let n = counts.len() - 1;
    let q = Rational::one() - p;
    counts
        .iter()
        .enumerate()
        .filter(|(_, &c)| c > 0)
        .map(|(w, &c)| Rational::from_integer(c.into()) * num_traits::pow(p.clone(), w) * num_traits::pow(q.clone(), n - w))
        .sum()
}

pub fn error_prob_from_counts_f64(counts: &[u64], p: f64) -> f64 {
    let n = counts.len() - 1;
    counts
        .iter()
        .enumerate()
        .filter(|(_, &c)| c > 0)
        .map(|(w, &c)| c as f64 * p.powi(w as i32) * (1.0 - p).powi((n - w) as i32))
        .sum()
}

/// Decoding error probability over a BSC(p) for a code (or a coset code
/// `C₁/C₂`), enumerating all `2ⁿ` error patterns.
pub fn exact_error_prob(c1: &LinearCode, c2: Option<&LinearCode>, p: &Rational) -> Result<Rational> {
    check_p(p)?;
    Ok(error_prob_from_counts(&wrong_decodings(c1, c2)?, p))
}

fn attach_bounds(n: usize, r: f64, p: f64, epsilon: f64, checked: f64) -> Result<Vec<crate::bounds::BoundReport>> {
    let g = gallager_family_bound(n, r, p, epsilon)?;
    let w = crate::bounds::binomial_log2_masses(n, p)?;
    let sum = weighted_decoding_bound_log2(&w, r, epsilon.max(1.0), DecodingVariant::Sum(SumStart::FromOne))?;
    Ok([g.min, g.loose, sum]
        .into_iter()
        .map(|b| b.with_dominated(checked))
        .collect())
}

/// Exact average of `P_e(C)` over an enumerable family, against the
/// random-coding bounds at rate `t_max/n` and the family's measured ε.
pub fn family_average_exact(fam: &CodeFamily, p: &Rational) -> Result<SimResult> {
    check_p(p)?;
    let n = fam.n();
    let avg: Rational = fam
        .members()
        .par_iter()
        .zip(fam.weights())
        .map(|(c, &w)| -> Result<Rational> {
            Ok(exact_error_prob(c, None, p)? * Rational::from_integer(w.into()))
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .sum::<Rational>()
        / Rational::from_integer(fam.total_weight().into());
    let eps = to_f64(&epsilon_universal(fam, Convention::MaxDim)?.epsilon);
    let r = fam.t_max() as f64 / n as f64;
    let pf = to_f64(p);
    let value = to_f64(&avg);
    let mut res = SimResult::new("family_decoding_error", n, &[("p", pf), ("R", r), ("epsilon", eps)], value);
    res.exact_value = Some(display(&avg));
    res.bounds = attach_bounds(n, r, pf, eps, value)?;
    Ok(res)
}

/// Two-sided 99% normal interval for a sample mean.
pub(crate) fn interval99(values: &[f64]) -> (f64, [f64; 2]) {
    let k = values.len() as f64;
    let mean = values.iter().sum::<f64>() / k;
    let var = if values.len() > 1 {
        values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (k - 1.0)
    } else {
        0.0
    };
    let z = Normal::new(0.0, 1.0).expect("unit normal").inverse_cdf(0.995);
    let half = z * (var / k).sqrt();
    (mean, [mean - half, mean + half])
}

/// Sampled family average with exact per-member error probabilities. The
/// caller states the rate and ε the sampler's family satisfies; bound checks
/// use the upper confidence limit.
pub fn family_average_mc<R, F>(
    n: usize,
    r: f64,
    epsilon: f64,
    p: &Rational,
    samples: usize,
    rng: &mut R,
    mut sampler: F,
) -> Result<SimResult>
where
    R: Rng + ?Sized,
    F: FnMut(&mut R) -> LinearCode,
{
    check_p(p)?;
    if samples == 0 {
        return Err(Error::Domain("need at least one sample".into()));
    }
    let codes: Vec<LinearCode> = (0..samples).map(|_| sampler(rng)).collect();
    if let Some(c) = codes.iter().find(|c| c.len() != n) {
        return Err(Error::LengthMismatch { expected: n, got: c.len() });
    }
    let pf = to_f64(p);
    let values = codes
        .par_iter()
        .map(|c| Ok(to_f64(&exact_error_prob(c, None, p)?)))
        .collect::<Result<Vec<f64>>>()?;
    let (mean, ci) = interval99(&values);
    let mut res = SimResult::new("family_decoding_error", n, &[("p", pf), ("R", r), ("epsilon", epsilon)], mean);
    res.interval = Some(ci);
    res.samples = Some(samples);
    res.bounds = attach_bounds(n, r, pf, epsilon, ci[1])?;
    Ok(res)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    #[test]
    fn repetition_error_probability() {
        let p = ratio(1, 10);
        let pe = exact_error_prob(&LinearCode::repetition(3), None, &p).unwrap();
        assert_eq!(pe, ratio(28, 1000));
        assert_eq!(exact_error_prob(&LinearCode::repetition(3), None, &Rational::zero()).unwrap(), Rational::zero());
    }

    #[test]
    fn no_redundancy_fails_on_every_error() {
        let p = ratio(1, 7);
        let pe = exact_error_prob(&LinearCode::full(5), None, &p).unwrap();
        assert_eq!(pe, Rational::one() - num_traits::pow(ratio(6, 7), 5));
    }

    #[test]
    fn coset_decoding_is_more_forgiving() {
        let p = ratio(1, 5);
        let c1 = LinearCode::even_weight(4);
        let c2 = LinearCode::repetition(4);
        let plain = exact_error_prob(&c1, None, &p).unwrap();
        let coset = exact_error_prob(&c1, Some(&c2), &p).unwrap();
        assert!(coset <= plain);
        let same = exact_error_prob(&c1, Some(&LinearCode::zero(4)), &p).unwrap();
        assert_eq!(same, plain);
    }

    #[test]
    fn float_matches_exact() {
        let c = LinearCode::parse("6 3\n110100\n011010\n101001").unwrap();
        let counts = wrong_decodings(&c, None).unwrap();
        let exact = to_f64(&error_prob_from_counts(&counts, &ratio(3, 40)));
        assert!((exact - error_prob_from_counts_f64(&counts, 0.075)).abs() < 1e-15);
    }

    #[test]
    fn zero_noise_family_average() {
        let fam = CodeFamily::from_hash_family(&crate::hashfam::HashFamily::modified_toeplitz(6, 3).unwrap()).unwrap();
        let r = family_average_exact(&fam, &Rational::zero()).unwrap();
        assert_eq!(r.value, 0.0);
        assert!(r.holds(0.0));
    }

    #[test]
    fn sampled_interval_brackets_mean() {
        let (m, ci) = interval99(&[0.1, 0.2, 0.3]);
        assert!((m - 0.2).abs() < 1e-15);
        assert!(ci[0] < m && m < ci[1]);
        assert!((ci[1] - m - 2.575829 * 0.1 / 3f64.sqrt()).abs() < 1e-6);
    }
}
