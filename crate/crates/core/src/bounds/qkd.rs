use serde::{Deserialize, Serialize};

use super::decoding::log2_weighted_sum;
use super::exponent::e_max;
use super::optimize::maximize;
use super::report::BoundReport;
use super::scalar::{log2_eta, renyi};
use crate::error::{Error, Result};

/// Ways of bounding Eve's information after error correction by `C₁` and
/// privacy amplification by a random subcode `C₂`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Approach {
    /// Phase-error correction with a general phase-error weight distribution.
    PhaseSum,
    /// Phase-error correction over an iid Pauli channel.
    PhaseIid,
    /// A fixed code pair whose permuted family is `(n+1)`-almost dual universal₂.
    PhaseDeterministic,
    /// δ-biased route, trace distance.
    DeltaBiasedD1,
    /// δ-biased route, Holevo information via `η_n`.
    DeltaBiasedChiB,
    /// δ-biased route, Holevo information via the Rényi exponent.
    DeltaBiasedChiC,
}

impl Approach {
    pub const ALL: [Approach; 6] = [
        Approach::PhaseSum,
        Approach::PhaseIid,
        Approach::PhaseDeterministic,
        Approach::DeltaBiasedD1,
        Approach::DeltaBiasedChiB,
        Approach::DeltaBiasedChiC,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Approach::PhaseSum => "phase_sum",
            Approach::PhaseIid => "phase_iid",
            Approach::PhaseDeterministic => "phase_deterministic",
            Approach::DeltaBiasedD1 => "delta_biased_d1",
            Approach::DeltaBiasedChiB => "delta_biased_chi_b",
            Approach::DeltaBiasedChiC => "delta_biased_chi_c",
        }
    }
}

impl std::str::FromStr for Approach {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Approach::ALL
            .into_iter()
            .find(|a| a.as_str() == s.replace('-', "_"))
            .ok_or_else(|| Error::Domain(format!("unknown approach {s:?}")))
    }
}

#[derive(Clone, Debug)]
pub struct QkdParams {
    pub n: usize,
    /// Key (message) length `l`.
    pub l: f64,
    /// Sacrifice rate `S`.
    pub s: f64,
    pub p_ph: Option<f64>,
    /// `log₂` of the phase-error weight masses `k = 0..=n` (required by
    /// [`Approach::PhaseSum`]); see [`crate::gf2::WeightDistribution::log2_masses`] and
    /// [`super::binomial_log2_masses`].
    pub log2_weights: Option<Vec<f64>>,
    pub epsilon: f64,
}

/// `log₂ 2^{−nE/2}`.
fn log2_half_exp(n: f64, e: f64) -> f64 {
    -0.5 * n * e
}

/// Evaluates every formula belonging to `approach`: a trace-distance bound
/// and/or a Holevo bound.
pub fn qkd_bounds(params: &QkdParams, approach: Approach) -> Result<Vec<BoundReport>> {
    let QkdParams { n, l, s, epsilon, .. } = *params;
    if !(0.0..=1.0).contains(&s) {
        return Err(Error::Domain(format!("S must lie in [0,1], got {s}")));
    }
    if !(epsilon > 0.0) || l < 0.0 || n == 0 {
        return Err(Error::Domain("need epsilon > 0, l >= 0, n >= 1".into()));
    }
    let nf = n as f64;
    let le = epsilon.log2();
    let mut inputs = vec![("n", nf), ("l", l), ("S", s), ("epsilon", epsilon)];
    if let Some(p) = params.p_ph {
        inputs.push(("p_ph", p));
    }
    let need_eps_ge1 = || -> Result<()> {
        if epsilon < 1.0 {
            return Err(Error::Domain(format!(
                "approach {} requires epsilon >= 1, got {epsilon}",
                approach.as_str()
            )));
        }
        Ok(())
    };
    let exponent = || -> Result<f64> {
        let p = params.p_ph.ok_or(Error::Missing("phase error rate p_ph"))?;
        if !(0.0..=0.5).contains(&p) {
            return Err(Error::Domain(format!("p_ph must lie in [0,1/2], got {p}")));
        }
        Ok(e_max(1.0 - s, p).1)
    };
    let sqrt2_cubed = 1.5;
    let out = match approach {
        Approach::PhaseSum => {
            need_eps_ge1()?;
            let w = params
                .log2_weights
                .as_ref()
                .ok_or(Error::Missing("phase error weight distribution"))?;
            if w.len() != n + 1 {
                return Err(Error::LengthMismatch { expected: n + 1, got: w.len() });
            }
            let inner = le + log2_weighted_sum(w, s, 0);
            vec![
                BoundReport::new("phase_sum_trace", sqrt2_cubed + 0.5 * inner, &inputs),
                BoundReport::new("phase_sum_holevo", log2_eta(l, inner), &inputs),
            ]
        }
        Approach::PhaseIid => {
            let e = exponent()?;
            vec![
                BoundReport::new(
                    "phase_iid_trace",
                    log2_half_exp(nf, e) + sqrt2_cubed + 0.5 * le.max(0.0),
                    &inputs,
                ),
                BoundReport::new("phase_iid_holevo", log2_eta(l, -nf * e + le.max(0.0)), &inputs),
            ]
        }
        Approach::PhaseDeterministic => {
            let e = exponent()?;
            let ln1 = (nf + 1.0).log2();
            vec![
                BoundReport::new(
                    "deterministic_trace",
                    0.5 * ln1 + log2_half_exp(nf, e) + sqrt2_cubed,
                    &inputs,
                ),
                BoundReport::new("deterministic_holevo", log2_eta(l, ln1 - nf * e), &inputs),
            ]
        }
        Approach::DeltaBiasedD1 | Approach::DeltaBiasedChiB => {
            need_eps_ge1()?;
            let e = exponent()?;
            let lv = (4.0 + (nf + 1.0).sqrt() * epsilon.sqrt()).log2() + log2_half_exp(nf, e);
            if approach == Approach::DeltaBiasedD1 {
                vec![BoundReport::new("delta_biased_trace", lv, &inputs)]
            } else {
                vec![BoundReport::new("delta_biased_holevo", log2_eta(nf, lv), &inputs)]
            }
        }
        Approach::DeltaBiasedChiC => {
            need_eps_ge1()?;
            let p = params.p_ph.ok_or(Error::Missing("phase error rate p_ph"))?;
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::Domain(format!("p_ph must lie in [0,1], got {p}")));
            }
            let (_, rate) = maximize(
                |t| if t == 0.0 { 0.0 } else { t / (2.0 - t) * (s - renyi(t, p)) },
                0.0,
                1.0,
            );
            let u = epsilon * (nf + 1.0) / (4.0 * std::f64::consts::LN_2) + nf;
            vec![BoundReport::new(
                "delta_biased_holevo_renyi",
                1.0 + log2_eta(u, 1.0 - nf * rate),
                &inputs,
            )]
        }
    };
    Ok(out)
}

/// Ratio of the iid phase-error trace bound to the δ-biased one:
/// `2^{3/2}√ε / (4 + √(n+1)√ε)`.
pub fn approach_ratio(n: usize, epsilon: f64) -> Result<f64> {
    if n < 1 || !(epsilon >= 1.0) {
        return Err(Error::Domain(format!("need n >= 1 and epsilon >= 1, got n={n}, epsilon={epsilon}")));
    }
    Ok(2f64.powf(1.5) * epsilon.sqrt() / (4.0 + ((n + 1) as f64).sqrt() * epsilon.sqrt()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::scalar::h;
    use crate::gf2::WeightDistribution;

    fn params(n: usize, s: f64, p: f64, eps: f64) -> QkdParams {
        QkdParams {
            n,
            l: n as f64 * (1.0 - s),
            s,
            p_ph: Some(p),
            log2_weights: None,
            epsilon: eps,
        }
    }

    #[test]
    fn noiseless_phase_sum() {
        let mut q = params(20, 0.25, 0.0, 2.0);
        q.log2_weights = Some(WeightDistribution::point_mass(20, 0).log2_masses());
        let r = qkd_bounds(&q, Approach::PhaseSum).unwrap();
        let expect = 2.0 * 2f64.sqrt() * (2.0 * 2f64.powf(-20.0 * 0.25)).sqrt();
        assert!((r[0].value - expect).abs() < 1e-12);
        assert_eq!(r[0].formula_id, "phase_sum_trace");
        q.log2_weights = None;
        assert!(qkd_bounds(&q, Approach::PhaseSum).is_err());
    }

    #[test]
    fn ratio_matches_bound_quotient() {
        for &eps in &[1.0, 2.0, 7.0] {
            for &n in &[10usize, 1000, 100_000] {
                let q = params(n, 0.4, 0.05, eps);
                let a = &qkd_bounds(&q, Approach::PhaseIid).unwrap()[0];
                let b = &qkd_bounds(&q, Approach::DeltaBiasedD1).unwrap()[0];
                let ratio = approach_ratio(n, eps).unwrap();
                assert!(((a.log2_value - b.log2_value) - ratio.log2()).abs() < 1e-9);
            }
        }
        let r = approach_ratio(1_000_000, 1.0).unwrap();
        assert!((r - 2f64.powf(1.5) / (4.0 + 1_000_001f64.sqrt())).abs() < 1e-15);
        assert!(r < 3e-3);
        assert!(approach_ratio(5, 0.5).is_err());
    }

    #[test]
    fn phase_bounds_beat_delta_biased_for_large_n() {
        let p = 0.05;
        let s = h(p) + 0.1;
        for &eps in &[1.0, 2.0] {
            for &n in &[1000usize, 10_000, 100_000] {
                let q = params(n, s, p, eps);
                let pi = qkd_bounds(&q, Approach::PhaseIid).unwrap();
                let d1 = qkd_bounds(&q, Approach::DeltaBiasedD1).unwrap();
                let chib = qkd_bounds(&q, Approach::DeltaBiasedChiB).unwrap();
                assert!(pi[0].log2_value < d1[0].log2_value);
                assert!(pi[1].log2_value < chib[0].log2_value);
            }
        }
    }

    #[test]
    fn renyi_route_is_finite_and_positive() {
        let q = params(1000, 0.5, 0.05, 1.0);
        let r = qkd_bounds(&q, Approach::DeltaBiasedChiC).unwrap();
        assert!(r[0].log2_value.is_finite());
        assert!(r[0].value > 0.0);
    }

    #[test]
    fn phase_sum_vanishes_as_n_grows() {
        let s = h(0.05) + 0.1;
        let mut prev = f64::INFINITY;
        for &n in &[100usize, 1000, 10_000, 100_000] {
            let mut q = params(n, s, 0.05, 1.0);
            q.log2_weights = Some(crate::bounds::binomial_log2_masses(n, 0.05).unwrap());
            let v = qkd_bounds(&q, Approach::PhaseSum).unwrap()[0].log2_value;
            assert!(v < prev);
            prev = v;
        }
    }

    #[test]
    fn approach_names_round_trip() {
        for a in Approach::ALL {
            assert_eq!(a.as_str().parse::<Approach>().unwrap(), a);
        }
        assert!("nope".parse::<Approach>().is_err());
    }
}
