use serde::Serialize;

use super::optimize::{maximize, minimize};
use super::report::{ser_sig, BoundReport};
use super::scalar::{critical_rate, d, h, pow0};
use crate::error::{Error, Result};

fn check_unit(name: &str, x: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::Domain(format!("{name} must lie in [0,1], got {x}")));
    }
    Ok(())
}

/// `E₀(s,p) = s − (1+s) log₂(p^{1/(1+s)} + (1−p)^{1/(1+s)})`.
pub fn gallager_e0(s: f64, p: f64) -> Result<f64> {
    check_unit("s", s)?;
    check_unit("p", p)?;
    Ok(e0(s, p))
}

pub(crate) fn e0(s: f64, p: f64) -> f64 {
    let r = 1.0 / (1.0 + s);
    s - (1.0 + s) * (pow0(p, r) + pow0(1.0 - p, r)).log2()
}

/// `max_{0≤s≤1} −sR + E₀(s,p)` and its maximizer.
pub(crate) fn e_max(r: f64, p: f64) -> (f64, f64) {
    let (s, v) = maximize(|s| -s * r + e0(s, p), 0.0, 1.0);
    // E(R,p) ≥ E_R(0,p) = 0 exactly
    if v <= 0.0 {
        (0.0, 0.0)
    } else {
        (s, v)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Reliability {
    #[serde(serialize_with = "ser_sig")]
    pub exponent: f64,
    #[serde(serialize_with = "ser_sig")]
    pub s_opt: f64,
    /// `|E(R,p) − min_q([1−h(q)−R]_+ + d(q‖p))|`.
    #[serde(serialize_with = "ser_sig")]
    pub identity_residual: f64,
    #[serde(serialize_with = "ser_sig")]
    pub critical_rate: f64,
}

/// Gallager's reliability function of the BSC, cross-checked against the
/// type-method exponent.
pub fn reliability_e(r: f64, p: f64) -> Result<Reliability> {
    check_unit("R", r)?;
    if !(0.0..=0.5).contains(&p) {
        return Err(Error::Domain(format!("p must lie in [0,1/2], got {p}")));
    }
    let (s_opt, exponent) = e_max(r, p);
    let alt = type_exponent_unchecked(r, p);
    Ok(Reliability {
        exponent,
        s_opt,
        identity_residual: (exponent - alt).abs(),
        critical_rate: critical_rate(p)?,
    })
}

fn type_exponent_unchecked(r: f64, p: f64) -> f64 {
    minimize(|q| (1.0 - h(q) - r).max(0.0) + d(q, p), 0.0, 0.5).1
}

/// `min_{0≤q≤1/2} [1−h(q)−R]_+ + d(q‖p)`.
pub fn type_exponent(r: f64, p: f64) -> Result<f64> {
    check_unit("R", r)?;
    check_unit("p", p)?;
    Ok(type_exponent_unchecked(r, p))
}

/// The same minimum restricted to the tilted family `q = p_θ`, `θ ∈ [0,1]`.
pub fn tilted_exponent(r: f64, p: f64) -> Result<f64> {
    check_unit("R", r)?;
    check_unit("p", p)?;
    Ok(minimize(
        |th| {
            let (a, b) = (pow0(p, th), pow0(1.0 - p, th));
            let q = a / (a + b);
            d(q, p) + (1.0 - h(q) - r).max(0.0)
        },
        0.0,
        1.0,
    )
    .1)
}

#[derive(Clone, Debug, Serialize)]
pub struct GallagerBound {
    /// `min_{0≤s≤1} ε^s 2^{−n(−sR+E₀(s,p))}`.
    pub min: BoundReport,
    #[serde(serialize_with = "ser_sig")]
    pub s_opt: f64,
    /// `2^{−nE(R,p)} max{ε,1}`.
    pub loose: BoundReport,
}

/// Random-coding bound on the family-average decoding error of an
/// ε-almost universal₂ family of maximum dimension `nR`.
pub fn gallager_family_bound(n: usize, r: f64, p: f64, epsilon: f64) -> Result<GallagerBound> {
    check_unit("R", r)?;
    check_unit("p", p)?;
    if !(epsilon > 0.0) {
        return Err(Error::Domain(format!("epsilon must be positive, got {epsilon}")));
    }
    let nf = n as f64;
    let le = epsilon.log2();
    // exponent is convex in s since E₀ is concave
    let (s_opt, log2_min) = minimize(|s| s * le - nf * (-s * r + e0(s, p)), 0.0, 1.0);
    let (_, e) = e_max(r, p.min(1.0 - p));
    let inputs = [("n", nf), ("R", r), ("p", p), ("epsilon", epsilon)];
    Ok(GallagerBound {
        min: BoundReport::new("gallager_min", log2_min, &inputs),
        s_opt,
        loose: BoundReport::new("gallager_loose", -nf * e + le.max(0.0), &inputs),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::scalar::renyi;

    #[test]
    fn e0_values() {
        for i in 0..=10 {
            let s = i as f64 / 10.0;
            assert!((gallager_e0(s, 0.0).unwrap() - s).abs() < 1e-15);
            assert!(gallager_e0(s, 0.5).unwrap().abs() < 1e-12);
        }
        assert!((gallager_e0(1.0, 0.1).unwrap() - (1.0 - 1.6f64.log2())).abs() < 1e-12);
        assert!((gallager_e0(1.0, 0.1).unwrap() - 0.321928).abs() < 1e-6);
        assert!(gallager_e0(1.5, 0.1).is_err());
    }

    #[test]
    fn reliability_at_zero_noise_is_one_minus_rate() {
        for i in 0..=20 {
            let r = i as f64 / 20.0;
            let rel = reliability_e(r, 0.0).unwrap();
            assert_eq!(rel.exponent, 1.0 - r);
            assert_eq!(rel.s_opt, if r < 1.0 { 1.0 } else { rel.s_opt });
        }
    }

    #[test]
    fn positive_below_capacity_zero_at_capacity() {
        for &p in &[0.01, 0.05, 0.1, 0.2, 0.4] {
            let cap = 1.0 - h(p);
            assert!(reliability_e(cap, p).unwrap().exponent < 1e-9);
            assert!(reliability_e(cap * 0.9, p).unwrap().exponent > 0.0);
            assert_eq!(reliability_e((cap + 0.05).min(1.0), p).unwrap().exponent, 0.0);
        }
        assert!(reliability_e(0.5, 0.6).is_err());
    }

    #[test]
    fn exponent_identity_over_grid() {
        let mut worst: f64 = 0.0;
        for i in 1..=9 {
            let r = i as f64 / 10.0;
            for j in 0..40 {
                let p = 0.01 + j as f64 * 0.01;
                worst = worst.max(reliability_e(r, p).unwrap().identity_residual);
            }
        }
        assert!(worst <= 1e-6, "worst residual {worst}");
    }

    #[test]
    fn tilted_family_attains_exponent_below_capacity() {
        for &p in &[0.02, 0.1, 0.25] {
            for i in 1..10 {
                let r = i as f64 / 10.0;
                if r >= 1.0 - h(p) {
                    continue;
                }
                let e = reliability_e(r, p).unwrap().exponent;
                assert!((tilted_exponent(r, p).unwrap() - e).abs() < 1e-6, "p={p} R={r}");
            }
        }
    }

    #[test]
    fn critical_rate_splits_optimizer() {
        for &p in &[0.05, 0.1, 0.2] {
            let rc = critical_rate(p).unwrap();
            assert_eq!(reliability_e(rc * 0.9, p).unwrap().s_opt, 1.0);
            let above = (rc + 1.0 - h(p)) / 2.0;
            assert!(reliability_e(above, p).unwrap().s_opt < 1.0);
        }
    }

    #[test]
    fn slope_at_origin() {
        let step = 1e-6;
        for &p in &[0.05, 0.2] {
            for &r in &[0.1, 0.5] {
                let er = |s: f64| -s * r + e0(s, p);
                assert_eq!(er(0.0), 0.0);
                let slope = (er(step) - er(0.0)) / step;
                assert!((slope - (1.0 - h(p) - r)).abs() < 1e-4);
            }
        }
        // the Rényi form tends to Shannon entropy at the same point
        assert!((renyi(1e-6, 0.2) - h(0.2)).abs() < 1e-4);
    }

    #[test]
    fn family_bound_examples() {
        let b = gallager_family_bound(50, 0.3, 0.05, 1.0).unwrap();
        let e = reliability_e(0.3, 0.05).unwrap().exponent;
        assert!((b.min.log2_value + 50.0 * e).abs() < 1e-9);
        assert_eq!(gallager_family_bound(20, 0.4, 0.5, 3.0).unwrap().min.value, 1.0);
        let b = gallager_family_bound(100, 0.5, 0.0, 3.0).unwrap();
        assert!((b.min.log2_value - (3f64.log2() - 50.0)).abs() < 1e-12);
        assert_eq!(b.s_opt, 1.0);
        for &eps in &[0.5, 1.0, 2.0, 13.0] {
            for &p in &[0.0, 0.05, 0.3] {
                let b = gallager_family_bound(40, 0.4, p, eps).unwrap();
                assert!(b.min.log2_value <= b.loose.log2_value + 1e-12);
            }
        }
    }
}
