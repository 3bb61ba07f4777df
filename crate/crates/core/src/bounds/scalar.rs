use crate::error::{Error, Result};

fn check_prob(name: &str, p: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::Domain(format!("{name} must lie in [0,1], got {p}")));
    }
    Ok(())
}

/// `x^e` with the convention `0^e = 0` for every `e` (including `e = 0`).
pub(crate) fn pow0(x: f64, e: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        x.powf(e)
    }
}

/// `−x log₂ x` with `0 log 0 = 0`.
fn xlogx(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        -x * x.log2()
    }
}

/// Binary entropy in bits.
pub fn binary_entropy(p: f64) -> Result<f64> {
    check_prob("p", p)?;
    Ok(h(p))
}

pub(crate) fn h(p: f64) -> f64 {
    // ln_1p keeps the (1−p) term accurate when p is tiny
    let tail = if p <= 0.0 || p >= 1.0 {
        0.0
    } else {
        -(1.0 - p) * (-p).ln_1p() / std::f64::consts::LN_2
    };
    xlogx(p) + tail
}

/// `d(q‖p)` in bits; `+∞` when `q` puts mass where `p` has none.
pub fn divergence(q: f64, p: f64) -> Result<f64> {
    check_prob("q", q)?;
    check_prob("p", p)?;
    Ok(d(q, p))
}

pub(crate) fn d(q: f64, p: f64) -> f64 {
    let term = |a: f64, b: f64| {
        if a == 0.0 {
            0.0
        } else if b == 0.0 {
            f64::INFINITY
        } else {
            a * (a / b).log2()
        }
    };
    (term(q, p) + term(1.0 - q, 1.0 - p)).max(0.0)
}

/// `η_l(x)`: `h(x) + l x` for `x ≤ 1/2`, `1 + l x` above.
pub fn eta(l: f64, x: f64) -> Result<f64> {
    if l < 0.0 || x < 0.0 || x.is_nan() || l.is_nan() {
        return Err(Error::Domain(format!("eta needs l, x >= 0, got l={l}, x={x}")));
    }
    Ok(if x <= 0.5 { h(x) + l * x } else { 1.0 + l * x })
}

/// `log₂ η_l(2^{log2_x})`, accurate when `2^{log2_x}` underflows.
pub(crate) fn log2_eta(l: f64, log2_x: f64) -> f64 {
    if log2_x == f64::NEG_INFINITY {
        return f64::NEG_INFINITY;
    }
    if log2_x > -60.0 {
        let x = log2_x.exp2();
        return if x <= 0.5 { h(x) + l * x } else { 1.0 + l * x }.log2();
    }
    // h(x) = x (log₂(1/x) + log₂ e) + O(x²)
    log2_x + (-log2_x + std::f64::consts::LOG2_E + l).log2()
}

/// `H_{1−s}(p) = (1/s) log₂(p^{1−s} + (1−p)^{1−s})`, zero-mass terms dropped.
pub fn renyi_h(s: f64, p: f64) -> Result<f64> {
    if !(s > 0.0 && s <= 1.0) {
        return Err(Error::Domain(format!("s must lie in (0,1], got {s}")));
    }
    check_prob("p", p)?;
    Ok(renyi(s, p))
}

pub(crate) fn renyi(s: f64, p: f64) -> f64 {
    (pow0(p, 1.0 - s) + pow0(1.0 - p, 1.0 - s)).log2() / s
}

/// Tilted distribution `p_θ = p^θ / (p^θ + (1−p)^θ)`, with `0^θ = 0`.
pub fn p_theta(theta: f64, p: f64) -> Result<f64> {
    if theta < 0.0 {
        return Err(Error::Domain(format!("theta must be >= 0, got {theta}")));
    }
    check_prob("p", p)?;
    let (a, b) = (pow0(p, theta), pow0(1.0 - p, theta));
    Ok(a / (a + b))
}

/// `ψ(θ) = log₂(p^θ + (1−p)^θ)`.
pub fn psi(theta: f64, p: f64) -> Result<f64> {
    if theta < 0.0 {
        return Err(Error::Domain(format!("theta must be >= 0, got {theta}")));
    }
    check_prob("p", p)?;
    Ok((pow0(p, theta) + pow0(1.0 - p, theta)).log2())
}

/// `ψ′(θ) = p_θ log₂ p + (1 − p_θ) log₂(1 − p)`.
pub fn psi_prime(theta: f64, p: f64) -> Result<f64> {
    let pt = p_theta(theta, p)?;
    let term = |w: f64, x: f64| if w == 0.0 { 0.0 } else { w * x.log2() };
    Ok(term(pt, p) + term(1.0 - pt, 1.0 - p))
}

/// `R_c = 1 − h(p_{1/2})`.
pub fn critical_rate(p: f64) -> Result<f64> {
    Ok(1.0 - h(p_theta(0.5, p)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn entropy_values() {
        assert_eq!(binary_entropy(0.5).unwrap(), 1.0);
        assert_eq!(binary_entropy(0.0).unwrap(), 0.0);
        assert_eq!(binary_entropy(1.0).unwrap(), 0.0);
        assert!((binary_entropy(0.25).unwrap() - 0.811278).abs() < 1e-6);
        assert!(binary_entropy(-0.1).is_err());
        assert!(binary_entropy(1.5).is_err());
    }

    #[test]
    fn divergence_values() {
        assert!((divergence(0.5, 0.25).unwrap() - 0.207519).abs() < 1e-6);
        for i in 0..=99 {
            let p = i as f64 / 99.0;
            assert_eq!(divergence(p, p).unwrap(), 0.0);
            for j in 0..=99 {
                assert!(divergence(j as f64 / 99.0, p).unwrap() >= 0.0);
            }
        }
        assert_eq!(divergence(0.3, 0.0).unwrap(), f64::INFINITY);
        assert_eq!(divergence(0.0, 0.0).unwrap(), 0.0);
        assert_eq!(divergence(0.0, 0.5).unwrap(), 1.0);
    }

    #[test]
    fn eta_branches() {
        assert_eq!(eta(5.0, 0.0).unwrap(), 0.0);
        assert_eq!(eta(4.0, 0.5).unwrap(), 3.0);
        assert_eq!(eta(7.0, 1.0).unwrap(), 8.0);
        assert!(eta(-1.0, 0.1).is_err());
        for &lx in &[-1.0, -10.0, -59.0, -61.0, -200.0] {
            let x: f64 = f64::exp2(lx);
            let direct = eta(3.0, x).unwrap().log2();
            assert!((log2_eta(3.0, lx) - direct).abs() < 1e-9, "{lx}");
        }
    }

    #[test]
    fn renyi_limits() {
        for &s in &[0.1, 0.5, 1.0] {
            assert!((renyi_h(s, 0.5).unwrap() - 1.0).abs() < 1e-12);
            assert_eq!(renyi_h(s, 0.0).unwrap(), 0.0);
        }
        for &p in &[0.05, 0.2, 0.4] {
            assert!((renyi_h(1e-5, p).unwrap() - h(p)).abs() < 1e-4);
        }
        assert!(renyi_h(0.0, 0.2).is_err());
    }

    #[test]
    fn tilted_family_identities() {
        for &p in &[0.01, 0.1, 0.3, 0.45] {
            for i in 0..=100 {
                let th = i as f64 / 100.0;
                let pt = p_theta(th, p).unwrap();
                let dpsi = psi_prime(th, p).unwrap();
                assert!((dpsi + d(pt, p) + h(pt)).abs() < 1e-8);
                assert!((h(pt) - (-th * dpsi + psi(th, p).unwrap())).abs() < 1e-8);
                if i > 0 && i < 100 {
                    let step = 1e-6;
                    let fd = (psi(th + step, p).unwrap() - psi(th - step, p).unwrap()) / (2.0 * step);
                    assert!((fd - dpsi).abs() < 1e-6);
                }
            }
        }
        assert_eq!(p_theta(0.0, 0.0).unwrap(), 0.0);
    }
}
