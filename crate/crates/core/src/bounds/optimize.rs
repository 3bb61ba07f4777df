//! Bracketed 1-D search: a uniform grid to locate the basin, then ternary
//! refinement. Every evaluated point competes, so endpoint optima and flat
//! regions are handled without special cases.

pub(crate) const GRID_STEP: f64 = 1e-3;
pub(crate) const ARG_TOL: f64 = 1e-9;

fn better(v: f64, cur: f64) -> bool {
    v > cur || (cur.is_nan() && !v.is_nan())
}

/// `(argmax, max)` of a unimodal `f` on `[lo, hi]`.
pub(crate) fn maximize<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64) -> (f64, f64) {
    debug_assert!(lo <= hi);
    let steps = (((hi - lo) / GRID_STEP).ceil() as usize).max(1);
    let at = |i: usize| {
        if i == steps {
            hi
        } else {
            lo + (hi - lo) * i as f64 / steps as f64
        }
    };
    let mut best = (lo, f(lo));
    let mut best_i = 0;
    for i in 1..=steps {
        let x = at(i);
        let v = f(x);
        if better(v, best.1) {
            best = (x, v);
            best_i = i;
        }
    }
    let (mut a, mut b) = (at(best_i.saturating_sub(1)), at((best_i + 1).min(steps)));
    while b - a > ARG_TOL {
        let m1 = a + (b - a) / 3.0;
        let m2 = b - (b - a) / 3.0;
        let (v1, v2) = (f(m1), f(m2));
        if better(v1, best.1) {
            best = (m1, v1);
        }
        if better(v2, best.1) {
            best = (m2, v2);
        }
        if v1 < v2 {
            a = m1;
        } else {
            b = m2;
        }
    }
    let mid = 0.5 * (a + b);
    let v = f(mid);
    if better(v, best.1) {
        best = (mid, v);
    }
    best
}

/// `(argmin, min)` of a unimodal `f` on `[lo, hi]`.
pub(crate) fn minimize<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64) -> (f64, f64) {
    let (x, v) = maximize(|x| -f(x), lo, hi);
    (x, -v)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_interior_and_endpoint_optima() {
        let (x, v) = maximize(|x| -(x - 0.3141592).powi(2), 0.0, 1.0);
        assert!((x - 0.3141592).abs() < 1e-8);
        assert!(v.abs() < 1e-15);
        let (x, v) = maximize(|x| x, 0.0, 1.0);
        assert_eq!((x, v), (1.0, 1.0));
        let (x, v) = minimize(|x| x * 2.0, 0.0, 0.5);
        assert_eq!((x, v), (0.0, 0.0));
    }

    #[test]
    fn tolerates_infinite_values() {
        let (x, v) = minimize(|x| if x == 0.0 { 1.0 } else { f64::INFINITY }, 0.0, 0.5);
        assert_eq!((x, v), (0.0, 1.0));
    }
}
