//! The acceptance suite as library code, so the test target and the CLI
//! share one implementation. Every check is seeded and tolerances are fixed
//! here.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::bounds::{
    approach_ratio, binary_entropy, binomial_log2_masses, qkd_bounds, reliability_e, Approach, QkdParams,
};
use crate::cqstate::{
    code_family_bias, code_indicator_spectrum, d1_distance, h2_d2_hmin, pa_bound_check, CQState,
    DensityOperator, PauliChannel,
};
use crate::error::Result;
use crate::gf2::{BitVector, LinearCode};
use crate::hashfam::HashFamily;
use crate::rational::{display, int, pow2, ratio};
use crate::simulator::{counterexample_leakage, family_average_mc, wiretap_eval};
use crate::universality::{
    counterexample_family, duality_bound, epsilon_dual_universal, epsilon_floor, epsilon_universal,
    membership_probabilities, optimal_family, search_permuted_code, tight_family, BoundVariant, CodeFamily,
    Convention, CounterexampleBase, SearchMode,
};

/// `E_r d₂` against `ε 2^{−H₂}`, and the entropy relations on the same states.
pub const PA_TOL: f64 = 1e-9;
/// `d₂(ρ * P^{W_C}) = 2^{−m} d₂(hash marginal)`.
pub const CHAIN_TOL: f64 = 1e-10;
/// Two independent optimizations of the reliability function.
pub const IDENTITY_TOL: f64 = 1e-6;
/// Exact leakage versus its bounds, and "zero" leakage.
pub const WIRETAP_TOL: f64 = 1e-12;

#[derive(Clone, Debug, Serialize)]
pub struct CriterionReport {
    pub id: u8,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    #[serde(skip)]
    pub seconds: f64,
}

impl CriterionReport {
    pub fn line(&self) -> String {
        format!(
            "{} [{}] {} ({:.2}s): {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.seconds,
            self.detail
        )
    }
}

pub const CRITERIA: [(u8, &str); 9] = [
    (1, "modified Toeplitz exactness"),
    (2, "duality bound soundness and tightness"),
    (3, "small-bias equivalences"),
    (4, "privacy amplification bound"),
    (5, "random-coding decoding bounds"),
    (6, "wiretap exactness"),
    (7, "leaky universal family"),
    (8, "permuted-code search"),
    (9, "approach comparison"),
];

/// Runs criterion `id` (1–9) with `seed`.
pub fn run_criterion(id: u8, seed: u64) -> Result<CriterionReport> {
    let start = Instant::now();
    let (passed, detail) = match id {
        1 => modified_toeplitz_exactness()?,
        2 => duality_soundness(seed)?,
        3 => small_bias(seed)?,
        4 => privacy_amplification(seed)?,
        5 => decoding_bounds(seed)?,
        6 => wiretap_exactness()?,
        7 => leaky_family()?,
        8 => permuted_search(seed)?,
        9 => approach_comparison()?,
        _ => {
            return Err(crate::Error::Domain(format!("unknown criterion {id}")));
        }
    };
    let name = CRITERIA[id as usize - 1].1;
    Ok(CriterionReport {
        id,
        name,
        passed,
        detail,
        seconds: start.elapsed().as_secs_f64(),
    })
}

pub fn run_all(seed: u64) -> Result<Vec<CriterionReport>> {
    CRITERIA.iter().map(|&(id, _)| run_criterion(id, seed)).collect()
}

type Outcome = Result<(bool, String)>;

fn modified_toeplitz_exactness() -> Outcome {
    let mut cases = 0;
    let mut bad = Vec::new();
    for n in 2..=8 {
        for m in 1..=4.min(n - 1) {
            let fam = CodeFamily::from_hash_family(&HashFamily::modified_toeplitz(n, m)?)?;
            let e = epsilon_universal(&fam, Convention::MinDim)?.epsilon;
            let d = epsilon_dual_universal(&fam, Convention::MinDim)?.epsilon;
            cases += 1;
            if e != int(1) || d != int(1) {
                bad.push(format!("(n={n},m={m}): eps={} dual={}", display(&e), display(&d)));
            }
        }
    }
    Ok((
        bad.is_empty(),
        if bad.is_empty() {
            format!("{cases} (n,m) pairs: eps = dual eps = 1 exactly")
        } else {
            bad.join("; ")
        },
    ))
}

fn random_family<R: Rng>(rng: &mut R) -> Result<CodeFamily> {
    let n = rng.gen_range(2..=10);
    let lo = rng.gen_range(1..=n);
    let hi = rng.gen_range(lo..=n);
    let size = rng.gen_range(1..=12);
    let members = (0..size)
        .map(|_| {
            let t = rng.gen_range(lo..=hi);
            LinearCode::random(n, t, rng)
        })
        .collect::<Result<_>>()?;
    CodeFamily::uniform(members)
}

fn duality_soundness(seed: u64) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut fails = Vec::new();
    for i in 0..1000 {
        let fam = random_family(&mut rng)?;
        let r = epsilon_universal(&fam, Convention::MinDim)?;
        let d = epsilon_dual_universal(&fam, Convention::MinDim)?;
        let bound = duality_bound(&r.epsilon, r.t_min, fam.n(), None, BoundVariant::Plain)?;
        if d.max_probability > bound {
            fails.push(format!("family {i}"));
        }
    }
    // equality of the bound at its extremes and in between
    let (n, t) = (6, 3);
    let x: BitVector = "101100".parse()?;
    let floor = epsilon_floor(n, t);
    for eps in [floor.clone(), int(1), ratio(3, 2), crate::universality::max_tight_epsilon(n, t)?] {
        let fam = tight_family(n, t, &eps, &x)?;
        let got = epsilon_universal(&fam, Convention::MinDim)?.epsilon;
        let p = duality_bound(&eps, t, n, None, BoundVariant::Plain)?;
        let probs = membership_probabilities(&fam.dual())?;
        if got != eps || probs[x.to_u64().unwrap_or(0) as usize] != p {
            fails.push(format!("tight family at eps={}", display(&eps)));
        }
    }
    // optimal families have optimal duals
    for n in 2..=6 {
        for t in 1..n {
            let fam = optimal_family(n, t)?;
            let e = epsilon_universal(&fam, Convention::MinDim)?.epsilon;
            let d = epsilon_dual_universal(&fam, Convention::MinDim)?.epsilon;
            if e != epsilon_floor(n, t) || d != epsilon_floor(n, n - t) {
                fails.push(format!("optimal family (n={n},t={t})"));
            }
        }
    }
    // universal₂ families are 2-almost dual universal₂
    for n in 2..=8 {
        for m in 1..=3.min(n - 1) {
            let fam = CodeFamily::from_hash_family(&HashFamily::modified_toeplitz(n, m)?)?;
            let t = n - m;
            let d = epsilon_dual_universal(&fam, Convention::MinDim)?;
            let cap = pow2(1 - t as i64) - pow2(1 - n as i64);
            if d.max_probability > cap || d.epsilon > int(2) {
                fails.push(format!("universal family (n={n},m={m})"));
            }
        }
    }
    Ok((
        fails.is_empty(),
        if fails.is_empty() {
            "1000 random families sound; tight family equal at 4 eps values; optimal and eps=1 families verified".into()
        } else {
            fails.join("; ")
        },
    ))
}

/// Every family constructor, at small sizes.
fn constructor_families(n: usize, rng: &mut ChaCha8Rng) -> Result<Vec<(String, CodeFamily)>> {
    let mut out = Vec::new();
    for m in 1..=3.min(n - 1) {
        out.push((format!("toeplitz({n},{m})"), CodeFamily::from_hash_family(&HashFamily::toeplitz(n, m)?)?));
        out.push((
            format!("modified_toeplitz({n},{m})"),
            CodeFamily::from_hash_family(&HashFamily::modified_toeplitz(n, m)?)?,
        ));
        if n * m <= 12 {
            out.push((
                format!("random_linear({n},{m})"),
                CodeFamily::from_hash_family(&HashFamily::random_linear(n, m)?)?,
            ));
        }
    }
    if n <= 6 {
        for t in 1..n {
            out.push((format!("optimal({n},{t})"), optimal_family(n, t)?));
        }
        if n >= 3 {
            let t = n / 2;
            let x = loop {
                let x = BitVector::random(n, rng);
                if !x.is_zero() {
                    break x;
                }
            };
            out.push((format!("tight({n},{t})"), tight_family(n, t, &int(1), &x)?));
        }
    }
    if (2..=6).contains(&n) {
        out.push((
            format!("counterexample({n})"),
            counterexample_family(n, CounterexampleBase::Exhaustive { m: 1 })?,
        ));
    }
    Ok(out)
}

fn small_bias(seed: u64) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut fails = Vec::new();
    let mut codes = 0;
    for n in 1..=12 {
        for t in 0..=n {
            for _ in 0..3 {
                let c = LinearCode::random(n, t, &mut rng)?;
                let dual = c.dual();
                let size = 1i64 << c.dimension();
                let spec = code_indicator_spectrum(&c)?;
                codes += 1;
                let ok = spec.iter().enumerate().all(|(x, &s)| {
                    let inside = dual.contains(&BitVector::from_u64(n, x as u64));
                    s == if inside { size } else { 0 }
                });
                if !ok {
                    fails.push(format!("indicator identity for a ({n},{t}) code"));
                }
            }
        }
    }
    let mut families = 0;
    for n in 2..=10 {
        for (name, fam) in constructor_families(n, &mut rng)? {
            let bias = code_family_bias(&fam)?;
            let eps = epsilon_dual_universal(&fam, Convention::MinDim)?.epsilon;
            let rhs = eps * pow2(-(fam.t_min() as i64));
            families += 1;
            if bias.delta_sq.as_ref().map_or(true, |d| *d > rhs) {
                fails.push(format!("{name}: delta^2 exceeds eps 2^-m"));
            }
        }
    }
    Ok((
        fails.is_empty(),
        if fails.is_empty() {
            format!("indicator identity exact on {codes} codes; bias bound on {families} families")
        } else {
            fails.join("; ")
        },
    ))
}

fn pa_families(k: usize) -> Result<Vec<CodeFamily>> {
    let mut v = Vec::new();
    for t in 1..k {
        v.push(optimal_family(k, t)?);
        v.push(CodeFamily::from_hash_family(&HashFamily::modified_toeplitz(k, k - t)?)?);
    }
    if k == 1 {
        v.push(CodeFamily::uniform(vec![LinearCode::full(1)])?);
    }
    Ok(v)
}

fn privacy_amplification(seed: u64) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let fams: Vec<Vec<CodeFamily>> = (1..=3).map(pa_families).collect::<Result<_>>()?;
    let (mut worst_margin, mut worst_chain) = (f64::INFINITY, 0.0f64);
    let mut fails = Vec::new();
    for i in 0..200 {
        let k = rng.gen_range(1..=3);
        let d = rng.gen_range(1..=8);
        let rho = CQState::random(k, d, &mut rng);
        let sigma = (i % 2 == 1).then(|| DensityOperator::random(d, &mut rng));
        let fam = &fams[k - 1][rng.gen_range(0..fams[k - 1].len())];
        let chk = pa_bound_check(&rho, sigma.as_ref(), fam)?;
        worst_margin = worst_margin.min(chk.sides.margin());
        worst_chain = worst_chain.max(chk.chain_residual);
        if !chk.sides.holds(PA_TOL) || chk.chain_residual > CHAIN_TOL {
            fails.push(format!("state {i}"));
        }
        let q = h2_d2_hmin(&rho, sigma.as_ref())?;
        let d1 = d1_distance(&rho);
        if q.h2 < q.hmin - PA_TOL || d1 > ((1 << k) as f64).sqrt() * q.d2.max(0.0).sqrt() + PA_TOL {
            fails.push(format!("entropy relations on state {i}"));
        }
    }
    Ok((
        fails.is_empty(),
        if fails.is_empty() {
            format!("200 states: min margin {worst_margin:.3e}, max chain residual {worst_chain:.1e}")
        } else {
            fails.join("; ")
        },
    ))
}

fn decoding_bounds(seed: u64) -> Outcome {
    let n = 12;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut notes = Vec::new();
    let mut ok = true;
    for m in [8usize, 6] {
        let hf = HashFamily::random_linear(n, m)?;
        let r = 1.0 - m as f64 / n as f64;
        for p in [ratio(1, 20), ratio(1, 10)] {
            let res = family_average_mc(n, r, 1.0, &p, 1000, &mut rng, |g| hf.sample(g).kernel_code())?;
            let gallager = &res.bounds[0];
            let pass = res.checked_value() <= gallager.value && res.holds(0.0);
            ok &= pass;
            notes.push(format!(
                "R={:.3} p={}: avg {:.4} (upper {:.4}) <= {:.4}",
                r,
                display(&p),
                res.value,
                res.checked_value(),
                gallager.value
            ));
        }
    }
    for i in 0..=20 {
        let r = i as f64 / 20.0;
        let e = reliability_e(r, 0.0)?.exponent;
        if e != 1.0 - r {
            ok = false;
            notes.push(format!("E({r},0) = {e}"));
        }
    }
    let mut worst: f64 = 0.0;
    for ri in 1..=9 {
        for p in [0.01, 0.05, 0.1, 0.15, 0.2, 0.25, 0.3, 0.35, 0.4] {
            worst = worst.max(reliability_e(ri as f64 / 10.0, p)?.identity_residual);
        }
    }
    ok &= worst <= IDENTITY_TOL;
    notes.push(format!("E(R,0) = 1-R; identity residual {worst:.1e}"));
    Ok((ok, notes.join("; ")))
}

fn wiretap_pairs(n: usize) -> Result<Vec<(LinearCode, LinearCode)>> {
    let full = LinearCode::full(n);
    let mut v = vec![
        (full.clone(), LinearCode::even_weight(n)),
        (full.clone(), LinearCode::repetition(n)),
        (LinearCode::even_weight(n), LinearCode::zero(n)),
    ];
    if n == 4 {
        v.push((LinearCode::even_weight(4), LinearCode::repetition(4)));
        v.push((full, LinearCode::parse("4 2\n1100\n0011")?));
    }
    Ok(v)
}

fn wiretap_exactness() -> Outcome {
    let mut ok = true;
    let mut checked = 0;
    let mut worst: f64 = 0.0;
    let mut fails = Vec::new();
    for n in [3usize, 4] {
        for (c1, c2) in wiretap_pairs(n)? {
            for p in [0.05, 0.1, 0.25] {
                let ev = wiretap_eval(&PauliChannel::dephasing(p)?, &c1, &c2)?;
                for r in [ev.trace.as_ref(), ev.holevo.as_ref()].into_iter().flatten() {
                    checked += 1;
                    if !r.holds(WIRETAP_TOL) {
                        ok = false;
                        fails.push(format!("{} at n={n}, p={p}", r.quantity));
                    }
                    worst = worst.max(r.value / r.bounds[0].value);
                }
            }
            for ch in [PauliChannel::noiseless(), PauliChannel::bit_flip(0.2)?] {
                let ev = wiretap_eval(&ch, &c1, &c2)?;
                for r in [ev.trace.as_ref(), ev.holevo.as_ref()].into_iter().flatten() {
                    if r.value > WIRETAP_TOL {
                        ok = false;
                        fails.push(format!("nonzero {} without phase errors", r.quantity));
                    }
                }
            }
        }
    }
    Ok((
        ok,
        if ok {
            format!("{checked} exact values within bounds (largest value/bound {worst:.3}); phase-free channels leak 0")
        } else {
            fails.join("; ")
        },
    ))
}

fn leaky_family() -> Outcome {
    let mut notes = Vec::new();
    let mut ok = true;
    let floor = 1.0 - binary_entropy(0.1)?;
    for m in 1..=3 {
        let fam = counterexample_family(6, CounterexampleBase::Exhaustive { m })?;
        let r = counterexample_leakage(&fam, 0.1)?;
        ok &= r.value >= floor;
        notes.push(format!("m={m}: I = {:.4}", r.value));
    }
    notes.push(format!("floor {floor:.4}"));
    Ok((ok, notes.join("; ")))
}

fn permuted_search(seed: u64) -> Outcome {
    let (n, t, budget) = (12, 4, 200);
    let target = int(n as i64 + 1);
    let base = LinearCode::repetition(n);
    let mut plain_ok = 0;
    let mut pair_ok = 0;
    let mut trials = 0;
    for s in 0..50u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_mul(1000).wrapping_add(s));
        if let Ok(out) = search_permuted_code(n, t, budget, &SearchMode::Plain, &mut rng) {
            if out.epsilon <= target {
                plain_ok += 1;
                trials += out.trials;
            }
        }
        if let Ok(out) = search_permuted_code(n, t, budget, &SearchMode::Extension(base.clone()), &mut rng) {
            if out.epsilon <= target && base.is_subcode_of(&out.larger) {
                pair_ok += 1;
            }
        }
    }
    let need = 50.0 * 0.99;
    Ok((
        plain_ok as f64 >= need && pair_ok as f64 >= need,
        format!(
            "plain {plain_ok}/50 (mean {:.1} trials), extension of repetition code {pair_ok}/50",
            trials as f64 / plain_ok.max(1) as f64
        ),
    ))
}

fn approach_comparison() -> Outcome {
    let mut ok = true;
    let mut notes = Vec::new();
    let p = 0.05;
    let s = binary_entropy(p)? + 0.1;
    let params = |n: usize, eps: f64| QkdParams {
        n,
        l: n as f64 * (1.0 - s),
        s,
        p_ph: Some(p),
        log2_weights: None,
        epsilon: eps,
    };
    for eps in [1.0, 2.0, 4.0] {
        let mut prev = f64::INFINITY;
        for n in [10usize, 100, 1000, 10_000, 100_000, 1_000_000] {
            let ratio = approach_ratio(n, eps)?;
            let closed = 2f64.powf(1.5) * eps.sqrt() / (4.0 + ((n + 1) as f64).sqrt() * eps.sqrt());
            let a = &qkd_bounds(&params(n, eps), Approach::PhaseIid)?[0];
            let b = &qkd_bounds(&params(n, eps), Approach::DeltaBiasedD1)?[0];
            let quotient = a.log2_value - b.log2_value;
            if ratio != closed || (quotient - ratio.log2()).abs() > 1e-9 || ratio >= prev {
                ok = false;
                notes.push(format!("ratio at n={n}, eps={eps}"));
            }
            prev = ratio;
        }
    }
    for eps in [1.0, 2.0] {
        for n in [1000usize, 10_000, 100_000, 1_000_000] {
            let q = params(n, eps);
            let iid = qkd_bounds(&q, Approach::PhaseIid)?;
            let d1 = &qkd_bounds(&q, Approach::DeltaBiasedD1)?[0];
            let chi = &qkd_bounds(&q, Approach::DeltaBiasedChiB)?[0];
            if !(iid[0].log2_value < d1.log2_value && iid[1].log2_value < chi.log2_value) {
                ok = false;
                notes.push(format!("phase bound not smaller at n={n}, eps={eps}"));
            }
        }
    }
    let mut prev = f64::INFINITY;
    let mut trend = Vec::new();
    for n in [100usize, 1000, 10_000, 100_000] {
        let mut q = params(n, 1.0);
        q.log2_weights = Some(binomial_log2_masses(n, p)?);
        let v = qkd_bounds(&q, Approach::PhaseSum)?[0].log2_value;
        ok &= v < prev;
        trend.push(format!("{v:.1}"));
        prev = v;
    }
    notes.push(format!("ratio exact and decreasing; phase < small-bias for n >= 1e3; log2 phase-sum trace bound over n=1e2..1e5: {}", trend.join(", ")));
    Ok((ok, notes.join("; ")))
}
