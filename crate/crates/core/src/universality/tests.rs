use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::gf2::{BinaryMatrix, BitVector};
use crate::rational::{int, pow2, ratio, Rational};

fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn go(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                prefix.push(i);
                go(prefix, used, out);
                prefix.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

/// `{σ(C) : σ ∈ S_n}` with one member per permutation.
fn brute_permuted_family(c: &LinearCode) -> CodeFamily {
    CodeFamily::uniform(permutations(c.len()).iter().map(|p| c.permute(p)).collect()).unwrap()
}

fn random_linear_kernels(n: usize, m: usize) -> CodeFamily {
    CodeFamily::from_hash_family(&HashFamily::random_linear(n, m).unwrap()).unwrap()
}

#[test]
fn random_linear_kernels_are_exactly_universal() {
    for n in 2..=6 {
        for m in 1..=3.min(n) {
            let fam = random_linear_kernels(n, m);
            // uniform M: Pr[Mx = 0] = 2^{-m} for each x ≠ 0
            let probs = membership_probabilities(&fam).unwrap();
            for (x, p) in probs.iter().enumerate().skip(1) {
                assert_eq!(p, &pow2(-(m as i64)), "n={n} m={m} x={x}");
            }
            let r = epsilon_universal(&fam, Convention::MinDim).unwrap();
            assert_eq!(r.t_min, n - m);
            assert_eq!(r.t_max, n);
            assert_eq!(r.epsilon, int(1));
            let r = epsilon_universal(&fam, Convention::MaxDim).unwrap();
            assert_eq!(r.epsilon, pow2(-(m as i64)));
        }
    }
}

#[test]
fn full_space_family() {
    let fam = CodeFamily::uniform(vec![LinearCode::full(5)]).unwrap();
    let r = epsilon_universal(&fam, Convention::MinDim).unwrap();
    assert_eq!(r.epsilon, int(1));
    assert_eq!(r.worst_x.to_string(), "10000");
}

#[test]
fn modified_toeplitz_is_universal_and_dual_universal() {
    for n in 2..=7 {
        for m in 1..n.min(4) {
            let fam = CodeFamily::from_hash_family(&HashFamily::modified_toeplitz(n, m).unwrap())
                .unwrap();
            let r = epsilon_universal(&fam, Convention::MinDim).unwrap();
            assert_eq!(r.epsilon, int(1), "n={n} m={m}");
            let d = epsilon_dual_universal(&fam, Convention::MinDim).unwrap();
            assert_eq!(d.epsilon, int(1), "n={n} m={m}");
            assert_eq!(d.convention, Convention::MaxDim);
        }
    }
}

#[test]
fn toeplitz_collision_and_dual_probabilities() {
    for n in 2..=8 {
        for m in 1..=n.min(3) {
            let fam = CodeFamily::from_hash_family(&HashFamily::toeplitz(n, m).unwrap()).unwrap();
            let r = epsilon_universal(&fam, Convention::MinDim).unwrap();
            assert!(r.max_probability <= pow2(-(m as i64)), "n={n} m={m}");
            let d = epsilon_dual_universal(&fam, Convention::MinDim).unwrap();
            assert!(d.max_probability <= pow2(m as i64 - n as i64));
            assert_eq!(d.t, m);
            assert!(d.epsilon <= int(1));
        }
    }
}

#[test]
fn repetition_permuted_family() {
    for n in 2..=8 {
        let c = LinearCode::repetition(n);
        let e = permuted_epsilon(&c).unwrap();
        assert_eq!(e, pow2(n as i64 - 1));
        assert_eq!(permuted_family_epsilon_by_orbits(&c).unwrap(), e);
    }
    for n in 2..=5 {
        let c = LinearCode::repetition(n);
        let r = epsilon_universal(&brute_permuted_family(&c), Convention::MinDim).unwrap();
        assert_eq!(r.epsilon, pow2(n as i64 - 1));
    }
}

#[test]
fn permuted_epsilon_examples() {
    for n in 2..=9 {
        assert_eq!(permuted_epsilon(&LinearCode::full(n)).unwrap(), int(1));
        assert_eq!(permuted_epsilon(&LinearCode::even_weight(n)).unwrap(), int(2));
    }
}

#[test]
fn permuted_epsilon_matches_brute_force_symmetric_group() {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    for _ in 0..12 {
        let n = rng.gen_range(3..=6);
        let t = rng.gen_range(1..n);
        let c = LinearCode::random(n, t, &mut rng).unwrap();
        let brute = epsilon_universal(&brute_permuted_family(&c), Convention::MinDim).unwrap();
        assert_eq!(brute.epsilon, permuted_epsilon(&c).unwrap());
        assert_eq!(brute.epsilon, permuted_family_epsilon_by_orbits(&c).unwrap());
    }
}

#[test]
fn permuted_pair_epsilon_cross_checks() {
    let mut rng = ChaCha8Rng::seed_from_u64(78);
    for _ in 0..40 {
        let n = rng.gen_range(2..=10);
        let t1 = rng.gen_range(1..=n);
        let t2 = rng.gen_range(0..=t1);
        let c2 = LinearCode::random(n, t2, &mut rng).unwrap();
        let c1 = c2.random_extension(t1, &mut rng).unwrap();
        let e = permuted_pair_epsilon(&c1, &c2).unwrap();
        assert_eq!(e, permuted_pair_epsilon_by_orbits(&c1, &c2).unwrap());
        if n <= 6 {
            let pairs = permutations(n)
                .iter()
                .map(|p| (c1.permute(p), c2.permute(p)))
                .collect();
            let fam = CodePairFamily::uniform(pairs).unwrap();
            let r = epsilon_pair(&fam, PairVariant::Pair, Convention::MinDim).unwrap();
            assert_eq!(r.epsilon, e);
        }
    }
}

#[test]
fn permuted_pair_trivial_cases() {
    let mut rng = ChaCha8Rng::seed_from_u64(79);
    for _ in 0..10 {
        let c = LinearCode::random(8, 4, &mut rng).unwrap();
        assert_eq!(permuted_pair_epsilon(&c, &c).unwrap(), Rational::zero());
        assert_eq!(
            permuted_pair_epsilon(&c, &LinearCode::zero(8)).unwrap(),
            permuted_epsilon(&c).unwrap()
        );
    }
    let rep = LinearCode::repetition(4);
    let other = LinearCode::span(4, vec!["1000".parse().unwrap()]).unwrap();
    assert!(permuted_pair_epsilon(&rep, &other).is_err());
}

#[test]
fn single_pair_has_zero_pair_epsilon() {
    let c = LinearCode::even_weight(5);
    let fam = CodePairFamily::uniform(vec![(c.clone(), c)]).unwrap();
    let r = epsilon_pair(&fam, PairVariant::Pair, Convention::MinDim).unwrap();
    assert_eq!(r.epsilon, Rational::zero());
}

/// `G(C_{2,r}) = G(D_r) G(C₁)` for `D_r` the kernels of all `(m−t) × m` matrices.
fn mapped_subcode_family(c1: &LinearCode, t: usize) -> CodeFamily {
    let m = c1.dimension();
    let g1 = c1.generator_matrix();
    let d = random_linear_kernels(m, m - t);
    let members = d
        .members()
        .iter()
        .map(|dr| {
            let gd = if dr.dimension() == 0 {
                BinaryMatrix::zeros(0, m)
            } else {
                dr.generator_matrix()
            };
            LinearCode::from_generator(&gd.mul(&g1).unwrap()).unwrap()
        })
        .collect();
    CodeFamily::uniform(members).unwrap()
}

#[test]
fn mapped_subcode_family_is_universal() {
    let mut rng = ChaCha8Rng::seed_from_u64(80);
    for _ in 0..6 {
        let n = rng.gen_range(4..=8);
        let m = rng.gen_range(2..=n.min(5));
        let t = rng.gen_range(1..m);
        let c1 = LinearCode::random(n, m, &mut rng).unwrap();
        let fam = mapped_subcode_family(&c1, t);
        let pairs = CodePairFamily::subcode(&c1, &fam).unwrap();
        let r = epsilon_pair(&pairs, PairVariant::Subcode, Convention::MinDim).unwrap();
        assert_eq!(r.t_min, t);
        assert_eq!(r.epsilon, int(1));

        // the dual is an extended family of C₁⊥
        let d = epsilon_pair_dual(&pairs, PairVariant::Subcode, Convention::MinDim).unwrap();
        let bound = duality_bound(&r.epsilon, t, n, Some(m), BoundVariant::Subcode).unwrap();
        assert!(d.max_probability <= bound);
    }
}

#[test]
fn extended_family_duality_bound() {
    let mut rng = ChaCha8Rng::seed_from_u64(81);
    for _ in 0..20 {
        let n = rng.gen_range(3..=8);
        let m = rng.gen_range(0..n - 1);
        let t = rng.gen_range(m + 1..n);
        let c1 = LinearCode::random(n, m, &mut rng).unwrap();
        let size = rng.gen_range(1..30);
        let members = (0..size)
            .map(|_| c1.random_extension(t, &mut rng).unwrap())
            .collect();
        let fam = CodeFamily::uniform(members).unwrap();
        let pairs = CodePairFamily::extended(&c1, &fam).unwrap();
        let r = epsilon_pair(&pairs, PairVariant::Extended, Convention::MinDim).unwrap();
        let d = epsilon_pair_dual(&pairs, PairVariant::Extended, Convention::MinDim).unwrap();
        // x ranges over C₁⊥∖{0} on the dual side
        let bound = duality_bound(&r.epsilon, t, n, Some(m), BoundVariant::Extended).unwrap();
        assert!(d.max_probability <= bound, "n={n} m={m} t={t}");
    }
}

#[test]
fn pair_variants_reject_mixed_bases() {
    let a = LinearCode::repetition(4);
    let b = LinearCode::zero(4);
    let fam = CodePairFamily::uniform(vec![
        (LinearCode::full(4), a),
        (LinearCode::full(4), b),
    ])
    .unwrap();
    assert!(epsilon_pair(&fam, PairVariant::Extended, Convention::MinDim).is_err());
    assert!(CodePairFamily::uniform(vec![(LinearCode::zero(4), LinearCode::full(4))]).is_err());
}

fn random_family<R: Rng>(rng: &mut R) -> CodeFamily {
    let n = rng.gen_range(2..=10);
    let lo = rng.gen_range(1..=n);
    let hi = rng.gen_range(lo..=n);
    let size = rng.gen_range(1..=12);
    let members = (0..size)
        .map(|_| {
            let t = rng.gen_range(lo..=hi);
            LinearCode::random(n, t, rng).unwrap()
        })
        .collect();
    CodeFamily::uniform(members).unwrap()
}

#[test]
fn duality_bound_soundness_and_floor() {
    let mut rng = ChaCha8Rng::seed_from_u64(82);
    for _ in 0..150 {
        let fam = random_family(&mut rng);
        let r = epsilon_universal(&fam, Convention::MinDim).unwrap();
        assert!(r.epsilon >= epsilon_floor(fam.n(), r.t_min));
        let d = epsilon_dual_universal(&fam, Convention::MinDim).unwrap();
        let bound = duality_bound(&r.epsilon, r.t_min, fam.n(), None, BoundVariant::Plain).unwrap();
        assert!(d.max_probability <= bound);
    }
}

#[test]
fn tight_family_meets_bound_exactly() {
    let (n, t) = (6, 3);
    let x: BitVector = "101100".parse().unwrap();
    let floor = epsilon_floor(n, t);
    let top = max_tight_epsilon(n, t).unwrap();
    for eps in [floor.clone(), int(1), ratio(3, 2), top.clone()] {
        let fam = tight_family(n, t, &eps, &x).unwrap();
        let r = epsilon_universal(&fam, Convention::MinDim).unwrap();
        assert_eq!(r.t_min, t);
        assert_eq!(r.epsilon, eps);
        let p = duality_bound(&eps, t, n, None, BoundVariant::Plain).unwrap();
        let probs = membership_probabilities(&fam.dual()).unwrap();
        assert_eq!(probs[x.to_u64().unwrap() as usize], p);
    }
    let fam = tight_family(n, t, &int(1), &x).unwrap();
    let probs = membership_probabilities(&fam.dual()).unwrap();
    assert_eq!(
        probs[x.to_u64().unwrap() as usize],
        pow2(1 - t as i64) - pow2(1 - n as i64)
    );
    let fam = tight_family(n, t, &top, &x).unwrap();
    let probs = membership_probabilities(&fam.dual()).unwrap();
    assert_eq!(probs[x.to_u64().unwrap() as usize], int(1));

    assert!(tight_family(n, t, &(floor - ratio(1, 1000)), &x).is_err());
    assert!(tight_family(n, t, &(top + ratio(1, 1000)), &x).is_err());
    assert!(tight_family(n, n, &int(1), &x).is_err());
}

#[test]
fn optimal_family_maps_to_optimal_dual() {
    for n in 2..=6 {
        for t in 1..n {
            let fam = optimal_family(n, t).unwrap();
            let r = epsilon_universal(&fam, Convention::MinDim).unwrap();
            assert_eq!(r.epsilon, epsilon_floor(n, t));
            let d = epsilon_dual_universal(&fam, Convention::MinDim).unwrap();
            assert_eq!(d.epsilon, epsilon_floor(n, n - t));
        }
    }
}

#[test]
fn counterexample_properties() {
    for n in 2..=6 {
        let fam = counterexample_family(n, CounterexampleBase::Exhaustive { m: 1 }).unwrap();
        let r = epsilon_universal(&fam, Convention::MinDim).unwrap();
        assert_eq!(r.epsilon, int(2));
        let d = epsilon_dual_universal(&fam, Convention::MinDim).unwrap();
        assert_eq!(d.max_probability, int(1));
        assert_eq!(d.worst_x, BitVector::unit(n, n - 1));
        for c in fam.members() {
            assert!(c.codewords().unwrap().iter().all(|w| !w.get(n - 1)));
            assert!(c.dual().contains(&BitVector::unit(n, n - 1)));
        }
    }
    let fam = counterexample_family(
        8,
        CounterexampleBase::Sampled {
            m: 3,
            count: 50,
            seed: 1,
        },
    )
    .unwrap();
    assert_eq!(fam.len(), 50);
    assert!(counterexample_family(1, CounterexampleBase::Exhaustive { m: 1 }).is_err());
    assert!(counterexample_family(10, CounterexampleBase::Exhaustive { m: 3 }).is_err());
}

#[test]
fn search_finds_good_permuted_codes() {
    let mut rng = ChaCha8Rng::seed_from_u64(83);
    let out = search_permuted_code(12, 4, 200, &SearchMode::Plain, &mut rng).unwrap();
    assert_eq!(out.larger.dimension(), 4);
    assert!(out.epsilon <= int(13));
    assert_eq!(permuted_epsilon(&out.larger).unwrap(), out.epsilon);

    let base = LinearCode::repetition(10);
    let out = search_permuted_code(10, 5, 200, &SearchMode::Extension(base.clone()), &mut rng).unwrap();
    assert!(base.is_subcode_of(&out.larger));
    assert!(permuted_pair_epsilon(&out.larger, &base).unwrap() <= int(11));

    let big = LinearCode::even_weight(10);
    let out = search_permuted_code(10, 4, 200, &SearchMode::DualPair(big.clone()), &mut rng).unwrap();
    assert_eq!(out.smaller.dimension(), 4);
    assert!(out.smaller.is_subcode_of(&big));
    let e = permuted_pair_epsilon(&out.smaller.dual(), &big.dual()).unwrap();
    assert!(e <= int(11));
}

#[test]
fn search_reports_budget_exhaustion() {
    let mut rng = ChaCha8Rng::seed_from_u64(84);
    // t = 1 codes {0, v} have ε = 2^{n-1}/C(n,|v|), which exceeds n+1 for
    // light or heavy v; with budget 1 either outcome must be reported cleanly
    for _ in 0..20 {
        match search_permuted_code(8, 1, 1, &SearchMode::Plain, &mut rng) {
            Ok(out) => assert!(out.epsilon <= int(9)),
            Err(Error::BudgetExhausted { trials, best }) => {
                assert_eq!(trials, 1);
                assert!(crate::rational::parse(&best).unwrap() > int(9));
            }
            Err(e) => panic!("unexpected error {e}"),
        }
    }
    assert!(search_permuted_code(8, 2, 0, &SearchMode::Plain, &mut rng).is_err());
}

#[test]
fn mc_estimate_brackets_exact_value() {
    let fam = random_linear_kernels(5, 2);
    let mut rng = ChaCha8Rng::seed_from_u64(85);
    let hf = HashFamily::random_linear(5, 2).unwrap();
    let mc = epsilon_universal_mc(5, 3, Convention::MinDim, 4000, &mut rng, |r| {
        hf.sample(r).kernel_code()
    })
    .unwrap();
    let exact = epsilon_universal(&fam, Convention::MinDim).unwrap();
    assert!(mc.epsilon_lower <= crate::rational::to_f64(&exact.epsilon));
    assert!(mc.epsilon_estimate > 0.8);
}

#[test]
fn report_record_is_flat() {
    let fam = random_linear_kernels(4, 2);
    let r = epsilon_universal(&fam, Convention::MinDim).unwrap();
    let rec = r.record();
    assert_eq!(rec.epsilon_num, "1");
    assert_eq!(rec.epsilon_den, "1");
    assert_eq!(rec.convention, "min_dim");
    assert_eq!(rec.worst_x.len(), 4);
}

#[test]
fn exact_mode_refuses_huge_ambient_space() {
    let fam = CodeFamily::uniform(vec![LinearCode::repetition(21)]).unwrap();
    assert!(matches!(
        epsilon_universal(&fam, Convention::MinDim),
        Err(Error::CapExceeded { .. })
    ));
}
