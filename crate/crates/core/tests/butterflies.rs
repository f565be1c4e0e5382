use lazy_ntt::butterfly::{shoup_mul_lazy, Algorithm};
use lazy_ntt::oracle::{sampled_butterfly_check, walk_primes, ViolationKind};
use lazy_ntt::word::sub_if_geq;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn random_full_width_u64() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xb17e);
    for alg in Algorithm::ALL {
        let s = sampled_butterfly_check::<u64, _>(alg, 50, 20_000, &mut rng).unwrap();
        assert!(s.cases >= 1_000_000);
        assert!(s.is_clean(), "{s}");
    }
}

#[test]
fn random_full_width_u32() {
    let mut rng = ChaCha8Rng::seed_from_u64(32);
    for alg in Algorithm::ALL {
        let s = sampled_butterfly_check::<u32, _>(alg, 40, 5_000, &mut rng).unwrap();
        assert!(s.is_clean(), "{s}");
    }
}

#[test]
fn exhaustive_u16_small_primes() {
    let primes = [3, 17, 97, 257];
    for alg in Algorithm::ALL {
        let s = walk_primes::<u16, _>(alg, &primes, |x, y, tw, ctx| alg.apply(x, y, tw, ctx)).unwrap();
        assert_eq!(s.primes, primes);
        assert!(s.is_clean(), "{s}");
    }
}

#[test]
fn mutant_without_two_p_offset_is_caught() {
    // Lazy Shoup with X − Y computed without adding 2p first.
    let s = walk_primes::<u8, _>(Algorithm::ShoupLazy, &[17, 61], |x, y, tw, ctx| {
        let sum = sub_if_geq(x.wrapping_add(y), ctx.two_p());
        (sum, shoup_mul_lazy(x.wrapping_sub(y), tw.w, tw.w_shoup, ctx.p()))
    })
    .unwrap();
    assert!(s.congruence_violations > 0, "{s}");
    let c = s.first_counterexample().unwrap();
    assert!(c.x < c.y);
    assert_eq!(c.kind, ViolationKind::Congruence);
}

#[test]
fn mutant_without_final_subtraction_is_caught() {
    let s = walk_primes::<u8, _>(Algorithm::ShoupLazy, &[17, 61], |x, y, tw, ctx| {
        let t = x.wrapping_sub(y).wrapping_add(ctx.two_p());
        (x.wrapping_add(y), shoup_mul_lazy(t, tw.w, tw.w_shoup, ctx.p()))
    })
    .unwrap();
    assert!(s.interval_violations > 0, "{s}");
    assert_eq!(s.congruence_violations, 0);
}

#[test]
fn baseline_on_quarter_primes_with_lazy_inputs_is_caught() {
    // Canonical-only butterfly fed [0, 2p) inputs must be flagged.
    let s = walk_primes::<u8, _>(Algorithm::ShoupLazy, &[31], |x, y, tw, ctx| {
        Algorithm::Baseline.apply(x, y, tw, ctx)
    })
    .unwrap();
    assert!(!s.is_clean());
    assert_eq!(s.log2_beta, 8);
}
