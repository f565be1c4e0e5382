use lazy_ntt::oracle::{fold_cyclic, naive_dft, schoolbook_polymul, to_bit_reversed};
use lazy_ntt::prime::{find_ntt_prime, SearchDirection};
use lazy_ntt::{cyclic_convolve, FieldContext, NttPlan, ResidueVec, Word, WordParams};
use lazy_ntt::Strategy as NttStrategy;
use proptest::prelude::*;

const P62: u64 = 4_611_686_018_427_365_377;

fn strategy() -> impl Strategy<Value = NttStrategy> {
    prop::sample::select(NttStrategy::ALL.to_vec())
}

fn vector(p: u64, max_ell: u32) -> impl Strategy<Value = Vec<u64>> {
    (0..=max_ell).prop_flat_map(move |ell| prop::collection::vec(0..p, 1usize << ell))
}

fn ell_of(v: &[u64]) -> u32 {
    v.len().trailing_zeros()
}

fn forward(v: &[u64], s: NttStrategy) -> Vec<u64> {
    let ctx = FieldContext::new(P62).unwrap();
    let plan = NttPlan::new(ctx, ell_of(v), s).unwrap();
    let mut r = ResidueVec::canonical(v.to_vec(), &ctx).unwrap();
    plan.forward(&mut r).unwrap();
    r.normalize(&ctx);
    r.into_vec()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn round_trip(v in vector(P62, 9), s in strategy()) {
        let ctx = FieldContext::new(P62).unwrap();
        let plan = NttPlan::new(ctx, ell_of(&v), s).unwrap();
        let mut r = ResidueVec::canonical(v.clone(), &ctx).unwrap();
        plan.forward(&mut r).unwrap();
        plan.inverse(&mut r).unwrap();
        plan.scale(&mut r).unwrap();
        prop_assert_eq!(r.as_slice(), v.as_slice());
    }

    #[test]
    fn strategies_agree(v in vector(P62, 9)) {
        let base = forward(&v, NttStrategy::Baseline);
        prop_assert_eq!(&forward(&v, NttStrategy::ShoupLazy), &base);
        prop_assert_eq!(&forward(&v, NttStrategy::MontgomeryLazy), &base);
    }

    #[test]
    fn linear(pair in (0u32..=8).prop_flat_map(|ell| {
        let n = 1usize << ell;
        (prop::collection::vec(0..P62, n), prop::collection::vec(0..P62, n), 0..P62)
    }), s in strategy()) {
        let (a, b, c) = pair;
        let mix: Vec<u64> = a.iter().zip(&b)
            .map(|(&x, &y)| ((x as u128 * c as u128 + y as u128) % P62 as u128) as u64)
            .collect();
        let (fa, fb, fm) = (forward(&a, s), forward(&b, s), forward(&mix, s));
        for i in 0..fm.len() {
            let want = ((fa[i] as u128 * c as u128 + fb[i] as u128) % P62 as u128) as u64;
            prop_assert_eq!(fm[i], want);
        }
    }

    #[test]
    fn matches_direct_dft(v in vector(P62, 7), s in strategy()) {
        let ctx = FieldContext::new(P62).unwrap();
        let plan = NttPlan::new(ctx, ell_of(&v), s).unwrap();
        prop_assert_eq!(forward(&v, s), to_bit_reversed(&naive_dft(&v, plan.omega(), P62)));
    }

    #[test]
    fn convolution_theorem(pair in (0u32..=7).prop_flat_map(|ell| {
        let n = 1usize << ell;
        (prop::collection::vec(0..P62, n), prop::collection::vec(0..P62, n))
    }), s in strategy()) {
        let (a, b) = pair;
        let ctx = FieldContext::new(P62).unwrap();
        let plan = NttPlan::new(ctx, ell_of(&a), s).unwrap();
        let c = cyclic_convolve(
            &ResidueVec::canonical(a.clone(), &ctx).unwrap(),
            &ResidueVec::canonical(b.clone(), &ctx).unwrap(),
            &plan,
        ).unwrap();
        prop_assert_eq!(c.into_vec(), fold_cyclic(&schoolbook_polymul(&a, &b, P62), a.len(), P62));
    }
}

fn check_narrow_word<W: Word>(bits: u32, ell: u32) {
    let p = find_ntt_prime(WordParams::of::<W>(), bits, ell, SearchDirection::LargestBelow).unwrap();
    let ctx = FieldContext::<W>::from_u64(p).unwrap();
    let input: Vec<u64> = (0..1u64 << ell).map(|i| (i * i + 7) % p).collect();
    for s in NttStrategy::ALL {
        let plan = NttPlan::new(ctx, ell, s).unwrap();
        let data = input.iter().map(|&x| W::truncate_u64(x)).collect();
        let mut r = ResidueVec::new(data, lazy_ntt::IntervalTag::LtP, &ctx).unwrap();
        plan.forward(&mut r).unwrap();
        r.normalize(&ctx);
        let got: Vec<u64> = r.as_slice().iter().map(|w| w.to_u64()).collect();
        let want = to_bit_reversed(&naive_dft(&input, plan.omega().to_u64(), p));
        assert_eq!(got, want, "p = {p}, {s}");
        plan.inverse(&mut r).unwrap();
        plan.scale(&mut r).unwrap();
        let back: Vec<u64> = r.as_slice().iter().map(|w| w.to_u64()).collect();
        assert_eq!(back, input, "p = {p}, {s}");
    }
}

#[test]
fn narrow_words() {
    check_narrow_word::<u32>(30, 10);
    check_narrow_word::<u16>(14, 8);
    check_narrow_word::<u8>(5, 4);
}

#[test]
fn alternate_root_round_trips() {
    let ctx = FieldContext::new(97u64).unwrap();
    for omega in [33u64, 47, 50, 64] {
        let plan = NttPlan::with_root(ctx, 3, omega, NttStrategy::MontgomeryLazy).unwrap();
        let v: Vec<u64> = (1..=8).collect();
        let mut r = ResidueVec::canonical(v.clone(), &ctx).unwrap();
        plan.forward(&mut r).unwrap();
        r.normalize(&ctx);
        assert_eq!(r.as_slice(), to_bit_reversed(&naive_dft(&v, omega, 97)).as_slice());
        plan.inverse(&mut r).unwrap();
        plan.scale(&mut r).unwrap();
        assert_eq!(r.as_slice(), v.as_slice());
    }
    assert!(NttPlan::with_root(ctx, 3, 22u64, NttStrategy::Baseline).is_err());
}
