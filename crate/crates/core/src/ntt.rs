//! Radix-2 transforms over a precomputed plan.
//!
//! The forward transform is the in-place decimation-in-frequency network:
//! stage i (1 ≤ i ≤ ℓ) has half-length m = 2^(ℓ−i) and twiddles ζ^k with
//! ζ = ω^(2^(i−1)), k < m. Input is in natural order and output in
//! bit-reversed order. The inverse runs the same network backwards with
//! (X, Y) ↦ (X + ζ^(−k)Y, X − ζ^(−k)Y), consuming bit-reversed input and
//! producing L·a in natural order. Scaling by L⁻¹ is a separate step.

use std::fmt;
use std::str::FromStr;

use crate::butterfly::{
    butterfly_baseline, butterfly_baseline_unit, butterfly_inverse_baseline, butterfly_inverse_lazy,
    butterfly_inverse_lazy_unit, butterfly_lazy_unit, butterfly_montgomery_lazy, butterfly_shoup_lazy,
    shoup_mul,
};
use crate::error::{Error, Result};
use crate::field::{FieldContext, TwiddlePair, ValidityClass};
use crate::word::{sub_if_geq, Word};

pub use crate::butterfly::IntervalTag;

/// Longest transform a plan will allocate tables for.
pub const MAX_LOG_LENGTH: u32 = 30;

/// Which butterfly family drives a transform.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Strategy {
    /// Canonical residues throughout; p < β/2.
    Baseline,
    /// Lazy Shoup butterflies over [0, 2p) forward, [0, 4p) inverse; p < β/4.
    ShoupLazy,
    /// Lazy Montgomery butterflies forward, lazy Shoup inverse; p < β/4.
    MontgomeryLazy,
}

impl Strategy {
    pub const ALL: [Strategy; 3] = [Self::Baseline, Self::ShoupLazy, Self::MontgomeryLazy];

    pub fn name(self) -> &'static str {
        match self {
            Self::Baseline => "baseline",
            Self::ShoupLazy => "shoup-lazy",
            Self::MontgomeryLazy => "montgomery-lazy",
        }
    }

    pub fn required_class(self) -> ValidityClass {
        match self {
            Self::Baseline => ValidityClass::HalfBeta,
            _ => ValidityClass::QuarterBeta,
        }
    }

    /// Widest tag accepted by `forward`, and the tag it produces.
    pub fn forward_tag(self) -> IntervalTag {
        match self {
            Self::Baseline => IntervalTag::LtP,
            _ => IntervalTag::Lt2P,
        }
    }

    /// Widest tag accepted by `inverse`, and the tag it produces.
    pub fn inverse_tag(self) -> IntervalTag {
        match self {
            Self::Baseline => IntervalTag::LtP,
            _ => IntervalTag::Lt4P,
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Strategy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.to_ascii_lowercase().replace('_', "-").as_str() {
            "baseline" | "ntl" => Ok(Self::Baseline),
            "shoup-lazy" | "shoup" | "lazy" => Ok(Self::ShoupLazy),
            "montgomery-lazy" | "montgomery" => Ok(Self::MontgomeryLazy),
            other => Err(format!(
                "unknown strategy '{other}' (expected baseline, shoup-lazy or montgomery-lazy)"
            )),
        }
    }
}

/// A length-L buffer of residues, all within one tagged interval.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResidueVec<W: Word> {
    data: Vec<W>,
    tag: IntervalTag,
}

impl<W: Word> ResidueVec<W> {
    /// Wrap `data`, checking every element against `tag`'s bound.
    pub fn new(data: Vec<W>, tag: IntervalTag, ctx: &FieldContext<W>) -> Result<Self> {
        let p = ctx.p();
        if let Some((index, v)) = data.iter().enumerate().find(|(_, v)| !tag.contains(**v, p)) {
            return Err(Error::ResidueOutOfRange {
                index,
                value: v.to_u64(),
                bound: tag.bound(p.to_u64()),
            });
        }
        Ok(Self { data, tag })
    }

    pub fn canonical(data: Vec<W>, ctx: &FieldContext<W>) -> Result<Self> {
        Self::new(data, IntervalTag::LtP, ctx)
    }

    pub fn tag(&self) -> IntervalTag {
        self.tag
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn as_slice(&self) -> &[W] {
        &self.data
    }

    pub fn into_vec(self) -> Vec<W> {
        self.data
    }

    /// Replace every element by its canonical representative.
    pub fn normalize(&mut self, ctx: &FieldContext<W>) {
        normalize_slice(&mut self.data, self.tag, ctx);
        self.tag = IntervalTag::LtP;
    }

    pub fn bit_reverse_permute(&mut self) -> Result<()> {
        bit_reverse_permute(&mut self.data)
    }
}

/// Canonicalise values known to lie below `tag`'s bound: one conditional
/// subtraction from [0, 2p), two from [0, 4p).
pub fn normalize_slice<W: Word>(data: &mut [W], tag: IntervalTag, ctx: &FieldContext<W>) {
    let p = ctx.p();
    let two_p = ctx.two_p();
    match tag {
        IntervalTag::LtP => {}
        IntervalTag::Lt2P => data.iter_mut().for_each(|x| *x = sub_if_geq(*x, p)),
        IntervalTag::Lt4P => {
            data.iter_mut().for_each(|x| *x = sub_if_geq(sub_if_geq(*x, two_p), p))
        }
    }
}

pub fn normalize<W: Word>(mut vec: ResidueVec<W>, ctx: &FieldContext<W>) -> ResidueVec<W> {
    vec.normalize(ctx);
    vec
}

/// Reverse the low log2(len) bits of `i`.
#[inline]
pub fn bit_reverse_index(i: usize, log_len: u32) -> usize {
    if log_len == 0 {
        0
    } else {
        i.reverse_bits() >> (usize::BITS - log_len)
    }
}

/// Move element j to index rev(j). An involution.
pub fn bit_reverse_permute<T>(data: &mut [T]) -> Result<()> {
    let n = data.len();
    if !n.is_power_of_two() {
        return Err(Error::NotPowerOfTwo(n));
    }
    let log_len = n.trailing_zeros();
    for i in 0..n {
        let j = bit_reverse_index(i, log_len);
        if i < j {
            data.swap(i, j);
        }
    }
    Ok(())
}

/// Optional variations of the transform loops. All preserve the output
/// contract of the plain loops.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct PlanOptions {
    /// Route the k = 0 butterfly of every block (W = 1) through the
    /// multiply-free kernels.
    pub unit_twiddle_fast_path: bool,
}

/// Callback seen by every butterfly of a transform. `w` is the twiddle
/// actually applied (ζ^k forward, ζ^(−k) inverse).
pub trait ButterflyObserver<W: Word> {
    fn observe(&mut self, stage: u32, w: W, input: (W, W), output: (W, W));
}

/// Observer that does nothing; compiles away.
#[derive(Clone, Copy, Debug, Default)]
pub struct NoObserver;

impl<W: Word> ButterflyObserver<W> for NoObserver {
    #[inline(always)]
    fn observe(&mut self, _: u32, _: W, _: (W, W), _: (W, W)) {}
}

/// First offending butterfly found by an audit.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AuditViolation {
    pub stage: u32,
    pub w: u64,
    pub input: (u64, u64),
    pub output: (u64, u64),
}

/// Result of an interval/congruence audit over one transform.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct AuditReport {
    pub butterflies: u64,
    pub violations: u64,
    /// Largest value seen at any butterfly input or output.
    pub max_value: u64,
    pub first_violation: Option<AuditViolation>,
}

impl AuditReport {
    pub fn is_clean(&self) -> bool {
        self.violations == 0
    }
}

/// Checks every butterfly against its tagged bound and its congruence.
struct Auditor {
    p: u64,
    bound: u128,
    inverse: bool,
    report: AuditReport,
}

impl<W: Word> ButterflyObserver<W> for Auditor {
    fn observe(&mut self, stage: u32, w: W, input: (W, W), output: (W, W)) {
        let (x, y) = (input.0.to_u64(), input.1.to_u64());
        let (a, b) = (output.0.to_u64(), output.1.to_u64());
        let p = self.p as i128;
        let w = w.to_u64();
        let (expect_a, expect_b) = if self.inverse {
            let wy = w as i128 * y as i128;
            (x as i128 + wy, x as i128 - wy)
        } else {
            (x as i128 + y as i128, w as i128 * (x as i128 - y as i128))
        };
        let in_range = [x, y, a, b].iter().all(|&v| (v as u128) < self.bound);
        let congruent = (a as i128 - expect_a).rem_euclid(p) == 0
            && (b as i128 - expect_b).rem_euclid(p) == 0;
        let r = &mut self.report;
        r.butterflies += 1;
        r.max_value = r.max_value.max(x).max(y).max(a).max(b);
        if !(in_range && congruent) {
            r.violations += 1;
            r.first_violation.get_or_insert(AuditViolation { stage, w, input: (x, y), output: (a, b) });
        }
    }
}

/// Precomputed twiddle tables and constants for one (p, ℓ, strategy).
#[derive(Clone, Debug)]
pub struct NttPlan<W: Word> {
    ctx: FieldContext<W>,
    ell: u32,
    omega: W,
    omega_inv: W,
    length_inv: TwiddlePair<W>,
    /// `fwd[i − 1]` holds ζ^k, k < 2^(ℓ−i), for ζ = ω^(2^(i−1)).
    fwd: Vec<Vec<TwiddlePair<W>>>,
    /// Same layout for ω⁻¹.
    inv: Vec<Vec<TwiddlePair<W>>>,
    strategy: Strategy,
    options: PlanOptions,
}

impl<W: Word> NttPlan<W> {
    /// Build a plan using the smallest primitive 2^ℓ-th root of unity.
    pub fn new(ctx: FieldContext<W>, ell: u32, strategy: Strategy) -> Result<Self> {
        Self::with_options(ctx, ell, strategy, PlanOptions::default())
    }

    pub fn with_options(
        ctx: FieldContext<W>,
        ell: u32,
        strategy: Strategy,
        options: PlanOptions,
    ) -> Result<Self> {
        Self::check_shape(&ctx, ell, strategy)?;
        let omega = ctx.find_primitive_root_of_unity(ell)?;
        Self::build(ctx, ell, omega, strategy, options)
    }

    /// Build a plan around a caller-chosen ω, which must have order exactly 2^ℓ.
    pub fn with_root(ctx: FieldContext<W>, ell: u32, omega: W, strategy: Strategy) -> Result<Self> {
        Self::check_shape(&ctx, ell, strategy)?;
        let len = 1u64 << ell;
        let minus_one = ctx.p().wrapping_sub(W::ONE);
        let exact = omega < ctx.p()
            && ctx.mod_pow(omega, len) == W::ONE
            && (ell == 0 || ctx.mod_pow(omega, len / 2) == minus_one);
        if !exact {
            return Err(Error::NoRootOfUnity { p: ctx.p().to_u64(), ell });
        }
        Self::build(ctx, ell, omega, strategy, PlanOptions::default())
    }

    fn check_shape(ctx: &FieldContext<W>, ell: u32, strategy: Strategy) -> Result<()> {
        ctx.require(strategy.required_class(), strategy.name())?;
        if ell > MAX_LOG_LENGTH {
            return Err(Error::TransformTooLong { p: ctx.p().to_u64(), ell });
        }
        Ok(())
    }

    fn build(
        ctx: FieldContext<W>,
        ell: u32,
        omega: W,
        strategy: Strategy,
        options: PlanOptions,
    ) -> Result<Self> {
        let omega_inv = ctx.inv(omega);
        let len = W::truncate_u64(1u64 << ell);
        let length_inv = ctx.twiddle(ctx.inv(ctx.reduce(len)))?;
        let tables = |root: W| -> Result<Vec<Vec<TwiddlePair<W>>>> {
            (1..=ell)
                .map(|stage| {
                    let zeta = ctx.mod_pow(root, 1u64 << (stage - 1));
                    let m = 1usize << (ell - stage);
                    let mut pow = W::ONE;
                    (0..m)
                        .map(|_| {
                            let pair = ctx.twiddle(pow);
                            pow = ctx.mul_mod(pow, zeta);
                            pair
                        })
                        .collect()
                })
                .collect()
        };
        Ok(Self {
            fwd: tables(omega)?,
            inv: tables(omega_inv)?,
            ctx,
            ell,
            omega,
            omega_inv,
            length_inv,
            strategy,
            options,
        })
    }

    pub fn ctx(&self) -> &FieldContext<W> {
        &self.ctx
    }

    pub fn ell(&self) -> u32 {
        self.ell
    }

    pub fn len(&self) -> usize {
        1 << self.ell
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn omega(&self) -> W {
        self.omega
    }

    pub fn omega_inv(&self) -> W {
        self.omega_inv
    }

    /// L⁻¹ mod p.
    pub fn length_inv(&self) -> W {
        self.length_inv.w
    }

    pub fn strategy(&self) -> Strategy {
        self.strategy
    }

    pub fn options(&self) -> PlanOptions {
        self.options
    }

    /// Forward twiddles of stage `stage` (1-based, in execution order).
    pub fn forward_twiddles(&self, stage: u32) -> &[TwiddlePair<W>] {
        &self.fwd[stage as usize - 1]
    }

    pub fn inverse_twiddles(&self, stage: u32) -> &[TwiddlePair<W>] {
        &self.inv[stage as usize - 1]
    }

    /// Number of butterflies in one transform, ℓ·L/2.
    pub fn butterfly_count(&self) -> u64 {
        self.ell as u64 * (self.len() as u64 / 2)
    }

    fn check_len(&self, n: usize) -> Result<()> {
        if n != self.len() {
            return Err(Error::LengthMismatch { expected: self.len(), actual: n });
        }
        Ok(())
    }

    fn check_input(&self, vec: &ResidueVec<W>, accepted: IntervalTag) -> Result<()> {
        self.check_len(vec.len())?;
        if vec.tag > accepted {
            return Err(Error::TagMismatch { accepted, actual: vec.tag });
        }
        Ok(())
    }

    /// Forward transform in place; output in bit-reversed order.
    pub fn forward(&self, vec: &mut ResidueVec<W>) -> Result<()> {
        let tag = self.strategy.forward_tag();
        self.check_input(vec, tag)?;
        self.forward_with(&mut vec.data, &mut NoObserver);
        vec.tag = tag;
        Ok(())
    }

    /// Inverse transform in place: bit-reversed input, natural-order output
    /// equal to L times the original vector.
    pub fn inverse(&self, vec: &mut ResidueVec<W>) -> Result<()> {
        let tag = self.strategy.inverse_tag();
        self.check_input(vec, tag)?;
        self.inverse_with(&mut vec.data, &mut NoObserver);
        vec.tag = tag;
        Ok(())
    }

    /// Multiply every element by L⁻¹; output is canonical.
    pub fn scale(&self, vec: &mut ResidueVec<W>) -> Result<()> {
        self.check_len(vec.len())?;
        let p = self.ctx.p();
        vec.data.iter_mut().for_each(|x| *x = shoup_mul(*x, &self.length_inv, p));
        vec.tag = IntervalTag::LtP;
        Ok(())
    }

    /// Unchecked forward transform over a raw buffer of the plan's length,
    /// whose elements already satisfy the strategy's input interval.
    ///
    /// # Panics
    /// If `data.len()` differs from the plan length.
    pub fn forward_in_place(&self, data: &mut [W]) {
        assert_eq!(data.len(), self.len(), "buffer length must equal plan length");
        self.forward_with(data, &mut NoObserver);
    }

    /// Unchecked counterpart of [`NttPlan::inverse`].
    ///
    /// # Panics
    /// If `data.len()` differs from the plan length.
    pub fn inverse_in_place(&self, data: &mut [W]) {
        assert_eq!(data.len(), self.len(), "buffer length must equal plan length");
        self.inverse_with(data, &mut NoObserver);
    }

    /// Run the forward transform checking every butterfly's inputs and
    /// outputs against the strategy's interval and congruence contract.
    pub fn forward_audited(&self, vec: &mut ResidueVec<W>) -> Result<AuditReport> {
        let tag = self.strategy.forward_tag();
        self.check_input(vec, tag)?;
        let mut auditor = self.auditor(tag, false);
        self.forward_with(&mut vec.data, &mut auditor);
        vec.tag = tag;
        Ok(auditor.report)
    }

    pub fn inverse_audited(&self, vec: &mut ResidueVec<W>) -> Result<AuditReport> {
        let tag = self.strategy.inverse_tag();
        self.check_input(vec, tag)?;
        let mut auditor = self.auditor(tag, true);
        self.inverse_with(&mut vec.data, &mut auditor);
        vec.tag = tag;
        Ok(auditor.report)
    }

    fn auditor(&self, tag: IntervalTag, inverse: bool) -> Auditor {
        let p = self.ctx.p().to_u64();
        Auditor { p, bound: tag.bound(p), inverse, report: AuditReport::default() }
    }

    pub fn forward_with<O: ButterflyObserver<W>>(&self, data: &mut [W], obs: &mut O) {
        debug_assert_eq!(data.len(), self.len());
        match self.strategy {
            Strategy::Baseline => self.run(data, obs, false, butterfly_baseline, butterfly_baseline_unit),
            Strategy::ShoupLazy => self.run(data, obs, false, butterfly_shoup_lazy, butterfly_lazy_unit),
            Strategy::MontgomeryLazy => {
                self.run(data, obs, false, butterfly_montgomery_lazy, butterfly_lazy_unit)
            }
        }
    }

    pub fn inverse_with<O: ButterflyObserver<W>>(&self, data: &mut [W], obs: &mut O) {
        debug_assert_eq!(data.len(), self.len());
        match self.strategy {
            Strategy::Baseline => {
                self.run(data, obs, true, butterfly_inverse_baseline, butterfly_baseline_unit)
            }
            Strategy::ShoupLazy | Strategy::MontgomeryLazy => {
                self.run(data, obs, true, butterfly_inverse_lazy, butterfly_inverse_lazy_unit)
            }
        }
    }

    #[inline(always)]
    fn run<O, F, U>(&self, data: &mut [W], obs: &mut O, inverse: bool, kernel: F, unit: U)
    where
        O: ButterflyObserver<W>,
        F: Fn(W, W, &TwiddlePair<W>, &FieldContext<W>) -> (W, W),
        U: Fn(W, W, &FieldContext<W>) -> (W, W),
    {
        let ctx = self.ctx;
        let fast_unit = self.options.unit_twiddle_fast_path;
        for step in 0..self.ell {
            let stage = if inverse { self.ell - step } else { step + 1 };
            let m = 1usize << (self.ell - stage);
            let table = if inverse { &self.inv[stage as usize - 1] } else { &self.fwd[stage as usize - 1] };
            for block in data.chunks_exact_mut(2 * m) {
                let (lo, hi) = block.split_at_mut(m);
                let start = if fast_unit {
                    let input = (lo[0], hi[0]);
                    let out = unit(input.0, input.1, &ctx);
                    obs.observe(stage, W::ONE, input, out);
                    (lo[0], hi[0]) = out;
                    1
                } else {
                    0
                };
                for ((x, y), tw) in lo[start..].iter_mut().zip(&mut hi[start..]).zip(&table[start..]) {
                    let input = (*x, *y);
                    let out = kernel(input.0, input.1, tw, &ctx);
                    obs.observe(stage, tw.w, input, out);
                    (*x, *y) = out;
                }
            }
        }
    }
}
