//! Radix-2 butterflies over a word-sized prime.
//!
//! Four kernels, each with an exact interval contract on its inputs and
//! outputs:
//!
//! | kernel                       | map                      | requires | in      | out     |
//! |------------------------------|--------------------------|----------|---------|---------|
//! | [`butterfly_baseline`]       | (X+Y, W(X−Y))            | p < β/2  | [0, p)  | [0, p)  |
//! | [`butterfly_shoup_lazy`]     | (X+Y, W(X−Y))            | p < β/4  | [0, 2p) | [0, 2p) |
//! | [`butterfly_inverse_lazy`]   | (X+WY, X−WY)             | p < β/4  | [0, 4p) | [0, 4p) |
//! | [`butterfly_montgomery_lazy`]| (X+Y, W(X−Y))            | p < β/4  | [0, 2p) | [0, 2p) |
//!
//! The raw kernels trust their caller: they never check the modulus class
//! or the input intervals, and all arithmetic wraps modulo β. That is what
//! lets the exhaustive checker run them outside their hypotheses and observe
//! the failures. [`Algorithm::apply_checked`] is the validating entry point.
//!
//! Every conditional correction is a branch-free select.

use crate::error::{Error, Result};
use crate::field::{FieldContext, TwiddlePair, ValidityClass};
use crate::word::{sub_if_geq, Word};

/// Representation interval of a residue: [0, p), [0, 2p) or [0, 4p).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum IntervalTag {
    LtP,
    Lt2P,
    Lt4P,
}

impl IntervalTag {
    pub fn multiple(self) -> u32 {
        match self {
            Self::LtP => 1,
            Self::Lt2P => 2,
            Self::Lt4P => 4,
        }
    }

    /// Exclusive upper bound for a value carrying this tag.
    pub fn bound(self, p: u64) -> u128 {
        self.multiple() as u128 * p as u128
    }

    pub fn contains<W: Word>(self, value: W, p: W) -> bool {
        (value.to_u64() as u128) < self.bound(p.to_u64())
    }
}

/// A word together with the interval it is known to lie in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Residue<W: Word> {
    pub value: W,
    pub tag: IntervalTag,
}

impl<W: Word> Residue<W> {
    pub fn new(value: W, tag: IntervalTag, ctx: &FieldContext<W>) -> Result<Self> {
        if tag.contains(value, ctx.p()) {
            Ok(Self { value, tag })
        } else {
            Err(Error::ResidueOutOfRange {
                index: 0,
                value: value.to_u64(),
                bound: tag.bound(ctx.p().to_u64()),
            })
        }
    }

    pub fn canonical(&self, ctx: &FieldContext<W>) -> W {
        ctx.reduce(self.value)
    }
}

/// Shoup's multiply without the final correction: (WT − Qp) mod β with
/// Q = ⌊W′T/β⌋.
///
/// For any T < β the true value WT − Qp lies in [0, Tp/β + p), hence below
/// 2p, and the wrapping arithmetic recovers it exactly whenever 2p ≤ β.
#[inline(always)]
pub fn shoup_mul_lazy<W: Word>(t: W, w: W, w_shoup: W, p: W) -> W {
    let q = w_shoup.mul_hi(t);
    w.wrapping_mul(t).wrapping_sub(q.wrapping_mul(p))
}

/// Canonical Shoup multiply, one correction after [`shoup_mul_lazy`].
#[inline(always)]
pub fn shoup_mul<W: Word>(t: W, tw: &TwiddlePair<W>, p: W) -> W {
    sub_if_geq(shoup_mul_lazy(t, tw.w, tw.w_shoup, p), p)
}

/// Montgomery reduction of `hi·β + lo` for hi < p: a representative of
/// (hi·β + lo)·β⁻¹ in (0, 2p).
#[inline(always)]
pub fn montgomery_reduce_lazy<W: Word>(hi: W, lo: W, ctx: &FieldContext<W>) -> W {
    let q = lo.wrapping_mul(ctx.j_inv());
    let h = q.mul_hi(ctx.p());
    hi.wrapping_sub(h).wrapping_add(ctx.p())
}

/// NTL-style butterfly: canonical in, canonical out; p < β/2.
#[inline(always)]
pub fn butterfly_baseline<W: Word>(x: W, y: W, tw: &TwiddlePair<W>, ctx: &FieldContext<W>) -> (W, W) {
    let p = ctx.p();
    let sum = sub_if_geq(x.wrapping_add(y), p);
    // X − Y mod p as (X − Y + p) − p·[≥ p]; a select on X < Y compiles to a branch.
    let t = sub_if_geq(x.wrapping_sub(y).wrapping_add(p), p);
    let y_out = sub_if_geq(shoup_mul_lazy(t, tw.w, tw.w_shoup, p), p);
    (sum, y_out)
}

/// Lazy Shoup butterfly over [0, 2p); p < β/4.
#[inline(always)]
pub fn butterfly_shoup_lazy<W: Word>(x: W, y: W, tw: &TwiddlePair<W>, ctx: &FieldContext<W>) -> (W, W) {
    let two_p = ctx.two_p();
    let sum = sub_if_geq(x.wrapping_add(y), two_p);
    let t = x.wrapping_sub(y).wrapping_add(two_p);
    (sum, shoup_mul_lazy(t, tw.w, tw.w_shoup, ctx.p()))
}

/// Lazy inverse butterfly (X, Y) ↦ (X + WY, X − WY) over [0, 4p); p < β/4.
#[inline(always)]
pub fn butterfly_inverse_lazy<W: Word>(x: W, y: W, tw: &TwiddlePair<W>, ctx: &FieldContext<W>) -> (W, W) {
    let two_p = ctx.two_p();
    let x = sub_if_geq(x, two_p);
    // Y < 4p < β is a legal Shoup multiplicand.
    let t = shoup_mul_lazy(y, tw.w, tw.w_shoup, ctx.p());
    (x.wrapping_add(t), x.wrapping_sub(t).wrapping_add(two_p))
}

/// Lazy Montgomery butterfly over [0, 2p); p odd, p < β/4. Reads only
/// `tw.w_mont`.
#[inline(always)]
pub fn butterfly_montgomery_lazy<W: Word>(
    x: W,
    y: W,
    tw: &TwiddlePair<W>,
    ctx: &FieldContext<W>,
) -> (W, W) {
    let two_p = ctx.two_p();
    let sum = sub_if_geq(x.wrapping_add(y), two_p);
    let t = x.wrapping_sub(y).wrapping_add(two_p);
    let (r1, r0) = tw.w_mont.mul_hi_lo(t);
    (sum, montgomery_reduce_lazy(r1, r0, ctx))
}

/// Canonical inverse butterfly (X + WY, X − WY) for the baseline strategy.
#[inline(always)]
pub fn butterfly_inverse_baseline<W: Word>(
    x: W,
    y: W,
    tw: &TwiddlePair<W>,
    ctx: &FieldContext<W>,
) -> (W, W) {
    let p = ctx.p();
    let t = shoup_mul(y, tw, p);
    (ctx.add_mod_p_full(x, t), ctx.sub_mod_p_full(x, t))
}

// W = 1 fast paths: same contracts as the general kernels with W = 1, no multiply.

#[inline(always)]
pub fn butterfly_baseline_unit<W: Word>(x: W, y: W, ctx: &FieldContext<W>) -> (W, W) {
    (ctx.add_mod_p_full(x, y), ctx.sub_mod_p_full(x, y))
}

/// Unit-twiddle butterfly for both lazy forward kernels.
#[inline(always)]
pub fn butterfly_lazy_unit<W: Word>(x: W, y: W, ctx: &FieldContext<W>) -> (W, W) {
    let two_p = ctx.two_p();
    let sum = sub_if_geq(x.wrapping_add(y), two_p);
    let diff = sub_if_geq(x.wrapping_sub(y).wrapping_add(two_p), two_p);
    (sum, diff)
}

#[inline(always)]
pub fn butterfly_inverse_lazy_unit<W: Word>(x: W, y: W, ctx: &FieldContext<W>) -> (W, W) {
    let two_p = ctx.two_p();
    let x = sub_if_geq(x, two_p);
    let y = sub_if_geq(y, two_p);
    (x.wrapping_add(y), x.wrapping_sub(y).wrapping_add(two_p))
}

/// The butterfly kernels as a value, for dispatch and checking.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Algorithm {
    Baseline,
    ShoupLazy,
    InverseLazy,
    MontgomeryLazy,
}

impl Algorithm {
    pub const ALL: [Algorithm; 4] =
        [Self::Baseline, Self::ShoupLazy, Self::InverseLazy, Self::MontgomeryLazy];

    pub fn name(self) -> &'static str {
        match self {
            Self::Baseline => "baseline",
            Self::ShoupLazy => "shoup-lazy",
            Self::InverseLazy => "inverse-lazy",
            Self::MontgomeryLazy => "montgomery-lazy",
        }
    }

    pub fn required_class(self) -> ValidityClass {
        match self {
            Self::Baseline => ValidityClass::HalfBeta,
            _ => ValidityClass::QuarterBeta,
        }
    }

    /// Interval accepted on input and guaranteed on output.
    pub fn interval(self) -> IntervalTag {
        match self {
            Self::Baseline => IntervalTag::LtP,
            Self::ShoupLazy | Self::MontgomeryLazy => IntervalTag::Lt2P,
            Self::InverseLazy => IntervalTag::Lt4P,
        }
    }

    /// (X + WY, X − WY) rather than (X + Y, W(X − Y)).
    pub fn is_inverse(self) -> bool {
        self == Self::InverseLazy
    }

    #[inline(always)]
    pub fn apply<W: Word>(self, x: W, y: W, tw: &TwiddlePair<W>, ctx: &FieldContext<W>) -> (W, W) {
        match self {
            Self::Baseline => butterfly_baseline(x, y, tw, ctx),
            Self::ShoupLazy => butterfly_shoup_lazy(x, y, tw, ctx),
            Self::InverseLazy => butterfly_inverse_lazy(x, y, tw, ctx),
            Self::MontgomeryLazy => butterfly_montgomery_lazy(x, y, tw, ctx),
        }
    }

    /// Validate the modulus class and input intervals, run the kernel, and
    /// tag the outputs.
    pub fn apply_checked<W: Word>(
        self,
        x: Residue<W>,
        y: Residue<W>,
        tw: &TwiddlePair<W>,
        ctx: &FieldContext<W>,
    ) -> Result<(Residue<W>, Residue<W>)> {
        ctx.require(self.required_class(), self.name())?;
        let accepted = self.interval();
        for r in [x, y] {
            if r.tag > accepted {
                return Err(Error::TagMismatch { accepted, actual: r.tag });
            }
            Residue::new(r.value, r.tag, ctx)?;
        }
        if tw.w == W::ZERO || tw.w >= ctx.p() {
            return Err(Error::TwiddleOutOfRange { w: tw.w.to_u64(), p: ctx.p().to_u64() });
        }
        let (a, b) = self.apply(x.value, y.value, tw, ctx);
        debug_assert!(accepted.contains(a, ctx.p()) && accepted.contains(b, ctx.p()));
        Ok((Residue { value: a, tag: accepted }, Residue { value: b, tag: accepted }))
    }
}
