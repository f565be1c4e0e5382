//! Cyclic convolution and polynomial multiplication through the transform.

use crate::butterfly::montgomery_reduce_lazy;
use crate::error::{Error, Result};
use crate::field::FieldContext;
use crate::ntt::{normalize_slice, IntervalTag, NttPlan, ResidueVec};
use crate::word::{sub_if_geq, Word};

/// Pointwise multiplier that folds in the L⁻¹ scale.
///
/// Two lazy Montgomery reductions: ab·β⁻¹ first, then a multiply by
/// L⁻¹β² mod p to cancel the β⁻¹ factors. Operands taken from a forward
/// transform's output interval keep every double-word product under pβ, so
/// each reduction lands in (0, 2p).
struct ScaledPointwise<W: Word> {
    ctx: FieldContext<W>,
    scale_mont: W,
}

impl<W: Word> ScaledPointwise<W> {
    fn new(plan: &NttPlan<W>) -> Self {
        let ctx = *plan.ctx();
        let beta_mod_p = W::truncate_u64(((1u128 << W::BITS) % ctx.p().to_u64() as u128) as u64);
        let beta_sq = ctx.mul_mod(beta_mod_p, beta_mod_p);
        Self { ctx, scale_mont: ctx.mul_mod(plan.length_inv(), beta_sq) }
    }

    #[inline(always)]
    fn apply(&self, a: W, b: W) -> W {
        let (hi, lo) = a.mul_hi_lo(b);
        let ab = montgomery_reduce_lazy(hi, lo, &self.ctx);
        let (hi, lo) = ab.mul_hi_lo(self.scale_mont);
        sub_if_geq(montgomery_reduce_lazy(hi, lo, &self.ctx), self.ctx.p())
    }
}

/// out[k] = Σ_{i+j ≡ k mod L} a_i b_j, canonical.
pub fn cyclic_convolve<W: Word>(a: &ResidueVec<W>, b: &ResidueVec<W>, plan: &NttPlan<W>) -> Result<ResidueVec<W>> {
    let len = plan.len();
    for v in [a, b] {
        if v.len() != len {
            return Err(Error::LengthMismatch { expected: len, actual: v.len() });
        }
    }
    let ctx = plan.ctx();
    let forward_tag = plan.strategy().forward_tag();
    let mut fa = a.as_slice().to_vec();
    let mut fb = b.as_slice().to_vec();
    // Inputs wider than the forward transform accepts are brought down first.
    for (buf, tag) in [(&mut fa, a.tag()), (&mut fb, b.tag())] {
        if tag > forward_tag {
            normalize_slice(buf, tag, ctx);
        }
    }
    plan.forward_in_place(&mut fa);
    plan.forward_in_place(&mut fb);

    let pointwise = ScaledPointwise::new(plan);
    fa.iter_mut().zip(&fb).for_each(|(x, &y)| *x = pointwise.apply(*x, y));

    plan.inverse_in_place(&mut fa);
    normalize_slice(&mut fa, plan.strategy().inverse_tag(), ctx);
    ResidueVec::new(fa, IntervalTag::LtP, ctx)
}

/// Product of two polynomials with canonical coefficients, via a
/// zero-padded cyclic convolution of length 2^⌈log₂(|a|+|b|−1)⌉.
///
/// `plan_for` is asked for a plan of the required log-length.
pub fn polymul_mod_p<W, F>(a: &[W], b: &[W], ctx: &FieldContext<W>, mut plan_for: F) -> Result<Vec<W>>
where
    W: Word,
    F: FnMut(u32) -> Result<NttPlan<W>>,
{
    if a.is_empty() || b.is_empty() {
        return Ok(Vec::new());
    }
    let out_len = a.len() + b.len() - 1;
    let ell = out_len.next_power_of_two().trailing_zeros();
    let plan = plan_for(ell).map_err(|e| match e {
        Error::NoRootOfUnity { p, ell } => Error::TransformTooLong { p, ell },
        other => other,
    })?;
    if plan.ctx().p() != ctx.p() || plan.len() < out_len {
        return Err(Error::LengthMismatch { expected: out_len.next_power_of_two(), actual: plan.len() });
    }
    let pad = |v: &[W]| -> Result<ResidueVec<W>> {
        let mut data = v.to_vec();
        data.resize(plan.len(), W::ZERO);
        ResidueVec::canonical(data, ctx)
    };
    let mut c = cyclic_convolve(&pad(a)?, &pad(b)?, &plan)?.into_vec();
    c.truncate(out_len);
    Ok(c)
}
