//! Fixed-radix machine words.
//!
//! Every algorithm in this crate is written once against [`Word`], so the
//! same code runs on native `u64` words and on `u8`/`u16` words small enough
//! to enumerate exhaustively. All arithmetic wraps modulo the radix β.

use std::fmt::{Debug, Display};
use std::hash::Hash;
use std::ops::{BitAnd, BitOr, BitXor, Not, Shl, Shr};

use crate::error::{Error, Result};

/// Radix descriptor: β = 2^`log2_beta`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct WordParams {
    log2_beta: u32,
}

impl WordParams {
    pub fn new(log2_beta: u32) -> Result<Self> {
        match log2_beta {
            8 | 16 | 32 | 64 => Ok(Self { log2_beta }),
            other => Err(Error::UnsupportedWordSize(other)),
        }
    }

    pub const fn of<W: Word>() -> Self {
        Self { log2_beta: W::BITS }
    }

    pub const fn log2_beta(&self) -> u32 {
        self.log2_beta
    }

    /// β itself. Always fits: the largest radix is 2^64.
    pub const fn beta(&self) -> u128 {
        1u128 << self.log2_beta
    }

    /// Largest value representable in one word, β − 1.
    pub const fn max_word(&self) -> u64 {
        (self.beta() - 1) as u64
    }
}

/// An unsigned machine word with wrapping arithmetic.
pub trait Word:
    Copy
    + Eq
    + Ord
    + Hash
    + Default
    + Debug
    + Display
    + Send
    + Sync
    + 'static
    + BitAnd<Output = Self>
    + BitOr<Output = Self>
    + BitXor<Output = Self>
    + Not<Output = Self>
    + Shl<u32, Output = Self>
    + Shr<u32, Output = Self>
{
    const BITS: u32;
    const ZERO: Self;
    const ONE: Self;
    const MAX: Self;

    /// Truncating conversion: keeps the low `BITS` bits.
    fn truncate_u64(v: u64) -> Self;
    fn to_u64(self) -> u64;

    fn wrapping_add(self, rhs: Self) -> Self;
    fn wrapping_sub(self, rhs: Self) -> Self;
    fn wrapping_mul(self, rhs: Self) -> Self;
    fn wrapping_neg(self) -> Self;

    /// Full product split into high and low words: `hi·β + lo = self·rhs`.
    fn mul_hi_lo(self, rhs: Self) -> (Self, Self);

    #[inline(always)]
    fn mul_hi(self, rhs: Self) -> Self {
        self.mul_hi_lo(rhs).0
    }

    fn try_from_u64(v: u64) -> Option<Self> {
        let w = Self::truncate_u64(v);
        (w.to_u64() == v).then_some(w)
    }

    fn params() -> WordParams {
        WordParams::of::<Self>()
    }
}

macro_rules! impl_word {
    ($t:ty, $wide:ty) => {
        impl Word for $t {
            const BITS: u32 = <$t>::BITS;
            const ZERO: Self = 0;
            const ONE: Self = 1;
            const MAX: Self = <$t>::MAX;

            #[inline(always)]
            fn truncate_u64(v: u64) -> Self {
                v as $t
            }
            #[inline(always)]
            fn to_u64(self) -> u64 {
                self as u64
            }
            #[inline(always)]
            fn wrapping_add(self, rhs: Self) -> Self {
                <$t>::wrapping_add(self, rhs)
            }
            #[inline(always)]
            fn wrapping_sub(self, rhs: Self) -> Self {
                <$t>::wrapping_sub(self, rhs)
            }
            #[inline(always)]
            fn wrapping_mul(self, rhs: Self) -> Self {
                <$t>::wrapping_mul(self, rhs)
            }
            #[inline(always)]
            fn wrapping_neg(self) -> Self {
                <$t>::wrapping_neg(self)
            }
            #[inline(always)]
            fn mul_hi_lo(self, rhs: Self) -> (Self, Self) {
                let prod = (self as $wide) * (rhs as $wide);
                ((prod >> <$t>::BITS) as $t, prod as $t)
            }
        }
    };
}

impl_word!(u8, u16);
impl_word!(u16, u32);
impl_word!(u32, u64);
impl_word!(u64, u128);

#[inline(always)]
pub fn mul_hi_lo<W: Word>(a: W, b: W) -> (W, W) {
    a.mul_hi_lo(b)
}

#[inline(always)]
pub fn add_mod_beta<W: Word>(a: W, b: W) -> W {
    a.wrapping_add(b)
}

#[inline(always)]
pub fn sub_mod_beta<W: Word>(a: W, b: W) -> W {
    a.wrapping_sub(b)
}

/// Branch-free `if cond { a } else { b }`.
#[inline(always)]
pub fn select<W: Word>(cond: bool, a: W, b: W) -> W {
    let mask = W::truncate_u64(cond as u64).wrapping_neg();
    b ^ ((a ^ b) & mask)
}

/// `x − bound` if `x ≥ bound`, else `x`. Branch-free.
#[inline(always)]
pub fn sub_if_geq<W: Word>(x: W, bound: W) -> W {
    select(x >= bound, x.wrapping_sub(bound), x)
}
