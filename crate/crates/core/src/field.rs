//! Prime-field context and the per-twiddle precomputations used by the
//! butterflies.
//!
//! Nothing here sits on a transform's hot path: the operations below run
//! once per plan or once per twiddle, so they favour obviousness (`u128`
//! division) over speed.

use crate::error::{Error, Result};
use crate::prime::is_prime;
use crate::word::{select, Word, WordParams};

/// Which butterflies a modulus admits, from the tightest bound down.
///
/// The ordering is by strength: `QuarterBeta` satisfies every requirement,
/// `FullBeta` only its own.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ValidityClass {
    /// p < β/4: lazy butterflies over [0, 2p) and [0, 4p).
    QuarterBeta,
    /// p < β/2: the canonical Shoup butterfly.
    HalfBeta,
    /// p < β: borrow-based add/sub only.
    FullBeta,
}

impl ValidityClass {
    pub fn of<W: Word>(p: W) -> Self {
        let p = p.to_u64() as u128;
        let beta = W::params().beta();
        if 4 * p < beta {
            Self::QuarterBeta
        } else if 2 * p < beta {
            Self::HalfBeta
        } else {
            Self::FullBeta
        }
    }

    /// True when a modulus of this class meets `required`.
    pub fn satisfies(self, required: ValidityClass) -> bool {
        self <= required
    }

    pub fn divisor(self) -> u32 {
        match self {
            Self::QuarterBeta => 4,
            Self::HalfBeta => 2,
            Self::FullBeta => 1,
        }
    }
}

/// An odd prime modulus together with the constants the butterflies need.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FieldContext<W: Word> {
    p: W,
    /// 2p reduced mod β; meaningful only for p < β/2.
    two_p: W,
    /// J = p⁻¹ mod β.
    j_inv: W,
    class: ValidityClass,
}

impl<W: Word> FieldContext<W> {
    pub fn new(p: W) -> Result<Self> {
        let p64 = p.to_u64();
        if p64 < 3 || p64.is_multiple_of(2) || !is_prime(p64) {
            return Err(Error::NotOddPrime(p64));
        }
        Ok(Self {
            p,
            two_p: p.wrapping_add(p),
            j_inv: inverse_mod_beta(p)?,
            class: ValidityClass::of(p),
        })
    }

    pub fn from_u64(p: u64) -> Result<Self> {
        let w = W::try_from_u64(p).ok_or(Error::WordOverflow { value: p, bits: W::BITS })?;
        Self::new(w)
    }

    #[inline(always)]
    pub fn p(&self) -> W {
        self.p
    }

    #[inline(always)]
    pub fn two_p(&self) -> W {
        self.two_p
    }

    #[inline(always)]
    pub fn j_inv(&self) -> W {
        self.j_inv
    }

    pub fn class(&self) -> ValidityClass {
        self.class
    }

    pub fn word_params(&self) -> WordParams {
        W::params()
    }

    pub fn require(&self, required: ValidityClass, algorithm: &'static str) -> Result<()> {
        if self.class.satisfies(required) {
            Ok(())
        } else {
            Err(Error::ValidityClass { p: self.p.to_u64(), algorithm, divisor: required.divisor() })
        }
    }

    fn word(&self, v: u128) -> W {
        W::truncate_u64(v as u64)
    }

    /// Canonical residue of an arbitrary word.
    pub fn reduce(&self, x: W) -> W {
        self.word(x.to_u64() as u128 % self.p.to_u64() as u128)
    }

    /// Canonical `a·b mod p`.
    pub fn mul_mod(&self, a: W, b: W) -> W {
        self.word((a.to_u64() as u128 * b.to_u64() as u128) % self.p.to_u64() as u128)
    }

    pub fn mod_pow(&self, base: W, mut exp: u64) -> W {
        let mut acc = self.reduce(W::ONE);
        let mut base = self.reduce(base);
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul_mod(acc, base);
            }
            base = self.mul_mod(base, base);
            exp >>= 1;
        }
        acc
    }

    /// Multiplicative inverse by Fermat; `x` must be a unit.
    pub fn inv(&self, x: W) -> W {
        debug_assert!(self.reduce(x) != W::ZERO);
        self.mod_pow(x, self.p.to_u64() - 2)
    }

    /// `(x + y) mod p` for canonical inputs and any odd p < β.
    ///
    /// Computed as x − (p − y) with the borrow selecting the correction, so
    /// no intermediate ever exceeds β.
    #[inline]
    pub fn add_mod_p_full(&self, x: W, y: W) -> W {
        let d = self.p.wrapping_sub(y);
        let t = x.wrapping_sub(d);
        select(x < d, t.wrapping_add(self.p), t)
    }

    /// `(x − y) mod p` for canonical inputs and any odd p < β.
    #[inline]
    pub fn sub_mod_p_full(&self, x: W, y: W) -> W {
        let t = x.wrapping_sub(y);
        select(x < y, t.wrapping_add(self.p), t)
    }

    fn check_twiddle(&self, w: W) -> Result<()> {
        if w == W::ZERO || w >= self.p {
            Err(Error::TwiddleOutOfRange { w: w.to_u64(), p: self.p.to_u64() })
        } else {
            Ok(())
        }
    }

    /// W′ = ⌊W·β/p⌋, the unique value with W′p ≤ Wβ < (W′+1)p.
    pub fn shoup_precompute(&self, w: W) -> Result<W> {
        self.check_twiddle(w)?;
        let dividend = (w.to_u64() as u128) << W::BITS;
        Ok(self.word(dividend / self.p.to_u64() as u128))
    }

    /// βW mod p, the Montgomery form of W.
    pub fn montgomery_precompute(&self, w: W) -> Result<W> {
        self.check_twiddle(w)?;
        let dividend = (w.to_u64() as u128) << W::BITS;
        Ok(self.word(dividend % self.p.to_u64() as u128))
    }

    pub fn twiddle(&self, w: W) -> Result<TwiddlePair<W>> {
        Ok(TwiddlePair {
            w,
            w_shoup: self.shoup_precompute(w)?,
            w_mont: self.montgomery_precompute(w)?,
        })
    }

    /// The smallest ω ∈ [1, p) of exact multiplicative order L = 2^`ell`.
    ///
    /// A first root ω₀ = c^((p−1)/L) comes from the smallest c that passes
    /// the order check; every primitive L-th root is an odd power of ω₀, so
    /// scanning those L/2 powers yields the minimum independently of c.
    pub fn find_primitive_root_of_unity(&self, ell: u32) -> Result<W> {
        let p = self.p.to_u64();
        let no_root = Error::NoRootOfUnity { p, ell };
        if ell >= 64 || !(p - 1).is_multiple_of(1u64 << ell) {
            return Err(no_root);
        }
        if ell == 0 {
            return Ok(W::ONE);
        }
        let len = 1u64 << ell;
        let cofactor = (p - 1) / len;
        let minus_one = self.p.wrapping_sub(W::ONE);
        let first = (2..p)
            .map(|c| self.mod_pow(W::truncate_u64(c), cofactor))
            .find(|&w| self.mod_pow(w, len / 2) == minus_one)
            .ok_or(no_root)?;

        let step = self.mul_mod(first, first);
        let mut cur = first;
        let mut best = first;
        for _ in 1..len / 2 {
            cur = self.mul_mod(cur, step);
            best = best.min(cur);
        }
        Ok(best)
    }
}

/// A twiddle factor with both of its precomputed companions.
///
/// Stored adjacently so a butterfly's constants share a cache line.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
#[repr(C)]
pub struct TwiddlePair<W: Word> {
    /// W, with 0 < W < p.
    pub w: W,
    /// ⌊Wβ/p⌋.
    pub w_shoup: W,
    /// βW mod p.
    pub w_mont: W,
}

impl<W: Word> TwiddlePair<W> {
    /// Assemble a pair from externally computed parts, without validation.
    pub const fn from_parts(w: W, w_shoup: W, w_mont: W) -> Self {
        Self { w, w_shoup, w_mont }
    }
}

/// J = p⁻¹ mod β by Newton–Hensel lifting.
///
/// An odd p is its own inverse mod 8; each step doubles the number of
/// correct low bits, so five steps reach 96 ≥ 64 bits.
pub fn inverse_mod_beta<W: Word>(p: W) -> Result<W> {
    if p.to_u64() & 1 == 0 {
        return Err(Error::EvenModulus(p.to_u64()));
    }
    let two = W::truncate_u64(2);
    let mut j = p;
    for _ in 0..5 {
        j = j.wrapping_mul(two.wrapping_sub(p.wrapping_mul(j)));
    }
    Ok(j)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx16(p: u16) -> FieldContext<u16> {
        FieldContext::new(p).unwrap()
    }

    #[test]
    fn rejects_non_primes() {
        assert_eq!(FieldContext::<u16>::new(15), Err(Error::NotOddPrime(15)));
        assert_eq!(FieldContext::<u16>::new(2), Err(Error::NotOddPrime(2)));
        assert_eq!(FieldContext::<u16>::new(1), Err(Error::NotOddPrime(1)));
        assert!(matches!(FieldContext::<u8>::from_u64(257), Err(Error::WordOverflow { .. })));
    }

    #[test]
    fn validity_classes() {
        assert_eq!(ValidityClass::of(61u8), ValidityClass::QuarterBeta);
        assert_eq!(ValidityClass::of(67u8), ValidityClass::HalfBeta);
        assert_eq!(ValidityClass::of(127u8), ValidityClass::HalfBeta);
        assert_eq!(ValidityClass::of(131u8), ValidityClass::FullBeta);
        assert_eq!(ValidityClass::of(65521u16), ValidityClass::FullBeta);
        assert!(ValidityClass::QuarterBeta.satisfies(ValidityClass::HalfBeta));
        assert!(!ValidityClass::HalfBeta.satisfies(ValidityClass::QuarterBeta));
        let ctx = FieldContext::new(67u8).unwrap();
        assert!(ctx.require(ValidityClass::HalfBeta, "x").is_ok());
        assert!(matches!(
            ctx.require(ValidityClass::QuarterBeta, "x"),
            Err(Error::ValidityClass { p: 67, divisor: 4, .. })
        ));
    }

    #[test]
    fn shoup_precompute_examples() {
        assert_eq!(ctx16(17).shoup_precompute(3), Ok(11565));
        assert_eq!(ctx16(5).shoup_precompute(1), Ok(13107));
        assert_eq!(ctx16(17).shoup_precompute(16), Ok(61680));
        assert!(ctx16(17).shoup_precompute(0).is_err());
        assert!(ctx16(17).shoup_precompute(17).is_err());
    }

    #[test]
    fn montgomery_precompute_examples() {
        assert_eq!(ctx16(17).montgomery_precompute(3), Ok(3));
        // 65536 = 13·5041 + 3
        assert_eq!(ctx16(13).montgomery_precompute(1), Ok(3));
        assert!(ctx16(13).montgomery_precompute(0).is_err());
        let ctx = ctx16(65521);
        for w in 1..65521u16 {
            assert_ne!(ctx.montgomery_precompute(w).unwrap(), 0);
        }
    }

    #[test]
    fn inverse_mod_beta_examples() {
        assert_eq!(inverse_mod_beta(1u16), Ok(1));
        assert_eq!(inverse_mod_beta(17u16), Ok(61681));
        assert_eq!(inverse_mod_beta(13u16), Ok(20165));
        assert_eq!(inverse_mod_beta(10u16), Err(Error::EvenModulus(10)));
        let p = 4_611_686_018_427_365_377u64;
        assert_eq!(p.wrapping_mul(inverse_mod_beta(p).unwrap()), 1);
    }

    #[test]
    fn inverse_mod_beta_exhaustive_u8() {
        for p in (1..=255u8).step_by(2) {
            assert_eq!(p.wrapping_mul(inverse_mod_beta(p).unwrap()), 1, "p = {p}");
        }
    }

    #[test]
    fn shoup_bound_exhaustive_u8() {
        // 0 ≤ Wβ/p − W′ < 1, i.e. W′p ≤ Wβ < (W′+1)p.
        for p in (3..=255u32).filter(|&p| is_prime(p as u64)) {
            let ctx = FieldContext::new(p as u8).unwrap();
            for w in 1..p {
                let ws = ctx.shoup_precompute(w as u8).unwrap() as u32;
                assert!(ws * p <= w * 256 && w * 256 < (ws + 1) * p, "p={p} w={w}");
            }
        }
    }

    #[test]
    fn mod_pow_examples() {
        let c97 = FieldContext::new(97u64).unwrap();
        let c13 = FieldContext::new(13u64).unwrap();
        assert_eq!(c97.mod_pow(5, 12), 64);
        assert_eq!(c13.mod_pow(5, 2), 12);
        for x in 1..13 {
            assert_eq!(c13.mod_pow(x, 0), 1);
            assert_eq!(c13.mul_mod(x, c13.inv(x)), 1);
        }
    }

    #[test]
    fn primitive_root_examples() {
        let c13 = FieldContext::new(13u64).unwrap();
        let c97 = FieldContext::new(97u64).unwrap();
        assert_eq!(c13.find_primitive_root_of_unity(0), Ok(1));
        assert_eq!(c13.find_primitive_root_of_unity(1), Ok(12));
        // Order-4 elements mod 13 are {5, 8}; order-8 elements mod 97 are {33, 47, 50, 64}.
        assert_eq!(c13.find_primitive_root_of_unity(2), Ok(5));
        assert_eq!(c97.find_primitive_root_of_unity(3), Ok(33));
        assert_eq!(c97.find_primitive_root_of_unity(5), c97.find_primitive_root_of_unity(5));
        assert_eq!(
            c13.find_primitive_root_of_unity(3),
            Err(Error::NoRootOfUnity { p: 13, ell: 3 })
        );
    }

    #[test]
    fn primitive_root_order_u8_exhaustive() {
        for p in (3..=255u64).filter(|&p| is_prime(p)) {
            let ctx = FieldContext::<u8>::from_u64(p).unwrap();
            let max_ell = (p - 1).trailing_zeros();
            for ell in 0..=max_ell + 1 {
                match ctx.find_primitive_root_of_unity(ell) {
                    Ok(w) => {
                        assert!(ell <= max_ell);
                        let len = 1u64 << ell;
                        assert_eq!(ctx.mod_pow(w, len), 1);
                        if ell > 0 {
                            assert_eq!(ctx.mod_pow(w, len / 2) as u64, p - 1);
                        }
                        // Nothing smaller has exact order L.
                        for v in 1..w {
                            let exact = ctx.mod_pow(v, len) == 1
                                && (ell == 0 || ctx.mod_pow(v, len / 2) as u64 == p - 1);
                            assert!(!exact, "p={p} ell={ell} smaller root {v}");
                        }
                    }
                    Err(_) => assert!(ell > max_ell),
                }
            }
        }
    }

    #[test]
    fn root_for_62_bit_prime() {
        let ctx = FieldContext::new(4_611_686_018_427_365_377u64).unwrap();
        // Minimum over the 1024 primitive 2048-th roots, from a big-integer scan.
        assert_eq!(ctx.find_primitive_root_of_unity(11), Ok(4_263_801_380_435_193));
    }

    #[test]
    fn add_sub_full_examples() {
        let c = ctx16(65521);
        assert_eq!(c.add_mod_p_full(0, 0), 0);
        assert_eq!(c.add_mod_p_full(65520, 65520), 65519);
        assert_eq!(c.sub_mod_p_full(0, 1), 65520);
    }

    #[test]
    fn add_sub_full_exhaustive_u8() {
        for p in (3..=255u32).filter(|&p| is_prime(p as u64)) {
            let ctx = FieldContext::new(p as u8).unwrap();
            for x in 0..p {
                for y in 0..p {
                    assert_eq!(ctx.add_mod_p_full(x as u8, y as u8) as u32, (x + y) % p);
                    assert_eq!(ctx.sub_mod_p_full(x as u8, y as u8) as u32, (x + p - y) % p);
                }
            }
        }
    }
}
