//! Primality and NTT-friendly prime search.

use crate::error::{Error, Result};
use crate::word::WordParams;

/// Witness set that makes Miller–Rabin deterministic for every n < 3.3·10^24,
/// in particular for all 64-bit inputs.
const MR_WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

#[inline]
fn mul_mod_u64(a: u64, b: u64, n: u64) -> u64 {
    ((a as u128 * b as u128) % n as u128) as u64
}

fn pow_mod_u64(mut base: u64, mut exp: u64, n: u64) -> u64 {
    let mut acc = 1 % n;
    base %= n;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod_u64(acc, base, n);
        }
        base = mul_mod_u64(base, base, n);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller–Rabin for 64-bit integers.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &q in &MR_WITNESSES {
        if n.is_multiple_of(q) {
            return n == q;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &MR_WITNESSES {
        let mut x = pow_mod_u64(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod_u64(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SearchDirection {
    SmallestAbove,
    LargestBelow,
}

/// Find a prime p ≡ 1 (mod 2^`ell`) with exactly `target_bits` bits,
/// i.e. 2^(bits−1) ≤ p < 2^bits, that fits a word of `wp`.
///
/// `SmallestAbove` returns the least such prime, `LargestBelow` the greatest.
pub fn find_ntt_prime(
    wp: WordParams,
    target_bits: u32,
    ell: u32,
    direction: SearchDirection,
) -> Result<u64> {
    let exhausted = Error::SearchExhausted { bits: target_bits, ell, word_bits: wp.log2_beta() };
    if target_bits < 2 || target_bits > wp.log2_beta() || ell >= target_bits {
        return Err(exhausted);
    }
    let lo = 1u128 << (target_bits - 1);
    let hi = (1u128 << target_bits) - 1; // inclusive
    let step = 1u128 << ell;

    // Candidates are 1 + k·step inside [lo, hi].
    let k_min = (lo - 1).div_ceil(step);
    let k_max = (hi - 1) / step;
    if k_min > k_max {
        return Err(exhausted);
    }
    let candidate = |k: u128| (1 + k * step) as u64;
    let found = match direction {
        SearchDirection::SmallestAbove => (k_min..=k_max).map(candidate).find(|&c| is_prime(c)),
        SearchDirection::LargestBelow => (k_min..=k_max).rev().map(candidate).find(|&c| is_prime(c)),
    };
    found.ok_or(exhausted)
}
