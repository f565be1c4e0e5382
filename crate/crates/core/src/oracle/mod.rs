//! Brute-force references for the fast paths.
//!
//! Everything here is deliberately naive: quadratic loops, wide integers,
//! and its own modular helpers. Nothing in this module calls into the
//! transform, butterfly or field code it is used to check, except that the
//! butterfly walkers invoke the kernel under test.

mod exhaustive;

pub use exhaustive::{
    check_case, CaseCheck, exhaustive_butterfly_check, primes_in_class, sampled_butterfly_check, walk_primes,
    Counterexample, ExhaustiveSummary, ViolationKind, VIOLATION_CSV_HEADER,
};

/// Exact accumulator for sums of up to 2^64 products of 64-bit words:
/// a 192-bit integer held as a `u128` low part and a `u64` carry count.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct WideAcc {
    lo: u128,
    hi: u64,
}

impl WideAcc {
    pub fn add(&mut self, term: u128) {
        let (lo, carry) = self.lo.overflowing_add(term);
        self.lo = lo;
        self.hi += carry as u64;
    }

    pub fn add_product(&mut self, a: u64, b: u64) {
        self.add(a as u128 * b as u128);
    }

    /// (hi·2^128 + lo) mod p.
    pub fn reduce(&self, p: u64) -> u64 {
        let p = p as u128;
        // 2^128 mod p = ((2^64 mod p)^2) mod p
        let r64 = (1u128 << 64) % p;
        let r128 = r64 * r64 % p;
        let hi = self.hi as u128 % p * r128 % p;
        ((hi + self.lo % p) % p) as u64
    }
}

pub fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    (a as u128 * b as u128 % p as u128) as u64
}

pub fn pow_mod(base: u64, exp: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    for bit in (0..64).rev() {
        acc = mul_mod(acc, acc, p);
        if exp >> bit & 1 == 1 {
            acc = mul_mod(acc, base % p, p);
        }
    }
    acc
}

/// Inverse by the extended Euclidean algorithm; `a` must be a unit mod p.
pub fn inv_mod(a: u64, p: u64) -> u64 {
    let (mut r0, mut r1) = (p as i128, (a % p) as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    assert_eq!(r0, 1, "{a} is not invertible mod {p}");
    t0.rem_euclid(p as i128) as u64
}

/// b_j = Σ_i ω^(ij) a_i in natural order, accumulated exactly and reduced once.
pub fn naive_dft(a: &[u64], omega: u64, p: u64) -> Vec<u64> {
    let len = a.len();
    let mut powers = Vec::with_capacity(len);
    let mut cur = 1 % p;
    for _ in 0..len {
        powers.push(cur);
        cur = mul_mod(cur, omega, p);
    }
    (0..len)
        .map(|j| {
            let mut acc = WideAcc::default();
            for (i, &ai) in a.iter().enumerate() {
                acc.add_product(powers[i * j % len], ai);
            }
            acc.reduce(p)
        })
        .collect()
}

/// Exact product of two polynomials, coefficients reduced mod p.
pub fn schoolbook_polymul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    (0..a.len() + b.len() - 1)
        .map(|k| {
            let mut acc = WideAcc::default();
            let lo = k.saturating_sub(b.len() - 1);
            let hi = k.min(a.len() - 1);
            for i in lo..=hi {
                acc.add_product(a[i], b[k - i]);
            }
            acc.reduce(p)
        })
        .collect()
}

/// Fold a coefficient vector modulo x^len − 1.
pub fn fold_cyclic(c: &[u64], len: usize, p: u64) -> Vec<u64> {
    let mut out = vec![0u64; len];
    for (i, &v) in c.iter().enumerate() {
        let slot = &mut out[i % len];
        *slot = ((*slot as u128 + v as u128) % p as u128) as u64;
    }
    out
}

/// Permute a natural-order vector into bit-reversed order.
pub fn to_bit_reversed(v: &[u64]) -> Vec<u64> {
    let len = v.len();
    assert!(len.is_power_of_two());
    let bits = len.trailing_zeros();
    (0..len)
        .map(|j| {
            let mut r = 0;
            for b in 0..bits {
                r |= ((j >> b) & 1) << (bits - 1 - b);
            }
            v[r]
        })
        .collect()
}
