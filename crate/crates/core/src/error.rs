use thiserror::Error;

use crate::butterfly::IntervalTag;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("unsupported word size 2^{0}; expected 8, 16, 32 or 64 bits")]
    UnsupportedWordSize(u32),

    #[error("modulus {0} is not an odd prime")]
    NotOddPrime(u64),

    #[error("modulus {0} is even; no inverse modulo the word radix")]
    EvenModulus(u64),

    #[error("value {value} does not fit in a {bits}-bit word")]
    WordOverflow { value: u64, bits: u32 },

    #[error("twiddle {w} outside (0, {p})")]
    TwiddleOutOfRange { w: u64, p: u64 },

    #[error("no primitive 2^{ell}-th root of unity modulo {p} (need p ≡ 1 mod 2^{ell})")]
    NoRootOfUnity { p: u64, ell: u32 },

    #[error("no {bits}-bit prime p ≡ 1 mod 2^{ell} fits a {word_bits}-bit word")]
    SearchExhausted { bits: u32, ell: u32, word_bits: u32 },

    #[error("modulus {p} is too large for {algorithm}: requires p < β/{divisor}")]
    ValidityClass { p: u64, algorithm: &'static str, divisor: u32 },

    #[error("length mismatch: expected {expected}, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },

    #[error("length {0} is not a power of two")]
    NotPowerOfTwo(usize),

    #[error("input tagged {actual:?} but the transform accepts at most {accepted:?}")]
    TagMismatch { accepted: IntervalTag, actual: IntervalTag },

    #[error("residue {value} at index {index} is not below {bound}")]
    ResidueOutOfRange { index: usize, value: u64, bound: u128 },

    #[error("transform length 2^{ell} is unavailable for modulus {p}")]
    TransformTooLong { p: u64, ell: u32 },
}
