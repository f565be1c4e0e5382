//! Number-theoretic transforms over word-sized primes with lazy-reduction
//! butterflies.
//!
//! Residues may be kept in the redundant intervals [0, 2p) (forward) and
//! [0, 4p) (inverse) between butterflies, which removes most conditional
//! corrections from the inner loop. All kernels are generic over the
//! machine word ([`word::Word`]), so the same code is checked exhaustively
//! on 8-bit words and run natively on 64-bit words.
//!
//! ```
//! use lazy_ntt::{FieldContext, NttPlan, ResidueVec, Strategy};
//!
//! let ctx = FieldContext::new(13u64).unwrap();
//! let plan = NttPlan::new(ctx, 2, Strategy::ShoupLazy).unwrap();
//! let mut v = ResidueVec::canonical(vec![1, 2, 3, 4], &ctx).unwrap();
//! plan.forward(&mut v).unwrap();
//! v.normalize(&ctx);
//! assert_eq!(v.as_slice(), &[10, 11, 1, 8]); // bit-reversed DFT with ω = 5
//! ```

pub mod butterfly;
pub mod cli;
pub mod error;
pub mod field;
pub mod ntt;
pub mod oracle;
pub mod polymul;
pub mod prime;
pub mod word;

pub use butterfly::{Algorithm, IntervalTag, Residue};
pub use error::{Error, Result};
pub use field::{FieldContext, TwiddlePair, ValidityClass};
pub use ntt::{normalize, AuditReport, NttPlan, PlanOptions, ResidueVec, Strategy};
pub use polymul::{cyclic_convolve, polymul_mod_p};
pub use prime::{find_ntt_prime, is_prime, SearchDirection};
pub use word::{Word, WordParams};
