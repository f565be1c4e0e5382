//! Domain walkers for the butterfly kernels.
//!
//! For a given contract (one of [`Algorithm`]) the walker enumerates every
//! odd prime in the contract's validity class, every twiddle 0 < W < p and
//! every legal (X, Y), runs the kernel, and checks the outputs against the
//! congruence and the output interval with wide signed arithmetic. The
//! sums and differences each algorithm forms before reducing are also
//! recomputed exactly and must fit the word. On a small radix this is a
//! complete mechanical check of the kernel's correctness argument.

use std::fmt;
use std::io::{self, Write};

use rand::Rng;
use rayon::prelude::*;

use crate::butterfly::Algorithm;
use crate::error::Result;
use crate::field::{FieldContext, TwiddlePair};
use crate::word::{Word, WordParams};

/// How many counterexamples a summary keeps for reporting.
const KEPT_COUNTEREXAMPLES: usize = 32;

pub const VIOLATION_CSV_HEADER: &str = "algorithm,log2_beta,p,w,x,y,x_out,y_out,kind";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ViolationKind {
    /// An output is not congruent to its expected value mod p.
    Congruence,
    /// An output lies outside the promised interval, or an intermediate
    /// does not fit in [0, β).
    Interval,
}

impl fmt::Display for ViolationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Congruence => "congruence",
            Self::Interval => "interval",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Counterexample {
    pub p: u64,
    pub w: u64,
    pub x: u64,
    pub y: u64,
    pub output: (u64, u64),
    pub kind: ViolationKind,
}

impl fmt::Display for Counterexample {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} violation: p={} W={} X={} Y={} -> ({}, {})",
            self.kind, self.p, self.w, self.x, self.y, self.output.0, self.output.1
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExhaustiveSummary {
    pub algorithm: Algorithm,
    pub log2_beta: u32,
    pub primes: Vec<u64>,
    pub cases: u64,
    /// Cases with at least one violation of either kind.
    pub failing_cases: u64,
    pub congruence_violations: u64,
    pub interval_violations: u64,
    /// The first few counterexamples in walk order (ascending p, W, X, Y).
    pub counterexamples: Vec<Counterexample>,
}

impl ExhaustiveSummary {
    fn empty(algorithm: Algorithm, log2_beta: u32) -> Self {
        Self {
            algorithm,
            log2_beta,
            primes: Vec::new(),
            cases: 0,
            failing_cases: 0,
            congruence_violations: 0,
            interval_violations: 0,
            counterexamples: Vec::new(),
        }
    }

    pub fn violations(&self) -> u64 {
        self.failing_cases
    }

    pub fn is_clean(&self) -> bool {
        self.violations() == 0
    }

    pub fn first_counterexample(&self) -> Option<&Counterexample> {
        self.counterexamples.first()
    }

    fn record(&mut self, c: Counterexample, check: CaseCheck) {
        self.failing_cases += 1;
        self.congruence_violations += u64::from(!check.congruent);
        self.interval_violations += u64::from(!check.in_interval);
        if self.counterexamples.len() < KEPT_COUNTEREXAMPLES {
            self.counterexamples.push(c);
        }
    }

    fn merge(mut self, other: Self) -> Self {
        self.primes.extend(other.primes);
        self.cases += other.cases;
        self.failing_cases += other.failing_cases;
        self.congruence_violations += other.congruence_violations;
        self.interval_violations += other.interval_violations;
        let room = KEPT_COUNTEREXAMPLES.saturating_sub(self.counterexamples.len());
        self.counterexamples.extend(other.counterexamples.into_iter().take(room));
        self
    }

    /// One CSV row per kept counterexample, under [`VIOLATION_CSV_HEADER`].
    pub fn write_violation_csv<Wr: Write>(&self, out: &mut Wr) -> io::Result<()> {
        writeln!(out, "{VIOLATION_CSV_HEADER}")?;
        for c in &self.counterexamples {
            writeln!(
                out,
                "{},{},{},{},{},{},{},{},{}",
                self.algorithm.name(),
                self.log2_beta,
                c.p,
                c.w,
                c.x,
                c.y,
                c.output.0,
                c.output.1,
                c.kind
            )?;
        }
        Ok(())
    }
}

impl fmt::Display for ExhaustiveSummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} at beta=2^{}: {} primes, {} cases, {} congruence / {} interval violations",
            self.algorithm.name(),
            self.log2_beta,
            self.primes.len(),
            self.cases,
            self.congruence_violations,
            self.interval_violations
        )?;
        if let Some(c) = self.first_counterexample() {
            write!(f, "; first {c}")?;
        }
        Ok(())
    }
}

fn is_prime_by_trial(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
}

/// Odd primes p with p < β/divisor, where divisor comes from the
/// algorithm's validity class.
pub fn primes_in_class(log2_beta: u32, algorithm: Algorithm) -> Vec<u64> {
    let limit = (1u128 << log2_beta) / algorithm.required_class().divisor() as u128;
    (3..limit.min(1 << 20) as u64).filter(|&n| n % 2 == 1 && is_prime_by_trial(n)).collect()
}

/// Outcome of checking one butterfly evaluation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CaseCheck {
    pub congruent: bool,
    pub in_interval: bool,
}

impl CaseCheck {
    /// The reported kind; an interval failure is usually the cause of a
    /// congruence failure, so it wins.
    pub fn kind(self) -> Option<ViolationKind> {
        if !self.in_interval {
            Some(ViolationKind::Interval)
        } else if !self.congruent {
            Some(ViolationKind::Congruence)
        } else {
            None
        }
    }
}

/// The sums and differences `algorithm` forms on the way to its outputs,
/// as exact integers. Each must lie in [0, β) for wrapping word arithmetic
/// to compute it faithfully.
fn intermediates(algorithm: Algorithm, log2_beta: u32, p: u64, w: u64, x: u64, y: u64) -> [i128; 2] {
    let (p, x, y) = (p as i128, x as i128, y as i128);
    match algorithm {
        Algorithm::Baseline => [x + y, if x < y { x - y + p } else { x - y }],
        Algorithm::ShoupLazy | Algorithm::MontgomeryLazy => [x + y, x - y + 2 * p],
        Algorithm::InverseLazy => {
            let x = if x >= 2 * p { x - 2 * p } else { x };
            let w_shoup = ((w as u128) << log2_beta) / p as u128;
            let q = (w_shoup * y as u128) >> log2_beta;
            let t = w as i128 * y - q as i128 * p;
            [x + t, x - t + 2 * p]
        }
    }
}

/// Check one kernel evaluation against `algorithm`'s contract at β = 2^`log2_beta`.
pub fn check_case(algorithm: Algorithm, log2_beta: u32, p: u64, w: u64, x: u64, y: u64, out: (u64, u64)) -> CaseCheck {
    let (pi, wi, xi, yi) = (p as i128, w as i128, x as i128, y as i128);
    let (expect_a, expect_b) = if algorithm.is_inverse() {
        (xi + wi * yi, xi - wi * yi)
    } else {
        (xi + yi, wi * (xi - yi))
    };
    let congruent = (out.0 as i128 - expect_a).rem_euclid(pi) == 0
        && (out.1 as i128 - expect_b).rem_euclid(pi) == 0;
    let bound = algorithm.interval().bound(p);
    let beta = 1i128 << log2_beta;
    let in_interval = (out.0 as u128) < bound
        && (out.1 as u128) < bound
        && intermediates(algorithm, log2_beta, p, w, x, y).iter().all(|v| (0..beta).contains(v));
    CaseCheck { congruent, in_interval }
}

/// Twiddle precomputations done locally with wide division.
fn oracle_twiddle<W: Word>(w: u64, p: u64) -> TwiddlePair<W> {
    let scaled = (w as u128) << W::BITS;
    TwiddlePair::from_parts(
        W::truncate_u64(w),
        W::truncate_u64((scaled / p as u128) as u64),
        W::truncate_u64((scaled % p as u128) as u64),
    )
}

fn walk_one_prime<W, F>(algorithm: Algorithm, p: u64, kernel: &F) -> Result<ExhaustiveSummary>
where
    W: Word,
    F: Fn(W, W, &TwiddlePair<W>, &FieldContext<W>) -> (W, W) + Sync,
{
    let ctx = FieldContext::<W>::from_u64(p)?;
    debug_assert_eq!(ctx.j_inv().wrapping_mul(ctx.p()), W::ONE);
    let mut summary = ExhaustiveSummary::empty(algorithm, W::BITS);
    summary.primes.push(p);
    let input_bound = algorithm.interval().bound(p).min(1u128 << W::BITS) as u64;
    for w in 1..p {
        let tw = oracle_twiddle::<W>(w, p);
        for x in 0..input_bound {
            for y in 0..input_bound {
                let (a, b) = kernel(W::truncate_u64(x), W::truncate_u64(y), &tw, &ctx);
                let out = (a.to_u64(), b.to_u64());
                let check = check_case(algorithm, W::BITS, p, w, x, y, out);
                if let Some(kind) = check.kind() {
                    summary.record(Counterexample { p, w, x, y, output: out, kind }, check);
                }
            }
        }
        summary.cases += input_bound * input_bound;
    }
    Ok(summary)
}

/// Walk every (W, X, Y) for each prime in `primes`, checking `kernel`
/// against `algorithm`'s contract. Primes are processed in parallel and the
/// results merged in the given order.
pub fn walk_primes<W, F>(algorithm: Algorithm, primes: &[u64], kernel: F) -> Result<ExhaustiveSummary>
where
    W: Word,
    F: Fn(W, W, &TwiddlePair<W>, &FieldContext<W>) -> (W, W) + Sync,
{
    let parts: Vec<ExhaustiveSummary> = primes
        .par_iter()
        .map(|&p| walk_one_prime::<W, F>(algorithm, p, &kernel))
        .collect::<Result<_>>()?;
    Ok(parts
        .into_iter()
        .fold(ExhaustiveSummary::empty(algorithm, W::BITS), ExhaustiveSummary::merge))
}

/// Full-domain check of a shipped kernel at β = 2^8 or 2^16 over every odd
/// prime in its validity class.
///
/// At 16 bits the class-wide walk is far too large to finish; use
/// [`walk_primes`] with an explicit prime list there.
pub fn exhaustive_butterfly_check(log2_beta: u32, algorithm: Algorithm) -> Result<ExhaustiveSummary> {
    WordParams::new(log2_beta)?;
    let primes = primes_in_class(log2_beta, algorithm);
    match log2_beta {
        8 => walk_primes::<u8, _>(algorithm, &primes, |x, y, tw, ctx| algorithm.apply(x, y, tw, ctx)),
        16 => walk_primes::<u16, _>(algorithm, &primes, |x, y, tw, ctx| algorithm.apply(x, y, tw, ctx)),
        other => Err(crate::error::Error::UnsupportedWordSize(other)),
    }
}

/// Randomised check of a shipped kernel at full width `W`.
///
/// Draws `prime_count` random odd primes from the algorithm's validity
/// class and `trials_per_prime` random (W, X, Y) for each; a quarter of the
/// inputs are pinned to the ends of their interval.
pub fn sampled_butterfly_check<W: Word, R: Rng>(
    algorithm: Algorithm,
    prime_count: usize,
    trials_per_prime: usize,
    rng: &mut R,
) -> Result<ExhaustiveSummary> {
    let limit = (1u128 << W::BITS) / algorithm.required_class().divisor() as u128;
    let limit = (limit - 1) as u64;
    let mut summary = ExhaustiveSummary::empty(algorithm, W::BITS);
    while summary.primes.len() < prime_count {
        // Favour primes near the top of the class, where the bounds are tight.
        let candidate = if rng.gen_bool(0.5) {
            limit - rng.gen_range(0..limit.min(1 << 20))
        } else {
            rng.gen_range(3..=limit)
        } | 1;
        if candidate > limit || !crate::prime::is_prime(candidate) {
            continue;
        }
        let p = candidate;
        let ctx = FieldContext::<W>::from_u64(p)?;
        let input_bound = algorithm.interval().bound(p) as u64;
        let pick = |rng: &mut R| match rng.gen_range(0..8) {
            0 => 0,
            1 => input_bound - 1,
            _ => rng.gen_range(0..input_bound),
        };
        for _ in 0..trials_per_prime {
            let w = match rng.gen_range(0..8) {
                0 => 1,
                1 => p - 1,
                _ => rng.gen_range(1..p),
            };
            let (x, y) = (pick(rng), pick(rng));
            let tw = oracle_twiddle::<W>(w, p);
            let (a, b) = algorithm.apply(W::truncate_u64(x), W::truncate_u64(y), &tw, &ctx);
            let out = (a.to_u64(), b.to_u64());
            let check = check_case(algorithm, W::BITS, p, w, x, y, out);
            if let Some(kind) = check.kind() {
                summary.record(Counterexample { p, w, x, y, output: out, kind }, check);
            }
        }
        summary.cases += trials_per_prime as u64;
        summary.primes.push(p);
    }
    Ok(summary)
}
