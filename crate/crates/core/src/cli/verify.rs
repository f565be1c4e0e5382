//! Self-test runner behind `lazy-ntt verify`.

use std::io::{self, Write};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::butterfly::Algorithm;
use crate::field::FieldContext;
use crate::ntt::{NttPlan, ResidueVec, Strategy};
use crate::oracle::{self, ExhaustiveSummary, VIOLATION_CSV_HEADER};
use crate::polymul::polymul_mod_p;
use crate::prime::is_prime;
use crate::Result;

/// 62-bit prime ≡ 1 mod 2^11 used by the transform-level checks.
const P62: u64 = 4_611_686_018_427_365_377;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum VerifyLevel {
    Quick,
    Exhaustive,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Default)]
pub struct VerifyReport {
    pub checks: Vec<CheckResult>,
    /// Butterfly walks whose counterexamples count as failures.
    pub summaries: Vec<ExhaustiveSummary>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    fn push(&mut self, name: impl Into<String>, passed: bool, detail: impl Into<String>) {
        self.checks.push(CheckResult { name: name.into(), passed, detail: detail.into() });
    }

    fn push_summary(&mut self, name: String, s: ExhaustiveSummary) {
        let detail = match s.first_counterexample() {
            None => format!("{} cases over {} primes", s.cases, s.primes.len()),
            Some(c) => format!(
                "{} violations in {} cases; first at p={} W={} X={} Y={} -> ({}, {}) [{}]",
                s.violations(),
                s.cases,
                c.p,
                c.w,
                c.x,
                c.y,
                c.output.0,
                c.output.1,
                c.kind
            ),
        };
        self.push(name, s.is_clean(), detail);
        self.summaries.push(s);
    }

    pub fn write_text<Wr: Write>(&self, out: &mut Wr) -> io::Result<()> {
        for c in &self.checks {
            let mark = if c.passed { "PASS" } else { "FAIL" };
            writeln!(out, "{mark}  {:<34} {}", c.name, c.detail)?;
        }
        Ok(())
    }

    /// Every kept butterfly counterexample, as one CSV table.
    pub fn write_violation_csv<Wr: Write>(&self, out: &mut Wr) -> io::Result<()> {
        writeln!(out, "{VIOLATION_CSV_HEADER}")?;
        for s in &self.summaries {
            let mut buf = Vec::new();
            s.write_violation_csv(&mut buf)?;
            let text = String::from_utf8_lossy(&buf);
            for line in text.lines().skip(1) {
                writeln!(out, "{line}")?;
            }
        }
        Ok(())
    }
}

fn random_vec(rng: &mut ChaCha8Rng, len: usize, p: u64) -> Vec<u64> {
    (0..len).map(|_| rng.gen_range(0..p)).collect()
}

fn check_against_dft(report: &mut VerifyReport, rng: &mut ChaCha8Rng, max_ell: u32, per_size: usize) -> Result<()> {
    let ctx = FieldContext::new(P62)?;
    for strategy in Strategy::ALL {
        let mut compared = 0usize;
        let mut failure = None;
        'sizes: for ell in 0..=max_ell {
            let plan = NttPlan::new(ctx, ell, strategy)?;
            for _ in 0..per_size {
                let a = random_vec(rng, plan.len(), P62);
                let want = oracle::to_bit_reversed(&oracle::naive_dft(&a, plan.omega(), P62));
                let mut v = ResidueVec::canonical(a, &ctx)?;
                plan.forward(&mut v)?;
                v.normalize(&ctx);
                compared += 1;
                if v.as_slice() != want.as_slice() {
                    failure = Some(ell);
                    break 'sizes;
                }
            }
        }
        let detail = match failure {
            None => format!("{compared} vectors, L = 1..{}", 1u64 << max_ell),
            Some(ell) => format!("mismatch against direct DFT at L = {}", 1u64 << ell),
        };
        report.push(format!("ntt-vs-dft/{strategy}"), failure.is_none(), detail);
    }
    Ok(())
}

fn check_round_trip(report: &mut VerifyReport, rng: &mut ChaCha8Rng, ell: u32, count: usize) -> Result<()> {
    let ctx = FieldContext::new(P62)?;
    for strategy in Strategy::ALL {
        let plan = NttPlan::new(ctx, ell, strategy)?;
        let mut bad = 0;
        for _ in 0..count {
            let a = random_vec(rng, plan.len(), P62);
            let mut v = ResidueVec::canonical(a.clone(), &ctx)?;
            plan.forward(&mut v)?;
            plan.inverse(&mut v)?;
            plan.scale(&mut v)?;
            bad += usize::from(v.as_slice() != a.as_slice());
        }
        report.push(
            format!("round-trip/{strategy}"),
            bad == 0,
            format!("{} of {count} vectors at L = {}", count - bad, plan.len()),
        );
    }
    Ok(())
}

fn check_polymul(report: &mut VerifyReport, rng: &mut ChaCha8Rng, max_total: usize, count: usize) -> Result<()> {
    let ctx = FieldContext::new(P62)?;
    for strategy in Strategy::ALL {
        let mut bad = None;
        for _ in 0..count {
            let la = rng.gen_range(1..max_total);
            let lb = rng.gen_range(1..=max_total - la);
            let a = random_vec(rng, la, P62);
            let b = random_vec(rng, lb, P62);
            let got = polymul_mod_p(&a, &b, &ctx, |ell| NttPlan::new(ctx, ell, strategy))?;
            if got != oracle::schoolbook_polymul(&a, &b, P62) {
                bad = Some((la, lb));
                break;
            }
        }
        let detail = match bad {
            None => format!("{count} products, total length <= {max_total}"),
            Some((la, lb)) => format!("mismatch against schoolbook for lengths {la} x {lb}"),
        };
        report.push(format!("polymul/{strategy}"), bad.is_none(), detail);
    }
    Ok(())
}

fn check_audit(report: &mut VerifyReport, rng: &mut ChaCha8Rng, ell: u32) -> Result<()> {
    let ctx = FieldContext::new(P62)?;
    for strategy in Strategy::ALL {
        let plan = NttPlan::new(ctx, ell, strategy)?;
        let mut v = ResidueVec::canonical(random_vec(rng, plan.len(), P62), &ctx)?;
        let fwd = plan.forward_audited(&mut v)?;
        let inv = plan.inverse_audited(&mut v)?;
        let detail = match fwd.first_violation.or(inv.first_violation) {
            None => format!("{} butterflies in bounds", fwd.butterflies + inv.butterflies),
            Some(v) => format!("stage {} W={} in={:?} out={:?}", v.stage, v.w, v.input, v.output),
        };
        report.push(format!("audit/{strategy}"), fwd.is_clean() && inv.is_clean(), detail);
    }
    Ok(())
}

/// Primes in (β/4, β/2) at β = 2^8: outside lazy Shoup's validity class.
pub fn negative_control_primes() -> Vec<u64> {
    (65..128).filter(|&p| is_prime(p)).collect()
}

/// Lazy Shoup walked over primes it does not support; must report violations.
pub fn negative_control() -> Result<ExhaustiveSummary> {
    oracle::walk_primes::<u8, _>(Algorithm::ShoupLazy, &negative_control_primes(), |x, y, tw, ctx| {
        Algorithm::ShoupLazy.apply(x, y, tw, ctx)
    })
}

pub fn run_verify(level: VerifyLevel, seed: u64) -> Result<VerifyReport> {
    let mut report = VerifyReport::default();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    for alg in Algorithm::ALL {
        let s = oracle::exhaustive_butterfly_check(8, alg)?;
        report.push_summary(format!("butterfly-exhaustive-8/{}", alg.name()), s);
    }
    let (primes, trials) = match level {
        VerifyLevel::Quick => (16, 4_000),
        VerifyLevel::Exhaustive => (64, 50_000),
    };
    for alg in Algorithm::ALL {
        let s = oracle::sampled_butterfly_check::<u64, _>(alg, primes, trials, &mut rng)?;
        report.push_summary(format!("butterfly-sampled-64/{}", alg.name()), s);
    }

    if level == VerifyLevel::Exhaustive {
        let small: Vec<u64> = [17, 97, 193, 257].into();
        for alg in Algorithm::ALL {
            let s = oracle::walk_primes::<u16, _>(alg, &small, |x, y, tw, ctx| alg.apply(x, y, tw, ctx))?;
            report.push_summary(format!("butterfly-exhaustive-16/{}", alg.name()), s);
        }
        let control = negative_control()?;
        report.push(
            "negative-control/shoup-lazy",
            !control.is_clean(),
            format!("{} violations expected and found over {} primes", control.violations(), control.primes.len()),
        );
    }

    let (max_ell, per_size, trips, products) = match level {
        VerifyLevel::Quick => (8, 4, 50, 30),
        VerifyLevel::Exhaustive => (10, 100, 1_000, 200),
    };
    check_against_dft(&mut report, &mut rng, max_ell, per_size)?;
    check_round_trip(&mut report, &mut rng, 10, trips)?;
    check_polymul(&mut report, &mut rng, 1 << max_ell, products)?;
    check_audit(&mut report, &mut rng, 11)?;
    Ok(report)
}
