//! Cycles-per-butterfly benchmark.
//!
//! Each trial copies a fixed, seeded input into the working buffer (untimed)
//! and then times exactly one forward transform. Plans and their twiddle
//! tables are built before any timing, and no bit-reversal is performed.
//! Per-butterfly figures divide the transform time by ℓ·L/2.

use std::hint::black_box;
use std::io::{self, Write};
use std::time::Instant;

use anyhow::{bail, Context};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::field::FieldContext;
use crate::ntt::{NttPlan, PlanOptions, Strategy};
use crate::prime::{find_ntt_prime, SearchDirection};
use crate::word::WordParams;

pub const CSV_HEADER: &str = "strategy,p,ell,trials,ns_per_butterfly,cycles_per_butterfly";

/// Environment variable naming a CPU to pin the benchmark thread to.
pub const PIN_CPU_ENV: &str = "LAZY_NTT_PIN_CPU";

#[derive(Clone, Debug)]
pub struct BenchConfig {
    pub ell: u32,
    pub strategies: Vec<Strategy>,
    pub trials: usize,
    pub warmup: usize,
    /// Modulus; defaults to the largest 62-bit prime ≡ 1 mod 2^ℓ.
    pub p: Option<u64>,
    pub seed: u64,
    pub options: PlanOptions,
}

impl Default for BenchConfig {
    fn default() -> Self {
        Self {
            ell: 11,
            strategies: Strategy::ALL.to_vec(),
            trials: 1000,
            warmup: 50,
            p: None,
            seed: 0x5eed,
            options: PlanOptions::default(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BenchRow {
    pub strategy: Strategy,
    pub p: u64,
    pub ell: u32,
    pub trials: usize,
    pub butterflies: u64,
    pub median_ns_per_butterfly: f64,
    pub min_ns_per_butterfly: f64,
    /// Median time-stamp-counter ticks per butterfly, where a counter exists.
    pub cycles_per_butterfly: Option<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BenchReport {
    pub rows: Vec<BenchRow>,
}

impl BenchReport {
    fn row(&self, strategy: Strategy) -> Option<&BenchRow> {
        self.rows.iter().find(|r| r.strategy == strategy)
    }

    /// Whether lazy Shoup is no slower than the baseline (median ns), when
    /// both were measured.
    pub fn shoup_not_slower(&self) -> Option<bool> {
        let base = self.row(Strategy::Baseline)?;
        let lazy = self.row(Strategy::ShoupLazy)?;
        Some(lazy.median_ns_per_butterfly <= base.median_ns_per_butterfly)
    }

    pub fn write_csv<W: Write>(&self, out: &mut W) -> io::Result<()> {
        writeln!(out, "{CSV_HEADER}")?;
        for r in &self.rows {
            let cycles = r.cycles_per_butterfly.map(|c| format!("{c:.3}")).unwrap_or_default();
            writeln!(
                out,
                "{},{},{},{},{:.4},{}",
                r.strategy, r.p, r.ell, r.trials, r.median_ns_per_butterfly, cycles
            )?;
        }
        Ok(())
    }

    pub fn write_table<W: Write>(&self, out: &mut W) -> io::Result<()> {
        writeln!(
            out,
            "{:<16} {:>12} {:>12} {:>14}",
            "strategy", "median ns/bf", "min ns/bf", "cycles/bf"
        )?;
        for r in &self.rows {
            let cycles = r.cycles_per_butterfly.map(|c| format!("{c:.2}")).unwrap_or_else(|| "-".into());
            writeln!(
                out,
                "{:<16} {:>12.3} {:>12.3} {:>14}",
                r.strategy.name(),
                r.median_ns_per_butterfly,
                r.min_ns_per_butterfly,
                cycles
            )?;
        }
        if let Some(first) = self.rows.first() {
            writeln!(
                out,
                "p = {}, L = 2^{} = {}, {} butterflies per transform, {} trials",
                first.p,
                first.ell,
                1u64 << first.ell,
                first.butterflies,
                first.trials
            )?;
        }
        match self.shoup_not_slower() {
            Some(true) => writeln!(out, "shoup-lazy <= baseline per butterfly: yes")?,
            Some(false) => writeln!(out, "shoup-lazy <= baseline per butterfly: NO")?,
            None => {}
        }
        Ok(())
    }
}

/// Deterministic benchmark input: `len` residues below p from a seeded ChaCha stream.
pub fn bench_input(seed: u64, p: u64, len: usize) -> Vec<u64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..len).map(|_| rng.gen_range(0..p)).collect()
}

/// The benchmark's default modulus for transform length 2^ell.
pub fn default_prime(ell: u32) -> crate::Result<u64> {
    find_ntt_prime(WordParams::of::<u64>(), 62, ell, SearchDirection::LargestBelow)
}

#[cfg(target_arch = "x86_64")]
#[inline(always)]
fn cycle_counter() -> Option<u64> {
    // SAFETY: rdtsc has no preconditions on x86_64.
    Some(unsafe { core::arch::x86_64::_rdtsc() })
}

#[cfg(not(target_arch = "x86_64"))]
#[inline(always)]
fn cycle_counter() -> Option<u64> {
    None
}

/// Pin to the CPU named by [`PIN_CPU_ENV`], if set. Returns the CPU used.
pub fn pin_from_env() -> Option<usize> {
    let cpu: usize = std::env::var(PIN_CPU_ENV).ok()?.trim().parse().ok()?;
    pin_to_cpu(cpu).then_some(cpu)
}

#[cfg(target_os = "linux")]
fn pin_to_cpu(cpu: usize) -> bool {
    // SAFETY: cpu_set_t is plain data; sched_setaffinity reads it.
    unsafe {
        let mut set: libc::cpu_set_t = std::mem::zeroed();
        libc::CPU_SET(cpu, &mut set);
        libc::sched_setaffinity(0, std::mem::size_of::<libc::cpu_set_t>(), &set) == 0
    }
}

#[cfg(not(target_os = "linux"))]
fn pin_to_cpu(_cpu: usize) -> bool {
    false
}

fn median(sorted: &[f64]) -> f64 {
    let n = sorted.len();
    if n % 2 == 1 {
        sorted[n / 2]
    } else {
        (sorted[n / 2 - 1] + sorted[n / 2]) / 2.0
    }
}

pub fn run_bench(cfg: &BenchConfig) -> anyhow::Result<BenchReport> {
    if cfg.trials == 0 {
        bail!("trials must be positive");
    }
    if cfg.strategies.is_empty() {
        bail!("no strategies selected");
    }
    let p = match cfg.p {
        Some(p) => p,
        None => default_prime(cfg.ell).context("finding default prime")?,
    };
    let ctx = FieldContext::<u64>::new(p).context("invalid modulus")?;
    let plans = cfg
        .strategies
        .iter()
        .map(|&s| NttPlan::with_options(ctx, cfg.ell, s, cfg.options))
        .collect::<crate::Result<Vec<_>>>()
        .with_context(|| format!("invalid p/ell combination (p = {p}, ell = {})", cfg.ell))?;

    let input = bench_input(cfg.seed, p, 1 << cfg.ell);
    let mut buf = input.clone();
    let mut rows = Vec::with_capacity(plans.len());
    for plan in &plans {
        let butterflies = plan.butterfly_count().max(1) as f64;
        for _ in 0..cfg.warmup {
            buf.copy_from_slice(&input);
            plan.forward_in_place(black_box(&mut buf));
        }
        let mut ns = Vec::with_capacity(cfg.trials);
        let mut ticks = Vec::with_capacity(cfg.trials);
        for _ in 0..cfg.trials {
            buf.copy_from_slice(&input);
            let c0 = cycle_counter();
            let t0 = Instant::now();
            plan.forward_in_place(black_box(&mut buf));
            let elapsed = t0.elapsed();
            let c1 = cycle_counter();
            black_box(&buf);
            ns.push(elapsed.as_nanos() as f64 / butterflies);
            if let (Some(a), Some(b)) = (c0, c1) {
                ticks.push(b.wrapping_sub(a) as f64 / butterflies);
            }
        }
        ns.sort_by(f64::total_cmp);
        ticks.sort_by(f64::total_cmp);
        rows.push(BenchRow {
            strategy: plan.strategy(),
            p,
            ell: cfg.ell,
            trials: cfg.trials,
            butterflies: plan.butterfly_count(),
            median_ns_per_butterfly: median(&ns),
            min_ns_per_butterfly: ns[0],
            cycles_per_butterfly: (!ticks.is_empty()).then(|| median(&ticks)),
        });
    }
    Ok(BenchReport { rows })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn input_is_deterministic() {
        let a = bench_input(7, 97, 64);
        assert_eq!(a, bench_input(7, 97, 64));
        assert_ne!(a, bench_input(8, 97, 64));
        assert!(a.iter().all(|&v| v < 97));
    }

    #[test]
    fn zero_trials_is_an_error() {
        let cfg = BenchConfig { trials: 0, ..BenchConfig::default() };
        assert!(run_bench(&cfg).is_err());
    }

    #[test]
    fn small_run_emits_csv() {
        let cfg = BenchConfig { ell: 4, trials: 5, warmup: 1, ..BenchConfig::default() };
        let report = run_bench(&cfg).unwrap();
        assert_eq!(report.rows.len(), 3);
        assert_eq!(report.rows[0].butterflies, 32);
        let mut out = Vec::new();
        report.write_csv(&mut out).unwrap();
        let text = String::from_utf8(out).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some(CSV_HEADER));
        assert_eq!(lines.count(), 3);
        assert!(report.shoup_not_slower().is_some());
    }

    #[test]
    fn median_of_even_and_odd() {
        assert_eq!(median(&[1.0, 2.0, 10.0]), 2.0);
        assert_eq!(median(&[1.0, 2.0, 4.0, 10.0]), 3.0);
    }
}
