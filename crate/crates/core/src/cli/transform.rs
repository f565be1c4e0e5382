//! File-to-file transforms behind `lazy-ntt transform`.

use std::fs;
use std::path::Path;

use anyhow::{bail, Context};

use super::vecio;
use crate::field::FieldContext;
use crate::ntt::{NttPlan, ResidueVec, Strategy};

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Direction {
    Forward,
    Inverse,
}

#[derive(Clone, Copy, Debug)]
pub struct TransformJob {
    pub p: u64,
    pub ell: u32,
    pub direction: Direction,
    pub strategy: Strategy,
    /// Multiply the inverse output by L⁻¹.
    pub scale: bool,
}

/// Forward: natural-order input, bit-reversed output. Inverse: bit-reversed
/// input, natural-order output (times L unless `scale`). Output is canonical.
pub fn transform_values(values: &[u64], job: &TransformJob) -> anyhow::Result<Vec<u64>> {
    let ctx = FieldContext::<u64>::new(job.p).with_context(|| format!("modulus {}", job.p))?;
    let plan = NttPlan::new(ctx, job.ell, job.strategy)?;
    if values.len() != plan.len() {
        bail!("input has {} residues, expected 2^{} = {}", values.len(), job.ell, plan.len());
    }
    if let Some((i, v)) = values.iter().enumerate().find(|(_, &v)| v >= job.p) {
        bail!("residue {v} at index {i} is not below p = {}", job.p);
    }
    let mut v = ResidueVec::canonical(values.to_vec(), &ctx)?;
    match job.direction {
        Direction::Forward => plan.forward(&mut v)?,
        Direction::Inverse => {
            plan.inverse(&mut v)?;
            if job.scale {
                plan.scale(&mut v)?;
            }
        }
    }
    v.normalize(&ctx);
    Ok(v.into_vec())
}

fn header(job: &TransformJob) -> Vec<String> {
    let order = match job.direction {
        Direction::Forward => "bit-reversed order",
        Direction::Inverse if job.scale => "natural order, scaled by 1/L",
        Direction::Inverse => "natural order, unscaled (L times the original)",
    };
    let name = match job.direction {
        Direction::Forward => "forward",
        Direction::Inverse => "inverse",
    };
    vec![
        format!("{} transform, p = {}, L = {}", name, job.p, 1u64 << job.ell),
        order.to_string(),
    ]
}

pub fn transform_file(input: &Path, output: &Path, binary: bool, job: &TransformJob) -> anyhow::Result<()> {
    let values = if binary {
        let bytes = fs::read(input).with_context(|| format!("reading {}", input.display()))?;
        vecio::parse_binary(&bytes)?
    } else {
        let text = fs::read_to_string(input).with_context(|| format!("reading {}", input.display()))?;
        vecio::parse_text(&text)?
    };
    let out = transform_values(&values, job)?;
    let bytes = if binary {
        vecio::to_binary(&out)
    } else {
        let mut buf = Vec::new();
        vecio::write_text(&mut buf, &header(job), &out)?;
        buf
    };
    fs::write(output, bytes).with_context(|| format!("writing {}", output.display()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn job(direction: Direction, scale: bool) -> TransformJob {
        TransformJob { p: 13, ell: 2, direction, strategy: Strategy::ShoupLazy, scale }
    }

    #[test]
    fn small_examples() {
        let fwd = transform_values(&[1, 2, 3, 4], &job(Direction::Forward, false)).unwrap();
        assert_eq!(fwd, vec![10, 11, 1, 8]);
        let back = transform_values(&fwd, &job(Direction::Inverse, true)).unwrap();
        assert_eq!(back, vec![1, 2, 3, 4]);
        // Unscaled inverse is 4·(1, 2, 3, 4) mod 13.
        let raw = transform_values(&fwd, &job(Direction::Inverse, false)).unwrap();
        assert_eq!(raw, vec![4, 8, 12, 3]);
    }

    #[test]
    fn rejects_bad_input() {
        let s = job(Direction::Forward, false);
        assert!(transform_values(&[1, 2, 3], &s).is_err());
        assert!(transform_values(&[1, 2, 13, 4], &s).is_err());
        let bad_p = TransformJob { p: 15, ..s };
        assert!(transform_values(&[1, 2, 3, 4], &bad_p).is_err());
    }
}
