//! Residue vector files.
//!
//! Text: optional lines starting with `#`, then whitespace-separated
//! decimal integers. Binary: consecutive little-endian 8-byte words, no
//! header.

use std::io::{self, Write};

use anyhow::{bail, Context};

pub fn parse_text(text: &str) -> anyhow::Result<Vec<u64>> {
    let mut out = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        if line.trim_start().starts_with('#') {
            continue;
        }
        for tok in line.split_whitespace() {
            let v = tok
                .parse::<u64>()
                .with_context(|| format!("line {}: malformed residue '{tok}'", lineno + 1))?;
            out.push(v);
        }
    }
    Ok(out)
}

pub fn parse_binary(bytes: &[u8]) -> anyhow::Result<Vec<u64>> {
    if !bytes.len().is_multiple_of(8) {
        bail!("binary input length {} is not a multiple of 8 bytes", bytes.len());
    }
    Ok(bytes
        .chunks_exact(8)
        .map(|c| u64::from_le_bytes(c.try_into().expect("chunk of 8")))
        .collect())
}

pub fn write_text<W: Write>(out: &mut W, header: &[String], values: &[u64]) -> io::Result<()> {
    for h in header {
        writeln!(out, "# {h}")?;
    }
    for v in values {
        writeln!(out, "{v}")?;
    }
    Ok(())
}

pub fn to_binary(values: &[u64]) -> Vec<u8> {
    values.iter().flat_map(|v| v.to_le_bytes()).collect()
}
