//! Raw bit string and von Neumann debiasing.

use std::io::{Read, Write};

use crate::error::{Error, Result};
use crate::sim::{Outcome, RoundRecord};

/// Where the bits of a raw string came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Provenance {
    pub detected_zero: u64,
    pub detected_one: u64,
    pub empty_as_zero: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct RawString {
    pub bits: Vec<bool>,
    pub provenance: Provenance,
}

/// One bit per unblocked round, in round order: the outcome if detected, 0
/// for no detection. Blocked rounds contribute nothing.
pub fn build_bit_string(records: &[RoundRecord]) -> RawString {
    let mut s = RawString::default();
    for r in records.iter().filter(|r| !r.blocked) {
        let bit = match r.b {
            Outcome::Zero => {
                s.provenance.detected_zero += 1;
                false
            }
            Outcome::One => {
                s.provenance.detected_one += 1;
                true
            }
            Outcome::Empty => {
                s.provenance.empty_as_zero += 1;
                false
            }
        };
        s.bits.push(bit);
    }
    s
}

/// Single-pass von Neumann extractor over non-overlapping pairs:
/// `01 → 0`, `10 → 1`, `00`/`11` discarded.
pub fn von_neumann(bits: &[bool]) -> Vec<bool> {
    bits.chunks_exact(2)
        .filter(|p| p[0] != p[1])
        .map(|p| p[0])
        .collect()
}

/// Pack bits most-significant-first, zero-padding the last byte.
pub fn pack_bits(bits: &[bool]) -> Vec<u8> {
    bits.chunks(8)
        .map(|chunk| {
            chunk
                .iter()
                .enumerate()
                .fold(0u8, |acc, (i, &b)| acc | (u8::from(b) << (7 - i)))
        })
        .collect()
}

pub fn unpack_bits(bytes: &[u8], n_bits: usize) -> Result<Vec<bool>> {
    if n_bits > bytes.len() * 8 || bytes.len() != n_bits.div_ceil(8) {
        return Err(Error::Domain(format!(
            "{} bytes cannot hold exactly {n_bits} bits",
            bytes.len()
        )));
    }
    Ok((0..n_bits).map(|i| bytes[i / 8] >> (7 - i % 8) & 1 == 1).collect())
}

/// Sidecar line recording the bit length of a packed stream.
pub fn sidecar_line(n_bits: usize) -> String {
    format!("n_bits={n_bits}")
}

pub fn parse_sidecar(line: &str) -> Result<usize> {
    line.trim()
        .strip_prefix("n_bits=")
        .and_then(|v| v.parse().ok())
        .ok_or_else(|| Error::Parse {
            line: 1,
            message: format!("expected n_bits=<count>, found {line:?}"),
        })
}

/// Write a packed stream and its sidecar.
pub fn write_packed<W: Write, S: Write>(bits: &[bool], mut data: W, mut sidecar: S) -> Result<()> {
    data.write_all(&pack_bits(bits))?;
    writeln!(sidecar, "{}", sidecar_line(bits.len()))?;
    Ok(())
}

pub fn read_packed<R: Read, S: Read>(mut data: R, mut sidecar: S) -> Result<Vec<bool>> {
    let mut meta = String::new();
    sidecar.read_to_string(&mut meta)?;
    let n = parse_sidecar(&meta)?;
    let mut bytes = Vec::new();
    data.read_to_end(&mut bytes)?;
    unpack_bits(&bytes, n)
}
