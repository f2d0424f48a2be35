use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use crate::CliResult;

/// Primary output: the `--out` file or stdout.
pub fn sink(out: Option<&Path>) -> CliResult<Box<dyn Write>> {
    Ok(match out {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

pub fn csv_writer(out: Option<&Path>) -> CliResult<csv::Writer<Box<dyn Write>>> {
    Ok(csv::Writer::from_writer(sink(out)?))
}

/// Fixed-precision formatting so reruns are byte-identical.
pub fn num(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.12}")
    } else {
        x.to_string()
    }
}

/// `<bit count>:<hex>`, bits packed most significant first and the last
/// byte zero-padded.
pub fn bits_to_hex(bits: &[bool]) -> String {
    let hex: String = bits
        .chunks(8)
        .map(|byte| {
            let v = byte.iter().enumerate().fold(0u8, |acc, (i, &b)| acc | (u8::from(b) << (7 - i)));
            format!("{v:02x}")
        })
        .collect();
    format!("{}:{hex}", bits.len())
}

pub fn hex_to_bits(text: &str) -> Option<Vec<bool>> {
    let (len, hex) = text.trim().split_once(':')?;
    let len: usize = len.parse().ok()?;
    if hex.len() % 2 != 0 || hex.len() * 4 < len || hex.len() > 2 * len.div_ceil(8) {
        return None;
    }
    let mut bits = Vec::with_capacity(hex.len() * 4);
    for i in (0..hex.len()).step_by(2) {
        let v = u8::from_str_radix(hex.get(i..i + 2)?, 16).ok()?;
        bits.extend((0..8).map(|k| (v >> (7 - k)) & 1 == 1));
    }
    if bits[len..].iter().any(|&b| b) {
        return None;
    }
    bits.truncate(len);
    Some(bits)
}
