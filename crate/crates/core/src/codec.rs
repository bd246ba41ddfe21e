//! On-disk forms of a [`PatternStore`].
//!
//! Binary container, all integers little-endian:
//!
//! ```text
//! "DMPS" | version: u16 | N: u32 | M: u32 | M rows of ceil(N/8) bytes
//! ```
//!
//! Within a row, bit `i` of the pattern lives in byte `i / 8` at bit position
//! `7 - i % 8` (most significant bit first); a set bit encodes +1. Padding
//! bits in the last byte are zero.
//!
//! Text form: one pattern per line, `+` for +1 and `-` for -1. The reader
//! also accepts U+2212 MINUS SIGN.

use std::io::{Read, Write};

use crate::error::{Error, Result};
use crate::pattern::{Pattern, PatternStore};

pub const MAGIC: &[u8; 4] = b"DMPS";
pub const VERSION: u16 = 1;

fn io_err(e: std::io::Error) -> Error {
    Error::Format(e.to_string())
}

pub fn write_binary<W: Write>(store: &PatternStore, mut out: W) -> Result<()> {
    let n = store.n_neurons();
    let header_n = u32::try_from(n).map_err(|_| Error::Format("N does not fit in u32".into()))?;
    let header_m = u32::try_from(store.n_patterns())
        .map_err(|_| Error::Format("M does not fit in u32".into()))?;
    out.write_all(MAGIC).map_err(io_err)?;
    out.write_all(&VERSION.to_le_bytes()).map_err(io_err)?;
    out.write_all(&header_n.to_le_bytes()).map_err(io_err)?;
    out.write_all(&header_m.to_le_bytes()).map_err(io_err)?;
    let mut row = vec![0u8; n.div_ceil(8)];
    for p in store.patterns() {
        row.fill(0);
        for i in 0..n {
            if p.spin(i) > 0 {
                row[i / 8] |= 0x80 >> (i % 8);
            }
        }
        out.write_all(&row).map_err(io_err)?;
    }
    Ok(())
}

pub fn read_binary<R: Read>(mut input: R) -> Result<PatternStore> {
    let mut header = [0u8; 14];
    input.read_exact(&mut header).map_err(io_err)?;
    if &header[..4] != MAGIC {
        return Err(Error::Format("bad magic".into()));
    }
    let version = u16::from_le_bytes([header[4], header[5]]);
    if version != VERSION {
        return Err(Error::Format(format!("unsupported version {version}")));
    }
    let n = u32::from_le_bytes(header[6..10].try_into().unwrap()) as usize;
    let m = u32::from_le_bytes(header[10..14].try_into().unwrap()) as usize;
    if n == 0 {
        return Err(Error::EmptyPattern);
    }
    if m == 0 {
        return Err(Error::EmptyStore);
    }
    let mut row = vec![0u8; n.div_ceil(8)];
    let mut patterns = Vec::with_capacity(m);
    for _ in 0..m {
        input.read_exact(&mut row).map_err(io_err)?;
        let mut words = vec![0u64; n.div_ceil(64)];
        for i in 0..n {
            if row[i / 8] & (0x80 >> (i % 8)) != 0 {
                words[i / 64] |= 1 << (i % 64);
            }
        }
        if !n.is_multiple_of(8) && row[n / 8] & (0xff >> (n % 8)) != 0 {
            return Err(Error::Format("non-zero padding bits".into()));
        }
        patterns.push(Pattern::from_words(words, n));
    }
    let mut rest = [0u8; 1];
    if input.read(&mut rest).map_err(io_err)? != 0 {
        return Err(Error::Format("trailing bytes after last pattern".into()));
    }
    PatternStore::new(patterns)
}

pub fn to_text(store: &PatternStore) -> String {
    let mut s = String::with_capacity(store.n_patterns() * (store.n_neurons() + 1));
    for p in store.patterns() {
        s.extend((0..p.n_neurons()).map(|i| if p.spin(i) > 0 { '+' } else { '-' }));
        s.push('\n');
    }
    s
}

pub fn from_text(text: &str) -> Result<PatternStore> {
    let patterns = text
        .lines()
        .map(str::trim_end)
        .filter(|l| !l.is_empty())
        .enumerate()
        .map(|(row, line)| {
            let spins = line
                .chars()
                .map(|c| match c {
                    '+' => Ok(1),
                    '-' | '\u{2212}' => Ok(-1),
                    other => Err(Error::Format(format!("row {row}: unexpected {other:?}"))),
                })
                .collect::<Result<Vec<i8>>>()?;
            Pattern::from_spins(&spins)
        })
        .collect::<Result<Vec<_>>>()?;
    PatternStore::new(patterns)
}
