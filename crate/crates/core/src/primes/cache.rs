//! On-disk sieve cache.
//!
//! Layout: `b"GBSV"`, format version (u32 LE), limit (u64 LE), then
//! `ceil((limit + 1) / 8)` bytes of primality bits, LSB first within a byte.

use std::io::{Read, Write};

use super::PrimalityTable;
use crate::error::{Error, Result};

pub const CACHE_MAGIC: [u8; 4] = *b"GBSV";
pub const CACHE_VERSION: u32 = 1;

fn payload_len(limit: u64) -> Result<usize> {
    usize::try_from((limit + 1).div_ceil(8)).map_err(|_| Error::Resource(usize::MAX))
}

pub fn write_cache<W: Write>(table: &PrimalityTable, mut out: W) -> Result<()> {
    out.write_all(&CACHE_MAGIC)?;
    out.write_all(&CACHE_VERSION.to_le_bytes())?;
    out.write_all(&table.limit().to_le_bytes())?;

    let mut remaining = payload_len(table.limit())?;
    for word in table.words() {
        let bytes = word.to_le_bytes();
        let take = remaining.min(8);
        out.write_all(&bytes[..take])?;
        remaining -= take;
    }
    debug_assert_eq!(remaining, 0);
    out.flush()?;
    Ok(())
}

pub fn read_cache<R: Read>(mut input: R) -> Result<PrimalityTable> {
    let mut header = [0u8; 16];
    input
        .read_exact(&mut header)
        .map_err(|e| Error::format(format!("truncated sieve cache header: {e}")))?;
    if header[..4] != CACHE_MAGIC {
        return Err(Error::format("not a sieve cache (bad magic)"));
    }
    let version = u32::from_le_bytes(header[4..8].try_into().unwrap());
    if version != CACHE_VERSION {
        return Err(Error::format(format!("unsupported sieve cache version {version}")));
    }
    let limit = u64::from_le_bytes(header[8..16].try_into().unwrap());
    if limit < 2 {
        return Err(Error::format(format!("sieve cache limit {limit} is below 2")));
    }

    let len = payload_len(limit)?;
    let mut bytes = Vec::new();
    bytes.try_reserve_exact(len).map_err(|_| Error::Resource(len))?;
    bytes.resize(len, 0);
    input
        .read_exact(&mut bytes)
        .map_err(|e| Error::format(format!("truncated sieve cache payload: {e}")))?;
    let mut extra = [0u8; 1];
    if input.read(&mut extra)? != 0 {
        return Err(Error::format("trailing bytes after sieve cache payload"));
    }

    let words_len = (limit / 64 + 1) as usize;
    let mut words = Vec::with_capacity(words_len);
    for chunk in bytes.chunks(8) {
        let mut buf = [0u8; 8];
        buf[..chunk.len()].copy_from_slice(chunk);
        words.push(u64::from_le_bytes(buf));
    }
    words.resize(words_len, 0);

    let tail = (limit + 1) % 64;
    if tail != 0 && words[words_len - 1] >> tail != 0 {
        return Err(Error::format("sieve cache has bits set past its limit"));
    }
    Ok(PrimalityTable::from_words(limit, words))
}
