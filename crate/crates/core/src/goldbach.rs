//! Goldbach pair counts, Pen primes, divisor bands and the batch scan.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::estimator::{check_prime, Estimator};
use crate::primes::{small_primes, PrimalityTable};

/// Evens per scan chunk. Chunks are the unit of parallel work and are
/// concatenated in order, so output never depends on the worker count.
pub const SCAN_CHUNK_EVENS: u64 = 1 << 14;

/// The Pen primes of an even number that divide it, ascending.
///
/// `[2]` is the band `B₂`, `[2, 3]` is `B₂,₃` and so on. Renders and parses
/// as hyphen-joined primes (`"2-3"`).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BandSignature(Vec<u64>);

impl BandSignature {
    /// Builds a signature from ascending primes. Primality is not checked.
    pub fn new(primes: Vec<u64>) -> Result<Self> {
        if primes.is_empty() {
            return Err(Error::invalid("band signature needs at least one prime"));
        }
        if primes.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::invalid("band signature primes must be strictly ascending"));
        }
        Ok(Self(primes))
    }

    /// `B₂`: only 2 among the Pen primes divides.
    pub fn b2() -> Self {
        Self(vec![2])
    }

    pub fn primes(&self) -> &[u64] {
        &self.0
    }
}

impl fmt::Display for BandSignature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, p) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str("-")?;
            }
            write!(f, "{p}")?;
        }
        Ok(())
    }
}

impl FromStr for BandSignature {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let primes = s
            .split('-')
            .map(|part| {
                part.trim()
                    .parse::<u64>()
                    .map_err(|_| Error::invalid(format!("bad band signature {s:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        for &p in &primes {
            check_prime(p).map_err(|_| Error::invalid(format!("{p} in band {s:?} is not prime")))?;
        }
        Self::new(primes)
    }
}

/// One row of a scan.
#[derive(Debug, Clone, PartialEq)]
pub struct GpRecord {
    pub two_n: u64,
    pub gp_count: u64,
    pub band: BandSignature,
    pub egp: f64,
    pub igp: f64,
}

pub(crate) fn check_even(two_n: u64) -> Result<()> {
    if two_n < 4 || !two_n.is_multiple_of(2) {
        return Err(Error::invalid(format!("expected an even number >= 4, got {two_n}")));
    }
    Ok(())
}

/// Primes `p` with `p² <= two_n`.
pub fn pen(two_n: u64) -> Result<Vec<u64>> {
    check_even(two_n)?;
    Ok(small_primes(two_n.isqrt()))
}

pub fn band_signature(two_n: u64) -> Result<BandSignature> {
    let pen = pen(two_n)?;
    Ok(band_from_pen(two_n, &pen))
}

/// Band of `two_n` given its Pen (or any ascending prime list covering it).
pub(crate) fn band_from_pen(two_n: u64, primes: &[u64]) -> BandSignature {
    BandSignature(
        primes
            .iter()
            .take_while(|&&p| p * p <= two_n)
            .filter(|&&p| two_n.is_multiple_of(p))
            .copied()
            .collect(),
    )
}

fn check_in_table(two_n: u64, table: &PrimalityTable) -> Result<()> {
    check_even(two_n)?;
    if two_n > table.limit() {
        return Err(Error::range(format!(
            "{two_n} exceeds the sieve limit {}",
            table.limit()
        )));
    }
    Ok(())
}

/// Number of unordered prime pairs `(k, 2n - k)` with `k <= n`.
pub fn count_gp(two_n: u64, table: &PrimalityTable) -> Result<u64> {
    check_in_table(two_n, table)?;
    let n = two_n / 2;
    Ok(table.iter_primes(2, n)?.filter(|&k| table.is_prime(two_n - k)).count() as u64)
}

/// The Goldbach pairs of `two_n`, ascending by the smaller member.
pub fn goldbach_pairs(two_n: u64, table: &PrimalityTable) -> Result<Vec<(u64, u64)>> {
    check_in_table(two_n, table)?;
    let n = two_n / 2;
    Ok(table
        .iter_primes(2, n)?
        .filter(|&k| table.is_prime(two_n - k))
        .map(|k| (k, two_n - k))
        .collect())
}

/// 64 bits of `words` starting at bit `start`; bits past the end read as 0.
#[inline]
fn bits_at(words: &[u64], start: u64) -> u64 {
    let q = (start / 64) as usize;
    let r = start % 64;
    let lo = words.get(q).copied().unwrap_or(0) >> r;
    if r == 0 {
        lo
    } else {
        lo | words.get(q + 1).copied().unwrap_or(0) << (64 - r)
    }
}

/// Word-parallel pair counter for every even up to `top`.
///
/// Keeps a bit-reversed copy `R[j] = P[top - j]` of the primality bits, so
/// `P[2n - k] = R[k + top - 2n]` and a pair count becomes the popcount of
/// `P & (R >> (top - 2n))` over `k ∈ [0, n]`.
pub struct PairCounter<'a> {
    table: &'a PrimalityTable,
    top: u64,
    reversed: Vec<u64>,
}

impl<'a> PairCounter<'a> {
    pub fn new(table: &'a PrimalityTable, top: u64) -> Result<Self> {
        if top > table.limit() {
            return Err(Error::range(format!(
                "{top} exceeds the sieve limit {}",
                table.limit()
            )));
        }
        let words = table.words();
        let reversed = (0..=top / 64)
            .map(|w| {
                let j0 = w * 64;
                // Bits top - j0 - 63 ..= top - j0 of P, reversed.
                let raw = match (top - j0).checked_sub(63) {
                    Some(start) => bits_at(words, start),
                    None => bits_at(words, 0) << (63 - (top - j0)),
                };
                raw.reverse_bits()
            })
            .collect();
        Ok(Self { table, top, reversed })
    }

    pub fn top(&self) -> u64 {
        self.top
    }

    /// Same as [`count_gp`] for `4 <= two_n <= top`, `two_n` even.
    pub fn count(&self, two_n: u64) -> u64 {
        debug_assert!(two_n <= self.top && two_n.is_multiple_of(2));
        let n = two_n / 2;
        let shift = self.top - two_n;
        let words = self.table.words();
        let last = (n / 64) as usize;
        let mut total = 0u64;
        for (w, &p) in words[..last].iter().enumerate() {
            let r = bits_at(&self.reversed, w as u64 * 64 + shift);
            total += u64::from((p & r).count_ones());
        }
        let tail_bits = n % 64 + 1;
        let mask = if tail_bits == 64 { !0 } else { (1u64 << tail_bits) - 1 };
        let r = bits_at(&self.reversed, last as u64 * 64 + shift);
        total + u64::from((words[last] & r & mask).count_ones())
    }
}

/// Validated inputs for [`scan`].
fn check_scan(lo: u64, hi: u64, table: &PrimalityTable) -> Result<()> {
    if !lo.is_multiple_of(2) || !hi.is_multiple_of(2) {
        return Err(Error::invalid(format!("scan bounds must be even, got [{lo}, {hi}]")));
    }
    if lo < 4 || lo > hi || hi > table.limit() {
        return Err(Error::range(format!(
            "scan needs 4 <= lo <= hi <= {}, got [{lo}, {hi}]",
            table.limit()
        )));
    }
    Ok(())
}

struct ScanContext<'a> {
    counter: PairCounter<'a>,
    estimator: Estimator,
    filter: Option<&'a [BandSignature]>,
    lo: u64,
    hi: u64,
}

impl ScanContext<'_> {
    fn chunk(&self, index: u64) -> Vec<GpRecord> {
        let start = self.lo + 2 * SCAN_CHUNK_EVENS * index;
        let end = (start + 2 * (SCAN_CHUNK_EVENS - 1)).min(self.hi);
        let mut out = Vec::new();
        for two_n in (start..=end).step_by(2) {
            let band = band_from_pen(two_n, self.estimator.primes());
            if let Some(filter) = self.filter {
                if !filter.contains(&band) {
                    continue;
                }
            }
            out.push(GpRecord {
                two_n,
                gp_count: self.counter.count(two_n),
                egp: self.estimator.egp_unchecked(two_n),
                igp: self.estimator.igp_unchecked(two_n),
                band,
            });
        }
        out
    }

    fn chunks(&self) -> u64 {
        ((self.hi - self.lo) / 2 + 1).div_ceil(SCAN_CHUNK_EVENS)
    }
}

/// One [`GpRecord`] per even `2n ∈ [lo, hi]` whose band passes `band_filter`,
/// ascending. Output is identical for every `workers` value; with the
/// `parallel` feature disabled `workers` is ignored.
pub fn scan(
    lo: u64,
    hi: u64,
    table: &PrimalityTable,
    band_filter: Option<&[BandSignature]>,
    workers: usize,
) -> Result<Vec<GpRecord>> {
    if workers == 0 {
        return Err(Error::invalid("workers must be at least 1"));
    }
    check_scan(lo, hi, table)?;
    let ctx = ScanContext {
        counter: PairCounter::new(table, hi)?,
        estimator: Estimator::new(hi),
        filter: band_filter,
        lo,
        hi,
    };

    #[cfg(feature = "parallel")]
    if workers > 1 {
        use rayon::prelude::*;
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build()
            .map_err(|e| Error::invalid(format!("cannot start {workers} workers: {e}")))?;
        let chunks: Vec<Vec<GpRecord>> =
            pool.install(|| (0..ctx.chunks()).into_par_iter().map(|i| ctx.chunk(i)).collect());
        return Ok(chunks.into_iter().flatten().collect());
    }

    Ok((0..ctx.chunks()).flat_map(|i| ctx.chunk(i)).collect())
}

/// [`scan`] on the calling thread.
pub fn scan_sequential(
    lo: u64,
    hi: u64,
    table: &PrimalityTable,
    band_filter: Option<&[BandSignature]>,
) -> Result<Vec<GpRecord>> {
    scan(lo, hi, table, band_filter, 1)
}
