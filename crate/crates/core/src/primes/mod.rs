//! Prime generation and the primality bitset everything else reads from.

mod cache;

pub use cache::{read_cache, write_cache, CACHE_MAGIC, CACHE_VERSION};

use crate::error::{Error, Result};

/// Numbers per sieve segment. A segment's bits (32 KiB) stay cache resident.
pub const SEGMENT_BITS: usize = 1 << 18;
const SEGMENT_WORDS: usize = SEGMENT_BITS / 64;

/// Largest prime whose primorial fits in a `u64`.
pub const MAX_PRIMORIAL_PRIME: u64 = 47;

/// Bits with odd indices set: every odd number is a candidate before sieving.
const ODD_BITS: u64 = 0xAAAA_AAAA_AAAA_AAAA;

/// Primality of every integer in `[0, limit]`, one bit per integer.
///
/// Bit `i` of word `j` is the primality of `64 * j + i`. Bits past `limit` in
/// the final word are always clear, so word-level popcounts are exact.
#[derive(Clone, PartialEq, Eq)]
pub struct PrimalityTable {
    limit: u64,
    words: Vec<u64>,
}

impl std::fmt::Debug for PrimalityTable {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("PrimalityTable")
            .field("limit", &self.limit)
            .field("words", &self.words.len())
            .finish()
    }
}

impl PrimalityTable {
    /// Segmented sieve of Eratosthenes over `[0, limit]`.
    ///
    /// Segments are sieved in place inside the output buffer, so working
    /// memory beyond the output is the base-prime list only.
    pub fn build(limit: u64) -> Result<Self> {
        if limit < 2 {
            return Err(Error::invalid(format!("sieve limit must be at least 2, got {limit}")));
        }
        let words_len = usize::try_from(limit / 64 + 1)
            .map_err(|_| Error::Resource(usize::MAX))?;
        let mut words = Vec::new();
        words
            .try_reserve_exact(words_len)
            .map_err(|_| Error::Resource(words_len.saturating_mul(8)))?;
        words.resize(words_len, 0);

        let base: Vec<u64> = small_primes(limit.isqrt())
            .into_iter()
            .filter(|&p| p > 2)
            .collect();

        let sieve_one = |(index, segment): (usize, &mut [u64])| {
            sieve_segment(segment, (index * SEGMENT_BITS) as u64, limit, &base);
        };

        #[cfg(feature = "parallel")]
        {
            use rayon::prelude::*;
            words.par_chunks_mut(SEGMENT_WORDS).enumerate().for_each(sieve_one);
        }
        #[cfg(not(feature = "parallel"))]
        words.chunks_mut(SEGMENT_WORDS).enumerate().for_each(sieve_one);

        Ok(Self { limit, words })
    }

    pub(crate) fn from_words(limit: u64, words: Vec<u64>) -> Self {
        debug_assert_eq!(words.len() as u64, limit / 64 + 1);
        Self { limit, words }
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub(crate) fn words(&self) -> &[u64] {
        &self.words
    }

    /// # Panics
    ///
    /// Panics if `x > self.limit()`.
    #[inline]
    pub fn is_prime(&self, x: u64) -> bool {
        assert!(x <= self.limit, "{x} is past the sieve limit {}", self.limit);
        self.words[(x / 64) as usize] >> (x % 64) & 1 == 1
    }

    /// Number of primes up to the limit.
    pub fn count(&self) -> u64 {
        self.words.iter().map(|w| u64::from(w.count_ones())).sum()
    }

    /// Primes in `[lo, hi]`, ascending.
    pub fn primes_in(&self, lo: u64, hi: u64) -> Result<Vec<u64>> {
        Ok(self.iter_primes(lo, hi)?.collect())
    }

    pub fn iter_primes(&self, lo: u64, hi: u64) -> Result<PrimeIter<'_>> {
        if lo > hi {
            return Err(Error::range(format!("empty interval [{lo}, {hi}]")));
        }
        if hi > self.limit {
            return Err(Error::range(format!("{hi} exceeds the sieve limit {}", self.limit)));
        }
        let word = (lo / 64) as usize;
        let current = self.words[word] & (!0u64 << (lo % 64));
        Ok(PrimeIter { table: self, word, current, hi })
    }

    /// Whether `x` lies in `H_p`: `x = 1` or every prime factor of `x` is at least `p`.
    pub fn in_h(&self, x: u64, p: u64) -> Result<bool> {
        if x == 0 {
            return Err(Error::invalid("H_p membership is defined for x >= 1"));
        }
        if x > self.limit {
            return Err(Error::range(format!("{x} exceeds the sieve limit {}", self.limit)));
        }
        if p > self.limit || !self.is_prime(p) {
            return Err(Error::invalid(format!("{p} is not a prime within the sieve")));
        }
        Ok(in_h_unchecked(x, p, self.iter_primes(2, p - 1).into_iter().flatten()))
    }
}

/// Trial division of `x` by the given ascending primes, all below `p`.
fn in_h_unchecked(x: u64, p: u64, smaller: impl Iterator<Item = u64>) -> bool {
    for q in smaller {
        if q * q > x {
            // No factor below q: x is 1 or a prime, in L_p only if below p.
            return x == 1 || x >= p;
        }
        if x.is_multiple_of(q) {
            return false;
        }
    }
    true
}

fn sieve_segment(segment: &mut [u64], base: u64, limit: u64, odd_primes: &[u64]) {
    segment.fill(ODD_BITS);
    if base == 0 {
        // 1 is not prime, 2 is.
        segment[0] = (segment[0] & !0b10) | 0b100;
    }
    let end = base + (segment.len() * 64) as u64;
    for &p in odd_primes {
        let square = p * p;
        if square >= end {
            break;
        }
        let mut m = if square >= base { square } else { base.div_ceil(p) * p };
        if m % 2 == 0 {
            m += p;
        }
        while m < end {
            let offset = m - base;
            segment[(offset / 64) as usize] &= !(1u64 << (offset % 64));
            m += 2 * p;
        }
    }
    if end > limit + 1 {
        let last = limit + 1 - base;
        let word = (last / 64) as usize;
        if word < segment.len() {
            segment[word] &= (1u64 << (last % 64)) - 1;
            segment[word + 1..].fill(0);
        }
    }
}

/// Ascending iterator over the set bits of a [`PrimalityTable`].
pub struct PrimeIter<'a> {
    table: &'a PrimalityTable,
    word: usize,
    current: u64,
    hi: u64,
}

impl Iterator for PrimeIter<'_> {
    type Item = u64;

    fn next(&mut self) -> Option<u64> {
        loop {
            if self.current != 0 {
                let bit = self.current.trailing_zeros() as u64;
                let value = self.word as u64 * 64 + bit;
                if value > self.hi {
                    return None;
                }
                self.current &= self.current - 1;
                return Some(value);
            }
            self.word += 1;
            if self.word >= self.table.words.len() || self.word as u64 * 64 > self.hi {
                return None;
            }
            self.current = self.table.words[self.word];
        }
    }
}

pub fn build_sieve(limit: u64) -> Result<PrimalityTable> {
    PrimalityTable::build(limit)
}

pub fn primes_in(table: &PrimalityTable, lo: u64, hi: u64) -> Result<Vec<u64>> {
    table.primes_in(lo, hi)
}

pub fn in_h(x: u64, p: u64, table: &PrimalityTable) -> Result<bool> {
    table.in_h(x, p)
}

/// Primes up to `bound` by a plain (unsegmented) sieve; meant for bounds
/// around the square root of a sieve limit.
pub fn small_primes(bound: u64) -> Vec<u64> {
    if bound < 2 {
        return Vec::new();
    }
    let n = bound as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if composite[i] {
            continue;
        }
        out.push(i as u64);
        let mut m = i * i;
        while m <= n {
            composite[m] = true;
            m += i;
        }
    }
    out
}

fn is_prime_trial(x: u64) -> bool {
    x >= 2 && (2..).take_while(|d| d * d <= x).all(|d| !x.is_multiple_of(d))
}

/// Product of all primes `<= p`.
pub fn primorial(p: u64) -> Result<u64> {
    if !is_prime_trial(p) {
        return Err(Error::invalid(format!("{p} is not prime")));
    }
    if p > MAX_PRIMORIAL_PRIME {
        return Err(Error::Overflow(format!(
            "{p}# does not fit in 64 bits; use log_primorial"
        )));
    }
    Ok(small_primes(p).into_iter().product())
}

/// `ln(p#)`, the sum of `ln q` over primes `q <= p`. Valid for any prime.
pub fn log_primorial(p: u64) -> Result<f64> {
    if !is_prime_trial(p) {
        return Err(Error::invalid(format!("{p} is not prime")));
    }
    Ok(small_primes(p).into_iter().map(|q| (q as f64).ln()).sum())
}

/// A stand-in prime sequence with gaps `ln v`, the average prime gap at `v`.
#[derive(Debug, Clone, PartialEq)]
pub struct SimulatedPrimeSeq {
    values: Vec<f64>,
}

impl SimulatedPrimeSeq {
    /// All sequence values from `start` up to and including `bound`.
    pub fn up_to(start: f64, bound: f64) -> Result<Self> {
        check_simulated_start(start)?;
        let mut values = Vec::new();
        let mut v = start;
        while v <= bound {
            values.push(v);
            v += v.ln();
        }
        Ok(Self { values })
    }

    pub fn start(&self) -> f64 {
        self.values[0]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }
}

fn check_simulated_start(start: f64) -> Result<()> {
    if !(start.is_finite() && start > 2.0) {
        return Err(Error::invalid(format!(
            "simulated sequence must start above 2, got {start}"
        )));
    }
    Ok(())
}

pub fn simulated_primes(start: f64, count: usize) -> Result<SimulatedPrimeSeq> {
    check_simulated_start(start)?;
    if count == 0 {
        return Err(Error::invalid("count must be at least 1"));
    }
    let mut values = Vec::with_capacity(count);
    let mut v = start;
    for _ in 0..count {
        values.push(v);
        v += v.ln();
    }
    Ok(SimulatedPrimeSeq { values })
}
