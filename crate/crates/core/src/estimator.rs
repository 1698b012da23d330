//! The racetrack estimators.
//!
//! EGP assumes a Pen prime `p` eliminates a fraction `1/p` of the remaining
//! pairs on each stretch of the track. The relative probability factors
//! (RPF/TRPF) describe how that rate really varies with `x` for `x ∈ H_p`,
//! and `α(2n, p)`, the TRPF averaged up to `2n`, corrects EGP into IGP.

use std::ops::RangeInclusive;

use crate::error::{Error, Result};
use crate::goldbach::check_even;
use crate::numerics::{li_offset, li_series, EXP_GAMMA};
use crate::primes::{small_primes, PrimalityTable, SimulatedPrimeSeq};

/// `F_H(p) = ∏_{k < p, k prime} (k - 1) / k`, the density of `H_p`.
pub fn f_h(p: u64) -> Result<f64> {
    check_prime(p)?;
    Ok(small_primes(p - 1).into_iter().map(|k| (k - 1) as f64 / k as f64).product())
}

pub(crate) fn check_prime(p: u64) -> Result<()> {
    let prime = p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d));
    if !prime {
        return Err(Error::invalid(format!("{p} is not prime")));
    }
    Ok(())
}

/// Which branch of the `α` definition applies, keyed on `log_p(x)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AlphaCase {
    /// `log_p x >= 4`: the TRPF has levelled out at 1.
    One,
    /// `3 <= log_p x < 4`: two- and three-factor integrals.
    TwoAndThree,
    /// `2 <= log_p x < 3`: two-factor integral only.
    Two,
    /// `log_p x < 2`: no multiple of `p` in `H_p` below `x`.
    Zero,
}

impl AlphaCase {
    pub fn for_log(log_p_x: f64) -> Self {
        if log_p_x >= 4.0 {
            AlphaCase::One
        } else if log_p_x >= 3.0 {
            AlphaCase::TwoAndThree
        } else if log_p_x >= 2.0 {
            AlphaCase::Two
        } else {
            AlphaCase::Zero
        }
    }

    /// [`AlphaCase::for_log`] decided by exact integer powers of `p`.
    pub fn for_power(x: u64, p: u64) -> Self {
        let reaches = |k: u32| p.checked_pow(k).is_some_and(|pk| pk <= x);
        if reaches(4) {
            AlphaCase::One
        } else if reaches(3) {
            AlphaCase::TwoAndThree
        } else if reaches(2) {
            AlphaCase::Two
        } else {
            AlphaCase::Zero
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            AlphaCase::One => "one",
            AlphaCase::TwoAndThree => "i2+i3",
            AlphaCase::Two => "i2",
            AlphaCase::Zero => "zero",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "one" => Some(AlphaCase::One),
            "i2+i3" => Some(AlphaCase::TwoAndThree),
            "i2" => Some(AlphaCase::Two),
            "zero" => Some(AlphaCase::Zero),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlphaEntry {
    pub p: u64,
    pub alpha: f64,
    pub case: AlphaCase,
}

/// `α(2n, p)` for every odd Pen prime of `2n`.
#[derive(Debug, Clone, PartialEq)]
pub struct AlphaProfile {
    pub two_n: u64,
    pub entries: Vec<AlphaEntry>,
}

impl AlphaProfile {
    /// The entry with the largest `α`; the first one on ties.
    pub fn argmax(&self) -> Option<&AlphaEntry> {
        self.entries
            .iter()
            .fold(None, |best: Option<&AlphaEntry>, e| match best {
                Some(b) if b.alpha >= e.alpha => Some(b),
                _ => Some(e),
            })
    }

    pub fn get(&self, p: u64) -> Option<&AlphaEntry> {
        self.entries.iter().find(|e| e.p == p)
    }
}

/// Precomputed primes and `li(p)` values for evaluating EGP, `α` and IGP on
/// any `x <= max_x`.
///
/// Building one is `O(√max_x)`; a scan builds a single estimator and shares
/// it across chunks.
#[derive(Debug, Clone)]
pub struct Estimator {
    max_x: u64,
    primes: Vec<u64>,
    ln_p: Vec<f64>,
    li_p: Vec<f64>,
}

impl Estimator {
    pub fn new(max_x: u64) -> Self {
        let primes = small_primes(max_x.isqrt().max(2));
        let ln_p = primes.iter().map(|&p| (p as f64).ln()).collect();
        let li_p = primes.iter().map(|&p| li_series(p as f64)).collect();
        Self { max_x, primes, ln_p, li_p }
    }

    pub fn max_x(&self) -> u64 {
        self.max_x
    }

    /// Every prime up to `√max_x`.
    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    fn check_x(&self, x: u64) -> Result<()> {
        if x > self.max_x {
            return Err(Error::range(format!(
                "{x} is above this estimator's range {}",
                self.max_x
            )));
        }
        Ok(())
    }

    fn pen_len(&self, x: u64) -> usize {
        self.primes.partition_point(|&p| p * p <= x)
    }

    /// Index of `p` in the prime list, validating that `p` is an odd prime.
    fn odd_prime_index(&self, p: u64) -> Result<Option<usize>> {
        if p == 2 {
            return Err(Error::invalid("α is not defined for p = 2 (the n/2 prefactor covers it)"));
        }
        match self.primes.binary_search(&p) {
            Ok(i) => Ok(Some(i)),
            Err(_) => {
                check_prime(p)?;
                Ok(None)
            }
        }
    }

    /// `EGP(2n) = (n/2) ∏_{odd p, p² <= 2n} f(2n, p) / p`, with `f = p - 1`
    /// when `p | 2n` and `p - 2` otherwise.
    pub fn egp(&self, two_n: u64) -> Result<f64> {
        check_even(two_n)?;
        self.check_x(two_n)?;
        Ok(self.egp_unchecked(two_n))
    }

    pub(crate) fn egp_unchecked(&self, two_n: u64) -> f64 {
        let mut product = 1.0;
        for &p in &self.primes[1..self.pen_len(two_n)] {
            let f = if two_n.is_multiple_of(p) { p - 1 } else { p - 2 };
            product *= f as f64 / p as f64;
        }
        (two_n / 2) as f64 / 2.0 * product
    }

    /// `I_2f(x, p) = ∫_{p²}^{x} e^γ / log_p(t/p) dt = e^γ ln p · p · (li(x/p) - li(p))`.
    pub fn integral_2f(&self, x: u64, p: u64) -> Result<f64> {
        self.check_x(x)?;
        let i = self.odd_prime_index(p)?;
        if p.checked_mul(p).is_none_or(|sq| sq > x) {
            return Err(Error::domain(format!("I_2f needs p² <= x, got p = {p}, x = {x}")));
        }
        // p² <= x <= max_x puts p inside the prime list.
        let i = i.expect("p <= sqrt(max_x) is in the prime list");
        Ok(self.i2(x as f64, i))
    }

    fn i2(&self, x: f64, i: usize) -> f64 {
        let p = self.primes[i] as f64;
        // x / p >= p >= 3, so li stays on its series domain.
        EXP_GAMMA * self.ln_p[i] * p * (li_series(x / p) - self.li_p[i])
    }

    /// Exact integral over `[p³, x]` of the three-factor TRPF summed over
    /// actual primes `r`:
    ///
    /// ```text
    /// ∫_{p³}^{x} Σ_{p <= r <= √(t/p)} (e^γ / r) / log_p(t / (p r)) dt
    ///     = e^γ ln p · p · Σ_{p <= r, p r² <= x} (li(x / (p r)) - li(r))
    /// ```
    ///
    /// Each `r` contributes from `t = p r²` on, and the inner integral has the
    /// same shape as `I_2f` with `p r` in place of `p`.
    pub fn integral_3f(&self, x: u64, p: u64) -> Result<f64> {
        self.check_x(x)?;
        let i = self.odd_prime_index(p)?;
        if p.checked_pow(3).is_none_or(|cube| cube > x) {
            return Err(Error::domain(format!("I_3f needs p³ <= x, got p = {p}, x = {x}")));
        }
        let i = i.expect("p <= cbrt(max_x) is in the prime list");
        Ok(self.i3(x, i))
    }

    fn i3(&self, x: u64, i: usize) -> f64 {
        let p = self.primes[i];
        let xf = x as f64;
        let mut sum = 0.0;
        for (j, &r) in self.primes.iter().enumerate().skip(i) {
            if p * r * r > x {
                break;
            }
            sum += li_series(xf / (p * r) as f64) - self.li_p[j];
        }
        EXP_GAMMA * self.ln_p[i] * p as f64 * sum
    }

    /// `α(x, p)`: the average TRPF of `p` up to `x`.
    ///
    /// `x` is `2n` for non-divisor Pen primes and `n` in the divisor case of
    /// IGP, so odd `x` is accepted.
    pub fn alpha(&self, x: u64, p: u64) -> Result<f64> {
        Ok(self.alpha_with_case(x, p)?.0)
    }

    pub fn alpha_with_case(&self, x: u64, p: u64) -> Result<(f64, AlphaCase)> {
        if x == 0 {
            return Err(Error::invalid("α needs x >= 1"));
        }
        self.check_x(x)?;
        Ok(match self.odd_prime_index(p)? {
            Some(i) => self.alpha_at(x, i),
            // p > √max_x >= √x, so log_p x < 2.
            None => (0.0, AlphaCase::Zero),
        })
    }

    fn alpha_at(&self, x: u64, i: usize) -> (f64, AlphaCase) {
        let xf = x as f64;
        let case = AlphaCase::for_power(x, self.primes[i]);
        let value = match case {
            AlphaCase::One => 1.0,
            AlphaCase::TwoAndThree => (self.i2(xf, i) + self.i3(x, i)) / xf,
            AlphaCase::Two => self.i2(xf, i) / xf,
            AlphaCase::Zero => 0.0,
        };
        (value, case)
    }

    /// `IGP(2n) = (n/2) ∏_{odd p, p² <= 2n} f / p` with `f = p - α(n, p)`
    /// when `p | 2n` and `f = p - 2 α(2n, p)` otherwise.
    pub fn igp(&self, two_n: u64) -> Result<f64> {
        check_even(two_n)?;
        self.check_x(two_n)?;
        Ok(self.igp_unchecked(two_n))
    }

    pub(crate) fn igp_unchecked(&self, two_n: u64) -> f64 {
        let n = two_n / 2;
        let mut product = 1.0;
        for i in 1..self.pen_len(two_n) {
            let p = self.primes[i];
            let pf = p as f64;
            let f = if two_n.is_multiple_of(p) {
                pf - self.alpha_at(n, i).0
            } else {
                pf - 2.0 * self.alpha_at(two_n, i).0
            };
            product *= f / pf;
        }
        n as f64 / 2.0 * product
    }

    pub fn alpha_profile(&self, two_n: u64) -> Result<AlphaProfile> {
        check_even(two_n)?;
        self.check_x(two_n)?;
        let entries = (1..self.pen_len(two_n))
            .map(|i| {
                let (alpha, case) = self.alpha_at(two_n, i);
                AlphaEntry { p: self.primes[i], alpha, case }
            })
            .collect();
        Ok(AlphaProfile { two_n, entries })
    }
}

pub fn egp(two_n: u64) -> Result<f64> {
    check_even(two_n)?;
    Estimator::new(two_n).egp(two_n)
}

pub fn igp(two_n: u64) -> Result<f64> {
    check_even(two_n)?;
    Estimator::new(two_n).igp(two_n)
}

pub fn alpha(x: u64, p: u64) -> Result<f64> {
    Estimator::new(x.max(4)).alpha(x, p)
}

pub fn alpha_profile(two_n: u64) -> Result<AlphaProfile> {
    check_even(two_n)?;
    Estimator::new(two_n).alpha_profile(two_n)
}

pub fn integral_2f(x: u64, p: u64) -> Result<f64> {
    Estimator::new(x.max(4)).integral_2f(x, p)
}

pub fn integral_3f(x: u64, p: u64) -> Result<f64> {
    Estimator::new(x.max(4)).integral_3f(x, p)
}

/// The three-factor integral in the closed form as originally printed:
///
/// ```text
/// e^γ ln p [ (Li(x/p) - Li(x/p²)) - x (ln ln(x/p) + ln 2 - ln ln(x/p²)) ] from p³ to x
/// ```
///
/// It does not agree with the integral it is meant to evaluate (it goes
/// strongly negative); [`integral_3f`] is the exact form used by `α`. Kept
/// so the discrepancy can be reported.
pub fn integral_3f_printed(x: u64, p: u64) -> Result<f64> {
    check_prime(p)?;
    if p == 2 {
        return Err(Error::invalid("I_3f is only used for odd p"));
    }
    if p.checked_pow(3).is_none_or(|cube| cube > x) {
        return Err(Error::domain(format!("I_3f needs p³ <= x, got p = {p}, x = {x}")));
    }
    let pf = p as f64;
    let antiderivative = |t: f64| -> Result<f64> {
        let li_terms = li_offset(t / pf)? - li_offset(t / (pf * pf))?;
        let log_terms = (t / pf).ln().ln() + std::f64::consts::LN_2 - (t / (pf * pf)).ln().ln();
        Ok(EXP_GAMMA * pf.ln() * (li_terms - t * log_terms))
    };
    Ok(antiderivative(x as f64)? - antiderivative(pf.powi(3))?)
}

/// `RPF_2f(x, p) = e^γ / log_p(x / p)` for `x >= p²`, else 0.
pub fn rpf_2f(x: f64, p: f64) -> Result<f64> {
    check_trpf_args(x, p)?;
    if x < p * p {
        return Ok(0.0);
    }
    Ok(EXP_GAMMA * p.ln() / (x / p).ln())
}

/// Where the cofactors `r <= s <= …` of a multiple of `p` come from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PrimeSource {
    /// Actual primes `>= p`.
    Real,
    /// The simulated sequence `v, v + ln v, …` started at `p`.
    Simulated,
}

/// Start of the simulated sequence used for the large-`p` TRPF plateau.
///
/// The summed TRPF depends on `p` only through how finely the sequence
/// samples `ln r`; at this start the spacing is below 0.7% of `ln r` and
/// the five-factor sums stay fast.
pub const DEFAULT_SIMULATED_START: f64 = 1000.0;

pub const FACTOR_COUNTS: RangeInclusive<u8> = 2..=5;

fn check_trpf_args(x: f64, p: f64) -> Result<()> {
    if !(p.is_finite() && p > 2.0) {
        return Err(Error::invalid(format!("p must be a finite real above 2, got {p}")));
    }
    if !(x.is_finite() && x >= 1.0) {
        return Err(Error::invalid(format!("x must be a finite real >= 1, got {x}")));
    }
    Ok(())
}

fn check_factors(k: u8) -> Result<()> {
    if !FACTOR_COUNTS.contains(&k) {
        return Err(Error::invalid(format!("factor count must be in 2..=5, got {k}")));
    }
    Ok(())
}

/// Ascending cofactor values with their reciprocals and logarithms.
struct Chain {
    values: Vec<f64>,
    inv: Vec<f64>,
    ln: Vec<f64>,
}

impl Chain {
    fn new(p: f64, bound: f64, source: PrimeSource) -> Result<Self> {
        let values: Vec<f64> = match source {
            PrimeSource::Real => {
                let top = if bound.is_finite() { bound.max(0.0) as u64 } else { 0 };
                small_primes(top)
                    .into_iter()
                    .map(|r| r as f64)
                    .filter(|&r| r >= p)
                    .collect()
            }
            PrimeSource::Simulated => SimulatedPrimeSeq::up_to(p, bound)?.into_values(),
        };
        let inv = values.iter().map(|v| 1.0 / v).collect();
        let ln = values.iter().map(|v| v.ln()).collect();
        Ok(Self { values, inv, ln })
    }

    /// Sum over nondecreasing chains `values[start] <= r₁ <= …` of
    /// `weight / (∏ r) · ln p / ln(q / ∏ r)`, where `m` factors (the last one
    /// implicit) remain to be placed under the quotient `q`.
    fn sum(&self, start: usize, q: f64, ln_q: f64, m: i32, weight: f64, ln_p: f64) -> f64 {
        if m == 1 {
            return weight * ln_p / ln_q;
        }
        let tail = &self.values[start..];
        let end = start + tail.partition_point(|v| v.powi(m) <= q);
        if m == 2 {
            let mut total = 0.0;
            for j in start..end {
                total += self.inv[j] / (ln_q - self.ln[j]);
            }
            return weight * ln_p * total;
        }
        (start..end)
            .map(|j| {
                let v = self.values[j];
                self.sum(j, q / v, ln_q - self.ln[j], m - 1, weight * self.inv[j], ln_p)
            })
            .sum()
    }

    fn trpf(&self, x: f64, p: f64, k: u8) -> f64 {
        if x < p.powi(i32::from(k)) {
            return 0.0;
        }
        let q = x / p;
        EXP_GAMMA * self.sum(0, q, q.ln(), i32::from(k) - 1, 1.0, p.ln())
    }
}

/// Total relative probability factor of `k`-factor multiples of `p` at `x`:
/// the sum over cofactor chains `p <= r₁ <= … <= r_{k-2}`, each bounded so
/// the remaining factors still fit, of `(e^γ / ∏ r) / log_p(x / (p ∏ r))`.
/// Zero below `p^k`.
pub fn trpf(x: f64, p: f64, k: u8, source: PrimeSource) -> Result<f64> {
    check_trpf_args(x, p)?;
    check_factors(k)?;
    if k == 2 {
        return rpf_2f(x, p);
    }
    let chain = Chain::new(p, (x / p).sqrt(), source)?;
    Ok(chain.trpf(x, p, k))
}

/// Sampling grid in `log_p(x)` units: `steps` points from `lo` to `hi`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub lo: f64,
    pub hi: f64,
    pub steps: usize,
}

impl GridSpec {
    pub fn new(lo: f64, hi: f64, steps: usize) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite() && 1.0 <= lo && lo < hi) {
            return Err(Error::invalid(format!("grid needs 1 <= lo < hi, got {lo}:{hi}")));
        }
        if steps < 2 {
            return Err(Error::invalid(format!("grid needs at least 2 steps, got {steps}")));
        }
        Ok(Self { lo, hi, steps })
    }

    pub fn points(&self) -> Vec<f64> {
        let last = (self.steps - 1) as f64;
        (0..self.steps)
            .map(|i| {
                if i + 1 == self.steps {
                    self.hi
                } else {
                    self.lo + (self.hi - self.lo) * i as f64 / last
                }
            })
            .collect()
    }
}

/// TRPF per factor count sampled on a `log_p(x)` grid.
#[derive(Debug, Clone, PartialEq)]
pub struct TrpfCurve {
    pub p: f64,
    pub grid: Vec<f64>,
    /// Indexed by `k - 2` for `k` in `2..=5`; factor counts left out of the
    /// computation are all zeros.
    pub per_factor: [Vec<f64>; 4],
    pub total: Vec<f64>,
}

impl TrpfCurve {
    pub fn factor(&self, k: u8) -> &[f64] {
        &self.per_factor[usize::from(k - 2)]
    }

    /// Trapezoid average of `total` over the grid points inside `[lo, hi]`.
    pub fn mean_total(&self, lo: f64, hi: f64) -> Option<f64> {
        let pts: Vec<(f64, f64)> = self
            .grid
            .iter()
            .zip(&self.total)
            .filter(|(g, _)| (lo..=hi).contains(*g))
            .map(|(&g, &t)| (g, t))
            .collect();
        let span = pts.last()?.0 - pts.first()?.0;
        if span <= 0.0 {
            return None;
        }
        let area: f64 = pts.windows(2).map(|w| 0.5 * (w[0].1 + w[1].1) * (w[1].0 - w[0].0)).sum();
        Some(area / span)
    }
}

pub fn trpf_curve(p: f64, grid: GridSpec, source: PrimeSource) -> Result<TrpfCurve> {
    trpf_curve_factors(p, grid, source, FACTOR_COUNTS)
}

/// [`trpf_curve`] restricted to the factor counts in `factors`.
pub fn trpf_curve_factors(
    p: f64,
    grid: GridSpec,
    source: PrimeSource,
    factors: RangeInclusive<u8>,
) -> Result<TrpfCurve> {
    check_trpf_args(1.0, p)?;
    check_factors(*factors.start())?;
    check_factors(*factors.end())?;
    let points = grid.points();
    let x_max = p.powf(grid.hi);
    let chain = Chain::new(p, (x_max / p).sqrt(), source)?;

    let sample = |&g: &f64| -> [f64; 4] {
        let x = p.powf(g);
        let mut row = [0.0; 4];
        for k in factors.clone() {
            row[usize::from(k - 2)] = chain.trpf(x, p, k);
        }
        row
    };

    #[cfg(feature = "parallel")]
    let rows: Vec<[f64; 4]> = {
        use rayon::prelude::*;
        points.par_iter().map(sample).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let rows: Vec<[f64; 4]> = points.iter().map(sample).collect();

    let per_factor: [Vec<f64>; 4] =
        std::array::from_fn(|k| rows.iter().map(|row| row[k]).collect());
    let total = rows.iter().map(|row| row.iter().sum()).collect();
    Ok(TrpfCurve { p, grid: points, per_factor, total })
}

/// `EGP_B₂(2n) ≈ C · 2n / ln²(2n)`.
pub fn egp_b2_closed(two_n: f64, c: f64) -> Result<f64> {
    if two_n.is_nan() || two_n < 4.0 {
        return Err(Error::invalid(format!("2n must be at least 4, got {two_n}")));
    }
    let l = two_n.ln();
    Ok(c * two_n / (l * l))
}

/// Finite-cutoff versions of the `B₂` asymptotic constants.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct B2Constants {
    /// `ln(cutoff) · ∏_{3 <= p <= cutoff} (p - 2) / (p - 1)`.
    pub c_partial: f64,
    /// `2 · c_partial · e^{-γ}`.
    pub big_c_partial: f64,
    pub cutoff: u64,
}

pub fn mertens_partial(cutoff: u64, table: &PrimalityTable) -> Result<B2Constants> {
    if cutoff < 9 || cutoff > table.limit() {
        return Err(Error::range(format!(
            "cutoff must lie in [9, {}], got {cutoff}",
            table.limit()
        )));
    }
    let product: f64 = table
        .iter_primes(3, cutoff)?
        .map(|p| (p - 2) as f64 / (p - 1) as f64)
        .product();
    let c_partial = (cutoff as f64).ln() * product;
    Ok(B2Constants {
        c_partial,
        big_c_partial: 2.0 * c_partial / EXP_GAMMA,
        cutoff,
    })
}
