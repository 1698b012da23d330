//! Per-band aggregates and estimator error reports over scan records.
//!
//! Every aggregate walks the records in their (ascending) order, so results
//! are bit-for-bit reproducible. An empty selection is reported as `None`,
//! not as an error.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::goldbach::{BandSignature, GpRecord};
use crate::numerics::li_offset;

/// Closed interval of evens `[lo, hi]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Window {
    pub lo: u64,
    pub hi: u64,
}

impl Window {
    pub fn new(lo: u64, hi: u64) -> Result<Self> {
        if lo > hi {
            return Err(Error::range(format!("empty window [{lo}, {hi}]")));
        }
        Ok(Self { lo, hi })
    }

    pub fn contains(&self, two_n: u64) -> bool {
        (self.lo..=self.hi).contains(&two_n)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BandStats {
    pub band: BandSignature,
    pub window: Window,
    pub member_count: usize,
    pub mean_gp: f64,
    pub median_gp: f64,
    pub min_gp: f64,
    pub max_gp: f64,
    pub mean_egp: f64,
    pub mean_igp: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ErrorReport {
    pub stats: BandStats,
    /// Mean of `egp - gp`.
    pub bias_egp: f64,
    /// Mean of `igp - gp`.
    pub bias_igp: f64,
    pub mae_egp: f64,
    pub mae_igp: f64,
    /// `max - min` of `gp - igp`.
    pub bandwidth_igp: f64,
    /// Fraction of members with `|gp - igp| <= 2 Li(√2n)`.
    pub frac_within_bound: f64,
}

/// `2 Li(√2n)`, the suggested width of the IGP error band.
pub fn error_bound(two_n: u64) -> f64 {
    2.0 * li_offset((two_n as f64).sqrt()).unwrap_or(0.0)
}

fn check_sorted(records: &[GpRecord]) -> Result<()> {
    if records.windows(2).any(|w| w[0].two_n >= w[1].two_n) {
        return Err(Error::invalid("records must be sorted by ascending 2n"));
    }
    Ok(())
}

fn in_window(records: &[GpRecord], window: Window) -> &[GpRecord] {
    let start = records.partition_point(|r| r.two_n < window.lo);
    let end = records.partition_point(|r| r.two_n <= window.hi);
    &records[start..end.max(start)]
}

fn members<'a>(
    records: &'a [GpRecord],
    band: &'a BandSignature,
    window: Window,
) -> impl Iterator<Item = &'a GpRecord> + 'a {
    in_window(records, window).iter().filter(move |r| &r.band == band)
}

fn stats_of(band: BandSignature, window: Window, selected: &[&GpRecord]) -> Option<BandStats> {
    if selected.is_empty() {
        return None;
    }
    let n = selected.len() as f64;
    let mut gps: Vec<f64> = selected.iter().map(|r| r.gp_count as f64).collect();
    let mean_gp = gps.iter().sum::<f64>() / n;
    let mean_egp = selected.iter().map(|r| r.egp).sum::<f64>() / n;
    let mean_igp = selected.iter().map(|r| r.igp).sum::<f64>() / n;
    gps.sort_by(f64::total_cmp);
    let mid = gps.len() / 2;
    let median_gp = if gps.len() % 2 == 1 { gps[mid] } else { 0.5 * (gps[mid - 1] + gps[mid]) };
    Some(BandStats {
        band,
        window,
        member_count: selected.len(),
        mean_gp,
        median_gp,
        min_gp: gps[0],
        max_gp: gps[gps.len() - 1],
        mean_egp,
        mean_igp,
    })
}

pub fn band_stats(
    records: &[GpRecord],
    band: &BandSignature,
    window: Window,
) -> Result<Option<BandStats>> {
    check_sorted(records)?;
    let selected: Vec<&GpRecord> = members(records, band, window).collect();
    Ok(stats_of(band.clone(), window, &selected))
}

/// Stats for every band present in `window`, ordered by band signature.
pub fn all_band_stats(records: &[GpRecord], window: Window) -> Result<Vec<BandStats>> {
    check_sorted(records)?;
    let mut groups: BTreeMap<&BandSignature, Vec<&GpRecord>> = BTreeMap::new();
    for r in in_window(records, window) {
        groups.entry(&r.band).or_default().push(r);
    }
    Ok(groups
        .into_iter()
        .filter_map(|(band, sel)| stats_of(band.clone(), window, &sel))
        .collect())
}

/// `mean_gp(band_b) / mean_gp(band_a)`; `None` when either band is absent.
pub fn band_ratio(
    records: &[GpRecord],
    band_a: &BandSignature,
    band_b: &BandSignature,
    window: Window,
) -> Result<Option<f64>> {
    let a = band_stats(records, band_a, window)?;
    let b = band_stats(records, band_b, window)?;
    Ok(match (a, b) {
        (Some(a), Some(b)) => Some(b.mean_gp / a.mean_gp),
        _ => None,
    })
}

pub fn error_report(
    records: &[GpRecord],
    band: &BandSignature,
    window: Window,
) -> Result<Option<ErrorReport>> {
    check_sorted(records)?;
    let selected: Vec<&GpRecord> = members(records, band, window).collect();
    let Some(stats) = stats_of(band.clone(), window, &selected) else {
        return Ok(None);
    };
    let n = selected.len() as f64;
    let mut bias_egp = 0.0;
    let mut bias_igp = 0.0;
    let mut mae_egp = 0.0;
    let mut mae_igp = 0.0;
    let mut lo_resid = f64::INFINITY;
    let mut hi_resid = f64::NEG_INFINITY;
    let mut within = 0usize;
    for r in &selected {
        let gp = r.gp_count as f64;
        bias_egp += r.egp - gp;
        bias_igp += r.igp - gp;
        mae_egp += (r.egp - gp).abs();
        mae_igp += (r.igp - gp).abs();
        let resid = gp - r.igp;
        lo_resid = lo_resid.min(resid);
        hi_resid = hi_resid.max(resid);
        if resid.abs() <= error_bound(r.two_n) {
            within += 1;
        }
    }
    Ok(Some(ErrorReport {
        stats,
        bias_egp: bias_egp / n,
        bias_igp: bias_igp / n,
        mae_egp: mae_egp / n,
        mae_igp: mae_igp / n,
        bandwidth_igp: hi_resid - lo_resid,
        frac_within_bound: within as f64 / n,
    }))
}
