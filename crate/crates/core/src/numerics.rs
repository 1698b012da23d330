//! Logarithmic integral, constants and adaptive Simpson quadrature.

use crate::error::{Error, Result};

/// Euler–Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
/// `exp(γ)`.
pub const EXP_GAMMA: f64 = 1.781_072_417_990_198;
/// `li(2)`.
pub const LI_2: f64 = 1.045_163_780_117_493;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Constants {
    pub gamma: f64,
    pub e_gamma: f64,
    pub li2: f64,
}

impl Constants {
    pub const fn get() -> Self {
        Self { gamma: EULER_GAMMA, e_gamma: EXP_GAMMA, li2: LI_2 }
    }
}

/// The logarithmic integral `li(x)`, principal value of `∫₀ˣ dt / ln t`.
///
/// Uses Ramanujan's series
///
/// ```text
/// li(x) = γ + ln ln x + √x Σₙ (-1)ⁿ⁻¹ (ln x)ⁿ / (n! 2ⁿ⁻¹) Σ_{k ≤ (n-1)/2} 1/(2k+1)
/// ```
///
/// which converges for every `x > 1` and loses little to cancellation up to
/// `x ≈ 1e12` because the terms alternate with magnitude `(ln x / 2)ⁿ / n!`.
pub fn li(x: f64) -> Result<f64> {
    if !x.is_finite() || x <= 1.0 {
        return Err(Error::domain(format!("li(x) requires finite x > 1, got {x}")));
    }
    Ok(li_series(x))
}

pub(crate) fn li_series(x: f64) -> f64 {
    let l = x.ln();
    let mut term = l;
    let mut odd_harmonic = 1.0;
    let mut sum = l;
    let mut n = 1u32;
    loop {
        n += 1;
        term *= -l / (2.0 * f64::from(n));
        if n % 2 == 1 {
            odd_harmonic += 1.0 / f64::from(n);
        }
        let delta = term * odd_harmonic;
        sum += delta;
        if f64::from(n) > l && delta.abs() <= 1e-17 * sum.abs() {
            break;
        }
    }
    EULER_GAMMA + l.ln() + x.sqrt() * sum
}

/// The offset logarithmic integral `Li(x) = li(x) - li(2)`.
pub fn li_offset(x: f64) -> Result<f64> {
    if !x.is_finite() || x < 2.0 {
        return Err(Error::domain(format!("Li(x) requires finite x >= 2, got {x}")));
    }
    if x == 2.0 {
        return Ok(0.0);
    }
    Ok(li_series(x) - LI_2)
}

const MAX_DEPTH: u32 = 48;
const INITIAL_PANELS: usize = 8;

/// Adaptive Simpson estimate of `∫ₐᵇ f`.
///
/// The tolerance is relative to the integral of `|f|` as seen by the initial
/// eight-panel pass. Any NaN or infinite sample aborts with the abscissa.
pub fn quadrature<F>(f: F, a: f64, b: f64, rel_tol: f64) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    if !(a.is_finite() && b.is_finite()) || a > b {
        return Err(Error::invalid(format!("quadrature needs finite a <= b, got [{a}, {b}]")));
    }
    if !(1e-12..=1e-3).contains(&rel_tol) {
        return Err(Error::invalid(format!("rel_tol {rel_tol} outside [1e-12, 1e-3]")));
    }
    if a == b {
        return Ok(0.0);
    }

    let eval = |x: f64| -> Result<f64> {
        let y = f(x);
        if y.is_finite() {
            Ok(y)
        } else {
            Err(Error::NonFinite { abscissa: x, value: y })
        }
    };

    let width = (b - a) / INITIAL_PANELS as f64;
    let mut panels = Vec::with_capacity(INITIAL_PANELS);
    let mut scale = 0.0;
    for i in 0..INITIAL_PANELS {
        let lo = a + width * i as f64;
        let hi = if i + 1 == INITIAL_PANELS { b } else { lo + width };
        let mid = 0.5 * (lo + hi);
        let (flo, fmid, fhi) = (eval(lo)?, eval(mid)?, eval(hi)?);
        let whole = simpson(lo, hi, flo, fmid, fhi);
        scale += (hi - lo) / 6.0 * (flo.abs() + 4.0 * fmid.abs() + fhi.abs());
        panels.push(Panel { lo, hi, flo, fmid, fhi, whole });
    }
    if scale == 0.0 {
        return Ok(0.0);
    }

    let tol = rel_tol * scale / INITIAL_PANELS as f64;
    let mut total = 0.0;
    for panel in panels {
        total += refine(&eval, panel, tol, MAX_DEPTH)?;
    }
    Ok(total)
}

#[derive(Clone, Copy)]
struct Panel {
    lo: f64,
    hi: f64,
    flo: f64,
    fmid: f64,
    fhi: f64,
    whole: f64,
}

fn simpson(lo: f64, hi: f64, flo: f64, fmid: f64, fhi: f64) -> f64 {
    (hi - lo) / 6.0 * (flo + 4.0 * fmid + fhi)
}

fn refine<E>(eval: &E, p: Panel, tol: f64, depth: u32) -> Result<f64>
where
    E: Fn(f64) -> Result<f64>,
{
    let mid = 0.5 * (p.lo + p.hi);
    let left_mid = 0.5 * (p.lo + mid);
    let right_mid = 0.5 * (mid + p.hi);
    let (fl, fr) = (eval(left_mid)?, eval(right_mid)?);
    let left = simpson(p.lo, mid, p.flo, fl, p.fmid);
    let right = simpson(mid, p.hi, p.fmid, fr, p.fhi);
    let diff = left + right - p.whole;
    if depth == 0 || diff.abs() <= 15.0 * tol || mid <= p.lo || mid >= p.hi {
        return Ok(left + right + diff / 15.0);
    }
    let l = Panel { lo: p.lo, hi: mid, flo: p.flo, fmid: fl, fhi: p.fmid, whole: left };
    let r = Panel { lo: mid, hi: p.hi, flo: p.fmid, fmid: fr, fhi: p.fhi, whole: right };
    Ok(refine(eval, l, 0.5 * tol, depth - 1)? + refine(eval, r, 0.5 * tol, depth - 1)?)
}
