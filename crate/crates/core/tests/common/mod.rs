//! Reference implementations used only by the tests. None of them call into
//! the crate under test.

#![allow(dead_code)]

pub const EXP_GAMMA: f64 = 1.781_072_417_990_198;

pub fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

pub fn trial_is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

pub fn trial_primes(lo: u64, hi: u64) -> Vec<u64> {
    (lo..=hi).filter(|&n| trial_is_prime(n)).collect()
}

pub fn smallest_factor(x: u64) -> u64 {
    (2..).take_while(|d| d * d <= x).find(|d| x.is_multiple_of(*d)).unwrap_or(x)
}

/// Goldbach pair count by a plain double loop with trial division.
pub fn naive_gp(two_n: u64) -> u64 {
    let mut count = 0;
    for p in 2..=two_n / 2 {
        if trial_is_prime(p) && trial_is_prime(two_n - p) {
            count += 1;
        }
    }
    count
}

/// Pen primes that divide `two_n`, by trial division.
pub fn naive_band(two_n: u64) -> Vec<u64> {
    (2..)
        .take_while(|p| p * p <= two_n)
        .filter(|&p| trial_is_prime(p) && two_n.is_multiple_of(p))
        .collect()
}

/// Nodes and weights of the `n`-point Gauss–Legendre rule on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    (1..=n)
        .map(|i| {
            let mut x = (std::f64::consts::PI * (i as f64 - 0.25) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (mut p0, mut p1) = (1.0, x);
                for k in 2..=n {
                    let k = k as f64;
                    (p0, p1) = (p1, ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k);
                }
                dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
                let step = p1 / dp;
                x -= step;
                if step.abs() < 1e-16 {
                    break;
                }
            }
            (x, 2.0 / ((1.0 - x * x) * dp * dp))
        })
        .collect()
}

fn panel<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, rule: &[(f64, f64)]) -> f64 {
    let (mid, half) = (0.5 * (a + b), 0.5 * (b - a));
    half * rule.iter().map(|&(x, w)| w * f(mid + half * x)).sum::<f64>()
}

/// `∫ₐᵇ f` with 20-point Gauss–Legendre panels whose distance from `origin`
/// grows by 1.5 per panel, suited to smooth integrands that vary on the
/// scale of `t - origin`.
pub fn graded_integral<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, origin: f64) -> f64 {
    assert!(a < b && a > origin);
    let rule = gauss_legendre(20);
    let mut total = 0.0;
    let mut lo = a;
    while lo < b {
        let hi = (origin + 1.5 * (lo - origin)).min(b);
        total += panel(&f, lo, hi, &rule);
        lo = hi;
    }
    total
}

/// Principal value `li(x) = ln(x - 1) + ∫₀ˣ (1/ln t - 1/(t - 1)) dt`; the
/// integrand has a removable singularity at 1.
pub fn li_oracle(x: f64) -> f64 {
    assert!(x >= 2.0);
    let g = |t: f64| 1.0 / (t - 1.0).ln_1p() - 1.0 / (t - 1.0);
    let rule = gauss_legendre(20);
    // [0, 1] in dyadic panels towards 0, where 1/ln t is not smooth.
    let mut below = 0.0;
    for k in 0..90 {
        let hi = 0.5f64.powi(k);
        below += panel(&g, 0.5 * hi, hi, &rule);
    }
    let mut above = panel(&g, 1.0, 2.0, &rule);
    if x > 2.0 {
        above += graded_integral(g, 2.0, x, 1.0);
    }
    (x - 1.0).ln() + below + above
}

/// `∫_{p²}^{x} e^γ / log_p(t / p) dt` by quadrature.
pub fn i2_oracle(x: f64, p: f64) -> f64 {
    if x <= p * p {
        return 0.0;
    }
    let lp = p.ln();
    graded_integral(|t| EXP_GAMMA * lp / (t / p).ln(), p * p, x, 0.0)
}

/// `∫_{p³}^{x} Σ_{p <= r, p r² <= t} (e^γ / r) / log_p(t / (p r)) dt`, with
/// the step-sum integrated piecewise between the thresholds `p r²`.
pub fn i3_oracle(x: f64, p: u64) -> f64 {
    let pf = p as f64;
    let lp = pf.ln();
    let rs: Vec<u64> = trial_primes(p, (x / pf).sqrt() as u64 + 1)
        .into_iter()
        .filter(|&r| (p * r * r) as f64 <= x)
        .collect();
    let mut total = 0.0;
    for (j, _) in rs.iter().enumerate() {
        let lo = (p * rs[j] * rs[j]) as f64;
        let hi = rs.get(j + 1).map_or(x, |&r| (p * r * r) as f64).min(x);
        if lo >= hi {
            continue;
        }
        let active = &rs[..=j];
        let f = |t: f64| -> f64 {
            active
                .iter()
                .map(|&r| EXP_GAMMA / r as f64 * lp / (t / (pf * r as f64)).ln())
                .sum()
        };
        total += graded_integral(f, lo, hi, 0.0);
    }
    total
}

/// `α(x, p)` from the quadrature integrals and exact power thresholds.
pub fn alpha_oracle(x: u64, p: u64) -> f64 {
    let xf = x as f64;
    let pk = |k: u32| p.checked_pow(k).is_some_and(|v| v <= x);
    if pk(4) {
        1.0
    } else if pk(3) {
        (i2_oracle(xf, p as f64) + i3_oracle(xf, p)) / xf
    } else if pk(2) {
        i2_oracle(xf, p as f64) / xf
    } else {
        0.0
    }
}

/// IGP assembled from [`alpha_oracle`].
pub fn igp_oracle(two_n: u64) -> f64 {
    let n = two_n / 2;
    let mut product = 1.0;
    for p in trial_primes(3, (two_n as f64).sqrt() as u64 + 1) {
        if p * p > two_n {
            break;
        }
        let pf = p as f64;
        let f = if two_n.is_multiple_of(p) {
            pf - alpha_oracle(n, p)
        } else {
            pf - 2.0 * alpha_oracle(two_n, p)
        };
        product *= f / pf;
    }
    n as f64 / 2.0 * product
}

/// EGP straight from its product formula.
pub fn egp_oracle(two_n: u64) -> f64 {
    let mut product = 1.0;
    for p in trial_primes(3, (two_n as f64).sqrt() as u64 + 1) {
        if p * p > two_n {
            break;
        }
        let f = if two_n.is_multiple_of(p) { p - 1 } else { p - 2 };
        product *= f as f64 / p as f64;
    }
    (two_n / 2) as f64 / 2.0 * product
}

/// Total `k`-factor RPF over real primes by explicit enumeration of the
/// nondecreasing cofactor chains `p <= r₁ <= … <= r_{k-2} <= s`.
pub fn trpf_oracle(x: f64, p: u64, k: u32) -> f64 {
    let pf = p as f64;
    if x < pf.powi(k as i32) {
        return 0.0;
    }
    let primes = trial_primes(p, (x / pf).sqrt() as u64 + 1);
    fn walk(primes: &[u64], from: usize, q: f64, left: u32, weight: f64, lp: f64) -> f64 {
        if left == 1 {
            return weight * lp / q.ln();
        }
        let mut total = 0.0;
        for j in from..primes.len() {
            let r = primes[j] as f64;
            if r.powi(left as i32) > q {
                break;
            }
            total += walk(primes, j, q / r, left - 1, weight / r, lp);
        }
        total
    }
    EXP_GAMMA * walk(&primes, 0, x / pf, k - 1, 1.0, pf.ln())
}
