//! Student-t distribution: CDF via the regularized incomplete beta function
//! and quantiles by bracketed Newton iteration.

use crate::error::{Error, Result};

const EPS: f64 = 1e-16;
const TINY: f64 = 1e-300;

/// Continued fraction for the incomplete beta function (modified Lentz).
fn beta_cf(a: f64, b: f64, x: f64) -> f64 {
    let qab = a + b;
    let qap = a + 1.0;
    let qam = a - 1.0;
    let mut c = 1.0;
    let mut d = 1.0 - qab * x / qap;
    if d.abs() < TINY {
        d = TINY;
    }
    d = 1.0 / d;
    let mut h = d;
    for m in 1..10_000 {
        let m = m as f64;
        let m2 = 2.0 * m;
        let aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = 1.0 + aa / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        h *= d * c;
        let aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = 1.0 + aa / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let del = d * c;
        h *= del;
        if (del - 1.0).abs() < EPS {
            break;
        }
    }
    h
}

/// Regularized incomplete beta `I_x(a, b)` for `a, b > 0`, `x` in `[0, 1]`.
pub fn inc_beta(a: f64, b: f64, x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    if x >= 1.0 {
        return 1.0;
    }
    let ln_front = libm::lgamma(a + b) - libm::lgamma(a) - libm::lgamma(b) + a * libm::log(x) + b * libm::log1p(-x);
    let front = libm::exp(ln_front);
    if x < (a + 1.0) / (a + b + 2.0) {
        front * beta_cf(a, b, x) / a
    } else {
        1.0 - front * beta_cf(b, a, 1.0 - x) / b
    }
}

fn check_df(df: f64) -> Result<()> {
    if !(df > 0.0) || !df.is_finite() {
        return Err(Error::InvalidInput(alloc::format!("degrees of freedom must be positive, got {df}")));
    }
    Ok(())
}

/// `P(T > t)` for `t >= 0`, computed without cancellation.
fn upper_tail_nonneg(t: f64, df: f64) -> f64 {
    // I_{df/(df+t²)}(df/2, 1/2) / 2, with the argument formed stably.
    let x = df / (df + t * t);
    if x < 0.5 {
        0.5 * inc_beta(df / 2.0, 0.5, x)
    } else {
        // Use the complement to keep precision near t = 0.
        0.5 * (1.0 - inc_beta(0.5, df / 2.0, t * t / (df + t * t)))
    }
}

/// Cumulative distribution function `P(T <= t)`.
pub fn cdf(t: f64, df: f64) -> Result<f64> {
    check_df(df)?;
    if t.is_nan() {
        return Err(Error::InvalidInput("t is NaN".into()));
    }
    let tail = upper_tail_nonneg(t.abs(), df);
    Ok(if t >= 0.0 { 1.0 - tail } else { tail })
}

/// Density at `t`.
pub fn pdf(t: f64, df: f64) -> Result<f64> {
    check_df(df)?;
    let ln = libm::lgamma((df + 1.0) / 2.0)
        - libm::lgamma(df / 2.0)
        - 0.5 * libm::log(df * core::f64::consts::PI)
        - (df + 1.0) / 2.0 * libm::log1p(t * t / df);
    Ok(libm::exp(ln))
}

/// Standard normal quantile (Acklam's rational approximation, relative
/// error about 1e-9); only used as a starting point.
fn normal_quantile(p: f64) -> f64 {
    const A: [f64; 6] = [
        -3.969683028665376e1,
        2.209460984245205e2,
        -2.759285104469687e2,
        1.383_577_518_672_69e2,
        -3.066479806614716e1,
        2.506628277459239,
    ];
    const B: [f64; 5] = [
        -5.447609879822406e1,
        1.615858368580409e2,
        -1.556989798598866e2,
        6.680131188771972e1,
        -1.328068155288572e1,
    ];
    const C: [f64; 6] = [
        -7.784894002430293e-3,
        -3.223964580411365e-1,
        -2.400758277161838,
        -2.549732539343734,
        4.374664141464968,
        2.938163982698783,
    ];
    const D: [f64; 4] = [7.784695709041462e-3, 3.224671290700398e-1, 2.445134137142996, 3.754408661907416];
    let plow = 0.02425;
    if p < plow {
        let q = libm::sqrt(-2.0 * libm::log(p));
        (((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5])
            / ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0)
    } else if p <= 1.0 - plow {
        let q = p - 0.5;
        let r = q * q;
        (((((A[0] * r + A[1]) * r + A[2]) * r + A[3]) * r + A[4]) * r + A[5]) * q
            / (((((B[0] * r + B[1]) * r + B[2]) * r + B[3]) * r + B[4]) * r + 1.0)
    } else {
        -normal_quantile(1.0 - p)
    }
}

/// The value `t >= 0` with `P(T > t) = upper`, for `upper` in `(0, 0.5]`.
pub fn upper_quantile(upper: f64, df: f64) -> Result<f64> {
    check_df(df)?;
    if !(upper > 0.0 && upper <= 0.5) {
        return Err(Error::InvalidInput(alloc::format!("upper-tail probability must lie in (0, 0.5], got {upper}")));
    }
    if upper == 0.5 {
        return Ok(0.0);
    }
    let f = |t: f64| upper_tail_nonneg(t, df) - upper;

    // Bracket the root: f is decreasing in t.
    let mut lo = 0.0;
    let mut hi = normal_quantile(1.0 - upper).max(1.0);
    while f(hi) > 0.0 {
        lo = hi;
        hi *= 2.0;
        if hi > 1e300 {
            return Err(Error::BracketFailure);
        }
    }
    // Start from the normal quantile with the first Cornish-Fisher term.
    let z = normal_quantile(1.0 - upper);
    let mut t = z + (z * z * z + z) / (4.0 * df);
    if !(t > lo && t < hi) {
        t = 0.5 * (lo + hi);
    }
    for _ in 0..200 {
        let ft = f(t);
        if ft == 0.0 {
            return Ok(t);
        }
        if ft > 0.0 {
            lo = t;
        } else {
            hi = t;
        }
        let dens = pdf(t, df)?;
        let mut next = t + ft / dens;
        if !(next > lo && next < hi) || !next.is_finite() {
            next = 0.5 * (lo + hi);
        }
        if (next - t).abs() <= 1e-15 * t.abs().max(1.0) || hi - lo <= 1e-15 * hi {
            return Ok(next);
        }
        t = next;
    }
    Ok(t)
}

/// Quantile function `F^{-1}(p)` for `p` in `(0, 1)`.
pub fn quantile(p: f64, df: f64) -> Result<f64> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::InvalidInput(alloc::format!("probability must lie in (0, 1), got {p}")));
    }
    if p >= 0.5 {
        upper_quantile(1.0 - p, df)
    } else {
        upper_quantile(p, df).map(|t| -t)
    }
}

/// Two-sided critical value `t*` with `P(|T| > t*) = alpha`.
pub fn critical_value(alpha: f64, df: f64) -> Result<f64> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::InvalidAlpha(alpha));
    }
    upper_quantile(alpha / 2.0, df)
}
