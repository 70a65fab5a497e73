//! Omitted variable bias of a hypothetical confounder and robustness values.
//!
//! A confounder `Z` is described by two partial R²: with the treatment given
//! the covariates, `R²_{D~Z|X}`, and with the outcome given treatment and
//! covariates, `R²_{Y~Z|D,X}`. All quantities are functions of the
//! restricted-model estimate, its standard error and residual df.

use crate::error::{Error, Result};
use crate::student_t;

/// A point in sensitivity space.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct HypotheticalConfounder {
    /// `R²_{D~Z|X}`, in `[0, 1)`.
    pub r2_dz_x: f64,
    /// `R²_{Y~Z|D,X}`, in `[0, 1]`.
    pub r2_yz_dx: f64,
}

impl HypotheticalConfounder {
    /// Validated constructor.
    pub fn new(r2_dz_x: f64, r2_yz_dx: f64) -> Result<Self> {
        let hc = HypotheticalConfounder { r2_dz_x, r2_yz_dx };
        hc.validate()?;
        Ok(hc)
    }

    /// Equal strength with treatment and outcome.
    pub fn equal(r2: f64) -> Result<Self> {
        Self::new(r2, r2)
    }

    fn validate(&self) -> Result<()> {
        if !(0.0..1.0).contains(&self.r2_dz_x) {
            return Err(Error::InvalidConfounder(alloc::format!(
                "R²(D~Z|X) must lie in [0, 1), got {}",
                self.r2_dz_x
            )));
        }
        if !(0.0..=1.0).contains(&self.r2_yz_dx) {
            return Err(Error::InvalidConfounder(alloc::format!(
                "R²(Y~Z|D,X) must lie in [0, 1], got {}",
                self.r2_yz_dx
            )));
        }
        Ok(())
    }
}

/// Target of a robustness value: the fraction `q` of the estimate to explain
/// away, the significance level, and whether the confounder is assumed to
/// reduce the estimate's magnitude when adjusting.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct RobustnessQuery {
    /// In `(0, 1]`.
    pub q: f64,
    /// In `(0, 1)`.
    pub alpha: f64,
    /// Adjust towards zero (`true`) or away from zero.
    pub reduce: bool,
}

impl RobustnessQuery {
    /// Validated constructor.
    pub fn new(q: f64, alpha: f64, reduce: bool) -> Result<Self> {
        check_q(q)?;
        check_alpha(alpha)?;
        Ok(RobustnessQuery { q, alpha, reduce })
    }
}

impl Default for RobustnessQuery {
    fn default() -> Self {
        RobustnessQuery {
            q: 1.0,
            alpha: 0.05,
            reduce: true,
        }
    }
}

fn check_q(q: f64) -> Result<()> {
    if q > 0.0 && q <= 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidQ(q))
    }
}

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidAlpha(alpha))
    }
}

fn check_df(df: usize, min: usize) -> Result<()> {
    if df < min {
        Err(Error::DegenerateDf { df, min })
    } else {
        Ok(())
    }
}

fn check_se(se: f64) -> Result<()> {
    if se > 0.0 && se.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidInput(alloc::format!("standard error must be positive, got {se}")))
    }
}

/// Bias magnitude implied by a confounder:
/// `se · sqrt(df · R²_{Y~Z|D,X} · R²_{D~Z|X} / (1 - R²_{D~Z|X}))`,
/// with `se` and `df` from the restricted regression.
pub fn bias_magnitude(se_res: f64, df: usize, hc: HypotheticalConfounder) -> Result<f64> {
    check_se(se_res)?;
    check_df(df, 1)?;
    hc.validate()?;
    Ok(se_res * libm::sqrt(df as f64 * hc.r2_yz_dx * hc.r2_dz_x / (1.0 - hc.r2_dz_x)))
}

/// Bias-adjusted estimate: `sign(est)·(|est| ∓ bias)`, subtracting when
/// `reduce`. A zero estimate is treated as positive.
pub fn adjusted_estimate(est_res: f64, se_res: f64, df: usize, hc: HypotheticalConfounder, reduce: bool) -> Result<f64> {
    let bias = bias_magnitude(se_res, df, hc)?;
    let sign = if est_res < 0.0 { -1.0 } else { 1.0 };
    Ok(if reduce {
        sign * (est_res.abs() - bias)
    } else {
        sign * (est_res.abs() + bias)
    })
}

/// Bias-adjusted standard error:
/// `se · sqrt((1 - R²_{Y~Z|D,X}) / (1 - R²_{D~Z|X})) · sqrt(df / (df - 1))`.
pub fn adjusted_se(se_res: f64, df: usize, hc: HypotheticalConfounder) -> Result<f64> {
    check_se(se_res)?;
    check_df(df, 2)?;
    hc.validate()?;
    let df = df as f64;
    Ok(se_res * libm::sqrt((1.0 - hc.r2_yz_dx) / (1.0 - hc.r2_dz_x)) * libm::sqrt(df / (df - 1.0)))
}

/// Bias-adjusted t statistic for the null `τ = null`.
pub fn adjusted_t(
    est_res: f64,
    se_res: f64,
    df: usize,
    hc: HypotheticalConfounder,
    reduce: bool,
    null: f64,
) -> Result<f64> {
    let est = adjusted_estimate(est_res, se_res, df, hc, reduce)?;
    let se = adjusted_se(se_res, df, hc)?;
    Ok((est - null) / se)
}

/// `½(√(f⁴ + 4f²) − f²)`: the equal-strength R² solving `x / √(1 − x) = f`.
fn rv_from_f(f: f64) -> f64 {
    if f <= 0.0 {
        return 0.0;
    }
    let f2 = f * f;
    // Written as 2f² / (f² + √(f⁴ + 4f²)) to avoid cancellation for large f.
    2.0 * f2 / (f2 + libm::sqrt(f2 * f2 + 4.0 * f2))
}

/// Robustness value `RV_q`: the equal strength of association with
/// treatment and outcome that would reduce the estimate by `100·q` percent.
pub fn robustness_value(t_res: f64, df: usize, q: f64) -> Result<f64> {
    check_q(q)?;
    check_df(df, 1)?;
    if !t_res.is_finite() {
        return Err(Error::InvalidInput("t statistic is not finite".into()));
    }
    Ok(rv_from_f(q * t_res.abs() / libm::sqrt(df as f64)))
}

/// Robustness value `RV_{q,α}`: the equal strength at which the
/// bias-adjusted t test of `τ = (1 − q)·τ̂` stops rejecting at level `alpha`.
///
/// The critical value is taken with `df − 1` degrees of freedom, the df of
/// the regression once the confounder is added. Returns 0 when the estimate
/// is already insignificant.
pub fn robustness_value_alpha(t_res: f64, df: usize, q: f64, alpha: f64) -> Result<f64> {
    check_q(q)?;
    check_alpha(alpha)?;
    check_df(df, 2)?;
    if !t_res.is_finite() {
        return Err(Error::InvalidInput("t statistic is not finite".into()));
    }
    let t_crit = student_t::critical_value(alpha, (df - 1) as f64)?;
    let f = q * t_res.abs() / libm::sqrt(df as f64) - t_crit / libm::sqrt((df - 1) as f64);
    Ok(rv_from_f(f))
}

/// Relative bias `|bias / τ̂_res|` implied by partial correlations:
/// `(|R_{Y~Z|D,X}|·|R_{D~Z|X}| / |R_{Y~D|X}|) · sqrt((1 − R²_{Y~D|X}) / (1 − R²_{D~Z|X}))`.
pub fn relative_bias(r_yz_dx: f64, r_dz_x: f64, r_yd_x: f64) -> Result<f64> {
    if !r_yd_x.is_finite() || r_yd_x.abs() >= 1.0 {
        return Err(Error::InvalidCorrelation(r_yd_x));
    }
    if r_yd_x == 0.0 {
        return Err(Error::ZeroTreatmentAssociation);
    }
    if !r_dz_x.is_finite() || r_dz_x.abs() >= 1.0 {
        return Err(Error::InvalidCorrelation(r_dz_x));
    }
    if !r_yz_dx.is_finite() || r_yz_dx.abs() > 1.0 {
        return Err(Error::InvalidCorrelation(r_yz_dx));
    }
    let ratio = r_yz_dx.abs() * r_dz_x.abs() / r_yd_x.abs();
    Ok(ratio * libm::sqrt((1.0 - r_yd_x * r_yd_x) / (1.0 - r_dz_x * r_dz_x)))
}

/// `R²_{Y~D|X}` recovered from the treatment t statistic: `t² / (t² + df)`.
pub fn r2_yd_x_from_t(t_res: f64, df: usize) -> f64 {
    t_res * t_res / (t_res * t_res + df as f64)
}

/// Everything a hypothetical confounder does to the treatment estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct BiasReport {
    /// Magnitude of the bias, in units of the coefficient.
    pub bias_magnitude: f64,
    /// Bias-adjusted estimate.
    pub adjusted_estimate: f64,
    /// Bias-adjusted standard error.
    pub adjusted_se: f64,
    /// Bias-adjusted t statistic for the null of no effect.
    pub adjusted_t: f64,
    /// `bias_magnitude / |estimate|`.
    pub relative_bias: f64,
}

/// Bias report for a hypothetical confounder.
pub fn bias_report(est_res: f64, se_res: f64, df: usize, hc: HypotheticalConfounder, reduce: bool) -> Result<BiasReport> {
    let bias = bias_magnitude(se_res, df, hc)?;
    let est = adjusted_estimate(est_res, se_res, df, hc, reduce)?;
    let se = adjusted_se(se_res, df, hc)?;
    if est_res == 0.0 {
        return Err(Error::ZeroTreatmentAssociation);
    }
    Ok(BiasReport {
        bias_magnitude: bias,
        adjusted_estimate: est,
        adjusted_se: se,
        adjusted_t: est / se,
        relative_bias: bias / est_res.abs(),
    })
}
