//! Ordinary least squares on named columns.
//!
//! Fits use a column-pivoted Householder QR of the design (never the normal
//! equations). A design whose pivoted `|R_kk| / |R_11|` ratio, after scaling
//! every column to unit norm, falls to `1e-10` or below is rejected as rank
//! deficient.

use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::dataset::{Dataset, ModelSpec};
use crate::error::{Error, Result};
use crate::linalg::{Factored, Qr};

/// Name under which the constant term is reported.
pub const INTERCEPT: &str = "(Intercept)";

/// A regression on raw slices: coefficients, residuals and sums of squares.
#[derive(Debug, Clone)]
pub struct LeastSquares {
    /// Coefficients in regressor order; the intercept, when present, comes first.
    pub coefficients: Vec<f64>,
    /// `y - X b`.
    pub residuals: Vec<f64>,
    /// Residual sum of squares.
    pub rss: f64,
    /// Total sum of squares: centered with an intercept, uncentered without.
    pub tss: f64,
    /// Residual degrees of freedom `n - p`.
    pub df: usize,
    qr: Qr,
}

impl LeastSquares {
    /// `1 - RSS/TSS`, clamped to `[0, 1]` against rounding. A zero TSS gives 0.
    pub fn r2(&self) -> f64 {
        if self.tss <= 0.0 {
            return 0.0;
        }
        (1.0 - self.rss / self.tss).clamp(0.0, 1.0)
    }

    /// Diagonal of `(X'X)^{-1}`.
    pub fn xtx_inv_diag(&self) -> Vec<f64> {
        self.qr.xtx_inv_diag()
    }
}

/// Regresses `y` on `regressors` (plus a constant when `intercept`).
///
/// `names` labels the regressors for error messages and must have the same
/// length as `regressors`.
pub fn lstsq(y: &[f64], regressors: &[&[f64]], names: &[&str], intercept: bool) -> Result<LeastSquares> {
    debug_assert_eq!(regressors.len(), names.len());
    let n = y.len();
    let ones;
    let mut cols: Vec<&[f64]> = Vec::with_capacity(regressors.len() + 1);
    if intercept {
        ones = alloc::vec![1.0; n];
        cols.push(&ones);
    }
    cols.extend_from_slice(regressors);
    let p = cols.len();
    if n <= p {
        return Err(Error::InsufficientRows { n, p });
    }
    for c in &cols {
        if c.len() != n {
            return Err(Error::InvalidInput("regressor length differs from target".into()));
        }
    }
    let qr = match Qr::factor(&cols, n) {
        Factored::FullRank(q) => q,
        Factored::Deficient(j) => {
            let column = match (intercept, j) {
                (true, 0) => INTERCEPT.to_string(),
                (true, j) => names[j - 1].to_string(),
                (false, j) => names[j].to_string(),
            };
            return Err(Error::RankDeficient { column });
        }
    };
    let (coefficients, residuals) = qr.solve(y);
    let rss = residuals.iter().map(|r| r * r).sum();
    let tss = if intercept {
        let mean = y.iter().sum::<f64>() / n as f64;
        y.iter().map(|v| (v - mean) * (v - mean)).sum()
    } else {
        y.iter().map(|v| v * v).sum()
    };
    Ok(LeastSquares {
        coefficients,
        residuals,
        rss,
        tss,
        df: n - p,
        qr,
    })
}

/// Regresses the named `target` column on the named `on` columns.
pub(crate) fn lstsq_named(data: &Dataset, target: &str, on: &[&str], intercept: bool) -> Result<LeastSquares> {
    let y = data.column(target)?;
    let cols = on.iter().map(|c| data.column(c)).collect::<Result<Vec<_>>>()?;
    lstsq(y, &cols, on, intercept)
}

/// One OLS fit of the restricted model.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct FitResult {
    /// Regressor names; the intercept (if any) first, then treatment and covariates.
    pub names: Vec<String>,
    /// Coefficients, aligned with `names`.
    pub coefficients: Vec<f64>,
    /// Classical homoskedastic standard errors, aligned with `names`.
    pub standard_errors: Vec<f64>,
    /// Residuals, one per row.
    pub residuals: Vec<f64>,
    /// Fitted values, one per row.
    pub fitted: Vec<f64>,
    /// Residual degrees of freedom `n - p`.
    pub df: usize,
    /// Total R²: centered when the model has an intercept, uncentered otherwise.
    pub total_r2: f64,
}

impl FitResult {
    fn index(&self, name: &str) -> Result<usize> {
        self.names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| Error::UnknownColumn(name.to_string()))
    }

    /// Coefficient of a regressor.
    pub fn coefficient(&self, name: &str) -> Result<f64> {
        self.index(name).map(|i| self.coefficients[i])
    }

    /// Standard error of a regressor's coefficient.
    pub fn standard_error(&self, name: &str) -> Result<f64> {
        self.index(name).map(|i| self.standard_errors[i])
    }
}

/// Fits `outcome ~ treatment + covariates` by least squares.
pub fn fit_ols(data: &Dataset, spec: &ModelSpec) -> Result<FitResult> {
    spec.validate(data)?;
    let regressors: Vec<&str> = spec.regressors().collect();
    let y = data.column(&spec.outcome)?;
    let ls = lstsq_named(data, &spec.outcome, &regressors, spec.intercept)?;

    let sigma2 = ls.rss / ls.df as f64;
    let standard_errors = ls
        .xtx_inv_diag()
        .into_iter()
        .map(|d| libm::sqrt(sigma2 * d))
        .collect();
    let mut names = Vec::with_capacity(regressors.len() + 1);
    if spec.intercept {
        names.push(INTERCEPT.to_string());
    }
    names.extend(regressors.iter().map(|s| s.to_string()));
    let fitted = y.iter().zip(&ls.residuals).map(|(y, r)| y - r).collect();
    let total_r2 = ls.r2();
    Ok(FitResult {
        names,
        coefficients: ls.coefficients,
        standard_errors,
        residuals: ls.residuals,
        fitted,
        df: ls.df,
        total_r2,
    })
}

/// Residuals of `target` regressed on `on` (plus a constant when `intercept`).
///
/// The result is orthogonal to every column in `on` and, with an intercept,
/// sums to zero. With no regressors and no intercept the target is returned
/// unchanged.
pub fn residualize(data: &Dataset, target: &str, on: &[&str], intercept: bool) -> Result<Vec<f64>> {
    if on.is_empty() && !intercept {
        return Ok(data.column(target)?.to_vec());
    }
    Ok(lstsq_named(data, target, on, intercept)?.residuals)
}

/// Estimate, standard error, t statistic and residual df of one coefficient.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct CoefSummary {
    /// Point estimate.
    pub estimate: f64,
    /// Standard error.
    pub se: f64,
    /// `estimate / se`.
    pub t: f64,
    /// Residual degrees of freedom of the fit.
    pub df: usize,
}

/// Summary of the coefficient on `name`.
pub fn coef_summary(fit: &FitResult, name: &str) -> Result<CoefSummary> {
    let i = fit.index(name)?;
    let (estimate, se) = (fit.coefficients[i], fit.standard_errors[i]);
    if !(se > 0.0) {
        return Err(Error::ZeroVarianceResidual(name.to_string()));
    }
    Ok(CoefSummary {
        estimate,
        se,
        t: estimate / se,
        df: fit.df,
    })
}
