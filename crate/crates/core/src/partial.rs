//! Total and partial R², partial correlations and related identities.
//!
//! Every regression here includes a constant term. Partial R² is available
//! through two independent routes: the increment-in-R² definition
//! ([`partial_r2`]) and the squared correlation of residuals
//! ([`partial_corr`]). The former is used for magnitudes, the latter for
//! signed values.

use alloc::string::ToString;
use alloc::vec::Vec;

use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::ols::{lstsq, lstsq_named};

/// Conditioning sets with `1 - R² < SATURATION_TOL` are rejected.
pub const SATURATION_TOL: f64 = 1e-12;

/// The triple `(left, right | given)` of a partial association.
#[derive(Debug, Clone)]
pub struct PartialQuery<'a> {
    /// Dataset holding every column.
    pub data: &'a Dataset,
    /// Left variable (e.g. the outcome).
    pub left: &'a str,
    /// Right variable (e.g. the confounder).
    pub right: &'a str,
    /// Conditioning set.
    pub given: Vec<&'a str>,
}

impl<'a> PartialQuery<'a> {
    /// Creates a query.
    pub fn new(data: &'a Dataset, left: &'a str, right: &'a str, given: &[&'a str]) -> Self {
        PartialQuery {
            data,
            left,
            right,
            given: given.to_vec(),
        }
    }

    fn validate(&self) -> Result<()> {
        if self.left == self.right {
            return Err(Error::InvalidInput("left and right are the same column".into()));
        }
        if self.given.iter().any(|g| *g == self.left || *g == self.right) {
            return Err(Error::InvalidInput("left or right appears in the conditioning set".into()));
        }
        Ok(())
    }
}

/// Centered R² of `target ~ 1 + on`.
pub fn total_r2(data: &Dataset, target: &str, on: &[&str]) -> Result<f64> {
    Ok(lstsq_named(data, target, on, true)?.r2())
}

/// Unclamped `1 - RSS/TSS`, used where differences of R² matter.
fn raw_r2(data: &Dataset, target: &str, on: &[&str]) -> Result<f64> {
    let ls = lstsq_named(data, target, on, true)?;
    if ls.tss <= 0.0 {
        return Err(Error::ZeroVarianceResidual(target.to_string()));
    }
    Ok(1.0 - ls.rss / ls.tss)
}

/// Partial R² of `left` with the block `right` given `given`, by the
/// increment-in-R² definition `(R²(l~r+g) - R²(l~g)) / (1 - R²(l~g))`.
pub fn partial_r2_group(data: &Dataset, left: &str, right: &[&str], given: &[&str]) -> Result<f64> {
    if right.is_empty() {
        return Err(Error::InvalidInput("empty right-hand block".into()));
    }
    if right.contains(&left) || given.contains(&left) || right.iter().any(|r| given.contains(r)) {
        return Err(Error::InvalidInput("overlapping variables in partial R² query".into()));
    }
    let restricted = raw_r2(data, left, given)?;
    if 1.0 - restricted < SATURATION_TOL {
        return Err(Error::DegenerateConditioning(left.to_string()));
    }
    let mut all: Vec<&str> = given.to_vec();
    all.extend_from_slice(right);
    let full = raw_r2(data, left, &all)?;
    Ok(((full - restricted) / (1.0 - restricted)).clamp(0.0, 1.0))
}

/// Partial R² of `q.left` and `q.right` given `q.given`.
pub fn partial_r2(q: &PartialQuery<'_>) -> Result<f64> {
    q.validate()?;
    partial_r2_group(q.data, q.left, &[q.right], &q.given)
}

/// Residuals of `target` on `given`, rejecting (numerically) zero variance.
fn nondegenerate_residual(data: &Dataset, target: &str, given: &[&str]) -> Result<Vec<f64>> {
    let ls = lstsq_named(data, target, given, true)?;
    if !(ls.tss > 0.0) || ls.rss < SATURATION_TOL * ls.tss {
        return Err(Error::ZeroVarianceResidual(target.to_string()));
    }
    Ok(ls.residuals)
}

/// Pearson correlation of two vectors.
pub(crate) fn correlation(a: &[f64], b: &[f64]) -> f64 {
    let n = a.len() as f64;
    let ma = a.iter().sum::<f64>() / n;
    let mb = b.iter().sum::<f64>() / n;
    let (mut sab, mut saa, mut sbb) = (0.0, 0.0, 0.0);
    for (x, y) in a.iter().zip(b) {
        let (dx, dy) = (x - ma, y - mb);
        sab += dx * dy;
        saa += dx * dx;
        sbb += dy * dy;
    }
    (sab / libm::sqrt(saa * sbb)).clamp(-1.0, 1.0)
}

/// Signed partial correlation: the correlation of the residuals of `left`
/// and of `right`, each regressed on `given`.
pub fn partial_corr(q: &PartialQuery<'_>) -> Result<f64> {
    q.validate()?;
    let rl = nondegenerate_residual(q.data, q.left, &q.given)?;
    let rr = nondegenerate_residual(q.data, q.right, &q.given)?;
    Ok(correlation(&rl, &rr))
}

/// Removes one variable `d` from a conditioning set:
/// `R_{y~z|d,x} = (R_{y~z|x} - R_{y~d|x} R_{d~z|x}) / (sqrt(1 - R²_{y~d|x}) sqrt(1 - R²_{d~z|x}))`.
pub fn recursive_partial_corr(r_yz_x: f64, r_yd_x: f64, r_dz_x: f64) -> Result<f64> {
    for r in [r_yz_x, r_yd_x, r_dz_x] {
        if !r.is_finite() || r.abs() > 1.0 {
            return Err(Error::InvalidCorrelation(r));
        }
    }
    if r_yd_x.abs() >= 1.0 || r_dz_x.abs() >= 1.0 {
        return Err(Error::DenominatorDegenerate);
    }
    let den = libm::sqrt(1.0 - r_yd_x * r_yd_x) * libm::sqrt(1.0 - r_dz_x * r_dz_x);
    Ok((r_yz_x - r_yd_x * r_dz_x) / den)
}

/// Cohen's f² = r2 / (1 - r2).
pub fn cohen_f2(r2: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&r2) {
        return Err(Error::InvalidInput(alloc::format!("R² must lie in [0, 1], got {r2}")));
    }
    if r2 == 1.0 {
        return Err(Error::Saturated);
    }
    Ok(r2 / (1.0 - r2))
}

/// Centered R² of `y ~ 1 + v` for a raw vector `v`.
fn r2_on_vector(y: &[f64], v: &[f64], name: &str) -> Result<f64> {
    let ls = lstsq(y, &[v], &[name], true)?;
    if ls.tss <= 0.0 {
        return Err(Error::InvalidInput("target has zero variance".into()));
    }
    Ok(1.0 - ls.rss / ls.tss)
}

/// Residual of `z` on `x` (with constant), rejecting `z` in the span of `x`.
pub fn residualized_nondegenerate(data: &Dataset, z: &str, x: &[&str]) -> Result<Vec<f64>> {
    nondegenerate_residual(data, z, x)
}

/// The remainder `η = R²(y ~ z⊥x) - R²(y ~ z)`, where `z⊥x` is the residual
/// of `z` on `x`. It measures how far the total-R² decomposition
/// `R²(y~x+z) = R²(y~x) + R²(y~z)` is from holding.
pub fn eta(data: &Dataset, y: &str, z: &str, x: &[&str]) -> Result<f64> {
    let z_perp = residualized_nondegenerate(data, z, x)?;
    let yv = data.column(y)?;
    let with_perp = r2_on_vector(yv, &z_perp, z)?;
    let with_z = raw_r2(data, y, &[z])?;
    Ok(with_perp - with_z)
}

/// The same remainder computed the other way: `R²(y~x+z) - R²(y~x) - R²(y~z)`.
pub fn eta_from_totals(data: &Dataset, y: &str, z: &str, x: &[&str]) -> Result<f64> {
    let mut xz: Vec<&str> = x.to_vec();
    xz.push(z);
    Ok(raw_r2(data, y, &xz)? - raw_r2(data, y, x)? - raw_r2(data, y, &[z])?)
}
