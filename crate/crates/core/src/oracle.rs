//! Seeded synthetic data with an observable confounder, and brute-force
//! recomputation of every sensitivity quantity by explicit regressions.
//!
//! Nothing here calls the closed forms in [`crate::sensitivity`] or
//! [`crate::benchmark`] except where noted: the oracle is what those
//! formulas are checked against. Random numbers come from ChaCha8 seeded
//! with a `u64`, which is stable across platforms.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::benchmark::SignCase;
use crate::dataset::{Dataset, ModelSpec};
use crate::error::{Error, Result};
use crate::ols::{fit_ols, lstsq, residualize};
use crate::partial::correlation;
use crate::sensitivity::{adjusted_t, relative_bias, HypotheticalConfounder};
use crate::student_t;

/// Attempts allowed to realize a requested sign regime.
pub const REGIME_RETRIES: usize = 1_000;

/// Population bias targets, as multiples of `-τ`, for the reducing regimes.
const REDUCE_SAME_TARGET: f64 = 0.5;
const REDUCE_OPPOSITE_TARGET: f64 = 1.5;

/// Parameters of the data-generating process
///
/// ```text
/// x_i ~ N(0, 1),  i = 1..k
/// z   = ρ x_1 + √(1 − ρ²) e          (z = e when k = 0)
/// d   = a z + Σ b_i x_i + σ u
/// y   = τ d + g z + Σ c_i x_i + σ v
/// ```
///
/// with `e, u, v ~ N(0, 1)` and `b_i, c_i ~ U(−1, 1)` drawn from the seed.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct DgpConfig {
    /// Rows.
    pub n: usize,
    /// Observed covariates `x1..xk`.
    pub k_covariates: usize,
    /// `a`: effect of the confounder on the treatment.
    pub confounder_treatment_strength: f64,
    /// `g`: effect of the confounder on the outcome. Its magnitude is
    /// replaced for the reducing sign regimes (see [`generate`]).
    pub confounder_outcome_strength: f64,
    /// `ρ`: correlation of the confounder with `x1`.
    pub covariate_confounder_correlation: f64,
    /// `τ`.
    pub treatment_effect: f64,
    /// `σ`.
    pub noise_scale: f64,
    /// Replace `z` by its residual on `1, x1..xk` before it enters `d` and `y`.
    pub orthogonalize_z: bool,
    /// Regime the sample must realize, if any.
    pub sign_regime: Option<SignCase>,
}

impl Default for DgpConfig {
    fn default() -> Self {
        DgpConfig {
            n: 200,
            k_covariates: 3,
            confounder_treatment_strength: 0.8,
            confounder_outcome_strength: 0.6,
            covariate_confounder_correlation: 0.3,
            treatment_effect: 1.0,
            noise_scale: 1.0,
            orthogonalize_z: false,
            sign_regime: None,
        }
    }
}

impl DgpConfig {
    /// Names of the covariate columns.
    pub fn covariate_names(&self) -> Vec<String> {
        (1..=self.k_covariates).map(|i| format!("x{i}")).collect()
    }

    /// The restricted model `y ~ d + x1..xk`.
    pub fn model_spec(&self) -> ModelSpec {
        ModelSpec::new("y", "d", self.covariate_names())
    }

    fn validate(&self) -> Result<()> {
        if self.n <= self.k_covariates + 3 {
            return Err(Error::InvalidConfig(format!(
                "n = {} must exceed k_covariates + 3 = {}",
                self.n,
                self.k_covariates + 3
            )));
        }
        if !(self.noise_scale > 0.0 && self.noise_scale.is_finite()) {
            return Err(Error::InvalidConfig("noise_scale must be positive".into()));
        }
        if !(self.covariate_confounder_correlation.abs() < 1.0) {
            return Err(Error::InvalidConfig("covariate_confounder_correlation must lie in (-1, 1)".into()));
        }
        let finite = [
            self.confounder_treatment_strength,
            self.confounder_outcome_strength,
            self.treatment_effect,
        ];
        if finite.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidConfig("coefficients must be finite".into()));
        }
        if self.sign_regime.is_some()
            && (self.confounder_treatment_strength == 0.0 || self.treatment_effect == 0.0)
        {
            return Err(Error::InvalidConfig(
                "a sign regime needs nonzero treatment effect and confounder-treatment strength".into(),
            ));
        }
        if self.sign_regime == Some(SignCase::Increase) && self.confounder_outcome_strength == 0.0 {
            return Err(Error::InvalidConfig("the increase regime needs a nonzero confounder-outcome strength".into()));
        }
        Ok(())
    }

    /// Confounder-outcome effect arranged so the population omitted-variable
    /// bias realizes the requested regime.
    fn outcome_strength(&self) -> f64 {
        let a = self.confounder_treatment_strength;
        let tau = self.treatment_effect;
        let rho = self.covariate_confounder_correlation;
        let var_z = if self.k_covariates > 0 { 1.0 - rho * rho } else { 1.0 };
        let var_d = a * a * var_z + self.noise_scale * self.noise_scale;
        // Population bias of the restricted estimate is g · a · var_z / var_d.
        let per_unit_g = a * var_z / var_d;
        match self.sign_regime {
            None => self.confounder_outcome_strength,
            Some(SignCase::Increase) => {
                self.confounder_outcome_strength.abs() * tau.signum() * per_unit_g.signum()
            }
            Some(SignCase::ReduceSameSign) => -REDUCE_SAME_TARGET * tau / per_unit_g,
            Some(SignCase::ReduceOppositeSign) => -REDUCE_OPPOSITE_TARGET * tau / per_unit_g,
        }
    }
}

fn normals(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.sample::<f64, _>(StandardNormal)).collect()
}

fn draw(cfg: &DgpConfig, g: f64, rng: &mut ChaCha8Rng) -> Result<Dataset> {
    let n = cfg.n;
    let xs: Vec<Vec<f64>> = (0..cfg.k_covariates).map(|_| normals(rng, n)).collect();
    let e = normals(rng, n);
    let rho = cfg.covariate_confounder_correlation;
    let mut z: Vec<f64> = match xs.first() {
        Some(x1) => x1
            .iter()
            .zip(&e)
            .map(|(x, e)| rho * x + libm::sqrt(1.0 - rho * rho) * e)
            .collect(),
        None => e,
    };
    if cfg.orthogonalize_z {
        let cols: Vec<&[f64]> = xs.iter().map(Vec::as_slice).collect();
        let names = cfg.covariate_names();
        let names: Vec<&str> = names.iter().map(String::as_str).collect();
        z = lstsq(&z, &cols, &names, true)?.residuals;
    }
    let b: Vec<f64> = (0..cfg.k_covariates).map(|_| rng.random_range(-1.0..1.0)).collect();
    let c: Vec<f64> = (0..cfg.k_covariates).map(|_| rng.random_range(-1.0..1.0)).collect();
    let u = normals(rng, n);
    let v = normals(rng, n);

    let a = cfg.confounder_treatment_strength;
    let sigma = cfg.noise_scale;
    let d: Vec<f64> = (0..n)
        .map(|i| a * z[i] + xs.iter().zip(&b).map(|(x, b)| b * x[i]).sum::<f64>() + sigma * u[i])
        .collect();
    let y: Vec<f64> = (0..n)
        .map(|i| {
            cfg.treatment_effect * d[i]
                + g * z[i]
                + xs.iter().zip(&c).map(|(x, c)| c * x[i]).sum::<f64>()
                + sigma * v[i]
        })
        .collect();

    let mut columns: Vec<(String, Vec<f64>)> = Vec::with_capacity(3 + cfg.k_covariates);
    columns.push(("y".into(), y));
    columns.push(("d".into(), d));
    columns.push(("z".into(), z));
    for (name, x) in cfg.covariate_names().into_iter().zip(xs) {
        columns.push((name, x));
    }
    Dataset::new(columns)
}

/// Draws a dataset with columns `y, d, z, x1..xk`, deterministic in `(cfg, seed)`.
///
/// With a sign regime, the confounder-outcome effect is set so that the
/// population bias points the right way: same sign as `τ` for `Increase`,
/// `−0.5τ` for `ReduceSameSign` and `−1.5τ` for `ReduceOppositeSign`. Samples
/// whose fitted restricted and full estimates fall in another regime are
/// redrawn from the same stream, up to [`REGIME_RETRIES`] times.
pub fn generate(cfg: &DgpConfig, seed: u64) -> Result<Dataset> {
    cfg.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = cfg.outcome_strength();
    let Some(regime) = cfg.sign_regime else {
        return draw(cfg, g, &mut rng);
    };
    let spec = cfg.model_spec();
    let mut full = spec.clone();
    full.covariates.push("z".into());
    for _ in 0..REGIME_RETRIES {
        let data = draw(cfg, g, &mut rng)?;
        let tau_res = fit_ols(&data, &spec)?.coefficient("d")?;
        let tau_full = fit_ols(&data, &full)?.coefficient("d")?;
        if SignCase::realized(tau_res, tau_full) == regime {
            return Ok(data);
        }
    }
    Err(Error::RegimeUnreachable(regime.as_str()))
}

/// Ground truth for one dataset, computed by explicit regressions.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct OracleQuantities {
    /// Treatment coefficient controlling for the confounder.
    pub tau_full: f64,
    /// Its standard error.
    pub se_full: f64,
    /// Treatment coefficient of the restricted model.
    pub tau_res: f64,
    /// Its standard error.
    pub se_res: f64,
    /// Its t statistic.
    pub t_res: f64,
    /// Residual df of the restricted model.
    pub df_res: usize,
    /// `τ̂_res − τ̂_full`.
    pub bias: f64,
    /// `|τ̂_res − τ̂_full| / |τ̂_res|`.
    pub relative_bias: f64,
    /// Signed `R_{D~Z|X}`.
    pub r_dz_x: f64,
    /// Signed `R_{Y~Z|X}`.
    pub r_yz_x: f64,
    /// Signed `R_{Y~D|X}`.
    pub r_yd_x: f64,
    /// Signed `R_{Y~Z|D,X}`.
    pub r_yz_dx: f64,
    /// `R²_{D~Z|X}`.
    pub r2_dz_x: f64,
    /// `R²_{Y~Z|X}`.
    pub r2_yz_x: f64,
    /// `R²_{Y~D|X}`.
    pub r2_yd_x: f64,
    /// `R²_{Y~Z|D,X}`.
    pub r2_yz_dx: f64,
    /// `R²(D ~ z⊥X) − R²(D ~ z)`.
    pub eta_d: f64,
    /// `R²(Y ~ z⊥X) − R²(Y ~ z)`.
    pub eta_y: f64,
    /// Regime realized by `τ̂_res` and `τ̂_full`.
    pub sign_case: SignCase,
}

fn residual_corr(data: &Dataset, a: &str, b: &str, given: &[&str]) -> Result<f64> {
    let ra = residualize(data, a, given, true)?;
    let rb = residualize(data, b, given, true)?;
    Ok(correlation(&ra, &rb))
}

fn r2_on(y: &[f64], x: &[f64]) -> Result<f64> {
    let ls = lstsq(y, &[x], &["v"], true)?;
    Ok(1.0 - ls.rss / ls.tss)
}

/// Every quantity the sensitivity formulas predict, computed directly.
/// `spec` is the restricted model and `z` names the confounder column.
pub fn oracle_all(data: &Dataset, spec: &ModelSpec, z: &str) -> Result<OracleQuantities> {
    data.column(z)?;
    if spec.covariates.iter().any(|c| c == z) {
        return Err(Error::InvalidSpec(format!("confounder `{z}` is already a covariate")));
    }
    let restricted = fit_ols(data, spec)?;
    let mut full_spec = spec.clone();
    full_spec.covariates.push(z.to_string());
    let full = fit_ols(data, &full_spec)?;

    let d = spec.treatment.as_str();
    let y = spec.outcome.as_str();
    let tau_res = restricted.coefficient(d)?;
    let se_res = restricted.standard_error(d)?;
    let tau_full = full.coefficient(d)?;
    let se_full = full.standard_error(d)?;

    let x: Vec<&str> = spec.covariates.iter().map(String::as_str).collect();
    let mut dx = Vec::with_capacity(x.len() + 1);
    dx.push(d);
    dx.extend_from_slice(&x);
    let r_dz_x = residual_corr(data, d, z, &x)?;
    let r_yz_x = residual_corr(data, y, z, &x)?;
    let r_yd_x = residual_corr(data, y, d, &x)?;
    let r_yz_dx = residual_corr(data, y, z, &dx)?;

    let z_perp = residualize(data, z, &x, true)?;
    let zv = data.column(z)?;
    let eta_d = r2_on(data.column(d)?, &z_perp)? - r2_on(data.column(d)?, zv)?;
    let eta_y = r2_on(data.column(y)?, &z_perp)? - r2_on(data.column(y)?, zv)?;

    let bias = tau_res - tau_full;
    Ok(OracleQuantities {
        tau_full,
        se_full,
        tau_res,
        se_res,
        t_res: tau_res / se_res,
        df_res: restricted.df,
        bias,
        relative_bias: bias.abs() / tau_res.abs(),
        r_dz_x,
        r_yz_x,
        r_yd_x,
        r_yz_dx,
        r2_dz_x: r_dz_x * r_dz_x,
        r2_yz_x: r_yz_x * r_yz_x,
        r2_yd_x: r_yd_x * r_yd_x,
        r2_yz_dx: r_yz_dx * r_yz_dx,
        eta_d,
        eta_y,
        sign_case: SignCase::realized(tau_res, tau_full),
    })
}

/// Bisection for a sign change of a monotone function on
/// `[lo, hi]` given `f(lo) < 0 < f(hi)` (or the reverse).
fn bisect(mut lo: f64, mut hi: f64, f: impl Fn(f64) -> Result<f64>) -> Result<f64> {
    let flo = f(lo)?;
    let fhi = f(hi)?;
    if flo == 0.0 {
        return Ok(lo);
    }
    if fhi == 0.0 {
        return Ok(hi);
    }
    if (flo < 0.0) == (fhi < 0.0) {
        return Err(Error::BracketFailure);
    }
    let rising = flo < 0.0;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if hi - lo <= 1e-14 || mid == lo || mid == hi {
            break;
        }
        let fm = f(mid)?;
        if fm == 0.0 {
            return Ok(mid);
        }
        if (fm < 0.0) == rising {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Largest `x < 1` representable with room for `√(1 − x)`.
const UPPER: f64 = 1.0 - 1e-15;

/// `RV_q` by bisection: the `x` at which a confounder with `R²_{D~Z|X} =
/// R²_{Y~Z|D,X} = x` produces relative bias `q`.
pub fn oracle_rv(t_res: f64, df: usize, q: f64) -> Result<f64> {
    if !(q > 0.0 && q <= 1.0) {
        return Err(Error::InvalidQ(q));
    }
    if df < 1 {
        return Err(Error::DegenerateDf { df, min: 1 });
    }
    if t_res == 0.0 {
        return Ok(0.0);
    }
    let r_yd_x = t_res / libm::sqrt(t_res * t_res + df as f64);
    bisect(0.0, UPPER, |x| {
        let r = libm::sqrt(x);
        Ok(relative_bias(r, r, r_yd_x)? - q)
    })
}

/// `RV_{q,α}` by bisection on the bias-adjusted t statistic for the null
/// `τ = (1 − q)·τ̂`, compared with the two-sided critical value on `df − 1`
/// degrees of freedom. Returns 0 when the unadjusted test already fails to
/// reject.
pub fn oracle_rv_alpha(t_res: f64, df: usize, q: f64, alpha: f64) -> Result<f64> {
    if !(q > 0.0 && q <= 1.0) {
        return Err(Error::InvalidQ(q));
    }
    if df < 2 {
        return Err(Error::DegenerateDf { df, min: 2 });
    }
    let t_crit = student_t::critical_value(alpha, (df - 1) as f64)?;
    let sign = if t_res < 0.0 { -1.0 } else { 1.0 };
    let excess = |x: f64| -> Result<f64> {
        let hc = HypotheticalConfounder::equal(x)?;
        Ok(sign * adjusted_t(t_res, 1.0, df, hc, true, (1.0 - q) * t_res)? - t_crit)
    };
    if excess(0.0)? <= 0.0 {
        return Ok(0.0);
    }
    bisect(0.0, UPPER, excess)
}
