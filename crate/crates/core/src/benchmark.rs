//! Formal covariate benchmarking.
//!
//! The user states how strong the confounder is relative to a set of observed
//! benchmark covariates (`k_d` for the treatment, `k_y` for the outcome).
//! Bounds are derived for the confounder's part orthogonal to the observed
//! covariates, which makes them exact under that convention:
//!
//! - total mode: `R²_{D~Z|X} = k_d · R²_{D~X_j} / (1 − R²_{D~X})`, one covariate only;
//! - partial mode: `R²_{D~Z|X} = k_d · f²(R²_{D~X_B|X_{−B}})` for a benchmark block `B`.
//!
//! Outcome bounds follow the same pattern with `Y` and `k_y`. The outcome
//! strength conditional on the treatment is then recovered by
//! [`resolve_r2yz_dx`], whose exactness depends on the assumed [`SignCase`].

use alloc::string::String;
use alloc::vec::Vec;

use crate::dataset::{Dataset, ModelSpec};
use crate::error::{Error, Result};
use crate::partial::{cohen_f2, partial_r2_group, total_r2};

/// How the confounder moves the restricted estimate relative to the
/// estimate that would control for it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum SignCase {
    /// `|τ̂_res| > |τ̂|`: the confounder inflates the estimate.
    #[default]
    Increase,
    /// `|τ̂_res| < |τ̂|` and the two estimates have opposite signs.
    ReduceOppositeSign,
    /// `|τ̂_res| < |τ̂|` and the two estimates have the same sign.
    ReduceSameSign,
}

impl SignCase {
    /// All cases.
    pub const ALL: [SignCase; 3] = [SignCase::Increase, SignCase::ReduceOppositeSign, SignCase::ReduceSameSign];

    /// Stable identifier.
    pub fn as_str(self) -> &'static str {
        match self {
            SignCase::Increase => "increase",
            SignCase::ReduceOppositeSign => "reduce_opposite_sign",
            SignCase::ReduceSameSign => "reduce_same_sign",
        }
    }

    /// The case realized by a restricted estimate `tau_res` and the estimate
    /// `tau_full` that also controls for the confounder. Ties in magnitude
    /// count as `Increase`.
    pub fn realized(tau_res: f64, tau_full: f64) -> SignCase {
        if tau_res.abs() >= tau_full.abs() {
            SignCase::Increase
        } else if (tau_res < 0.0) != (tau_full < 0.0) {
            SignCase::ReduceOppositeSign
        } else {
            SignCase::ReduceSameSign
        }
    }
}

impl core::fmt::Display for SignCase {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Whether `R²_{Y~Z|D,X}` has an exact expression under `case`.
pub fn classify_sign_case(case: SignCase) -> bool {
    !matches!(case, SignCase::ReduceSameSign)
}

/// Which R² ratio the `k` multipliers refer to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum BenchmarkMode {
    /// Ratio of total R².
    Total,
    /// Ratio of partial R² given the remaining covariates.
    Partial,
}

impl BenchmarkMode {
    /// Stable identifier.
    pub fn as_str(self) -> &'static str {
        match self {
            BenchmarkMode::Total => "total",
            BenchmarkMode::Partial => "partial",
        }
    }
}

/// A benchmarking judgment.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct BenchmarkSpec {
    /// Observed covariates the confounder is compared with.
    pub benchmark_covariates: Vec<String>,
    /// Relative strength with the treatment.
    pub k_d: f64,
    /// Relative strength with the outcome.
    pub k_y: f64,
    /// Total or partial R² comparison.
    pub mode: BenchmarkMode,
}

impl BenchmarkSpec {
    /// Creates a spec.
    pub fn new<S: Into<String>>(covariates: impl IntoIterator<Item = S>, k_d: f64, k_y: f64, mode: BenchmarkMode) -> Self {
        BenchmarkSpec {
            benchmark_covariates: covariates.into_iter().map(Into::into).collect(),
            k_d,
            k_y,
            mode,
        }
    }

    fn validate(&self, spec: &ModelSpec) -> Result<()> {
        if self.benchmark_covariates.is_empty() {
            return Err(Error::InvalidBenchmark("no benchmark covariates".into()));
        }
        for (i, c) in self.benchmark_covariates.iter().enumerate() {
            if !spec.covariates.contains(c) {
                return Err(Error::InvalidBenchmark(alloc::format!("`{c}` is not a model covariate")));
            }
            if self.benchmark_covariates[..i].contains(c) {
                return Err(Error::InvalidBenchmark(alloc::format!("`{c}` listed twice")));
            }
        }
        for k in [self.k_d, self.k_y] {
            if !(k >= 0.0 && k.is_finite()) {
                return Err(Error::InvalidBenchmark(alloc::format!("k must be finite and non-negative, got {k}")));
            }
        }
        Ok(())
    }

    /// Model covariates that are not benchmarks.
    fn rest<'a>(&self, spec: &'a ModelSpec) -> Vec<&'a str> {
        spec.covariates
            .iter()
            .filter(|c| !self.benchmark_covariates.contains(c))
            .map(String::as_str)
            .collect()
    }

    fn bench(&self) -> Vec<&str> {
        self.benchmark_covariates.iter().map(String::as_str).collect()
    }
}

/// First-step bounds: the confounder's partial R² with treatment and with
/// outcome, each given the observed covariates.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct ConfounderBounds {
    /// `R²_{D~Z|X}`.
    pub r2_dz_x: f64,
    /// `R²_{Y~Z|X}`.
    pub r2_yz_x: f64,
    /// A value was capped at 1.
    pub clamped: bool,
}

fn cap(v: f64) -> (f64, bool) {
    if v > 1.0 {
        (1.0, true)
    } else {
        (v, false)
    }
}

impl ConfounderBounds {
    fn capped(r2_dz_x: f64, r2_yz_x: f64) -> Self {
        let (d, cd) = cap(r2_dz_x);
        let (y, cy) = cap(r2_yz_x);
        ConfounderBounds {
            r2_dz_x: d,
            r2_yz_x: y,
            clamped: cd || cy,
        }
    }
}

fn check_mode(bm: &BenchmarkSpec, mode: BenchmarkMode) -> Result<()> {
    if bm.mode != mode {
        return Err(Error::InvalidBenchmark(alloc::format!(
            "expected a {} benchmark, got {}",
            mode.as_str(),
            bm.mode.as_str()
        )));
    }
    Ok(())
}

/// Total-R² benchmarking against a single covariate.
pub fn bound_total(data: &Dataset, spec: &ModelSpec, bm: &BenchmarkSpec) -> Result<ConfounderBounds> {
    check_mode(bm, BenchmarkMode::Total)?;
    bm.validate(spec)?;
    spec.validate(data)?;
    if bm.benchmark_covariates.len() != 1 {
        return Err(Error::MultipleBenchmarkCovariatesUnsupported(bm.benchmark_covariates.len()));
    }
    let xj = bm.bench();
    let x: Vec<&str> = spec.covariates.iter().map(String::as_str).collect();
    let mut out = [0.0; 2];
    for (slot, (var, k)) in out.iter_mut().zip([(&spec.treatment, bm.k_d), (&spec.outcome, bm.k_y)]) {
        let r2_j = total_r2(data, var, &xj)?;
        if r2_j <= 0.0 {
            return Err(Error::ZeroBenchmarkAssociation(var.clone()));
        }
        let r2_x = total_r2(data, var, &x)?;
        if r2_x >= 1.0 {
            return Err(Error::SaturatedModel(var.clone()));
        }
        *slot = k * r2_j / (1.0 - r2_x);
    }
    Ok(ConfounderBounds::capped(out[0], out[1]))
}

fn bound_partial_block(data: &Dataset, spec: &ModelSpec, bm: &BenchmarkSpec) -> Result<ConfounderBounds> {
    check_mode(bm, BenchmarkMode::Partial)?;
    bm.validate(spec)?;
    spec.validate(data)?;
    let bench = bm.bench();
    let rest = bm.rest(spec);
    let mut out = [0.0; 2];
    for (slot, (var, k)) in out.iter_mut().zip([(&spec.treatment, bm.k_d), (&spec.outcome, bm.k_y)]) {
        let r2 = partial_r2_group(data, var, &bench, &rest)?;
        if r2 <= 0.0 {
            return Err(Error::ZeroBenchmarkAssociation(var.clone()));
        }
        if r2 >= 1.0 {
            return Err(Error::SaturatedBenchmark(var.clone()));
        }
        *slot = k * cohen_f2(r2)?;
    }
    Ok(ConfounderBounds::capped(out[0], out[1]))
}

/// Partial-R² benchmarking against exactly one covariate.
pub fn bound_partial_single(data: &Dataset, spec: &ModelSpec, bm: &BenchmarkSpec) -> Result<ConfounderBounds> {
    if bm.benchmark_covariates.len() != 1 {
        return Err(Error::InvalidBenchmark(alloc::format!(
            "single-covariate benchmarking needs one covariate, got {}",
            bm.benchmark_covariates.len()
        )));
    }
    bound_partial_block(data, spec, bm)
}

/// Partial-R² benchmarking against a group of covariates taken as one block.
/// A group of one is the single-covariate case.
pub fn bound_partial_multiple(data: &Dataset, spec: &ModelSpec, bm: &BenchmarkSpec) -> Result<ConfounderBounds> {
    bound_partial_block(data, spec, bm)
}

/// `R²_{Y~Z|D,X}` resolved from first-step bounds.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct Resolved {
    /// Resolved value, in `[0, 1]`.
    pub r2_yz_dx: f64,
    /// False when the value is only a lower bound.
    pub exact: bool,
    /// The numerator was negative and set to zero, or the result was capped at 1.
    pub clamped: bool,
}

/// Recovers `R²_{Y~Z|D,X}` from `R²_{Y~Z|X}`, `R²_{D~Z|X}` and `R²_{Y~D|X}`:
///
/// `max(0, √R²_{Y~Z|X} − √(R²_{Y~D|X} R²_{D~Z|X}))² / ((1 − R²_{Y~D|X})(1 − R²_{D~Z|X}))`, capped at 1.
///
/// The expression is exact unless the confounder reduces the estimate
/// without flipping its sign; then it is a lower bound.
pub fn resolve_r2yz_dx(r2_yz_x: f64, r2_dz_x: f64, r2_yd_x: f64, case: SignCase) -> Result<Resolved> {
    if !(0.0..=1.0).contains(&r2_yz_x) {
        return Err(Error::InvalidInput(alloc::format!("R²(Y~Z|X) must lie in [0, 1], got {r2_yz_x}")));
    }
    for (name, v) in [("R²(D~Z|X)", r2_dz_x), ("R²(Y~D|X)", r2_yd_x)] {
        if !(0.0..1.0).contains(&v) {
            return Err(Error::InvalidInput(alloc::format!("{name} must lie in [0, 1), got {v}")));
        }
    }
    let raw = libm::sqrt(r2_yz_x) - libm::sqrt(r2_yd_x * r2_dz_x);
    let negative = raw < 0.0;
    let num = raw.max(0.0);
    let value = num * num / ((1.0 - r2_yd_x) * (1.0 - r2_dz_x));
    let (r2_yz_dx, capped) = cap(value);
    Ok(Resolved {
        r2_yz_dx,
        exact: classify_sign_case(case),
        clamped: negative || capped,
    })
}

/// Lower bound on `R²_{D~Z|X}` when the confounder is correlated with the
/// benchmark covariate: `α · f2_bench`, `α = (√k − |r|)² / (1 − r²)`, where
/// `r` is a hypothesized `R_{Z~X_j|X_{−j}}`. Only a lower bound exists in
/// that setting, so this is diagnostic.
pub fn lower_bound_diagnostic(k: f64, r_zxj_hypo: f64, f2_bench: f64) -> Result<f64> {
    if !r_zxj_hypo.is_finite() || r_zxj_hypo.abs() >= 1.0 {
        return Err(Error::InvalidCorrelation(r_zxj_hypo));
    }
    if !(k >= 0.0) || !(f2_bench >= 0.0) {
        return Err(Error::InvalidInput("k and f² must be non-negative".into()));
    }
    let gap = libm::sqrt(k) - r_zxj_hypo.abs();
    Ok(gap * gap / (1.0 - r_zxj_hypo * r_zxj_hypo) * f2_bench)
}

/// `sign(a − bc) == sign(bc)`: the condition under which
/// `|a − bc| = |a| − |bc|`, so that the resolved partial R² is exact.
pub fn difference_keeps_sign(a: f64, b: f64, c: f64) -> bool {
    let bc = b * c;
    signum0(a - bc) == signum0(bc)
}

fn signum0(v: f64) -> i8 {
    if v > 0.0 {
        1
    } else if v < 0.0 {
        -1
    } else {
        0
    }
}

/// Full benchmarking result for one mode.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct BoundResult {
    /// `R²_{D~Z|X}`.
    pub r2_dz_x: f64,
    /// `R²_{Y~Z|X}`.
    pub r2_yz_x: f64,
    /// `R²_{Y~Z|D,X}`.
    pub r2_yz_dx: f64,
    /// False when `r2_yz_dx` is only a lower bound.
    pub exact: bool,
    /// Some value was capped at 1 or the resolve numerator was clamped at 0.
    pub clamped: bool,
}

/// Runs the benchmark in `bm.mode` and resolves `R²_{Y~Z|D,X}`.
///
/// If the treatment bound saturates at 1 the outcome strength cannot be
/// resolved; it is then reported as 1 with `clamped` set.
pub fn bound(data: &Dataset, spec: &ModelSpec, bm: &BenchmarkSpec, r2_yd_x: f64, case: SignCase) -> Result<BoundResult> {
    let first = match bm.mode {
        BenchmarkMode::Total => bound_total(data, spec, bm)?,
        BenchmarkMode::Partial => bound_partial_multiple(data, spec, bm)?,
    };
    if first.r2_dz_x >= 1.0 {
        return Ok(BoundResult {
            r2_dz_x: first.r2_dz_x,
            r2_yz_x: first.r2_yz_x,
            r2_yz_dx: 1.0,
            exact: classify_sign_case(case),
            clamped: true,
        });
    }
    let resolved = resolve_r2yz_dx(first.r2_yz_x, first.r2_dz_x, r2_yd_x, case)?;
    Ok(BoundResult {
        r2_dz_x: first.r2_dz_x,
        r2_yz_x: first.r2_yz_x,
        r2_yz_dx: resolved.r2_yz_dx,
        exact: resolved.exact,
        clamped: first.clamped || resolved.clamped,
    })
}
