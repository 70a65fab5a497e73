//! The three-step procedure: robustness values, benchmark bounds, verdicts.
//! Also the bias contour grid.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::benchmark::{bound, BenchmarkMode, BenchmarkSpec, BoundResult, SignCase};
use crate::dataset::{Dataset, ModelSpec};
use crate::decision::{verdict, Verdict};
use crate::error::{Error, Result};
use crate::ols::{coef_summary, fit_ols, CoefSummary};
use crate::sensitivity::{
    adjusted_estimate, r2_yd_x_from_t, robustness_value, robustness_value_alpha, HypotheticalConfounder,
    RobustnessQuery,
};

/// Settings shared by every mode of one analysis.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct AnalysisOptions {
    /// Robustness value target.
    pub query: RobustnessQuery,
    /// Assumed relation between the restricted and full estimates.
    pub sign_case: SignCase,
    /// Fail instead of warning when `R²_{Y~Z|D,X}` is only a lower bound.
    pub strict: bool,
}

/// Bounds and verdict for one benchmarking mode.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct ModeReport {
    /// Which bound was used.
    pub mode: BenchmarkMode,
    /// Benchmark covariates.
    pub benchmark_covariates: Vec<String>,
    /// Treatment multiplier.
    pub k_d: f64,
    /// Outcome multiplier.
    pub k_y: f64,
    /// `100 · R²_{D~Z|X}`.
    pub r2_dz_x_pct: f64,
    /// `100 · R²_{Y~Z|X}`.
    pub r2_yz_x_pct: f64,
    /// `100 · R²_{Y~Z|D,X}`.
    pub r2_yz_dx_pct: f64,
    /// Underlying fractions and flags.
    pub bounds: BoundResult,
    /// Comparison with the robustness values.
    pub verdict: Verdict,
}

/// One row of a sensitivity table.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct SensitivityReport {
    /// Outcome column.
    pub outcome: String,
    /// Treatment column.
    pub treatment: String,
    /// Treatment coefficient of the restricted model.
    pub estimate: f64,
    /// Its standard error.
    pub se: f64,
    /// Its t statistic.
    pub t: f64,
    /// Residual df.
    pub df: usize,
    /// `100 · RV_q`.
    pub rv_q_pct: f64,
    /// `100 · RV_{q,α}`.
    pub rv_q_alpha_pct: f64,
    /// `100 · R²_{Y~D|X}`.
    pub r2_yd_x_pct: f64,
    /// `q`.
    pub q: f64,
    /// `α`.
    pub alpha: f64,
    /// Assumed sign case.
    pub sign_case: SignCase,
    /// Total-R² benchmarking, if requested.
    pub total_mode: Option<ModeReport>,
    /// Partial-R² benchmarking, if requested.
    pub partial_mode: Option<ModeReport>,
    /// Conditions the reader should know about.
    pub warnings: Vec<String>,
}

impl SensitivityReport {
    /// Mode reports in a fixed order, total first.
    pub fn modes(&self) -> impl Iterator<Item = &ModeReport> {
        self.total_mode.iter().chain(self.partial_mode.iter())
    }
}

#[allow(clippy::too_many_arguments)]
fn mode_report(
    data: &Dataset,
    spec: &ModelSpec,
    bm: &BenchmarkSpec,
    expected: BenchmarkMode,
    r2_yd_x: f64,
    rv: f64,
    rv_alpha: f64,
    case: SignCase,
) -> Result<ModeReport> {
    if bm.mode != expected {
        return Err(Error::InvalidBenchmark(format!(
            "expected a {} benchmark, got {}",
            expected.as_str(),
            bm.mode.as_str()
        )));
    }
    let bounds = bound(data, spec, bm, r2_yd_x, case)?;
    Ok(ModeReport {
        mode: bm.mode,
        benchmark_covariates: bm.benchmark_covariates.clone(),
        k_d: bm.k_d,
        k_y: bm.k_y,
        r2_dz_x_pct: 100.0 * bounds.r2_dz_x,
        r2_yz_x_pct: 100.0 * bounds.r2_yz_x,
        r2_yz_dx_pct: 100.0 * bounds.r2_yz_dx,
        bounds,
        verdict: verdict(&bounds, rv, rv_alpha, r2_yd_x),
    })
}

/// Runs robustness values, benchmark bounds and verdicts for each requested
/// mode. At least one benchmark must be given.
pub fn run_analysis(
    data: &Dataset,
    spec: &ModelSpec,
    bm_total: Option<&BenchmarkSpec>,
    bm_partial: Option<&BenchmarkSpec>,
    opts: &AnalysisOptions,
) -> Result<SensitivityReport> {
    if bm_total.is_none() && bm_partial.is_none() {
        return Err(Error::InvalidBenchmark("no benchmark requested".into()));
    }
    let mut warnings = Vec::new();
    if opts.sign_case == SignCase::ReduceSameSign {
        if opts.strict {
            return Err(Error::UnresolvableSignCase(opts.sign_case.as_str()));
        }
        warnings.push(
            "sign case reduce-same-sign: R²(Y~Z|D,X) is a lower bound, not an exact value".to_string(),
        );
    }

    let fit = fit_ols(data, spec)?;
    let summary = coef_summary(&fit, &spec.treatment)?;
    let q = opts.query;
    let rv = robustness_value(summary.t, summary.df, q.q)?;
    let rv_alpha = robustness_value_alpha(summary.t, summary.df, q.q, q.alpha)?;
    let r2_yd_x = r2_yd_x_from_t(summary.t, summary.df);

    let run = |bm: Option<&BenchmarkSpec>, mode| {
        bm.map(|bm| mode_report(data, spec, bm, mode, r2_yd_x, rv, rv_alpha, opts.sign_case))
            .transpose()
    };
    let total_mode = run(bm_total, BenchmarkMode::Total)?;
    let partial_mode = run(bm_partial, BenchmarkMode::Partial)?;
    for m in total_mode.iter().chain(partial_mode.iter()) {
        if m.bounds.clamped {
            warnings.push(format!(
                "{} mode: a bound was clamped to [0, 1]",
                m.mode.as_str()
            ));
        }
    }

    Ok(SensitivityReport {
        outcome: spec.outcome.clone(),
        treatment: spec.treatment.clone(),
        estimate: summary.estimate,
        se: summary.se,
        t: summary.t,
        df: summary.df,
        rv_q_pct: 100.0 * rv,
        rv_q_alpha_pct: 100.0 * rv_alpha,
        r2_yd_x_pct: 100.0 * r2_yd_x,
        q: q.q,
        alpha: q.alpha,
        sign_case: opts.sign_case,
        total_mode,
        partial_mode,
        warnings,
    })
}

/// Extent and resolution of a contour grid.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct GridSpec {
    /// Points along `R²_{D~Z|X}`, at least 2.
    pub steps_x: usize,
    /// Points along `R²_{Y~Z|D,X}`, at least 2.
    pub steps_y: usize,
    /// Largest `R²_{D~Z|X}`, in `(0, 1)`.
    pub max_x: f64,
    /// Largest `R²_{Y~Z|D,X}`, in `(0, 1]`.
    pub max_y: f64,
}

impl GridSpec {
    fn validate(&self) -> Result<()> {
        if self.steps_x < 2 || self.steps_y < 2 {
            return Err(Error::InvalidGrid(format!(
                "need at least 2 steps per axis, got {}x{}",
                self.steps_x, self.steps_y
            )));
        }
        if !(self.max_x > 0.0 && self.max_x < 1.0) {
            return Err(Error::InvalidGrid(format!("max R²(D~Z|X) must lie in (0, 1), got {}", self.max_x)));
        }
        if !(self.max_y > 0.0 && self.max_y <= 1.0) {
            return Err(Error::InvalidGrid(format!("max R²(Y~Z|D,X) must lie in (0, 1], got {}", self.max_y)));
        }
        Ok(())
    }
}

/// One grid point.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct ContourCell {
    /// `R²_{D~Z|X}`.
    pub r2_dz_x: f64,
    /// `R²_{Y~Z|D,X}`.
    pub r2_yz_dx: f64,
    /// Bias-adjusted estimate.
    pub adjusted_estimate: f64,
    /// Bias-adjusted estimate over `se · √((1 − R²_{Y~Z|D,X}) / (1 − R²_{D~Z|X}))`.
    pub adjusted_t: f64,
}

/// Header of the contour CSV.
pub const CONTOUR_HEADER: [&str; 4] = ["r2_dz_x", "r2_yz_dx", "adjusted_estimate", "adjusted_t"];

fn axis(steps: usize, max: f64, i: usize) -> f64 {
    if i + 1 == steps {
        max
    } else {
        max * i as f64 / (steps - 1) as f64
    }
}

/// Bias-adjusted estimate and t statistic over `[0, max_x] × [0, max_y]`,
/// row-major with `R²_{D~Z|X}` in the outer loop.
///
/// The t statistic omits the `√(df / (df − 1))` correction so that the
/// origin reproduces the unadjusted `(estimate, t)` exactly.
pub fn contour_grid(fit: &CoefSummary, grid: &GridSpec, rq: &RobustnessQuery) -> Result<Vec<ContourCell>> {
    grid.validate()?;
    let mut cells = Vec::with_capacity(grid.steps_x * grid.steps_y);
    for i in 0..grid.steps_x {
        let r2_dz_x = axis(grid.steps_x, grid.max_x, i);
        for j in 0..grid.steps_y {
            let r2_yz_dx = axis(grid.steps_y, grid.max_y, j);
            let hc = HypotheticalConfounder::new(r2_dz_x, r2_yz_dx)?;
            let est = adjusted_estimate(fit.estimate, fit.se, fit.df, hc, rq.reduce)?;
            let se = fit.se * libm::sqrt((1.0 - r2_yz_dx) / (1.0 - r2_dz_x));
            let adjusted_t = if se > 0.0 {
                est / se
            } else if est == 0.0 {
                0.0
            } else {
                f64::INFINITY.copysign(est)
            };
            cells.push(ContourCell {
                r2_dz_x,
                r2_yz_dx,
                adjusted_estimate: est,
                adjusted_t,
            });
        }
    }
    Ok(cells)
}
