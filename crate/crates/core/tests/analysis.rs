mod common;

use common::*;
use ovb_core::oracle::{generate, oracle_all, oracle_rv, DgpConfig};
use ovb_core::{
    coef_summary, contour_grid, fit_ols, run_analysis, verdict, AnalysisOptions, BenchmarkMode, BenchmarkSpec,
    BoundResult, Error, GridSpec, RobustnessQuery, SignCase,
};
use proptest::prelude::*;

#[test]
fn zero_multipliers_are_robust() {
    let cfg = DgpConfig::default();
    let data = generate(&cfg, 1).unwrap();
    let spec = cfg.model_spec();
    let total = BenchmarkSpec::new(["x1"], 0.0, 0.0, BenchmarkMode::Total);
    let partial = BenchmarkSpec::new(["x1"], 0.0, 0.0, BenchmarkMode::Partial);
    let r = run_analysis(&data, &spec, Some(&total), Some(&partial), &AnalysisOptions::default()).unwrap();
    for m in r.modes() {
        assert_eq!((m.r2_dz_x_pct, m.r2_yz_x_pct, m.r2_yz_dx_pct), (0.0, 0.0, 0.0));
        assert!(m.verdict.point_estimate_robust && m.verdict.ci_robust && m.verdict.extreme_scenario_safe);
    }
}

#[test]
fn needs_a_benchmark() {
    let cfg = DgpConfig::default();
    let data = generate(&cfg, 1).unwrap();
    let err = run_analysis(&data, &cfg.model_spec(), None, None, &AnalysisOptions::default()).unwrap_err();
    assert!(matches!(err, Error::InvalidBenchmark(_)));
}

#[test]
fn same_sign_case_warns_or_fails() {
    let cfg = DgpConfig::default();
    let data = generate(&cfg, 2).unwrap();
    let bm = BenchmarkSpec::new(["x1"], 1.0, 1.0, BenchmarkMode::Partial);
    let mut opts = AnalysisOptions { sign_case: SignCase::ReduceSameSign, ..AnalysisOptions::default() };
    let r = run_analysis(&data, &cfg.model_spec(), None, Some(&bm), &opts).unwrap();
    assert!(!r.partial_mode.as_ref().unwrap().bounds.exact);
    assert!(!r.warnings.is_empty());
    opts.strict = true;
    let err = run_analysis(&data, &cfg.model_spec(), None, Some(&bm), &opts).unwrap_err();
    assert!(matches!(err, Error::UnresolvableSignCase(_)));
}

#[test]
fn report_matches_oracle() {
    for regime in [SignCase::Increase, SignCase::ReduceOppositeSign] {
        let cfg = DgpConfig { sign_regime: Some(regime), ..DgpConfig::default() };
        let data = generate(&cfg, 17).unwrap();
        let spec = cfg.model_spec();
        let o = oracle_all(&data, &spec, "z").unwrap();
        let bm = BenchmarkSpec::new(["x2"], 1.0, 1.0, BenchmarkMode::Partial);
        let opts = AnalysisOptions { sign_case: regime, ..AnalysisOptions::default() };
        let r = run_analysis(&data, &spec, None, Some(&bm), &opts).unwrap();
        assert!(close(r.estimate, o.tau_res, 1e-8));
        assert!(close(r.se, o.se_res, 1e-8));
        assert_eq!(r.df, o.df_res);
        assert!(close(r.r2_yd_x_pct / 100.0, o.r2_yd_x, 1e-8));
        assert!(close(r.rv_q_pct / 100.0, oracle_rv(o.t_res, o.df_res, 1.0).unwrap(), 1e-8));
    }
}

#[test]
fn contour_corners() {
    let cfg = DgpConfig::default();
    let data = generate(&cfg, 3).unwrap();
    let fit = fit_ols(&data, &cfg.model_spec()).unwrap();
    let s = coef_summary(&fit, "d").unwrap();
    let rv = ovb_core::sensitivity::robustness_value(s.t, s.df, 1.0).unwrap();
    let grid = GridSpec { steps_x: 2, steps_y: 2, max_x: rv, max_y: rv };
    let cells = contour_grid(&s, &grid, &RobustnessQuery::default()).unwrap();
    assert_eq!(cells.len(), 4);
    assert!(close(cells[0].adjusted_estimate, s.estimate, 1e-12));
    assert!(close(cells[0].adjusted_t, s.t, 1e-12));
    let last = cells[3];
    assert_eq!((last.r2_dz_x, last.r2_yz_dx), (rv, rv));
    assert!(close(last.adjusted_estimate, 0.0, 1e-8));
}

fn bounds(r2_dz_x: f64, r2_yz_dx: f64) -> BoundResult {
    BoundResult { r2_dz_x, r2_yz_x: 0.0, r2_yz_dx, exact: true, clamped: false }
}

proptest! {
    #[test]
    fn verdict_margins_and_monotonicity(
        a in 0.0f64..1.0, b in 0.0f64..1.0, da in 0.0f64..0.5, db in 0.0f64..0.5,
        rv in 0.0f64..1.0, rva in 0.0f64..1.0, r2yd in 0.0f64..1.0,
    ) {
        let v = verdict(&bounds(a, b), rv, rva, r2yd);
        prop_assert_eq!(v.point_estimate_robust, v.margin_point > 0.0);
        prop_assert_eq!(v.ci_robust, v.margin_ci > 0.0);
        prop_assert_eq!(v.extreme_scenario_safe, v.margin_extreme > 0.0);
        let w = verdict(&bounds((a + da).min(1.0), (b + db).min(1.0)), rv, rva, r2yd);
        prop_assert!(!w.point_estimate_robust || v.point_estimate_robust);
        prop_assert!(!w.ci_robust || v.ci_robust);
        prop_assert!(!w.extreme_scenario_safe || v.extreme_scenario_safe);
    }
}
