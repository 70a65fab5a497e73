//! Comparison rules turning benchmark bounds and robustness values into verdicts.

use crate::benchmark::BoundResult;

/// Outcome of the three comparison rules. Each margin is
/// `threshold − comparand`; the matching flag is true iff the margin is
/// strictly positive, so ties count as not robust.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct Verdict {
    /// `max(R²_{D~Z|X}, R²_{Y~Z|D,X}) < RV`.
    pub point_estimate_robust: bool,
    /// `max(R²_{D~Z|X}, R²_{Y~Z|D,X}) < RV_α`.
    pub ci_robust: bool,
    /// `R²_{D~Z|X} < R²_{Y~D|X}`: a confounder explaining all residual
    /// outcome variance would still not remove the effect.
    pub extreme_scenario_safe: bool,
    /// `RV − max(...)`.
    pub margin_point: f64,
    /// `RV_α − max(...)`.
    pub margin_ci: f64,
    /// `R²_{Y~D|X} − R²_{D~Z|X}`.
    pub margin_extreme: f64,
}

/// Applies the comparison rules.
pub fn verdict(bounds: &BoundResult, rv: f64, rv_alpha: f64, r2_yd_x: f64) -> Verdict {
    let strongest = bounds.r2_dz_x.max(bounds.r2_yz_dx);
    let margin_point = rv - strongest;
    let margin_ci = rv_alpha - strongest;
    let margin_extreme = r2_yd_x - bounds.r2_dz_x;
    Verdict {
        point_estimate_robust: margin_point > 0.0,
        ci_robust: margin_ci > 0.0,
        extreme_scenario_safe: margin_extreme > 0.0,
        margin_point,
        margin_ci,
        margin_extreme,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bounds(r2_dz_x: f64, r2_yz_dx: f64) -> BoundResult {
        BoundResult {
            r2_dz_x,
            r2_yz_x: 0.0,
            r2_yz_dx,
            exact: true,
            clamped: false,
        }
    }

    #[test]
    fn zero_bounds_are_robust() {
        let v = verdict(&bounds(0.0, 0.0), 0.1, 0.05, 0.02);
        assert!(v.point_estimate_robust && v.ci_robust && v.extreme_scenario_safe);
    }

    #[test]
    fn ties_are_not_robust() {
        let v = verdict(&bounds(0.02, 0.1), 0.1, 0.1, 0.02);
        assert!(!v.point_estimate_robust && !v.ci_robust && !v.extreme_scenario_safe);
        assert_eq!(v.margin_point, 0.0);
    }

    #[test]
    fn darfur_narrative() {
        // Partial-R² comparison from the Darfur example, in fractions.
        let partial = verdict(&bounds(0.00916, 0.12464), 0.13878, 0.07626, 0.02187);
        assert!(partial.point_estimate_robust);
        assert!(!partial.ci_robust);
        assert!(partial.extreme_scenario_safe);
        let total = verdict(&bounds(0.00268, 0.25907), 0.13878, 0.07626, 0.02187);
        assert!(!total.point_estimate_robust);
    }

    #[test]
    fn margins_match_flags() {
        for (d, y) in [(0.0, 0.3), (0.2, 0.01), (0.05, 0.05)] {
            let v = verdict(&bounds(d, y), 0.1, 0.04, 0.06);
            assert_eq!(v.point_estimate_robust, v.margin_point > 0.0);
            assert_eq!(v.ci_robust, v.margin_ci > 0.0);
            assert_eq!(v.extreme_scenario_safe, v.margin_extreme > 0.0);
        }
    }
}
