//! Text, JSON and CSV renderings of analysis results.

use std::fmt::Write as _;

use ovb_core::analysis::{ContourCell, ModeReport, CONTOUR_HEADER};
use ovb_core::SensitivityReport;

use crate::SenseError;

/// `x` rounded to six significant digits, without exponent notation for
/// ordinary magnitudes.
pub fn sig6(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let magnitude = x.abs().log10().floor() as i32;
    if !(-5..=15).contains(&magnitude) {
        return format!("{x:.5e}");
    }
    let decimals = (5 - magnitude).max(0) as usize;
    let s = format!("{x:.decimals$}");
    // Rounding can carry into a new digit (9.999995 -> 10.00000).
    let reparsed: f64 = s.parse().unwrap_or(x);
    let carried = reparsed.abs().log10().floor() as i32;
    if carried != magnitude && decimals > 0 {
        let decimals = decimals - 1;
        return format!("{x:.decimals$}");
    }
    s
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn pct3(mode: Option<&ModeReport>, f: impl Fn(&ModeReport) -> f64) -> String {
    mode.map_or_else(|| "-".to_string(), |m| format!("{:.3}", f(m)))
}

/// Human-readable report: a summary row with percentages to three
/// decimals, followed by every value at six significant digits.
pub fn render_text(r: &SensitivityReport) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "Sensitivity analysis of `{}` on `{}`", r.treatment, r.outcome);
    let _ = writeln!(s, "q = {}, alpha = {}, sign case: {}", r.q, r.alpha, r.sign_case);
    let _ = writeln!(s);

    let header = [
        "", "Est.", "SE", "RV_q %", "RV_qa %", "T:R2yz.dx %", "T:R2dz.x %", "P:R2yz.dx %", "P:R2dz.x %", "R2yd.x %",
    ];
    let row = [
        r.treatment.clone(),
        format!("{:.3}", r.estimate),
        format!("{:.3}", r.se),
        format!("{:.3}", r.rv_q_pct),
        format!("{:.3}", r.rv_q_alpha_pct),
        pct3(r.total_mode.as_ref(), |m| m.r2_yz_dx_pct),
        pct3(r.total_mode.as_ref(), |m| m.r2_dz_x_pct),
        pct3(r.partial_mode.as_ref(), |m| m.r2_yz_dx_pct),
        pct3(r.partial_mode.as_ref(), |m| m.r2_dz_x_pct),
        format!("{:.3}", r.r2_yd_x_pct),
    ];
    let widths: Vec<usize> = header.iter().zip(&row).map(|(h, v)| h.len().max(v.len())).collect();
    for cells in [header.map(str::to_string).to_vec(), row.to_vec()] {
        let line: Vec<String> = cells
            .iter()
            .zip(&widths)
            .enumerate()
            .map(|(i, (c, w))| if i == 0 { format!("{c:<w$}") } else { format!("{c:>w$}") })
            .collect();
        let _ = writeln!(s, "{}", line.join("  ").trim_end());
    }
    let _ = writeln!(s);

    let kv = |s: &mut String, indent: &str, k: &str, v: String| {
        let _ = writeln!(s, "{indent}{k:<28}{v}");
    };
    kv(&mut s, "", "estimate", sig6(r.estimate));
    kv(&mut s, "", "std. error", sig6(r.se));
    kv(&mut s, "", "t statistic", sig6(r.t));
    kv(&mut s, "", "df", r.df.to_string());
    kv(&mut s, "", "RV_q (%)", sig6(r.rv_q_pct));
    kv(&mut s, "", "RV_q,alpha (%)", sig6(r.rv_q_alpha_pct));
    kv(&mut s, "", "R2(Y~D|X) (%)", sig6(r.r2_yd_x_pct));

    for m in r.modes() {
        let _ = writeln!(s);
        let _ = writeln!(
            s,
            "{} mode: benchmark {}, k_d = {}, k_y = {}",
            m.mode.as_str(),
            m.benchmark_covariates.join(", "),
            m.k_d,
            m.k_y
        );
        kv(&mut s, "  ", "R2(D~Z|X) (%)", sig6(m.r2_dz_x_pct));
        kv(&mut s, "  ", "R2(Y~Z|X) (%)", sig6(m.r2_yz_x_pct));
        kv(&mut s, "  ", "R2(Y~Z|D,X) (%)", sig6(m.r2_yz_dx_pct));
        kv(&mut s, "  ", "exact", yes_no(m.bounds.exact).into());
        kv(&mut s, "  ", "clamped", yes_no(m.bounds.clamped).into());
        let v = &m.verdict;
        kv(
            &mut s,
            "  ",
            "point estimate robust",
            format!("{} (margin {})", yes_no(v.point_estimate_robust), sig6(v.margin_point)),
        );
        kv(
            &mut s,
            "  ",
            "confidence interval robust",
            format!("{} (margin {})", yes_no(v.ci_robust), sig6(v.margin_ci)),
        );
        kv(
            &mut s,
            "  ",
            "extreme scenario safe",
            format!("{} (margin {})", yes_no(v.extreme_scenario_safe), sig6(v.margin_extreme)),
        );
    }

    if !r.warnings.is_empty() {
        let _ = writeln!(s);
        let _ = writeln!(s, "warnings:");
        for w in &r.warnings {
            let _ = writeln!(s, "  - {w}");
        }
    }
    s
}

/// Pretty-printed JSON of the full report.
pub fn render_json(r: &SensitivityReport) -> Result<String, SenseError> {
    Ok(serde_json::to_string_pretty(r)?)
}

/// Contour grid as CSV with header `r2_dz_x,r2_yz_dx,adjusted_estimate,adjusted_t`.
pub fn write_contour(cells: &[ContourCell], writer: impl std::io::Write) -> Result<(), SenseError> {
    let mut w = csv::Writer::from_writer(writer);
    let err = |e| SenseError::csv("<contour>", e);
    w.write_record(CONTOUR_HEADER).map_err(err)?;
    for c in cells {
        w.write_record([
            c.r2_dz_x.to_string(),
            c.r2_yz_dx.to_string(),
            c.adjusted_estimate.to_string(),
            c.adjusted_t.to_string(),
        ])
        .map_err(err)?;
    }
    w.flush().map_err(|e| SenseError::io("<contour>", e))?;
    Ok(())
}
