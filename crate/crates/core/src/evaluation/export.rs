//! CSV, SVG and plain-text renderings of evaluation results.

use std::fmt::Write;

use super::{CalibrationReport, KappaResult, RocCurve};

/// `threshold,fpr,tpr` rows; the origin's threshold is written as `inf`.
pub fn roc_csv(curve: &RocCurve) -> String {
    let mut out = String::from("threshold,fpr,tpr\n");
    for p in &curve.points {
        match p.threshold {
            Some(t) => writeln!(out, "{t},{},{}", p.fpr, p.tpr),
            None => writeln!(out, "inf,{},{}", p.fpr, p.tpr),
        }
        .expect("writing to a String");
    }
    out
}

const COLORS: [&str; 4] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd"];

/// Sensitivity against 1 − specificity, one polyline per curve, with the
/// chance diagonal.
pub fn roc_svg(curves: &[(&str, &RocCurve)]) -> String {
    const SIZE: f64 = 400.0;
    const MARGIN: f64 = 60.0;
    let x = |v: f64| MARGIN + v * SIZE;
    let y = |v: f64| MARGIN + (1.0 - v) * SIZE;
    let total = SIZE + 2.0 * MARGIN;

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{total}" height="{total}" viewBox="0 0 {total} {total}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(s, r#"<rect width="{total}" height="{total}" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<rect x="{MARGIN}" y="{MARGIN}" width="{SIZE}" height="{SIZE}" fill="none" stroke="black"/>"#
    );
    for tick in 0..=4 {
        let v = f64::from(tick) * 0.25;
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{}" text-anchor="middle">{v:.2}</text>"#,
            x(v),
            y(0.0) + 18.0
        );
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{}" text-anchor="end">{v:.2}</text>"#,
            x(0.0) - 6.0,
            y(v) + 4.0
        );
    }
    let _ = writeln!(
        s,
        r#"<text x="{}" y="{}" text-anchor="middle">1 - Specificity</text>"#,
        x(0.5),
        y(0.0) + 40.0
    );
    let _ = writeln!(
        s,
        r#"<text transform="translate({},{}) rotate(-90)" text-anchor="middle">Sensitivity</text>"#,
        x(0.0) - 42.0,
        y(0.5)
    );
    let _ = writeln!(
        s,
        r##"<line x1="{}" y1="{}" x2="{}" y2="{}" stroke="#999999" stroke-dasharray="4 4"/>"##,
        x(0.0),
        y(0.0),
        x(1.0),
        y(1.0)
    );
    for (i, (name, curve)) in curves.iter().enumerate() {
        let color = COLORS[i % COLORS.len()];
        let pts: Vec<String> = curve
            .points
            .iter()
            .map(|p| format!("{:.3},{:.3}", x(p.fpr), y(p.tpr)))
            .collect();
        let _ = writeln!(
            s,
            r#"<polyline points="{}" fill="none" stroke="{color}" stroke-width="2"/>"#,
            pts.join(" ")
        );
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{}" fill="{color}">{} (AUC {:.3})</text>"#,
            x(0.55),
            y(0.12) + 16.0 * i as f64,
            escape(name),
            curve.auc
        );
    }
    s.push_str("</svg>\n");
    s
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

pub fn calibration_table(report: &CalibrationReport) -> String {
    let mut out = format!(
        "{:<8} {:>8} {:>10} {:>10}\n",
        "Stratum", "N", "Observed", "Predicted"
    );
    for s in &report.strata {
        let _ = writeln!(
            out,
            "{:<8} {:>8} {:>10.3} {:>10.3}",
            s.label, s.n_obs, s.observed_rate, s.mean_predicted
        );
    }
    let _ = writeln!(
        out,
        "{:<8} {:>8} {:>10.3}",
        "Total", report.n_obs, report.prevalence
    );
    out
}

pub fn kappa_table(result: &KappaResult) -> String {
    format!(
        "kappa {:.3} (SE {:.3}, 95% CI {:.3} - {:.3}); observed agreement {:.3}, expected {:.3}, n = {}\n",
        result.kappa,
        result.standard_error,
        result.ci_low,
        result.ci_high,
        result.observed_agreement,
        result.expected_agreement,
        result.n_items
    )
}
