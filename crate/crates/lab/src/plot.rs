use std::collections::BTreeMap;
use std::fmt::Write;

use crate::table::ResultTable;

const W: f64 = 640.0;
const H: f64 = 420.0;
const M: f64 = 60.0;

fn ticks(lo: f64, hi: f64) -> Vec<f64> {
    (0..=4).map(|k| lo + (hi - lo) * k as f64 / 4.0).collect()
}

fn label(v: f64) -> String {
    if v == 0.0 || (v.abs() >= 1e-2 && v.abs() < 1e5) {
        format!("{v:.3}").trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        format!("{v:.2e}")
    }
}

/// Scatter of every value of `observable` with the per-abscissa median
/// joined by a line. The abscissa is `L` when the table spans several
/// sizes, otherwise the replica column (the site for profiles).
pub fn svg_plot(table: &ResultTable, observable: &str) -> String {
    let rows: Vec<_> = table.rows.iter().filter(|r| r.observable == observable && r.value.is_finite()).collect();
    let sizes: std::collections::BTreeSet<usize> = rows.iter().map(|r| r.l).collect();
    let by_l = sizes.len() > 1;
    let pts: Vec<(f64, f64)> = rows.iter().map(|r| (if by_l { r.l as f64 } else { r.replica as f64 }, r.value)).collect();
    let xlabel = if by_l { "L" } else { "index" };

    let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for &(x, y) in &pts {
        x0 = x0.min(x);
        x1 = x1.max(x);
        y0 = y0.min(y);
        y1 = y1.max(y);
    }
    if pts.is_empty() {
        (x0, x1, y0, y1) = (0.0, 1.0, 0.0, 1.0);
    }
    if x1 == x0 {
        x1 = x0 + 1.0;
    }
    if y1 == y0 {
        y1 = y0 + 1.0;
    }
    let sx = |x: f64| M + (x - x0) / (x1 - x0) * (W - 2.0 * M);
    let sy = |y: f64| H - M - (y - y0) / (y1 - y0) * (H - 2.0 * M);

    let mut s = String::new();
    let _ = writeln!(s, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}">"#);
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(s, r#"<text x="{}" y="24" font-family="sans-serif" font-size="16" text-anchor="middle">{} / {}</text>"#, W / 2.0, table.provenance.experiment, observable);
    let _ = writeln!(s, r#"<path d="M{M} {} H{} M{M} {} V{M}" stroke="black" fill="none"/>"#, H - M, W - M, H - M);
    for t in ticks(x0, x1) {
        let _ = writeln!(s, r#"<text x="{:.1}" y="{:.1}" font-family="sans-serif" font-size="11" text-anchor="middle">{}</text>"#, sx(t), H - M + 16.0, label(t));
    }
    for t in ticks(y0, y1) {
        let _ = writeln!(s, r#"<text x="{:.1}" y="{:.1}" font-family="sans-serif" font-size="11" text-anchor="end">{}</text>"#, M - 6.0, sy(t) + 4.0, label(t));
    }
    let _ = writeln!(s, r#"<text x="{}" y="{}" font-family="sans-serif" font-size="13" text-anchor="middle">{xlabel}</text>"#, W / 2.0, H - 16.0);
    for &(x, y) in &pts {
        let _ = writeln!(s, r#"<circle cx="{:.2}" cy="{:.2}" r="2" fill="steelblue" fill-opacity="0.5"/>"#, sx(x), sy(y));
    }
    let mut groups: BTreeMap<u64, Vec<f64>> = BTreeMap::new();
    for &(x, y) in &pts {
        groups.entry(x.to_bits()).or_default().push(y);
    }
    let mut med: Vec<(f64, f64)> = groups.into_iter().map(|(k, ys)| (f64::from_bits(k), lifshitz_core::stats::median(&ys))).collect();
    med.sort_by(|a, b| a.0.total_cmp(&b.0));
    if med.len() > 1 {
        let d: Vec<String> = med.iter().enumerate().map(|(i, &(x, y))| format!("{}{:.2} {:.2}", if i == 0 { "M" } else { "L" }, sx(x), sy(y))).collect();
        let _ = writeln!(s, r#"<path d="{}" stroke="firebrick" stroke-width="1.5" fill="none"/>"#, d.join(" "));
    }
    s.push_str("</svg>\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::ExperimentConfig;

    #[test]
    fn plot_is_standalone_svg() {
        let cfg = ExperimentConfig::from_json(r#"{"experiment":"tau-plus","sizes":[8,16]}"#).unwrap();
        let mut t = ResultTable::new(&cfg);
        for (l, v) in [(8, 1.0), (8, 2.0), (16, 4.0)] {
            t.push(l, 0, "tau_plus", v, 0.0);
        }
        let svg = svg_plot(&t, "tau_plus");
        assert!(svg.starts_with("<svg") && svg.ends_with("</svg>\n"));
        assert_eq!(svg.matches("<circle").count(), 3);
        let empty = svg_plot(&t, "missing");
        assert!(empty.contains("</svg>"));
    }
}
