//! Result files: a CSV table and an SVG plot of success probability.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use crate::experiment::SweepRow;

/// Environment variable naming the output directory.
pub const OUT_DIR_ENV: &str = "SHADOWLINK_OUT";

pub const CSV_HEADER: [&str; 10] = [
    "scheme", "sweep_value", "B_actual", "N", "P_succ", "ci_low", "ci_high", "outage_rate", "trials", "seed",
];

/// `explicit`, else `$SHADOWLINK_OUT`, else `./results`.
pub fn output_dir(explicit: Option<&Path>) -> PathBuf {
    explicit
        .map(Path::to_path_buf)
        .or_else(|| std::env::var_os(OUT_DIR_ENV).map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("results"))
}

pub fn write_csv<W: Write>(rows: &[SweepRow], out: W) -> csv::Result<()> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(out);
    // written by hand so an empty table still has its header
    w.write_record(CSV_HEADER)?;
    for row in rows {
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_csv<R: Read>(input: R) -> csv::Result<Vec<SweepRow>> {
    csv::Reader::from_reader(input).deserialize().collect()
}

const PALETTE: [&str; 8] = ["#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#17becf"];

/// Success probability against the sweep variable, one line per scheme with
/// its Wilson band. Rows with no trials are skipped. A log x axis is used
/// when the values are positive and span more than a decade.
pub fn render_svg(rows: &[SweepRow], x_label: &str, x_from_bits: bool) -> String {
    let (w, h) = (720.0, 440.0);
    let (left, right, top, bottom) = (70.0, 200.0, 20.0, 50.0);
    let (pw, ph) = (w - left - right, h - top - bottom);

    let mut curves: BTreeMap<&str, Vec<(f64, &SweepRow)>> = BTreeMap::new();
    let mut order = Vec::new();
    for r in rows.iter().filter(|r| r.trials > 0) {
        let x = if x_from_bits { r.bits_actual as f64 } else { r.sweep_value };
        if !curves.contains_key(r.scheme.as_str()) {
            order.push(r.scheme.as_str());
        }
        curves.entry(&r.scheme).or_default().push((x, r));
    }
    let xs: Vec<f64> = curves.values().flatten().map(|p| p.0).collect();
    let (mut lo, mut hi) = xs.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &x| (a.min(x), b.max(x)));
    if !lo.is_finite() {
        (lo, hi) = (0.0, 1.0);
    }
    if hi <= lo {
        hi = lo + 1.0;
    }
    let log = lo > 0.0 && hi / lo > 10.0;
    let tx = |x: f64| {
        let t = if log { (x.ln() - lo.ln()) / (hi.ln() - lo.ln()) } else { (x - lo) / (hi - lo) };
        left + t * pw
    };
    let ty = |y: f64| top + (1.0 - y) * ph;

    let mut s = String::new();
    let _ = writeln!(s, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" font-family="sans-serif" font-size="12">"#);
    let _ = writeln!(s, r#"<rect width="{w}" height="{h}" fill="white"/>"#);
    let _ = writeln!(s, r#"<rect x="{left}" y="{top}" width="{pw}" height="{ph}" fill="none" stroke="black"/>"#);
    for i in 0..=4 {
        let y = f64::from(i) / 4.0;
        let _ = writeln!(s, r##"<line x1="{left}" x2="{0}" y1="{1:.1}" y2="{1:.1}" stroke="#ddd"/>"##, left + pw, ty(y));
        let _ = writeln!(s, r#"<text x="{}" y="{:.1}" text-anchor="end">{y:.2}</text>"#, left - 6.0, ty(y) + 4.0);
    }
    let mut ticks: Vec<f64> = xs.clone();
    ticks.sort_by(f64::total_cmp);
    ticks.dedup();
    if ticks.len() > 8 {
        let step = ticks.len().div_ceil(8);
        ticks = ticks.into_iter().step_by(step).collect();
    }
    for x in ticks {
        let _ = writeln!(s, r#"<text x="{:.1}" y="{}" text-anchor="middle">{x}</text>"#, tx(x), top + ph + 16.0);
    }
    let _ = writeln!(s, r#"<text x="{}" y="{}" text-anchor="middle">{x_label}</text>"#, left + pw / 2.0, h - 10.0);
    let _ = writeln!(s, r#"<text x="16" y="{}" text-anchor="middle" transform="rotate(-90 16 {0})">success probability</text>"#, top + ph / 2.0);

    for (i, name) in order.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let mut pts = curves[name].clone();
        pts.sort_by(|a, b| a.0.total_cmp(&b.0));
        let upper: Vec<String> = pts.iter().map(|(x, r)| format!("{:.1},{:.1}", tx(*x), ty(r.ci_high))).collect();
        let lower: Vec<String> = pts.iter().rev().map(|(x, r)| format!("{:.1},{:.1}", tx(*x), ty(r.ci_low))).collect();
        let _ = writeln!(s, r#"<polygon points="{} {}" fill="{color}" fill-opacity="0.15" stroke="none"/>"#, upper.join(" "), lower.join(" "));
        let line: Vec<String> = pts.iter().map(|(x, r)| format!("{:.1},{:.1}", tx(*x), ty(r.p_succ))).collect();
        let _ = writeln!(s, r#"<polyline points="{}" fill="none" stroke="{color}" stroke-width="2"/>"#, line.join(" "));
        for (x, r) in &pts {
            let _ = writeln!(s, r#"<circle cx="{:.1}" cy="{:.1}" r="3" fill="{color}"/>"#, tx(*x), ty(r.p_succ));
        }
        let ly = top + 14.0 + 18.0 * i as f64;
        let _ = writeln!(s, r#"<line x1="{}" x2="{}" y1="{ly}" y2="{ly}" stroke="{color}" stroke-width="2"/>"#, w - right + 10.0, w - right + 30.0);
        let _ = writeln!(s, r#"<text x="{}" y="{}">{}</text>"#, w - right + 35.0, ly + 4.0, escape(name));
    }
    s.push_str("</svg>\n");
    s
}

fn escape(t: &str) -> String {
    t.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
