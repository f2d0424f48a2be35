use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;

use bratteli::grid::{entropy_curve, KuhnGrid};
use clap::Args;

use crate::output::{csv_writer, num, sink};
use crate::{CliError, CliResult, Global};

#[derive(Debug, Args)]
pub struct KuhnCurveArgs {
    #[arg(long, default_value_t = 2)]
    beta: usize,
    /// Dimension of the parameter cube. Beyond 1 the curve is taken along
    /// the diagonal `theta = (t, .., t)`.
    #[arg(long, default_value_t = 1)]
    k: usize,
    /// Level `n` of the approximant `H_n`.
    #[arg(long, default_value_t = 12)]
    level: usize,
    /// Evenly spaced points in `[0, 1]`, both ends included.
    #[arg(long, default_value_t = 257)]
    samples: usize,
    /// Also draw the curve as an SVG polyline.
    #[arg(long)]
    svg: Option<PathBuf>,
}

pub fn kuhn_curve(g: &Global, a: KuhnCurveArgs) -> CliResult {
    if a.samples < 2 {
        return Err(CliError::Input("--samples must be at least 2".into()));
    }
    let grid = KuhnGrid::new(a.beta, a.k)?;
    let ts: Vec<f64> = (0..a.samples).map(|i| i as f64 / (a.samples - 1) as f64).collect();
    let thetas: Vec<Vec<f64>> = ts.iter().map(|&t| vec![t; a.k]).collect();
    let curve = entropy_curve(grid, &thetas, a.level)?;
    let mut w = csv_writer(g.out.as_deref())?;
    w.write_record(["theta", "entropy_bits_per_symbol"])?;
    for (t, (_, h)) in ts.iter().zip(&curve) {
        w.write_record([num(*t), num(*h)])?;
    }
    w.flush()?;
    if let Some(path) = &a.svg {
        let points: Vec<(f64, f64)> = ts.iter().zip(&curve).map(|(t, (_, h))| (*t, *h)).collect();
        let title = format!("H_{} for the Kuhn ({}, {}) family", a.level, a.beta, a.k);
        let mut out = sink(Some(path))?;
        out.write_all(svg_plot(&points, &title).as_bytes())?;
        out.flush()?;
    }
    Ok(())
}

/// A line plot of `points` with x in `[0, 1]` and y from 0 to the maximum.
pub fn svg_plot(points: &[(f64, f64)], title: &str) -> String {
    let (w, h, pad) = (640.0, 400.0, 48.0);
    let top = points.iter().map(|p| p.1).fold(0.0f64, f64::max).max(1e-12);
    let x = |t: f64| pad + t * (w - 2.0 * pad);
    let y = |v: f64| h - pad - v / top * (h - 2.0 * pad);
    let mut s = String::new();
    let _ = writeln!(s, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#);
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(s, r#"<text x="{}" y="24" font-family="sans-serif" font-size="14" text-anchor="middle">{title}</text>"#, w / 2.0);
    let _ = writeln!(
        s,
        r#"<path d="M{:.2} {:.2} H{:.2} M{:.2} {:.2} V{:.2}" stroke="black" fill="none"/>"#,
        x(0.0),
        y(0.0),
        x(1.0),
        x(0.0),
        y(0.0),
        y(top)
    );
    for (t, label) in [(0.0, "0"), (0.5, "0.5"), (1.0, "1")] {
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}" font-family="sans-serif" font-size="12" text-anchor="middle">{label}</text>"#,
            x(t),
            h - pad + 18.0
        );
    }
    let _ = writeln!(
        s,
        r#"<text x="{:.2}" y="{:.2}" font-family="sans-serif" font-size="12" text-anchor="end">{top:.4} bits</text>"#,
        x(0.0) - 6.0,
        y(top) + 4.0
    );
    let coords: Vec<String> = points.iter().map(|&(t, v)| format!("{:.2},{:.2}", x(t), y(v))).collect();
    let _ = writeln!(s, r#"<polyline points="{}" stroke="steelblue" stroke-width="1.5" fill="none"/>"#, coords.join(" "));
    s.push_str("</svg>\n");
    s
}
