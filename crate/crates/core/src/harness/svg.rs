//! Minimal deterministic SVG line plots.

use std::fmt::Write;
use std::path::{Path, PathBuf};

use crate::analysis::DiagnosticsSeries;
use crate::error::{Error, Result};

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 500.0;
const MARGIN: f64 = 60.0;
const MAX_POINTS: usize = 1000;
const PALETTE: [&str; 8] = [
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
];

pub struct Curve {
    pub label: String,
    pub points: Vec<(f64, f64)>,
    pub dashed: bool,
}

pub struct Plot {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub log_y: bool,
    pub curves: Vec<Curve>,
}

fn thin(points: &[(f64, f64)]) -> Vec<(f64, f64)> {
    let stride = points.len().div_ceil(MAX_POINTS).max(1);
    let mut out: Vec<_> = points.iter().step_by(stride).copied().collect();
    if let Some(&last) = points.last() {
        if out.last() != Some(&last) {
            out.push(last);
        }
    }
    out
}

impl Plot {
    pub fn render(&self) -> String {
        let map_y = |y: f64| if self.log_y { y.log10() } else { y };
        let curves: Vec<Vec<(f64, f64)>> = self
            .curves
            .iter()
            .map(|c| {
                thin(&c.points)
                    .into_iter()
                    .filter(|&(x, y)| x.is_finite() && (!self.log_y || y > 0.0))
                    .map(|(x, y)| (x, map_y(y)))
                    .filter(|&(_, y)| y.is_finite())
                    .collect()
            })
            .collect();
        let (mut x0, mut x1, mut y0, mut y1) = (
            f64::INFINITY,
            f64::NEG_INFINITY,
            f64::INFINITY,
            f64::NEG_INFINITY,
        );
        for &(x, y) in curves.iter().flatten() {
            x0 = x0.min(x);
            x1 = x1.max(x);
            y0 = y0.min(y);
            y1 = y1.max(y);
        }
        if !(x0 < x1) {
            (x0, x1) = (x0.min(0.0), x0.max(0.0) + 1.0);
        }
        if !(y0 < y1) {
            (y0, y1) = (y0.min(0.0) - 0.5, y0.max(0.0) + 0.5);
        }
        let pw = WIDTH - 2.0 * MARGIN;
        let ph = HEIGHT - 2.0 * MARGIN;
        let sx = |x: f64| MARGIN + (x - x0) / (x1 - x0) * pw;
        let sy = |y: f64| HEIGHT - MARGIN - (y - y0) / (y1 - y0) * ph;

        let mut s = String::new();
        let _ = writeln!(
            s,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
        );
        let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
        let _ = writeln!(
            s,
            r#"<rect x="{MARGIN}" y="{MARGIN}" width="{pw}" height="{ph}" fill="none" stroke="black"/>"#
        );
        let _ = writeln!(
            s,
            r#"<text x="{}" y="30" text-anchor="middle" font-size="16">{}</text>"#,
            WIDTH / 2.0,
            escape(&self.title)
        );
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{}" text-anchor="middle" font-size="13">{}</text>"#,
            WIDTH / 2.0,
            HEIGHT - 15.0,
            escape(&self.x_label)
        );
        let _ = writeln!(
            s,
            r#"<text x="15" y="{}" text-anchor="middle" font-size="13" transform="rotate(-90 15 {})">{}</text>"#,
            HEIGHT / 2.0,
            HEIGHT / 2.0,
            escape(&self.y_label)
        );
        for k in 0..=4 {
            let fx = x0 + (x1 - x0) * k as f64 / 4.0;
            let fy = y0 + (y1 - y0) * k as f64 / 4.0;
            let ylabel = if self.log_y {
                format!("1e{fy:.1}")
            } else {
                format!("{fy:.3}")
            };
            let _ = writeln!(
                s,
                r#"<text x="{:.2}" y="{:.2}" text-anchor="middle" font-size="11">{fx:.2}</text>"#,
                sx(fx),
                HEIGHT - MARGIN + 16.0
            );
            let _ = writeln!(
                s,
                r#"<text x="{:.2}" y="{:.2}" text-anchor="end" font-size="11">{ylabel}</text>"#,
                MARGIN - 6.0,
                sy(fy) + 4.0
            );
        }
        for (i, (curve, pts)) in self.curves.iter().zip(&curves).enumerate() {
            let color = PALETTE[i % PALETTE.len()];
            let dash = if curve.dashed {
                r#" stroke-dasharray="6 4""#
            } else {
                ""
            };
            let mut path = String::new();
            for &(x, y) in pts {
                let _ = write!(path, "{:.2},{:.2} ", sx(x), sy(y));
            }
            let _ = writeln!(
                s,
                r#"<polyline fill="none" stroke="{color}" stroke-width="1.5"{dash} points="{}"/>"#,
                path.trim_end()
            );
            let ly = MARGIN + 16.0 + 16.0 * i as f64;
            let lx = WIDTH - MARGIN - 170.0;
            let _ = writeln!(
                s,
                r#"<line x1="{lx}" y1="{ly}" x2="{}" y2="{ly}" stroke="{color}" stroke-width="2"{dash}/>"#,
                lx + 20.0
            );
            let _ = writeln!(
                s,
                r#"<text x="{}" y="{}" font-size="11">{}</text>"#,
                lx + 26.0,
                ly + 4.0,
                escape(&curve.label)
            );
        }
        s.push_str("</svg>\n");
        s
    }
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

/// Snapshots of `u` in increasing `t`, plus the shifted wave at `wave.0`.
pub fn overlay_svg(x: &[f64], snapshots: &[(f64, Vec<f64>)], wave: (f64, &[f64])) -> String {
    let mut order: Vec<&(f64, Vec<f64>)> = snapshots.iter().collect();
    order.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut curves: Vec<Curve> = order
        .into_iter()
        .map(|(t, u)| Curve {
            label: format!("u, t = {t:.3}"),
            points: x.iter().copied().zip(u.iter().copied()).collect(),
            dashed: false,
        })
        .collect();
    curves.push(Curve {
        label: format!("traveling wave, t = {:.3}", wave.0),
        points: x.iter().copied().zip(wave.1.iter().copied()).collect(),
        dashed: true,
    });
    Plot {
        title: "solution snapshots".into(),
        x_label: "x".into(),
        y_label: "u".into(),
        log_y: false,
        curves,
    }
    .render()
}

/// `sup|u − U|` against `t` on a log scale.
pub fn error_svg(series: &DiagnosticsSeries) -> String {
    Plot {
        title: "distance to the traveling wave".into(),
        x_label: "t".into(),
        y_label: "sup error".into(),
        log_y: true,
        curves: vec![Curve {
            label: "sup |u - U|".into(),
            points: series
                .records()
                .iter()
                .map(|r| (r.t, r.sup_error))
                .collect(),
            dashed: false,
        }],
    }
    .render()
}

/// Writes `overlay.svg` and `error.svg` into `out_dir`.
pub fn emit_svg(
    x: &[f64],
    snapshots: &[(f64, Vec<f64>)],
    wave: (f64, &[f64]),
    series: &DiagnosticsSeries,
    out_dir: &Path,
) -> Result<Vec<PathBuf>> {
    if snapshots.is_empty() {
        return Err(Error::Usage("emit_svg needs at least one snapshot".into()));
    }
    std::fs::create_dir_all(out_dir)?;
    let overlay = out_dir.join("overlay.svg");
    std::fs::write(&overlay, overlay_svg(x, snapshots, wave))?;
    let error = out_dir.join("error.svg");
    std::fs::write(&error, error_svg(series))?;
    Ok(vec![overlay, error])
}
