//! Hand-written SVG: line charts of echo curves and grayscale heat maps of
//! sweep surfaces. Fixed 800×600 canvas, ten intervals per axis.

use std::fmt::Write as _;
use std::path::Path;

use crate::echo::EchoCurve;
use crate::error::Result;
use crate::harness::emit::write_file;
use crate::harness::sweep::SweepResult;

pub const WIDTH: f64 = 800.0;
pub const HEIGHT: f64 = 600.0;
const LEFT: f64 = 80.0;
const RIGHT: f64 = 30.0;
const TOP: f64 = 50.0;
const BOTTOM: f64 = 70.0;
const TICKS: usize = 10;

const PALETTE: [&str; 6] = [
    "#1f4e9c", "#c0392b", "#2e8b57", "#8e44ad", "#d68910", "#34495e",
];

#[derive(Debug, Clone, PartialEq)]
pub struct Style {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
}

impl Default for Style {
    fn default() -> Self {
        Self {
            title: "Loschmidt echo".into(),
            x_label: "t (1/J)".into(),
            y_label: "L".into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    pub label: String,
    pub xs: Vec<f64>,
    pub ys: Vec<f64>,
}

struct Frame {
    x0: f64,
    x1: f64,
    y0: f64,
    y1: f64,
}

impl Frame {
    fn plot_w() -> f64 {
        WIDTH - LEFT - RIGHT
    }

    fn plot_h() -> f64 {
        HEIGHT - TOP - BOTTOM
    }

    fn px(&self, x: f64) -> f64 {
        let span = if self.x1 > self.x0 {
            self.x1 - self.x0
        } else {
            1.0
        };
        LEFT + (x - self.x0) / span * Self::plot_w()
    }

    fn py(&self, y: f64) -> f64 {
        let span = if self.y1 > self.y0 {
            self.y1 - self.y0
        } else {
            1.0
        };
        TOP + Self::plot_h() - (y - self.y0) / span * Self::plot_h()
    }
}

fn tick_label(v: f64) -> String {
    let s = format!("{v:.3}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".into()
    } else {
        s.into()
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

fn header(out: &mut String) {
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(
        out,
        r#"<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#
    );
}

fn axes(out: &mut String, f: &Frame, style: &Style) {
    let (l, r) = (LEFT, WIDTH - RIGHT);
    let (t, b) = (TOP, HEIGHT - BOTTOM);
    let _ = writeln!(
        out,
        r#"<rect x="{l}" y="{t}" width="{:.2}" height="{:.2}" fill="none" stroke="black"/>"#,
        r - l,
        b - t
    );
    for i in 0..=TICKS {
        let frac = i as f64 / TICKS as f64;
        let xv = f.x0 + frac * (f.x1 - f.x0);
        let x = f.px(xv);
        let _ = writeln!(
            out,
            r#"<line x1="{x:.2}" y1="{b}" x2="{x:.2}" y2="{:.2}" stroke="black"/>"#,
            b + 5.0
        );
        let _ = writeln!(
            out,
            r#"<text x="{x:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
            b + 20.0,
            tick_label(xv)
        );
        let yv = f.y0 + frac * (f.y1 - f.y0);
        let y = f.py(yv);
        let _ = writeln!(
            out,
            r#"<line x1="{:.2}" y1="{y:.2}" x2="{l}" y2="{y:.2}" stroke="black"/>"#,
            l - 5.0
        );
        let _ = writeln!(
            out,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{}</text>"#,
            l - 8.0,
            y + 4.0,
            tick_label(yv)
        );
    }
    let _ = writeln!(
        out,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle" font-size="16">{}</text>"#,
        WIDTH / 2.0,
        TOP / 2.0 + 6.0,
        escape(&style.title)
    );
    let _ = writeln!(
        out,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle" font-size="14">{}</text>"#,
        LEFT + Frame::plot_w() / 2.0,
        HEIGHT - 20.0,
        escape(&style.x_label)
    );
    let _ = writeln!(
        out,
        r#"<text x="20" y="{:.2}" text-anchor="middle" font-size="14" transform="rotate(-90 20 {:.2})">{}</text>"#,
        TOP + Frame::plot_h() / 2.0,
        TOP + Frame::plot_h() / 2.0,
        escape(&style.y_label)
    );
}

/// Line chart with the y axis fixed to `[0, 1]`.
pub fn line_chart(series: &[Series], style: &Style) -> String {
    let x0 = series
        .iter()
        .flat_map(|s| s.xs.iter())
        .copied()
        .fold(f64::INFINITY, f64::min);
    let x1 = series
        .iter()
        .flat_map(|s| s.xs.iter())
        .copied()
        .fold(f64::NEG_INFINITY, f64::max);
    let (x0, x1) = if x0.is_finite() { (x0, x1) } else { (0.0, 1.0) };
    let frame = Frame {
        x0,
        x1,
        y0: 0.0,
        y1: 1.0,
    };

    let mut out = String::new();
    header(&mut out);
    axes(&mut out, &frame, style);
    for (i, s) in series.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let mut points = String::new();
        for (&x, &y) in s.xs.iter().zip(&s.ys) {
            let _ = write!(points, "{:.2},{:.2} ", frame.px(x), frame.py(y));
        }
        let _ = writeln!(
            out,
            r#"<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{}"/>"#,
            points.trim_end()
        );
        if !s.label.is_empty() {
            let ly = TOP + 18.0 + 16.0 * i as f64;
            let lx = WIDTH - RIGHT - 140.0;
            let _ = writeln!(
                out,
                r#"<line x1="{lx:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="{color}" stroke-width="2"/>"#,
                ly - 4.0,
                lx + 20.0,
                ly - 4.0
            );
            let _ = writeln!(
                out,
                r#"<text x="{:.2}" y="{ly:.2}">{}</text>"#,
                lx + 26.0,
                escape(&s.label)
            );
        }
    }
    out.push_str("</svg>\n");
    out
}

/// Grayscale map of a surface with `t` across and `λ` up; black is `L = 0`.
pub fn heat_map(result: &SweepResult, style: &Style) -> String {
    let times = &result.times;
    let lambdas = &result.lambdas;
    let half = |v: &[f64]| {
        if v.len() > 1 {
            0.5 * (v[1] - v[0])
        } else {
            0.5
        }
    };
    let (ht, hl) = (half(times), half(lambdas));
    let frame = Frame {
        x0: times[0] - ht,
        x1: times[times.len() - 1] + ht,
        y0: lambdas[0] - hl,
        y1: lambdas[lambdas.len() - 1] + hl,
    };
    let style = Style {
        y_label: if style.y_label == Style::default().y_label {
            "lambda".into()
        } else {
            style.y_label.clone()
        },
        ..style.clone()
    };

    let mut out = String::new();
    header(&mut out);
    let _ = writeln!(out, r#"<g shape-rendering="crispEdges">"#);
    for (i, row) in result.rows().enumerate() {
        let lam = lambdas[i];
        let y_top = frame.py(lam + hl);
        let h = frame.py(lam - hl) - y_top;
        for (j, &l) in row.iter().enumerate() {
            let x_left = frame.px(times[j] - ht);
            let w = frame.px(times[j] + ht) - x_left;
            let gray = (l.clamp(0.0, 1.0) * 255.0).round() as u8;
            let _ = writeln!(
                out,
                r#"<rect x="{x_left:.3}" y="{y_top:.3}" width="{w:.3}" height="{h:.3}" fill="rgb({gray},{gray},{gray})"/>"#
            );
        }
    }
    out.push_str("</g>\n");
    axes(&mut out, &frame, &style);
    out.push_str("</svg>\n");
    out
}

/// Heat map for multi-row sweeps, a single curve when the sweep has one `λ`.
pub fn sweep_svg(result: &SweepResult, style: &Style) -> String {
    if result.lambdas.len() == 1 {
        let series = Series {
            label: format!("lambda = {}", tick_label(result.lambdas[0])),
            xs: result.times.clone(),
            ys: result.surface.clone(),
        };
        line_chart(&[series], style)
    } else {
        heat_map(result, style)
    }
}

pub fn curve_series(curve: &EchoCurve) -> Series {
    Series {
        label: format!("N = {}", curve.params.n()),
        xs: curve.times.clone(),
        ys: curve.values.clone(),
    }
}

pub fn emit_svg(result: &SweepResult, path: &Path, style: &Style) -> Result<()> {
    write_file(path, &sweep_svg(result, style))
}

pub fn emit_curves_svg(curves: &[EchoCurve], path: &Path, style: &Style) -> Result<()> {
    let series: Vec<Series> = curves.iter().map(curve_series).collect();
    write_file(path, &line_chart(&series, style))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::config::{Axis, RangeSpec, SweepConfig};
    use crate::harness::sweep::run_sweep;
    use crate::spectrum::{momentum_grid, ChainParams, GridConvention};

    fn curve(n: usize, delta: f64) -> EchoCurve {
        let p = ChainParams::new(n, 0.9, delta).unwrap();
        EchoCurve::uniform(
            p,
            momentum_grid(&p, GridConvention::PaperInteger),
            27.0,
            0.05,
        )
        .unwrap()
    }

    fn polyline_ys(svg: &str) -> Vec<f64> {
        let start = svg.find("points=\"").unwrap() + 8;
        let end = start + svg[start..].find('"').unwrap();
        svg[start..end]
            .split(' ')
            .map(|p| p.split(',').nth(1).unwrap().parse().unwrap())
            .collect()
    }

    #[test]
    fn flat_curve_is_horizontal_at_one() {
        let svg = line_chart(&[curve_series(&curve(50, 0.0))], &Style::default());
        let ys = polyline_ys(&svg);
        assert!(ys.iter().all(|&y| y == TOP));
        assert!(svg.starts_with("<svg"));
        assert!(svg.trim_end().ends_with("</svg>"));
        assert!(!svg.contains("href"));
    }

    #[test]
    fn ten_intervals_per_axis() {
        let svg = line_chart(&[curve_series(&curve(50, 0.1))], &Style::default());
        assert_eq!(svg.matches("<text").count(), 2 * (TICKS + 1) + 3 + 1);
        assert!(svg.contains(r#"width="800" height="600""#));
    }

    #[test]
    fn overlay_has_one_polyline_per_curve() {
        let curves: Vec<EchoCurve> = [50, 100, 150, 200, 250]
            .iter()
            .map(|&n| curve(n, 0.1))
            .collect();
        let series: Vec<Series> = curves.iter().map(curve_series).collect();
        let svg = line_chart(&series, &Style::default());
        assert_eq!(svg.matches("<polyline").count(), 5);
        assert!(svg.contains("N = 250"));
    }

    #[test]
    fn heat_map_cells_and_determinism() {
        let cfg = SweepConfig {
            n: 50,
            j: 1.0,
            a: 1.0,
            delta: 0.1,
            lambda: Axis::Range(RangeSpec {
                min: 0.0,
                max: 2.0,
                step: 0.25,
            }),
            time: Axis::Range(RangeSpec {
                min: 0.0,
                max: 5.0,
                step: 0.5,
            }),
            grid: GridConvention::PaperInteger,
            outputs: vec![],
        };
        let r = run_sweep(&cfg).unwrap();
        let a = sweep_svg(&r, &Style::default());
        assert_eq!(a.matches("<rect").count(), 9 * 11 + 2);
        assert!(a.contains("rgb(255,255,255)"));
        let b = sweep_svg(&run_sweep(&cfg).unwrap(), &Style::default());
        assert_eq!(a, b);
    }

    #[test]
    fn labels_are_escaped() {
        let style = Style {
            title: "a < b & c".into(),
            ..Style::default()
        };
        let svg = line_chart(&[], &style);
        assert!(svg.contains("a &lt; b &amp; c"));
    }
}
