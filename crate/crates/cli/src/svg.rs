//! Minimal static SVG plots: scatter points and line series over linear or
//! log-10 horizontal axes. CSV remains the primary artifact; these files are
//! a quick visual check, nothing more.

use std::fmt::Write as _;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 440.0;
const MARGIN_L: f64 = 70.0;
const MARGIN_R: f64 = 20.0;
const MARGIN_T: f64 = 40.0;
const MARGIN_B: f64 = 55.0;

const PALETTE: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeriesKind {
    Points,
    Line,
}

#[derive(Debug, Clone)]
pub struct Series {
    pub label: String,
    pub kind: SeriesKind,
    pub points: Vec<(f64, f64)>,
}

pub struct Plot {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub log_x: bool,
    pub series: Vec<Series>,
}

impl Plot {
    pub fn new(title: &str, x_label: &str, y_label: &str) -> Self {
        Self {
            title: title.to_string(),
            x_label: x_label.to_string(),
            y_label: y_label.to_string(),
            log_x: false,
            series: Vec::new(),
        }
    }

    pub fn add(&mut self, label: &str, kind: SeriesKind, points: Vec<(f64, f64)>) {
        self.series.push(Series {
            label: label.to_string(),
            kind,
            points,
        });
    }

    fn x_value(&self, x: f64) -> f64 {
        if self.log_x {
            x.log10()
        } else {
            x
        }
    }

    pub fn render(&self) -> String {
        let mut xs: Vec<f64> = Vec::new();
        let mut ys: Vec<f64> = Vec::new();
        for s in &self.series {
            for &(x, y) in &s.points {
                let xv = self.x_value(x);
                if xv.is_finite() && y.is_finite() {
                    xs.push(xv);
                    ys.push(y);
                }
            }
        }
        let (x_lo, x_hi) = padded_bounds(&xs);
        let (y_lo, y_hi) = padded_bounds(&ys);
        let px = |x: f64| -> f64 {
            MARGIN_L + (self.x_value(x) - x_lo) / (x_hi - x_lo) * (WIDTH - MARGIN_L - MARGIN_R)
        };
        let py =
            |y: f64| -> f64 { HEIGHT - MARGIN_B - (y - y_lo) / (y_hi - y_lo) * (HEIGHT - MARGIN_T - MARGIN_B) };

        let mut out = String::new();
        let _ = writeln!(
            out,
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" viewBox=\"0 0 {WIDTH} {HEIGHT}\">"
        );
        let _ = writeln!(out, "<rect width=\"{WIDTH}\" height=\"{HEIGHT}\" fill=\"white\"/>");
        let _ = writeln!(
            out,
            "<text x=\"{:.1}\" y=\"22\" font-family=\"sans-serif\" font-size=\"15\" text-anchor=\"middle\">{}</text>",
            WIDTH / 2.0,
            escape(&self.title)
        );
        // frame
        let _ = writeln!(
            out,
            "<rect x=\"{MARGIN_L}\" y=\"{MARGIN_T}\" width=\"{:.1}\" height=\"{:.1}\" fill=\"none\" stroke=\"black\"/>",
            WIDTH - MARGIN_L - MARGIN_R,
            HEIGHT - MARGIN_T - MARGIN_B
        );
        // ticks
        for k in 0..=4 {
            let fx = x_lo + (x_hi - x_lo) * k as f64 / 4.0;
            let sx = MARGIN_L + (WIDTH - MARGIN_L - MARGIN_R) * k as f64 / 4.0;
            let label = if self.log_x {
                format!("{:.3}", 10f64.powf(fx))
            } else {
                format!("{fx:.3}")
            };
            let _ = writeln!(
                out,
                "<line x1=\"{sx:.1}\" y1=\"{:.1}\" x2=\"{sx:.1}\" y2=\"{:.1}\" stroke=\"black\"/>",
                HEIGHT - MARGIN_B,
                HEIGHT - MARGIN_B + 5.0
            );
            let _ = writeln!(
                out,
                "<text x=\"{sx:.1}\" y=\"{:.1}\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"middle\">{label}</text>",
                HEIGHT - MARGIN_B + 18.0
            );
            let fy = y_lo + (y_hi - y_lo) * k as f64 / 4.0;
            let sy = HEIGHT - MARGIN_B - (HEIGHT - MARGIN_T - MARGIN_B) * k as f64 / 4.0;
            let _ = writeln!(
                out,
                "<line x1=\"{:.1}\" y1=\"{sy:.1}\" x2=\"{MARGIN_L}\" y2=\"{sy:.1}\" stroke=\"black\"/>",
                MARGIN_L - 5.0
            );
            let _ = writeln!(
                out,
                "<text x=\"{:.1}\" y=\"{:.1}\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"end\">{fy:.3}</text>",
                MARGIN_L - 8.0,
                sy + 4.0
            );
        }
        let _ = writeln!(
            out,
            "<text x=\"{:.1}\" y=\"{:.1}\" font-family=\"sans-serif\" font-size=\"13\" text-anchor=\"middle\">{}</text>",
            (MARGIN_L + WIDTH - MARGIN_R) / 2.0,
            HEIGHT - 12.0,
            escape(&self.x_label)
        );
        let _ = writeln!(
            out,
            "<text x=\"18\" y=\"{:.1}\" font-family=\"sans-serif\" font-size=\"13\" text-anchor=\"middle\" transform=\"rotate(-90 18 {:.1})\">{}</text>",
            (MARGIN_T + HEIGHT - MARGIN_B) / 2.0,
            (MARGIN_T + HEIGHT - MARGIN_B) / 2.0,
            escape(&self.y_label)
        );

        for (idx, s) in self.series.iter().enumerate() {
            let color = PALETTE[idx % PALETTE.len()];
            match s.kind {
                SeriesKind::Line => {
                    let pts: Vec<String> = s
                        .points
                        .iter()
                        .filter(|(x, y)| self.x_value(*x).is_finite() && y.is_finite())
                        .map(|&(x, y)| format!("{:.2},{:.2}", px(x), py(y)))
                        .collect();
                    let _ = writeln!(
                        out,
                        "<polyline fill=\"none\" stroke=\"{color}\" stroke-width=\"1.5\" points=\"{}\"/>",
                        pts.join(" ")
                    );
                }
                SeriesKind::Points => {
                    for &(x, y) in &s.points {
                        if !self.x_value(x).is_finite() || !y.is_finite() {
                            continue;
                        }
                        let _ = writeln!(
                            out,
                            "<circle cx=\"{:.2}\" cy=\"{:.2}\" r=\"1.6\" fill=\"{color}\" fill-opacity=\"0.55\"/>",
                            px(x),
                            py(y)
                        );
                    }
                }
            }
            let ly = MARGIN_T + 16.0 + 16.0 * idx as f64;
            let _ = writeln!(
                out,
                "<rect x=\"{:.1}\" y=\"{:.1}\" width=\"10\" height=\"10\" fill=\"{color}\"/>",
                MARGIN_L + 8.0,
                ly - 9.0
            );
            let _ = writeln!(
                out,
                "<text x=\"{:.1}\" y=\"{ly:.1}\" font-family=\"sans-serif\" font-size=\"12\">{}</text>",
                MARGIN_L + 22.0,
                escape(&s.label)
            );
        }
        out.push_str("</svg>\n");
        out
    }
}

fn padded_bounds(values: &[f64]) -> (f64, f64) {
    if values.is_empty() {
        return (0.0, 1.0);
    }
    let lo = values.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if (hi - lo).abs() < 1e-300 {
        return (lo - 0.5, hi + 0.5);
    }
    let pad = 0.05 * (hi - lo);
    (lo - pad, hi + pad)
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn renders_wellformed_svg() {
        let mut p = Plot::new("demo", "x", "y");
        p.add("line", SeriesKind::Line, vec![(0.0, 0.0), (1.0, 1.0)]);
        p.add("dots", SeriesKind::Points, vec![(0.5, 0.2)]);
        let svg = p.render();
        assert!(svg.starts_with("<svg"));
        assert!(svg.trim_end().ends_with("</svg>"));
        assert!(svg.contains("polyline"));
        assert!(svg.contains("circle"));
    }

    #[test]
    fn log_axis_handles_decades() {
        let mut p = Plot::new("demo", "tau", "F");
        p.log_x = true;
        p.add("curve", SeriesKind::Line, vec![(0.01, 0.5), (10.0, 1.0)]);
        let svg = p.render();
        assert!(svg.contains("</svg>"));
    }
}
