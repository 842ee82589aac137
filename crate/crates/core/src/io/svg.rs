//! Minimal SVG line charts and position snapshots.
//!
//! Every chart uses the fixed viewBox `0 0 640 400` with a 60 px left margin and 40 px margins
//! elsewhere. Axes are linear (or log10 when requested) from the data range padded by 5%, with
//! five ticks. Coordinates are printed with two decimals so that output is byte-stable.

use std::fmt::Write;

use crate::model::Vec2;

const W: f64 = 640.0;
const H: f64 = 400.0;
const LEFT: f64 = 60.0;
const MARGIN: f64 = 40.0;
const PALETTE: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#7f7f7f"];

pub struct Series<'a> {
    pub label: &'a str,
    pub x: &'a [f64],
    pub y: &'a [f64],
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

fn tick_label(v: f64) -> String {
    if v == 0.0 {
        "0".into()
    } else if v.abs() >= 1e4 || v.abs() < 1e-2 {
        format!("{v:.1e}")
    } else {
        format!("{v:.3}").trim_end_matches('0').trim_end_matches('.').to_string()
    }
}

struct Axis {
    lo: f64,
    hi: f64,
    log: bool,
}

impl Axis {
    fn fit(values: impl Iterator<Item = f64>, log: bool) -> Axis {
        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
        for v in values {
            let v = if log { if v > 0.0 { v.log10() } else { continue } } else { v };
            if v.is_finite() {
                lo = lo.min(v);
                hi = hi.max(v);
            }
        }
        if !lo.is_finite() {
            (lo, hi) = (0.0, 1.0);
        }
        if hi - lo < 1e-12 * lo.abs().max(1.0) {
            lo -= 0.5;
            hi += 0.5;
        }
        let pad = 0.05 * (hi - lo);
        Axis { lo: lo - pad, hi: hi + pad, log }
    }

    /// Position in `[0, 1]`, `None` for values a log axis cannot show.
    fn unit(&self, v: f64) -> Option<f64> {
        let v = if self.log {
            if v > 0.0 {
                v.log10()
            } else {
                return None;
            }
        } else {
            v
        };
        v.is_finite().then(|| (v - self.lo) / (self.hi - self.lo))
    }

    fn ticks(&self) -> Vec<(f64, String)> {
        (0..5)
            .map(|k| {
                let u = k as f64 / 4.0;
                let v = self.lo + u * (self.hi - self.lo);
                let label = if self.log { format!("1e{v:.1}") } else { tick_label(v) };
                (u, label)
            })
            .collect()
    }
}

fn open(out: &mut String, title: &str) {
    let _ = write!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 {W} {H}\" width=\"{W}\" height=\"{H}\" \
         font-family=\"sans-serif\" font-size=\"11\">\n<rect width=\"{W}\" height=\"{H}\" fill=\"white\"/>\n\
         <text x=\"{}\" y=\"20\" text-anchor=\"middle\" font-size=\"13\">{}</text>\n",
        W / 2.0,
        escape(title)
    );
}

fn frame(out: &mut String, xa: &Axis, ya: &Axis, x_label: &str, y_label: &str) {
    let (pw, ph) = (W - LEFT - MARGIN, H - 2.0 * MARGIN);
    let _ = writeln!(
        out,
        "<rect x=\"{LEFT}\" y=\"{MARGIN}\" width=\"{pw}\" height=\"{ph}\" fill=\"none\" stroke=\"black\"/>"
    );
    for (u, label) in xa.ticks() {
        let px = LEFT + u * pw;
        let _ = writeln!(
            out,
            "<text x=\"{px:.2}\" y=\"{:.2}\" text-anchor=\"middle\">{}</text>",
            H - MARGIN + 14.0,
            escape(&label)
        );
    }
    for (u, label) in ya.ticks() {
        let py = H - MARGIN - u * ph;
        let _ = writeln!(
            out,
            "<text x=\"{:.2}\" y=\"{:.2}\" text-anchor=\"end\">{}</text>",
            LEFT - 4.0,
            py + 4.0,
            escape(&label)
        );
    }
    let _ = writeln!(
        out,
        "<text x=\"{:.2}\" y=\"{:.2}\" text-anchor=\"middle\">{}</text>",
        LEFT + pw / 2.0,
        H - 8.0,
        escape(x_label)
    );
    let _ = writeln!(
        out,
        "<text x=\"14\" y=\"{:.2}\" text-anchor=\"middle\" transform=\"rotate(-90 14 {:.2})\">{}</text>",
        MARGIN + ph / 2.0,
        MARGIN + ph / 2.0,
        escape(y_label)
    );
}

/// Line chart of one or more series sharing the axes.
pub fn line_chart(title: &str, x_label: &str, y_label: &str, series: &[Series], log_y: bool) -> String {
    let xa = Axis::fit(series.iter().flat_map(|s| s.x.iter().copied()), false);
    let ya = Axis::fit(series.iter().flat_map(|s| s.y.iter().copied()), log_y);
    let (pw, ph) = (W - LEFT - MARGIN, H - 2.0 * MARGIN);
    let mut out = String::new();
    open(&mut out, title);
    frame(&mut out, &xa, &ya, x_label, y_label);
    for (k, s) in series.iter().enumerate() {
        let color = PALETTE[k % PALETTE.len()];
        let mut pts = String::new();
        for (x, y) in s.x.iter().zip(s.y) {
            if let (Some(u), Some(v)) = (xa.unit(*x), ya.unit(*y)) {
                let _ = write!(pts, "{:.2},{:.2} ", LEFT + u * pw, H - MARGIN - v * ph);
            }
        }
        let _ = writeln!(
            out,
            "<polyline fill=\"none\" stroke=\"{color}\" stroke-width=\"1.5\" points=\"{}\"/>",
            pts.trim_end()
        );
        let _ = writeln!(
            out,
            "<text x=\"{:.2}\" y=\"{:.2}\" fill=\"{color}\">{}</text>",
            LEFT + 8.0,
            MARGIN + 14.0 * (k as f64 + 1.0),
            escape(s.label)
        );
    }
    out.push_str("</svg>\n");
    out
}

/// Scatter of agent positions, one colour per frame, equal scaling on both axes.
pub fn snapshot(title: &str, frames: &[(&str, &[Vec2])]) -> String {
    let all = || frames.iter().flat_map(|f| f.1.iter());
    let mut xa = Axis::fit(all().map(|p| p.x), false);
    let mut ya = Axis::fit(all().map(|p| p.y), false);
    let (pw, ph) = (W - LEFT - MARGIN, H - 2.0 * MARGIN);
    // equal aspect: widen the axis with less data per pixel
    let (sx, sy) = ((xa.hi - xa.lo) / pw, (ya.hi - ya.lo) / ph);
    if sx > sy {
        let mid = 0.5 * (ya.lo + ya.hi);
        let half = 0.5 * sx * ph;
        (ya.lo, ya.hi) = (mid - half, mid + half);
    } else {
        let mid = 0.5 * (xa.lo + xa.hi);
        let half = 0.5 * sy * pw;
        (xa.lo, xa.hi) = (mid - half, mid + half);
    }
    let mut out = String::new();
    open(&mut out, title);
    frame(&mut out, &xa, &ya, "x1", "x2");
    for (k, (label, pts)) in frames.iter().enumerate() {
        let color = PALETTE[k % PALETTE.len()];
        for p in pts.iter() {
            if let (Some(u), Some(v)) = (xa.unit(p.x), ya.unit(p.y)) {
                let _ = writeln!(
                    out,
                    "<circle cx=\"{:.2}\" cy=\"{:.2}\" r=\"2\" fill=\"{color}\"/>",
                    LEFT + u * pw,
                    H - MARGIN - v * ph
                );
            }
        }
        let _ = writeln!(
            out,
            "<text x=\"{:.2}\" y=\"{:.2}\" fill=\"{color}\">{}</text>",
            LEFT + 8.0,
            MARGIN + 14.0 * (k as f64 + 1.0),
            escape(label)
        );
    }
    out.push_str("</svg>\n");
    out
}
