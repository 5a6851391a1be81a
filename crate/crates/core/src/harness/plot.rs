//! Two-panel SVG rendering of a trace: threshold against RO on top,
//! detection outcome against attempt RO below.

use std::fmt::Write as _;

use super::trace_csv::TraceCsvRow;

const WIDTH: f64 = 800.0;
const MARGIN_LEFT: f64 = 70.0;
const MARGIN_RIGHT: f64 = 20.0;
const TOP_Y: f64 = 40.0;
const TOP_H: f64 = 280.0;
const BOTTOM_Y: f64 = 380.0;
const BOTTOM_H: f64 = 120.0;
const HEIGHT: f64 = 550.0;

struct Axis {
    lo: f64,
    hi: f64,
}

impl Axis {
    fn fit(values: impl Iterator<Item = f64>) -> Axis {
        let (mut lo, mut hi) = values.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
            (lo.min(v), hi.max(v))
        });
        if !lo.is_finite() {
            lo = 0.0;
            hi = 1.0;
        }
        let pad = ((hi - lo) * 0.05).max(1.0);
        lo -= pad;
        hi += pad;
        Axis { lo, hi }
    }

    fn frac(&self, v: f64) -> f64 {
        (v - self.lo) / (self.hi - self.lo)
    }
}

fn x_of(ro: f64, last_ro: f64) -> f64 {
    let span = if last_ro > 0.0 { last_ro } else { 1.0 };
    MARGIN_LEFT + (WIDTH - MARGIN_LEFT - MARGIN_RIGHT) * ro / span
}

fn polyline(out: &mut String, points: &[(f64, f64)], style: &str) {
    out.push_str("<polyline fill=\"none\" ");
    out.push_str(style);
    out.push_str(" points=\"");
    for (i, (x, y)) in points.iter().enumerate() {
        if i > 0 {
            out.push(' ');
        }
        let _ = write!(out, "{x:.2},{y:.2}");
    }
    out.push_str("\"/>\n");
}

fn frame(out: &mut String, y: f64, h: f64, title: &str) {
    let w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
    let _ = writeln!(out, "<rect x=\"{MARGIN_LEFT:.2}\" y=\"{y:.2}\" width=\"{w:.2}\" height=\"{h:.2}\" fill=\"none\" stroke=\"#444\"/>");
    let _ = writeln!(
        out,
        "<text x=\"{MARGIN_LEFT:.2}\" y=\"{:.2}\" font-size=\"14\">{title}</text>",
        y - 8.0
    );
}

fn ro_ticks(out: &mut String, last_ro: u32, baseline: f64) {
    let step = ((last_ro / 8).max(1) as f64).ceil() as u32;
    let mut ro = 0;
    while ro <= last_ro {
        let x = x_of(f64::from(ro), f64::from(last_ro));
        let _ = writeln!(
            out,
            "<text x=\"{x:.2}\" y=\"{:.2}\" font-size=\"11\" text-anchor=\"middle\">{ro}</text>",
            baseline + 14.0
        );
        ro += step;
    }
}

/// Renders `rows` as a standalone SVG document. Output depends only on the input.
pub fn render_svg(rows: &[TraceCsvRow]) -> String {
    let last_ro = rows.last().map_or(0, |r| r.record.ro);
    let last = f64::from(last_ro);
    let axis = Axis::fit(rows.iter().flat_map(|r| {
        [
            r.record.p_th.db(),
            r.record.measured.db(),
            r.analytic_threshold.db(),
        ]
    }));
    let y_top = |v: f64| TOP_Y + TOP_H * (1.0 - axis.frac(v));

    let mut out = String::new();
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH:.0}\" height=\"{HEIGHT:.0}\" viewBox=\"0 0 {WIDTH:.0} {HEIGHT:.0}\" font-family=\"sans-serif\">"
    );
    out.push_str("<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");

    frame(&mut out, TOP_Y, TOP_H, "Noise threshold p_th vs RO (dB)");
    for k in 0..=4 {
        let v = axis.lo + (axis.hi - axis.lo) * f64::from(k) / 4.0;
        let y = y_top(v);
        let _ = writeln!(
            out,
            "<text x=\"{:.2}\" y=\"{:.2}\" font-size=\"11\" text-anchor=\"end\">{v:.1}</text>",
            MARGIN_LEFT - 6.0,
            y + 4.0
        );
        let _ = writeln!(out, "<line x1=\"{MARGIN_LEFT:.2}\" y1=\"{y:.2}\" x2=\"{:.2}\" y2=\"{y:.2}\" stroke=\"#ddd\"/>", WIDTH - MARGIN_RIGHT);
    }
    ro_ticks(&mut out, last_ro, TOP_Y + TOP_H);

    let pts = |f: &dyn Fn(&TraceCsvRow) -> f64| -> Vec<(f64, f64)> {
        rows.iter()
            .map(|r| (x_of(f64::from(r.record.ro), last), y_top(f(r))))
            .collect()
    };
    polyline(
        &mut out,
        &pts(&|r| r.record.measured.db()),
        "stroke=\"#bbb\" stroke-width=\"1\"",
    );
    polyline(
        &mut out,
        &pts(&|r| r.analytic_threshold.db()),
        "stroke=\"#d62728\" stroke-width=\"1.5\" stroke-dasharray=\"6 4\"",
    );
    polyline(
        &mut out,
        &pts(&|r| r.record.p_th.db()),
        "stroke=\"#1f77b4\" stroke-width=\"2\"",
    );
    let legend = [
        ("#1f77b4", "simulated p_th"),
        ("#d62728", "analytic p_th"),
        ("#bbb", "measured"),
    ];
    for (i, (color, label)) in legend.iter().enumerate() {
        let x = WIDTH - MARGIN_RIGHT - 150.0;
        let y = TOP_Y + 18.0 + 16.0 * i as f64;
        let _ = writeln!(out, "<line x1=\"{x:.2}\" y1=\"{y:.2}\" x2=\"{:.2}\" y2=\"{y:.2}\" stroke=\"{color}\" stroke-width=\"2\"/>", x + 20.0);
        let _ = writeln!(
            out,
            "<text x=\"{:.2}\" y=\"{:.2}\" font-size=\"11\">{label}</text>",
            x + 26.0,
            y + 4.0
        );
    }

    frame(
        &mut out,
        BOTTOM_Y,
        BOTTOM_H,
        "Msg1 detection P_S vs attempt RO",
    );
    let y_bottom = |hit: bool| BOTTOM_Y + if hit { 0.2 } else { 0.8 } * BOTTOM_H;
    for (label, hit) in [("1", true), ("0", false)] {
        let _ = writeln!(
            out,
            "<text x=\"{:.2}\" y=\"{:.2}\" font-size=\"11\" text-anchor=\"end\">{label}</text>",
            MARGIN_LEFT - 6.0,
            y_bottom(hit) + 4.0
        );
    }
    ro_ticks(&mut out, last_ro, BOTTOM_Y + BOTTOM_H);
    for r in rows.iter().filter(|r| r.record.ue_attempt) {
        let color = if r.record.detected {
            "#2ca02c"
        } else {
            "#d62728"
        };
        let _ = writeln!(
            out,
            "<circle cx=\"{:.2}\" cy=\"{:.2}\" r=\"3\" fill=\"{color}\"/>",
            x_of(f64::from(r.record.ro), last),
            y_bottom(r.record.detected)
        );
    }
    out.push_str("</svg>\n");
    out
}
