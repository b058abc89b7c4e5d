//! Standalone SVG plot of one dataset: observed fractions as points, optionally the
//! fitted model curve and the estimated half-crossings.

use std::fmt::Write as _;

use crate::estimate::EstimateResult;
use crate::model::NoiseModel;
use crate::simulate::Dataset;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 420.0;
const LEFT: f64 = 64.0;
const RIGHT: f64 = 20.0;
const TOP: f64 = 36.0;
const BOTTOM: f64 = 52.0;
pub const CURVE_SAMPLES: usize = 200;

struct Frame {
    t_min: f64,
    t_max: f64,
}

impl Frame {
    fn x(&self, t: f64) -> f64 {
        LEFT + (t - self.t_min) / (self.t_max - self.t_min) * (WIDTH - LEFT - RIGHT)
    }

    fn y(&self, f: f64) -> f64 {
        HEIGHT - BOTTOM - f * (HEIGHT - TOP - BOTTOM)
    }
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

pub fn render_svg(
    ds: &Dataset,
    model: Option<&NoiseModel>,
    result: Option<&EstimateResult>,
) -> String {
    let frame = Frame {
        t_min: ds.t_min(),
        t_max: ds.t_max(),
    };
    let (x0, x1) = (frame.x(frame.t_min), frame.x(frame.t_max));
    let (y0, y1) = (frame.y(0.0), frame.y(1.0));
    let mut s = String::new();

    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(s, "<title>{}</title>", escape(ds.label()));
    let _ = writeln!(
        s,
        r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#
    );

    let _ = writeln!(s, r#"<g class="axes" stroke="black" stroke-width="1">"#);
    let _ = writeln!(
        s,
        r#"<line x1="{x0:.2}" y1="{y0:.2}" x2="{x1:.2}" y2="{y0:.2}"/>"#
    );
    let _ = writeln!(
        s,
        r#"<line x1="{x0:.2}" y1="{y0:.2}" x2="{x0:.2}" y2="{y1:.2}"/>"#
    );
    let _ = writeln!(s, "</g>");

    let _ = writeln!(s, r#"<g class="ticks" fill="black">"#);
    for i in 0..=5 {
        let f = i as f64 / 5.0;
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{f:.1}</text>"#,
            x0 - 6.0,
            frame.y(f) + 4.0
        );
    }
    let t_ticks = (frame.t_min.ceil() as i64)..=(frame.t_max.floor() as i64);
    for t in t_ticks {
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{t}</text>"#,
            frame.x(t as f64),
            y0 + 16.0
        );
    }
    let _ = writeln!(s, "</g>");

    let _ = writeln!(
        s,
        r#"<text class="xlabel" x="{:.2}" y="{:.2}" text-anchor="middle">rotation angle t</text>"#,
        (x0 + x1) / 2.0,
        HEIGHT - 12.0
    );
    let _ = writeln!(
        s,
        r#"<text class="ylabel" x="16" y="{:.2}" text-anchor="middle" transform="rotate(-90 16 {:.2})">fraction of |1⟩</text>"#,
        (y0 + y1) / 2.0,
        (y0 + y1) / 2.0
    );

    if let Some(r) = result {
        let yg = frame.y(0.5);
        let _ = writeln!(
            s,
            r##"<line class="guide" x1="{x0:.2}" y1="{yg:.2}" x2="{x1:.2}" y2="{yg:.2}" stroke="#888" stroke-dasharray="4 3"/>"##
        );
        for t in [r.t1_hat, r.t2_hat] {
            let x = frame.x(t);
            let _ = writeln!(
                s,
                r##"<line class="crossing" x1="{x:.2}" y1="{y0:.2}" x2="{x:.2}" y2="{y1:.2}" stroke="#c33" stroke-dasharray="2 2"/>"##
            );
        }
    }

    if let Some(m) = model {
        let pts: Vec<String> = (0..CURVE_SAMPLES)
            .map(|i| {
                let t = frame.t_min
                    + (frame.t_max - frame.t_min) * i as f64 / (CURVE_SAMPLES - 1) as f64;
                format!("{:.2},{:.2}", frame.x(t), frame.y(m.prob(t)))
            })
            .collect();
        let _ = writeln!(
            s,
            r##"<polyline class="fit" fill="none" stroke="#1f5fbf" stroke-width="1.5" points="{}"/>"##,
            pts.join(" ")
        );
    }

    let _ = writeln!(s, r#"<g class="points" fill="black">"#);
    for r in ds.records() {
        let _ = writeln!(
            s,
            r#"<circle class="point" cx="{:.2}" cy="{:.2}" r="2.5"/>"#,
            frame.x(r.t),
            frame.y(r.fraction())
        );
    }
    let _ = writeln!(s, "</g>");
    s.push_str("</svg>\n");
    s
}
