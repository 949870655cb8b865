//! Minimal hand-written SVG line plots.

use std::fmt::Write;

pub const WIDTH: f64 = 800.0;
pub const HEIGHT: f64 = 600.0;

const LEFT: f64 = 80.0;
const RIGHT: f64 = 190.0;
const TOP: f64 = 50.0;
const BOTTOM: f64 = 70.0;
const TICKS: usize = 5;
const PALETTE: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#17becf",
];

/// One polyline. `values` holds the exact text of each `(x, y)` pair as emitted in CSV.
pub struct Series {
    pub name: String,
    pub points: Vec<(f64, f64)>,
    pub values: Vec<(String, String)>,
}

pub struct Plot {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub series: Vec<Series>,
}

pub fn escape(text: &str) -> String {
    text.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

pub fn header(out: &mut String, title: &str) {
    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {WIDTH} {HEIGHT}" width="{WIDTH}" height="{HEIGHT}" font-family="sans-serif" font-size="12">"#
    )
    .unwrap();
    writeln!(out, r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#).unwrap();
    writeln!(
        out,
        r#"<text class="title" x="{}" y="28" text-anchor="middle" font-size="16">{}</text>"#,
        WIDTH / 2.0,
        escape(title)
    )
    .unwrap();
}

fn bounds(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) = values.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)));
    if !lo.is_finite() {
        (0.0, 1.0)
    } else if hi - lo < 1e-12 {
        (lo - 0.5, hi + 0.5)
    } else {
        (lo, hi)
    }
}

impl Plot {
    pub fn render(&self) -> String {
        let (x0, x1) = bounds(self.series.iter().flat_map(|s| s.points.iter().map(|p| p.0)));
        let (y0, y1) = bounds(self.series.iter().flat_map(|s| s.points.iter().map(|p| p.1)));
        let plot_w = WIDTH - LEFT - RIGHT;
        let plot_h = HEIGHT - TOP - BOTTOM;
        let sx = |x: f64| LEFT + (x - x0) / (x1 - x0) * plot_w;
        let sy = |y: f64| TOP + plot_h - (y - y0) / (y1 - y0) * plot_h;

        let mut out = String::new();
        header(&mut out, &self.title);

        out.push_str("<g class=\"axes\" stroke=\"black\">\n");
        writeln!(
            out,
            r#"<line x1="{LEFT}" y1="{}" x2="{}" y2="{}"/>"#,
            TOP + plot_h,
            LEFT + plot_w,
            TOP + plot_h
        )
        .unwrap();
        writeln!(
            out,
            r#"<line x1="{LEFT}" y1="{TOP}" x2="{LEFT}" y2="{}"/>"#,
            TOP + plot_h
        )
        .unwrap();
        for i in 0..=TICKS {
            let t = i as f64 / TICKS as f64;
            let (xv, yv) = (x0 + t * (x1 - x0), y0 + t * (y1 - y0));
            let (px, py) = (sx(xv), sy(yv));
            writeln!(
                out,
                r#"<line x1="{px:.2}" y1="{}" x2="{px:.2}" y2="{}"/>"#,
                TOP + plot_h,
                TOP + plot_h + 5.0
            )
            .unwrap();
            writeln!(
                out,
                r#"<line x1="{}" y1="{py:.2}" x2="{LEFT}" y2="{py:.2}"/>"#,
                LEFT - 5.0
            )
            .unwrap();
            writeln!(
                out,
                r#"<text class="tick" x="{px:.2}" y="{}" text-anchor="middle" stroke="none">{}</text>"#,
                TOP + plot_h + 20.0,
                tick_label(xv)
            )
            .unwrap();
            writeln!(
                out,
                r#"<text class="tick" x="{}" y="{:.2}" text-anchor="end" stroke="none">{}</text>"#,
                LEFT - 8.0,
                py + 4.0,
                tick_label(yv)
            )
            .unwrap();
        }
        out.push_str("</g>\n");
        writeln!(
            out,
            r#"<text class="x-label" x="{:.2}" y="{}" text-anchor="middle">{}</text>"#,
            LEFT + plot_w / 2.0,
            HEIGHT - 20.0,
            escape(&self.x_label)
        )
        .unwrap();
        writeln!(
            out,
            r#"<text class="y-label" x="20" y="{:.2}" text-anchor="middle" transform="rotate(-90 20 {:.2})">{}</text>"#,
            TOP + plot_h / 2.0,
            TOP + plot_h / 2.0,
            escape(&self.y_label)
        )
        .unwrap();

        for (i, s) in self.series.iter().enumerate() {
            let color = PALETTE[i % PALETTE.len()];
            let points: Vec<String> = s
                .points
                .iter()
                .map(|&(x, y)| format!("{:.2},{:.2}", sx(x), sy(y)))
                .collect();
            let values: Vec<String> = s.values.iter().map(|(x, y)| format!("{x},{y}")).collect();
            writeln!(
                out,
                r#"<polyline class="series" data-name="{}" data-values="{}" fill="none" stroke="{color}" stroke-width="1.5" points="{}"/>"#,
                escape(&s.name),
                values.join(" "),
                points.join(" ")
            )
            .unwrap();
        }

        out.push_str("<g class=\"legend\">\n");
        for (i, s) in self.series.iter().enumerate() {
            let color = PALETTE[i % PALETTE.len()];
            let y = TOP + 10.0 + 20.0 * i as f64;
            let x = WIDTH - RIGHT + 20.0;
            writeln!(
                out,
                r#"<line x1="{x}" y1="{y}" x2="{}" y2="{y}" stroke="{color}" stroke-width="2"/>"#,
                x + 25.0
            )
            .unwrap();
            writeln!(
                out,
                r#"<text x="{}" y="{}">{}</text>"#,
                x + 32.0,
                y + 4.0,
                escape(&s.name)
            )
            .unwrap();
        }
        out.push_str("</g>\n</svg>\n");
        out
    }
}

fn tick_label(v: f64) -> String {
    let s = format!("{v:.3}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".into()
    } else {
        s.to_string()
    }
}
