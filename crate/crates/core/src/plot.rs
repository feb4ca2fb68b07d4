//! Minimal static SVG renderings: line/marker plots and signed heat maps.

use std::fmt::Write;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 440.0;
const LEFT: f64 = 80.0;
const RIGHT: f64 = 150.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 60.0;
const PALETTE: [&str; 6] = ["#c0392b", "#2471a3", "#17202a", "#d68910", "#229954", "#7d3c98"];

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Style {
    Line,
    Dashed,
    Markers,
}

#[derive(Debug, Clone)]
pub struct Series {
    pub label: String,
    pub points: Vec<(f64, f64)>,
    pub style: Style,
}

impl Series {
    pub fn new(label: impl Into<String>, points: Vec<(f64, f64)>, style: Style) -> Self {
        Self {
            label: label.into(),
            points,
            style,
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct LinePlot {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub series: Vec<Series>,
    pub log_x: bool,
    pub log_y: bool,
    /// Fixed y range; otherwise taken from the data.
    pub y_range: Option<(f64, f64)>,
}

#[derive(Debug, Clone)]
pub struct HeatMap {
    pub title: String,
    pub extent: f64,
    pub n: usize,
    /// Row-major, y slow.
    pub values: Vec<f64>,
}

fn esc(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

fn header(out: &mut String, title: &str) {
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        out,
        r#"<text x="{}" y="22" text-anchor="middle" font-size="14">{}</text>"#,
        WIDTH / 2.0,
        esc(title)
    );
}

fn nice_ticks(lo: f64, hi: f64) -> Vec<f64> {
    let span = hi - lo;
    if !(span > 0.0) {
        return vec![lo];
    }
    let raw = span / 5.0;
    let mag = 10f64.powf(raw.log10().floor());
    let step = [1.0, 2.0, 5.0, 10.0]
        .iter()
        .map(|m| m * mag)
        .find(|s| span / s <= 6.0)
        .unwrap_or(10.0 * mag);
    let mut t = (lo / step).ceil() * step;
    let mut out = Vec::new();
    while t <= hi + 1e-9 * span {
        out.push(if t.abs() < 1e-12 * step { 0.0 } else { t });
        t += step;
    }
    out
}

fn tick_label(v: f64, log: bool) -> String {
    if log {
        format!("1e{}", v.round() as i64)
    } else {
        let s = format!("{v:.4}");
        let s = s.trim_end_matches('0').trim_end_matches('.');
        if s == "-0" { "0".into() } else { s.to_string() }
    }
}

impl LinePlot {
    pub fn to_svg(&self) -> String {
        let tx = |v: f64| if self.log_x { v.log10() } else { v };
        let ty = |v: f64| if self.log_y { v.log10() } else { v };
        let pts: Vec<Vec<(f64, f64)>> = self
            .series
            .iter()
            .map(|s| {
                s.points
                    .iter()
                    .map(|&(x, y)| (tx(x), ty(y)))
                    .filter(|(x, y)| x.is_finite() && y.is_finite())
                    .collect()
            })
            .collect();
        let all = pts.iter().flatten();
        let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
        for &(x, y) in all {
            x0 = x0.min(x);
            x1 = x1.max(x);
            y0 = y0.min(y);
            y1 = y1.max(y);
        }
        if let Some((a, b)) = self.y_range {
            y0 = ty(a);
            y1 = ty(b);
        }
        if !x0.is_finite() {
            (x0, x1, y0, y1) = (0.0, 1.0, 0.0, 1.0);
        }
        if x1 <= x0 {
            x1 = x0 + 1.0;
        }
        if y1 <= y0 {
            y1 = y0 + 1.0;
        }
        let pad = 0.04 * (y1 - y0);
        let (y0, y1) = (y0 - pad, y1 + pad);
        let pw = WIDTH - LEFT - RIGHT;
        let ph = HEIGHT - TOP - BOTTOM;
        let px = |x: f64| LEFT + (x - x0) / (x1 - x0) * pw;
        let py = |y: f64| TOP + (y1 - y) / (y1 - y0) * ph;

        let mut out = String::new();
        header(&mut out, &self.title);
        let _ = writeln!(
            out,
            r#"<rect x="{LEFT}" y="{TOP}" width="{pw}" height="{ph}" fill="none" stroke="black"/>"#
        );
        for t in nice_ticks(x0, x1) {
            let x = px(t);
            let _ = writeln!(
                out,
                r##"<line x1="{x:.2}" y1="{b:.2}" x2="{x:.2}" y2="{c:.2}" stroke="black"/><text x="{x:.2}" y="{d:.2}" text-anchor="middle">{l}</text>"##,
                b = TOP + ph,
                c = TOP + ph - 5.0,
                d = TOP + ph + 18.0,
                l = tick_label(t, self.log_x)
            );
        }
        for t in nice_ticks(y0, y1) {
            let y = py(t);
            let _ = writeln!(
                out,
                r##"<line x1="{LEFT}" y1="{y:.2}" x2="{a:.2}" y2="{y:.2}" stroke="black"/><text x="{b:.2}" y="{c:.2}" text-anchor="end">{l}</text>"##,
                a = LEFT + 5.0,
                b = LEFT - 6.0,
                c = y + 4.0,
                l = tick_label(t, self.log_y)
            );
        }
        let _ = writeln!(
            out,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
            LEFT + pw / 2.0,
            HEIGHT - 15.0,
            esc(&self.x_label)
        );
        let _ = writeln!(
            out,
            r#"<text transform="translate(20 {:.2}) rotate(-90)" text-anchor="middle">{}</text>"#,
            TOP + ph / 2.0,
            esc(&self.y_label)
        );
        let _ = writeln!(
            out,
            r#"<clipPath id="plot"><rect x="{LEFT}" y="{TOP}" width="{pw}" height="{ph}"/></clipPath>"#
        );
        for (i, (s, p)) in self.series.iter().zip(&pts).enumerate() {
            let color = PALETTE[i % PALETTE.len()];
            match s.style {
                Style::Line | Style::Dashed => {
                    let path: Vec<String> = p.iter().map(|&(x, y)| format!("{:.2},{:.2}", px(x), py(y))).collect();
                    let dash = if s.style == Style::Dashed { r#" stroke-dasharray="6 4""# } else { "" };
                    let _ = writeln!(
                        out,
                        r#"<polyline clip-path="url(#plot)" fill="none" stroke="{color}" stroke-width="1.5"{dash} points="{}"/>"#,
                        path.join(" ")
                    );
                }
                Style::Markers => {
                    for &(x, y) in p {
                        let _ = writeln!(
                            out,
                            r#"<circle clip-path="url(#plot)" cx="{:.2}" cy="{:.2}" r="3" fill="none" stroke="{color}"/>"#,
                            px(x),
                            py(y)
                        );
                    }
                }
            }
            let ly = TOP + 10.0 + 18.0 * i as f64;
            let lx = WIDTH - RIGHT + 10.0;
            let _ = writeln!(
                out,
                r#"<line x1="{lx}" y1="{ly}" x2="{}" y2="{ly}" stroke="{color}" stroke-width="2"/><text x="{}" y="{}">{}</text>"#,
                lx + 20.0,
                lx + 25.0,
                ly + 4.0,
                esc(&s.label)
            );
        }
        out.push_str("</svg>\n");
        out
    }
}

impl HeatMap {
    /// Diverging map, red positive and blue negative, scaled to max |value|.
    pub fn to_svg(&self) -> String {
        let mut out = String::new();
        header(&mut out, &self.title);
        let side = (HEIGHT - TOP - BOTTOM).min(WIDTH - LEFT - RIGHT);
        let cell = side / self.n as f64;
        let scale = self.values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let scale = if scale > 0.0 { scale } else { 1.0 };
        for iy in 0..self.n {
            for ix in 0..self.n {
                let v = self.values[iy * self.n + ix] / scale;
                let fade = (255.0 * (1.0 - v.abs().min(1.0))).round() as u8;
                let (r, g, b) = if v >= 0.0 { (255, fade, fade) } else { (fade, fade, 255) };
                // y increases upwards
                let _ = writeln!(
                    out,
                    r#"<rect x="{:.2}" y="{:.2}" width="{:.2}" height="{:.2}" fill="rgb({r},{g},{b})"/>"#,
                    LEFT + cell * ix as f64,
                    TOP + cell * (self.n - 1 - iy) as f64,
                    cell + 0.05,
                    cell + 0.05
                );
            }
        }
        let _ = writeln!(
            out,
            r#"<rect x="{LEFT}" y="{TOP}" width="{side:.2}" height="{side:.2}" fill="none" stroke="black"/>"#
        );
        let e = self.extent;
        let _ = writeln!(
            out,
            r#"<text x="{LEFT}" y="{:.2}">x, y ∈ [{}, {}]</text>"#,
            TOP + side + 20.0,
            tick_label(-e, false),
            tick_label(e, false)
        );
        out.push_str("</svg>\n");
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn line_plot_is_well_formed() {
        let plot = LinePlot {
            title: "t<1>".into(),
            x_label: "x".into(),
            y_label: "y".into(),
            series: vec![
                Series::new("a", vec![(0.0, 1.0), (1.0, 2.0)], Style::Line),
                Series::new("b", vec![(0.5, 1.5)], Style::Markers),
            ],
            ..Default::default()
        };
        let svg = plot.to_svg();
        assert!(svg.starts_with("<svg") && svg.ends_with("</svg>\n"));
        assert!(svg.contains("t&lt;1&gt;"));
        assert_eq!(svg.matches("<polyline").count(), 1);
        assert_eq!(svg, plot.to_svg());
    }

    #[test]
    fn ticks_cover_range() {
        let t = nice_ticks(-2.0, 2.0);
        assert_eq!(t, vec![-2.0, -1.0, 0.0, 1.0, 2.0]);
        assert_eq!(tick_label(0.5, false), "0.5");
        assert_eq!(tick_label(-3.0, true), "1e-3");
    }

    #[test]
    fn heat_map_has_one_cell_per_sample() {
        let h = HeatMap {
            title: "o".into(),
            extent: 1.0,
            n: 3,
            values: vec![0.0, 1.0, -1.0, 0.5, 0.0, 0.0, 0.0, 0.0, -0.5],
        };
        let svg = h.to_svg();
        assert_eq!(svg.matches("fill=\"rgb(").count(), 9);
        assert!(svg.contains("rgb(255,0,0)") && svg.contains("rgb(0,0,255)"));
    }
}
