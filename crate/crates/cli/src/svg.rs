//! Minimal static SVG assembly: lines, polylines, circles, and text, with
//! fixed-precision coordinates so identical figures serialize identically.

use std::fmt::Write;

pub struct Svg {
    width: f64,
    height: f64,
    body: String,
}

fn fmt_coord(v: f64) -> String {
    // Two decimals in pixel space; enough for a static figure and stable
    // across runs.
    format!("{v:.2}")
}

impl Svg {
    pub fn new(width: f64, height: f64) -> Self {
        Self { width, height, body: String::new() }
    }

    pub fn rect_background(&mut self, fill: &str) {
        let _ = writeln!(
            self.body,
            r#"<rect x="0" y="0" width="{}" height="{}" fill="{fill}"/>"#,
            fmt_coord(self.width),
            fmt_coord(self.height),
        );
    }

    pub fn line(&mut self, x1: f64, y1: f64, x2: f64, y2: f64, stroke: &str, width: f64) {
        let _ = writeln!(
            self.body,
            r#"<line x1="{}" y1="{}" x2="{}" y2="{}" stroke="{stroke}" stroke-width="{width}"/>"#,
            fmt_coord(x1),
            fmt_coord(y1),
            fmt_coord(x2),
            fmt_coord(y2),
        );
    }

    pub fn polyline(&mut self, pts: &[(f64, f64)], stroke: &str, width: f64) {
        if pts.len() < 2 {
            return;
        }
        let coords: Vec<String> =
            pts.iter().map(|&(x, y)| format!("{},{}", fmt_coord(x), fmt_coord(y))).collect();
        let _ = writeln!(
            self.body,
            r#"<polyline points="{}" fill="none" stroke="{stroke}" stroke-width="{width}"/>"#,
            coords.join(" "),
        );
    }

    pub fn circle(&mut self, cx: f64, cy: f64, r: f64, fill: &str) {
        let _ = writeln!(
            self.body,
            r#"<circle cx="{}" cy="{}" r="{}" fill="{fill}"/>"#,
            fmt_coord(cx),
            fmt_coord(cy),
            fmt_coord(r),
        );
    }

    pub fn text(&mut self, x: f64, y: f64, size: f64, fill: &str, content: &str) {
        let escaped = content
            .replace('&', "&amp;")
            .replace('<', "&lt;")
            .replace('>', "&gt;");
        let _ = writeln!(
            self.body,
            r#"<text x="{}" y="{}" font-family="monospace" font-size="{size}" fill="{fill}">{escaped}</text>"#,
            fmt_coord(x),
            fmt_coord(y),
        );
    }

    pub fn finish(self) -> String {
        format!(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}\" height=\"{h}\" viewBox=\"0 0 {w} {h}\">\n{}</svg>\n",
            self.body,
            w = fmt_coord(self.width),
            h = fmt_coord(self.height),
        )
    }
}
