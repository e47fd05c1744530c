//! Minimal SVG 1.1 writer in mathematical orientation: callers pass `(x, y)`
//! with y up and the writer flips it.

use std::fmt::Write;

pub const GENERATOR: &str = concat!("onecircle ", env!("CARGO_PKG_VERSION"));

fn escape(text: &str) -> String {
    text.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

fn c(x: f64) -> String {
    // shortest round-trip form keeps files deterministic and compact
    format!("{}", if x == 0.0 { 0.0 } else { x })
}

#[derive(Debug, Clone)]
enum Element {
    Raw(String),
    Dot(f64, f64, String),
}

#[derive(Debug, Clone, Default)]
pub struct Svg {
    body: Vec<Element>,
    metadata: Vec<(String, String)>,
    lo: (f64, f64),
    hi: (f64, f64),
    empty: bool,
}

impl Svg {
    pub fn new() -> Self {
        Svg {
            lo: (f64::INFINITY, f64::INFINITY),
            hi: (f64::NEG_INFINITY, f64::NEG_INFINITY),
            empty: true,
            ..Default::default()
        }
    }

    fn include(&mut self, x: f64, y: f64) {
        if x.is_finite() && y.is_finite() {
            self.lo = (self.lo.0.min(x), self.lo.1.min(y));
            self.hi = (self.hi.0.max(x), self.hi.1.max(y));
            self.empty = false;
        }
    }

    fn span(&self) -> f64 {
        if self.empty {
            1.0
        } else {
            (self.hi.0 - self.lo.0)
                .max(self.hi.1 - self.lo.1)
                .max(1e-300)
        }
    }

    pub fn meta(&mut self, key: &str, value: impl Into<String>) {
        self.metadata.push((key.to_string(), value.into()));
    }

    fn push(&mut self, e: String) {
        self.body.push(Element::Raw(e));
    }

    pub fn circle(&mut self, x: f64, y: f64, r: f64, style: &str) {
        self.include(x - r, y - r);
        self.include(x + r, y + r);
        self.push(format!(
            r#"<circle cx="{}" cy="{}" r="{}" {style}/>"#,
            c(x),
            c(-y),
            c(r)
        ));
    }

    /// A marker sized relative to the finished drawing.
    pub fn dot(&mut self, x: f64, y: f64, style: &str) {
        self.include(x, y);
        self.body.push(Element::Dot(x, y, style.to_string()));
    }

    pub fn polyline(&mut self, pts: &[(f64, f64)], style: &str) {
        for &(x, y) in pts {
            self.include(x, y);
        }
        let mut points = String::new();
        for (i, &(x, y)) in pts.iter().enumerate() {
            if i > 0 {
                points.push(' ');
            }
            write!(points, "{},{}", c(x), c(-y)).unwrap();
        }
        self.push(format!(
            r#"<polyline points="{points}" fill="none" {style}/>"#
        ));
    }

    pub fn polygon(&mut self, pts: &[(f64, f64)], style: &str) {
        for &(x, y) in pts {
            self.include(x, y);
        }
        let points: Vec<String> = pts
            .iter()
            .map(|&(x, y)| format!("{},{}", c(x), c(-y)))
            .collect();
        self.push(format!(
            r#"<polygon points="{}" {style}/>"#,
            points.join(" ")
        ));
    }

    pub fn line(&mut self, a: (f64, f64), b: (f64, f64), style: &str) {
        self.include(a.0, a.1);
        self.include(b.0, b.1);
        self.push(format!(
            r#"<line x1="{}" y1="{}" x2="{}" y2="{}" {style}/>"#,
            c(a.0),
            c(-a.1),
            c(b.0),
            c(-b.1)
        ));
    }

    /// Text does not grow the bounding box.
    pub fn text(&mut self, x: f64, y: f64, text: &str, style: &str) {
        self.push(format!(
            r#"<text x="{}" y="{}" {style}>{}</text>"#,
            c(x),
            c(-y),
            escape(text)
        ));
    }

    pub fn render(&self, title: &str) -> String {
        let span = self.span();
        let (lo, hi) = if self.empty {
            ((-0.5, -0.5), (0.5, 0.5))
        } else {
            (self.lo, self.hi)
        };
        let margin = 0.05 * span;
        let (w, h) = (hi.0 - lo.0 + 2.0 * margin, hi.1 - lo.1 + 2.0 * margin);
        let mut out = String::new();
        out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
        writeln!(out, "<!-- generator: {GENERATOR} -->").unwrap();
        writeln!(
            out,
            r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" viewBox="{} {} {} {}" width="800" height="{}">"#,
            c(lo.0 - margin),
            c(-hi.1 - margin),
            c(w),
            c(h),
            (800.0 * h / w).round().clamp(1.0, 8000.0)
        )
        .unwrap();
        writeln!(out, "<title>{}</title>", escape(title)).unwrap();
        out.push_str("<metadata>\n");
        for (k, v) in &self.metadata {
            writeln!(out, r#"  <entry key="{}">{}</entry>"#, escape(k), escape(v)).unwrap();
        }
        out.push_str("</metadata>\n");
        // stroke width and font size follow the drawing's scale
        writeln!(
            out,
            r#"<g stroke-width="{}" font-size="{}" font-family="sans-serif">"#,
            c(0.002 * span),
            c(0.03 * span)
        )
        .unwrap();
        for e in &self.body {
            match e {
                Element::Raw(text) => out.push_str(text),
                Element::Dot(x, y, style) => write!(
                    out,
                    r#"<circle cx="{}" cy="{}" r="{}" {style}/>"#,
                    c(*x),
                    c(-y),
                    c(0.003 * span)
                )
                .unwrap(),
            }
            out.push('\n');
        }
        out.push_str("</g>\n</svg>\n");
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flips_y_and_fits_viewbox() {
        let mut s = Svg::new();
        s.line((0.0, 0.0), (10.0, 20.0), r#"stroke="black""#);
        s.meta("note", "a<b");
        let text = s.render("t");
        assert!(text.contains(r#"y2="-20""#));
        assert!(text.contains(r#"viewBox="-1 -21 12 22""#));
        assert!(text.contains("a&lt;b"));
        assert!(text.contains("version=\"1.1\""));
    }
}
