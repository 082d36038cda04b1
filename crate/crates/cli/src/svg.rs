//! Minimal SVG writer for window plots in the `s`-plane and for traces in
//! the `w`-plane.

use std::fmt::Write;

use dirichlet_core::geometry::Rect;
use num_complex::Complex64;

const MARGIN: f64 = 48.0;

pub struct Plot {
    view: Rect,
    scale: f64,
    width: f64,
    height: f64,
    body: String,
}

fn nice_step(span: f64) -> f64 {
    let raw = span / 8.0;
    let mag = 10f64.powf(raw.log10().floor());
    [1.0, 2.0, 5.0, 10.0].iter().map(|m| m * mag).find(|s| *s >= raw).unwrap_or(10.0 * mag)
}

fn esc(text: &str) -> String {
    text.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

impl Plot {
    /// A plot of `view` whose longer side spans `size` pixels.
    pub fn new(view: Rect, size: f64, title: &str, x_label: &str, y_label: &str) -> Self {
        let scale = size / view.width().max(view.height());
        let width = view.width() * scale + 2.0 * MARGIN;
        let height = view.height() * scale + 2.0 * MARGIN;
        let mut p = Plot { view, scale, width, height, body: String::new() };
        p.frame(title, x_label, y_label);
        p
    }

    fn x(&self, re: f64) -> f64 {
        MARGIN + (re - self.view.sigma_min) * self.scale
    }

    fn y(&self, im: f64) -> f64 {
        MARGIN + (self.view.t_max - im) * self.scale
    }

    fn frame(&mut self, title: &str, x_label: &str, y_label: &str) {
        let (x0, x1) = (self.x(self.view.sigma_min), self.x(self.view.sigma_max));
        let (y0, y1) = (self.y(self.view.t_max), self.y(self.view.t_min));
        let _ = writeln!(
            self.body,
            r##"<rect x="{x0:.2}" y="{y0:.2}" width="{:.2}" height="{:.2}" fill="white" stroke="#333" stroke-width="1"/>"##,
            x1 - x0,
            y1 - y0
        );
        let step = nice_step(self.view.width());
        let mut v = (self.view.sigma_min / step).ceil() * step;
        while v <= self.view.sigma_max + 1e-12 {
            let x = self.x(v);
            let _ = writeln!(
                self.body,
                r##"<line x1="{x:.2}" y1="{y1:.2}" x2="{x:.2}" y2="{:.2}" stroke="#333"/><text x="{x:.2}" y="{:.2}" font-size="11" text-anchor="middle">{}</text>"##,
                y1 + 4.0,
                y1 + 16.0,
                fmt_tick(v)
            );
            v += step;
        }
        let step = nice_step(self.view.height());
        let mut v = (self.view.t_min / step).ceil() * step;
        while v <= self.view.t_max + 1e-12 {
            let y = self.y(v);
            let _ = writeln!(
                self.body,
                r##"<line x1="{:.2}" y1="{y:.2}" x2="{x0:.2}" y2="{y:.2}" stroke="#333"/><text x="{:.2}" y="{:.2}" font-size="11" text-anchor="end">{}</text>"##,
                x0 - 4.0,
                x0 - 6.0,
                y + 4.0,
                fmt_tick(v)
            );
            v += step;
        }
        let _ = writeln!(
            self.body,
            r#"<text x="{:.2}" y="{:.2}" font-size="13" text-anchor="middle">{}</text>"#,
            (x0 + x1) / 2.0,
            MARGIN / 2.0,
            esc(title)
        );
        let _ = writeln!(
            self.body,
            r#"<text x="{:.2}" y="{:.2}" font-size="12" text-anchor="middle">{}</text>"#,
            (x0 + x1) / 2.0,
            y1 + 34.0,
            esc(x_label)
        );
        let _ = writeln!(
            self.body,
            r#"<text x="14" y="{:.2}" font-size="12" text-anchor="middle" transform="rotate(-90 14 {:.2})">{}</text>"#,
            (y0 + y1) / 2.0,
            (y0 + y1) / 2.0,
            esc(y_label)
        );
        let _ = writeln!(
            self.body,
            r#"<clipPath id="view"><rect x="{x0:.2}" y="{y0:.2}" width="{:.2}" height="{:.2}"/></clipPath>"#,
            x1 - x0,
            y1 - y0
        );
    }

    pub fn vertical_guide(&mut self, re: f64) {
        if re <= self.view.sigma_min || re >= self.view.sigma_max {
            return;
        }
        let x = self.x(re);
        let _ = writeln!(
            self.body,
            r##"<line x1="{x:.2}" y1="{:.2}" x2="{x:.2}" y2="{:.2}" stroke="#999" stroke-dasharray="4 3" stroke-width="0.8"/>"##,
            self.y(self.view.t_max),
            self.y(self.view.t_min)
        );
    }

    pub fn polyline(&mut self, pts: &[Complex64], color: &str, width: f64) {
        if pts.len() < 2 {
            return;
        }
        let mut d = String::new();
        for p in pts {
            let _ = write!(d, "{:.2},{:.2} ", self.x(p.re), self.y(p.im));
        }
        let _ = writeln!(
            self.body,
            r#"<polyline clip-path="url(#view)" points="{}" fill="none" stroke="{}" stroke-width="{width:.2}" stroke-linejoin="round"/>"#,
            d.trim_end(),
            esc(color)
        );
    }

    pub fn polygon(&mut self, pts: &[Complex64], fill: &str, opacity: f64) {
        if pts.len() < 3 {
            return;
        }
        let mut d = String::new();
        for p in pts {
            let _ = write!(d, "{:.2},{:.2} ", self.x(p.re), self.y(p.im));
        }
        let _ = writeln!(
            self.body,
            r#"<polygon clip-path="url(#view)" points="{}" fill="{}" fill-opacity="{opacity:.2}" stroke="none"/>"#,
            d.trim_end(),
            esc(fill)
        );
    }

    pub fn dot(&mut self, p: Complex64, radius: f64, fill: &str, hollow: bool) {
        if !self.view.contains(p) {
            return;
        }
        let (fill, stroke) = if hollow { ("white", fill) } else { (fill, fill) };
        let _ = writeln!(
            self.body,
            r#"<circle cx="{:.2}" cy="{:.2}" r="{radius:.2}" fill="{}" stroke="{}" stroke-width="1"/>"#,
            self.x(p.re),
            self.y(p.im),
            esc(fill),
            esc(stroke)
        );
    }

    pub fn label(&mut self, p: Complex64, text: &str) {
        if !self.view.contains(p) {
            return;
        }
        let _ = writeln!(
            self.body,
            r#"<text x="{:.2}" y="{:.2}" font-size="10">{}</text>"#,
            self.x(p.re) + 4.0,
            self.y(p.im) - 4.0,
            esc(text)
        );
    }

    pub fn legend(&mut self, entries: &[(&str, &str)]) {
        let x = self.width - MARGIN + 4.0;
        for (i, (color, name)) in entries.iter().enumerate() {
            let y = MARGIN + 14.0 * i as f64;
            let _ = writeln!(
                self.body,
                r#"<line x1="{:.2}" y1="{y:.2}" x2="{:.2}" y2="{y:.2}" stroke="{}" stroke-width="2"/><text x="{:.2}" y="{:.2}" font-size="10">{}</text>"#,
                x - 40.0,
                x - 28.0,
                esc(color),
                x - 24.0,
                y + 3.0,
                esc(name)
            );
        }
    }

    pub fn finish(self) -> String {
        format!(
            "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{:.0}\" height=\"{:.0}\" viewBox=\"0 0 {:.2} {:.2}\">\n{}</svg>\n",
            self.width.ceil(),
            self.height.ceil(),
            self.width,
            self.height,
            self.body
        )
    }
}

fn fmt_tick(v: f64) -> String {
    let r = (v * 1e6).round() / 1e6;
    if r == r.trunc() {
        format!("{}", r as i64)
    } else {
        format!("{r}")
    }
}

/// Smallest window holding all points, padded by 5%.
pub fn bounding_view(points: impl Iterator<Item = Complex64>) -> Option<Rect> {
    let (mut a, mut b, mut c, mut d) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for p in points.filter(|p| p.is_finite()) {
        a = a.min(p.re);
        b = b.max(p.re);
        c = c.min(p.im);
        d = d.max(p.im);
    }
    let pad = 0.05 * (b - a).max(d - c).max(1e-6);
    Rect::new(a - pad, b + pad, c - pad, d + pad).ok()
}
