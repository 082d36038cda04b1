//! Rectangles and polyline predicates in the `s`-plane.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
#[error("empty or non-finite rectangle")]
pub struct EmptyRect;

/// Axis-aligned rectangle `[σ_min, σ_max] × [t_min, t_max]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Rect {
    pub sigma_min: f64,
    pub sigma_max: f64,
    pub t_min: f64,
    pub t_max: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Edge {
    Left,
    Right,
    Bottom,
    Top,
}

impl Rect {
    pub fn new(sigma_min: f64, sigma_max: f64, t_min: f64, t_max: f64) -> Result<Self, EmptyRect> {
        let all_finite = [sigma_min, sigma_max, t_min, t_max].iter().all(|x| x.is_finite());
        if !all_finite || sigma_min >= sigma_max || t_min >= t_max {
            return Err(EmptyRect);
        }
        Ok(Self { sigma_min, sigma_max, t_min, t_max })
    }

    pub fn width(&self) -> f64 {
        self.sigma_max - self.sigma_min
    }

    pub fn height(&self) -> f64 {
        self.t_max - self.t_min
    }

    pub fn center(&self) -> Complex64 {
        Complex64::new(0.5 * (self.sigma_min + self.sigma_max), 0.5 * (self.t_min + self.t_max))
    }

    pub fn contains(&self, s: Complex64) -> bool {
        s.re >= self.sigma_min && s.re <= self.sigma_max && s.im >= self.t_min && s.im <= self.t_max
    }

    /// Strictly inside, at distance more than `margin` from every edge.
    pub fn contains_strict(&self, s: Complex64, margin: f64) -> bool {
        s.re > self.sigma_min + margin
            && s.re < self.sigma_max - margin
            && s.im > self.t_min + margin
            && s.im < self.t_max - margin
    }

    /// Edge crossed when leaving the rectangle towards `s` (outside point).
    pub fn exit_edge(&self, s: Complex64) -> Option<Edge> {
        let excess = [
            (self.sigma_min - s.re, Edge::Left),
            (s.re - self.sigma_max, Edge::Right),
            (self.t_min - s.im, Edge::Bottom),
            (s.im - self.t_max, Edge::Top),
        ];
        excess.iter().filter(|(d, _)| *d > 0.0).max_by(|a, b| a.0.total_cmp(&b.0)).map(|(_, e)| *e)
    }

    pub fn expanded(&self, d_sigma: f64, d_t: f64) -> Self {
        Self {
            sigma_min: self.sigma_min - d_sigma,
            sigma_max: self.sigma_max + d_sigma,
            t_min: self.t_min - d_t,
            t_max: self.t_max + d_t,
        }
    }

    /// Corners in counter-clockwise order from `(σ_min, t_min)`.
    pub fn corners(&self) -> [Complex64; 4] {
        [
            Complex64::new(self.sigma_min, self.t_min),
            Complex64::new(self.sigma_max, self.t_min),
            Complex64::new(self.sigma_max, self.t_max),
            Complex64::new(self.sigma_min, self.t_max),
        ]
    }

    /// Splits along the longer side at fraction `frac` of its length.
    pub fn split(&self, frac: f64) -> (Rect, Rect) {
        if self.width() >= self.height() {
            let m = self.sigma_min + frac * self.width();
            (Rect { sigma_max: m, ..*self }, Rect { sigma_min: m, ..*self })
        } else {
            let m = self.t_min + frac * self.height();
            (Rect { t_max: m, ..*self }, Rect { t_min: m, ..*self })
        }
    }
}

fn cross(a: Complex64, b: Complex64) -> f64 {
    a.re * b.im - a.im * b.re
}

/// Proper or touching intersection of segments `[p1, p2]` and `[q1, q2]`.
pub fn segments_intersect(p1: Complex64, p2: Complex64, q1: Complex64, q2: Complex64) -> bool {
    let d1 = cross(q2 - q1, p1 - q1);
    let d2 = cross(q2 - q1, p2 - q1);
    let d3 = cross(p2 - p1, q1 - p1);
    let d4 = cross(p2 - p1, q2 - p1);
    if ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0)) && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0)) {
        return true;
    }
    let on = |a: Complex64, b: Complex64, c: Complex64, d: f64| {
        d == 0.0 && c.re >= a.re.min(b.re) && c.re <= a.re.max(b.re) && c.im >= a.im.min(b.im) && c.im <= a.im.max(b.im)
    };
    on(q1, q2, p1, d1) || on(q1, q2, p2, d2) || on(p1, p2, q1, d3) || on(p1, p2, q2, d4)
}

/// Distance from `x` to the segment `[a, b]`.
pub fn point_segment_distance(x: Complex64, a: Complex64, b: Complex64) -> f64 {
    let ab = b - a;
    let len2 = ab.norm_sqr();
    if len2 == 0.0 {
        return (x - a).norm();
    }
    let u = ((x - a).re * ab.re + (x - a).im * ab.im) / len2;
    (x - (a + ab * u.clamp(0.0, 1.0))).norm()
}

/// Distance from `x` to a polyline.
pub fn point_polyline_distance(x: Complex64, poly: &[Complex64]) -> f64 {
    match poly.len() {
        0 => f64::INFINITY,
        1 => (x - poly[0]).norm(),
        _ => poly.windows(2).map(|w| point_segment_distance(x, w[0], w[1])).fold(f64::INFINITY, f64::min),
    }
}

#[derive(Clone, Copy)]
struct BBox {
    lo: Complex64,
    hi: Complex64,
}

fn chunk_boxes(poly: &[Complex64], chunk: usize) -> Vec<(usize, BBox)> {
    let mut out = Vec::new();
    let mut start = 0;
    while start + 1 < poly.len() {
        let end = (start + chunk).min(poly.len() - 1);
        let mut lo = poly[start];
        let mut hi = poly[start];
        for p in &poly[start..=end] {
            lo = Complex64::new(lo.re.min(p.re), lo.im.min(p.im));
            hi = Complex64::new(hi.re.max(p.re), hi.im.max(p.im));
        }
        out.push((start, BBox { lo, hi }));
        start = end;
    }
    out
}

/// Indices `(i, j)` of intersecting segments `p[i..=i+1]`, `q[j..=j+1]`.
pub fn polyline_intersections(p: &[Complex64], q: &[Complex64]) -> Vec<(usize, usize)> {
    const CHUNK: usize = 32;
    let pb = chunk_boxes(p, CHUNK);
    let qb = chunk_boxes(q, CHUNK);
    let mut out = Vec::new();
    for (ps, pbox) in &pb {
        for (qs, qbox) in &qb {
            if pbox.hi.re < qbox.lo.re || qbox.hi.re < pbox.lo.re || pbox.hi.im < qbox.lo.im || qbox.hi.im < pbox.lo.im
            {
                continue;
            }
            let pe = (ps + CHUNK).min(p.len() - 1);
            let qe = (qs + CHUNK).min(q.len() - 1);
            for i in *ps..pe {
                for j in *qs..qe {
                    if segments_intersect(p[i], p[i + 1], q[j], q[j + 1]) {
                        out.push((i, j));
                    }
                }
            }
        }
    }
    out.sort_unstable();
    out.dedup();
    out
}

/// Winding number of the closed polygon `poly` (last point joined to the
/// first) around `x`.
pub fn winding_number(poly: &[Complex64], x: Complex64) -> i32 {
    let n = poly.len();
    let mut w = 0;
    for i in 0..n {
        let a = poly[i] - x;
        let b = poly[(i + 1) % n] - x;
        if a.im <= 0.0 {
            if b.im > 0.0 && cross(a, b) > 0.0 {
                w += 1;
            }
        } else if b.im <= 0.0 && cross(a, b) < 0.0 {
            w -= 1;
        }
    }
    w
}

/// Number of crossings of the upward vertical ray from `x` with an open
/// polyline.
pub fn upward_ray_crossings(poly: &[Complex64], x: Complex64) -> usize {
    poly.windows(2)
        .filter(|w| {
            let (a, b) = (w[0], w[1]);
            // half-open rule on σ so shared vertices count once
            if (a.re > x.re) == (b.re > x.re) {
                return false;
            }
            let u = (x.re - a.re) / (b.re - a.re);
            a.im + u * (b.im - a.im) > x.im
        })
        .count()
}

/// Arc length of a polyline.
pub fn polyline_length(poly: &[Complex64]) -> f64 {
    poly.windows(2).map(|w| (w[1] - w[0]).norm()).sum()
}
