//! Zeros of `f` and `f'` in rectangles: argument-principle counting,
//! subdivision, Newton polishing and classification.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::Rect;
use crate::models::{view, AnalyticTarget, ModelError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ZeroError {
    #[error("a zero or pole lies too close to the contour near {s}")]
    BoundaryTooClose { s: Complex64 },
    #[error("argument-principle quadrature inconclusive: winding estimate {value}")]
    QuadratureInconclusive { value: f64 },
    #[error("Newton polishing did not converge near {s}")]
    NonConvergence { s: Complex64 },
    #[error(transparent)]
    Model(#[from] ModelError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ZeroKind {
    Trivial,
    Nontrivial,
    Unknown,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Zero {
    pub s: Complex64,
    pub kind: ZeroKind,
    pub multiplicity: u32,
    pub residual: f64,
    pub of_derivative: bool,
}

const GL_X: [f64; 5] = [
    0.148_874_338_981_631_2,
    0.433_395_394_129_247_2,
    0.679_409_568_299_024_4,
    0.865_063_366_688_984_5,
    0.973_906_528_517_171_7,
];
const GL_W: [f64; 5] = [
    0.295_524_224_714_752_9,
    0.269_266_719_309_996_3,
    0.219_086_362_515_982,
    0.149_451_349_150_580_6,
    0.066_671_344_308_688_1,
];

/// Panel agreement required before a panel is accepted.
const PANEL_TOL: f64 = 1e-3;
const MAX_DEPTH: u32 = 48;
/// Smallest cell diameter before a cluster is treated as one multiple zero.
const CELL_FLOOR: f64 = 1e-5;
const MULTIPLICITY_RADIUS: f64 = 1e-4;

fn log_deriv(g: &dyn AnalyticTarget, s: Complex64) -> Result<Complex64, ZeroError> {
    let j = g.jet(s)?;
    let q = j.d1() / j.value();
    if !q.is_finite() {
        return Err(ZeroError::BoundaryTooClose { s });
    }
    Ok(q)
}

fn gl_panel(g: &dyn AnalyticTarget, a: Complex64, b: Complex64) -> Result<Complex64, ZeroError> {
    let mid = (a + b) * 0.5;
    let half = (b - a) * 0.5;
    let mut acc = Complex64::new(0.0, 0.0);
    for (x, w) in GL_X.iter().zip(GL_W.iter()) {
        acc += (log_deriv(g, mid + half * *x)? + log_deriv(g, mid - half * *x)?) * *w;
    }
    Ok(acc * half)
}

/// Accepts a panel when its two halves agree with the whole and the
/// integral matches the principal `Log(g(b)/g(a))`, which rules out panels
/// whose nodes straddle a near-boundary singularity.
fn adaptive_segment(
    g: &dyn AnalyticTarget,
    (a, ga): (Complex64, Complex64),
    (b, gb): (Complex64, Complex64),
    whole: Complex64,
    depth: u32,
) -> Result<Complex64, ZeroError> {
    // off-centre split so singularities do not sit on panel ends at every level
    let m = a + (b - a) * 0.513_579_1;
    let gm = g.eval(m)?;
    if gm.norm() == 0.0 || !gm.is_finite() {
        return Err(ZeroError::BoundaryTooClose { s: m });
    }
    let left = gl_panel(g, a, m)?;
    let right = gl_panel(g, m, b)?;
    let consistent = |i: Complex64, g0: Complex64, g1: Complex64| (i - (g1 / g0).ln()).norm() < PANEL_TOL;
    if (left + right - whole).norm() < PANEL_TOL && consistent(left, ga, gm) && consistent(right, gm, gb) {
        return Ok(left + right);
    }
    if depth >= MAX_DEPTH {
        return Err(ZeroError::BoundaryTooClose { s: m });
    }
    Ok(adaptive_segment(g, (a, ga), (m, gm), left, depth + 1)?
        + adaptive_segment(g, (m, gm), (b, gb), right, depth + 1)?)
}

/// `(1/2πi) ∮ g'/g` over the rectangle boundary, unrounded.
fn winding_estimate(g: &dyn AnalyticTarget, rect: &Rect) -> Result<f64, ZeroError> {
    let c = rect.corners();
    let mut total = Complex64::new(0.0, 0.0);
    for k in 0..4 {
        let (a, b) = (c[k], c[(k + 1) % 4]);
        // start from several panels so long edges are not judged on one
        let n = 4;
        let mut pa = a;
        let mut ga = g.eval(a)?;
        for i in 1..=n {
            let pb = if i == n { b } else { a + (b - a) * (i as f64 / n as f64) };
            let gb = g.eval(pb)?;
            if gb.norm() == 0.0 || !gb.is_finite() {
                return Err(ZeroError::BoundaryTooClose { s: pb });
            }
            let whole = gl_panel(g, pa, pb)?;
            total += adaptive_segment(g, (pa, ga), (pb, gb), whole, 0)?;
            pa = pb;
            ga = gb;
        }
    }
    Ok(total.im / (2.0 * PI))
}

fn pole_order_inside(g: &dyn AnalyticTarget, rect: &Rect) -> i64 {
    g.poles().iter().filter(|p| rect.contains(p.s)).map(|p| p.order as i64).sum()
}

fn count_in(g: &dyn AnalyticTarget, rect: &Rect) -> Result<i64, ZeroError> {
    let w = winding_estimate(g, rect)?;
    let n = w.round();
    if (w - n).abs() > 0.25 {
        return Err(ZeroError::QuadratureInconclusive { value: w });
    }
    Ok(n as i64 + pole_order_inside(g, rect))
}

fn nudge_margin(s: Complex64) -> f64 {
    1e-6 * (1.0 + s.im.abs())
}

/// Newton on `g` from `s0`; returns the limit if it converges.
fn newton(g: &dyn AnalyticTarget, s0: Complex64, multiplicity: f64, iters: usize) -> Option<Complex64> {
    let mut s = s0;
    let mut prev = f64::INFINITY;
    for _ in 0..iters {
        let j = g.jet(s).ok()?;
        let (v, d) = (j.value(), j.d1());
        if v.norm() == 0.0 {
            return Some(s);
        }
        if d.norm() == 0.0 {
            return None;
        }
        let step = v / d * multiplicity;
        if !step.is_finite() {
            return None;
        }
        s -= step;
        let h = step.norm();
        let scale = 1.0 + s.norm();
        // tiny steps that stop shrinking are rounding noise in g
        if h <= 1e-14 * scale || (h <= 1e-10 * scale && h >= 0.5 * prev) {
            return Some(s);
        }
        prev = h;
    }
    None
}

/// Zeros of `g` and known poles within `reach` of the segment `[a, b]`.
fn singularities_near_segment(g: &dyn AnalyticTarget, a: Complex64, b: Complex64, reach: f64) -> Vec<Complex64> {
    let len = (b - a).norm();
    let n = ((len / 0.05).ceil() as usize).clamp(16, 4000);
    let h = len / n as f64;
    let mut found: Vec<Complex64> = Vec::new();
    for p in g.poles() {
        if crate::geometry::point_segment_distance(p.s, a, b) < reach {
            found.push(p.s);
        }
    }
    for i in 0..=n {
        let s = a + (b - a) * (i as f64 / n as f64);
        let Ok(j) = g.jet(s) else { continue };
        let est = (j.value() / j.d1()).norm();
        if !(est < 2.0 * h + reach) {
            continue;
        }
        if let Some(z) = newton(g, s, 1.0, 40) {
            if crate::geometry::point_segment_distance(z, a, b) < reach && !found.iter().any(|f| (f - z).norm() < 1e-9)
            {
                found.push(z);
            }
        }
    }
    found
}

/// Moves edges outward so no zero or pole of `g` lies within
/// `1e-6 (1 + |t|)` of the boundary.
pub fn nudge_rect(g: &dyn AnalyticTarget, rect: &Rect) -> Rect {
    let mut r = *rect;
    let reach = 1e-6 * (1.0 + rect.t_min.abs().max(rect.t_max.abs()));
    for _ in 0..4 {
        let mut moved = false;
        let c = r.corners();
        for k in 0..4 {
            for z in singularities_near_segment(g, c[k], c[(k + 1) % 4], reach) {
                let m = nudge_margin(z);
                match k {
                    0 if z.im - r.t_min < m => {
                        r.t_min = z.im - m;
                        moved = true;
                    }
                    1 if r.sigma_max - z.re < m => {
                        r.sigma_max = z.re + m;
                        moved = true;
                    }
                    2 if r.t_max - z.im < m => {
                        r.t_max = z.im + m;
                        moved = true;
                    }
                    3 if z.re - r.sigma_min < m => {
                        r.sigma_min = z.re - m;
                        moved = true;
                    }
                    _ => {}
                }
            }
        }
        if !moved {
            break;
        }
    }
    r
}

/// Number of zeros of `f` (or `f'`) inside `rect`, counted with
/// multiplicity. The rectangle is nudged first.
pub fn count_zeros(target: &dyn AnalyticTarget, rect: &Rect, use_derivative: bool) -> Result<i64, ZeroError> {
    let g = view(target, use_derivative);
    let r = nudge_rect(g.as_ref(), rect);
    count_in(g.as_ref(), &r)
}

const SPLIT_FRACTIONS: [f64; 6] = [0.461_803_398_874_989_5, 0.538_5, 0.412_7, 0.587_3, 0.37, 0.63];

/// Splits `rect` along its longer side on a line that stays clear of
/// zeros and poles.
fn clear_split(g: &dyn AnalyticTarget, rect: &Rect) -> (Rect, Rect) {
    let mut best: Option<(f64, (Rect, Rect))> = None;
    for frac in SPLIT_FRACTIONS {
        let (lo, hi) = rect.split(frac);
        let (a, b) = if rect.width() >= rect.height() {
            (Complex64::new(lo.sigma_max, rect.t_min), Complex64::new(lo.sigma_max, rect.t_max))
        } else {
            (Complex64::new(rect.sigma_min, lo.t_max), Complex64::new(rect.sigma_max, lo.t_max))
        };
        let scale = rect.width().min(rect.height());
        let reach = 0.02 * scale;
        let near = singularities_near_segment(g, a, b, reach);
        let clearance =
            near.iter().map(|z| crate::geometry::point_segment_distance(*z, a, b)).fold(f64::INFINITY, f64::min);
        if near.is_empty() {
            return (lo, hi);
        }
        if best.as_ref().is_none_or(|(c, _)| clearance > *c) {
            best = Some((clearance, (lo, hi)));
        }
    }
    best.expect("at least one candidate").1
}

fn multiplicity_at(g: &dyn AnalyticTarget, s: Complex64) -> Result<u32, ZeroError> {
    let n = 256;
    let mut prev = g.eval(s + MULTIPLICITY_RADIUS)?;
    let mut total = 0.0;
    for k in 1..=n {
        let p = s + Complex64::from_polar(MULTIPLICITY_RADIUS, 2.0 * PI * k as f64 / n as f64);
        let v = g.eval(p)?;
        total += (v / prev).arg();
        prev = v;
    }
    Ok((total / (2.0 * PI)).round().max(0.0) as u32)
}

fn classify(target: &dyn AnalyticTarget, s: Complex64, of_derivative: bool) -> ZeroKind {
    if of_derivative {
        return ZeroKind::Unknown;
    }
    let pad = 1e-3;
    if let Some(mz) = target.multiplier_zeros((s.re - pad, s.re + pad), (s.im - pad, s.im + pad)) {
        return if mz.iter().any(|z| (z - s).norm() < 1e-6) { ZeroKind::Trivial } else { ZeroKind::Nontrivial };
    }
    if s.im.abs() < 1e-9 {
        ZeroKind::Unknown
    } else if s.re > 0.0 && s.re < 1.0 {
        ZeroKind::Nontrivial
    } else {
        ZeroKind::Unknown
    }
}

/// Polished zero, `|g|` there, and the remaining Newton correction
/// `m |g/g'|` as a bound on its position error.
fn polish(g: &dyn AnalyticTarget, s0: Complex64, m: f64, tol: f64) -> Option<(Complex64, f64, f64)> {
    let mut s = newton(g, s0, m, 100)?;
    // a few more plain steps settle the last bits
    for _ in 0..3 {
        let j = g.jet(s).ok()?;
        if j.value().norm() < tol * 1e-3 || j.d1().norm() == 0.0 {
            break;
        }
        let next = s - j.value() / j.d1() * m;
        if g.eval(next).ok()?.norm() < j.value().norm() {
            s = next;
        } else {
            break;
        }
    }
    let j = g.jet(s).ok()?;
    let position = if j.value().norm() == 0.0 { 0.0 } else { m * (j.value() / j.d1()).norm() };
    Some((s, j.value().norm(), position))
}

struct Search<'a> {
    target: &'a dyn AnalyticTarget,
    g: &'a dyn AnalyticTarget,
    tol: f64,
    of_derivative: bool,
}

impl Search<'_> {
    fn run(&self, rect: Rect, n: i64, out: &mut Vec<Zero>) -> Result<(), ZeroError> {
        if n <= 0 {
            return Ok(());
        }
        let diam = Complex64::new(rect.width(), rect.height()).norm();
        // a cluster is tried as one multiple zero once the cell is small
        if n == 1 || diam < 1e-2 {
            if let Some((s, residual, position)) = polish(self.g, rect.center(), n as f64, self.tol) {
                let slack = 1e-9 * (1.0 + s.norm()) + if n > 1 { 1e-6 } else { 0.0 };
                let multiplicity = multiplicity_at(self.g, s)?.max(1);
                // where the summands are huge |g| cannot reach tol; the position still can
                let converged = residual < self.tol || position < self.tol * (1.0 + s.norm());
                if converged && rect.expanded(slack, slack).contains(s) && multiplicity as i64 >= n {
                    out.push(Zero {
                        s,
                        kind: classify(self.target, s, self.of_derivative),
                        multiplicity,
                        residual,
                        of_derivative: self.of_derivative,
                    });
                    return Ok(());
                }
            }
            if diam < CELL_FLOOR {
                return Err(ZeroError::NonConvergence { s: rect.center() });
            }
        }
        let (a, b) = clear_split(self.g, &rect);
        let na = count_in(self.g, &a)?;
        let nb = n - na;
        let (mut left, mut right) = (Vec::new(), Vec::new());
        let (ra, rb) = rayon::join(|| self.run(a, na, &mut left), || self.run(b, nb, &mut right));
        ra?;
        rb?;
        out.extend(left);
        out.extend(right);
        Ok(())
    }
}

/// All zeros of `f` (or `f'`) in `rect`, polished to `|g(s)| < tol` and
/// sorted by `(t, σ)`.
pub fn find_zeros(
    target: &dyn AnalyticTarget,
    rect: &Rect,
    tol: f64,
    use_derivative: bool,
) -> Result<Vec<Zero>, ZeroError> {
    let g = view(target, use_derivative);
    let r = nudge_rect(g.as_ref(), rect);
    let n = count_in(g.as_ref(), &r)?;
    let search = Search { target, g: g.as_ref(), tol, of_derivative: use_derivative };
    let mut out = Vec::new();
    search.run(r, n, &mut out)?;
    if target.real_coefficients() {
        for z in out.iter_mut() {
            if z.s.im.abs() < 1e-10 {
                let on_axis = Complex64::new(z.s.re, 0.0);
                let r = g.eval(on_axis)?.norm();
                if r <= z.residual.max(tol) {
                    z.s = on_axis;
                    z.residual = r;
                }
            }
        }
    }
    // distinct cells can polish onto the same point only for zeros on a split line
    out.sort_by(|a, b| a.s.im.total_cmp(&b.s.im).then(a.s.re.total_cmp(&b.s.re)));
    out.dedup_by(|a, b| (a.s - b.s).norm() < 1e-8);
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimplicityReport {
    pub s: Complex64,
    pub winding: u32,
    /// `|f'(s)|` at a zero of `f`, `|f''(s)|` at a zero of `f'`.
    pub derivative_abs: f64,
    pub simple: bool,
}

#[derive(Debug, Error, Clone, PartialEq)]
#[error("multiplicity anomaly at {s}: winding {winding}, |derivative| {derivative_abs:e}")]
pub struct MultiplicityAnomaly {
    pub s: Complex64,
    pub winding: u32,
    pub derivative_abs: f64,
}

impl SimplicityReport {
    pub fn anomaly(&self) -> Option<MultiplicityAnomaly> {
        (!self.simple).then_some(MultiplicityAnomaly {
            s: self.s,
            winding: self.winding,
            derivative_abs: self.derivative_abs,
        })
    }
}

pub fn simplicity_check(target: &dyn AnalyticTarget, zero: &Zero) -> Result<SimplicityReport, ZeroError> {
    let g = view(target, zero.of_derivative);
    let winding = multiplicity_at(g.as_ref(), zero.s)?;
    let derivative_abs = g.deriv(zero.s)?.norm();
    Ok(SimplicityReport { s: zero.s, winding, derivative_abs, simple: winding == 1 && derivative_abs > 1e-8 })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OrderingEntry {
    pub zero: Complex64,
    pub critical: Complex64,
    /// `Re v - Re s`; positive when the ordering holds.
    pub margin: f64,
    pub holds: bool,
}

/// Checks `Re s < Re v` for each (zero of `f`, paired zero of `f'`).
pub fn ordering_check(pairs: &[(Complex64, Complex64)]) -> Vec<OrderingEntry> {
    pairs
        .iter()
        .map(|&(zero, critical)| {
            let margin = critical.re - zero.re;
            OrderingEntry { zero, critical, margin, holds: margin > 0.0 }
        })
        .collect()
}
