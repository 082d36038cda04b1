//! Lifting of plane paths to pre-image curves by predictor–corrector
//! continuation.
//!
//! A path `w(τ)`, `τ ∈ [0, 1]`, is followed from a seed `s` with
//! `f(s) = w(τ₀)`. Each step predicts `s + (w(τ + dτ) - f(s)) / f'(s)` and
//! corrects by Newton onto `f(s) = w(τ + dτ)`. Residuals are relative,
//! `|f(s) - w| / max(1, |w|)`, so paths that run off to large `|w|` keep a
//! meaningful tolerance.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::{Edge, Rect};
use crate::models::{AnalyticTarget, ModelError};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum PlanePath {
    /// `w = e^{iα} (r0 + τ (r1 - r0))`.
    Ray {
        angle: f64,
        r0: f64,
        r1: f64,
    },
    /// `w = r e^{i(θ0 + τ sweep)}`.
    Circle {
        radius: f64,
        theta0: f64,
        sweep: f64,
    },
    Segment {
        w0: Complex64,
        w1: Complex64,
    },
    /// Real interval from `x0` to `x1`, geometric in the distance to
    /// `anchor` (which must lie outside the interval). Suited to intervals
    /// reaching `±∞` or approaching a limit value.
    RealInterval {
        x0: f64,
        x1: f64,
        anchor: f64,
    },
}

impl PlanePath {
    pub fn segment(w0: Complex64, w1: Complex64) -> Self {
        PlanePath::Segment { w0, w1 }
    }

    pub fn real_interval(x0: f64, x1: f64, anchor: f64) -> Self {
        PlanePath::RealInterval { x0, x1, anchor }
    }

    pub fn point(&self, tau: f64) -> Complex64 {
        match *self {
            PlanePath::Ray { angle, r0, r1 } => Complex64::from_polar(r0 + tau * (r1 - r0), angle),
            PlanePath::Circle { radius, theta0, sweep } => Complex64::from_polar(radius, theta0 + tau * sweep),
            PlanePath::Segment { w0, w1 } => w0 + (w1 - w0) * tau,
            PlanePath::RealInterval { x0, x1, anchor } => {
                let sign = (x0 - anchor).signum();
                let (l0, l1) = ((x0 - anchor).abs().ln(), (x1 - anchor).abs().ln());
                Complex64::new(anchor + sign * (l0 + tau * (l1 - l0)).exp(), 0.0)
            }
        }
    }

    pub fn velocity(&self, tau: f64) -> Complex64 {
        match *self {
            PlanePath::Ray { angle, r0, r1 } => Complex64::from_polar(r1 - r0, angle),
            PlanePath::Circle { radius, theta0, sweep } => {
                Complex64::from_polar(radius * sweep, theta0 + tau * sweep + FRAC_PI_2)
            }
            PlanePath::Segment { w0, w1 } => w1 - w0,
            PlanePath::RealInterval { x0, x1, anchor } => {
                let (l0, l1) = ((x0 - anchor).abs().ln(), (x1 - anchor).abs().ln());
                let w = self.point(tau).re - anchor;
                Complex64::new(w * (l1 - l0), 0.0)
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Sample {
    pub tau: f64,
    pub s: Complex64,
    pub residual: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Termination {
    Completed,
    BranchPoint { v: Complex64, fprime_abs: f64 },
    PoleApproached { s: Complex64 },
    EscapedWindow { s: Complex64, edge: Option<Edge> },
    StepUnderflow { tau: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Color {
    /// `f` over the negative reals.
    A,
    /// `f` over the positive reals.
    B,
    /// `f'` over the negative reals.
    C,
    /// `f'` over the positive reals.
    D,
    None,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LiftedCurve {
    pub path: PlanePath,
    pub samples: Vec<Sample>,
    pub termination: Termination,
    pub tag: Option<String>,
    pub color: Color,
}

impl LiftedCurve {
    pub fn points(&self) -> Vec<Complex64> {
        self.samples.iter().map(|p| p.s).collect()
    }

    pub fn first(&self) -> Complex64 {
        self.samples[0].s
    }

    pub fn last(&self) -> Complex64 {
        self.samples.last().expect("curves hold at least one sample").s
    }

    pub fn last_tau(&self) -> f64 {
        self.samples.last().expect("curves hold at least one sample").tau
    }

    pub fn max_residual(&self) -> f64 {
        self.samples.iter().map(|p| p.residual).fold(0.0, f64::max)
    }

    pub fn max_gap(&self) -> f64 {
        self.samples.windows(2).map(|w| (w[1].s - w[0].s).norm()).fold(0.0, f64::max)
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LiftError {
    #[error("seed does not lie on the fiber: relative residual {residual:e}")]
    SeedMismatch { residual: f64 },
    #[error("not a branch point: |f'(v)| = {fprime:e}")]
    NotABranchPoint { fprime: f64 },
    #[error("higher-order branch point: |f''(v)| = {fsecond:e}")]
    HigherOrderBranch { fsecond: f64 },
    #[error("critical point refinement did not converge")]
    CriticalPointNotFound,
    #[error(transparent)]
    Model(#[from] ModelError),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LiftOptions {
    /// Relative residual every accepted sample satisfies.
    pub corrector_tol: f64,
    pub seed_tol: f64,
    /// Largest allowed step in `s`.
    pub max_step: f64,
    pub branch_threshold: f64,
    pub escape_bound: f64,
    pub bounds: Option<Rect>,
    pub dtau_init: f64,
    pub dtau_min: f64,
    pub dtau_max: f64,
    pub max_samples: usize,
    /// Distance from `v` at which fan rays are started.
    pub fan_radius: f64,
}

impl Default for LiftOptions {
    fn default() -> Self {
        Self {
            corrector_tol: 1e-9,
            seed_tol: 1e-8,
            max_step: 0.05,
            branch_threshold: 1e-6,
            escape_bound: 1e12,
            bounds: None,
            dtau_init: 1e-3,
            dtau_min: 1e-12,
            dtau_max: 0.05,
            max_samples: 200_000,
            fan_radius: 1e-3,
        }
    }
}

const NEWTON_MAX: usize = 8;
const NEWTON_HARD: usize = 4;
const EASY_ACCEPTS: usize = 3;

fn rel_residual(f: Complex64, w: Complex64) -> f64 {
    (f - w).norm() / w.norm().max(1.0)
}

enum Correction {
    Converged { s: Complex64, fs: Complex64, dfs: Complex64, iters: usize },
    Failed,
    Model(ModelError),
}

fn correct(target: &dyn AnalyticTarget, mut s: Complex64, w: Complex64, tol: f64) -> Correction {
    for iters in 0..=NEWTON_MAX {
        let j = match target.jet(s) {
            Ok(j) => j,
            Err(e) => return Correction::Model(e),
        };
        let (fs, dfs) = (j.value(), j.d1());
        let r = rel_residual(fs, w);
        if r <= tol * 1e-2 || (r <= tol && iters == NEWTON_MAX) {
            return Correction::Converged { s, fs, dfs, iters };
        }
        if iters == NEWTON_MAX || dfs.norm() == 0.0 {
            break;
        }
        let step = (fs - w) / dfs;
        s -= step;
        // stagnation at rounding level
        if step.norm() <= 4.0 * f64::EPSILON * (1.0 + s.norm()) && r <= tol {
            let j = match target.jet(s) {
                Ok(j) => j,
                Err(e) => return Correction::Model(e),
            };
            return Correction::Converged { s, fs: j.value(), dfs: j.d1(), iters: iters + 1 };
        }
    }
    Correction::Failed
}

fn model_termination(e: &ModelError, s: Complex64) -> Termination {
    match e {
        ModelError::PoleAt1 => Termination::PoleApproached { s },
        _ => Termination::EscapedWindow { s, edge: None },
    }
}

/// Newton on `f'` using `f''` from `s0`.
pub fn refine_critical_point(target: &dyn AnalyticTarget, s0: Complex64) -> Result<Complex64, LiftError> {
    let mut s = s0;
    for _ in 0..60 {
        let j = target.jet(s)?;
        let (d1, d2) = (j.d1(), j.d2());
        if d2.norm() == 0.0 {
            return Err(LiftError::CriticalPointNotFound);
        }
        let step = d1 / d2;
        s -= step;
        if step.norm() <= 1e-15 * (1.0 + s.norm()) {
            return Ok(s);
        }
    }
    let d1 = target.deriv(s)?;
    if d1.norm() < 1e-10 {
        Ok(s)
    } else {
        Err(LiftError::CriticalPointNotFound)
    }
}

/// Lifts `path` on `[0, 1]` from `s_start`.
pub fn lift(
    target: &dyn AnalyticTarget,
    path: &PlanePath,
    s_start: Complex64,
    opts: &LiftOptions,
) -> Result<LiftedCurve, LiftError> {
    lift_range(target, path, 0.0, 1.0, s_start, opts)
}

/// Lifts `path` between `tau0` and `tau1` (either order) from `s_start`.
pub fn lift_range(
    target: &dyn AnalyticTarget,
    path: &PlanePath,
    tau0: f64,
    tau1: f64,
    s_start: Complex64,
    opts: &LiftOptions,
) -> Result<LiftedCurve, LiftError> {
    let w0 = path.point(tau0);
    let f0 = target.eval(s_start)?;
    let r0 = rel_residual(f0, w0);
    if r0 > opts.seed_tol {
        return Err(LiftError::SeedMismatch { residual: r0 });
    }
    let (mut s, mut fs, mut dfs) = match correct(target, s_start, w0, opts.corrector_tol) {
        Correction::Converged { s, fs, dfs, .. } => (s, fs, dfs),
        Correction::Model(e) => return Err(e.into()),
        Correction::Failed => return Err(LiftError::SeedMismatch { residual: r0 }),
    };
    let dir = if tau1 >= tau0 { 1.0 } else { -1.0 };
    let mut tau = tau0;
    let mut samples = vec![Sample { tau, s, residual: rel_residual(fs, w0) }];
    let mut dtau = opts.dtau_init;
    let mut easy = 0usize;

    let finish = |samples: Vec<Sample>, termination: Termination| LiftedCurve {
        path: *path,
        samples,
        termination,
        tag: None,
        color: Color::None,
    };

    if tau0 == tau1 {
        return Ok(finish(samples, Termination::Completed));
    }
    if near_critical(target, s, dfs, opts) {
        return Ok(finish(samples, branch_termination(target, s)));
    }

    loop {
        let remaining = (tau1 - tau) * dir;
        if remaining <= 0.0 {
            break;
        }
        if samples.len() >= opts.max_samples {
            return Ok(finish(samples, Termination::StepUnderflow { tau }));
        }
        let step = dtau.min(remaining);
        let tau_next = if step == remaining { tau1 } else { tau + dir * step };
        let w_next = path.point(tau_next);
        let ds = (w_next - fs) / dfs;
        let accepted = if ds.norm() > opts.max_step {
            None
        } else {
            match correct(target, s + ds, w_next, opts.corrector_tol) {
                Correction::Converged { s: s_new, fs: f_new, dfs: d_new, iters } => {
                    // reject jumps to another sheet of the fiber
                    let drift = (s_new - (s + ds)).norm();
                    if drift > 0.25 * ds.norm() + 1e-12 || (s_new - s).norm() > opts.max_step {
                        None
                    } else {
                        Some((s_new, f_new, d_new, iters))
                    }
                }
                Correction::Failed => None,
                Correction::Model(e) => {
                    // the model refused; step down before concluding
                    if step > opts.dtau_min * 16.0 {
                        None
                    } else {
                        return Ok(finish(samples, model_termination(&e, s + ds)));
                    }
                }
            }
        };
        match accepted {
            None => {
                dtau = step * 0.5;
                easy = 0;
                if dtau < opts.dtau_min {
                    // next to a pole the residual is limited by the resolution of s
                    let near_pole = target.poles().iter().any(|p| (p.s - s).norm() < 1e-3);
                    let termination = if near_pole && fs.norm() > 1e3 {
                        Termination::PoleApproached { s }
                    } else {
                        match near_branch(target, s, opts) {
                            Some(t) => t,
                            None => Termination::StepUnderflow { tau },
                        }
                    };
                    return Ok(finish(samples, termination));
                }
            }
            Some((s_new, f_new, d_new, iters)) => {
                s = s_new;
                fs = f_new;
                dfs = d_new;
                tau = tau_next;
                samples.push(Sample { tau, s, residual: rel_residual(fs, w_next) });
                if let Some(bounds) = &opts.bounds {
                    if !bounds.contains(s) {
                        let edge = bounds.exit_edge(s);
                        return Ok(finish(samples, Termination::EscapedWindow { s, edge }));
                    }
                }
                if fs.norm() > opts.escape_bound && w_next.norm() < 0.5 * opts.escape_bound {
                    return Ok(finish(samples, Termination::PoleApproached { s }));
                }
                if near_critical(target, s, dfs, opts) {
                    return Ok(finish(samples, branch_termination(target, s)));
                }
                if iters > NEWTON_HARD {
                    dtau = step * 0.5;
                    easy = 0;
                } else {
                    easy += 1;
                    if easy >= EASY_ACCEPTS {
                        dtau = (step * 2.0).min(opts.dtau_max);
                        easy = 0;
                    } else {
                        dtau = step.max(dtau.min(step * 2.0));
                    }
                }
            }
        }
    }
    // a lift that ran all the way to a huge |w| next to a known pole ends there
    if fs.norm() >= 0.5 * opts.escape_bound && target.poles().iter().any(|p| (p.s - s).norm() < 1e-3) {
        return Ok(finish(samples, Termination::PoleApproached { s }));
    }
    if let Some(last) = samples.last_mut() {
        polish(target, last, path.point(tau1));
    }
    Ok(finish(samples, Termination::Completed))
}

/// Newton on the end point while `|f - w|` keeps shrinking. Where `|f'|` is
/// tiny the corrector tolerance leaves the position loose; the end point is
/// where a later lift restarts.
fn polish(target: &dyn AnalyticTarget, sample: &mut Sample, w: Complex64) {
    let Ok(mut jet) = target.jet(sample.s) else { return };
    for _ in 0..8 {
        let err = jet.value() - w;
        if err == Complex64::new(0.0, 0.0) || jet.d1().norm() == 0.0 {
            return;
        }
        let s_new = sample.s - err / jet.d1();
        let Ok(j_new) = target.jet(s_new) else { return };
        if (j_new.value() - w).norm() >= err.norm() {
            return;
        }
        sample.s = s_new;
        sample.residual = rel_residual(j_new.value(), w);
        jet = j_new;
    }
}

/// Small `|f'|` signals a branch point only when a critical point is
/// actually close, i.e. the Newton step `f'/f''` towards it is short; far to
/// the right `f'` is tiny everywhere without any critical point nearby.
fn near_critical(target: &dyn AnalyticTarget, s: Complex64, dfs: Complex64, opts: &LiftOptions) -> bool {
    if dfs.norm() >= opts.branch_threshold {
        return false;
    }
    match target.deriv2(s) {
        Ok(d2) => (dfs / d2).norm() < 10.0 * opts.max_step,
        Err(_) => true,
    }
}

fn branch_termination(target: &dyn AnalyticTarget, s: Complex64) -> Termination {
    let v = refine_critical_point(target, s).unwrap_or(s);
    let fprime_abs = target.deriv(v).map(|d| d.norm()).unwrap_or(f64::NAN);
    Termination::BranchPoint { v, fprime_abs }
}

/// A stalled lift next to a critical point of `f` is a branch event.
fn near_branch(target: &dyn AnalyticTarget, s: Complex64, opts: &LiftOptions) -> Option<Termination> {
    let v = refine_critical_point(target, s).ok()?;
    if (v - s).norm() < 10.0 * opts.max_step {
        let fprime_abs = target.deriv(v).ok()?.norm();
        Some(Termination::BranchPoint { v, fprime_abs })
    } else {
        None
    }
}

/// Parameter on `path` closest to `w` (coarse scan then golden refinement).
pub fn closest_tau(path: &PlanePath, w: Complex64) -> f64 {
    let n = 2048;
    let mut best = (f64::INFINITY, 0.0);
    for k in 0..=n {
        let tau = k as f64 / n as f64;
        let d = (path.point(tau) - w).norm();
        if d < best.0 {
            best = (d, tau);
        }
    }
    let (mut lo, mut hi) = ((best.1 - 1.0 / n as f64).max(0.0), (best.1 + 1.0 / n as f64).min(1.0));
    let g = 0.5 * (5f64.sqrt() - 1.0);
    for _ in 0..80 {
        let a = hi - g * (hi - lo);
        let b = lo + g * (hi - lo);
        if (path.point(a) - w).norm() < (path.point(b) - w).norm() {
            hi = b;
        } else {
            lo = a;
        }
    }
    0.5 * (lo + hi)
}

/// Lifts a path passing through the critical value `f(v)` at `tau_v`.
///
/// Near a simple critical point `f(s) ≈ f(v) + ½ f''(v)(s - v)²`, so the
/// fiber over `w(τ_v ± dτ)` consists of two pairs of opposite points; the
/// four rays leave `v` at right angles. Each returned curve joins an
/// incoming ray to the outgoing ray a quarter turn clockwise from it and
/// maps bijectively onto the path. When `tau_v` is an endpoint only the two
/// outgoing arcs exist and are returned separately.
pub fn branch_fan(
    target: &dyn AnalyticTarget,
    v: Complex64,
    path: &PlanePath,
    tau_v: f64,
    opts: &LiftOptions,
) -> Result<Vec<LiftedCurve>, LiftError> {
    let j = target.jet(v)?;
    let d1 = j.d1();
    let d2 = j.d2();
    if d1.norm() >= opts.branch_threshold {
        return Err(LiftError::NotABranchPoint { fprime: d1.norm() });
    }
    if d2.norm() < 1e-8 {
        return Err(LiftError::HigherOrderBranch { fsecond: d2.norm() });
    }
    let fv = j.value();
    let speed = path.velocity(tau_v).norm();
    let dtau = (0.5 * d2.norm() * opts.fan_radius * opts.fan_radius / speed).min(0.25);
    let v_sample = Sample { tau: tau_v, s: v, residual: rel_residual(fv, path.point(tau_v)) };

    let start_pair = |tau: f64| -> Result<[Complex64; 2], LiftError> {
        let w = path.point(tau);
        let r = ((w - fv) * 2.0 / d2).sqrt();
        let mut out = [v + r, v - r];
        for p in out.iter_mut() {
            *p = match correct(target, *p, w, opts.corrector_tol) {
                Correction::Converged { s, .. } => s,
                Correction::Model(e) => return Err(e.into()),
                Correction::Failed => return Err(LiftError::SeedMismatch { residual: f64::NAN }),
            };
        }
        Ok(out)
    };

    let lift_arm = |start: Complex64, from: f64, to: f64| -> Result<LiftedCurve, LiftError> {
        let mut c = lift_range(target, path, from, to, start, opts)?;
        c.samples.insert(0, v_sample);
        Ok(c)
    };

    let has_out = tau_v < 1.0;
    let has_in = tau_v > 0.0;
    let mut outgoing = Vec::new();
    if has_out {
        let t = (tau_v + dtau).min(0.5 * (tau_v + 1.0));
        for p in start_pair(t)? {
            outgoing.push(lift_arm(p, t, 1.0)?);
        }
    }
    let mut incoming = Vec::new();
    if has_in {
        let t = (tau_v - dtau).max(0.5 * tau_v);
        for p in start_pair(t)? {
            incoming.push(lift_arm(p, t, 0.0)?);
        }
    }
    if !has_in || !has_out {
        return Ok(if has_out { outgoing } else { incoming });
    }
    let mut curves = Vec::new();
    for inc in incoming {
        let a_in = (inc.samples[1].s - v).arg();
        // outgoing ray a quarter turn clockwise from the incoming one
        let target_angle = a_in - FRAC_PI_2;
        let out = outgoing
            .iter()
            .min_by(|a, b| {
                let da = angle_distance((a.samples[1].s - v).arg(), target_angle);
                let db = angle_distance((b.samples[1].s - v).arg(), target_angle);
                da.total_cmp(&db)
            })
            .expect("two outgoing arms");
        let mut samples: Vec<Sample> = inc.samples.iter().rev().copied().collect();
        samples.extend(out.samples.iter().skip(1).copied());
        let termination = if inc.termination != Termination::Completed { inc.termination } else { out.termination };
        curves.push(LiftedCurve { path: *path, samples, termination, tag: None, color: Color::None });
    }
    Ok(curves)
}

/// Absolute angular distance in `[0, π]`.
pub fn angle_distance(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(2.0 * PI);
    d.min(2.0 * PI - d)
}

/// Starting point of a pre-image-of-ℝ trace: the seed and which directions
/// along the real axis to follow from `f(seed)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RealSeed {
    pub s: Complex64,
    pub increasing: bool,
    pub decreasing: bool,
}

impl RealSeed {
    pub fn both(s: Complex64) -> Self {
        Self { s, increasing: true, decreasing: true }
    }
}

/// Which pre-image system is traced: `f` (colors a/b) or `f'` (colors c/d).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CurveSystem {
    Gamma,
    Upsilon,
}

fn color_for(system: CurveSystem, negative: bool) -> Color {
    match (system, negative) {
        (CurveSystem::Gamma, true) => Color::A,
        (CurveSystem::Gamma, false) => Color::B,
        (CurveSystem::Upsilon, true) => Color::C,
        (CurveSystem::Upsilon, false) => Color::D,
    }
}

/// Pieces of the real axis from `x0` towards `±∞`, split at 0 and 1 so each
/// piece has one color and a well-conditioned parameterization.
fn real_pieces(x0: f64, increasing: bool, far: f64) -> Vec<PlanePath> {
    let mut out = Vec::new();
    let mut x = x0;
    if increasing {
        if x < 0.0 {
            out.push(PlanePath::segment(Complex64::new(x, 0.0), Complex64::new(0.0, 0.0)));
            x = 0.0;
        }
        if x < 1.0 {
            out.push(PlanePath::segment(Complex64::new(x, 0.0), Complex64::new(1.0, 0.0)));
            x = 1.0;
        }
        if x == 1.0 {
            out.push(PlanePath::real_interval(1.0, far, 0.0));
        } else {
            out.push(PlanePath::real_interval(x, far.max(2.0 * x), 1.0));
        }
    } else {
        if x > 1.0 {
            out.push(PlanePath::segment(Complex64::new(x, 0.0), Complex64::new(1.0, 0.0)));
            x = 1.0;
        }
        if x > 0.0 {
            out.push(PlanePath::segment(Complex64::new(x, 0.0), Complex64::new(0.0, 0.0)));
            x = 0.0;
        }
        let far_neg = (-far).min(2.0 * x);
        if x == 0.0 {
            out.push(PlanePath::real_interval(0.0, far_neg, 1.0));
        } else {
            out.push(PlanePath::real_interval(x, far_neg, 1.0));
        }
    }
    out
}

fn interval_tag(curves: &[LiftedCurve]) -> &'static str {
    // increasing runs end either near w = 1 at the right edge (σ → +∞) or at +∞
    let reaches_one = curves.iter().any(|c| {
        matches!(c.termination, Termination::EscapedWindow { edge: Some(Edge::Right), .. })
            && matches!(c.path, PlanePath::Segment { w1, .. } if w1 == Complex64::new(1.0, 0.0))
    });
    if reaches_one {
        "(-inf,1)"
    } else {
        "R"
    }
}

/// Pre-image of the real axis through each seed, traced until the window,
/// a pole, a branch point or `±escape_bound`. Curves are colored by the sign
/// of the real value they cover. Seeds already lying on a traced curve are
/// skipped.
pub fn preimage_real_axis(
    target: &dyn AnalyticTarget,
    system: CurveSystem,
    seeds: &[RealSeed],
    opts: &LiftOptions,
) -> Result<Vec<LiftedCurve>, LiftError> {
    let mut out: Vec<LiftedCurve> = Vec::new();
    for seed in seeds {
        let on_existing = out.iter().any(|c| crate::geometry::point_polyline_distance(seed.s, &c.points()) < 1e-4);
        if on_existing {
            continue;
        }
        let x0 = target.eval(seed.s)?.re;
        let mut group = Vec::new();
        for (increasing, wanted) in [(false, seed.decreasing), (true, seed.increasing)] {
            if !wanted {
                continue;
            }
            let mut s = seed.s;
            for piece in real_pieces(x0, increasing, opts.escape_bound) {
                let mut c = lift(target, &piece, s, opts)?;
                let mid = piece.point(0.5).re;
                c.color = color_for(system, mid < 0.0);
                let done = c.termination != Termination::Completed;
                s = c.last();
                group.push(c);
                if done {
                    break;
                }
            }
        }
        let tag = if x0 > 1.0 && !seed.decreasing { "(1,+inf)" } else { interval_tag(&group) };
        for c in group.iter_mut() {
            c.tag = Some(tag.to_string());
        }
        out.extend(group);
    }
    Ok(out)
}

/// Seeds on the far right for the components `Γ'_k` covering `(1, +∞)`:
/// `t_k = (2πk + arg a_2)/λ_2` at `σ = sigma_seed`, Newton-corrected in `t`
/// onto `Im f = 0`. Returns `(k, seed)` for every `t_k` in `[t_min, t_max]`.
pub fn gamma_prime_seeds(
    target: &dyn AnalyticTarget,
    t_range: (f64, f64),
    sigma_seed: f64,
) -> Result<Vec<(i64, Complex64)>, LiftError> {
    let Some((lambda2, a2)) = target.leading_term() else {
        return Ok(Vec::new());
    };
    let period = 2.0 * PI / lambda2;
    let offset = a2.arg() / lambda2;
    let k_lo = ((t_range.0 - offset) / period).ceil() as i64;
    let k_hi = ((t_range.1 - offset) / period).floor() as i64;
    let mut out = Vec::new();
    for k in k_lo..=k_hi {
        let mut s = Complex64::new(sigma_seed, k as f64 * period + offset);
        for _ in 0..50 {
            let j = target.jet(s)?;
            // d/dt Im f(σ + it) = Re f'(s)
            let step = j.value().im / j.d1().re;
            s.im -= step;
            if step.abs() < 1e-15 * (1.0 + s.im.abs()) {
                break;
            }
        }
        let f = target.eval(s)?;
        if f.re > 1.0 && f.im.abs() <= 1e-12 * f.re {
            out.push((k, s));
        }
    }
    Ok(out)
}

/// A component of `|f| = r`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CircleComponent {
    pub curves: Vec<LiftedCurve>,
    /// Closed within the window.
    pub bounded: bool,
    /// Turns of the circle covered by a closed component (the number of
    /// zeros inside, counted with multiplicity).
    pub turns: u32,
    /// Indices into the zero list of the zeros that generated the component.
    pub zero_indices: Vec<usize>,
}

impl CircleComponent {
    pub fn points(&self) -> Vec<Complex64> {
        let mut pts = Vec::new();
        for c in &self.curves {
            pts.extend(c.points());
        }
        pts
    }
}

/// Components of the pre-image of the circle `|w| = r` that surround the
/// given zeros. Each zero is joined to the circle by lifting a ray from 0
/// (the first of a few angles that completes), then the circle is lifted
/// turn by turn until it closes or leaves the window, in which case the
/// opposite sense is traced as well. Zeros are attributed to a component by
/// the winding number of its polygon, closed by a chord for truncated ones.
pub fn preimage_circle(
    target: &dyn AnalyticTarget,
    r: f64,
    zeros: &[Complex64],
    opts: &LiftOptions,
) -> Result<Vec<CircleComponent>, LiftError> {
    const MAX_TURNS: u32 = 64;
    const ANGLES: [f64; 5] = [PI, FRAC_PI_2, -FRAC_PI_2, 0.75 * PI, -0.75 * PI];
    let mut comps: Vec<CircleComponent> = Vec::new();
    let mut polygons: Vec<Vec<Complex64>> = Vec::new();
    for (zi, z) in zeros.iter().enumerate() {
        if let Some(k) = polygons.iter().position(|p| crate::geometry::winding_number(p, *z) != 0) {
            comps[k].zero_indices.push(zi);
            continue;
        }
        let mut radial = None;
        for angle in ANGLES {
            let ray = PlanePath::Ray { angle, r0: 0.0, r1: r };
            let c = lift(target, &ray, *z, opts)?;
            if c.termination == Termination::Completed {
                radial = Some((angle, c.last()));
                break;
            }
        }
        let Some((angle, start)) = radial else { continue };
        if let Some(k) = comps.iter().position(|c| crate::geometry::point_polyline_distance(start, &c.points()) < 1e-3)
        {
            comps[k].zero_indices.push(zi);
            continue;
        }
        let mut curves = Vec::new();
        let mut s = start;
        let mut closed_after = None;
        let mut escaped = false;
        for turn in 1..=MAX_TURNS {
            let circle = PlanePath::Circle { radius: r, theta0: angle, sweep: 2.0 * PI };
            let c = lift(target, &circle, s, opts)?;
            let done = c.termination != Termination::Completed;
            s = c.last();
            curves.push(c);
            if done {
                escaped = true;
                break;
            }
            if (s - start).norm() < 1e-6 {
                closed_after = Some(turn);
                break;
            }
        }
        if escaped {
            let mut back_start = start;
            for _ in 0..MAX_TURNS {
                let circle = PlanePath::Circle { radius: r, theta0: angle, sweep: -2.0 * PI };
                let c = lift(target, &circle, back_start, opts)?;
                let done = c.termination != Termination::Completed;
                back_start = c.last();
                curves.insert(0, reverse_curve(c));
                if done {
                    break;
                }
            }
        }
        let comp = CircleComponent {
            bounded: closed_after.is_some(),
            turns: closed_after.unwrap_or(0),
            curves,
            zero_indices: vec![zi],
        };
        polygons.push(comp.points());
        comps.push(comp);
    }
    Ok(comps)
}

/// The same curve traversed in the opposite direction.
pub fn reverse_curve(mut c: LiftedCurve) -> LiftedCurve {
    c.samples.reverse();
    c
}
