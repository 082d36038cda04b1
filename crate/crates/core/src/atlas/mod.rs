//! Global geometry of a target over a window: the strips bounded by the
//! pre-images of `(1, +∞)`, their zeros, merge trees and fundamental
//! domains, the color rules and the symmetric-pair probe.

mod delta;
mod domains;
mod probe;
mod rules;
mod tree;

pub use delta::{delta_components, DeltaComponent};
pub use domains::{fundamental_domains, FundamentalDomain, Slit, SlitEnd};
pub use probe::{probe_symmetric_pair, CrossingEvent, CrossingKind, ProbeError, ProbeReport, ProbeVerdict};
pub use rules::{
    alternating_rule_check, matching_rule_check, AlternatingReport, MatchingFinding, MatchingStatus, RuleError,
};
pub use tree::{merge_tree, MergeNode, MergeTree};

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::{upward_ray_crossings, Edge, Rect};
use crate::lifting::{
    gamma_prime_seeds, lift, preimage_real_axis, Color, CurveSystem, LiftError, LiftOptions, LiftedCurve, PlanePath,
    RealSeed, Termination,
};
use crate::models::{AnalyticTarget, Derivative, ModelError};
use crate::zeros::{find_zeros, Zero, ZeroError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AtlasError {
    #[error("window too small: height {height} is below one period {period} of the leading term")]
    WindowTooSmall { height: f64, period: f64 },
    #[error("target is not normalized (needs a leading term a_2 e^(-λ_2 s))")]
    NotNormalized,
    #[error(transparent)]
    Lift(#[from] LiftError),
    #[error(transparent)]
    Zeros(#[from] ZeroError),
    #[error(transparent)]
    Model(#[from] ModelError),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AtlasOptions {
    pub lift: LiftOptions,
    pub zero_tol: f64,
    /// Abscissa of the Γ' seeds.
    pub sigma_seed: f64,
    /// Also trace the pre-image of ℝ under `f'` (plots only).
    pub trace_upsilon: bool,
}

impl Default for AtlasOptions {
    fn default() -> Self {
        Self { lift: LiftOptions::default(), zero_tol: 1e-10, sigma_seed: 25.0, trace_upsilon: true }
    }
}

/// A traced component `Γ'_k` covering `(1, +∞)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundaryCurve {
    pub k: i64,
    pub curve: LiftedCurve,
    /// Leaves through the left window edge (or ends at a pole).
    pub reaches_left: bool,
    /// Stays within the window's `t` range.
    pub within_window: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Strip {
    pub k: i64,
    /// Index into `StripAtlas::boundaries` of `Γ'_k`.
    pub lower: Option<usize>,
    /// Index into `StripAtlas::boundaries` of `Γ'_{k+1}`.
    pub upper: Option<usize>,
    pub zeros: Vec<Zero>,
    pub derivative_zeros: Vec<Zero>,
    pub j_k: u32,
    pub pole_strip: bool,
    /// Both boundaries are traced across the window without leaving its `t`
    /// range, and the strip holds no pole.
    pub complete: bool,
    pub merge_tree: Option<MergeTree>,
    pub domains: Vec<FundamentalDomain>,
    pub slits: Vec<Slit>,
    /// Index into `StripAtlas::gamma` of the component covering `(-∞, 1)`.
    pub gamma_k0: Option<usize>,
}

impl Strip {
    pub fn derivative_count_matches(&self) -> bool {
        let m: u32 = self.derivative_zeros.iter().map(|z| z.multiplicity).sum();
        m + 1 == self.j_k
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StripAtlas {
    pub label: String,
    pub window: Rect,
    /// Bounds used for tracing: the window widened to the seeds and by one
    /// period in `t`.
    pub trace_bounds: Rect,
    pub boundaries: Vec<BoundaryCurve>,
    pub strips: Vec<Strip>,
    pub zeros: Vec<Zero>,
    pub derivative_zeros: Vec<Zero>,
    /// Pre-image of ℝ under `f` through the zeros.
    pub gamma: Vec<LiftedCurve>,
    /// Pre-image of ℝ under `f'` through the zeros of `f'`.
    pub upsilon: Vec<LiftedCurve>,
}

impl StripAtlas {
    pub fn strip_of(&self, s: Complex64) -> i64 {
        strip_index(&self.boundaries, s)
    }

    pub fn strip(&self, k: i64) -> Option<&Strip> {
        self.strips.iter().find(|st| st.k == k)
    }
}

/// Sign of `x` with values below `1e-12 * scale` counted as zero.
pub(crate) fn noisy_sign(x: f64, scale: f64) -> i8 {
    if x.abs() <= 1e-12 * scale.max(1e-300) {
        0
    } else if x > 0.0 {
        1
    } else {
        -1
    }
}

/// Real-axis crossings of a sampled complex sequence: pairs of consecutive
/// nonzero-sign samples of `Im` with opposite signs, stepping over samples
/// that sit on the axis. Returns `(i, j, u, re)` with the interpolation
/// fraction `u` between `i` and `j` and the real part at the crossing.
pub(crate) fn axis_crossings(vals: &[Complex64], cyclic: bool) -> Vec<(usize, usize, f64, f64)> {
    let n = vals.len();
    let signs: Vec<i8> = vals.iter().map(|v| noisy_sign(v.im, v.norm())).collect();
    let Some(first) = signs.iter().position(|s| *s != 0) else {
        return Vec::new();
    };
    let steps = if cyclic { n } else { n - 1 - first };
    let mut out = Vec::new();
    let mut last = first;
    for step in 1..=steps {
        let j = (first + step) % n;
        if signs[j] == 0 {
            continue;
        }
        if signs[j] != signs[last] {
            let gap = (j + n - last) % n;
            let (u, re) = if gap == 1 {
                let (p, q) = (vals[last], vals[j]);
                let u = p.im / (p.im - q.im);
                (u, p.re + u * (q.re - p.re))
            } else {
                (0.5, vals[(last + gap / 2) % n].re)
            };
            out.push((last, j, u, re));
        }
        last = j;
    }
    out
}

/// Index of the strip containing `s`: the largest `k` with `s` above
/// `Γ'_k`, where "above" means an even number of crossings of the upward
/// vertical ray with the polyline.
pub fn strip_index(boundaries: &[BoundaryCurve], s: Complex64) -> i64 {
    let mut k_min = i64::MAX;
    let mut best: Option<i64> = None;
    for b in boundaries {
        k_min = k_min.min(b.k);
        let pts = b.curve.points();
        let below = upward_ray_crossings(&pts, s) % 2 == 1;
        if !below && best.is_none_or(|k| b.k > k) {
            best = Some(b.k);
        }
    }
    match best {
        Some(k) => k,
        None if k_min == i64::MAX => 0,
        None => k_min - 1,
    }
}

/// Traces the Γ' components seeded inside `bounds`.
pub fn trace_gamma_prime(
    target: &dyn AnalyticTarget,
    window: &Rect,
    bounds: &Rect,
    opts: &AtlasOptions,
) -> Result<Vec<BoundaryCurve>, AtlasError> {
    let seeds = gamma_prime_seeds(target, (bounds.t_min, bounds.t_max), opts.sigma_seed)?;
    let lift_opts = LiftOptions { bounds: Some(*bounds), ..opts.lift };
    let traced: Vec<Result<BoundaryCurve, AtlasError>> = seeds
        .par_iter()
        .map(|&(k, seed)| {
            let x0 = target.eval(seed)?.re;
            let path = PlanePath::real_interval(x0, lift_opts.escape_bound, 1.0);
            let mut curve = lift(target, &path, seed, &lift_opts)?;
            curve.color = Color::B;
            curve.tag = Some(format!("Gamma'_{k}"));
            let reaches_left = match curve.termination {
                Termination::EscapedWindow { edge: Some(Edge::Left), .. } => true,
                Termination::PoleApproached { .. } => true,
                _ => false,
            };
            let slack = 1e-9 * (1.0 + window.t_max.abs());
            let within_window =
                curve.samples.iter().all(|p| p.s.im >= window.t_min - slack && p.s.im <= window.t_max + slack);
            Ok(BoundaryCurve { k, curve, reaches_left, within_window })
        })
        .collect();
    traced.into_iter().collect()
}

fn period(target: &dyn AnalyticTarget) -> Result<f64, AtlasError> {
    let (lambda2, _) = target.leading_term().ok_or(AtlasError::NotNormalized)?;
    Ok(2.0 * std::f64::consts::PI / lambda2)
}

/// Builds the strip atlas of `target` over `window`.
pub fn build_atlas(target: &dyn AnalyticTarget, window: &Rect, opts: &AtlasOptions) -> Result<StripAtlas, AtlasError> {
    let p = period(target)?;
    if window.height() < p {
        return Err(AtlasError::WindowTooSmall { height: window.height(), period: p });
    }
    let trace_bounds = Rect {
        sigma_min: window.sigma_min,
        sigma_max: window.sigma_max.max(opts.sigma_seed + 1.0),
        t_min: window.t_min - p,
        t_max: window.t_max + p,
    };
    let boundaries = trace_gamma_prime(target, window, &trace_bounds, opts)?;
    let zeros = find_zeros(target, window, opts.zero_tol, false)?;
    let derivative_zeros = find_zeros(target, window, opts.zero_tol, true)?;

    let curve_opts = LiftOptions { bounds: Some(trace_bounds), ..opts.lift };
    let seeds: Vec<RealSeed> = zeros.iter().map(|z| RealSeed::both(z.s)).collect();
    let gamma = preimage_real_axis(target, CurveSystem::Gamma, &seeds, &curve_opts)?;
    let upsilon = if opts.trace_upsilon {
        let d = Derivative(target);
        let seeds: Vec<RealSeed> = derivative_zeros.iter().map(|z| RealSeed::both(z.s)).collect();
        preimage_real_axis(&d, CurveSystem::Upsilon, &seeds, &curve_opts)?
    } else {
        Vec::new()
    };

    let pole_strips: Vec<i64> = target.poles().iter().map(|pl| strip_index(&boundaries, pl.s)).collect();
    let mut ks: Vec<i64> = boundaries.iter().map(|b| b.k).collect();
    ks.extend(zeros.iter().map(|z| strip_index(&boundaries, z.s)));
    ks.sort_unstable();
    ks.dedup();

    // strips reaching into the window: holding zeros, or with a lower
    // boundary passing strictly inside the window's t range
    ks.retain(|&k| {
        zeros.iter().any(|z| strip_index(&boundaries, z.s) == k)
            || boundaries
                .iter()
                .any(|b| b.k == k && b.curve.samples.iter().any(|p| p.s.im > window.t_min && p.s.im < window.t_max))
    });
    let mut strips: Vec<Strip> = ks
        .iter()
        .map(|&k| {
            let lower = boundaries.iter().position(|b| b.k == k);
            let upper = boundaries.iter().position(|b| b.k == k + 1);
            let zs: Vec<Zero> = zeros.iter().filter(|z| strip_index(&boundaries, z.s) == k).copied().collect();
            let ds: Vec<Zero> =
                derivative_zeros.iter().filter(|z| strip_index(&boundaries, z.s) == k).copied().collect();
            let pole_strip = pole_strips.contains(&k);
            let ok = |i: Option<usize>| i.is_some_and(|i| boundaries[i].reaches_left && boundaries[i].within_window);
            let gamma_k0 = gamma
                .iter()
                .position(|c| c.tag.as_deref() == Some("(-inf,1)") && strip_index(&boundaries, c.first()) == k);
            Strip {
                k,
                lower,
                upper,
                j_k: zs.iter().map(|z| z.multiplicity).sum(),
                zeros: zs,
                derivative_zeros: ds,
                pole_strip,
                complete: !pole_strip && ok(lower) && ok(upper),
                merge_tree: None,
                domains: Vec::new(),
                slits: Vec::new(),
                gamma_k0,
            }
        })
        .collect();

    let built: Vec<Result<(Option<MergeTree>, Vec<Slit>, Vec<FundamentalDomain>), AtlasError>> = strips
        .par_iter()
        .map(|st| {
            if !st.complete {
                return Ok((None, Vec::new(), Vec::new()));
            }
            let tree = merge_tree(target, st, &curve_opts)?;
            let (slits, domains) = fundamental_domains(target, st, &boundaries, &curve_opts)?;
            Ok((Some(tree), slits, domains))
        })
        .collect();
    for (st, res) in strips.iter_mut().zip(built) {
        let (tree, slits, domains) = res?;
        st.merge_tree = tree;
        st.slits = slits;
        st.domains = domains;
    }

    Ok(StripAtlas {
        label: target.label(),
        window: *window,
        trace_bounds,
        boundaries,
        strips,
        zeros,
        derivative_zeros,
        gamma,
        upsilon,
    })
}
