use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{AtlasError, BoundaryCurve, Strip};
use crate::geometry::{upward_ray_crossings, winding_number, Edge};
use crate::lifting::{branch_fan, lift, LiftOptions, LiftedCurve, PlanePath, Termination};
use crate::models::AnalyticTarget;
use crate::zeros::Zero;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SlitEnd {
    /// Runs off to the right, where `f → 1`.
    Right,
    /// Continues along the pre-image of `(1, +∞)` to the left edge.
    Left,
    Pole,
    /// Stopped anywhere else.
    Truncated,
}

/// Pre-image through `v` of the segment from `f(v)` to 1, continued along
/// `(1, +∞)` where an arc reaches the value 1 at a finite point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Slit {
    pub v: Complex64,
    pub arcs: Vec<LiftedCurve>,
    pub ends: [SlitEnd; 2],
    /// Points where an arc reaches `f = 1` at finite distance.
    pub unit_points: Vec<Complex64>,
    /// The cut as one polyline, from the end of the first arc through `v`
    /// to the end of the second.
    pub polyline: Vec<Complex64>,
}

impl Slit {
    pub fn spanning(&self) -> bool {
        let left = |e: &SlitEnd| matches!(e, SlitEnd::Left | SlitEnd::Pole);
        (left(&self.ends[0]) && self.ends[1] == SlitEnd::Right)
            || (left(&self.ends[1]) && self.ends[0] == SlitEnd::Right)
    }

    pub fn truncated(&self) -> bool {
        self.ends.contains(&SlitEnd::Truncated)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FundamentalDomain {
    pub index: usize,
    /// Closed boundary polygon (window-truncated at the left edge and at
    /// the right end of the traced boundaries).
    pub boundary: Vec<Complex64>,
    pub contained_zero: Option<Zero>,
    /// Zeros enclosed by `boundary`, with multiplicity.
    pub winding_check: i32,
    pub truncated: bool,
}

fn end_kind(t: &Termination) -> SlitEnd {
    match t {
        Termination::EscapedWindow { edge: Some(Edge::Right), .. } => SlitEnd::Right,
        Termination::EscapedWindow { edge: Some(Edge::Left), .. } => SlitEnd::Left,
        Termination::PoleApproached { .. } => SlitEnd::Pole,
        _ => SlitEnd::Truncated,
    }
}

fn trace_slit(target: &dyn AnalyticTarget, v: Complex64, opts: &LiftOptions) -> Result<Slit, AtlasError> {
    let fv = target.eval(v)?;
    let path = PlanePath::segment(fv, Complex64::new(1.0, 0.0));
    let arcs = branch_fan(target, v, &path, 0.0, opts)?;
    let mut all = Vec::new();
    let mut ends = [SlitEnd::Truncated; 2];
    let mut unit_points = Vec::new();
    let mut halves: Vec<Vec<Complex64>> = Vec::new();
    for (i, arc) in arcs.into_iter().enumerate().take(2) {
        let mut pts = arc.points();
        if arc.termination == Termination::Completed {
            let u = arc.last();
            unit_points.push(u);
            let onward = PlanePath::real_interval(1.0, opts.escape_bound, 0.0);
            let ext = lift(target, &onward, u, opts)?;
            ends[i] = end_kind(&ext.termination);
            pts.extend(ext.points().into_iter().skip(1));
            all.push(arc);
            all.push(ext);
        } else {
            ends[i] = end_kind(&arc.termination);
            all.push(arc);
        }
        halves.push(pts);
    }
    let mut polyline: Vec<Complex64> = halves[0].iter().rev().copied().collect();
    if let Some(second) = halves.get(1) {
        polyline.extend(second.iter().skip(1));
    }
    Ok(Slit { v, arcs: all, ends, unit_points, polyline })
}

/// Left-to-right orientation of a polyline spanning the strip.
fn left_to_right(mut p: Vec<Complex64>) -> Vec<Complex64> {
    if p.first().map(|a| a.re) > p.last().map(|a| a.re) {
        p.reverse();
    }
    p
}

/// Closed polygon between two left-to-right polylines.
fn band(lower: &[Complex64], upper: &[Complex64]) -> Vec<Complex64> {
    let mut poly = lower.to_vec();
    poly.extend(upper.iter().rev());
    poly
}

/// Cuts the strip along the slits of its derivative zeros and attributes
/// zeros to the resulting domains.
///
/// When every slit runs from the left edge to the right end, the slits are
/// ordered by height and each domain is the band between consecutive cuts;
/// otherwise zeros are grouped by their parity signature against all cuts.
pub fn fundamental_domains(
    target: &dyn AnalyticTarget,
    strip: &Strip,
    boundaries: &[BoundaryCurve],
    opts: &LiftOptions,
) -> Result<(Vec<Slit>, Vec<FundamentalDomain>), AtlasError> {
    let mut slits = Vec::new();
    for d in &strip.derivative_zeros {
        slits.push(trace_slit(target, d.s, opts)?);
    }
    let (Some(lo), Some(hi)) = (strip.lower, strip.upper) else {
        return Ok((slits, Vec::new()));
    };
    let lower = left_to_right(boundaries[lo].curve.points());
    let upper = left_to_right(boundaries[hi].curve.points());
    let truncated = slits.iter().any(Slit::truncated);

    let mut domains = Vec::new();
    if slits.iter().all(Slit::spanning) {
        let cuts: Vec<Vec<Complex64>> = slits.iter().map(|s| left_to_right(s.polyline.clone())).collect();
        // order cuts by how many other cuts lie below a point of each
        let mut order: Vec<(usize, usize)> = cuts
            .iter()
            .enumerate()
            .map(|(i, c)| {
                let probe = c[c.len() / 2];
                let below = cuts
                    .iter()
                    .enumerate()
                    .filter(|(j, o)| *j != i && upward_ray_crossings(o, probe).is_multiple_of(2))
                    .count();
                (below, i)
            })
            .collect();
        order.sort_unstable();
        let mut layers = vec![lower];
        layers.extend(order.iter().map(|&(_, i)| cuts[i].clone()));
        layers.push(upper);
        for (index, pair) in layers.windows(2).enumerate() {
            let boundary = band(&pair[0], &pair[1]);
            let inside: Vec<&Zero> = strip.zeros.iter().filter(|z| winding_number(&boundary, z.s) != 0).collect();
            let winding_check = inside.iter().map(|z| z.multiplicity as i32).sum();
            domains.push(FundamentalDomain {
                index,
                boundary,
                contained_zero: (inside.len() == 1).then(|| *inside[0]),
                winding_check,
                truncated,
            });
        }
    } else {
        let cuts: Vec<&Vec<Complex64>> = slits.iter().map(|s| &s.polyline).collect();
        let mut classes: Vec<(Vec<bool>, Vec<Zero>)> = Vec::new();
        for z in &strip.zeros {
            let sig: Vec<bool> = cuts.iter().map(|c| upward_ray_crossings(c, z.s) % 2 == 1).collect();
            match classes.iter_mut().find(|(s, _)| *s == sig) {
                Some((_, zs)) => zs.push(*z),
                None => classes.push((sig, vec![*z])),
            }
        }
        let outline = band(&lower, &upper);
        for (index, (_, zs)) in classes.iter().enumerate() {
            domains.push(FundamentalDomain {
                index,
                boundary: outline.clone(),
                contained_zero: (zs.len() == 1).then(|| zs[0]),
                winding_check: zs.iter().map(|z| z.multiplicity as i32).sum(),
                truncated: true,
            });
        }
        for index in classes.len()..slits.len() + 1 {
            domains.push(FundamentalDomain {
                index,
                boundary: Vec::new(),
                contained_zero: None,
                winding_check: 0,
                truncated: true,
            });
        }
    }
    Ok((slits, domains))
}
