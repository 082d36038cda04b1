use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{strip_index, AtlasError, BoundaryCurve};
use crate::geometry::{Edge, Rect};
use crate::lifting::{lift, preimage_circle, CircleComponent, LiftOptions, LiftedCurve, PlanePath, Termination};
use crate::models::AnalyticTarget;
use crate::zeros::Zero;

/// A component of `|f| = 1` with the zeros it surrounds.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DeltaComponent {
    pub component: CircleComponent,
    pub zeros: Vec<Complex64>,
    /// Strip holding every point of the component, if they agree.
    pub strip: Option<i64>,
    /// Lift of `(0, 1)` from a contained zero that runs off to the right.
    pub gamma_k0: Option<LiftedCurve>,
    /// `|f - 1|` where `gamma_k0` leaves the window.
    pub exit_gap: Option<f64>,
    /// Window edges crossed by a truncated component.
    pub exit_edges: Vec<Edge>,
}

impl DeltaComponent {
    pub fn unbounded(&self) -> bool {
        !self.component.bounded
    }

    /// Truncated with both ends leaving through the right edge, where the
    /// unbounded components of the unit-disc pre-image run off.
    pub fn exits_right_twice(&self) -> bool {
        self.exit_edges.len() == 2 && self.exit_edges.iter().all(|e| *e == Edge::Right)
    }
}

/// Components of the pre-image of the unit circle around the zeros; for
/// each window-unbounded one, the pre-image of `(0, 1)` from its zeros is
/// lifted towards 1 and must leave through the right edge.
pub fn delta_components(
    target: &dyn AnalyticTarget,
    window: &Rect,
    zeros: &[Zero],
    boundaries: &[BoundaryCurve],
    opts: &LiftOptions,
) -> Result<Vec<DeltaComponent>, AtlasError> {
    let lift_opts = LiftOptions { bounds: Some(*window), ..*opts };
    let positions: Vec<Complex64> = zeros.iter().map(|z| z.s).collect();
    let comps = preimage_circle(target, 1.0, &positions, &lift_opts)?;
    let mut out = Vec::new();
    for component in comps {
        let pts = component.points();
        let mut ks: Vec<i64> = pts.iter().map(|p| strip_index(boundaries, *p)).collect();
        ks.sort_unstable();
        ks.dedup();
        let strip = (ks.len() == 1).then(|| ks[0]);
        let zs: Vec<Complex64> = component.zero_indices.iter().map(|&i| positions[i]).collect();
        let mut gamma_k0 = None;
        let mut exit_gap = None;
        if !component.bounded {
            let path = PlanePath::segment(Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0));
            for z in &zs {
                let c = lift(target, &path, *z, &lift_opts)?;
                if let Termination::EscapedWindow { s, edge: Some(Edge::Right) } = c.termination {
                    exit_gap = Some((target.eval(s)? - 1.0).norm());
                    gamma_k0 = Some(c);
                    break;
                }
            }
        }
        let exit_edges = component
            .curves
            .iter()
            .filter_map(|c| match c.termination {
                Termination::EscapedWindow { edge: Some(e), .. } => Some(e),
                _ => None,
            })
            .collect();
        out.push(DeltaComponent { component, zeros: zs, strip, gamma_k0, exit_gap, exit_edges });
    }
    Ok(out)
}
