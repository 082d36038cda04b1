use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::axis_crossings;
use crate::geometry::point_segment_distance;
use crate::models::{AnalyticTarget, ModelError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ProbeError {
    #[error("pole at {s} on the probe segment")]
    PoleOnSegment { s: Complex64 },
    #[error("need at least 2 samples, got {n}")]
    TooFewSamples { n: usize },
    #[error(transparent)]
    Model(#[from] ModelError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CrossingKind {
    /// `z(λ) = f(s(λ))` crosses the real axis.
    Gamma,
    /// `Z(λ) = f'(s(λ))` crosses the real axis.
    GammaPrime,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CrossingEvent {
    pub lambda: f64,
    pub which: CrossingKind,
    /// Sign of the real part at the crossing.
    pub sign: i8,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProbeVerdict {
    /// `σ = 1/2`: the segment is a point.
    Degenerate,
    /// The derivative identity holds and the endpoints are not an
    /// off-line pair of zeros.
    Consistent,
    /// Both endpoints are zeros (an off-line symmetric pair, the excluded
    /// configuration) or the identity fails.
    InconsistentConfiguration,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbeReport {
    pub s1: Complex64,
    pub s2: Complex64,
    pub lambdas: Vec<f64>,
    pub z: Vec<Complex64>,
    #[serde(rename = "Z")]
    pub big_z: Vec<Complex64>,
    /// `max |z'(λ) - (s2 - s1) Z(λ)|` with `z'` from finite differences.
    pub identity_residual: f64,
    /// `identity_residual / max |Z|`.
    pub relative_residual: f64,
    pub crossing_events: Vec<CrossingEvent>,
    pub verdict: ProbeVerdict,
}

const FD_STEP: f64 = 1e-3;
const ENDPOINT_ZERO: f64 = 1e-8;

fn crossings(lambdas: &[f64], vals: &[Complex64], which: CrossingKind) -> Vec<CrossingEvent> {
    axis_crossings(vals, false)
        .into_iter()
        .map(|(i, j, u, re)| CrossingEvent {
            lambda: lambdas[i] + u * (lambdas[j] - lambdas[i]),
            which,
            sign: if re < 0.0 { -1 } else { 1 },
        })
        .collect()
}

/// Samples `f` and `f'` on the segment from `σ + it` to `1 - σ + it`
/// (with `σ ≤ 1/2` after swapping) and checks `z'(λ) = (1 - 2σ) Z(λ)`.
pub fn probe_symmetric_pair(
    target: &dyn AnalyticTarget,
    sigma: f64,
    t: f64,
    n_samples: usize,
) -> Result<ProbeReport, ProbeError> {
    if n_samples < 2 {
        return Err(ProbeError::TooFewSamples { n: n_samples });
    }
    let sigma = if sigma > 0.5 { 1.0 - sigma } else { sigma };
    let s1 = Complex64::new(sigma, t);
    let s2 = Complex64::new(1.0 - sigma, t);
    for p in target.poles() {
        if point_segment_distance(p.s, s1, s2) < 1e-9 {
            return Err(ProbeError::PoleOnSegment { s: p.s });
        }
    }
    let at = |lambda: f64| s1 + (s2 - s1) * lambda;
    if s1 == s2 {
        let z = target.eval(s1)?;
        let big_z = target.deriv(s1)?;
        return Ok(ProbeReport {
            s1,
            s2,
            lambdas: vec![0.0],
            z: vec![z],
            big_z: vec![big_z],
            identity_residual: 0.0,
            relative_residual: 0.0,
            crossing_events: Vec::new(),
            verdict: ProbeVerdict::Degenerate,
        });
    }
    let lambdas: Vec<f64> = (0..n_samples).map(|i| i as f64 / (n_samples - 1) as f64).collect();
    let mut z = Vec::with_capacity(n_samples);
    let mut big_z = Vec::with_capacity(n_samples);
    let mut residual: f64 = 0.0;
    for &l in &lambdas {
        let j = target.jet(at(l))?;
        z.push(j.value());
        big_z.push(j.d1());
        let h = FD_STEP;
        let fd = (target.eval(at(l - 2.0 * h))? - target.eval(at(l + 2.0 * h))?
            + (target.eval(at(l + h))? - target.eval(at(l - h))?) * 8.0)
            / (12.0 * h);
        residual = residual.max((fd - (s2 - s1) * j.d1()).norm());
    }
    let max_z = big_z.iter().map(|v| v.norm()).fold(0.0, f64::max);
    let relative_residual = residual / max_z.max(f64::MIN_POSITIVE);

    let mut crossing_events = crossings(&lambdas, &z, CrossingKind::Gamma);
    crossing_events.extend(crossings(&lambdas, &big_z, CrossingKind::GammaPrime));
    crossing_events.sort_by(|a, b| a.lambda.total_cmp(&b.lambda));

    let endpoint_pair = z[0].norm() < ENDPOINT_ZERO && z[n_samples - 1].norm() < ENDPOINT_ZERO;
    let verdict = if endpoint_pair || relative_residual >= 1e-6 {
        ProbeVerdict::InconsistentConfiguration
    } else {
        ProbeVerdict::Consistent
    };
    Ok(ProbeReport {
        s1,
        s2,
        lambdas,
        z,
        big_z,
        identity_residual: residual,
        relative_residual,
        crossing_events,
        verdict,
    })
}

#[cfg(test)]
mod tests {
    use std::f64::consts::{LN_2, PI};

    use super::*;
    use crate::models::{DirichletPolynomial, Zeta};

    #[test]
    fn critical_line_is_degenerate() {
        let rep = probe_symmetric_pair(&Zeta::default(), 0.5, 14.134725, 1000).unwrap();
        assert_eq!(rep.verdict, ProbeVerdict::Degenerate);
    }

    #[test]
    fn zeta_identity() {
        let rep = probe_symmetric_pair(&Zeta::default(), 0.3, 14.134725, 1000).unwrap();
        assert!(rep.relative_residual < 1e-6, "{}", rep.relative_residual);
        assert_eq!(rep.verdict, ProbeVerdict::Consistent);
        assert_eq!(rep.s2, Complex64::new(0.7, 14.134725));
        // sigma above 1/2 is mirrored
        let m = probe_symmetric_pair(&Zeta::default(), 0.7, 14.134725, 10).unwrap();
        assert!((m.s1 - Complex64::new(0.3, 14.134725)).norm() < 1e-15);
    }

    #[test]
    fn closed_form_on_real_line() {
        // at t = π/ln 2 both f and f' are real along the segment
        let f = DirichletPolynomial::from_terms("1 + 2^-s", &[(LN_2, Complex64::new(1.0, 0.0))]);
        let rep = probe_symmetric_pair(&f, 0.25, PI / LN_2, 1000).unwrap();
        assert!(rep.crossing_events.is_empty());
        assert!(rep.relative_residual < 1e-9);
        for (l, z) in rep.lambdas.iter().zip(&rep.z) {
            let sigma = 0.25 + 0.5 * l;
            assert!((z - Complex64::new(1.0 - 2f64.powf(-sigma), 0.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn zero_pair_is_inconsistent() {
        // (s - a)(s - b) with a, b symmetric about the critical line
        let (a, b) = (Complex64::new(0.2, 3.0), Complex64::new(0.8, 3.0));
        let p = crate::models::PolynomialInS {
            label: "pair".into(),
            coefficients: vec![a * b, -(a + b), Complex64::new(1.0, 0.0)],
        };
        let rep = probe_symmetric_pair(&p, 0.2, 3.0, 200).unwrap();
        assert_eq!(rep.verdict, ProbeVerdict::InconsistentConfiguration);
    }

    #[test]
    fn too_few_samples_and_pole() {
        assert_eq!(
            probe_symmetric_pair(&Zeta::default(), 0.3, 1.0, 1).unwrap_err(),
            ProbeError::TooFewSamples { n: 1 }
        );
        assert!(matches!(probe_symmetric_pair(&Zeta::default(), 0.0, 0.0, 10), Err(ProbeError::PoleOnSegment { .. })));
    }
}
