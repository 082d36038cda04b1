use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{axis_crossings, noisy_sign};
use crate::lifting::{Color, LiftedCurve};
use crate::models::{AnalyticTarget, ModelError};
use crate::zeros::Zero;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RuleError {
    #[error("no radius down to {radius:e} gives the expected winding")]
    RadiusTooLarge { radius: f64 },
    #[error(transparent)]
    Model(#[from] ModelError),
}

const CIRCLE_SAMPLES: usize = 4096;
const RADIUS_FLOOR: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlternatingReport {
    pub zero: Complex64,
    pub radius: f64,
    pub winding: i64,
    /// Colors met, in order of increasing angle from the positive σ
    /// direction.
    pub sequence: Vec<Color>,
    pub a_count: usize,
    pub b_count: usize,
    /// Color changes along the closed circle.
    pub alternations: usize,
    pub holds: bool,
}

/// Walks a small circle around `zero` and records the colors of the
/// pre-image of ℝ it meets: `a` where `f < 0`, `b` where `f > 0`. The radius
/// is halved until the image winds `multiplicity` times around 0.
pub fn alternating_rule_check(
    target: &dyn AnalyticTarget,
    zero: &Zero,
    radius: f64,
) -> Result<AlternatingReport, RuleError> {
    let m = zero.multiplicity.max(1) as i64;
    let mut r = radius;
    loop {
        let vals: Vec<Complex64> = (0..CIRCLE_SAMPLES)
            .map(|k| {
                let theta = 2.0 * PI * k as f64 / CIRCLE_SAMPLES as f64;
                target.eval(zero.s + Complex64::from_polar(r, theta))
            })
            .collect::<Result<_, _>>()?;
        let total: f64 = (0..CIRCLE_SAMPLES).map(|k| (vals[(k + 1) % CIRCLE_SAMPLES] / vals[k]).arg()).sum();
        let winding = (total / (2.0 * PI)).round() as i64;
        if winding == m {
            let sequence: Vec<Color> = axis_crossings(&vals, true)
                .into_iter()
                .map(|(.., re)| if re < 0.0 { Color::A } else { Color::B })
                .collect();
            let a_count = sequence.iter().filter(|c| **c == Color::A).count();
            let b_count = sequence.len() - a_count;
            let n = sequence.len();
            let alternations = (0..n).filter(|&i| sequence[i] != sequence[(i + 1) % n]).count();
            let expected = m as usize;
            let holds = a_count == expected && b_count == expected && alternations == 2 * expected;
            return Ok(AlternatingReport {
                zero: zero.s,
                radius: r,
                winding,
                sequence,
                a_count,
                b_count,
                alternations,
                holds,
            });
        }
        r *= 0.5;
        if r < RADIUS_FLOOR {
            return Err(RuleError::RadiusTooLarge { radius: r });
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MatchingStatus {
    Holds,
    /// `b` meeting `d` on the component covering `(-∞, 1)` right of the
    /// critical line.
    AllowedException,
    Violation,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatchingFinding {
    pub s: Complex64,
    pub curve: usize,
    pub gamma_color: Color,
    pub upsilon_color: Color,
    /// Angle between the tangent of Γ and the horizontal, in radians.
    pub tangent_residual: f64,
    pub status: MatchingStatus,
}

fn correct_onto(target: &dyn AnalyticTarget, mut s: Complex64, w: Complex64) -> Result<Complex64, ModelError> {
    for _ in 0..20 {
        let j = target.jet(s)?;
        let step = (j.value() - w) / j.d1();
        s -= step;
        if step.norm() < 1e-15 * (1.0 + s.norm()) {
            break;
        }
    }
    Ok(s)
}

/// Intersections of the pre-image of ℝ under `f` with that under `f'`,
/// found as sign changes of `Im f'` along each traced Γ curve and refined
/// by bisection in the path parameter. Each is checked for a horizontal
/// tangent and for the allowed color pairs `b–c`, `a–d`.
pub fn matching_rule_check(
    target: &dyn AnalyticTarget,
    curves: &[LiftedCurve],
) -> Result<Vec<MatchingFinding>, RuleError> {
    let mut out = Vec::new();
    for (ci, curve) in curves.iter().enumerate() {
        let is_k0 = curve.tag.as_deref() == Some("(-inf,1)");
        let derivs: Vec<Complex64> = curve.samples.iter().map(|p| target.deriv(p.s)).collect::<Result<_, _>>()?;
        for i in 0..curve.samples.len().saturating_sub(1) {
            let (d0, d1) = (derivs[i], derivs[i + 1]);
            let (s0, s1) = (noisy_sign(d0.im, d0.norm()), noisy_sign(d1.im, d1.norm()));
            if s0 == 0 || s1 == 0 || s0 == s1 {
                continue;
            }
            let (a, b) = (curve.samples[i], curve.samples[i + 1]);
            let (mut lo, mut hi) = ((a.tau, a.s), (b.tau, b.s));
            let mut s_mid = a.s;
            for _ in 0..60 {
                let tm = 0.5 * (lo.0 + hi.0);
                let guess = lo.1 + (hi.1 - lo.1) * ((tm - lo.0) / (hi.0 - lo.0));
                s_mid = correct_onto(target, guess, curve.path.point(tm))?;
                let d = target.deriv(s_mid)?;
                if (d.im > 0.0) == (s0 > 0) {
                    lo = (tm, s_mid);
                } else {
                    hi = (tm, s_mid);
                }
                if (hi.0 - lo.0).abs() < 1e-15 {
                    break;
                }
            }
            let tm = 0.5 * (lo.0 + hi.0);
            let d = target.deriv(s_mid)?;
            let tangent = curve.path.velocity(tm) / d;
            let ang = tangent.arg().rem_euclid(PI);
            let tangent_residual = ang.min(PI - ang);
            let f = target.eval(s_mid)?;
            let gamma_color = if f.re < 0.0 { Color::A } else { Color::B };
            let upsilon_color = if d.re < 0.0 { Color::C } else { Color::D };
            let status = match (gamma_color, upsilon_color) {
                (Color::B, Color::C) | (Color::A, Color::D) => MatchingStatus::Holds,
                (Color::B, Color::D) if is_k0 && s_mid.re > 0.5 => MatchingStatus::AllowedException,
                _ => MatchingStatus::Violation,
            };
            out.push(MatchingFinding { s: s_mid, curve: ci, gamma_color, upsilon_color, tangent_residual, status });
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use std::f64::consts::LN_2;

    use super::*;
    use crate::geometry::Rect;
    use crate::lifting::{preimage_real_axis, CurveSystem, LiftOptions, RealSeed};
    use crate::models::{DirichletPolynomial, Zeta};
    use crate::zeros::ZeroKind;

    fn zero_at(s: Complex64, multiplicity: u32) -> Zero {
        Zero { s, kind: ZeroKind::Unknown, multiplicity, residual: 0.0, of_derivative: false }
    }

    #[test]
    fn alternating_simple_closed_form() {
        let f = DirichletPolynomial::from_terms("1 + 2^-s", &[(LN_2, Complex64::new(1.0, 0.0))]);
        let z = zero_at(Complex64::new(0.0, PI / LN_2), 1);
        let rep = alternating_rule_check(&f, &z, 0.05).unwrap();
        assert_eq!((rep.a_count, rep.b_count, rep.alternations), (1, 1, 2));
        assert!(rep.holds);
    }

    #[test]
    fn alternating_first_zeta_zero() {
        let z = zero_at(Complex64::new(0.5, 14.134725141734693), 1);
        let rep = alternating_rule_check(&Zeta::default(), &z, 0.05).unwrap();
        assert_eq!(rep.radius, 0.05);
        assert!(rep.holds, "{rep:?}");
    }

    #[test]
    fn alternating_double_zero() {
        let f = DirichletPolynomial::from_terms(
            "(1-2^-s)^2",
            &[(LN_2, Complex64::new(-2.0, 0.0)), (2.0 * LN_2, Complex64::new(1.0, 0.0))],
        );
        let z = zero_at(Complex64::new(0.0, 0.0), 2);
        let rep = alternating_rule_check(&f, &z, 0.1).unwrap();
        assert_eq!(rep.winding, 2);
        assert_eq!((rep.a_count, rep.b_count, rep.alternations), (2, 2, 4));
    }

    #[test]
    fn wrong_multiplicity_shrinks_to_floor() {
        let f = DirichletPolynomial::from_terms("1 + 2^-s", &[(LN_2, Complex64::new(1.0, 0.0))]);
        let z = zero_at(Complex64::new(0.0, PI / LN_2), 2);
        assert!(matches!(alternating_rule_check(&f, &z, 0.05), Err(RuleError::RadiusTooLarge { .. })));
    }

    #[test]
    fn matching_near_first_zeta_zeros() {
        let zeta = Zeta::default();
        let opts = LiftOptions { bounds: Some(Rect::new(-3.0, 12.0, 10.0, 28.0).unwrap()), ..Default::default() };
        let seeds: Vec<RealSeed> = [14.134725141734693, 21.022039638771555, 25.010_857_580_145_69]
            .iter()
            .map(|t| RealSeed::both(Complex64::new(0.5, *t)))
            .collect();
        let curves = preimage_real_axis(&zeta, CurveSystem::Gamma, &seeds, &opts).unwrap();
        let findings = matching_rule_check(&zeta, &curves).unwrap();
        assert!(!findings.is_empty());
        for f in &findings {
            assert_ne!(f.status, MatchingStatus::Violation, "{f:?}");
            assert!(f.tangent_residual < 1e-2);
        }
    }
}
