//! Riemann zeta with its functional-equation multiplier.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::hurwitz::hurwitz_jet;
use super::{AnalyticTarget, ModelError, Pole};
use crate::gamma::ln_gamma;
use crate::jet::Jet;
use crate::series::GeneralDirichletSeries;

/// Below this abscissa the value is taken from the functional equation.
const REFLECT_BELOW: f64 = -2.0;
const SIGMA_MIN: f64 = -12.0;
const T_MAX: f64 = 120.0;
/// `|t|` above which the multiplier is assembled in log space.
const LOG_SPACE_T: f64 = 10.0;

/// Euler–Maclaurin parameters: `n` direct terms (0 selects
/// `max(12, ⌈|t|⌉)`) and `k` Bernoulli corrections.
///
/// Fewer direct terms keep the rounding of the large summands small for
/// `σ < 0`; with `x ≥ |t|` the correction series still converges fast.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EmParams {
    pub n: usize,
    pub k: usize,
}

impl Default for EmParams {
    fn default() -> Self {
        Self { n: 0, k: 12 }
    }
}

impl EmParams {
    pub(crate) fn terms_for(&self, t: f64) -> usize {
        if self.n > 0 {
            self.n
        } else {
            12usize.max(t.abs().ceil() as usize)
        }
    }
}

fn check_window(s: Complex64) -> Result<(), ModelError> {
    if !s.is_finite() {
        return Err(ModelError::NonFinite { s });
    }
    if (s - 1.0).norm() < 1e-12 {
        return Err(ModelError::PoleAt1);
    }
    if s.re < SIGMA_MIN || s.im.abs() > T_MAX {
        return Err(ModelError::AccuracyWindowExceeded { s });
    }
    Ok(())
}

/// `ln sin z` on a jet. Exponential form away from the real axis so that
/// large `|Im z|` does not overflow; the branch is irrelevant to callers.
fn ln_sin(z: Jet) -> Jet {
    let z0 = z.value();
    if z0.im.abs() < 1.0 {
        return z.sin().ln();
    }
    let i = Complex64::i();
    let (value, cot) = if z0.im > 0.0 {
        let e = (2.0 * i * z0).exp();
        (-i * z0 + (i / 2.0).ln() + (1.0 - e).ln(), i * (e + 1.0) / (e - 1.0))
    } else {
        let e = (-2.0 * i * z0).exp();
        (i * z0 - (2.0 * i).ln() + (1.0 - e).ln(), i * (1.0 + e) / (1.0 - e))
    };
    let c2 = cot * cot;
    let one = Complex64::new(1.0, 0.0);
    z.compose([value, cot, -(one + c2), cot * (one + c2) * 2.0, -(c2 * 6.0 + 2.0) * (one + c2)])
}

/// Jet of `M(s) = 2^s π^{s-1} sin(πs/2) Γ(1-s)`.
fn multiplier_jet(s: Complex64) -> Result<Jet, ModelError> {
    let var = Jet::variable(s);
    let one = Jet::real(1.0);
    let ln2 = 2f64.ln();
    let lnpi = PI.ln();
    if s.im.abs() <= LOG_SPACE_T {
        // product form; for σ > 1/2 use Γ(1-s) = π / (sin(πs) Γ(s)) to stay off Γ's poles
        let pow = (var * ln2 + (var - Complex64::new(1.0, 0.0)) * lnpi).exp();
        let m = if s.re <= 0.5 {
            pow * (var * (PI / 2.0)).sin() * ln_gamma(one - var).exp()
        } else {
            // M(s) = (2π)^s / (2 cos(πs/2) Γ(s))
            let num = (var * (2.0 * PI).ln()).exp();
            let den = (var * (PI / 2.0)).cos() * ln_gamma(var).exp() * 2.0;
            num / den
        };
        return if m.is_finite() { Ok(m) } else { Err(ModelError::OverflowGuard { s }) };
    }
    let ln_m = if s.re <= 0.5 {
        var * ln2 + (var - Complex64::new(1.0, 0.0)) * lnpi + ln_sin(var * (PI / 2.0)) + ln_gamma(one - var)
    } else {
        let cos_arg = var * (PI / 2.0) + Complex64::new(PI / 2.0, 0.0);
        var * (2.0 * PI).ln() - Jet::real(ln2) - ln_sin(cos_arg) - ln_gamma(var)
    };
    if ln_m.value().re > 700.0 || !ln_m.is_finite() {
        return Err(ModelError::OverflowGuard { s });
    }
    Ok(ln_m.exp())
}

/// Jet of `ζ` at `s` (window already checked).
fn zeta_jet(s: Complex64, params: EmParams) -> Result<Jet, ModelError> {
    if s.re >= REFLECT_BELOW {
        let n = params.terms_for(s.im);
        return Ok(hurwitz_jet(s, 1.0, n, params.k, false));
    }
    let w = Complex64::new(1.0, 0.0) - s;
    let n = params.terms_for(w.im);
    let reflected = hurwitz_jet(w, 1.0, n, params.k, false).reflected();
    Ok(multiplier_jet(s)? * reflected)
}

/// `ζ(s)` by Euler–Maclaurin; the functional equation covers `σ < -2`.
pub fn riemann_zeta(s: Complex64, params: EmParams) -> Result<Complex64, ModelError> {
    check_window(s)?;
    Ok(zeta_jet(s, params)?.value())
}

pub fn riemann_zeta_deriv(s: Complex64, params: EmParams) -> Result<Complex64, ModelError> {
    check_window(s)?;
    Ok(zeta_jet(s, params)?.d1())
}

pub fn riemann_zeta_deriv2(s: Complex64, params: EmParams) -> Result<Complex64, ModelError> {
    check_window(s)?;
    Ok(zeta_jet(s, params)?.d2())
}

/// `M(s)` with `ζ(s) = M(s) ζ(1 - s)`.
pub fn zeta_multiplier(s: Complex64) -> Result<Complex64, ModelError> {
    if !s.is_finite() {
        return Err(ModelError::NonFinite { s });
    }
    // exact zeros of sin(πs/2) at negative even integers
    if s.im == 0.0 && s.re < 0.0 && s.re.fract() == 0.0 && (s.re as i64) % 2 == 0 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    Ok(multiplier_jet(s)?.value())
}

/// The Riemann zeta function as a target.
#[derive(Debug, Clone, Copy, Default)]
pub struct Zeta {
    pub params: EmParams,
}

impl AnalyticTarget for Zeta {
    fn label(&self) -> String {
        "zeta".into()
    }

    fn jet(&self, s: Complex64) -> Result<Jet, ModelError> {
        check_window(s)?;
        let j = zeta_jet(s, self.params)?;
        if j.is_finite() {
            Ok(j)
        } else {
            Err(ModelError::NonFinite { s })
        }
    }

    fn poles(&self) -> Vec<Pole> {
        vec![Pole { s: Complex64::new(1.0, 0.0), order: 1 }]
    }

    fn multiplier(&self, s: Complex64) -> Option<Result<Complex64, ModelError>> {
        Some(zeta_multiplier(s))
    }

    fn multiplier_zeros(&self, sigma: (f64, f64), t: (f64, f64)) -> Option<Vec<Complex64>> {
        if t.0 > 0.0 || t.1 < 0.0 {
            return Some(Vec::new());
        }
        let mut out = Vec::new();
        let mut x = -2.0;
        while x >= sigma.0 {
            if x <= sigma.1 {
                out.push(Complex64::new(x, 0.0));
            }
            x -= 2.0;
        }
        Some(out)
    }

    fn sigma_a(&self) -> f64 {
        1.0
    }

    fn real_coefficients(&self) -> bool {
        true
    }

    fn leading_term(&self) -> Option<(f64, Complex64)> {
        Some((2f64.ln(), Complex64::new(1.0, 0.0)))
    }

    fn series(&self, n_terms: usize) -> Option<GeneralDirichletSeries> {
        Some(GeneralDirichletSeries::zeta(n_terms))
    }
}
