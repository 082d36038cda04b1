//! Concrete analytic targets: Riemann zeta, Dirichlet L-functions, eta,
//! finite Dirichlet polynomials and polynomials in `s`.

mod character;
mod hurwitz;
mod lfunc;
mod polynomial;
mod zeta;

pub use character::DirichletCharacter;
pub use hurwitz::{hurwitz_jet, BERNOULLI_EVEN};
pub use lfunc::{dirichlet_l, Eta, PeriodicDirichlet};
pub use polynomial::{DirichletPolynomial, PolynomialInS};
pub use zeta::{riemann_zeta, riemann_zeta_deriv, riemann_zeta_deriv2, zeta_multiplier, EmParams, Zeta};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::jet::Jet;
use crate::series::GeneralDirichletSeries;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ModelError {
    #[error("pole at s = 1")]
    PoleAt1,
    #[error("s = {s} lies outside the validated accuracy window")]
    AccuracyWindowExceeded { s: Complex64 },
    #[error("multiplier overflows at s = {s}")]
    OverflowGuard { s: Complex64 },
    #[error("series is not normalized (a_1 = 1, lambda_1 = 0 required)")]
    NotNormalized,
    #[error("invalid character: {0}")]
    InvalidCharacter(String),
    #[error("non-finite value at s = {s}")]
    NonFinite { s: Complex64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Pole {
    pub s: Complex64,
    pub order: u32,
}

/// A meromorphic function with analytic derivatives, evaluable on a window
/// of the plane.
pub trait AnalyticTarget: Send + Sync {
    fn label(&self) -> String;

    /// Taylor jet at `s`: value and the first derivatives.
    fn jet(&self, s: Complex64) -> Result<Jet, ModelError>;

    fn eval(&self, s: Complex64) -> Result<Complex64, ModelError> {
        Ok(self.jet(s)?.value())
    }

    fn deriv(&self, s: Complex64) -> Result<Complex64, ModelError> {
        Ok(self.jet(s)?.d1())
    }

    fn deriv2(&self, s: Complex64) -> Result<Complex64, ModelError> {
        Ok(self.jet(s)?.d2())
    }

    fn poles(&self) -> Vec<Pole> {
        Vec::new()
    }

    /// Functional-equation multiplier, when one is known.
    fn multiplier(&self, _s: Complex64) -> Option<Result<Complex64, ModelError>> {
        None
    }

    /// Zeros of the multiplier inside `[sigma_min, sigma_max] × [t_min, t_max]`,
    /// or `None` when no multiplier is known.
    fn multiplier_zeros(&self, _sigma: (f64, f64), _t: (f64, f64)) -> Option<Vec<Complex64>> {
        None
    }

    /// Abscissa of absolute convergence of the defining series.
    fn sigma_a(&self) -> f64;

    /// Real coefficients, so that `f(conj s) = conj f(s)`.
    fn real_coefficients(&self) -> bool;

    /// First term beyond the constant: `(λ_2, a_2)`.
    fn leading_term(&self) -> Option<(f64, Complex64)>;

    /// The defining Dirichlet series truncated to `n_terms`, when available.
    fn series(&self, _n_terms: usize) -> Option<GeneralDirichletSeries> {
        None
    }
}

/// The derivative `f'` of a target viewed as a target of its own.
pub struct Derivative<'a>(pub &'a dyn AnalyticTarget);

impl AnalyticTarget for Derivative<'_> {
    fn label(&self) -> String {
        format!("{}'", self.0.label())
    }

    fn jet(&self, s: Complex64) -> Result<Jet, ModelError> {
        Ok(self.0.jet(s)?.derivative())
    }

    fn poles(&self) -> Vec<Pole> {
        self.0.poles().into_iter().map(|p| Pole { s: p.s, order: p.order + 1 }).collect()
    }

    fn sigma_a(&self) -> f64 {
        self.0.sigma_a()
    }

    fn real_coefficients(&self) -> bool {
        self.0.real_coefficients()
    }

    fn leading_term(&self) -> Option<(f64, Complex64)> {
        None
    }
}

/// Target `f` or its derivative, selected at run time.
pub fn view(target: &dyn AnalyticTarget, derivative: bool) -> Box<dyn AnalyticTarget + '_> {
    if derivative {
        Box::new(Derivative(target))
    } else {
        Box::new(Borrowed(target))
    }
}

struct Borrowed<'a>(&'a dyn AnalyticTarget);

impl AnalyticTarget for Borrowed<'_> {
    fn label(&self) -> String {
        self.0.label()
    }
    fn jet(&self, s: Complex64) -> Result<Jet, ModelError> {
        self.0.jet(s)
    }
    fn poles(&self) -> Vec<Pole> {
        self.0.poles()
    }
    fn multiplier(&self, s: Complex64) -> Option<Result<Complex64, ModelError>> {
        self.0.multiplier(s)
    }
    fn multiplier_zeros(&self, sigma: (f64, f64), t: (f64, f64)) -> Option<Vec<Complex64>> {
        self.0.multiplier_zeros(sigma, t)
    }
    fn sigma_a(&self) -> f64 {
        self.0.sigma_a()
    }
    fn real_coefficients(&self) -> bool {
        self.0.real_coefficients()
    }
    fn leading_term(&self) -> Option<(f64, Complex64)> {
        self.0.leading_term()
    }
    fn series(&self, n_terms: usize) -> Option<GeneralDirichletSeries> {
        self.0.series(n_terms)
    }
}

#[cfg(test)]
pub(crate) mod testing {
    use super::*;

    /// Richardson-extrapolated central difference with base step `h`.
    pub fn richardson<F: Fn(Complex64) -> Complex64>(f: F, s: Complex64, h: f64) -> Complex64 {
        let d = |h: f64| (f(s + h) - f(s - h)) / (2.0 * h);
        (d(h / 2.0) * 4.0 - d(h)) / 3.0
    }
}
