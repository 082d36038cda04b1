//! Series with periodic coefficients `Σ c(n) n^{-s}`: Dirichlet
//! L-functions and the alternating zeta function.

use num_complex::Complex64;

use super::character::DirichletCharacter;
use super::hurwitz::hurwitz_jet;
use super::zeta::EmParams;
use super::{AnalyticTarget, ModelError, Pole};
use crate::jet::Jet;
use crate::series::GeneralDirichletSeries;
use crate::sum::JetSum;

const SIGMA_MIN: f64 = -4.0;
const T_MAX: f64 = 120.0;

/// `Σ c(n) n^{-s}` with `c` periodic mod `q`, evaluated as
/// `q^{-s} Σ_{r=1}^{q} c(r) ζ(s, r/q)`.
#[derive(Debug, Clone)]
pub struct PeriodicDirichlet {
    pub label: String,
    /// `c(1), ..., c(q)`.
    pub weights: Vec<Complex64>,
    pub params: EmParams,
}

impl PeriodicDirichlet {
    pub fn new(label: impl Into<String>, weights: Vec<Complex64>) -> Self {
        Self { label: label.into(), weights, params: EmParams::default() }
    }

    pub fn from_character(chi: &DirichletCharacter) -> Self {
        let weights = (1..=chi.modulus).map(|n| chi.value(n)).collect();
        Self::new(format!("L(s, chi_{}_{})", chi.modulus, chi.index), weights)
    }

    fn modulus(&self) -> usize {
        self.weights.len()
    }

    fn pole_residue(&self) -> Complex64 {
        self.weights.iter().sum::<Complex64>() / self.modulus() as f64
    }

    fn has_pole(&self) -> bool {
        self.pole_residue().norm() > 1e-14
    }
}

impl AnalyticTarget for PeriodicDirichlet {
    fn label(&self) -> String {
        self.label.clone()
    }

    fn jet(&self, s: Complex64) -> Result<Jet, ModelError> {
        if !s.is_finite() {
            return Err(ModelError::NonFinite { s });
        }
        let pole = self.has_pole();
        if pole && (s - 1.0).norm() < 1e-12 {
            return Err(ModelError::PoleAt1);
        }
        if s.re < SIGMA_MIN || s.im.abs() > T_MAX {
            return Err(ModelError::AccuracyWindowExceeded { s });
        }
        let q = self.modulus() as f64;
        // left of the line the direct terms grow like j^{-σ}; fewer of them keep
        // the cancellation between residue classes small
        let n = if s.re < 0.0 && self.params.n == 0 {
            4usize.max(s.im.abs().ceil() as usize)
        } else {
            self.params.terms_for(s.im)
        };
        let mut acc = JetSum::new();
        for (r, c) in self.weights.iter().enumerate() {
            if c.norm() == 0.0 {
                continue;
            }
            let a = (r + 1) as f64 / q;
            acc.add(&hurwitz_jet(s, a, n, self.params.k, true).scale(*c));
        }
        let mut sum = acc.total();
        if pole {
            // Σ c(r) · 1/(s-1)
            let residue = self.weights.iter().sum::<Complex64>();
            sum += (Jet::variable(s) - Complex64::new(1.0, 0.0)).recip().scale(residue);
        }
        let j = Jet::scaled_power(Complex64::new(1.0, 0.0), q.ln(), s) * sum;
        if j.is_finite() {
            Ok(j)
        } else {
            Err(ModelError::NonFinite { s })
        }
    }

    fn poles(&self) -> Vec<Pole> {
        if self.has_pole() {
            vec![Pole { s: Complex64::new(1.0, 0.0), order: 1 }]
        } else {
            Vec::new()
        }
    }

    fn sigma_a(&self) -> f64 {
        1.0
    }

    fn real_coefficients(&self) -> bool {
        self.weights.iter().all(|w| w.im == 0.0)
    }

    fn leading_term(&self) -> Option<(f64, Complex64)> {
        let q = self.modulus();
        (2..=q + 1)
            .map(|n| (n, self.weights[(n - 1) % q]))
            .find(|(_, c)| c.norm() > 0.0)
            .map(|(n, c)| ((n as f64).ln(), c))
    }

    fn series(&self, n_terms: usize) -> Option<GeneralDirichletSeries> {
        let q = self.modulus();
        let coeffs = (1..=n_terms.max(1)).map(|n| self.weights[(n - 1) % q]).collect();
        GeneralDirichletSeries::ordinary(self.label.clone(), coeffs).ok()
    }
}

/// `L(s, χ)`.
pub fn dirichlet_l(s: Complex64, chi: &DirichletCharacter) -> Result<Complex64, ModelError> {
    PeriodicDirichlet::from_character(chi).eval(s)
}

/// `η(s) = Σ (-1)^{n+1} n^{-s}`, entire.
pub struct Eta(PeriodicDirichlet);

impl Default for Eta {
    fn default() -> Self {
        Self(PeriodicDirichlet::new("eta", vec![Complex64::new(1.0, 0.0), Complex64::new(-1.0, 0.0)]))
    }
}

impl AnalyticTarget for Eta {
    fn label(&self) -> String {
        self.0.label()
    }
    fn jet(&self, s: Complex64) -> Result<Jet, ModelError> {
        self.0.jet(s)
    }
    fn sigma_a(&self) -> f64 {
        1.0
    }
    fn real_coefficients(&self) -> bool {
        true
    }
    fn leading_term(&self) -> Option<(f64, Complex64)> {
        self.0.leading_term()
    }
    fn series(&self, n_terms: usize) -> Option<GeneralDirichletSeries> {
        Some(GeneralDirichletSeries::eta(n_terms))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::testing::richardson;
    use crate::models::{riemann_zeta, Zeta};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    // mpmath oracle values (tests/oracle/oracle.py)
    #[test]
    fn chi4_special_values() {
        let chi = DirichletCharacter::new(4, 1).unwrap();
        let catalan = dirichlet_l(c(2.0, 0.0), &chi).unwrap();
        assert!((catalan.re - 0.915_965_594_177_219).abs() < 1e-12);
        let at_one = dirichlet_l(c(1.0, 0.0), &chi).unwrap();
        assert!((at_one.re - std::f64::consts::FRAC_PI_4).abs() < 1e-12);
    }

    #[test]
    fn principal_mod_one_is_zeta() {
        let chi = DirichletCharacter::principal(1);
        for &s in &[c(2.0, 0.0), c(0.5, 14.0), c(-2.5, 3.0), c(0.3, -77.0)] {
            let l = dirichlet_l(s, &chi).unwrap();
            let z = riemann_zeta(s, EmParams::default()).unwrap();
            assert!((l - z).norm() < 1e-10);
        }
    }

    #[test]
    fn principal_pole_and_nonprincipal_regular() {
        let chi0 = DirichletCharacter::principal(4);
        assert_eq!(dirichlet_l(c(1.0, 0.0), &chi0), Err(ModelError::PoleAt1));
        // L(s, χ_0 mod 4) = (1 - 2^{-s}) ζ(s)
        let s = c(0.5, 10.0);
        let z = riemann_zeta(s, EmParams::default()).unwrap();
        let expected = (1.0 - c(2.0, 0.0).powc(-s)) * z;
        assert!((dirichlet_l(s, &chi0).unwrap() - expected).norm() < 1e-11);
    }

    #[test]
    fn eta_values() {
        let eta = Eta::default();
        // mpmath: eta(2) = π²/12
        assert!((eta.eval(c(2.0, 0.0)).unwrap().re - 0.822_467_033_424_113_2).abs() < 1e-12);
        assert!((eta.eval(c(1.0, 0.0)).unwrap().re - 2f64.ln()).abs() < 1e-12);
        let s = c(0.5, 14.134_725_141_734_695);
        assert!(eta.eval(s).unwrap().norm() < 1e-9);
        let z = Zeta::default();
        let s = c(-1.5, 4.0);
        let expected = (1.0 - c(2.0, 0.0).powc(c(1.0, 0.0) - s)) * z.eval(s).unwrap();
        assert!((eta.eval(s).unwrap() - expected).norm() < 1e-10);
    }

    #[test]
    fn derivative_consistency() {
        let chi = DirichletCharacter::new(5, 1).unwrap();
        let l = PeriodicDirichlet::from_character(&chi);
        for &s in &[c(0.5, 6.0), c(1.0, 0.0), c(-2.0, 11.0)] {
            let fd = richardson(|u| l.eval(u).unwrap(), s, 1e-5);
            let d = l.deriv(s).unwrap();
            assert!((d - fd).norm() < 1e-7 * (1.0 + d.norm()));
        }
    }

    #[test]
    fn leading_term_skips_zero_weights() {
        let chi = DirichletCharacter::new(4, 1).unwrap();
        let (lambda, a) = PeriodicDirichlet::from_character(&chi).leading_term().unwrap();
        assert!((lambda - 3f64.ln()).abs() < 1e-15);
        assert_eq!(a, c(-1.0, 0.0));
    }
}
