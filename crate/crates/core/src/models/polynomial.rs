//! Entire targets: finite Dirichlet polynomials and polynomials in `s`.

use num_complex::Complex64;

use super::{AnalyticTarget, ModelError};
use crate::jet::Jet;
use crate::series::GeneralDirichletSeries;
use crate::sum::JetSum;

/// `Σ_{n≤N} a_n e^{-λ_n s}` summed directly.
#[derive(Debug, Clone)]
pub struct DirichletPolynomial {
    series: GeneralDirichletSeries,
}

impl DirichletPolynomial {
    pub fn new(series: GeneralDirichletSeries) -> Result<Self, ModelError> {
        if !series.is_normalized() {
            return Err(ModelError::NotNormalized);
        }
        Ok(Self { series })
    }

    /// `1 + Σ_k c_k e^{-μ_k s}` from `(μ_k, c_k)` pairs.
    pub fn from_terms(label: &str, terms: &[(f64, Complex64)]) -> Self {
        let mut lambdas = vec![0.0];
        let mut coeffs = vec![Complex64::new(1.0, 0.0)];
        for (l, c) in terms {
            lambdas.push(*l);
            coeffs.push(*c);
        }
        let series = GeneralDirichletSeries::new(label, lambdas, coeffs).expect("well-formed terms");
        Self::new(series).expect("normalized by construction")
    }

    pub fn series_ref(&self) -> &GeneralDirichletSeries {
        &self.series
    }
}

impl AnalyticTarget for DirichletPolynomial {
    fn label(&self) -> String {
        self.series.label.clone()
    }

    fn jet(&self, s: Complex64) -> Result<Jet, ModelError> {
        let mut acc = JetSum::new();
        for (l, a) in self.series.lambdas().iter().zip(self.series.coefficients()) {
            if *l == 0.0 {
                acc.add(&Jet::constant(*a));
            } else {
                // e^{-λ s} = x^{-s} with ln x = λ
                acc.add(&Jet::scaled_power(*a, *l, s));
            }
        }
        let j = acc.total();
        if j.is_finite() {
            Ok(j)
        } else {
            Err(ModelError::NonFinite { s })
        }
    }

    fn sigma_a(&self) -> f64 {
        f64::NEG_INFINITY
    }

    fn real_coefficients(&self) -> bool {
        self.series.coefficients().iter().all(|a| a.im == 0.0)
    }

    fn leading_term(&self) -> Option<(f64, Complex64)> {
        self.series
            .lambdas()
            .iter()
            .zip(self.series.coefficients())
            .skip(1)
            .find(|(_, a)| a.norm() > 0.0)
            .map(|(l, a)| (*l, *a))
    }

    fn series(&self, _n_terms: usize) -> Option<GeneralDirichletSeries> {
        Some(self.series.clone())
    }
}

/// `Σ_k c_k s^k`.
#[derive(Debug, Clone)]
pub struct PolynomialInS {
    pub label: String,
    pub coefficients: Vec<Complex64>,
}

impl PolynomialInS {
    /// `1 + (s - v)^2`, a model with a simple critical point at `v`.
    pub fn quadratic_model(v: Complex64) -> Self {
        let one = Complex64::new(1.0, 0.0);
        Self { label: format!("1 + (s - ({v}))^2"), coefficients: vec![one + v * v, -v * 2.0, one] }
    }
}

impl AnalyticTarget for PolynomialInS {
    fn label(&self) -> String {
        self.label.clone()
    }

    fn jet(&self, s: Complex64) -> Result<Jet, ModelError> {
        let var = Jet::variable(s);
        let mut out = Jet::real(0.0);
        for c in self.coefficients.iter().rev() {
            out = out * var + *c;
        }
        Ok(out)
    }

    fn sigma_a(&self) -> f64 {
        f64::NEG_INFINITY
    }

    fn real_coefficients(&self) -> bool {
        self.coefficients.iter().all(|a| a.im == 0.0)
    }

    fn leading_term(&self) -> Option<(f64, Complex64)> {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::eval_partial;
    use std::f64::consts::{LN_2, PI};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn one_plus_two() -> DirichletPolynomial {
        DirichletPolynomial::from_terms("1 + 2^-s", &[(LN_2, c(1.0, 0.0))])
    }

    #[test]
    fn closed_form_values() {
        let f = one_plus_two();
        assert_eq!(f.eval(c(0.0, 0.0)).unwrap(), c(2.0, 0.0));
        assert!((f.deriv(c(0.0, 0.0)).unwrap() + LN_2).norm() < 1e-15);
        let zero = c(0.0, PI / LN_2);
        assert!((zero.im - 4.532_360_141_827_194).abs() < 1e-14);
        assert!(f.eval(zero).unwrap().norm() < 1e-15);
    }

    #[test]
    fn agrees_with_series_core() {
        let f = one_plus_two();
        for k in 0..20 {
            let s = c(-2.0 + 0.3 * k as f64, -9.0 + k as f64);
            let a = f.eval(s).unwrap();
            let b = eval_partial(f.series_ref(), s, 2);
            assert!((a - b).norm() < 1e-13);
        }
    }

    #[test]
    fn rejects_unnormalized() {
        let s = GeneralDirichletSeries::new("x", vec![0.0, 1.0], vec![c(2.0, 0.0), c(1.0, 0.0)]).unwrap();
        assert!(matches!(DirichletPolynomial::new(s), Err(ModelError::NotNormalized)));
    }

    #[test]
    fn quadratic_model_has_critical_point() {
        let v = c(0.3, -1.0);
        let f = PolynomialInS::quadratic_model(v);
        assert!((f.eval(v).unwrap() - 1.0).norm() < 1e-15);
        assert!(f.deriv(v).unwrap().norm() < 1e-15);
        assert!((f.deriv2(v).unwrap() - 2.0).norm() < 1e-15);
    }
}
