//! General Dirichlet series `Σ a_n e^{-λ_n s}`: representation, convergence
//! abscissas, normalization, compensated evaluation and the classical
//! example families.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::sum::{sum_f64, ComplexSum, Neumaier};

/// Fraction of indices (counted from the end of the stored prefix) used to
/// estimate a `limsup`.
const TAIL_FRACTION: f64 = 0.2;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SeriesError {
    #[error("coefficients beyond index 1 vanish within the first {n_max} terms")]
    AllZeroTail { n_max: usize },
    #[error("all coefficients are zero")]
    AllZero,
    #[error("base abscissa {sigma0} is not above the absolute-convergence estimate {sigma_a}")]
    BadBaseAbscissa { sigma0: f64, sigma_a: f64 },
    #[error("sigma = {sigma} is below the base abscissa {sigma0}")]
    SigmaBelowBase { sigma: f64, sigma0: f64 },
    #[error("truncation order {m_trunc} is smaller than the number of factors {factors}")]
    TruncationTooSmall { m_trunc: usize, factors: usize },
    #[error("invalid series: {0}")]
    Invalid(String),
}

/// A finite stored prefix of a general Dirichlet series.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeneralDirichletSeries {
    pub label: String,
    lambdas: Vec<f64>,
    coefficients: Vec<Complex64>,
}

impl GeneralDirichletSeries {
    /// Builds a series from exponents and coefficients.
    ///
    /// Structural checks only (equal lengths, finite values, nondecreasing
    /// exponents). [`GeneralDirichletSeries::validate`] checks the stronger
    /// conditions needed by the geometric modules.
    pub fn new(label: impl Into<String>, lambdas: Vec<f64>, coefficients: Vec<Complex64>) -> Result<Self, SeriesError> {
        if lambdas.len() != coefficients.len() {
            return Err(SeriesError::Invalid(format!(
                "{} exponents but {} coefficients",
                lambdas.len(),
                coefficients.len()
            )));
        }
        if lambdas.is_empty() {
            return Err(SeriesError::Invalid("empty series".into()));
        }
        if lambdas.iter().any(|l| !l.is_finite()) || coefficients.iter().any(|a| !a.is_finite()) {
            return Err(SeriesError::Invalid("non-finite exponent or coefficient".into()));
        }
        if lambdas.windows(2).any(|w| w[1] < w[0]) {
            return Err(SeriesError::Invalid("exponents must be nondecreasing".into()));
        }
        Ok(Self { label: label.into(), lambdas, coefficients })
    }

    /// Checks the invariants required for a series to define a target:
    /// the last exponent exceeds the first and some coefficient beyond
    /// the first is nonzero.
    pub fn validate(&self) -> Result<(), SeriesError> {
        let first = self.lambdas[0];
        let last = *self.lambdas.last().expect("nonempty");
        if last <= first {
            return Err(SeriesError::Invalid("last exponent must exceed the first".into()));
        }
        if self.coefficients.iter().skip(1).all(|a| *a == Complex64::new(0.0, 0.0)) {
            return Err(SeriesError::AllZeroTail { n_max: self.len() });
        }
        Ok(())
    }

    pub fn lambdas(&self) -> &[f64] {
        &self.lambdas
    }

    pub fn coefficients(&self) -> &[Complex64] {
        &self.coefficients
    }

    pub fn len(&self) -> usize {
        self.lambdas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lambdas.is_empty()
    }

    /// `a_1 = 1` and `λ_1 = 0`.
    pub fn is_normalized(&self) -> bool {
        self.lambdas[0] == 0.0 && self.coefficients[0] == Complex64::new(1.0, 0.0)
    }

    /// Ordinary Dirichlet series `Σ a_n n^{-s}` from `a_1, a_2, ...`.
    pub fn ordinary(label: impl Into<String>, coefficients: Vec<Complex64>) -> Result<Self, SeriesError> {
        let lambdas = (1..=coefficients.len()).map(|n| (n as f64).ln()).collect();
        Self::new(label, lambdas, coefficients)
    }

    /// `Σ n^{-s}` truncated to `n_terms`.
    pub fn zeta(n_terms: usize) -> Self {
        Self::ordinary("zeta", vec![Complex64::new(1.0, 0.0); n_terms.max(1)]).expect("well-formed")
    }

    /// `Σ (-1)^{n+1} n^{-s}` truncated to `n_terms`.
    pub fn eta(n_terms: usize) -> Self {
        let coeffs = (1..=n_terms.max(1)).map(|n| Complex64::new(if n % 2 == 1 { 1.0 } else { -1.0 }, 0.0)).collect();
        Self::ordinary("eta", coeffs).expect("well-formed")
    }
}

/// Radius of convergence of a power series.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind", content = "value")]
pub enum Radius {
    Finite(f64),
    Infinite,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceReport {
    pub sigma_c_estimate: f64,
    pub sigma_a_estimate: f64,
    pub hadamard_radius: Option<Radius>,
    pub n_used: usize,
}

fn tail_window(n_max: usize) -> std::ops::RangeInclusive<usize> {
    let start = ((n_max as f64) * (1.0 - TAIL_FRACTION)).ceil() as usize;
    start.max(1)..=n_max
}

fn check_tail(series: &GeneralDirichletSeries, n_max: usize) -> Result<usize, SeriesError> {
    if n_max < 2 {
        return Err(SeriesError::Invalid("n_max must be at least 2".into()));
    }
    let n = n_max.min(series.len());
    let zero = Complex64::new(0.0, 0.0);
    if series.coefficients[1.min(n)..n].iter().all(|a| *a == zero) {
        return Err(SeriesError::AllZeroTail { n_max: n });
    }
    Ok(n)
}

/// Estimate of the abscissa of absolute convergence,
/// `limsup ln(Σ_{k≤n} |a_k|) / λ_n`, taken as the maximum over the last 20%
/// of indices up to `n_max` (clamped to the stored length).
pub fn abscissa_abs(series: &GeneralDirichletSeries, n_max: usize) -> Result<f64, SeriesError> {
    let n = check_tail(series, n_max)?;
    let window = tail_window(n);
    let mut acc = Neumaier::new();
    let mut best = f64::NEG_INFINITY;
    for idx in 1..=n {
        acc.add(series.coefficients[idx - 1].norm());
        let lambda = series.lambdas[idx - 1];
        if window.contains(&idx) && lambda > 0.0 {
            best = best.max(acc.total().ln() / lambda);
        }
    }
    if best == f64::NEG_INFINITY {
        return Err(SeriesError::Invalid("no positive exponent in the tail window".into()));
    }
    Ok(best)
}

/// Estimate of the abscissa of convergence, `limsup ln|Σ_{k≤n} a_k| / λ_n`
/// over the same tail window. Bounded partial sums give the estimate 0;
/// the formula is meaningful when the true abscissa is nonnegative.
pub fn abscissa_conv(series: &GeneralDirichletSeries, n_max: usize) -> Result<f64, SeriesError> {
    let n = check_tail(series, n_max)?;
    let window = tail_window(n);
    let mut acc = ComplexSum::new();
    let mut best = f64::NEG_INFINITY;
    let mut any = false;
    for idx in 1..=n {
        acc.add(series.coefficients[idx - 1]);
        let lambda = series.lambdas[idx - 1];
        if window.contains(&idx) && lambda > 0.0 {
            any = true;
            let m = acc.total().norm();
            if m > 0.0 {
                best = best.max(m.ln() / lambda);
            }
        }
    }
    if !any {
        return Err(SeriesError::Invalid("no positive exponent in the tail window".into()));
    }
    let sigma_a = abscissa_abs(series, n_max)?;
    Ok(best.max(0.0).min(sigma_a))
}

/// Hadamard radius `1 / limsup |a_n|^{1/n}` of `Σ a_n z^n` (coefficients
/// indexed from `a_0`).
///
/// The limsup is the maximum of `|a_n|^{1/n}` over the last 20% of indices.
/// The radius is reported as infinite when `|a_n|^{1/n}` decays like a power
/// of `n` over that window (log-log slope below -1/4), as for `1/n!`.
pub fn hadamard_radius(coefficients: &[Complex64], n_max: usize) -> Radius {
    let n = n_max.min(coefficients.len().saturating_sub(1));
    if n < 2 {
        return Radius::Infinite;
    }
    let mut pts = Vec::new();
    for idx in tail_window(n) {
        let m = coefficients[idx].norm();
        let root = if m > 0.0 { (m.ln() / idx as f64).exp() } else { 0.0 };
        pts.push(((idx as f64).ln(), root));
    }
    let limsup = pts.iter().map(|p| p.1).fold(0.0, f64::max);
    if limsup == 0.0 {
        return Radius::Infinite;
    }
    let logs: Vec<(f64, f64)> = pts.iter().filter(|p| p.1 > 0.0).map(|p| (p.0, p.1.ln())).collect();
    if logs.len() >= 3 {
        let k = logs.len() as f64;
        let mx = sum_f64(logs.iter().map(|p| p.0)) / k;
        let my = sum_f64(logs.iter().map(|p| p.1)) / k;
        let sxx = sum_f64(logs.iter().map(|p| (p.0 - mx) * (p.0 - mx)));
        let sxy = sum_f64(logs.iter().map(|p| (p.0 - mx) * (p.1 - my)));
        if sxx > 0.0 && sxy / sxx < -0.25 {
            return Radius::Infinite;
        }
    }
    Radius::Finite(1.0 / limsup)
}

/// Convergence summary over the first `n_max` stored terms.
pub fn convergence_report(
    series: &GeneralDirichletSeries,
    n_max: usize,
    power_series: bool,
) -> Result<ConvergenceReport, SeriesError> {
    let n = n_max.min(series.len());
    Ok(ConvergenceReport {
        sigma_c_estimate: abscissa_conv(series, n)?,
        sigma_a_estimate: abscissa_abs(series, n)?,
        hadamard_radius: power_series.then(|| hadamard_radius(series.coefficients(), n)),
        n_used: n,
    })
}

/// Multiplies by `e^{λ_m s} / a_m` where `m` is the first nonzero
/// coefficient: exponents shift by `-λ_m`, coefficients divide by `a_m`.
pub fn normalize_leading(series: &GeneralDirichletSeries) -> Result<GeneralDirichletSeries, SeriesError> {
    let zero = Complex64::new(0.0, 0.0);
    let m = series.coefficients.iter().position(|a| *a != zero).ok_or(SeriesError::AllZero)?;
    if m == 0 && series.is_normalized() {
        return Ok(series.clone());
    }
    let lm = series.lambdas[m];
    let am = series.coefficients[m];
    let mut lambdas: Vec<f64> = series.lambdas[m..].iter().map(|l| l - lm).collect();
    let mut coefficients: Vec<Complex64> = series.coefficients[m..].iter().map(|a| a / am).collect();
    lambdas[0] = 0.0;
    coefficients[0] = Complex64::new(1.0, 0.0);
    GeneralDirichletSeries::new(series.label.clone(), lambdas, coefficients)
}

/// `Σ_{n≤N} a_n e^{-λ_n s}` with compensated summation; `N` is clamped to
/// the stored length.
pub fn eval_partial(series: &GeneralDirichletSeries, s: Complex64, n_terms: usize) -> Complex64 {
    let n = n_terms.min(series.len());
    let mut acc = ComplexSum::new();
    for (lambda, a) in series.lambdas[..n].iter().zip(&series.coefficients[..n]) {
        if *lambda == 0.0 {
            acc.add(*a);
        } else {
            acc.add(a * (-s * *lambda).exp());
        }
    }
    acc.total()
}

/// Uniform bound `C e^{-λ_2 σ}` on `|Σ_{n≥2} a_n e^{-λ_n s}|` valid for
/// `σ ≥ σ_0 > σ_a`, with `C = e^{λ_2 σ_0} Σ_{2≤n≤N} |a_n| e^{-λ_n σ_0}`.
///
/// For a normalized series this bounds `|f(σ + it) - 1|` for every `t`.
pub fn tail_bound(
    series: &GeneralDirichletSeries,
    sigma: f64,
    sigma0: f64,
    n_terms: usize,
) -> Result<f64, SeriesError> {
    let sigma_a = abscissa_abs(series, series.len())?;
    if sigma0 <= sigma_a {
        return Err(SeriesError::BadBaseAbscissa { sigma0, sigma_a });
    }
    if sigma < sigma0 {
        return Err(SeriesError::SigmaBelowBase { sigma, sigma0 });
    }
    let lambda2 = series.lambdas[1];
    if lambda2 <= 0.0 {
        return Err(SeriesError::Invalid("second exponent must be positive".into()));
    }
    let n = n_terms.min(series.len());
    let majorant = sum_f64(
        series.lambdas[1..n].iter().zip(&series.coefficients[1..n]).map(|(l, a)| a.norm() * (-l * sigma0).exp()),
    );
    // C e^{-λ2 σ} = majorant e^{-λ2 (σ - σ0)}
    Ok(majorant * (-lambda2 * (sigma - sigma0)).exp())
}

/// Power series `Σ a_n (z - z_0)^n` rewritten as `Σ a_n e^{-n s}` through
/// `z - z_0 = e^{-s}`. `z_0` only enters the label.
pub fn from_power_series(coefficients: &[Complex64], z0: Complex64) -> Result<GeneralDirichletSeries, SeriesError> {
    if coefficients.is_empty() {
        return Err(SeriesError::Invalid("empty coefficient list".into()));
    }
    let lambdas = (0..coefficients.len()).map(|n| n as f64).collect();
    GeneralDirichletSeries::new(format!("power series about {z0}"), lambdas, coefficients.to_vec())
}

/// Truncation of `1 + Σ_{n=0}^{levels} e^{-2^n s}`.
pub fn hadamard_gap_series(levels: u32) -> Result<GeneralDirichletSeries, SeriesError> {
    if !(1..=60).contains(&levels) {
        return Err(SeriesError::Invalid("levels must lie in 1..=60".into()));
    }
    let mut lambdas = vec![0.0];
    lambdas.extend((0..=levels).map(|n| 2f64.powi(n as i32)));
    let coeffs = vec![Complex64::new(1.0, 0.0); lambdas.len()];
    GeneralDirichletSeries::new(format!("hadamard gap ({levels} levels)"), lambdas, coeffs)
}

/// Power-series coefficients of a finite Blaschke product together with the
/// zero-sum check `Σ (1 - |a_{n,k}|)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlaschkeExpansion {
    pub coefficients: Vec<Complex64>,
    pub zero_sum: f64,
    pub factors: usize,
}

/// Zeros `a_{n,k} = (1 - 3^{-n}) e^{2kπi/2^n}`, `n = 1..=n_levels`,
/// `k = 1..=2^n`.
pub fn blaschke_zeros(n_levels: u32) -> Vec<Complex64> {
    let mut out = Vec::new();
    for n in 1..=n_levels {
        let radius = 1.0 - 3f64.powi(-(n as i32));
        let count = 1u64 << n;
        for k in 1..=count {
            let angle = 2.0 * std::f64::consts::PI * k as f64 / count as f64;
            out.push(Complex64::from_polar(radius, angle));
        }
    }
    out
}

/// `Σ_{n ≤ n_levels} 2^n (1 - (1 - 3^{-n}))`, the Blaschke zero sum.
pub fn blaschke_zero_sum(n_levels: u32) -> f64 {
    sum_f64((1..=n_levels).map(|n| (2.0 / 3.0f64).powi(n as i32)))
}

/// Taylor coefficients `α_0..α_m` of `(z - a) / (1 - ā z)`.
pub fn blaschke_factor_series(a: Complex64, m_trunc: usize) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); m_trunc + 1];
    out[0] = -a;
    let abar = a.conj();
    let scale = 1.0 - a.norm_sqr();
    let mut pow = Complex64::new(1.0, 0.0);
    for c in out.iter_mut().skip(1) {
        *c = pow * scale;
        pow *= abar;
    }
    out
}

/// Expansion of the finite product over levels `≤ n_levels` of
/// `(z - a_{n,k}) / (1 - ā_{n,k} z)`, truncated at degree `m_trunc`.
pub fn blaschke_coefficients(n_levels: u32, m_trunc: usize) -> Result<BlaschkeExpansion, SeriesError> {
    if n_levels < 1 || m_trunc < 1 {
        return Err(SeriesError::Invalid("n_levels and m_trunc must be positive".into()));
    }
    if n_levels > 24 {
        return Err(SeriesError::Invalid("n_levels above 24 is not supported".into()));
    }
    let zeros = blaschke_zeros(n_levels);
    if m_trunc < zeros.len() {
        return Err(SeriesError::TruncationTooSmall { m_trunc, factors: zeros.len() });
    }
    let mut poly = vec![Complex64::new(0.0, 0.0); m_trunc + 1];
    poly[0] = Complex64::new(1.0, 0.0);
    for a in &zeros {
        // multiply by (z - a)
        for m in (0..=m_trunc).rev() {
            let shifted = if m > 0 { poly[m - 1] } else { Complex64::new(0.0, 0.0) };
            poly[m] = shifted - a * poly[m];
        }
        // divide by (1 - ā z): b_m = c_m + ā b_{m-1}
        let abar = a.conj();
        for m in 1..=m_trunc {
            let prev = poly[m - 1];
            poly[m] += abar * prev;
        }
    }
    Ok(BlaschkeExpansion { coefficients: poly, zero_sum: blaschke_zero_sum(n_levels), factors: zeros.len() })
}
