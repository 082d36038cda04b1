//! Bohr bases for exponent sequences and the multi-variable lift
//! `F_B(Z) = Σ a_n exp(-(RZ)_n)` of a series.

use num_complex::Complex64;
use num_rational::Rational64;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::series::GeneralDirichletSeries;
use crate::sum::ComplexSum;

/// Agreement required between an exponent and its reconstruction when
/// recognizing an exponent family.
const FAMILY_TOL: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BohrError {
    #[error("expected {expected} Bohr coordinates, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("{n_terms} terms requested but the basis covers {n_max}")]
    TooManyTerms { n_terms: usize, n_max: usize },
    #[error("n_max must be at least 2, got {n_max}")]
    NMaxTooSmall { n_max: usize },
    #[error("no constructive basis for the exponents of {label}")]
    UnsupportedExponents { label: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExponentFamily {
    /// `λ_n = ln n`, basis `(ln p)` over primes.
    PrimeLogs,
    /// `λ_n = n - 1`, basis `(1)`.
    Integers,
}

/// A basis `B` with the matrix `R` such that `Λ = RB`. Row `n - 1` holds
/// the sparse entries `(k, r_{nk})` of `λ_n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BohrBasis {
    pub family: ExponentFamily,
    pub betas: Vec<f64>,
    /// Generator of each basis element (the prime for prime logs).
    pub generators: Vec<u64>,
    pub rows: Vec<Vec<(usize, Rational64)>>,
    pub n_max: usize,
}

/// Smallest prime factor of every `n ≤ n_max`.
fn smallest_factors(n_max: usize) -> Vec<usize> {
    let mut spf = vec![0usize; n_max + 1];
    for p in 2..=n_max {
        if spf[p] == 0 {
            for m in (p..=n_max).step_by(p) {
                if spf[m] == 0 {
                    spf[m] = p;
                }
            }
        }
    }
    spf
}

/// Basis `(ln p)` for primes `p ≤ n_max`, rows the exponent vectors of the
/// factorizations of `1..=n_max`.
pub fn prime_log_basis(n_max: usize) -> Result<BohrBasis, BohrError> {
    if n_max < 2 {
        return Err(BohrError::NMaxTooSmall { n_max });
    }
    let spf = smallest_factors(n_max);
    let primes: Vec<u64> = (2..=n_max).filter(|&p| spf[p] == p).map(|p| p as u64).collect();
    let mut index = vec![usize::MAX; n_max + 1];
    for (k, &p) in primes.iter().enumerate() {
        index[p as usize] = k;
    }
    let rows = (1..=n_max)
        .map(|n| {
            let mut m = n;
            let mut row: Vec<(usize, Rational64)> = Vec::new();
            while m > 1 {
                let p = spf[m];
                let mut e = 0i64;
                while m % p == 0 {
                    m /= p;
                    e += 1;
                }
                row.push((index[p], Rational64::from_integer(e)));
            }
            row
        })
        .collect();
    Ok(BohrBasis {
        family: ExponentFamily::PrimeLogs,
        betas: primes.iter().map(|&p| (p as f64).ln()).collect(),
        generators: primes,
        rows,
        n_max,
    })
}

/// Basis `(1)` for `λ_n = n - 1`.
pub fn integer_basis(n_max: usize) -> Result<BohrBasis, BohrError> {
    if n_max < 2 {
        return Err(BohrError::NMaxTooSmall { n_max });
    }
    let rows =
        (0..n_max as i64).map(|e| if e == 0 { Vec::new() } else { vec![(0, Rational64::from_integer(e))] }).collect();
    Ok(BohrBasis { family: ExponentFamily::Integers, betas: vec![1.0], generators: vec![1], rows, n_max })
}

impl BohrBasis {
    /// Recognizes the exponents of `series` as one of the supported families.
    pub fn for_series(series: &GeneralDirichletSeries) -> Result<Self, BohrError> {
        let n_max = series.len().max(2);
        let lambdas = series.lambdas();
        let fits =
            |f: &dyn Fn(usize) -> f64| lambdas.iter().enumerate().all(|(i, l)| (l - f(i + 1)).abs() < FAMILY_TOL);
        if fits(&|n| (n as f64).ln()) {
            prime_log_basis(n_max)
        } else if fits(&|n| (n - 1) as f64) {
            integer_basis(n_max)
        } else {
            Err(BohrError::UnsupportedExponents { label: series.label.clone() })
        }
    }

    pub fn dim(&self) -> usize {
        self.betas.len()
    }

    /// Coordinates touched by the first `n_terms` rows.
    pub fn dim_for(&self, n_terms: usize) -> usize {
        self.rows[..n_terms.min(self.rows.len())].iter().flat_map(|r| r.iter().map(|(k, _)| k + 1)).max().unwrap_or(0)
    }

    /// `(R·B)_n`.
    pub fn reconstruct(&self, n: usize) -> f64 {
        self.rows[n - 1].iter().map(|(k, r)| r.to_f64().unwrap_or(f64::NAN) * self.betas[*k]).sum()
    }

    /// `(R·Z)_n`.
    pub fn row_dot(&self, n: usize, z: &[Complex64]) -> Complex64 {
        self.rows[n - 1].iter().map(|(k, r)| z[*k] * r.to_f64().unwrap_or(f64::NAN)).sum()
    }
}

/// `Σ_{n≤N} a_n exp(-(RZ)_n)`.
pub fn bohr_eval(
    series: &GeneralDirichletSeries,
    basis: &BohrBasis,
    z: &[Complex64],
    n_terms: usize,
) -> Result<Complex64, BohrError> {
    let n = n_terms.min(series.len());
    if n > basis.n_max {
        return Err(BohrError::TooManyTerms { n_terms: n, n_max: basis.n_max });
    }
    let need = basis.dim_for(n);
    if z.len() < need {
        return Err(BohrError::DimensionMismatch { expected: need, got: z.len() });
    }
    let mut acc = ComplexSum::new();
    for (i, a) in series.coefficients()[..n].iter().enumerate() {
        let e = basis.row_dot(i + 1, z);
        if e == Complex64::new(0.0, 0.0) {
            acc.add(*a);
        } else {
            acc.add(a * (-e).exp());
        }
    }
    Ok(acc.total())
}

/// `Z_0 = s_0 B`, so that `Re z_k = β_k Re s_0`.
pub fn map_zero_to_bohr(s0: Complex64, basis: &BohrBasis) -> Vec<Complex64> {
    basis.betas.iter().map(|b| s0 * *b).collect()
}
