//! JSON description of a series or target: either explicit terms
//! `{"label": ..., "terms": [[lambda, re, im], ...]}` or a named family
//! `{"kind": "zeta" | "eta" | "dirichlet-l" | "polynomial" | "power" |
//! "hadamard-gap" | "blaschke", ...}`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::models::{
    AnalyticTarget, DirichletCharacter, DirichletPolynomial, Eta, ModelError, PeriodicDirichlet, Zeta,
};
use crate::series::{
    blaschke_coefficients, from_power_series, hadamard_gap_series, normalize_leading, GeneralDirichletSeries,
    SeriesError,
};

/// Stored prefix used for the series of the continued families.
pub const DEFAULT_SERIES_TERMS: usize = 10_000;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ConfigError {
    #[error("{0}")]
    Invalid(String),
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error(transparent)]
    Model(#[from] ModelError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TargetKind {
    Zeta,
    Eta,
    DirichletL,
    Polynomial,
    Power,
    HadamardGap,
    Blaschke,
}

impl std::str::FromStr for TargetKind {
    type Err = ConfigError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        serde_json::from_value(serde_json::Value::String(s.into()))
            .map_err(|_| ConfigError::Invalid(format!("unknown target kind '{s}'")))
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TargetConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kind: Option<TargetKind>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    /// `[lambda, re, im]` triples.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub terms: Option<Vec<[f64; 3]>>,
    /// Stored prefix for series views of the continued families.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_terms: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub modulus: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub character_index: Option<u64>,
    /// Power-series coefficients `[re, im]` from `a_0`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coefficients: Option<Vec<[f64; 2]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub z0: Option<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub levels: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_levels: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m_trunc: Option<usize>,
}

fn need<T: Copy>(v: Option<T>, field: &str, kind: &str) -> Result<T, ConfigError> {
    v.ok_or_else(|| ConfigError::Invalid(format!("target kind '{kind}' needs \"{field}\"")))
}

impl TargetConfig {
    pub fn of_kind(kind: TargetKind) -> Self {
        Self { kind: Some(kind), ..Default::default() }
    }

    pub fn from_json(text: &str) -> Result<Self, ConfigError> {
        serde_json::from_str(text).map_err(|e| ConfigError::Invalid(e.to_string()))
    }

    fn n_terms(&self) -> usize {
        self.n_terms.unwrap_or(DEFAULT_SERIES_TERMS)
    }

    fn character(&self) -> Result<DirichletCharacter, ConfigError> {
        let m = need(self.modulus, "modulus", "dirichlet-l")?;
        let i = need(self.character_index, "character_index", "dirichlet-l")?;
        Ok(DirichletCharacter::new(m, i)?)
    }

    fn terms_series(&self) -> Result<GeneralDirichletSeries, ConfigError> {
        let terms =
            self.terms.as_ref().ok_or_else(|| ConfigError::Invalid("explicit series needs \"terms\"".into()))?;
        let label = self.label.clone().unwrap_or_else(|| "series".into());
        Ok(GeneralDirichletSeries::new(
            label,
            terms.iter().map(|t| t[0]).collect(),
            terms.iter().map(|t| Complex64::new(t[1], t[2])).collect(),
        )?)
    }

    /// The described series, truncated to its stored prefix.
    pub fn series(&self) -> Result<GeneralDirichletSeries, ConfigError> {
        let mut series = match self.kind {
            None | Some(TargetKind::Polynomial) => self.terms_series()?,
            Some(TargetKind::Zeta) => GeneralDirichletSeries::zeta(self.n_terms()),
            Some(TargetKind::Eta) => GeneralDirichletSeries::eta(self.n_terms()),
            Some(TargetKind::DirichletL) => {
                let chi = self.character()?;
                let coeffs = (1..=self.n_terms() as u64).map(|n| chi.value(n)).collect();
                GeneralDirichletSeries::ordinary(format!("L(s, chi_{}_{})", chi.modulus, chi.index), coeffs)?
            }
            Some(TargetKind::Power) => {
                let coeffs = self
                    .coefficients
                    .as_ref()
                    .ok_or_else(|| ConfigError::Invalid("target kind 'power' needs \"coefficients\"".into()))?;
                let z0 = self.z0.unwrap_or([0.0, 0.0]);
                from_power_series(
                    &coeffs.iter().map(|c| Complex64::new(c[0], c[1])).collect::<Vec<_>>(),
                    Complex64::new(z0[0], z0[1]),
                )?
            }
            Some(TargetKind::HadamardGap) => hadamard_gap_series(need(self.levels, "levels", "hadamard-gap")?)?,
            Some(TargetKind::Blaschke) => {
                let n = need(self.n_levels, "n_levels", "blaschke")?;
                let m = need(self.m_trunc, "m_trunc", "blaschke")?;
                let exp = blaschke_coefficients(n, m)?;
                let mut s = from_power_series(&exp.coefficients, Complex64::new(0.0, 0.0))?;
                s.label = format!("blaschke({n}, {m})");
                s
            }
        };
        if let Some(label) = &self.label {
            series.label = label.clone();
        }
        Ok(series)
    }

    /// The continued function for the analytic families; a Dirichlet
    /// polynomial (normalized when needed, which keeps its zeros) for the
    /// finite ones.
    pub fn target(&self) -> Result<Box<dyn AnalyticTarget>, ConfigError> {
        Ok(match self.kind {
            Some(TargetKind::Zeta) => Box::new(Zeta::default()),
            Some(TargetKind::Eta) => Box::new(Eta::default()),
            Some(TargetKind::DirichletL) => Box::new(PeriodicDirichlet::from_character(&self.character()?)),
            _ => {
                let series = self.series()?;
                series.validate()?;
                let series = if series.is_normalized() { series } else { normalize_leading(&series)? };
                Box::new(DirichletPolynomial::new(series)?)
            }
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn explicit_terms() {
        let c = TargetConfig::from_json(r#"{"label": "1 + 2^-s", "terms": [[0, 1, 0], [0.6931471805599453, 1, 0]]}"#)
            .unwrap();
        let f = c.target().unwrap();
        assert_eq!(f.label(), "1 + 2^-s");
        assert!((f.eval(Complex64::new(0.0, 0.0)).unwrap() - 2.0).norm() < 1e-15);
    }

    #[test]
    fn named_families() {
        let z = TargetConfig::from_json(r#"{"kind": "zeta"}"#).unwrap().target().unwrap();
        assert!((z.eval(Complex64::new(2.0, 0.0)).unwrap().re - std::f64::consts::PI.powi(2) / 6.0).abs() < 1e-12);
        let l = TargetConfig::from_json(r#"{"kind": "dirichlet-l", "modulus": 4, "character_index": 1}"#).unwrap();
        let v = l.target().unwrap().eval(Complex64::new(2.0, 0.0)).unwrap();
        assert!((v.re - 0.915965594177219).abs() < 1e-12);
        let s = l.series().unwrap();
        assert_eq!(s.len(), DEFAULT_SERIES_TERMS);
        let h = TargetConfig::from_json(r#"{"kind": "hadamard-gap", "levels": 2}"#).unwrap().series().unwrap();
        assert_eq!(h.lambdas(), &[0.0, 1.0, 2.0, 4.0]);
        let b = TargetConfig::from_json(r#"{"kind": "blaschke", "n_levels": 1, "m_trunc": 4}"#).unwrap();
        assert!(b.target().unwrap().label().starts_with("blaschke"));
        let p = TargetConfig::from_json(r#"{"kind": "power", "coefficients": [[2, 0], [1, 0]]}"#).unwrap();
        // normalized: 1 + e^-s / 2
        let v = p.target().unwrap().eval(Complex64::new(0.0, 0.0)).unwrap();
        assert!((v.re - 1.5).abs() < 1e-15);
    }

    #[test]
    fn errors_are_located() {
        let e = TargetConfig::from_json("{\n  \"kind\": \"zeta\",\n  \"modulos\": 4\n}").unwrap_err();
        assert!(e.to_string().contains("line 3"), "{e}");
        let e = TargetConfig::from_json(r#"{"kind": "dirichlet-l", "modulus": 4}"#).unwrap().target().err().unwrap();
        assert!(e.to_string().contains("character_index"));
        assert!("zeta".parse::<TargetKind>().is_ok());
        assert!("gamma".parse::<TargetKind>().is_err());
    }
}
