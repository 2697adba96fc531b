//! Model specification documents.
//!
//! ```toml
//! family = "logistic"
//! dim = 3
//! alpha = 1.0
//! theta = 0.5
//! ```
//!
//! `husler_reiss` takes `lambda_matrix`, `brown_resnick` takes `covariance`,
//! and `discrete_spectral` takes an inline `spectral_measure` table or a
//! `spectral_measure_file` path resolved against the document's directory.

use std::path::Path;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::models::MaxStableModel;
use crate::spectral::io::{load_measure, MeasureDocument};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FamilyName {
    Logistic,
    Independent,
    Comonotone,
    DiscreteSpectral,
    HuslerReiss,
    BrownResnick,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelSpec {
    pub family: FamilyName,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dim: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theta: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda_matrix: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub covariance: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub spectral_measure: Option<MeasureDocument>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub spectral_measure_file: Option<String>,
}

pub(crate) fn matrix_from_rows(rows: &[Vec<f64>], what: &str) -> Result<DMatrix<f64>> {
    let n = rows.len();
    if n == 0 || rows.iter().any(|r| r.len() != n) {
        return invalid(format!("{what} must be a nonempty square matrix"));
    }
    Ok(DMatrix::from_fn(n, n, |i, j| rows[i][j]))
}

fn need<T: Clone>(v: &Option<T>, field: &str, family: &str) -> Result<T> {
    v.clone().ok_or_else(|| Error::InvalidInput(format!("family {family} requires `{field}`")))
}

impl ModelSpec {
    pub fn simple(family: FamilyName, dim: usize, alpha: f64) -> Self {
        ModelSpec {
            family,
            dim: Some(dim),
            alpha: Some(alpha),
            theta: None,
            lambda_matrix: None,
            covariance: None,
            spectral_measure: None,
            spectral_measure_file: None,
        }
    }

    /// Builds the model; `base_dir` resolves a relative `spectral_measure_file`.
    pub fn build(&self, base_dir: Option<&Path>) -> Result<MaxStableModel> {
        let alpha = self.alpha.unwrap_or(1.0);
        let model = match self.family {
            FamilyName::Logistic => {
                let theta = need(&self.theta, "theta", "logistic")?;
                MaxStableModel::logistic(need(&self.dim, "dim", "logistic")?, theta, alpha)?
            }
            FamilyName::Independent => MaxStableModel::independent(need(&self.dim, "dim", "independent")?, alpha)?,
            FamilyName::Comonotone => MaxStableModel::comonotone(need(&self.dim, "dim", "comonotone")?, alpha)?,
            FamilyName::DiscreteSpectral => {
                let h = match (&self.spectral_measure, &self.spectral_measure_file) {
                    (Some(doc), None) => doc.build()?,
                    (None, Some(file)) => {
                        let p = Path::new(file);
                        let p = match base_dir {
                            Some(b) if p.is_relative() => b.join(p),
                            _ => p.to_path_buf(),
                        };
                        load_measure(&p)?
                    }
                    _ => {
                        return invalid("discrete_spectral needs exactly one of `spectral_measure` or `spectral_measure_file`")
                    }
                };
                if self.alpha.is_some_and(|a| a != h.alpha()) {
                    return Err(Error::AlphaMismatch(alpha, h.alpha()));
                }
                MaxStableModel::discrete_spectral(h)?
            }
            FamilyName::HuslerReiss => {
                if self.alpha.is_some_and(|a| a != 1.0) {
                    return invalid("husler_reiss is defined with alpha = 1; use margins to change it");
                }
                let rows = need(&self.lambda_matrix, "lambda_matrix", "husler_reiss")?;
                MaxStableModel::husler_reiss(matrix_from_rows(&rows, "lambda_matrix")?)?
            }
            FamilyName::BrownResnick => {
                if self.alpha.is_some_and(|a| a != 1.0) {
                    return invalid("brown_resnick is defined with alpha = 1; use margins to change it");
                }
                let rows = need(&self.covariance, "covariance", "brown_resnick")?;
                MaxStableModel::brown_resnick(matrix_from_rows(&rows, "covariance")?)?
            }
        };
        if let Some(d) = self.dim {
            if d != model.dim() {
                return Err(Error::DimensionMismatch(d, model.dim()));
            }
        }
        Ok(model)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(s: &str) -> Result<MaxStableModel> {
        let spec: ModelSpec = toml::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        spec.build(None)
    }

    #[test]
    fn builds_each_family() {
        assert_eq!(parse("family = \"logistic\"\ndim = 3\ntheta = 0.5").unwrap().dim(), 3);
        assert_eq!(parse("family = \"independent\"\ndim = 2\nalpha = 2.0").unwrap().alpha(), 2.0);
        assert!(parse("family = \"comonotone\"\ndim = 4").is_ok());
        let hr = parse("family = \"husler_reiss\"\nlambda_matrix = [[0.0, 1.0], [1.0, 0.0]]").unwrap();
        assert_eq!(hr.family().tag(), "husler_reiss");
        let br = parse("family = \"brown_resnick\"\ncovariance = [[1.0, 0.2], [0.2, 1.0]]").unwrap();
        assert_eq!(br.dim(), 2);
        let ds = parse(
            "family = \"discrete_spectral\"\n[spectral_measure]\ndim = 2\nalpha = 1.0\nnorm = { kind = \"lp\", p = 1.0 }\natoms = [[[0.5, 0.5], 2.0]]\n",
        )
        .unwrap();
        assert!((ds.exponent(&[1.0, 2.0]).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn reports_missing_and_inconsistent_fields() {
        assert!(parse("family = \"logistic\"\ndim = 3").is_err());
        assert!(parse("family = \"husler_reiss\"\nalpha = 2.0\nlambda_matrix = [[0.0, 1.0], [1.0, 0.0]]").is_err());
        assert!(parse("family = \"husler_reiss\"\ndim = 3\nlambda_matrix = [[0.0, 1.0], [1.0, 0.0]]").is_err());
        assert!(parse("family = \"gumbel\"\ndim = 2").is_err());
        assert!(parse("family = \"discrete_spectral\"").is_err());
    }

    #[test]
    fn resolves_measure_file_relative_to_base() {
        let dir = tempfile::tempdir().unwrap();
        std::fs::write(
            dir.path().join("h.toml"),
            "dim = 2\nalpha = 1.0\nnorm = { kind = \"lp\", p = inf }\natoms = [[[1.0, 1.0], 1.0]]\n",
        )
        .unwrap();
        let spec: ModelSpec = toml::from_str("family = \"discrete_spectral\"\nspectral_measure_file = \"h.toml\"").unwrap();
        let m = spec.build(Some(dir.path())).unwrap();
        assert!((m.exponent(&[2.0, 4.0]).unwrap() - 0.5).abs() < 1e-15);
    }
}
