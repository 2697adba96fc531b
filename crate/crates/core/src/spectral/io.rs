//! Text documents for angular measures and representers.
//!
//! ```toml
//! dim = 2
//! alpha = 1.0
//! norm = { kind = "lp", p = 1.0 }
//! atoms = [[[0.5, 0.5], 2.0]]
//! ```

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spectral::{AngularMeasure, Atom, DeHaanRepresenter, NormSpec};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeasureDocument {
    pub dim: usize,
    pub alpha: f64,
    pub norm: NormSpec,
    pub atoms: Vec<(Vec<f64>, f64)>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub relaxed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RepresenterDocument {
    pub dim: usize,
    pub alpha: f64,
    pub atoms: Vec<(Vec<f64>, f64)>,
}

fn to_atoms(v: &[(Vec<f64>, f64)]) -> Vec<Atom> {
    v.iter().map(|(p, w)| Atom::new(p.clone(), *w)).collect()
}

fn from_atoms(v: &[Atom]) -> Vec<(Vec<f64>, f64)> {
    v.iter().map(|a| (a.point.clone(), a.weight)).collect()
}

impl MeasureDocument {
    pub fn from_measure(h: &AngularMeasure) -> Self {
        MeasureDocument {
            dim: h.dim(),
            alpha: h.alpha(),
            norm: h.norm().clone(),
            atoms: from_atoms(h.atoms()),
            relaxed: !h.is_normalized(),
        }
    }

    pub fn build(&self) -> Result<AngularMeasure> {
        if self.relaxed {
            AngularMeasure::relaxed(self.dim, self.alpha, self.norm.clone(), to_atoms(&self.atoms))
        } else {
            AngularMeasure::new(self.dim, self.alpha, self.norm.clone(), to_atoms(&self.atoms))
        }
    }
}

impl RepresenterDocument {
    pub fn from_representer(z: &DeHaanRepresenter) -> Self {
        RepresenterDocument { dim: z.dim(), alpha: z.alpha(), atoms: from_atoms(z.atoms()) }
    }

    pub fn build(&self) -> Result<DeHaanRepresenter> {
        DeHaanRepresenter::new(self.dim, self.alpha, to_atoms(&self.atoms))
    }
}

fn to_toml<T: Serialize>(v: &T) -> Result<String> {
    toml::to_string(v).map_err(|e| Error::Parse(e.to_string()))
}

pub fn measure_to_string(h: &AngularMeasure) -> Result<String> {
    to_toml(&MeasureDocument::from_measure(h))
}

pub fn measure_from_str(s: &str) -> Result<AngularMeasure> {
    let doc: MeasureDocument = toml::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
    doc.build()
}

pub fn load_measure(path: impl AsRef<Path>) -> Result<AngularMeasure> {
    measure_from_str(&std::fs::read_to_string(path)?)
}

pub fn representer_to_string(z: &DeHaanRepresenter) -> Result<String> {
    to_toml(&RepresenterDocument::from_representer(z))
}

pub fn representer_from_str(s: &str) -> Result<DeHaanRepresenter> {
    let doc: RepresenterDocument = toml::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
    doc.build()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_documented_layout() {
        let h = measure_from_str(
            "dim = 2\nalpha = 1.0\nnorm = { kind = \"lp\", p = 1.0 }\natoms = [[[0.5, 0.5], 2.0]]\n",
        )
        .unwrap();
        assert_eq!(h.atoms()[0].weight, 2.0);
        let h = measure_from_str(
            "dim = 2\nalpha = 1.0\nnorm = { kind = \"lp\", p = inf }\natoms = [[[1.0, 1.0], 1.0]]\n",
        )
        .unwrap();
        assert_eq!(h.norm(), &NormSpec::linf());
        let h = measure_from_str(
            "dim = 2\nalpha = 1.0\nnorm = { kind = \"weighted_lp\", p = 1.0, weights = [1.0, 2.0] }\natoms = [[[1.0, 0.0], 1.0], [[0.0, 0.5], 2.0]]\n",
        )
        .unwrap();
        assert!(h.is_normalized());
    }

    #[test]
    fn round_trips() {
        let h = AngularMeasure::independent(3, 2.0, NormSpec::weighted(f64::INFINITY, vec![1.0, 2.0, 3.0])).unwrap();
        let back = measure_from_str(&measure_to_string(&h).unwrap()).unwrap();
        assert_eq!(back.atoms(), h.atoms());
        assert_eq!(back.norm(), h.norm());
        let z = DeHaanRepresenter::comonotone(2, 0.5).unwrap();
        let back = representer_from_str(&representer_to_string(&z).unwrap()).unwrap();
        assert_eq!(back.atoms(), z.atoms());
    }

    #[test]
    fn invalid_documents_error() {
        assert!(measure_from_str("dim = 2").is_err());
        assert!(measure_from_str("dim = 1\nalpha = 1.0\nnorm = { kind = \"lp\", p = 1.0 }\natoms = [[[1.0], 2.0]]\n").is_err());
    }
}
