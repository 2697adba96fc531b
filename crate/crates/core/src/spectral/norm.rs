use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

/// A 1-homogeneous reference map on the positive orthant: plain or weighted `l_p`
/// with `p` in `(0, inf]`.
///
/// For `p < 1` the map is not a norm, but it still defines a valid positive
/// sphere and all constructions here only rely on 1-homogeneity and positivity.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum NormSpec {
    Lp { p: f64 },
    WeightedLp { p: f64, weights: Vec<f64> },
}

impl NormSpec {
    pub fn lp(p: f64) -> Self {
        NormSpec::Lp { p }
    }

    pub fn linf() -> Self {
        NormSpec::Lp { p: f64::INFINITY }
    }

    pub fn weighted(p: f64, weights: Vec<f64>) -> Self {
        NormSpec::WeightedLp { p, weights }
    }

    pub fn p(&self) -> f64 {
        match self {
            NormSpec::Lp { p } | NormSpec::WeightedLp { p, .. } => *p,
        }
    }

    pub fn weights(&self) -> Option<&[f64]> {
        match self {
            NormSpec::Lp { .. } => None,
            NormSpec::WeightedLp { weights, .. } => Some(weights),
        }
    }

    fn weight(&self, i: usize) -> f64 {
        self.weights().map_or(1.0, |w| w[i])
    }

    pub fn is_plain(&self) -> bool {
        matches!(self, NormSpec::Lp { .. })
    }

    /// Checks `p > 0` and, for weighted norms, that there is one strictly positive
    /// weight per coordinate.
    pub fn validate(&self, dim: usize) -> Result<()> {
        let p = self.p();
        if p.is_nan() || p <= 0.0 {
            return invalid(format!("norm exponent must be in (0, inf], got {p}"));
        }
        if let Some(w) = self.weights() {
            if w.len() != dim {
                return invalid(format!("{} norm weights for dimension {dim}", w.len()));
            }
            if w.iter().any(|&x| !(x > 0.0 && x.is_finite())) {
                return invalid("norm weights must be strictly positive and finite");
            }
        }
        Ok(())
    }

    pub fn evaluate(&self, s: &[f64]) -> f64 {
        let p = self.p();
        if p.is_infinite() {
            return s
                .iter()
                .enumerate()
                .map(|(i, x)| self.weight(i) * x.abs())
                .fold(0.0, f64::max);
        }
        // scale by the largest entry so that large p does not overflow
        let scale = s
            .iter()
            .enumerate()
            .map(|(i, x)| self.weight(i).powf(1.0 / p) * x.abs())
            .fold(0.0, f64::max);
        if scale == 0.0 {
            return 0.0;
        }
        let sum: f64 = s
            .iter()
            .enumerate()
            .map(|(i, x)| self.weight(i) * (x.abs() / scale).powf(p))
            .sum();
        scale * sum.powf(1.0 / p)
    }

    /// `sup ||s||_inf` over the positive unit sphere of this map.
    pub fn sup_linf_on_sphere(&self, dim: usize) -> f64 {
        let p = self.p();
        (0..dim)
            .map(|i| {
                let w = self.weight(i);
                if p.is_infinite() {
                    1.0 / w
                } else {
                    w.powf(-1.0 / p)
                }
            })
            .fold(0.0, f64::max)
    }

    pub fn label(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for NormSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = self.p();
        let ps = if p.is_infinite() { "inf".to_string() } else { format!("{p}") };
        match self {
            NormSpec::Lp { .. } => write!(f, "l{ps}"),
            NormSpec::WeightedLp { weights, .. } => {
                let ws: Vec<String> = weights.iter().map(|w| format!("{w}")).collect();
                write!(f, "l{ps}[{}]", ws.join(","))
            }
        }
    }
}

/// Parses `1`, `2.5`, `inf` into a plain `l_p` spec.
pub fn parse_lp(s: &str) -> Result<NormSpec> {
    let t = s.trim();
    let p = match t {
        "inf" | "infinity" | "Inf" => f64::INFINITY,
        other => other
            .parse::<f64>()
            .map_err(|_| crate::Error::Parse(format!("bad norm exponent '{other}'")))?,
    };
    let n = NormSpec::lp(p);
    n.validate(1)?;
    Ok(n)
}
