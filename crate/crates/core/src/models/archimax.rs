use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::models::MaxStableModel;

/// Archimedean generators with closed-form inverse and derivative.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Generator {
    /// `psi(t) = exp(-t)`
    Exponential,
    /// `psi(t) = (1 + t)^{-1/theta}`, `theta > 0`
    Clayton { theta: f64 },
}

impl Generator {
    pub fn clayton(theta: f64) -> Result<Self> {
        let g = Generator::Clayton { theta };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            Generator::Exponential => Ok(()),
            Generator::Clayton { theta } if theta > 0.0 && theta.is_finite() => Ok(()),
            Generator::Clayton { theta } => invalid(format!("Clayton theta must be positive, got {theta}")),
        }
    }

    pub fn psi(&self, t: f64) -> f64 {
        match *self {
            Generator::Exponential => (-t).exp(),
            Generator::Clayton { theta } => (1.0 + t).powf(-1.0 / theta),
        }
    }

    pub fn inverse(&self, u: f64) -> f64 {
        match *self {
            Generator::Exponential => -u.ln(),
            Generator::Clayton { theta } => u.powf(-theta) - 1.0,
        }
    }

    pub fn derivative(&self, t: f64) -> f64 {
        match *self {
            Generator::Exponential => -(-t).exp(),
            Generator::Clayton { theta } => -(1.0 + t).powf(-1.0 / theta - 1.0) / theta,
        }
    }

    pub fn label(&self) -> String {
        match *self {
            Generator::Exponential => "exponential".into(),
            Generator::Clayton { theta } => format!("clayton({theta})"),
        }
    }
}

/// `C(u) = psi(l(psi^{-1}(u_1), ..., psi^{-1}(u_d)))` on `[0, 1]^d`.
pub fn archimax_copula(g: &Generator, model: &MaxStableModel, u: &[f64]) -> Result<f64> {
    g.validate()?;
    if u.iter().any(|v| !(*v >= 0.0 && *v <= 1.0)) {
        return invalid(format!("copula argument must lie in [0, 1]^d, got {u:?}"));
    }
    // both catalog generators have psi^{-1}(0) = inf, so a zero coordinate gives zero
    if u.iter().any(|&v| v == 0.0) {
        if u.len() != model.dim() {
            return Err(crate::Error::DimensionMismatch(u.len(), model.dim()));
        }
        return Ok(0.0);
    }
    if u.iter().all(|&v| v == 1.0) {
        return Ok(1.0);
    }
    let z: Vec<f64> = u.iter().map(|&v| g.inverse(v)).collect();
    Ok(g.psi(model.stdf(&z)?))
}
