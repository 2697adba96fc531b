use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::models::MaxStableModel;

/// Fréchet margins `exp(-c_i x^{-alpha_i})`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MarginSpec {
    pub scale: Vec<f64>,
    pub alpha: Vec<f64>,
}

impl MarginSpec {
    pub fn new(scale: Vec<f64>, alpha: Vec<f64>) -> Result<Self> {
        let m = MarginSpec { scale, alpha };
        m.validate()?;
        Ok(m)
    }

    /// `c_i = 1`, `alpha_i = alpha`.
    pub fn standard(dim: usize, alpha: f64) -> Self {
        MarginSpec { scale: vec![1.0; dim], alpha: vec![alpha; dim] }
    }

    pub fn dim(&self) -> usize {
        self.scale.len()
    }

    pub fn validate(&self) -> Result<()> {
        if self.scale.len() != self.alpha.len() {
            return Err(Error::DimensionMismatch(self.scale.len(), self.alpha.len()));
        }
        if self.scale.iter().chain(&self.alpha).any(|v| !(*v > 0.0 && v.is_finite())) {
            return invalid("margin scales and indices must be strictly positive");
        }
        Ok(())
    }
}

/// `F~(x) = F(y)` with `y_i = (x_i^{alpha_i} / c_i)^{1/alpha}`, where `F` has
/// `alpha`-Fréchet margins. The margins of `F~` are `exp(-c_i x^{-alpha_i})`.
#[derive(Debug, Clone)]
pub struct MarginTransformed {
    base: MaxStableModel,
    margins: MarginSpec,
}

impl MarginTransformed {
    pub fn new(base: MaxStableModel, margins: MarginSpec) -> Result<Self> {
        margins.validate()?;
        if margins.dim() != base.dim() {
            return Err(Error::DimensionMismatch(margins.dim(), base.dim()));
        }
        Ok(MarginTransformed { base, margins })
    }

    pub fn margins(&self) -> &MarginSpec {
        &self.margins
    }

    /// The unit-margin model this was built from.
    pub fn to_unit_frechet(&self) -> &MaxStableModel {
        &self.base
    }

    pub fn dim(&self) -> usize {
        self.base.dim()
    }

    /// Coordinates of the underlying model.
    pub fn to_base_point(&self, x: &[f64]) -> Vec<f64> {
        let a = self.base.alpha();
        x.iter()
            .zip(self.margins.scale.iter().zip(&self.margins.alpha))
            .map(|(&xi, (&c, &ai))| if xi.is_infinite() { xi } else { (xi.powf(ai) / c).powf(1.0 / a) })
            .collect()
    }

    /// Inverse of [`Self::to_base_point`].
    pub fn from_base_point(&self, y: &[f64]) -> Vec<f64> {
        let a = self.base.alpha();
        y.iter()
            .zip(self.margins.scale.iter().zip(&self.margins.alpha))
            .map(|(&yi, (&c, &ai))| if yi.is_infinite() { yi } else { (c * yi.powf(a)).powf(1.0 / ai) })
            .collect()
    }

    pub fn cdf(&self, x: &[f64]) -> Result<f64> {
        if x.len() != self.dim() {
            return Err(Error::DimensionMismatch(x.len(), self.dim()));
        }
        self.base.cdf(&self.to_base_point(x))
    }

    /// `exp(-c_i x^{-alpha_i})`.
    pub fn margin_cdf(&self, i: usize, x: f64) -> f64 {
        (-self.margins.scale[i] * x.powf(-self.margins.alpha[i])).exp()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_margins() {
        let m = MaxStableModel::logistic(2, 0.6, 1.4).unwrap();
        let t = MarginTransformed::new(m.clone(), MarginSpec::standard(2, 1.4)).unwrap();
        for x in [[0.5, 2.0], [1.0, 1.0], [3.0, 0.2]] {
            assert!((t.cdf(&x).unwrap() - m.cdf(&x).unwrap()).abs() < 1e-15);
        }
    }

    #[test]
    fn univariate_substitution() {
        let m = MaxStableModel::independent(1, 1.0).unwrap();
        let t = MarginTransformed::new(m, MarginSpec::new(vec![2.0], vec![3.0]).unwrap()).unwrap();
        for x in [0.5f64, 1.0, 2.5] {
            assert!((t.cdf(&[x]).unwrap() - (-2.0 * x.powf(-3.0)).exp()).abs() < 1e-15);
        }
    }

    #[test]
    fn margins_and_round_trip() {
        let m = MaxStableModel::logistic(3, 0.3, 2.0).unwrap();
        let spec = MarginSpec::new(vec![0.5, 2.0, 1.5], vec![1.0, 0.7, 3.0]).unwrap();
        let t = MarginTransformed::new(m, spec).unwrap();
        for i in 0..3 {
            let mut x = vec![f64::INFINITY; 3];
            x[i] = 1.3;
            assert!((t.cdf(&x).unwrap() - t.margin_cdf(i, 1.3)).abs() < 1e-9);
        }
        let x = [0.4, 1.7, 2.2];
        let back = t.from_base_point(&t.to_base_point(&x));
        for (a, b) in back.iter().zip(&x) {
            assert!((a - b).abs() < 1e-14);
        }
        assert!(MarginSpec::new(vec![1.0], vec![0.0]).is_err());
        assert!(MarginSpec::new(vec![1.0, 1.0], vec![1.0]).is_err());
    }
}
