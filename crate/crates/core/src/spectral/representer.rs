use crate::error::{invalid, Error, Result};
use crate::spectral::angular::{check_dim_alpha, Atom, MOMENT_TOL};

/// Probabilities must sum to one within this tolerance.
pub const PROB_TOL: f64 = 1e-12;

/// Finitely supported law of a nonnegative vector `Z` with `E[Z_i^alpha] = 1`.
#[derive(Debug, Clone)]
pub struct DeHaanRepresenter {
    dim: usize,
    alpha: f64,
    atoms: Vec<Atom>,
}

impl DeHaanRepresenter {
    pub fn new(dim: usize, alpha: f64, atoms: Vec<Atom>) -> Result<Self> {
        check_dim_alpha(dim, alpha)?;
        if atoms.is_empty() {
            return invalid("representer needs at least one atom");
        }
        for a in &atoms {
            if a.point.len() != dim {
                return Err(Error::DimensionMismatch(a.point.len(), dim));
            }
            if a.point.iter().any(|x| !(x.is_finite() && *x >= 0.0)) {
                return invalid(format!("atom {:?} must be finite and nonnegative", a.point));
            }
            if a.point.iter().all(|&x| x == 0.0) {
                return invalid("every representer atom needs a positive coordinate");
            }
            if !(a.weight > 0.0 && a.weight.is_finite()) {
                return invalid(format!("atom probability must be positive, got {}", a.weight));
            }
        }
        let total: f64 = atoms.iter().map(|a| a.weight).sum();
        if (total - 1.0).abs() > PROB_TOL {
            return invalid(format!("probabilities sum to {total}, expected 1"));
        }
        let out = DeHaanRepresenter { dim, alpha, atoms };
        for (coord, m) in out.moments().into_iter().enumerate() {
            if (m - 1.0).abs() > MOMENT_TOL {
                return Err(Error::NotNormalized { coord, moment: m });
            }
        }
        Ok(out)
    }

    /// Rescales arbitrary positive weights into probabilities and each coordinate
    /// so that the `alpha`-moments equal one. Every coordinate must have positive mass.
    pub fn standardized(dim: usize, alpha: f64, mut atoms: Vec<Atom>) -> Result<Self> {
        check_dim_alpha(dim, alpha)?;
        let total: f64 = atoms.iter().map(|a| a.weight).sum();
        if !(total > 0.0) {
            return invalid("weights must have positive total");
        }
        atoms.iter_mut().for_each(|a| a.weight /= total);
        for i in 0..dim {
            let m: f64 = atoms
                .iter()
                .map(|a| a.weight * a.point.get(i).copied().unwrap_or(0.0).powf(alpha))
                .sum();
            if !(m > 0.0) {
                return invalid(format!("coordinate {i} has zero moment"));
            }
            let s = m.powf(-1.0 / alpha);
            for a in atoms.iter_mut() {
                if let Some(x) = a.point.get_mut(i) {
                    *x *= s;
                }
            }
        }
        // the final probability renormalization absorbs rounding
        let total: f64 = atoms.iter().map(|a| a.weight).sum();
        atoms.iter_mut().for_each(|a| a.weight /= total);
        Self::new(dim, alpha, atoms)
    }

    /// `Z = (1, ..., 1)` almost surely.
    pub fn comonotone(dim: usize, alpha: f64) -> Result<Self> {
        Self::new(dim, alpha, vec![Atom::new(vec![1.0; dim], 1.0)])
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn moments(&self) -> Vec<f64> {
        (0..self.dim)
            .map(|i| self.atoms.iter().map(|a| a.weight * a.point[i].powf(self.alpha)).sum())
            .collect()
    }

    /// Largest sup-norm over the support.
    pub fn sup_bound(&self) -> f64 {
        self.atoms
            .iter()
            .map(|a| a.point.iter().copied().fold(0.0, f64::max))
            .fold(0.0, f64::max)
    }

    /// `V(x) = E[max_i Z_i^alpha / x_i^alpha]`.
    pub fn exponent(&self, x: &[f64]) -> f64 {
        self.atoms
            .iter()
            .map(|a| {
                a.weight
                    * a.point
                        .iter()
                        .zip(x)
                        .map(|(z, xi)| (z / xi).powf(self.alpha))
                        .fold(0.0, f64::max)
            })
            .sum()
    }

    /// Atoms raised coordinatewise to the power `alpha`.
    pub fn powered_atoms(&self) -> Vec<Atom> {
        self.atoms
            .iter()
            .map(|a| Atom::new(a.point.iter().map(|z| z.powf(self.alpha)).collect(), a.weight))
            .collect()
    }
}
