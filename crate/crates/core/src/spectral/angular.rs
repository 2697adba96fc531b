use std::cmp::Ordering;

use crate::error::{invalid, Error, Result};
use crate::spectral::norm::NormSpec;

/// Points within this distance of the sphere are accepted as-is.
pub const SPHERE_TOL: f64 = 1e-9;
/// Points within this distance are projected back onto the sphere; beyond it they are rejected.
pub const RENORMALIZE_TOL: f64 = 1e-6;
/// `l_inf` distance under which two atoms are identified.
pub const ATOM_MERGE_TOL: f64 = 1e-9;
/// Allowed deviation of a marginal moment from 1.
pub const MOMENT_TOL: f64 = 1e-8;

/// A weighted point mass. Used both for angular measures (weight = mass) and
/// de Haan representers (weight = probability).
#[derive(Debug, Clone, PartialEq)]
pub struct Atom {
    pub point: Vec<f64>,
    pub weight: f64,
}

impl Atom {
    pub fn new(point: Vec<f64>, weight: f64) -> Self {
        Atom { point, weight }
    }
}

pub(crate) fn lex_cmp(a: &[f64], b: &[f64]) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        match x.total_cmp(y) {
            Ordering::Equal => continue,
            o => return o,
        }
    }
    a.len().cmp(&b.len())
}

pub(crate) fn linf_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

/// Merges atoms whose points agree within `tol` in `l_inf`.
///
/// Atoms are visited in lexicographic order and each joins the first existing
/// cluster whose representative is within `tol`; the representative is the
/// lexicographically smallest member. Weights of merged atoms are summed.
pub fn merge_atoms(mut atoms: Vec<Atom>, tol: f64) -> Vec<Atom> {
    atoms.sort_by(|a, b| lex_cmp(&a.point, &b.point));
    let mut out: Vec<Atom> = Vec::with_capacity(atoms.len());
    for a in atoms {
        match out.iter_mut().find(|c| linf_dist(&c.point, &a.point) <= tol) {
            Some(c) => c.weight += a.weight,
            None => out.push(a),
        }
    }
    out
}

pub(crate) fn check_dim_alpha(dim: usize, alpha: f64) -> Result<()> {
    if dim == 0 {
        return invalid("dimension must be at least 1");
    }
    if !(alpha > 0.0 && alpha.is_finite()) {
        return invalid(format!("stability index must be positive and finite, got {alpha}"));
    }
    Ok(())
}

/// Finitely supported angular measure on the positive unit sphere of a reference map.
#[derive(Debug, Clone)]
pub struct AngularMeasure {
    dim: usize,
    alpha: f64,
    norm: NormSpec,
    atoms: Vec<Atom>,
    moments: Vec<f64>,
    normalized: bool,
}

impl AngularMeasure {
    /// Builds a measure whose marginal moments `sum_j w_j s_ji^alpha` must equal 1.
    pub fn new(dim: usize, alpha: f64, norm: NormSpec, atoms: Vec<Atom>) -> Result<Self> {
        Self::build(dim, alpha, norm, atoms, true)
    }

    /// Like [`AngularMeasure::new`] but admits measures with arbitrary marginal
    /// moments; the actual moments are recorded.
    pub fn relaxed(dim: usize, alpha: f64, norm: NormSpec, atoms: Vec<Atom>) -> Result<Self> {
        Self::build(dim, alpha, norm, atoms, false)
    }

    fn build(dim: usize, alpha: f64, norm: NormSpec, atoms: Vec<Atom>, strict: bool) -> Result<Self> {
        check_dim_alpha(dim, alpha)?;
        norm.validate(dim)?;
        if atoms.is_empty() {
            return invalid("angular measure needs at least one atom");
        }
        let mut checked = Vec::with_capacity(atoms.len());
        for mut a in atoms {
            if a.point.len() != dim {
                return Err(Error::DimensionMismatch(a.point.len(), dim));
            }
            if a.point.iter().any(|x| !(x.is_finite() && *x >= 0.0)) {
                return invalid(format!("atom point {:?} must be finite and nonnegative", a.point));
            }
            if !(a.weight > 0.0 && a.weight.is_finite()) {
                return invalid(format!("atom weight must be positive, got {}", a.weight));
            }
            let t = norm.evaluate(&a.point);
            let dev = (t - 1.0).abs();
            if dev > RENORMALIZE_TOL {
                return Err(Error::OffSphere(t));
            }
            if dev > SPHERE_TOL {
                a.point.iter_mut().for_each(|x| *x /= t);
            }
            checked.push(a);
        }
        let moments: Vec<f64> = (0..dim)
            .map(|i| checked.iter().map(|a| a.weight * a.point[i].powf(alpha)).sum())
            .collect();
        let normalized = moments.iter().all(|m| (m - 1.0).abs() <= MOMENT_TOL);
        if strict && !normalized {
            let (coord, moment) = moments
                .iter()
                .copied()
                .enumerate()
                .max_by(|a, b| (a.1 - 1.0).abs().total_cmp(&(b.1 - 1.0).abs()))
                .unwrap();
            return Err(Error::NotNormalized { coord, moment });
        }
        Ok(AngularMeasure { dim, alpha, norm, atoms: checked, moments, normalized })
    }

    /// `H_com`: the comonotone measure, a single atom on the diagonal.
    pub fn comonotone(dim: usize, alpha: f64, norm: NormSpec) -> Result<Self> {
        check_dim_alpha(dim, alpha)?;
        norm.validate(dim)?;
        let ones = vec![1.0; dim];
        let t = norm.evaluate(&ones);
        let point = ones.iter().map(|x| x / t).collect();
        Self::new(dim, alpha, norm, vec![Atom::new(point, t.powf(alpha))])
    }

    /// `H_ind`: unit masses on the (renormalized) coordinate axes.
    pub fn independent(dim: usize, alpha: f64, norm: NormSpec) -> Result<Self> {
        check_dim_alpha(dim, alpha)?;
        norm.validate(dim)?;
        let atoms = (0..dim)
            .map(|i| {
                let mut e = vec![0.0; dim];
                e[i] = 1.0;
                let t = norm.evaluate(&e);
                e[i] = 1.0 / t;
                Atom::new(e, t.powf(alpha))
            })
            .collect();
        Self::new(dim, alpha, norm, atoms)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn norm(&self) -> &NormSpec {
        &self.norm
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn moments(&self) -> &[f64] {
        &self.moments
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    /// `nu_0 = H(S)`.
    pub fn total_mass(&self) -> f64 {
        self.atoms.iter().map(|a| a.weight).sum()
    }

    /// Same atoms read with another stability index. Fails if the result is not normalized.
    pub fn with_alpha(&self, alpha: f64) -> Result<Self> {
        Self::new(self.dim, alpha, self.norm.clone(), self.atoms.clone())
    }

    pub fn with_alpha_relaxed(&self, alpha: f64) -> Result<Self> {
        Self::relaxed(self.dim, alpha, self.norm.clone(), self.atoms.clone())
    }

    /// Equal atoms (within [`ATOM_MERGE_TOL`]) merged, in lexicographic order.
    pub fn merged(&self) -> Self {
        let mut out = self.clone();
        out.atoms = merge_atoms(self.atoms.clone(), ATOM_MERGE_TOL);
        out
    }

    /// `V(x) = sum_j w_j max_i (s_ji / x_i)^alpha`; `+inf` coordinates contribute nothing.
    pub fn exponent(&self, x: &[f64]) -> f64 {
        self.atoms
            .iter()
            .map(|a| {
                let m = a
                    .point
                    .iter()
                    .zip(x)
                    .map(|(s, xi)| s / xi)
                    .fold(0.0, f64::max);
                a.weight * m.powf(self.alpha)
            })
            .sum()
    }
}
