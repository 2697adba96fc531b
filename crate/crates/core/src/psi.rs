//! The decomposition `V(x) = sum_i x_i^{-alpha} Psi_i(x)` with 0-homogeneous
//! weights `Psi_i` in `[0, 1]`.

use serde::Serialize;

use crate::distances::{section_search, SearchOptions, SearchResult};
use crate::error::{invalid, Error, Result};
use crate::models::{husler_reiss, Family, MaxStableModel};
use crate::spectral::AngularMeasure;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PsiVector {
    pub values: Vec<f64>,
    pub x: Vec<f64>,
    pub source: String,
}

impl PsiVector {
    /// `sum_i x_i^{-alpha} Psi_i`.
    pub fn reconstruct(&self, alpha: f64) -> f64 {
        self.values.iter().zip(&self.x).map(|(p, x)| p * x.powf(-alpha)).sum()
    }
}

fn check_x(x: &[f64], dim: usize) -> Result<()> {
    if x.len() != dim {
        return Err(Error::DimensionMismatch(x.len(), dim));
    }
    if x.iter().any(|v| !(*v > 0.0 && v.is_finite())) {
        return invalid(format!("Psi needs a finite, strictly positive point, got {x:?}"));
    }
    Ok(())
}

/// Index of the cell holding `s`: the first coordinate attaining `max_j s_j / x_j`.
pub fn cell_of(s: &[f64], x: &[f64]) -> usize {
    let mut best = 0;
    for j in 1..s.len() {
        if s[j] / x[j] > s[best] / x[best] {
            best = j;
        }
    }
    best
}

fn psi_discrete_raw(h: &AngularMeasure, x: &[f64]) -> Vec<f64> {
    let mut psi = vec![0.0; h.dim()];
    for a in h.atoms() {
        let i = cell_of(&a.point, x);
        psi[i] += a.weight * a.point[i].powf(h.alpha());
    }
    psi
}

/// Assigns each atom to one cell and sums `w s_i^alpha` per cell.
pub fn psi_discrete(h: &AngularMeasure, x: &[f64]) -> Result<PsiVector> {
    check_x(x, h.dim())?;
    Ok(PsiVector { values: psi_discrete_raw(h, x), x: x.to_vec(), source: "discrete_spectral".into() })
}

fn psi_logistic(theta: f64, alpha: f64, x: &[f64]) -> Vec<f64> {
    // Psi_i = (z_i / sum z)^{1 - theta}, z = x^{-alpha/theta}
    let t: Vec<f64> = x.iter().map(|v| -(alpha / theta) * v.ln()).collect();
    let m = t.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let lse = m + t.iter().map(|v| (v - m).exp()).sum::<f64>().ln();
    t.iter().map(|v| ((1.0 - theta) * (v - lse)).exp()).collect()
}

pub(crate) fn psi_unchecked(model: &MaxStableModel, x: &[f64]) -> Vec<f64> {
    let d = model.dim();
    match model.family() {
        Family::Independent => vec![1.0; d],
        Family::Comonotone => {
            let mut psi = vec![0.0; d];
            let first_min = (1..d).fold(0, |b, j| if x[j] < x[b] { j } else { b });
            psi[first_min] = 1.0;
            psi
        }
        Family::Logistic { theta } => psi_logistic(*theta, model.alpha(), x),
        Family::DiscreteSpectral(h) => psi_discrete_raw(h, x),
        Family::HuslerReiss { lambda } | Family::BrownResnick { lambda, .. } => {
            (0..d).map(|i| husler_reiss::psi_hr(lambda, x, i, model.mvn_options()).0).collect()
        }
    }
}

/// `Psi(x)` for any catalog model.
pub fn psi_model(model: &MaxStableModel, x: &[f64]) -> Result<PsiVector> {
    check_x(x, model.dim())?;
    Ok(PsiVector { values: psi_unchecked(model, x), x: x.to_vec(), source: model.family().tag().into() })
}

/// `sup_u sum_i |Psi^1_i(u) - Psi^2_i(u)|` over the canonical section.
pub fn psi_sup_discrepancy(m1: &MaxStableModel, m2: &MaxStableModel, opts: &SearchOptions) -> Result<SearchResult> {
    if m1.dim() != m2.dim() {
        return Err(Error::DimensionMismatch(m1.dim(), m2.dim()));
    }
    if m1.alpha() != m2.alpha() {
        return Err(Error::AlphaMismatch(m1.alpha(), m2.alpha()));
    }
    let f = |u: &[f64]| {
        let a = psi_unchecked(m1, u);
        let b = psi_unchecked(m2, u);
        a.iter().zip(&b).map(|(p, q)| (p - q).abs()).sum::<f64>()
    };
    Ok(section_search(m1.dim(), opts, f))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::{Atom, NormSpec};
    use nalgebra::DMatrix;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_measure(rng: &mut ChaCha8Rng, dim: usize, alpha: f64) -> AngularMeasure {
        // random simplex points, then one axis atom per coordinate tops up each moment to 1
        let k = rng.random_range(1..6);
        let norm = NormSpec::lp(alpha);
        let mut atoms = Vec::new();
        let mut moments = vec![0.0; dim];
        for _ in 0..k {
            let raw: Vec<f64> = (0..dim).map(|_| rng.random::<f64>()).collect();
            let t = norm.evaluate(&raw);
            let s: Vec<f64> = raw.iter().map(|v| v / t).collect();
            let w = 0.5 / k as f64;
            for i in 0..dim {
                moments[i] += w * s[i].powf(alpha);
            }
            atoms.push(Atom::new(s, w));
        }
        for (i, m) in moments.iter().enumerate() {
            let mut e = vec![0.0; dim];
            e[i] = 1.0;
            atoms.push(Atom::new(e, 1.0 - m));
        }
        AngularMeasure::new(dim, alpha, norm, atoms).unwrap()
    }

    #[test]
    fn catalog_examples() {
        let com = AngularMeasure::comonotone(3, 1.0, NormSpec::lp(1.0)).unwrap();
        let p = psi_discrete(&com, &[1.0, 1.0, 1.0]).unwrap();
        assert!((p.values[0] - 1.0).abs() < 1e-15 && p.values[1] == 0.0 && p.values[2] == 0.0);
        let ind = AngularMeasure::independent(3, 2.0, NormSpec::lp(2.0)).unwrap();
        assert_eq!(psi_discrete(&ind, &[0.3, 2.0, 7.0]).unwrap().values, vec![1.0; 3]);
        let one = AngularMeasure::independent(1, 1.0, NormSpec::lp(1.0)).unwrap();
        assert_eq!(psi_discrete(&one, &[4.0]).unwrap().values, vec![1.0]);
        assert!(psi_discrete(&ind, &[0.0, 1.0, 1.0]).is_err());
    }

    #[test]
    fn reconstruction_discrete() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..300 {
            let dim = rng.random_range(1..5);
            let alpha = [0.5, 1.0, 2.0][rng.random_range(0..3)];
            let h = random_measure(&mut rng, dim, alpha);
            let x: Vec<f64> = (0..dim).map(|_| (rng.random::<f64>() * 4.0 - 2.0).exp()).collect();
            let p = psi_discrete(&h, &x).unwrap();
            let v = h.exponent(&x);
            assert!((p.reconstruct(alpha) - v).abs() <= 1e-12 * v.max(1.0));
            assert!(p.values.iter().all(|&q| (0.0..=1.0 + 1e-12).contains(&q)));
            let scaled: Vec<f64> = x.iter().map(|v| 3.7 * v).collect();
            let q = psi_discrete(&h, &scaled).unwrap();
            for (a, b) in p.values.iter().zip(&q.values) {
                assert!((a - b).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn reconstruction_closed_families() {
        let x = [0.7, 1.9, 1.2];
        for model in [
            MaxStableModel::logistic(3, 0.35, 1.5).unwrap(),
            MaxStableModel::logistic(3, 1.0, 1.0).unwrap(),
            MaxStableModel::independent(3, 2.0).unwrap(),
            MaxStableModel::comonotone(3, 0.5).unwrap(),
        ] {
            let p = psi_model(&model, &x).unwrap();
            let v = model.exponent(&x).unwrap();
            assert!((p.reconstruct(model.alpha()) - v).abs() < 1e-12 * v);
        }
    }

    #[test]
    fn reconstruction_husler_reiss() {
        let l = DMatrix::from_row_slice(3, 3, &[0.0, 0.9, 1.4, 0.9, 0.0, 1.1, 1.4, 1.1, 0.0]);
        let model = MaxStableModel::husler_reiss(l).unwrap();
        let x = [1.0, 2.5, 0.6];
        let p = psi_model(&model, &x).unwrap();
        assert!((p.reconstruct(1.0) - model.exponent(&x).unwrap()).abs() < 1e-6);
        let p2 = psi_model(&model, &[2.0, 5.0, 1.2]).unwrap();
        for (a, b) in p.values.iter().zip(&p2.values) {
            assert!((a - b).abs() < 1e-7);
        }
    }

    #[test]
    fn discrepancy_examples() {
        let com = MaxStableModel::comonotone(2, 1.0).unwrap();
        let ind = MaxStableModel::independent(2, 1.0).unwrap();
        let opts = SearchOptions::default();
        assert!(psi_sup_discrepancy(&com, &ind, &opts).unwrap().value >= 1.0);
        assert_eq!(psi_sup_discrepancy(&ind, &ind, &opts).unwrap().value, 0.0);
        let bad = MaxStableModel::independent(2, 2.0).unwrap();
        assert!(psi_sup_discrepancy(&com, &bad, &opts).is_err());
    }

    #[test]
    fn logistic_discrepancy_against_grid() {
        let lg = MaxStableModel::logistic(2, 0.5, 1.0).unwrap();
        let ind = MaxStableModel::independent(2, 1.0).unwrap();
        let r = psi_sup_discrepancy(&lg, &ind, &SearchOptions::default()).unwrap();
        // sum_i (1 - Psi_i) on face u_0 = 1, dense grid in ln u_1
        let mut grid = 0.0f64;
        for k in 0..=400 {
            let u = [1.0, (k as f64 / 400.0 * 50f64.ln()).exp()];
            let p = psi_model(&lg, &u).unwrap();
            grid = grid.max(p.values.iter().map(|v| 1.0 - v).sum());
        }
        assert!(r.value >= grid - 1e-12);
        assert!(r.value <= grid + 1e-3);
    }
}
