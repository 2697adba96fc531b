//! Angular measures, de Haan representers and the conversions between them.
//!
//! Total variation is always the unhalved `sup_A |H1(A) - H2(A)|`, the
//! convention under which every TV-based bound in [`crate::bounds`] is stated.
//! Halving it would silently scale those bounds by two.

mod angular;
mod constants;
pub mod io;
mod norm;
mod representer;

pub use angular::{
    merge_atoms, AngularMeasure, Atom, ATOM_MERGE_TOL, MOMENT_TOL, RENORMALIZE_TOL, SPHERE_TOL,
};
pub use constants::{
    m_alpha, m_alpha_closed_form, m_alpha_numeric, sphere_constants, NumericSup, SphereConstants,
};
pub use norm::{parse_lp, NormSpec};
pub use representer::{DeHaanRepresenter, PROB_TOL};

use crate::error::{invalid, Error, Result};

/// `Z* = b^{1/alpha} Theta` with `Theta ~ H / b`, `b = H(S)`.
pub fn canonical_representer(h: &AngularMeasure) -> Result<DeHaanRepresenter> {
    if !h.is_normalized() {
        let (coord, moment) = h
            .moments()
            .iter()
            .copied()
            .enumerate()
            .max_by(|a, b| (a.1 - 1.0).abs().total_cmp(&(b.1 - 1.0).abs()))
            .unwrap();
        return Err(Error::NotNormalized { coord, moment });
    }
    let b = h.total_mass();
    let scale = b.powf(1.0 / h.alpha());
    let atoms: Vec<Atom> = h
        .atoms()
        .iter()
        .map(|a| Atom::new(a.point.iter().map(|s| scale * s).collect(), a.weight / b))
        .collect();
    DeHaanRepresenter::new(h.dim(), h.alpha(), atoms)
}

/// Angular measure of `Z` on the sphere of `norm`: atom `z / tau(z)` with weight
/// `p tau(z)^alpha`. Coinciding atoms are merged.
pub fn angular_from_representer(z: &DeHaanRepresenter, norm: &NormSpec) -> Result<AngularMeasure> {
    norm.validate(z.dim())?;
    let mut atoms = Vec::with_capacity(z.atoms().len());
    for a in z.atoms() {
        let t = norm.evaluate(&a.point);
        if !(t > 0.0) {
            return invalid(format!("reference map vanishes on atom {:?}", a.point));
        }
        atoms.push(Atom::new(
            a.point.iter().map(|x| x / t).collect(),
            a.weight * t.powf(z.alpha()),
        ));
    }
    let atoms = merge_atoms(atoms, ATOM_MERGE_TOL);
    AngularMeasure::new(z.dim(), z.alpha(), norm.clone(), atoms)
}

/// Moves every atom to the sphere of `new_norm`: `u -> u / ||u||'` with weight `w ||u||'^alpha`.
pub fn reproject(h: &AngularMeasure, new_norm: &NormSpec) -> Result<AngularMeasure> {
    new_norm.validate(h.dim())?;
    if new_norm == h.norm() {
        return Ok(h.clone());
    }
    let atoms = h
        .atoms()
        .iter()
        .map(|a| {
            let t = new_norm.evaluate(&a.point);
            Atom::new(a.point.iter().map(|x| x / t).collect(), a.weight * t.powf(h.alpha()))
        })
        .collect();
    if h.is_normalized() {
        AngularMeasure::new(h.dim(), h.alpha(), new_norm.clone(), atoms)
    } else {
        AngularMeasure::relaxed(h.dim(), h.alpha(), new_norm.clone(), atoms)
    }
}

fn check_same_sphere(h1: &AngularMeasure, h2: &AngularMeasure) -> Result<()> {
    if h1.dim() != h2.dim() {
        return Err(Error::DimensionMismatch(h1.dim(), h2.dim()));
    }
    if h1.alpha() != h2.alpha() {
        return Err(Error::AlphaMismatch(h1.alpha(), h2.alpha()));
    }
    if h1.norm() != h2.norm() {
        return Err(Error::NormMismatch(h1.norm().label(), h2.norm().label()));
    }
    Ok(())
}

/// `sup_A |H1(A) - H2(A)|` for discrete measures on the same sphere.
///
/// Atoms are identified within [`ATOM_MERGE_TOL`]; the result is the larger of
/// the positive and negative parts of the signed difference.
pub fn tv_distance(h1: &AngularMeasure, h2: &AngularMeasure) -> Result<f64> {
    check_same_sphere(h1, h2)?;
    let signed: Vec<Atom> = h1
        .atoms()
        .iter()
        .cloned()
        .chain(h2.atoms().iter().map(|a| Atom::new(a.point.clone(), -a.weight)))
        .collect();
    let merged = merge_atoms(signed, ATOM_MERGE_TOL);
    let pos: f64 = merged.iter().map(|a| a.weight.max(0.0)).sum();
    let neg: f64 = merged.iter().map(|a| (-a.weight).max(0.0)).sum();
    Ok(pos.max(neg))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_of_comonotone_is_point_mass_at_ones() {
        let h = AngularMeasure::comonotone(2, 1.0, NormSpec::lp(1.0)).unwrap();
        let z = canonical_representer(&h).unwrap();
        assert_eq!(z.atoms().len(), 1);
        for x in &z.atoms()[0].point {
            assert!((x - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn canonical_of_independent_is_scaled_axes() {
        let h = AngularMeasure::independent(3, 1.0, NormSpec::lp(1.0)).unwrap();
        let z = canonical_representer(&h).unwrap();
        assert_eq!(z.atoms().len(), 3);
        for (i, a) in z.atoms().iter().enumerate() {
            assert!((a.weight - 1.0 / 3.0).abs() < 1e-15);
            assert!((a.point[i] - 3.0).abs() < 1e-14);
        }
    }

    #[test]
    fn canonical_single_atom_identity() {
        let h = AngularMeasure::new(1, 1.0, NormSpec::lp(1.0), vec![Atom::new(vec![1.0], 1.0)]).unwrap();
        let z = canonical_representer(&h).unwrap();
        assert_eq!(z.atoms()[0].point, vec![1.0]);
        assert_eq!(z.atoms()[0].weight, 1.0);
    }

    #[test]
    fn canonical_rejects_relaxed() {
        let h = AngularMeasure::relaxed(1, 1.0, NormSpec::lp(1.0), vec![Atom::new(vec![1.0], 2.0)]).unwrap();
        assert!(matches!(canonical_representer(&h), Err(Error::NotNormalized { .. })));
    }

    #[test]
    fn angular_of_point_mass() {
        let z = DeHaanRepresenter::comonotone(2, 1.0).unwrap();
        let h = angular_from_representer(&z, &NormSpec::lp(1.0)).unwrap();
        assert_eq!(h.atoms().len(), 1);
        assert_eq!(h.atoms()[0].point, vec![0.5, 0.5]);
        assert_eq!(h.atoms()[0].weight, 2.0);
    }

    #[test]
    fn angular_merges_radially_equivalent_atoms() {
        let z = DeHaanRepresenter::new(1, 1.0, vec![Atom::new(vec![2.0], 1.0 / 3.0), Atom::new(vec![0.5], 2.0 / 3.0)])
            .unwrap();
        let h = angular_from_representer(&z, &NormSpec::lp(1.0)).unwrap();
        assert_eq!(h.atoms().len(), 1);
        assert_eq!(h.atoms()[0].point, vec![1.0]);
        assert!((h.atoms()[0].weight - 1.0).abs() < 1e-15);
    }

    #[test]
    fn angular_of_scaled_axes_is_independent_measure() {
        let h = AngularMeasure::independent(3, 2.0, NormSpec::lp(2.0)).unwrap();
        let z = canonical_representer(&h).unwrap();
        let back = angular_from_representer(&z, &NormSpec::lp(2.0)).unwrap();
        assert!(tv_distance(&h, &back).unwrap() < 1e-12);
    }

    #[test]
    fn reproject_l1_to_linf() {
        let h = AngularMeasure::comonotone(2, 1.0, NormSpec::lp(1.0)).unwrap();
        let g = reproject(&h, &NormSpec::linf()).unwrap();
        assert_eq!(g.atoms()[0].point, vec![1.0, 1.0]);
        assert!((g.atoms()[0].weight - 1.0).abs() < 1e-15);
        let same = reproject(&h, &NormSpec::lp(1.0)).unwrap();
        assert_eq!(same.atoms(), h.atoms());
        let ind = AngularMeasure::independent(3, 1.0, NormSpec::lp(1.0)).unwrap();
        let r = reproject(&ind, &NormSpec::lp(3.0)).unwrap();
        assert_eq!(r.atoms(), ind.atoms());
    }

    #[test]
    fn tv_examples() {
        let n = NormSpec::lp(1.0);
        let com = AngularMeasure::comonotone(3, 1.0, n.clone()).unwrap();
        let ind = AngularMeasure::independent(3, 1.0, n.clone()).unwrap();
        assert!((tv_distance(&com, &ind).unwrap() - 3.0).abs() < 1e-12);
        assert_eq!(tv_distance(&com, &com).unwrap(), 0.0);
        let a = AngularMeasure::relaxed(2, 1.0, n.clone(), vec![Atom::new(vec![1.0, 0.0], 1.0), Atom::new(vec![0.0, 1.0], 1.0)]).unwrap();
        let b = AngularMeasure::relaxed(2, 1.0, n, vec![Atom::new(vec![1.0, 0.0], 0.5), Atom::new(vec![0.0, 1.0], 1.5)]).unwrap();
        assert!((tv_distance(&a, &b).unwrap() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn tv_rejects_mismatch() {
        let a = AngularMeasure::independent(2, 1.0, NormSpec::lp(1.0)).unwrap();
        let b = AngularMeasure::independent(2, 1.0, NormSpec::lp(2.0)).unwrap();
        assert!(matches!(tv_distance(&a, &b), Err(Error::NormMismatch(..))));
        let c = AngularMeasure::independent(3, 1.0, NormSpec::lp(1.0)).unwrap();
        assert!(matches!(tv_distance(&a, &c), Err(Error::DimensionMismatch(..))));
        let e = AngularMeasure::independent(2, 2.0, NormSpec::lp(1.0)).unwrap();
        assert!(matches!(tv_distance(&a, &e), Err(Error::AlphaMismatch(..))));
    }
}
