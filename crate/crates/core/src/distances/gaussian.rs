use nalgebra::{DMatrix, DVector, SymmetricEigen};

use crate::error::{invalid, Error, Result};

/// Eigenvalues down to `-PSD_CLIP` are treated as zero.
pub const PSD_CLIP: f64 = 1e-12;

/// Symmetric square root by eigendecomposition.
pub fn psd_sqrt(m: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    if m.nrows() != m.ncols() {
        return invalid("matrix square root needs a square matrix");
    }
    let e = SymmetricEigen::new(m.clone());
    if let Some(&low) = e.eigenvalues.iter().find(|&&v| v < -PSD_CLIP) {
        return Err(Error::NotPsd(low));
    }
    let s = e.eigenvalues.map(|v| v.max(0.0).sqrt());
    Ok(&e.eigenvectors * DMatrix::from_diagonal(&s) * e.eigenvectors.transpose())
}

/// `(|mu1 - mu2|^2 + tr(S1 + S2 - 2 (S2^{1/2} S1 S2^{1/2})^{1/2}))^{1/2}`, the
/// 2-Wasserstein distance between Gaussians and a lower bound for any laws
/// with these moments.
pub fn w2_gelbrich(mu1: &DVector<f64>, s1: &DMatrix<f64>, mu2: &DVector<f64>, s2: &DMatrix<f64>) -> Result<f64> {
    let d = mu1.len();
    if mu2.len() != d || s1.nrows() != d || s2.nrows() != d || s1.ncols() != d || s2.ncols() != d {
        return Err(Error::DimensionMismatch(d, s2.nrows()));
    }
    let sym = |m: &DMatrix<f64>| (m + m.transpose()) * 0.5;
    let r2 = psd_sqrt(&sym(s2))?;
    let cross = psd_sqrt(&sym(&(&r2 * sym(s1) * &r2)))?;
    let tr = s1.trace() + s2.trace() - 2.0 * cross.trace();
    Ok(((mu1 - mu2).norm_squared() + tr.max(0.0)).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn square_root_squares_back() {
        let m = DMatrix::from_row_slice(3, 3, &[4.0, 1.0, 0.5, 1.0, 3.0, 0.2, 0.5, 0.2, 2.0]);
        let r = psd_sqrt(&m).unwrap();
        assert!((&r * &r - &m).abs().max() < 1e-13);
        let neg = DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 2.0, 1.0]);
        assert!(psd_sqrt(&neg).is_err());
    }

    #[test]
    fn gelbrich_special_cases() {
        let z1 = DVector::zeros(1);
        let v = w2_gelbrich(&z1, &DMatrix::from_element(1, 1, 4.0), &z1, &DMatrix::from_element(1, 1, 2.25)).unwrap();
        assert!((v - 0.5).abs() < 1e-15);
        let s = DMatrix::from_row_slice(2, 2, &[2.0, 0.3, 0.3, 1.0]);
        let z = DVector::zeros(2);
        assert!(w2_gelbrich(&z, &s, &z, &s).unwrap() < 1e-7);
        let d1 = [1.0f64, 4.0, 0.25];
        let d2 = [2.0f64, 1.0, 0.5];
        let a = DMatrix::from_diagonal(&DVector::from_row_slice(&d1));
        let b = DMatrix::from_diagonal(&DVector::from_row_slice(&d2));
        let mu = DVector::from_row_slice(&[1.0, 0.0, -1.0]);
        let z3 = DVector::zeros(3);
        let closed: f64 = d1.iter().zip(&d2).map(|(x, y)| (x.sqrt() - y.sqrt()).powi(2)).sum::<f64>() + 2.0;
        assert!((w2_gelbrich(&mu, &a, &z3, &b).unwrap() - closed.sqrt()).abs() < 1e-14);
    }
}
