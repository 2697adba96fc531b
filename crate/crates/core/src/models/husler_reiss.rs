use nalgebra::DMatrix;

use crate::error::{invalid, Error, Result};
use crate::mvn::{min_eigenvalue, mvn_cdf, MvnOptions, MvnProblem, PSD_SLACK};

/// Below this a pair is treated as comonotone.
pub const TINY_LAMBDA: f64 = 1e-8;

/// `lambda_ij = sqrt(Sigma_ii + Sigma_jj - 2 Sigma_ij)`.
pub fn lambda_from_covariance(cov: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let d = cov.nrows();
    if cov.ncols() != d || d == 0 {
        return invalid("covariance must be a nonempty square matrix");
    }
    for i in 0..d {
        for j in 0..i {
            if (cov[(i, j)] - cov[(j, i)]).abs() > 1e-12 * (1.0 + cov[(i, j)].abs()) {
                return invalid("covariance must be symmetric");
            }
        }
    }
    let ev = min_eigenvalue(cov);
    if ev < -PSD_SLACK {
        return Err(Error::NotPsd(ev));
    }
    Ok(DMatrix::from_fn(d, d, |i, j| {
        if i == j {
            0.0
        } else {
            (cov[(i, i)] + cov[(j, j)] - 2.0 * cov[(i, j)]).max(0.0).sqrt()
        }
    }))
}

/// `(R^(i))_{jk} = (l_ij^2 + l_ik^2 - l_jk^2) / (2 l_ij l_ik)` over the indices `others`.
pub fn conditional_correlation(lambda: &DMatrix<f64>, i: usize, others: &[usize]) -> DMatrix<f64> {
    let m = others.len();
    DMatrix::from_fn(m, m, |a, b| {
        if a == b {
            return 1.0;
        }
        let (j, k) = (others[a], others[b]);
        let (lj, lk, ljk) = (lambda[(i, j)], lambda[(i, k)], lambda[(j, k)]);
        (lj * lj + lk * lk - ljk * ljk) / (2.0 * lj * lk)
    })
}

/// Symmetry, zero diagonal, positive off-diagonal entries, and positive
/// semidefiniteness of every `R^(i)`.
pub fn validate_lambda(lambda: &DMatrix<f64>) -> Result<()> {
    let d = lambda.nrows();
    if lambda.ncols() != d || d == 0 {
        return invalid("lambda matrix must be a nonempty square matrix");
    }
    for i in 0..d {
        if lambda[(i, i)] != 0.0 {
            return invalid(format!("lambda diagonal entry {i} must be zero"));
        }
        for j in 0..i {
            let l = lambda[(i, j)];
            if (l - lambda[(j, i)]).abs() > 1e-12 * (1.0 + l.abs()) {
                return invalid("lambda matrix must be symmetric");
            }
            if !(l > 0.0 && l.is_finite()) {
                return invalid(format!("lambda[{i}][{j}] = {l}: off-diagonal entries must be positive"));
            }
        }
    }
    for i in 0..d {
        let others: Vec<usize> = (0..d).filter(|&j| j != i && lambda[(i, j)] >= TINY_LAMBDA).collect();
        if others.len() < 2 {
            continue;
        }
        let ev = min_eigenvalue(&conditional_correlation(lambda, i, &others));
        if ev < -PSD_SLACK {
            return Err(Error::NotPsd(ev));
        }
    }
    Ok(())
}

/// `Psi_i(x) = Phi_{d-1}(q^(i)(x); R^(i))` with `q_j = l_ij/2 + ln(x_j/x_i)/l_ij`.
///
/// Coordinates at `+inf` drop out. A partner `j` with `l_ij < TINY_LAMBDA` is
/// resolved by the lowest-index argmax rule of the comonotone limit.
/// Returns the value and the reported integration error.
pub fn psi_hr(lambda: &DMatrix<f64>, x: &[f64], i: usize, opts: &MvnOptions) -> (f64, f64) {
    let d = lambda.nrows();
    if x[i].is_infinite() {
        return (0.0, 0.0);
    }
    let mut others = Vec::with_capacity(d);
    for j in (0..d).filter(|&j| j != i) {
        if x[j].is_infinite() {
            continue;
        }
        if lambda[(i, j)] < TINY_LAMBDA {
            let i_wins = x[i] < x[j] || (x[i] == x[j] && i < j);
            if !i_wins {
                return (0.0, 0.0);
            }
            continue;
        }
        others.push(j);
    }
    if others.is_empty() {
        return (1.0, 0.0);
    }
    let q: Vec<f64> = others
        .iter()
        .map(|&j| {
            let l = lambda[(i, j)];
            l / 2.0 + (x[j] / x[i]).ln() / l
        })
        .collect();
    let corr = conditional_correlation(lambda, i, &others).map(|v| v.clamp(-1.0, 1.0));
    let problem = MvnProblem { upper: q, corr };
    let r = mvn_cdf(&problem, opts);
    (r.value, r.error)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mvn::{bivariate_normal_cdf, std_normal_cdf};

    #[test]
    fn variogram_from_covariance() {
        let cov = DMatrix::from_row_slice(2, 2, &[1.0, 0.25, 0.25, 2.0]);
        let l = lambda_from_covariance(&cov).unwrap();
        assert!((l[(0, 1)] - 2.5f64.sqrt()).abs() < 1e-15);
        assert_eq!(l[(1, 1)], 0.0);
    }

    #[test]
    fn rejects_bad_lambda() {
        let bad = DMatrix::from_row_slice(2, 2, &[0.0, 0.0, 0.0, 0.0]);
        assert!(validate_lambda(&bad).is_err());
        let asym = DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 2.0, 0.0]);
        assert!(validate_lambda(&asym).is_err());
        // violates the triangle-type condition: R^(1)_{23} = (1 + 1 - 9)/2 < -1
        let l = DMatrix::from_row_slice(3, 3, &[0.0, 1.0, 1.0, 1.0, 0.0, 3.0, 1.0, 3.0, 0.0]);
        assert!(validate_lambda(&l).is_err());
    }

    #[test]
    fn bivariate_psi_at_diagonal() {
        let lam = 1.3;
        let l = DMatrix::from_row_slice(2, 2, &[0.0, lam, lam, 0.0]);
        let (v, _) = psi_hr(&l, &[2.0, 2.0], 0, &MvnOptions::default());
        assert!((v - std_normal_cdf(lam / 2.0)).abs() < 1e-16);
        let (v, _) = psi_hr(&l, &[1.0, 1e300], 0, &MvnOptions::default());
        assert!((v - 1.0).abs() < 1e-12);
    }

    #[test]
    fn equilateral_trivariate() {
        let lam = 0.8;
        let l = DMatrix::from_fn(3, 3, |i, j| if i == j { 0.0 } else { lam });
        let (v, _) = psi_hr(&l, &[1.0, 1.0, 1.0], 0, &MvnOptions::default());
        let expect = bivariate_normal_cdf(lam / 2.0, lam / 2.0, 0.5).unwrap();
        assert!((v - expect).abs() < 1e-15);
    }

    #[test]
    fn tiny_lambda_follows_argmax_rule() {
        let l = DMatrix::from_row_slice(2, 2, &[0.0, 1e-10, 1e-10, 0.0]);
        let o = MvnOptions::default();
        assert_eq!(psi_hr(&l, &[1.0, 1.0], 0, &o).0, 1.0);
        assert_eq!(psi_hr(&l, &[1.0, 1.0], 1, &o).0, 0.0);
        assert_eq!(psi_hr(&l, &[2.0, 1.0], 0, &o).0, 0.0);
        assert_eq!(psi_hr(&l, &[2.0, 1.0], 1, &o).0, 1.0);
    }
}
