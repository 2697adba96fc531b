//! Max-stable models with `alpha`-Fréchet margins, given by their exponent
//! function `V = -ln F`.
//!
//! Coordinates equal to `+inf` are valid inputs everywhere and drop the
//! coordinate, which is how margins are evaluated.

mod archimax;
pub mod husler_reiss;
mod margins;
pub mod spec;

use nalgebra::DMatrix;

pub use archimax::{archimax_copula, Generator};
pub use margins::{MarginSpec, MarginTransformed};
pub use spec::ModelSpec;

use crate::error::{invalid, Error, Result};
use crate::mvn::MvnOptions;
use crate::spectral::AngularMeasure;

#[derive(Debug, Clone)]
pub enum Family {
    Logistic { theta: f64 },
    Independent,
    Comonotone,
    DiscreteSpectral(AngularMeasure),
    HuslerReiss { lambda: DMatrix<f64> },
    /// Stored with its variogram matrix; evaluated as Hüsler–Reiss.
    BrownResnick { covariance: DMatrix<f64>, lambda: DMatrix<f64> },
}

impl Family {
    pub fn tag(&self) -> &'static str {
        match self {
            Family::Logistic { .. } => "logistic",
            Family::Independent => "independent",
            Family::Comonotone => "comonotone",
            Family::DiscreteSpectral(_) => "discrete_spectral",
            Family::HuslerReiss { .. } => "husler_reiss",
            Family::BrownResnick { .. } => "brown_resnick",
        }
    }
}

#[derive(Debug, Clone)]
pub struct MaxStableModel {
    dim: usize,
    alpha: f64,
    family: Family,
    mvn: MvnOptions,
}

fn check(dim: usize, alpha: f64) -> Result<()> {
    if dim == 0 {
        return invalid("dimension must be at least 1");
    }
    if !(alpha > 0.0 && alpha.is_finite()) {
        return invalid(format!("alpha must be positive, got {alpha}"));
    }
    Ok(())
}

impl MaxStableModel {
    /// `V(x) = (sum x_j^{-alpha/theta})^theta`, `0 < theta <= 1`.
    pub fn logistic(dim: usize, theta: f64, alpha: f64) -> Result<Self> {
        check(dim, alpha)?;
        if !(theta > 0.0 && theta <= 1.0) {
            return invalid(format!("logistic theta must be in (0, 1], got {theta}"));
        }
        Ok(Self::raw(dim, alpha, Family::Logistic { theta }))
    }

    pub fn independent(dim: usize, alpha: f64) -> Result<Self> {
        check(dim, alpha)?;
        Ok(Self::raw(dim, alpha, Family::Independent))
    }

    pub fn comonotone(dim: usize, alpha: f64) -> Result<Self> {
        check(dim, alpha)?;
        Ok(Self::raw(dim, alpha, Family::Comonotone))
    }

    /// Requires a normalized measure so that the margins are `alpha`-Fréchet.
    pub fn discrete_spectral(h: AngularMeasure) -> Result<Self> {
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
        Ok(Self::raw(h.dim(), h.alpha(), Family::DiscreteSpectral(h)))
    }

    /// Hüsler–Reiss with variogram-root matrix `lambda`; `alpha = 1`.
    pub fn husler_reiss(lambda: DMatrix<f64>) -> Result<Self> {
        husler_reiss::validate_lambda(&lambda)?;
        Ok(Self::raw(lambda.nrows(), 1.0, Family::HuslerReiss { lambda }))
    }

    /// Brown–Resnick law of `Z_j = exp(U_j - Var(U_j)/2)`, `U ~ N(0, covariance)`.
    pub fn brown_resnick(covariance: DMatrix<f64>) -> Result<Self> {
        let lambda = husler_reiss::lambda_from_covariance(&covariance)?;
        husler_reiss::validate_lambda(&lambda)?;
        Ok(Self::raw(covariance.nrows(), 1.0, Family::BrownResnick { covariance, lambda }))
    }

    fn raw(dim: usize, alpha: f64, family: Family) -> Self {
        MaxStableModel { dim, alpha, family, mvn: MvnOptions::default() }
    }

    pub fn with_mvn_options(mut self, opts: MvnOptions) -> Self {
        self.mvn = opts;
        self
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn family(&self) -> &Family {
        &self.family
    }

    pub fn mvn_options(&self) -> &MvnOptions {
        &self.mvn
    }

    /// Variogram-root matrix for the Hüsler–Reiss style families.
    pub fn lambda(&self) -> Option<&DMatrix<f64>> {
        match &self.family {
            Family::HuslerReiss { lambda } | Family::BrownResnick { lambda, .. } => Some(lambda),
            _ => None,
        }
    }

    pub fn spectral_measure(&self) -> Option<&AngularMeasure> {
        match &self.family {
            Family::DiscreteSpectral(h) => Some(h),
            _ => None,
        }
    }

    /// Same dependence structure with a different index, where that is
    /// meaningful without reparametrizing: logistic, independent, comonotone,
    /// and discrete spectral models (the measure keeps its atoms).
    pub fn with_alpha(&self, alpha: f64) -> Result<Self> {
        check(self.dim, alpha)?;
        let family = match &self.family {
            Family::DiscreteSpectral(h) => Family::DiscreteSpectral(h.with_alpha(alpha)?),
            Family::HuslerReiss { .. } | Family::BrownResnick { .. } => {
                return Err(Error::Unsupported("Hüsler–Reiss models are defined with alpha = 1".into()))
            }
            f => f.clone(),
        };
        Ok(MaxStableModel { dim: self.dim, alpha, family, mvn: self.mvn })
    }

    pub(crate) fn check_point(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.dim {
            return Err(Error::DimensionMismatch(x.len(), self.dim));
        }
        if x.iter().any(|v| !(*v > 0.0)) {
            return invalid(format!("evaluation point must be strictly positive, got {x:?}"));
        }
        if x.iter().all(|v| v.is_infinite()) {
            return invalid("at least one coordinate must be finite");
        }
        Ok(())
    }

    /// `V(x)` together with the numeric error estimate of the normal
    /// integrals (zero for closed-form families).
    pub fn exponent_detail(&self, x: &[f64]) -> Result<(f64, f64)> {
        self.check_point(x)?;
        Ok(self.exponent_unchecked(x))
    }

    pub fn exponent(&self, x: &[f64]) -> Result<f64> {
        Ok(self.exponent_detail(x)?.0)
    }

    pub(crate) fn exponent_unchecked(&self, x: &[f64]) -> (f64, f64) {
        let a = self.alpha;
        match &self.family {
            Family::Independent => (x.iter().map(|v| v.powf(-a)).sum(), 0.0),
            Family::Comonotone => (x.iter().map(|v| v.powf(-a)).fold(0.0, f64::max), 0.0),
            Family::Logistic { theta } => {
                // theta * lse(-(alpha/theta) ln x) in log space to survive small theta
                let t: Vec<f64> = x.iter().filter(|v| v.is_finite()).map(|v| -(a / theta) * v.ln()).collect();
                let m = t.iter().copied().fold(f64::NEG_INFINITY, f64::max);
                let lse = m + t.iter().map(|v| (v - m).exp()).sum::<f64>().ln();
                ((theta * lse).exp(), 0.0)
            }
            Family::DiscreteSpectral(h) => (h.exponent(x), 0.0),
            Family::HuslerReiss { lambda } | Family::BrownResnick { lambda, .. } => {
                let mut v = 0.0;
                let mut err = 0.0;
                for i in 0..self.dim {
                    if x[i].is_infinite() {
                        continue;
                    }
                    let (p, e) = husler_reiss::psi_hr(lambda, x, i, &self.mvn);
                    v += p / x[i];
                    err += e / x[i];
                }
                (v, err)
            }
        }
    }

    /// `F(x) = exp(-V(x))`.
    pub fn cdf(&self, x: &[f64]) -> Result<f64> {
        Ok((-self.exponent(x)?).exp())
    }

    /// Stable tail dependence function `l(z) = V(z^{-1/alpha})`, `0^{-1/alpha} = inf`.
    pub fn stdf(&self, z: &[f64]) -> Result<f64> {
        if z.len() != self.dim {
            return Err(Error::DimensionMismatch(z.len(), self.dim));
        }
        if z.iter().any(|v| !(*v >= 0.0 && v.is_finite())) {
            return invalid("stdf argument must be finite and nonnegative");
        }
        if z.iter().all(|&v| v == 0.0) {
            return invalid("stdf argument must be nonzero");
        }
        let x: Vec<f64> = z.iter().map(|&v| if v == 0.0 { f64::INFINITY } else { v.powf(-1.0 / self.alpha) }).collect();
        self.exponent(&x)
    }

    /// Extreme-value copula `C(u) = exp(-l(-ln u))` on `(0, 1]^d`.
    pub fn ev_copula(&self, u: &[f64]) -> Result<f64> {
        if u.iter().any(|v| !(*v > 0.0 && *v <= 1.0)) {
            return invalid(format!("copula argument must lie in (0, 1]^d, got {u:?}"));
        }
        if u.iter().all(|&v| v == 1.0) {
            if u.len() != self.dim {
                return Err(Error::DimensionMismatch(u.len(), self.dim));
            }
            return Ok(1.0);
        }
        let z: Vec<f64> = u.iter().map(|v| -v.ln()).collect();
        Ok((-self.stdf(&z)?).exp())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mvn::std_normal_cdf;
    use crate::spectral::{canonical_representer, Atom, NormSpec};

    fn close(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() <= tol, "{a} vs {b}");
    }

    #[test]
    fn logistic_values() {
        let m = MaxStableModel::logistic(2, 1.0, 1.0).unwrap();
        close(m.exponent(&[1.0, 1.0]).unwrap(), 2.0, 1e-15);
        let m = MaxStableModel::logistic(2, 0.5, 1.0).unwrap();
        close(m.exponent(&[1.0, 1.0]).unwrap(), 2f64.sqrt(), 1e-15);
        close(m.exponent(&[1.0, f64::INFINITY]).unwrap(), 1.0, 1e-15);
        assert!(MaxStableModel::logistic(2, 0.0, 1.0).is_err());
        assert!(MaxStableModel::logistic(2, 1.5, 1.0).is_err());
        // small theta at tiny x does not overflow
        let m = MaxStableModel::logistic(3, 0.01, 2.0).unwrap();
        let v = m.exponent(&[1e-3, 1e-3, 1e-3]).unwrap();
        close(v / 1e6, 3f64.powf(0.01), 1e-12);
    }

    #[test]
    fn independent_and_comonotone() {
        let ind = MaxStableModel::independent(3, 2.0).unwrap();
        close(ind.exponent(&[1.0; 3]).unwrap(), 3.0, 0.0);
        let com = MaxStableModel::comonotone(2, 1.0).unwrap();
        close(com.exponent(&[2.0, 4.0]).unwrap(), 0.5, 0.0);
        close(MaxStableModel::comonotone(5, 0.7).unwrap().exponent(&[1.0; 5]).unwrap(), 1.0, 0.0);
    }

    #[test]
    fn discrete_spectral_matches_closed_families() {
        let x = [0.7, 1.9, 3.2];
        let h = AngularMeasure::comonotone(3, 1.5, NormSpec::lp(1.5)).unwrap();
        let m = MaxStableModel::discrete_spectral(h).unwrap();
        close(m.exponent(&x).unwrap(), MaxStableModel::comonotone(3, 1.5).unwrap().exponent(&x).unwrap(), 1e-12);
        let h = AngularMeasure::independent(3, 1.5, NormSpec::lp(2.0)).unwrap();
        let m = MaxStableModel::discrete_spectral(h).unwrap();
        close(m.exponent(&x).unwrap(), MaxStableModel::independent(3, 1.5).unwrap().exponent(&x).unwrap(), 1e-12);
    }

    #[test]
    fn discrete_spectral_matches_representer_expectation() {
        // the same measure written as an expectation over its canonical representer
        let atoms = vec![
            Atom::new(vec![0.6, 0.4], 1.0),
            Atom::new(vec![0.2, 0.8], 0.5),
            Atom::new(vec![1.0, 0.0], 0.4),
            Atom::new(vec![0.0, 1.0], 0.2),
            Atom::new(vec![0.5, 0.5], 0.0),
        ];
        // solve the remaining weight so both moments are one with alpha = 1 on l1
        let m0: f64 = atoms.iter().map(|a| a.weight * a.point[0]).sum();
        let m1: f64 = atoms.iter().map(|a| a.weight * a.point[1]).sum();
        let mut atoms = atoms;
        atoms[2].weight += 1.0 - m0;
        atoms[3].weight += 1.0 - m1;
        atoms.retain(|a| a.weight > 0.0);
        let h = AngularMeasure::new(2, 1.0, NormSpec::lp(1.0), atoms).unwrap();
        let z = canonical_representer(&h).unwrap();
        let m = MaxStableModel::discrete_spectral(h).unwrap();
        for x in [[1.0, 1.0], [0.3, 2.0], [5.0, 0.9]] {
            close(m.exponent(&x).unwrap(), z.exponent(&x), 1e-12);
        }
    }

    #[test]
    fn husler_reiss_limits_and_diagonal() {
        let big = MaxStableModel::husler_reiss(DMatrix::from_row_slice(2, 2, &[0.0, 20.0, 20.0, 0.0])).unwrap();
        close(big.exponent(&[1.0, 1.0]).unwrap(), 2.0, 1e-6);
        let small = MaxStableModel::husler_reiss(DMatrix::from_row_slice(2, 2, &[0.0, 0.01, 0.01, 0.0])).unwrap();
        close(small.exponent(&[1.0, 1.0]).unwrap(), 1.0, 1e-2);
        let lam = 0.9;
        let m = MaxStableModel::husler_reiss(DMatrix::from_row_slice(2, 2, &[0.0, lam, lam, 0.0])).unwrap();
        for t in [0.5, 1.0, 3.0] {
            close(m.exponent(&[t, t]).unwrap(), 2.0 / t * std_normal_cdf(lam / 2.0), 1e-15);
        }
        close(m.exponent(&[2.0, f64::INFINITY]).unwrap(), 0.5, 1e-15);
    }

    fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
        let h = (b - a) / n as f64;
        let mut s = f(a) + f(b);
        for i in 1..n {
            s += f(a + i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
        }
        s * h / 3.0
    }

    #[test]
    fn husler_reiss_bivariate_against_lognormal_quadrature() {
        // Z1 = 1, Z2 = exp(lam N - lam^2/2): V(x) = E max(Z1/x1, Z2/x2)
        for lam in [0.3f64, 1.0, 2.5] {
            let m = MaxStableModel::husler_reiss(DMatrix::from_row_slice(2, 2, &[0.0, lam, lam, 0.0])).unwrap();
            for x in [[1.0f64, 1.0], [0.4, 2.0], [3.0, 0.7]] {
                let g = |n: f64| crate::mvn::std_normal_pdf(n) * (1.0 / x[0]).max((lam * n - lam * lam / 2.0).exp() / x[1]);
                let kink = ((x[1] / x[0]).ln() + lam * lam / 2.0) / lam;
                let k = kink.clamp(-15.0, 15.0);
                let oracle = simpson(g, -15.0, k, 20_000) + simpson(g, k, 15.0, 20_000);
                close(m.exponent(&x).unwrap(), oracle, 1e-10);
            }
        }
    }

    #[test]
    fn brown_resnick_from_covariance() {
        let cov = DMatrix::from_row_slice(2, 2, &[1.0, 0.3, 0.3, 0.5]);
        let br = MaxStableModel::brown_resnick(cov).unwrap();
        let lam = (1.0f64 + 0.5 - 0.6).sqrt();
        close(br.exponent(&[1.0, 1.0]).unwrap(), 2.0 * std_normal_cdf(lam / 2.0), 1e-15);
        assert_eq!(br.family().tag(), "brown_resnick");
        let zero = MaxStableModel::brown_resnick(DMatrix::zeros(2, 2));
        assert!(zero.is_err());
    }

    #[test]
    fn stdf_and_copula() {
        let ind = MaxStableModel::independent(3, 2.0).unwrap();
        close(ind.stdf(&[0.2, 0.0, 0.7]).unwrap(), 0.9, 1e-15);
        let com = MaxStableModel::comonotone(3, 0.5).unwrap();
        close(com.stdf(&[0.2, 0.1, 0.7]).unwrap(), 0.7, 1e-15);
        let th = 0.4;
        let lg = MaxStableModel::logistic(2, th, 1.7).unwrap();
        let z = [0.3f64, 1.1f64];
        close(lg.stdf(&z).unwrap(), (z[0].powf(1.0 / th) + z[1].powf(1.0 / th)).powf(th), 1e-14);
        close(lg.stdf(&[0.0, 1.0]).unwrap(), 1.0, 1e-15);
        assert!(lg.stdf(&[0.0, 0.0]).is_err());

        let u = [0.3, 0.8];
        close(MaxStableModel::independent(2, 1.0).unwrap().ev_copula(&u).unwrap(), 0.24, 1e-15);
        close(MaxStableModel::comonotone(2, 3.0).unwrap().ev_copula(&u).unwrap(), 0.3, 1e-15);
        let e1 = (-1.0f64).exp();
        let lg = MaxStableModel::logistic(2, 0.5, 1.0).unwrap();
        close(lg.ev_copula(&[e1, e1]).unwrap(), (-(2f64.sqrt())).exp(), 1e-15);
        assert_eq!(lg.ev_copula(&[1.0, 1.0]).unwrap(), 1.0);
        assert!(lg.ev_copula(&[0.0, 0.5]).is_err());
    }

    #[test]
    fn rejects_bad_points() {
        let m = MaxStableModel::independent(2, 1.0).unwrap();
        assert!(m.exponent(&[0.0, 1.0]).is_err());
        assert!(m.exponent(&[1.0]).is_err());
        assert!(m.exponent(&[f64::INFINITY, f64::INFINITY]).is_err());
    }
}
