//! Sampling from the de Haan series `X = max_i Z^(i) / Gamma_i^{1/alpha}` and
//! empirical checks of exponent functions, distances and bounds.
//!
//! Samples are generated in chunks; chunk `c` draws from stream `c` of a
//! ChaCha generator keyed by the seed, so output does not depend on the
//! thread count.

mod stats;

use std::io::Write;

use nalgebra::{DMatrix, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1, StandardNormal};
use rayon::prelude::*;
use serde::Serialize;

pub use stats::{
    default_cdf_grid, dkw_threshold, ecdf, ecdf_many, kolmogorov_sf, ks_frechet, ks_test, two_sample_dk, KsResult,
    TwoSampleDk, BRUTE_FORCE_CAP,
};

use crate::bounds::{applicable_bounds, as_measure, BoundReport};
use crate::distances::{kolmogorov_exact, KolmogorovResult, SearchOptions};
use crate::error::{invalid, Error, Result};
use crate::models::{Family, MaxStableModel};
use crate::mvn::{std_normal_quantile, PSD_SLACK};
use crate::spectral::{canonical_representer, DeHaanRepresenter, NormSpec};

/// Series terms per sample before the Brown–Resnick sampler gives up.
pub const MAX_TERMS: usize = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SamplerConfig {
    pub seed: u64,
    pub n_samples: usize,
    /// Tail probability budget for truncating unbounded marks.
    pub truncation_eps: f64,
    pub parallel_chunks: usize,
}

impl Default for SamplerConfig {
    fn default() -> Self {
        SamplerConfig { seed: 1, n_samples: 10_000, truncation_eps: 1e-3, parallel_chunks: 32 }
    }
}

impl SamplerConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n_samples == 0 || self.parallel_chunks == 0 {
            return invalid("sampler needs at least one sample and one chunk");
        }
        if !(self.truncation_eps > 0.0 && self.truncation_eps < 1.0) {
            return invalid("truncation_eps must lie in (0, 1)");
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SampleMetadata {
    pub family: String,
    pub alpha: f64,
    pub seed: u64,
    /// Probability bound on a truncated term changing a sample; zero for exact samplers.
    pub truncation_bias: f64,
    /// Samples that hit [`MAX_TERMS`].
    pub capped: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SampleMatrix {
    pub dim: usize,
    pub rows: Vec<Vec<f64>>,
    pub meta: SampleMetadata,
}

impl SampleMatrix {
    pub fn column(&self, j: usize) -> Vec<f64> {
        self.rows.iter().map(|r| r[j]).collect()
    }

    /// Header line `# dim= alpha= family= seed=`, then one comma-separated row per sample.
    pub fn write_to<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "# dim={} alpha={} family={} seed={}", self.dim, self.meta.alpha, self.meta.family, self.meta.seed)?;
        for r in &self.rows {
            let line: Vec<String> = r.iter().map(|v| format!("{v:.17e}")).collect();
            writeln!(w, "{}", line.join(","))?;
        }
        Ok(())
    }
}

/// Runs `one` for every sample, chunk `c` on its own stream.
fn chunked<F>(cfg: &SamplerConfig, one: F) -> Vec<(Vec<f64>, bool)>
where
    F: Fn(&mut ChaCha8Rng) -> (Vec<f64>, bool) + Sync,
{
    let chunks = cfg.parallel_chunks.min(cfg.n_samples);
    let per = cfg.n_samples.div_ceil(chunks);
    (0..chunks)
        .into_par_iter()
        .flat_map_iter(|c| {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            rng.set_stream(c as u64);
            let count = per.min(cfg.n_samples.saturating_sub(c * per));
            (0..count).map(|_| one(&mut rng)).collect::<Vec<_>>()
        })
        .collect()
}

fn pick(cdf: &[f64], u: f64) -> usize {
    cdf.partition_point(|&c| c <= u).min(cdf.len() - 1)
}

/// One exact draw: stops once `B / Gamma^{1/alpha}` is below every coordinate
/// of the running maximum, so no later term can change the result.
fn discrete_draw(atoms: &[Vec<f64>], cdf: &[f64], bound: f64, alpha: f64, rng: &mut ChaCha8Rng) -> Vec<f64> {
    let d = atoms[0].len();
    let mut m = vec![0.0f64; d];
    let mut gamma = 0.0;
    loop {
        gamma += <Exp1 as Distribution<f64>>::sample(&Exp1, rng);
        let scale = gamma.powf(-1.0 / alpha);
        let z = &atoms[pick(cdf, rng.random::<f64>())];
        for (mj, zj) in m.iter_mut().zip(z) {
            *mj = mj.max(zj * scale);
        }
        if bound * scale < m.iter().copied().fold(f64::INFINITY, f64::min) {
            return m;
        }
    }
}

/// Exact sampler for a finitely supported representer.
pub fn sample_maxstable_discrete(z: &DeHaanRepresenter, cfg: &SamplerConfig) -> Result<SampleMatrix> {
    cfg.validate()?;
    let atoms: Vec<Vec<f64>> = z.atoms().iter().map(|a| a.point.clone()).collect();
    let mut acc = 0.0;
    let cdf: Vec<f64> = z
        .atoms()
        .iter()
        .map(|a| {
            acc += a.weight;
            acc
        })
        .collect();
    let cdf: Vec<f64> = cdf.iter().map(|c| c / acc).collect();
    let bound = z.sup_bound();
    let alpha = z.alpha();
    let rows = chunked(cfg, |rng| (discrete_draw(&atoms, &cdf, bound, alpha, rng), false));
    Ok(SampleMatrix {
        dim: z.dim(),
        rows: rows.into_iter().map(|r| r.0).collect(),
        meta: SampleMetadata {
            family: "discrete_spectral".into(),
            alpha,
            seed: cfg.seed,
            truncation_bias: 0.0,
            capped: 0,
        },
    })
}

fn psd_factor(cov: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let e = SymmetricEigen::new((cov + cov.transpose()) * 0.5);
    if let Some(&low) = e.eigenvalues.iter().find(|&&v| v < -PSD_SLACK) {
        return Err(Error::NotPsd(low));
    }
    let s = e.eigenvalues.map(|v| v.max(0.0).sqrt());
    Ok(&e.eigenvectors * DMatrix::from_diagonal(&s))
}

/// Level above which no mark is expected before `MAX_TERMS`:
/// `exp(max_j sigma_j z - min_j sigma_j^2 / 2)`, `z` the `1 - eps/(d MAX_TERMS)` normal quantile.
pub fn brown_resnick_mark_level(cov: &DMatrix<f64>, eps: f64) -> f64 {
    let d = cov.nrows();
    let sig: Vec<f64> = (0..d).map(|j| cov[(j, j)].max(0.0).sqrt()).collect();
    let z = -std_normal_quantile(eps / (d as f64 * MAX_TERMS as f64));
    let smax = sig.iter().copied().fold(0.0, f64::max);
    let vmin = sig.iter().map(|s| s * s).fold(f64::INFINITY, f64::min);
    (smax * z - vmin / 2.0).exp()
}

/// Brown–Resnick vectors with marks `Z_j = exp(U_j - Sigma_jj/2)`, `U ~ N(0, Sigma)`.
///
/// Marks are unbounded, so the series stops once the level from
/// [`brown_resnick_mark_level`] divided by `Gamma_i` drops below the running
/// minimum; the metadata records `truncation_eps` as the bias bound.
pub fn sample_brown_resnick(cov: &DMatrix<f64>, cfg: &SamplerConfig) -> Result<SampleMatrix> {
    cfg.validate()?;
    let d = cov.nrows();
    if cov.ncols() != d || d == 0 {
        return invalid("covariance must be a nonempty square matrix");
    }
    let l = psd_factor(cov)?;
    let half: Vec<f64> = (0..d).map(|j| cov[(j, j)] / 2.0).collect();
    let q = brown_resnick_mark_level(cov, cfg.truncation_eps);
    let rows = chunked(cfg, |rng| {
        let mut m = vec![0.0f64; d];
        let mut gamma = 0.0;
        let mut g = vec![0.0; d];
        for _ in 0..MAX_TERMS {
            gamma += <Exp1 as Distribution<f64>>::sample(&Exp1, rng);
            for gi in g.iter_mut() {
                *gi = StandardNormal.sample(rng);
            }
            for j in 0..d {
                let u: f64 = (0..d).map(|k| l[(j, k)] * g[k]).sum();
                m[j] = m[j].max((u - half[j]).exp() / gamma);
            }
            if q / gamma < m.iter().copied().fold(f64::INFINITY, f64::min) {
                return (m, false);
            }
        }
        (m, true)
    });
    let capped = rows.iter().filter(|r| r.1).count();
    Ok(SampleMatrix {
        dim: d,
        rows: rows.into_iter().map(|r| r.0).collect(),
        meta: SampleMetadata {
            family: "brown_resnick".into(),
            alpha: 1.0,
            seed: cfg.seed,
            truncation_bias: cfg.truncation_eps,
            capped,
        },
    })
}

/// Covariance with the variogram of `lambda`, anchored at coordinate 0.
pub fn covariance_from_lambda(lambda: &DMatrix<f64>) -> DMatrix<f64> {
    let d = lambda.nrows();
    DMatrix::from_fn(d, d, |i, j| {
        let (a, b, c) = (lambda[(i, 0)], lambda[(j, 0)], lambda[(i, j)]);
        (a * a + b * b - c * c) / 2.0
    })
}

/// Samples any model with a series representation: discrete spectral,
/// comonotone and independent (canonical representers), Hüsler–Reiss and Brown–Resnick.
pub fn sample_model(model: &MaxStableModel, cfg: &SamplerConfig) -> Result<SampleMatrix> {
    let mut s = match model.family() {
        Family::BrownResnick { covariance, .. } => sample_brown_resnick(covariance, cfg)?,
        Family::HuslerReiss { lambda } => sample_brown_resnick(&covariance_from_lambda(lambda), cfg)?,
        Family::Logistic { .. } => return Err(Error::Unsupported("no sampler for the logistic family".into())),
        _ => {
            let h = as_measure(model).expect("finite angular measure");
            sample_maxstable_discrete(&canonical_representer(&h)?, cfg)?
        }
    };
    s.meta.family = model.family().tag().into();
    Ok(s)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CdfCheck {
    pub discrepancy: f64,
    pub dkw_threshold: f64,
    pub allowance: f64,
    pub pass: bool,
}

/// `sup over grid of |ECDF(x) - exp(-V(x))|` against the DKW band at level 0.01.
pub fn verify_cdf(model: &MaxStableModel, samples: &SampleMatrix, grid: &[Vec<f64>]) -> Result<CdfCheck> {
    if samples.dim != model.dim() {
        return Err(Error::DimensionMismatch(samples.dim, model.dim()));
    }
    let emp = ecdf_many(&samples.rows, grid);
    let mut discrepancy = 0.0f64;
    for (x, e) in grid.iter().zip(&emp) {
        discrepancy = discrepancy.max((e - model.cdf(x)?).abs());
    }
    let dkw = dkw_threshold(samples.rows.len(), 0.01);
    let allowance = samples.meta.truncation_bias;
    Ok(CdfCheck { discrepancy, dkw_threshold: dkw, allowance, pass: discrepancy <= dkw + allowance })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    pub exact: KolmogorovResult,
    pub monte_carlo: Option<TwoSampleDk>,
    pub bounds: Vec<BoundReport>,
    pub violations: usize,
    /// Monte Carlo estimate outside the DKW band around the exact value.
    pub mc_consistent: Option<bool>,
}

/// Exact distance, every applicable bound with slack against the certified
/// lower value, and a sampling cross-check when both models can be sampled.
pub fn verify_bounds(
    m1: &MaxStableModel,
    m2: &MaxStableModel,
    norms: &[NormSpec],
    search: &SearchOptions,
    cfg: Option<&SamplerConfig>,
) -> Result<VerifyReport> {
    let exact = kolmogorov_exact(m1, m2, search)?;
    let bounds: Vec<BoundReport> =
        applicable_bounds(m1, m2, norms, search)?.into_iter().map(|b| b.against(exact.certified_lower)).collect();
    let violations = bounds.iter().filter(|b| !b.holds(1e-9)).count();
    let mut monte_carlo = None;
    let mut mc_consistent = None;
    if let Some(cfg) = cfg {
        let second = SamplerConfig { seed: cfg.seed.wrapping_add(1), ..*cfg };
        if let (Ok(s1), Ok(s2)) = (sample_model(m1, cfg), sample_model(m2, &second)) {
            let t = two_sample_dk(&s1.rows, &s2.rows)?;
            let slack = t.band + s1.meta.truncation_bias + s2.meta.truncation_bias;
            // the pooled evaluation set can only see up to the true supremum plus noise
            mc_consistent = Some(t.value <= exact.value + slack);
            monte_carlo = Some(t);
        }
    }
    Ok(VerifyReport { exact, monte_carlo, bounds, violations, mc_consistent })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::{AngularMeasure, Atom};

    fn cfg(n: usize, seed: u64) -> SamplerConfig {
        SamplerConfig { n_samples: n, seed, ..SamplerConfig::default() }
    }

    #[test]
    fn reproducible_and_chunk_count_matches() {
        let z = DeHaanRepresenter::comonotone(3, 1.0).unwrap();
        let a = sample_maxstable_discrete(&z, &cfg(1001, 5)).unwrap();
        let b = sample_maxstable_discrete(&z, &cfg(1001, 5)).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.rows.len(), 1001);
        assert!(a.rows.iter().all(|r| r[0] == r[1] && r[1] == r[2]));
    }

    #[test]
    fn comonotone_margins_are_frechet() {
        let z = DeHaanRepresenter::comonotone(2, 2.0).unwrap();
        let s = sample_maxstable_discrete(&z, &cfg(20_000, 3)).unwrap();
        assert!(ks_frechet(&s.column(0), 2.0, 0.01).unwrap().pass);
    }

    #[test]
    fn independent_extremal_coefficient() {
        // P(max(X1, X2) <= 1) = exp(-V(1, 1)) = exp(-2)
        let h = AngularMeasure::independent(2, 1.0, NormSpec::lp(1.0)).unwrap();
        let s = sample_maxstable_discrete(&canonical_representer(&h).unwrap(), &cfg(40_000, 8)).unwrap();
        let p = ecdf(&s.rows, &[1.0, 1.0]);
        let theta = -p.ln();
        let se = ((1.0 - p) / (p * s.rows.len() as f64)).sqrt();
        assert!((theta - 2.0).abs() < 4.0 * se, "{theta}");
    }

    #[test]
    fn max_stability() {
        let z = DeHaanRepresenter::new(2, 1.0, vec![Atom::new(vec![2.0, 0.0], 0.5), Atom::new(vec![0.0, 2.0], 0.5)]).unwrap();
        let s = sample_maxstable_discrete(&z, &cfg(40_000, 2)).unwrap();
        let k = 4;
        let maxima: Vec<f64> =
            s.rows.chunks(k).map(|c| c.iter().map(|r| r[0]).fold(0.0, f64::max) / k as f64).collect();
        assert!(ks_frechet(&maxima, 1.0, 0.01).unwrap().pass);
    }

    #[test]
    fn brown_resnick_degenerate_and_margins() {
        let zero = DMatrix::zeros(2, 2);
        let s = sample_brown_resnick(&zero, &cfg(2000, 1)).unwrap();
        assert!(s.rows.iter().all(|r| r[0] == r[1]));
        let cov = DMatrix::from_row_slice(2, 2, &[1.0, 0.5, 0.5, 1.5]);
        let s = sample_brown_resnick(&cov, &cfg(20_000, 4)).unwrap();
        assert_eq!(s.meta.capped, 0);
        assert!(ks_frechet(&s.column(1), 1.0, 0.01).unwrap().pass);
        let m = MaxStableModel::brown_resnick(cov).unwrap();
        let check = verify_cdf(&m, &s, &default_cdf_grid(2)).unwrap();
        assert!(check.pass, "{check:?}");
    }

    #[test]
    fn husler_reiss_via_variogram_covariance() {
        let l = DMatrix::from_row_slice(3, 3, &[0.0, 1.0, 1.5, 1.0, 0.0, 1.2, 1.5, 1.2, 0.0]);
        let cov = covariance_from_lambda(&l);
        let back = crate::models::husler_reiss::lambda_from_covariance(&cov).unwrap();
        assert!((back - l).abs().max() < 1e-14);
    }

    #[test]
    fn export_format() {
        let z = DeHaanRepresenter::comonotone(2, 1.0).unwrap();
        let s = sample_maxstable_discrete(&z, &cfg(3, 9)).unwrap();
        let mut buf = Vec::new();
        s.write_to(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), "# dim=2 alpha=1 family=discrete_spectral seed=9");
        assert_eq!(lines.count(), 3);
    }

    #[test]
    fn verify_com_ind() {
        let com = MaxStableModel::comonotone(2, 1.0).unwrap();
        let ind = MaxStableModel::independent(2, 1.0).unwrap();
        let r = verify_bounds(&com, &ind, &[], &SearchOptions::default(), Some(&cfg(5000, 1))).unwrap();
        assert_eq!(r.violations, 0);
        assert!((r.exact.value - 0.25).abs() < 1e-12);
        assert_eq!(r.mc_consistent, Some(true));
        let names: Vec<&str> = r.bounds.iter().map(|b| b.name.as_str()).collect();
        assert_eq!(names, ["wasserstein", "psi", "tv"]);
    }
}
