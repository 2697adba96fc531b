//! Normal distribution functions: univariate, bivariate, and general
//! multivariate orthant-type probabilities `P(X <= b)` for a standardized
//! Gaussian vector with correlation matrix `R`.
//!
//! The bivariate kernel is the Drezner–Wesolowsky / Genz Gauss–Legendre
//! scheme. Three variables reduce to a one-dimensional adaptive quadrature of
//! the bivariate kernel. Four and more use Genz's separation of variables with
//! variable reordering, integrated by a randomized Richtmyer lattice.

use nalgebra::{DMatrix, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use libm::erfc;
use statrs::function::erf::erfc_inv;

use crate::error::{invalid, Error, Result};

const TWO_PI: f64 = 2.0 * std::f64::consts::PI;

/// Standard normal CDF.
pub fn std_normal_cdf(z: f64) -> f64 {
    if z == f64::INFINITY {
        return 1.0;
    }
    if z == f64::NEG_INFINITY {
        return 0.0;
    }
    0.5 * erfc(-z / std::f64::consts::SQRT_2)
}

/// Standard normal density.
pub fn std_normal_pdf(z: f64) -> f64 {
    (-0.5 * z * z).exp() / TWO_PI.sqrt()
}

/// Standard normal quantile.
pub fn std_normal_quantile(p: f64) -> f64 {
    if p <= 0.0 {
        return f64::NEG_INFINITY;
    }
    if p >= 1.0 {
        return f64::INFINITY;
    }
    let x = -std::f64::consts::SQRT_2 * erfc_inv(2.0 * p);
    // one Halley step against the accurate CDF
    let f = pdf_ratio_step(x, p);
    x - f / (1.0 + 0.5 * x * f)
}

fn pdf_ratio_step(x: f64, p: f64) -> f64 {
    let d = std_normal_pdf(x);
    if d == 0.0 {
        0.0
    } else {
        (std_normal_cdf(x) - p) / d
    }
}

// Gauss–Legendre half-rules on (-1, 1); nodes are the positive abscissae.
const GL6_W: [f64; 3] = [0.1713244923791705, 0.3607615730481384, 0.4679139345726904];
const GL6_X: [f64; 3] = [0.9324695142031522, 0.6612093864662647, 0.2386191860831970];
const GL12_W: [f64; 6] = [
    0.04717533638651177,
    0.1069393259953183,
    0.1600783285433464,
    0.2031674267230659,
    0.2334925365383547,
    0.2491470458134029,
];
const GL12_X: [f64; 6] = [
    0.9815606342467191,
    0.9041172563704750,
    0.7699026741943050,
    0.5873179542866171,
    0.3678314989981802,
    0.1252334085114692,
];
const GL20_W: [f64; 10] = [
    0.01761400713915212,
    0.04060142980038694,
    0.06267204833410906,
    0.08327674157670475,
    0.1019301198172404,
    0.1181945319615184,
    0.1316886384491766,
    0.1420961093183821,
    0.1491729864726037,
    0.1527533871307259,
];
const GL20_X: [f64; 10] = [
    0.9931285991850949,
    0.9639719272779138,
    0.9122344282513259,
    0.8391169718222188,
    0.7463319064601508,
    0.6360536807265150,
    0.5108670019508271,
    0.3737060887154196,
    0.2277858511416451,
    0.07652652113349733,
];

/// `P(X > h, Y > k)` for a standard bivariate normal with correlation `r`.
fn bvnu(h: f64, k: f64, r: f64) -> f64 {
    if h == f64::INFINITY || k == f64::INFINITY {
        return 0.0;
    }
    if h == f64::NEG_INFINITY {
        return if k == f64::NEG_INFINITY { 1.0 } else { std_normal_cdf(-k) };
    }
    if k == f64::NEG_INFINITY {
        return std_normal_cdf(-h);
    }
    if r == 0.0 {
        return std_normal_cdf(-h) * std_normal_cdf(-k);
    }
    let (w, x): (&[f64], &[f64]) = if r.abs() < 0.3 {
        (&GL6_W, &GL6_X)
    } else if r.abs() < 0.75 {
        (&GL12_W, &GL12_X)
    } else {
        (&GL20_W, &GL20_X)
    };
    // nodes on (0, 2): 1 - x and 1 + x, each with weight w
    let nodes = x.iter().zip(w).flat_map(|(&xi, &wi)| [(1.0 - xi, wi), (1.0 + xi, wi)]);
    let mut hk = h * k;
    let mut bvn = 0.0;
    if r.abs() < 0.925 {
        let hs = (h * h + k * k) / 2.0;
        let asr = r.asin() / 2.0;
        for (xi, wi) in nodes {
            let sn = (asr * xi).sin();
            bvn += wi * ((sn * hk - hs) / (1.0 - sn * sn)).exp();
        }
        return (bvn * asr / TWO_PI + std_normal_cdf(-h) * std_normal_cdf(-k)).clamp(0.0, 1.0);
    }
    let mut k = k;
    if r < 0.0 {
        k = -k;
        hk = -hk;
    }
    if r.abs() < 1.0 {
        let as_ = 1.0 - r * r;
        let mut a = as_.sqrt();
        let bs = (h - k) * (h - k);
        let asr = -(bs / as_ + hk) / 2.0;
        let c = (4.0 - hk) / 8.0;
        let d = (12.0 - hk) / 80.0;
        if asr > -100.0 {
            bvn = a * asr.exp() * (1.0 - c * (bs - as_) * (1.0 - d * bs) / 3.0 + c * d * as_ * as_);
        }
        if hk > -100.0 {
            let b = bs.sqrt();
            let sp = TWO_PI.sqrt() * std_normal_cdf(-b / a);
            bvn -= (-hk / 2.0).exp() * sp * b * (1.0 - c * bs * (1.0 - d * bs) / 3.0);
        }
        a /= 2.0;
        let mut acc = 0.0;
        for (xi, wi) in nodes {
            let xs = (a * xi) * (a * xi);
            let asr = -(bs / xs + hk) / 2.0;
            if asr > -100.0 {
                let sp = 1.0 + c * xs * (1.0 + 5.0 * d * xs);
                let rs = (1.0 - xs).sqrt();
                let ep = (-(hk / 2.0) * xs / ((1.0 + rs) * (1.0 + rs))).exp() / rs;
                acc += wi * asr.exp() * (sp - ep);
            }
        }
        bvn = (a * acc - bvn) / TWO_PI;
    }
    if r > 0.0 {
        bvn += std_normal_cdf(-h.max(k));
    } else if h >= k {
        bvn = -bvn;
    } else {
        let l = if h < 0.0 {
            std_normal_cdf(k) - std_normal_cdf(h)
        } else {
            std_normal_cdf(-h) - std_normal_cdf(-k)
        };
        bvn = l - bvn;
    }
    bvn.clamp(0.0, 1.0)
}

/// `P(X <= h, Y <= k)` for a standard bivariate normal with correlation `rho`.
pub fn bivariate_normal_cdf(h: f64, k: f64, rho: f64) -> Result<f64> {
    if !(rho.abs() <= 1.0) {
        return invalid(format!("correlation must lie in [-1, 1], got {rho}"));
    }
    if h.is_nan() || k.is_nan() {
        return invalid("NaN limit");
    }
    Ok(bvnu(-h, -k, rho))
}

/// Options for [`mvn_cdf`].
#[derive(Debug, Clone, Copy)]
pub struct MvnOptions {
    /// Absolute error target (three standard errors). `None` picks the default
    /// for the effective dimension.
    pub tol: Option<f64>,
    pub seed: u64,
    /// Cap on integrand evaluations per random shift.
    pub max_points: usize,
}

impl Default for MvnOptions {
    fn default() -> Self {
        MvnOptions { tol: None, seed: 0x6d76_6e5f_7365_6564, max_points: 1 << 15 }
    }
}

/// `1e-7` for `d <= 5`, `1e-6` above.
pub fn default_tol(dim: usize) -> f64 {
    if dim <= 5 {
        1e-7
    } else {
        1e-6
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MvnResult {
    pub value: f64,
    /// Three standard errors over the random shifts; zero for deterministic kernels.
    pub error: f64,
    pub converged: bool,
}

impl MvnResult {
    fn exact(value: f64) -> Self {
        MvnResult { value, error: 0.0, converged: true }
    }
}

/// Upper limits and a correlation matrix with unit diagonal.
#[derive(Debug, Clone)]
pub struct MvnProblem {
    pub upper: Vec<f64>,
    pub corr: DMatrix<f64>,
}

/// Eigenvalue slack accepted for positive semidefiniteness.
pub const PSD_SLACK: f64 = 1e-10;

pub fn min_eigenvalue(m: &DMatrix<f64>) -> f64 {
    if m.nrows() == 0 {
        return 0.0;
    }
    SymmetricEigen::new(m.clone()).eigenvalues.iter().copied().fold(f64::INFINITY, f64::min)
}

impl MvnProblem {
    pub fn new(upper: Vec<f64>, corr: DMatrix<f64>) -> Result<Self> {
        let d = upper.len();
        if d == 0 {
            return invalid("empty normal problem");
        }
        if corr.nrows() != d || corr.ncols() != d {
            return Err(Error::DimensionMismatch(corr.nrows(), d));
        }
        for i in 0..d {
            if (corr[(i, i)] - 1.0).abs() > 1e-12 {
                return invalid(format!("correlation diagonal entry {i} is {}", corr[(i, i)]));
            }
            for j in 0..i {
                if (corr[(i, j)] - corr[(j, i)]).abs() > 1e-12 || corr[(i, j)].abs() > 1.0 + 1e-12 {
                    return invalid(format!("correlation entry ({i},{j}) invalid"));
                }
            }
        }
        if upper.iter().any(|x| x.is_nan()) {
            return invalid("NaN limit");
        }
        let ev = min_eigenvalue(&corr);
        if ev < -PSD_SLACK {
            return Err(Error::NotPsd(ev));
        }
        Ok(MvnProblem { upper, corr })
    }

    pub fn dim(&self) -> usize {
        self.upper.len()
    }
}

/// `P(X <= upper)`.
///
/// Infinite upper limits are marginalized out before dispatching: one variable
/// goes to [`std_normal_cdf`], two to [`bivariate_normal_cdf`], three to
/// [`trivariate`] quadrature, more to the lattice rule. The lattice result is deterministic given `opts.seed`.
pub fn mvn_cdf(problem: &MvnProblem, opts: &MvnOptions) -> MvnResult {
    if problem.upper.iter().any(|&b| b == f64::NEG_INFINITY) {
        return MvnResult::exact(0.0);
    }
    let keep: Vec<usize> = (0..problem.dim()).filter(|&i| problem.upper[i].is_finite()).collect();
    let b: Vec<f64> = keep.iter().map(|&i| problem.upper[i]).collect();
    match keep.len() {
        0 => MvnResult::exact(1.0),
        1 => MvnResult::exact(std_normal_cdf(b[0])),
        2 => MvnResult::exact(bvnu(-b[0], -b[1], problem.corr[(keep[0], keep[1])].clamp(-1.0, 1.0))),
        m => {
            let corr = DMatrix::from_fn(m, m, |i, j| problem.corr[(keep[i], keep[j])]);
            if m == 3 {
                if let Some(v) = trivariate(&b, &corr) {
                    return MvnResult::exact(v);
                }
            }
            let tol = opts.tol.unwrap_or_else(|| default_tol(m));
            lattice_sov(&b, &corr, tol, opts)
        }
    }
}

/// `int_{-inf}^{b_i} phi(x) Phi2((b_j - r_ij x)/s_j, (b_k - r_ik x)/s_k; r_jk|i) dx`,
/// conditioning on the variable least correlated with the other two.
/// `None` when every choice leaves a degenerate conditional law.
fn trivariate(b: &[f64], c: &DMatrix<f64>) -> Option<f64> {
    let pick = (0..3)
        .map(|i| {
            let (j, k) = ((i + 1) % 3, (i + 2) % 3);
            (c[(i, j)].abs().max(c[(i, k)].abs()), i, j, k)
        })
        .min_by(|a, b| a.0.total_cmp(&b.0))
        .unwrap();
    let (_, i, j, k) = pick;
    let (rj, rk) = (c[(i, j)], c[(i, k)]);
    let (sj, sk) = ((1.0 - rj * rj).sqrt(), (1.0 - rk * rk).sqrt());
    if sj < 1e-7 || sk < 1e-7 {
        return None;
    }
    let rho = ((c[(j, k)] - rj * rk) / (sj * sk)).clamp(-1.0, 1.0);
    let f = |x: f64| std_normal_pdf(x) * bvnu(-(b[j] - rj * x) / sj, -(b[k] - rk * x) / sk, rho);
    let lo = (b[i] - 10.0).min(-10.0);
    Some(adaptive_gl(&f, lo, b[i], 1e-15, 40).clamp(0.0, 1.0))
}

fn gl20(f: &impl Fn(f64) -> f64, a: f64, b: f64) -> f64 {
    let (m, h) = (0.5 * (a + b), 0.5 * (b - a));
    GL20_X.iter().zip(&GL20_W).map(|(&x, &w)| w * (f(m - h * x) + f(m + h * x))).sum::<f64>() * h
}

fn adaptive_gl(f: &impl Fn(f64) -> f64, a: f64, b: f64, tol: f64, depth: u32) -> f64 {
    let whole = gl20(f, a, b);
    let m = 0.5 * (a + b);
    let halves = gl20(f, a, m) + gl20(f, m, b);
    if depth == 0 || (whole - halves).abs() <= tol {
        return halves;
    }
    adaptive_gl(f, a, m, 0.5 * tol, depth - 1) + adaptive_gl(f, m, b, 0.5 * tol, depth - 1)
}

/// Cholesky factor with Genz–Bretz variable prioritization: at each step the
/// variable with the smallest conditional probability is placed next.
/// Returns the reordered limits and the lower-triangular factor.
fn reorder_cholesky(b: &[f64], corr: &DMatrix<f64>) -> (Vec<f64>, DMatrix<f64>) {
    let m = b.len();
    let mut b = b.to_vec();
    let mut c = corr.clone();
    let mut l = DMatrix::<f64>::zeros(m, m);
    let mut y = vec![0.0; m];
    for i in 0..m {
        let mut best = (f64::INFINITY, i);
        for j in i..m {
            let shift: f64 = (0..i).map(|k| l[(j, k)] * y[k]).sum();
            let var = c[(j, j)] - (0..i).map(|k| l[(j, k)] * l[(j, k)]).sum::<f64>();
            let p = if var > 1e-14 { std_normal_cdf((b[j] - shift) / var.sqrt()) } else { 1.0 };
            if p < best.0 {
                best = (p, j);
            }
        }
        let j = best.1;
        if j != i {
            b.swap(i, j);
            c.swap_rows(i, j);
            c.swap_columns(i, j);
            l.swap_rows(i, j);
        }
        let var = c[(i, i)] - (0..i).map(|k| l[(i, k)] * l[(i, k)]).sum::<f64>();
        if var <= 1e-14 {
            // singular direction: the variable is determined by the previous ones
            for r in i..m {
                l[(r, i)] = 0.0;
            }
            y[i] = 0.0;
            continue;
        }
        let piv = var.sqrt();
        l[(i, i)] = piv;
        for r in (i + 1)..m {
            let s: f64 = (0..i).map(|k| l[(r, k)] * l[(i, k)]).sum();
            l[(r, i)] = (c[(r, i)] - s) / piv;
        }
        // conditional mean of the truncated variable steers the next choice
        let shift: f64 = (0..i).map(|k| l[(i, k)] * y[k]).sum();
        let t = (b[i] - shift) / piv;
        let p = std_normal_cdf(t).max(1e-300);
        y[i] = -std_normal_pdf(t) / p;
    }
    (b, l)
}

/// Separation-of-variables integrand at a point of `[0, 1]^{m-1}`.
fn sov_integrand(b: &[f64], l: &DMatrix<f64>, w: &[f64], y: &mut [f64]) -> f64 {
    let m = b.len();
    let mut f = 1.0;
    for i in 0..m {
        let shift: f64 = (0..i).map(|k| l[(i, k)] * y[k]).sum();
        let piv = l[(i, i)];
        let e = if piv > 0.0 {
            std_normal_cdf((b[i] - shift) / piv)
        } else if shift <= b[i] {
            1.0
        } else {
            0.0
        };
        f *= e;
        if f == 0.0 {
            return 0.0;
        }
        if i + 1 < m {
            y[i] = if piv > 0.0 { std_normal_quantile((w[i] * e).clamp(1e-300, 1.0 - 1e-16)) } else { 0.0 };
        }
    }
    f
}

fn first_primes(n: usize) -> Vec<u64> {
    let mut out = Vec::with_capacity(n);
    let mut c = 2u64;
    while out.len() < n {
        if out.iter().take_while(|&&p| p * p <= c).all(|&p| c % p != 0) {
            out.push(c);
        }
        c += 1;
    }
    out
}

const SHIFTS: usize = 16;

fn lattice_sov(b: &[f64], corr: &DMatrix<f64>, tol: f64, opts: &MvnOptions) -> MvnResult {
    let m = b.len();
    let (b, l) = reorder_cholesky(b, corr);
    let s = m - 1;
    let q: Vec<f64> = first_primes(s).iter().map(|&p| (p as f64).sqrt().fract()).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let shifts: Vec<Vec<f64>> = (0..SHIFTS).map(|_| (0..s).map(|_| rng.random::<f64>()).collect()).collect();
    let mut n = 64usize;
    let mut y = vec![0.0; m];
    let mut w = vec![0.0; s];
    let mut wa = vec![0.0; s];
    loop {
        let mut means = [0.0; SHIFTS];
        for (mean, shift) in means.iter_mut().zip(&shifts) {
            let mut acc = 0.0;
            for k in 1..=n {
                for j in 0..s {
                    let x = (k as f64 * q[j] + shift[j]).fract();
                    // baker's transform, then the antithetic partner
                    w[j] = (2.0 * x - 1.0).abs();
                    wa[j] = 1.0 - w[j];
                }
                acc += 0.5 * (sov_integrand(&b, &l, &w, &mut y) + sov_integrand(&b, &l, &wa, &mut y));
            }
            *mean = acc / n as f64;
        }
        let mu = means.iter().sum::<f64>() / SHIFTS as f64;
        let var = means.iter().map(|v| (v - mu) * (v - mu)).sum::<f64>() / (SHIFTS * (SHIFTS - 1)) as f64;
        let err = 3.0 * var.sqrt();
        if err <= tol || 2 * n > opts.max_points {
            return MvnResult { value: mu.clamp(0.0, 1.0), error: err, converged: err <= tol };
        }
        n *= 2;
    }
}
