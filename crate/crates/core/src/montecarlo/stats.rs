//! Goodness-of-fit statistics for samples of max-stable vectors.

use serde::Serialize;

use crate::error::{invalid, Result};

/// DKW band half-width `sqrt(ln(2/delta) / (2n))`.
pub fn dkw_threshold(n: usize, delta: f64) -> f64 {
    ((2.0 / delta).ln() / (2.0 * n as f64)).sqrt()
}

/// `P(K > lambda)` for the limiting Kolmogorov distribution.
pub fn kolmogorov_sf(lambda: f64) -> f64 {
    if lambda < 0.2 {
        return 1.0;
    }
    let mut s = 0.0;
    for k in 1..=100 {
        let kf = k as f64;
        let t = (-2.0 * kf * kf * lambda * lambda).exp();
        s += if k % 2 == 1 { t } else { -t };
        if t < 1e-17 {
            break;
        }
    }
    (2.0 * s).clamp(0.0, 1.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KsResult {
    pub statistic: f64,
    pub p_value: f64,
    pub pass: bool,
}

/// One-sample KS test of `xs` against `cdf` at `level`, with the small-sample
/// correction `(sqrt(n) + 0.12 + 0.11/sqrt(n)) D` in the asymptotic law.
pub fn ks_test<F: Fn(f64) -> f64>(xs: &[f64], cdf: F, level: f64) -> Result<KsResult> {
    if xs.is_empty() {
        return invalid("KS test needs a nonempty sample");
    }
    let mut v = xs.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len() as f64;
    let mut d = 0.0f64;
    for (i, x) in v.iter().enumerate() {
        let f = cdf(*x);
        d = d.max((i as f64 + 1.0) / n - f).max(f - i as f64 / n);
    }
    let sn = n.sqrt();
    let p = kolmogorov_sf((sn + 0.12 + 0.11 / sn) * d);
    Ok(KsResult { statistic: d, p_value: p, pass: p >= level })
}

/// KS test of one column against the unit `alpha`-Fréchet law `exp(-x^{-alpha})`.
pub fn ks_frechet(xs: &[f64], alpha: f64, level: f64) -> Result<KsResult> {
    ks_test(xs, |x| if x > 0.0 { (-x.powf(-alpha)).exp() } else { 0.0 }, level)
}

/// Fraction of rows dominated componentwise by `x`.
pub fn ecdf(rows: &[Vec<f64>], x: &[f64]) -> f64 {
    let c = rows.iter().filter(|r| r.iter().zip(x).all(|(a, b)| a <= b)).count();
    c as f64 / rows.len() as f64
}

/// Empirical CDF of `rows` at every query point, by a sweep over the first
/// coordinate with a Fenwick tree over the second (`d = 2`), sorting (`d = 1`),
/// or direct counting.
pub fn ecdf_many(rows: &[Vec<f64>], queries: &[Vec<f64>]) -> Vec<f64> {
    let n = rows.len() as f64;
    let d = rows.first().map_or(0, Vec::len);
    match d {
        1 => {
            let mut v: Vec<f64> = rows.iter().map(|r| r[0]).collect();
            v.sort_by(f64::total_cmp);
            queries.iter().map(|q| v.partition_point(|&x| x <= q[0]) as f64 / n).collect()
        }
        2 => {
            let mut ys: Vec<f64> = rows.iter().map(|r| r[1]).collect();
            ys.sort_by(f64::total_cmp);
            ys.dedup();
            let mut pts: Vec<(f64, usize)> =
                rows.iter().map(|r| (r[0], ys.partition_point(|&y| y < r[1]))).collect();
            pts.sort_by(|a, b| a.0.total_cmp(&b.0));
            let mut order: Vec<usize> = (0..queries.len()).collect();
            order.sort_by(|&a, &b| queries[a][0].total_cmp(&queries[b][0]));
            let mut tree = vec![0u32; ys.len() + 1];
            let mut out = vec![0.0; queries.len()];
            let mut next = 0;
            for qi in order {
                let q = &queries[qi];
                while next < pts.len() && pts[next].0 <= q[0] {
                    let mut k = pts[next].1 + 1;
                    while k < tree.len() {
                        tree[k] += 1;
                        k += k & k.wrapping_neg();
                    }
                    next += 1;
                }
                let mut k = ys.partition_point(|&y| y <= q[1]);
                let mut c = 0u64;
                while k > 0 {
                    c += tree[k] as u64;
                    k -= k & k.wrapping_neg();
                }
                out[qi] = c as f64 / n;
            }
            out
        }
        _ => queries.iter().map(|q| ecdf(rows, q)).collect(),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TwoSampleDk {
    /// Largest ECDF difference over the evaluation set.
    pub value: f64,
    /// Sum of the two one-sample DKW half-widths at level 0.01.
    pub band: f64,
    pub evaluation_points: usize,
}

/// Evaluation set for `d >= 3` is capped at this many sample points per side.
pub const BRUTE_FORCE_CAP: usize = 2000;

fn log_grid(dim: usize, per_axis: usize) -> Vec<Vec<f64>> {
    let vals: Vec<f64> = (0..per_axis).map(|k| (-1.5 + 5.0 * k as f64 / (per_axis - 1) as f64).exp()).collect();
    let total = per_axis.pow(dim as u32);
    (0..total)
        .map(|mut idx| {
            (0..dim)
                .map(|_| {
                    let v = vals[idx % per_axis];
                    idx /= per_axis;
                    v
                })
                .collect()
        })
        .collect()
}

/// Plot-free default grid of CDF evaluation points, log-spaced in every axis.
pub fn default_cdf_grid(dim: usize) -> Vec<Vec<f64>> {
    let per_axis = match dim {
        1 => 60,
        2 => 20,
        3 => 8,
        _ => 4,
    };
    log_grid(dim, per_axis)
}

/// `sup |F1_hat - F2_hat|` over the pooled sample points plus a log grid.
pub fn two_sample_dk(s1: &[Vec<f64>], s2: &[Vec<f64>]) -> Result<TwoSampleDk> {
    if s1.is_empty() || s2.is_empty() {
        return invalid("two-sample distance needs nonempty samples");
    }
    let d = s1[0].len();
    if s2[0].len() != d {
        return Err(crate::Error::DimensionMismatch(d, s2[0].len()));
    }
    let mut queries = default_cdf_grid(d);
    if d <= 2 {
        queries.extend(s1.iter().cloned());
        queries.extend(s2.iter().cloned());
    } else {
        queries.extend(s1.iter().take(BRUTE_FORCE_CAP).cloned());
        queries.extend(s2.iter().take(BRUTE_FORCE_CAP).cloned());
    }
    let f1 = ecdf_many(s1, &queries);
    let f2 = ecdf_many(s2, &queries);
    let value = f1.iter().zip(&f2).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    Ok(TwoSampleDk {
        value,
        band: dkw_threshold(s1.len(), 0.01) + dkw_threshold(s2.len(), 0.01),
        evaluation_points: queries.len(),
    })
}
