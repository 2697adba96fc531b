//! Maximization over the canonical section `{u > 0 : min_i u_i = 1}`.
//!
//! Face `i` fixes `u_i = 1`; the other coordinates are searched on a log scale
//! `y_j = ln u_j` in `[0, ln u_max]`. A dense grid supplies a certified lower
//! bound and starting points for bounded Nelder–Mead.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchOptions {
    /// Grid points per free axis; `None` picks 200 / 40 / 16 for `d` = 2 / 3 / 4.
    pub grid: Option<usize>,
    pub u_max: f64,
    /// Number of grid points refined by Nelder–Mead.
    pub starts: usize,
    /// Random points used instead of a full grid when `d > 4`.
    pub random_points: usize,
    pub seed: u64,
    pub refine: bool,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions { grid: None, u_max: 50.0, starts: 16, random_points: 20_000, seed: 7, refine: true }
    }
}

pub fn default_grid(dim: usize) -> usize {
    match dim {
        0..=2 => 200,
        3 => 40,
        _ => 16,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SearchDiagnostics {
    pub evaluations: usize,
    pub grid_per_axis: usize,
    pub refined_starts: usize,
    /// Random rather than exhaustive grid (`d > 4`).
    pub heuristic: bool,
    /// Every Nelder–Mead run met its tolerance.
    pub converged: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SearchResult {
    pub value: f64,
    /// Best grid value: attained at a grid point, hence a lower bound of the supremum.
    pub certified_lower: f64,
    pub witness_u: Vec<f64>,
    pub diagnostics: SearchDiagnostics,
}

fn point_on_face(dim: usize, face: usize, y: &[f64]) -> Vec<f64> {
    let mut u = Vec::with_capacity(dim);
    let mut k = 0;
    for j in 0..dim {
        if j == face {
            u.push(1.0);
        } else {
            u.push(y[k].exp());
            k += 1;
        }
    }
    u
}

struct Candidate {
    face: usize,
    y: Vec<f64>,
}

fn grid_candidates(dim: usize, n: usize, l: f64) -> Vec<Candidate> {
    let free = dim - 1;
    let per_face = n.pow(free as u32);
    let step = if n > 1 { l / (n - 1) as f64 } else { 0.0 };
    let mut out = Vec::with_capacity(dim * per_face);
    for face in 0..dim {
        for idx in 0..per_face {
            let mut r = idx;
            let y = (0..free)
                .map(|_| {
                    let t = r % n;
                    r /= n;
                    t as f64 * step
                })
                .collect();
            out.push(Candidate { face, y });
        }
    }
    out
}

fn random_candidates(dim: usize, count: usize, l: f64, seed: u64) -> Vec<Candidate> {
    let free = dim - 1;
    let mut out = Vec::new();
    // corners of every face first
    for face in 0..dim {
        for mask in 0..(1usize << free) {
            let y = (0..free).map(|b| if mask >> b & 1 == 1 { l } else { 0.0 }).collect();
            out.push(Candidate { face, y });
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for k in 0..count {
        let y = (0..free).map(|_| rng.random::<f64>() * l).collect();
        out.push(Candidate { face: k % dim, y });
    }
    out
}

/// Maximizes `f` over the canonical section.
pub fn section_search<F>(dim: usize, opts: &SearchOptions, f: F) -> SearchResult
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    assert!(dim >= 1);
    if dim == 1 {
        let v = f(&[1.0]);
        return SearchResult {
            value: v,
            certified_lower: v,
            witness_u: vec![1.0],
            diagnostics: SearchDiagnostics {
                evaluations: 1,
                grid_per_axis: 1,
                refined_starts: 0,
                heuristic: false,
                converged: true,
            },
        };
    }
    let l = opts.u_max.ln();
    let heuristic = dim > 4 && opts.grid.is_none();
    let n = opts.grid.unwrap_or_else(|| default_grid(dim));
    let cands = if heuristic {
        random_candidates(dim, opts.random_points, l, opts.seed)
    } else {
        grid_candidates(dim, n, l)
    };
    let values: Vec<f64> = cands.par_iter().map(|c| f(&point_on_face(dim, c.face, &c.y))).collect();
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[b].total_cmp(&values[a]).then(a.cmp(&b)));
    let best = order[0];
    let certified_lower = values[best];
    let mut value = certified_lower;
    let mut witness_u = point_on_face(dim, cands[best].face, &cands[best].y);
    let mut evaluations = values.len();
    let mut converged = true;
    let mut refined_starts = 0;
    if opts.refine && opts.starts > 0 {
        let starts: Vec<usize> = order.iter().copied().take(opts.starts).collect();
        refined_starts = starts.len();
        let scale = if heuristic { l / 20.0 } else { 2.0 * l / (n.max(2) - 1) as f64 };
        let runs: Vec<(f64, Vec<f64>, usize, bool)> = starts
            .par_iter()
            .map(|&s| {
                let c = &cands[s];
                let g = |y: &[f64]| f(&point_on_face(dim, c.face, y));
                let r = nelder_mead_max(&g, &c.y, scale.max(1e-3), 0.0, l);
                (r.value, point_on_face(dim, c.face, &r.x), r.evaluations, r.converged)
            })
            .collect();
        for (v, u, ev, conv) in runs {
            evaluations += ev;
            converged &= conv;
            if v > value {
                value = v;
                witness_u = u;
            }
        }
    }
    SearchResult {
        value,
        certified_lower,
        witness_u,
        diagnostics: SearchDiagnostics { evaluations, grid_per_axis: n, refined_starts, heuristic, converged },
    }
}

#[derive(Debug, Clone)]
pub struct NelderMeadResult {
    pub x: Vec<f64>,
    pub value: f64,
    pub evaluations: usize,
    pub converged: bool,
}

/// Nelder–Mead maximization with every coordinate clamped to `[lo, hi]`.
pub fn nelder_mead_max<G: Fn(&[f64]) -> f64>(g: &G, x0: &[f64], step: f64, lo: f64, hi: f64) -> NelderMeadResult {
    let k = x0.len();
    let clamp = |x: Vec<f64>| -> Vec<f64> { x.into_iter().map(|v| v.clamp(lo, hi)).collect() };
    let mut evals = 0usize;
    let mut eval = |x: &[f64]| {
        evals += 1;
        -g(x)
    };
    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(k + 1);
    let x0 = clamp(x0.to_vec());
    let f0 = eval(&x0);
    simplex.push((x0.clone(), f0));
    for i in 0..k {
        let mut x = x0.clone();
        // step inward when the start sits on the upper bound
        x[i] = if x[i] + step <= hi { x[i] + step } else { x[i] - step };
        let x = clamp(x);
        let fx = eval(&x);
        simplex.push((x, fx));
    }
    let max_iter = 400 * (k + 1);
    let mut converged = false;
    for _ in 0..max_iter {
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        let fbest = simplex[0].1;
        let fworst = simplex[k].1;
        let diam = simplex
            .iter()
            .skip(1)
            .map(|(x, _)| x.iter().zip(&simplex[0].0).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max))
            .fold(0.0, f64::max);
        if (fworst - fbest).abs() <= 1e-15 + 1e-13 * fbest.abs() && diam <= 1e-9 {
            converged = true;
            break;
        }
        let centroid: Vec<f64> = (0..k).map(|j| simplex[..k].iter().map(|(x, _)| x[j]).sum::<f64>() / k as f64).collect();
        let along = |t: f64| -> Vec<f64> {
            clamp(centroid.iter().zip(&simplex[k].0).map(|(c, w)| c + t * (c - w)).collect())
        };
        let xr = along(1.0);
        let fr = eval(&xr);
        if fr < simplex[0].1 {
            let xe = along(2.0);
            let fe = eval(&xe);
            simplex[k] = if fe < fr { (xe, fe) } else { (xr, fr) };
            continue;
        }
        if fr < simplex[k - 1].1 {
            simplex[k] = (xr, fr);
            continue;
        }
        let (xc, fc) = if fr < simplex[k].1 {
            let xc = along(0.5);
            let fc = eval(&xc);
            (xc, fc)
        } else {
            let xc = along(-0.5);
            let fc = eval(&xc);
            (xc, fc)
        };
        if fc < simplex[k].1.min(fr) {
            simplex[k] = (xc, fc);
            continue;
        }
        let best = simplex[0].0.clone();
        for v in simplex.iter_mut().skip(1) {
            let x = clamp(best.iter().zip(&v.0).map(|(b, x)| b + 0.5 * (x - b)).collect());
            let fx = eval(&x);
            *v = (x, fx);
        }
    }
    simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
    let (x, f) = simplex.swap_remove(0);
    NelderMeadResult { x, value: -f, evaluations: evals, converged }
}
