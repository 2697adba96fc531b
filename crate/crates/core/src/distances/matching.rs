//! Empirical 2-Wasserstein distance between equal-size samples via an
//! epsilon-scaled auction for the optimal assignment.

use serde::Serialize;

use crate::error::{invalid, Result};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EmpiricalW2 {
    pub value: f64,
    /// Delta-method standard error of `value`.
    pub std_error: f64,
    /// `assignment[i]` is the index in the second sample matched to point `i`.
    pub assignment: Vec<usize>,
    /// Mean cost exceeds the optimum by at most this much.
    pub optimality_gap: f64,
}

fn sq_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// Minimum mean squared-Euclidean matching between `x` and `y`.
pub fn empirical_w2(x: &[Vec<f64>], y: &[Vec<f64>]) -> Result<EmpiricalW2> {
    let n = x.len();
    if n == 0 || y.len() != n {
        return invalid("empirical W2 needs two nonempty samples of equal size");
    }
    let dim = x[0].len();
    if x.iter().chain(y).any(|p| p.len() != dim) {
        return invalid("sample points must share one dimension");
    }
    let max_cost = x.iter().flat_map(|a| y.iter().map(move |b| sq_dist(a, b))).fold(0.0, f64::max);
    if n == 1 || max_cost == 0.0 {
        let assignment: Vec<usize> = (0..n).collect();
        let mean = (0..n).map(|i| sq_dist(&x[i], &y[i])).sum::<f64>() / n as f64;
        return Ok(EmpiricalW2 { value: mean.sqrt(), std_error: 0.0, assignment, optimality_gap: 0.0 });
    }
    let eps_final = 1e-9 * max_cost.max(1.0);
    let mut eps = max_cost / 4.0;
    let mut prices = vec![0.0; n];
    let mut owner_of = vec![usize::MAX; n];
    let mut object_of = vec![usize::MAX; n];
    loop {
        owner_of.iter_mut().for_each(|o| *o = usize::MAX);
        object_of.iter_mut().for_each(|o| *o = usize::MAX);
        let mut free: Vec<usize> = (0..n).rev().collect();
        while let Some(i) = free.pop() {
            // value of object j to person i is -(cost + price)
            let (mut best, mut best_j, mut second) = (f64::INFINITY, 0usize, f64::INFINITY);
            for (j, yj) in y.iter().enumerate() {
                let v = sq_dist(&x[i], yj) + prices[j];
                if v < best {
                    second = best;
                    best = v;
                    best_j = j;
                } else if v < second {
                    second = v;
                }
            }
            let incr = if second.is_finite() { second - best } else { 0.0 };
            prices[best_j] += incr + eps;
            let prev = owner_of[best_j];
            owner_of[best_j] = i;
            object_of[i] = best_j;
            if prev != usize::MAX {
                object_of[prev] = usize::MAX;
                free.push(prev);
            }
        }
        if eps <= eps_final {
            break;
        }
        eps = (eps / 6.0).max(eps_final);
    }
    let costs: Vec<f64> = (0..n).map(|i| sq_dist(&x[i], &y[object_of[i]])).collect();
    let mean = costs.iter().sum::<f64>() / n as f64;
    let var = costs.iter().map(|c| (c - mean).powi(2)).sum::<f64>() / (n as f64 - 1.0);
    let value = mean.sqrt();
    let std_error = if value > 0.0 { var.sqrt() / (n as f64).sqrt() / (2.0 * value) } else { 0.0 };
    Ok(EmpiricalW2 { value, std_error, assignment: object_of, optimality_gap: eps })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute(x: &[Vec<f64>], y: &[Vec<f64>]) -> f64 {
        fn rec(x: &[Vec<f64>], y: &[Vec<f64>], i: usize, used: &mut [bool], acc: f64, best: &mut f64) {
            if i == x.len() {
                *best = best.min(acc);
                return;
            }
            for j in 0..y.len() {
                if !used[j] {
                    used[j] = true;
                    rec(x, y, i + 1, used, acc + sq_dist(&x[i], &y[j]), best);
                    used[j] = false;
                }
            }
        }
        let mut best = f64::INFINITY;
        rec(x, y, 0, &mut vec![false; y.len()], 0.0, &mut best);
        (best / x.len() as f64).sqrt()
    }

    #[test]
    fn matches_enumeration() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for n in [2, 4, 6, 7] {
            let mut pts = || (0..n).map(|_| vec![rng.random::<f64>(), rng.random::<f64>()]).collect::<Vec<_>>();
            let (x, y) = (pts(), pts());
            let r = empirical_w2(&x, &y).unwrap();
            assert!((r.value - brute(&x, &y)).abs() < 1e-7);
            let mut seen = r.assignment.clone();
            seen.sort_unstable();
            assert_eq!(seen, (0..n).collect::<Vec<_>>());
        }
    }

    #[test]
    fn shifted_sample() {
        let x: Vec<Vec<f64>> = (0..50).map(|k| vec![k as f64 * 0.1]).collect();
        let y: Vec<Vec<f64>> = x.iter().map(|p| vec![p[0] + 0.5]).collect();
        assert!((empirical_w2(&x, &y).unwrap().value - 0.5).abs() < 1e-6);
    }
}
