//! Discrete optimal transport by the transportation simplex (MODI method).

use std::collections::VecDeque;

use nalgebra::DMatrix;
use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::spectral::DeHaanRepresenter;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TransportPlan {
    /// Row-major `m x n` coupling.
    pub coupling: Vec<Vec<f64>>,
    pub cost: f64,
    pub iterations: usize,
}

struct Basis {
    m: usize,
    n: usize,
    cells: Vec<(usize, usize)>,
    flow: DMatrix<f64>,
}

impl Basis {
    fn northwest(supply: &[f64], demand: &[f64]) -> Basis {
        let (m, n) = (supply.len(), demand.len());
        let (mut a, mut b) = (supply.to_vec(), demand.to_vec());
        let mut flow = DMatrix::zeros(m, n);
        let mut cells = Vec::with_capacity(m + n - 1);
        let (mut i, mut j) = (0, 0);
        loop {
            let q = a[i].min(b[j]).max(0.0);
            flow[(i, j)] = q;
            cells.push((i, j));
            a[i] -= q;
            b[j] -= q;
            if i == m - 1 && j == n - 1 {
                break;
            }
            if j == n - 1 || (i < m - 1 && a[i] < b[j]) {
                i += 1;
            } else {
                j += 1;
            }
        }
        Basis { m, n, cells, flow }
    }

    /// Tree adjacency: node `r` is row `r`, node `m + c` is column `c`; edges carry the cell index.
    fn adjacency(&self) -> Vec<Vec<(usize, usize)>> {
        let mut adj = vec![Vec::new(); self.m + self.n];
        for (k, &(i, j)) in self.cells.iter().enumerate() {
            adj[i].push((self.m + j, k));
            adj[self.m + j].push((i, k));
        }
        adj
    }

    fn potentials(&self, cost: &DMatrix<f64>, adj: &[Vec<(usize, usize)>]) -> (Vec<f64>, Vec<f64>) {
        let m = self.m;
        let mut pot = vec![f64::NAN; m + self.n];
        pot[0] = 0.0;
        let mut queue = VecDeque::from([0usize]);
        while let Some(node) = queue.pop_front() {
            for &(next, k) in &adj[node] {
                if pot[next].is_nan() {
                    let (i, j) = self.cells[k];
                    pot[next] = cost[(i, j)] - pot[node];
                    queue.push_back(next);
                }
            }
        }
        (pot[..m].to_vec(), pot[m..].to_vec())
    }

    /// Cell indices on the tree path from column `j` to row `i`.
    fn path(&self, adj: &[Vec<(usize, usize)>], i: usize, j: usize) -> Vec<usize> {
        let start = self.m + j;
        let mut parent: Vec<Option<(usize, usize)>> = vec![None; self.m + self.n];
        let mut seen = vec![false; self.m + self.n];
        seen[start] = true;
        let mut queue = VecDeque::from([start]);
        while let Some(node) = queue.pop_front() {
            if node == i {
                break;
            }
            for &(next, k) in &adj[node] {
                if !seen[next] {
                    seen[next] = true;
                    parent[next] = Some((node, k));
                    queue.push_back(next);
                }
            }
        }
        let mut edges = Vec::new();
        let mut node = i;
        while let Some((prev, k)) = parent[node] {
            edges.push(k);
            node = prev;
        }
        edges.reverse();
        edges
    }
}

/// Minimum-cost coupling of `supply` and `demand` (equal totals) for `cost`.
pub fn transport_sup(supply: &[f64], demand: &[f64], cost: &DMatrix<f64>) -> Result<TransportPlan> {
    let (m, n) = (supply.len(), demand.len());
    if m == 0 || n == 0 {
        return invalid("transport needs nonempty marginals");
    }
    if cost.nrows() != m || cost.ncols() != n {
        return Err(Error::DimensionMismatch(m * n, cost.nrows() * cost.ncols()));
    }
    if supply.iter().chain(demand).any(|w| !(*w >= 0.0 && w.is_finite())) {
        return invalid("transport weights must be finite and nonnegative");
    }
    let (sa, sb): (f64, f64) = (supply.iter().sum(), demand.iter().sum());
    if (sa - sb).abs() > 1e-9 * sa.max(sb).max(1.0) {
        return invalid(format!("marginal totals differ: {sa} vs {sb}"));
    }
    let mut basis = Basis::northwest(supply, demand);
    let scale = cost.iter().fold(0.0f64, |s, c| s.max(c.abs())).max(1.0);
    let cap = 1000 + 50 * m * n;
    let mut iterations = 0;
    loop {
        let adj = basis.adjacency();
        let (u, v) = basis.potentials(cost, &adj);
        let mut entering: Option<(usize, usize, f64)> = None;
        for i in 0..m {
            for j in 0..n {
                let r = cost[(i, j)] - u[i] - v[j];
                if r < -1e-12 * scale && entering.is_none_or(|(_, _, best)| r < best) {
                    entering = Some((i, j, r));
                }
            }
        }
        let Some((ei, ej, _)) = entering else { break };
        if iterations == cap {
            return Err(Error::Nonconvergence(format!("transport simplex hit {cap} pivots")));
        }
        iterations += 1;
        // path from column ej to row ei; signs alternate starting with minus
        let path = basis.path(&adj, ei, ej);
        let mut leave: Option<(usize, f64)> = None;
        for (pos, &k) in path.iter().enumerate() {
            if pos % 2 == 0 {
                let (i, j) = basis.cells[k];
                let f = basis.flow[(i, j)];
                let better = match leave {
                    None => true,
                    Some((lk, lf)) => {
                        let (li, lj) = basis.cells[lk];
                        f < lf || (f == lf && i * n + j < li * n + lj)
                    }
                };
                if better {
                    leave = Some((k, f));
                }
            }
        }
        let (lk, theta) = leave.expect("cycle has a minus cell");
        for (pos, &k) in path.iter().enumerate() {
            let (i, j) = basis.cells[k];
            if pos % 2 == 0 {
                basis.flow[(i, j)] = (basis.flow[(i, j)] - theta).max(0.0);
            } else {
                basis.flow[(i, j)] += theta;
            }
        }
        let (li, lj) = basis.cells[lk];
        basis.flow[(li, lj)] = 0.0;
        basis.flow[(ei, ej)] = theta;
        basis.cells[lk] = (ei, ej);
    }
    let total = basis.flow.component_mul(cost).sum();
    let coupling = (0..m).map(|i| (0..n).map(|j| basis.flow[(i, j)]).collect()).collect();
    Ok(TransportPlan { coupling, cost: total, iterations })
}

/// `W1` between two representers under the sup-norm ground cost.
///
/// With `power`, atoms are first raised to the power `alpha`, which gives
/// the transport term in the Wasserstein bound on the Kolmogorov distance.
pub fn wasserstein1_sup(z1: &DeHaanRepresenter, z2: &DeHaanRepresenter, power: bool) -> Result<(f64, TransportPlan)> {
    if z1.dim() != z2.dim() {
        return Err(Error::DimensionMismatch(z1.dim(), z2.dim()));
    }
    let (a1, a2) = if power {
        if z1.alpha() != z2.alpha() {
            return Err(Error::AlphaMismatch(z1.alpha(), z2.alpha()));
        }
        (z1.powered_atoms(), z2.powered_atoms())
    } else {
        (z1.atoms().to_vec(), z2.atoms().to_vec())
    };
    let cost = DMatrix::from_fn(a1.len(), a2.len(), |i, j| {
        a1[i].point.iter().zip(&a2[j].point).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
    });
    let s: Vec<f64> = a1.iter().map(|a| a.weight).collect();
    let t: Vec<f64> = a2.iter().map(|a| a.weight).collect();
    let plan = transport_sup(&s, &t, &cost)?;
    Ok((plan.cost, plan))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn best_assignment(cost: &DMatrix<f64>) -> f64 {
        fn rec(c: &DMatrix<f64>, row: usize, used: &mut Vec<bool>, acc: f64, best: &mut f64) {
            if row == c.nrows() {
                *best = best.min(acc);
                return;
            }
            for j in 0..c.ncols() {
                if !used[j] {
                    used[j] = true;
                    rec(c, row + 1, used, acc + c[(row, j)], best);
                    used[j] = false;
                }
            }
        }
        let mut best = f64::INFINITY;
        rec(cost, 0, &mut vec![false; cost.ncols()], 0.0, &mut best);
        best
    }

    #[test]
    fn uniform_weights_match_brute_force_assignment() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for n in 1..=6 {
            for _ in 0..20 {
                let cost = DMatrix::from_fn(n, n, |_, _| rng.random::<f64>());
                let w = vec![1.0 / n as f64; n];
                let plan = transport_sup(&w, &w, &cost).unwrap();
                let exact = best_assignment(&cost) / n as f64;
                assert!((plan.cost - exact).abs() < 1e-12, "n={n}: {} vs {exact}", plan.cost);
            }
        }
    }

    #[test]
    fn marginals_are_respected() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let s = [0.1, 0.4, 0.2, 0.3];
        let t = [0.25, 0.25, 0.5];
        let cost = DMatrix::from_fn(4, 3, |_, _| rng.random::<f64>());
        let plan = transport_sup(&s, &t, &cost).unwrap();
        for (i, row) in plan.coupling.iter().enumerate() {
            assert!((row.iter().sum::<f64>() - s[i]).abs() < 1e-15);
            assert!(row.iter().all(|&v| v >= 0.0));
        }
        for (j, &tj) in t.iter().enumerate() {
            assert!((plan.coupling.iter().map(|r| r[j]).sum::<f64>() - tj).abs() < 1e-15);
        }
        assert!(transport_sup(&s, &[0.5, 0.4], &DMatrix::zeros(4, 2)).is_err());
    }

    #[test]
    fn single_atom_is_distance() {
        use crate::spectral::Atom;
        let z1 = DeHaanRepresenter::new(2, 1.0, vec![Atom::new(vec![1.0, 1.0], 1.0)]).unwrap();
        let z2 = DeHaanRepresenter::new(2, 1.0, vec![Atom::new(vec![2.0, 0.0], 0.5), Atom::new(vec![0.0, 2.0], 0.5)])
            .unwrap();
        let (w, _) = wasserstein1_sup(&z1, &z2, true).unwrap();
        assert!((w - 1.0).abs() < 1e-15);
        assert_eq!(wasserstein1_sup(&z1, &z1, true).unwrap().0, 0.0);
    }
}
