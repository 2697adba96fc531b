use crate::spectral::angular::AngularMeasure;
use crate::spectral::norm::NormSpec;

/// Scalar constants attached to an angular measure and its reference sphere.
#[derive(Debug, Clone, PartialEq)]
pub struct SphereConstants {
    /// `sup_{u in S} ||u||_alpha^alpha`
    pub m_alpha: f64,
    /// `H(S)`
    pub nu0: f64,
    /// `max(1, sup_{u in S} ||u||_inf)`
    pub c_inf: f64,
    /// Total mass used when canonicalizing; equal to `nu0`.
    pub b: f64,
    /// False when the numeric supremum for `m_alpha` did not converge.
    pub converged: bool,
    pub warnings: Vec<String>,
}

/// `d^{max(0, 1 - alpha/p)}`, the value of `m_alpha` on a plain `l_p` sphere.
pub fn m_alpha_closed_form(p: f64, alpha: f64, dim: usize) -> f64 {
    let e = if p.is_infinite() { 1.0 } else { 1.0 - alpha / p };
    (dim as f64).powf(e.max(0.0))
}

/// Result of a numeric supremum over a sphere.
#[derive(Debug, Clone)]
pub struct NumericSup {
    pub value: f64,
    pub argmax: Vec<f64>,
    pub converged: bool,
}

/// `m_alpha` for any supported map: closed form for plain `l_p` and weighted `l_inf`,
/// numeric maximization otherwise.
pub fn m_alpha(norm: &NormSpec, alpha: f64, dim: usize) -> (f64, bool) {
    match norm {
        NormSpec::Lp { p } => (m_alpha_closed_form(*p, alpha, dim), true),
        NormSpec::WeightedLp { p, weights } if p.is_infinite() => {
            (weights.iter().map(|w| w.powf(-alpha)).sum(), true)
        }
        _ => {
            let r = m_alpha_numeric(norm, alpha, dim);
            (r.value, r.converged)
        }
    }
}

/// Multistart projected gradient ascent of `||u||_alpha^alpha` over the positive
/// sphere of `norm`.
///
/// Finite `p`: the objective is written as the 0-homogeneous ratio
/// `sum u_j^alpha / tau(u)^alpha` and ascended in log-coordinates on every face
/// of the orthant, each face started from its barycenter (the `2^d - 1` nonempty
/// coordinate subsets, the full one being the global barycenter).
/// `p = inf`: the sphere's supremum equals the supremum over the box
/// `0 <= u_j <= 1/w_j`, ascended with box projection.
pub fn m_alpha_numeric(norm: &NormSpec, alpha: f64, dim: usize) -> NumericSup {
    let p = norm.p();
    let w: Vec<f64> = (0..dim).map(|i| norm.weights().map_or(1.0, |w| w[i])).collect();
    if p.is_infinite() {
        return box_ascent(&w, alpha);
    }
    assert!(dim <= 20, "face enumeration is exponential in the dimension");
    let mut best = NumericSup { value: f64::NEG_INFINITY, argmax: vec![], converged: true };
    for mask in 1u32..(1u32 << dim) {
        let face: Vec<usize> = (0..dim).filter(|i| mask & (1 << i) != 0).collect();
        let fw: Vec<f64> = face.iter().map(|&i| w[i]).collect();
        let (y, lv, conv) = face_ascent(&fw, alpha, p);
        best.converged &= conv;
        let v = lv.exp();
        if v > best.value {
            let mut u = vec![0.0; dim];
            for (k, &i) in face.iter().enumerate() {
                u[i] = y[k].exp();
            }
            let t = norm.evaluate(&u);
            u.iter_mut().for_each(|x| *x /= t);
            best.value = v;
            best.argmax = u;
        }
    }
    best
}

fn log_sum_exp(v: impl Iterator<Item = f64> + Clone) -> f64 {
    let m = v.clone().fold(f64::NEG_INFINITY, f64::max);
    m + v.map(|x| (x - m).exp()).sum::<f64>().ln()
}

/// `ln f(y) = lse(alpha y) - (alpha/p) lse(p y + ln w)` and its gradient.
fn face_objective(y: &[f64], w: &[f64], alpha: f64, p: f64) -> (f64, Vec<f64>) {
    let a = log_sum_exp(y.iter().map(|v| alpha * v));
    let b = log_sum_exp(y.iter().zip(w).map(|(v, wi)| p * v + wi.ln()));
    let grad = y
        .iter()
        .zip(w)
        .map(|(v, wi)| alpha * ((alpha * v - a).exp() - (p * v + wi.ln() - b).exp()))
        .collect();
    (a - alpha / p * b, grad)
}

fn face_ascent(w: &[f64], alpha: f64, p: f64) -> (Vec<f64>, f64, bool) {
    let mut y = vec![0.0; w.len()];
    let (mut f, mut g) = face_objective(&y, w, alpha, p);
    let mut step = 1.0;
    for _ in 0..20_000 {
        let gn2: f64 = g.iter().map(|x| x * x).sum();
        if gn2.sqrt() < 1e-11 {
            return (y, f, true);
        }
        // Armijo backtracking
        loop {
            let cand: Vec<f64> = y.iter().zip(&g).map(|(a, b)| a + step * b).collect();
            let (fc, gc) = face_objective(&cand, w, alpha, p);
            if fc >= f + 1e-4 * step * gn2 {
                y = cand;
                f = fc;
                g = gc;
                step *= 2.0;
                break;
            }
            step *= 0.5;
            if step < 1e-18 {
                return (y, f, gn2.sqrt() < 1e-7);
            }
        }
        // drifting far out means the optimum is on a lower face, reached by another start
        if y.iter().any(|v| v.abs() > 700.0) {
            return (y, f, true);
        }
    }
    let gn = g.iter().map(|x| x * x).sum::<f64>().sqrt();
    (y, f, gn < 1e-7)
}

fn box_ascent(w: &[f64], alpha: f64) -> NumericSup {
    let upper: Vec<f64> = w.iter().map(|x| 1.0 / x).collect();
    let mut u: Vec<f64> = upper.iter().map(|b| 0.5 * b).collect();
    let obj = |u: &[f64]| u.iter().map(|x| x.powf(alpha)).sum::<f64>();
    let mut converged = false;
    for _ in 0..1000 {
        let next: Vec<f64> = u
            .iter()
            .zip(&upper)
            .map(|(x, b)| (x + alpha * x.powf(alpha - 1.0)).clamp(0.0, *b))
            .collect();
        if next.iter().zip(&u).all(|(a, b)| a == b) {
            converged = true;
            break;
        }
        u = next;
    }
    NumericSup { value: obj(&u), argmax: u, converged }
}

/// Constants of `H` used by the TV and stability-index bounds.
pub fn sphere_constants(h: &AngularMeasure) -> SphereConstants {
    let d = h.dim();
    let alpha = h.alpha();
    let (m, converged) = m_alpha(h.norm(), alpha, d);
    let nu0 = h.total_mass();
    let c_inf = h.norm().sup_linf_on_sphere(d).max(1.0);
    let mut warnings = Vec::new();
    if let NormSpec::Lp { p } = h.norm() {
        let r = if p.is_infinite() { 0.0 } else { alpha / p };
        let (lo, hi) = ((d as f64).powf(r.min(1.0)), (d as f64).powf(r.max(1.0)));
        let slack = 1e-9 * hi;
        if h.is_normalized() && (nu0 < lo - slack || nu0 > hi + slack) {
            warnings.push(format!("total mass {nu0} outside [{lo}, {hi}]"));
        }
    }
    if !converged {
        warnings.push("numeric supremum for m_alpha did not converge".into());
    }
    SphereConstants { m_alpha: m, nu0, c_inf, b: nu0, converged, warnings }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_form_values() {
        assert_eq!(m_alpha_closed_form(1.0, 1.0, 5), 1.0);
        assert_eq!(m_alpha_closed_form(f64::INFINITY, 1.0, 4), 4.0);
        assert_eq!(m_alpha_closed_form(1.0, 2.0, 3), 1.0);
        assert!((m_alpha_closed_form(2.0, 1.0, 4) - 2.0).abs() < 1e-15);
    }

    #[test]
    fn numeric_matches_closed_form_small() {
        for &p in &[0.5, 1.0, 2.0, 3.0, f64::INFINITY] {
            for &a in &[0.5, 1.0, 2.0] {
                for d in 1..=4 {
                    let r = m_alpha_numeric(&NormSpec::lp(p), a, d);
                    assert!(r.converged);
                    let c = m_alpha_closed_form(p, a, d);
                    assert!((r.value - c).abs() < 1e-8, "p={p} a={a} d={d}: {} vs {c}", r.value);
                }
            }
        }
    }

    #[test]
    fn weighted_numeric_against_lagrange_solution() {
        // on the face interior with q = alpha/p < 1 the maximizer has t_j ∝ w_j^{-q/(1-q)}
        let (alpha, p) = (1.0, 2.0);
        let w = [1.0, 4.0, 0.25];
        let q: f64 = alpha / p;
        let t: Vec<f64> = w.iter().map(|x: &f64| x.powf(-q / (1.0 - q))).collect();
        let s: f64 = t.iter().sum();
        let expected: f64 = t.iter().zip(&w).map(|(ti, wi)| (ti / s / wi).powf(q)).sum();
        let r = m_alpha_numeric(&NormSpec::weighted(p, w.to_vec()), alpha, 3);
        assert!(r.converged);
        assert!((r.value - expected).abs() < 1e-10, "{} vs {expected}", r.value);
    }

    #[test]
    fn constants_of_standard_measures() {
        let h = AngularMeasure::independent(3, 1.0, NormSpec::lp(1.0)).unwrap();
        let c = sphere_constants(&h);
        assert_eq!(c.m_alpha, 1.0);
        assert_eq!(c.nu0, 3.0);
        assert_eq!(c.c_inf, 1.0);
        assert!(c.warnings.is_empty());
        let h = AngularMeasure::comonotone(3, 1.0, NormSpec::linf()).unwrap();
        let c = sphere_constants(&h);
        assert_eq!(c.m_alpha, 3.0);
        assert!((c.nu0 - 1.0).abs() < 1e-15);
        assert!(c.warnings.is_empty());
    }
}
