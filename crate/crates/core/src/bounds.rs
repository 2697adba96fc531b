//! Upper bounds on the Kolmogorov distance between max-stable laws.

use std::collections::BTreeMap;
use std::f64::consts::E;

use nalgebra::DMatrix;
use serde::Serialize;

use crate::distances::{
    golden_max, kolmogorov_univariate_frechet, w2_gelbrich, wasserstein1_sup, SearchOptions,
};
use crate::error::{invalid, Error, Result};
use crate::models::{Family, Generator, MarginSpec, MaxStableModel};
use crate::psi::psi_sup_discrepancy;
use crate::spectral::{
    canonical_representer, m_alpha, reproject, sphere_constants, tv_distance, AngularMeasure, DeHaanRepresenter,
    NormSpec,
};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundReport {
    pub name: String,
    pub value: f64,
    pub constants: BTreeMap<String, f64>,
    /// Distance the bound is compared against, when one was supplied.
    pub dominated_quantity: Option<f64>,
    pub slack: Option<f64>,
    pub notes: Vec<String>,
}

impl BoundReport {
    fn new(name: &str, value: f64) -> Self {
        BoundReport {
            name: name.into(),
            value,
            constants: BTreeMap::new(),
            dominated_quantity: None,
            slack: None,
            notes: Vec::new(),
        }
    }

    fn with(mut self, key: &str, v: f64) -> Self {
        self.constants.insert(key.into(), v);
        self
    }

    /// Records `dk` as the dominated distance and the resulting slack.
    pub fn against(mut self, dk: f64) -> Self {
        self.dominated_quantity = Some(dk);
        self.slack = Some(self.value - dk);
        self
    }

    /// False only when a dominated quantity is known and exceeds the bound by more than `tol`.
    pub fn holds(&self, tol: f64) -> bool {
        self.slack.is_none_or(|s| s >= -tol)
    }
}

/// `W1,inf((Z1)^alpha, (Z2)^alpha) / e`.
pub fn bound_wasserstein(z1: &DeHaanRepresenter, z2: &DeHaanRepresenter) -> Result<BoundReport> {
    let (w, plan) = wasserstein1_sup(z1, z2, true)?;
    Ok(BoundReport::new("wasserstein", w / E)
        .with("w1_sup", w)
        .with("factor_1_over_e", 1.0 / E)
        .with("pivots", plan.iterations as f64))
}

/// The Wasserstein bound minimized over the canonical representers of `h1`,
/// `h2` and any extra representer pairs for the same laws.
pub fn bound_wasserstein_measures(
    h1: &AngularMeasure,
    h2: &AngularMeasure,
    extra: &[(DeHaanRepresenter, DeHaanRepresenter)],
) -> Result<BoundReport> {
    let mut best = bound_wasserstein(&canonical_representer(h1)?, &canonical_representer(h2)?)?;
    best.notes.push("representers: canonical".into());
    for (k, (z1, z2)) in extra.iter().enumerate() {
        let r = bound_wasserstein(z1, z2)?;
        if r.value < best.value {
            best = r;
            best.notes.push(format!("representers: supplied pair {k}"));
        }
    }
    Ok(best.with("candidates", 1.0 + extra.len() as f64))
}

/// `l_alpha`, `l_1` and `l_inf`, without duplicates.
pub fn default_tv_norms(alpha: f64) -> Vec<NormSpec> {
    let mut out = vec![NormSpec::lp(alpha)];
    for n in [NormSpec::lp(1.0), NormSpec::linf()] {
        if !out.contains(&n) {
            out.push(n);
        }
    }
    out
}

/// `min over norms of M_alpha(norm) ||H1 - H2||_TV / e`, both measures reprojected to each norm.
pub fn bound_tv(h1: &AngularMeasure, h2: &AngularMeasure, norms: &[NormSpec]) -> Result<BoundReport> {
    if norms.is_empty() {
        return invalid("bound_tv needs at least one norm");
    }
    if h1.alpha() != h2.alpha() {
        return Err(Error::AlphaMismatch(h1.alpha(), h2.alpha()));
    }
    let (d, alpha) = (h1.dim(), h1.alpha());
    let mut best: Option<BoundReport> = None;
    for norm in norms {
        let tv = tv_distance(&reproject(h1, norm)?, &reproject(h2, norm)?)?;
        let (m, converged) = m_alpha(norm, alpha, d);
        let mut r = BoundReport::new("tv", m * tv / E).with("m_alpha", m).with("tv", tv).with("factor_1_over_e", 1.0 / E);
        r.notes.push(format!("norm: {}", norm.label()));
        if !converged {
            r.notes.push("m_alpha supremum not converged".into());
        }
        if best.as_ref().is_none_or(|b| r.value < b.value) {
            best = Some(r);
        }
    }
    Ok(best.unwrap().with("norms_tried", norms.len() as f64))
}

/// `sup_u sum_i |Psi^1_i(u) - Psi^2_i(u)| / e`.
pub fn bound_psi(m1: &MaxStableModel, m2: &MaxStableModel, opts: &SearchOptions) -> Result<BoundReport> {
    let s = psi_sup_discrepancy(m1, m2, opts)?;
    let mut r = BoundReport::new("psi", s.value / E)
        .with("psi_sup", s.value)
        .with("psi_grid_lower", s.certified_lower)
        .with("factor_1_over_e", 1.0 / E);
    if s.diagnostics.heuristic {
        r.notes.push("randomized section search".into());
    }
    Ok(r)
}

/// `(nu0/e) |a1 - a2| max(1/(e a_*), C_inf^{a^*} ln C_inf)` for one measure used with two indices.
pub fn bound_alpha_mismatch(h: &AngularMeasure, alpha1: f64, alpha2: f64) -> Result<BoundReport> {
    check_alphas(alpha1, alpha2)?;
    let c = sphere_constants(h);
    let (lo, hi) = (alpha1.min(alpha2), alpha1.max(alpha2));
    let factor = (1.0 / (E * lo)).max(c.c_inf.powf(hi) * c.c_inf.ln());
    Ok(BoundReport::new("alpha_mismatch", c.nu0 / E * (alpha1 - alpha2).abs() * factor)
        .with("nu0", c.nu0)
        .with("c_inf", c.c_inf)
        .with("alpha_lower", lo)
        .with("alpha_upper", hi))
}

/// `d^{max(1, alpha/p)} |a1 - a2| / (e^2 a_*)` on the `l_p` sphere, with `alpha = max(a1, a2)`.
pub fn bound_alpha_lp(dim: usize, p: f64, alpha1: f64, alpha2: f64) -> Result<f64> {
    check_alphas(alpha1, alpha2)?;
    if !(p > 0.0) || dim == 0 {
        return invalid("bound_alpha_lp needs p > 0 and dim >= 1");
    }
    let r = if p.is_infinite() { 0.0 } else { alpha1.max(alpha2) / p };
    Ok((dim as f64).powf(r.max(1.0)) * (alpha1 - alpha2).abs() / (E * E * alpha1.min(alpha2)))
}

fn check_alphas(a1: f64, a2: f64) -> Result<()> {
    if !(a1 > 0.0 && a2 > 0.0 && a1.is_finite() && a2.is_finite()) {
        return invalid("indices must be positive");
    }
    Ok(())
}

/// `sqrt(2) d / (4e) (W2(U1, U2) + ||c1 - c2||_2)` for log-Gaussian representers
/// `Z = exp(U - c)`, `U ~ N(0, Sigma)`. `c` defaults to `diag(Sigma)/2`.
///
/// The constants also carry `expanded_form`, the same expression with the
/// full diagonal difference `||diag(S1) - diag(S2)||_2` in place of `||c1 - c2||_2`.
pub fn bound_brown_resnick(
    s1: &DMatrix<f64>,
    c1: Option<&[f64]>,
    s2: &DMatrix<f64>,
    c2: Option<&[f64]>,
) -> Result<BoundReport> {
    let d = s1.nrows();
    if s2.nrows() != d || s1.ncols() != d || s2.ncols() != d {
        return Err(Error::DimensionMismatch(d, s2.nrows()));
    }
    let half_diag = |s: &DMatrix<f64>| (0..d).map(|i| s[(i, i)] / 2.0).collect::<Vec<f64>>();
    let c1 = c1.map_or_else(|| half_diag(s1), <[f64]>::to_vec);
    let c2 = c2.map_or_else(|| half_diag(s2), <[f64]>::to_vec);
    if c1.len() != d || c2.len() != d {
        return Err(Error::DimensionMismatch(d, c1.len().min(c2.len())));
    }
    let zero = nalgebra::DVector::zeros(d);
    let w2 = w2_gelbrich(&zero, s1, &zero, s2)?;
    let shift = c1.iter().zip(&c2).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt();
    let diag = (0..d).map(|i| (s1[(i, i)] - s2[(i, i)]).powi(2)).sum::<f64>().sqrt();
    let k = std::f64::consts::SQRT_2 * d as f64 / (4.0 * E);
    Ok(BoundReport::new("brown_resnick", k * (w2 + shift))
        .with("softmax_lipschitz", std::f64::consts::SQRT_2 / 4.0)
        .with("w2_gelbrich", w2)
        .with("shift_norm", shift)
        .with("expanded_form", k * (w2 + diag)))
}

/// How the per-margin terms are computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MarginTerms {
    /// `|a1 - a2| / (e^2 a_*) + |c1 - c2| / (e min c)`.
    Analytic,
    /// The exact univariate Kolmogorov distance.
    Exact,
}

/// `dk_term + sum_i margin_i`: a distance between the standardized laws plus
/// the margin distances.
pub fn bound_different_margins(
    dk_term: f64,
    m1: &MarginSpec,
    m2: &MarginSpec,
    terms: MarginTerms,
) -> Result<BoundReport> {
    m1.validate()?;
    m2.validate()?;
    if m1.dim() != m2.dim() {
        return Err(Error::DimensionMismatch(m1.dim(), m2.dim()));
    }
    let mut r = BoundReport::new("different_margins", 0.0).with("copula_term", dk_term);
    let mut total = 0.0;
    for i in 0..m1.dim() {
        let u = kolmogorov_univariate_frechet(m1.scale[i], m1.alpha[i], m2.scale[i], m2.alpha[i])?;
        let t = match terms {
            MarginTerms::Analytic => u.analytic_bound,
            MarginTerms::Exact => u.value,
        };
        if terms == MarginTerms::Analytic && !u.bound_holds {
            r.notes.push(format!("margin {i}: analytic term {} is below the exact distance {}", u.analytic_bound, u.value));
        }
        r.constants.insert(format!("margin_{i}"), t);
        total += t;
    }
    r.value = dk_term + total;
    Ok(r)
}

/// `K = sup_{t >= 0} t |psi'(t)|`, maximized over `ln t`.
pub fn k_psi(g: &Generator) -> Result<f64> {
    g.validate()?;
    let f = |s: f64| {
        let t = s.exp();
        t * g.derivative(t).abs()
    };
    let (lo, hi, n) = (-40.0, 40.0, 4000);
    let h = (hi - lo) / n as f64;
    let k = (0..=n).max_by(|&a, &b| f(lo + a as f64 * h).total_cmp(&f(lo + b as f64 * h))).unwrap();
    if k == 0 || k == n {
        // the supremum sits at an end of the window: both ends must be limits of zero
        let edge = f(lo + k as f64 * h);
        if edge > 1e-12 {
            return invalid(format!("generator {} has no interior maximum of t|psi'(t)|", g.label()));
        }
    }
    let (_, v) = golden_max(&f, lo + (k.max(1) - 1) as f64 * h, lo + (k + 1).min(n) as f64 * h, 1e-14);
    if !v.is_finite() {
        return invalid(format!("K is not finite for {}", g.label()));
    }
    Ok(v)
}

/// `e K dk_term` for Archimax copulas sharing the generator.
pub fn bound_archimax(g: &Generator, dk_term: f64) -> Result<BoundReport> {
    let k = k_psi(g)?;
    let mut r = BoundReport::new("archimax", E * k * dk_term).with("k_psi", k).with("dk_term", dk_term);
    r.notes.push(format!("generator: {}", g.label()));
    Ok(r)
}

/// The angular measure on the `l_alpha` sphere for families that have a finite one.
pub fn as_measure(model: &MaxStableModel) -> Option<AngularMeasure> {
    let (d, a) = (model.dim(), model.alpha());
    match model.family() {
        Family::DiscreteSpectral(h) => Some(h.clone()),
        Family::Comonotone => AngularMeasure::comonotone(d, a, NormSpec::lp(a)).ok(),
        Family::Independent => AngularMeasure::independent(d, a, NormSpec::lp(a)).ok(),
        _ => None,
    }
}

/// Every bound that applies to the pair, sorted by value.
pub fn applicable_bounds(m1: &MaxStableModel, m2: &MaxStableModel, norms: &[NormSpec], opts: &SearchOptions) -> Result<Vec<BoundReport>> {
    if m1.dim() != m2.dim() {
        return Err(Error::DimensionMismatch(m1.dim(), m2.dim()));
    }
    let mut out = Vec::new();
    let same_alpha = m1.alpha() == m2.alpha();
    let (h1, h2) = (as_measure(m1), as_measure(m2));
    if same_alpha {
        if let (Some(h1), Some(h2)) = (&h1, &h2) {
            out.push(bound_wasserstein_measures(h1, h2, &[])?);
            let norms = if norms.is_empty() { default_tv_norms(m1.alpha()) } else { norms.to_vec() };
            out.push(bound_tv(h1, h2, &norms)?);
        }
        out.push(bound_psi(m1, m2, opts)?);
    } else if let (Some(h1), Some(h2)) = (&h1, &h2) {
        if h1.atoms() == h2.atoms() && h1.norm() == h2.norm() {
            out.push(bound_alpha_mismatch(h1, m1.alpha(), m2.alpha())?);
        }
    }
    if let (Family::BrownResnick { covariance: s1, .. }, Family::BrownResnick { covariance: s2, .. }) =
        (m1.family(), m2.family())
    {
        out.push(bound_brown_resnick(s1, None, s2, None)?);
    }
    out.sort_by(|a, b| a.value.total_cmp(&b.value));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distances::kolmogorov_exact;
    use crate::spectral::Atom;

    fn com_ind(d: usize, alpha: f64) -> (AngularMeasure, AngularMeasure) {
        let n = NormSpec::lp(alpha);
        (AngularMeasure::comonotone(d, alpha, n.clone()).unwrap(), AngularMeasure::independent(d, alpha, n).unwrap())
    }

    #[test]
    fn comonotone_independent_chain() {
        for d in 2..=4 {
            let (c, i) = com_ind(d, 1.0);
            let w = bound_wasserstein_measures(&c, &i, &[]).unwrap();
            assert!((w.value - (d as f64 - 1.0) / E).abs() < 1e-12);
            let tv = bound_tv(&c, &i, &[NormSpec::lp(1.0)]).unwrap();
            assert!((tv.value - d as f64 / E).abs() < 1e-12);
            let exact = ((d - 1) as f64 / d as f64) * (d as f64).powf(-1.0 / (d as f64 - 1.0));
            assert!(exact <= w.value && w.value <= tv.value);
        }
        let (c, _) = com_ind(2, 1.0);
        assert_eq!(bound_tv(&c, &c, &default_tv_norms(1.0)).unwrap().value, 0.0);
        assert_eq!(bound_wasserstein_measures(&c, &c, &[]).unwrap().value, 0.0);
    }

    #[test]
    fn representer_dependence() {
        let one = DeHaanRepresenter::new(1, 1.0, vec![Atom::new(vec![1.0], 1.0)]).unwrap();
        let two = DeHaanRepresenter::new(1, 1.0, vec![Atom::new(vec![2.0], 1.0 / 3.0), Atom::new(vec![0.5], 2.0 / 3.0)])
            .unwrap();
        let r = bound_wasserstein(&one, &two).unwrap();
        assert!((r.value - 2.0 / 3.0 / E).abs() < 1e-15);
        let h = AngularMeasure::independent(1, 1.0, NormSpec::lp(1.0)).unwrap();
        let best = bound_wasserstein_measures(&h, &h, &[(one, two)]).unwrap();
        assert_eq!(best.value, 0.0);
    }

    #[test]
    fn tv_picks_smallest_norm() {
        let (c, i) = com_ind(3, 1.0);
        let r = bound_tv(&c, &i, &default_tv_norms(1.0)).unwrap();
        let single: Vec<f64> =
            default_tv_norms(1.0).iter().map(|n| bound_tv(&c, &i, std::slice::from_ref(n)).unwrap().value).collect();
        assert_eq!(r.value, single.iter().copied().fold(f64::INFINITY, f64::min));
        assert!((r.value - 3.0 / E).abs() < 1e-12);
    }

    #[test]
    fn psi_bound_examples() {
        let com = MaxStableModel::comonotone(2, 1.0).unwrap();
        let ind = MaxStableModel::independent(2, 1.0).unwrap();
        let r = bound_psi(&com, &ind, &SearchOptions::default()).unwrap();
        assert!(r.value >= 1.0 / E - 1e-15);
        assert_eq!(bound_psi(&ind, &ind, &SearchOptions::default()).unwrap().value, 0.0);
    }

    #[test]
    fn alpha_mismatch_forms() {
        assert_eq!(bound_alpha_lp(2, 1.0, 1.0, 1.0).unwrap(), 0.0);
        let v = bound_alpha_lp(2, 1.1, 1.0, 1.1).unwrap();
        assert!((v - 2.0 / (E * E) * 0.1).abs() < 1e-15);
        let h = AngularMeasure::independent(2, 1.0, NormSpec::lp(1.0)).unwrap();
        let g = bound_alpha_mismatch(&h, 1.0, 1.1).unwrap();
        // C_inf = 1 on l_p spheres, so the general form reduces to nu0 |da| / (e^2 a_*)
        assert!((g.value - 2.0 * 0.1 / (E * E)).abs() < 1e-15);
    }

    #[test]
    fn brown_resnick_scalar_case() {
        let s1 = DMatrix::from_diagonal_element(2, 2, 1.0);
        let s2 = DMatrix::from_diagonal_element(2, 2, 1.44);
        let r = bound_brown_resnick(&s1, None, &s2, None).unwrap();
        // W2 = sqrt(2) * 0.2, shift = sqrt(2) * 0.22
        let k = std::f64::consts::SQRT_2 * 2.0 / (4.0 * E);
        let expect = k * (2f64.sqrt() * 0.2 + 2f64.sqrt() * 0.22);
        assert!((r.value - expect).abs() < 1e-14);
        assert!((r.constants["expanded_form"] - k * (2f64.sqrt() * 0.2 + 2f64.sqrt() * 0.44)).abs() < 1e-14);
        assert!(bound_brown_resnick(&s1, None, &s1, None).unwrap().value < 1e-7);
    }

    #[test]
    fn margins_composition() {
        let m = MarginSpec::standard(2, 1.0);
        assert_eq!(bound_different_margins(0.1, &m, &m, MarginTerms::Analytic).unwrap().value, 0.1);
        let m2 = MarginSpec::new(vec![1.0, 2.0], vec![1.0, 1.0]).unwrap();
        let a = bound_different_margins(0.1, &m, &m2, MarginTerms::Analytic).unwrap();
        let x = bound_different_margins(0.1, &m, &m2, MarginTerms::Exact).unwrap();
        assert!((a.value - (0.1 + 1.0 / E)).abs() < 1e-15);
        assert!((x.value - 0.35).abs() < 1e-15);
        assert!(x.value <= a.value);
    }

    #[test]
    fn k_psi_closed_forms() {
        assert!((k_psi(&Generator::Exponential).unwrap() - 1.0 / E).abs() < 1e-14);
        for theta in [0.5, 1.0, 2.0, 5.0] {
            let closed = (1.0 + theta as f64).powf(-1.0 / theta - 1.0);
            assert!((k_psi(&Generator::Clayton { theta }).unwrap() - closed).abs() < 1e-12);
        }
        let r = bound_archimax(&Generator::Exponential, 0.2).unwrap();
        assert!((r.value - 0.2).abs() < 1e-15);
    }

    #[test]
    fn logistic_bounds_dominate_exact() {
        let ind = MaxStableModel::independent(2, 1.0).unwrap();
        let lg = MaxStableModel::logistic(2, 0.5, 1.0).unwrap();
        let dk = kolmogorov_exact(&ind, &lg, &SearchOptions::default()).unwrap();
        let b = bound_psi(&ind, &lg, &SearchOptions::default()).unwrap().against(dk.certified_lower);
        assert!(b.holds(1e-12));
        assert!(dk.value <= (2.0 - 2f64.sqrt()) / E);
    }
}
