//! Worked examples recomputed against closed forms, identities and oracles.

use std::f64::consts::E;

use nalgebra::DMatrix;
use serde::Serialize;

use crate::bounds::{bound_brown_resnick, bound_tv, bound_wasserstein, bound_wasserstein_measures};
use crate::cli::report::{render_csv, render_table, Format};
use crate::distances::{kolmogorov_exact, SearchOptions};
use crate::error::Result;
use crate::models::MaxStableModel;
use crate::spectral::{angular_from_representer, AngularMeasure, Atom, DeHaanRepresenter, NormSpec};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExampleRow {
    pub example: String,
    pub quantity: String,
    pub value: f64,
    pub reference: f64,
    /// `eq` within `tol`, or `le`: value at most the reference.
    pub check: &'static str,
    pub expected_from: &'static str,
    pub tol: f64,
    pub pass: bool,
}

fn eq(example: String, quantity: &str, value: f64, reference: f64, from: &'static str, tol: f64) -> ExampleRow {
    ExampleRow {
        example,
        quantity: quantity.into(),
        value,
        reference,
        check: "eq",
        expected_from: from,
        tol,
        pass: (value - reference).abs() <= tol,
    }
}

fn le(example: String, quantity: &str, value: f64, reference: f64, from: &'static str) -> ExampleRow {
    ExampleRow {
        example,
        quantity: quantity.into(),
        value,
        reference,
        check: "le",
        expected_from: from,
        tol: 1e-9,
        pass: value <= reference + 1e-9,
    }
}

pub fn reproduce(search: &SearchOptions) -> Result<Vec<ExampleRow>> {
    let mut rows = Vec::new();
    for d in 2..=6usize {
        let id = format!("com_ind_d{d}");
        let df = d as f64;
        let com = MaxStableModel::comonotone(d, 1.0)?;
        let ind = MaxStableModel::independent(d, 1.0)?;
        let exact = kolmogorov_exact(&com, &ind, search)?;
        let closed = (df - 1.0) / df * df.powf(-1.0 / (df - 1.0));
        rows.push(eq(id.clone(), "d_K", exact.value, closed, "closed_form", 1e-6));
        let n = NormSpec::lp(1.0);
        let (hc, hi) = (AngularMeasure::comonotone(d, 1.0, n.clone())?, AngularMeasure::independent(d, 1.0, n.clone())?);
        let w = bound_wasserstein_measures(&hc, &hi, &[])?;
        rows.push(eq(id.clone(), "wasserstein_bound", w.value, (df - 1.0) / E, "closed_form", 1e-9));
        let tv = bound_tv(&hc, &hi, &[n])?;
        rows.push(eq(id, "tv_bound", tv.value, df / E, "closed_form", 1e-9));
    }
    let ind = MaxStableModel::independent(2, 1.0)?;
    let com = MaxStableModel::comonotone(2, 1.0)?;
    for theta in [0.1, 0.25, 0.5, 0.75, 0.9, 1.0] {
        let id = format!("logistic_theta{theta}");
        let lg = MaxStableModel::logistic(2, theta, 1.0)?;
        let to_ind = kolmogorov_exact(&ind, &lg, search)?.value;
        if theta == 1.0 {
            rows.push(eq(id.clone(), "d_K_to_independent", to_ind, 0.0, "identity", 1e-12));
        } else {
            rows.push(le(id.clone(), "d_K_to_independent", to_ind, (2.0 - 2f64.powf(theta)) / E, "closed_form"));
        }
        let to_com = kolmogorov_exact(&com, &lg, search)?.value;
        rows.push(le(id, "d_K_to_comonotone", to_com, (2f64.powf(theta) - 1.0) / E, "closed_form"));
    }
    // diagonal pair: Gelbrich and shift terms are scalar
    let s1 = DMatrix::from_diagonal_element(2, 2, 1.0);
    let s2 = DMatrix::from_diagonal_element(2, 2, 1.44);
    let br = bound_brown_resnick(&s1, None, &s2, None)?;
    let k = std::f64::consts::SQRT_2 * 2.0 / (4.0 * E);
    rows.push(eq("br_diagonal".into(), "br_bound", br.value, k * 2f64.sqrt() * (0.2 + 0.22), "closed_form", 1e-12));
    let dk = kolmogorov_exact(&MaxStableModel::brown_resnick(s1)?, &MaxStableModel::brown_resnick(s2)?, search)?;
    rows.push(le("br_diagonal".into(), "d_K", dk.value, br.value, "oracle"));
    let s3 = DMatrix::from_row_slice(2, 2, &[1.0, 0.6, 0.6, 1.0]);
    let s4 = DMatrix::from_row_slice(2, 2, &[1.5, 0.3, 0.3, 0.8]);
    let br = bound_brown_resnick(&s3, None, &s4, None)?;
    let dk = kolmogorov_exact(&MaxStableModel::brown_resnick(s3)?, &MaxStableModel::brown_resnick(s4)?, search)?;
    rows.push(le("br_correlated".into(), "d_K", dk.value, br.value, "oracle"));
    let one = DeHaanRepresenter::new(1, 1.0, vec![Atom::new(vec![1.0], 1.0)])?;
    let two = DeHaanRepresenter::new(1, 1.0, vec![Atom::new(vec![2.0], 1.0 / 3.0), Atom::new(vec![0.5], 2.0 / 3.0)])?;
    let w = bound_wasserstein(&one, &two)?.constants["w1_sup"];
    rows.push(eq("two_representers_1d".into(), "w1_sup", w, 2.0 / 3.0, "closed_form", 1e-12));
    let n = NormSpec::lp(1.0);
    let f1 = MaxStableModel::discrete_spectral(angular_from_representer(&one, &n)?)?;
    let f2 = MaxStableModel::discrete_spectral(angular_from_representer(&two, &n)?)?;
    rows.push(eq("two_representers_1d".into(), "d_K", kolmogorov_exact(&f1, &f2, search)?.value, 0.0, "identity", 0.0));
    Ok(rows)
}

/// `theta -> d_K(F_ind, F_theta)` and its bound on a regular grid, as plot data.
pub fn logistic_curve(dim: usize, steps: usize, search: &SearchOptions) -> Result<Vec<(f64, f64, f64)>> {
    let ind = MaxStableModel::independent(dim, 1.0)?;
    let d = dim as f64;
    (1..=steps)
        .map(|k| {
            let theta = k as f64 / steps as f64;
            let dk = kolmogorov_exact(&ind, &MaxStableModel::logistic(dim, theta, 1.0)?, search)?.value;
            Ok((theta, dk, (d - d.powf(theta)) / E))
        })
        .collect()
}

const HEADER: [&str; 8] = ["example", "quantity", "value", "reference", "check", "expected_from", "tol", "pass"];

pub fn render(rows: &[ExampleRow], format: Format) -> String {
    if format == Format::Json {
        return serde_json::to_string_pretty(rows).unwrap_or_default() + "\n";
    }
    let fmt = |v: f64| if format == Format::Table { format!("{v:.6}") } else { v.to_string() };
    let cells: Vec<Vec<String>> = rows
        .iter()
        .map(|r| {
            vec![
                r.example.clone(),
                r.quantity.clone(),
                fmt(r.value),
                fmt(r.reference),
                r.check.into(),
                r.expected_from.into(),
                format!("{:e}", r.tol),
                if r.pass { "pass" } else { "FAIL" }.into(),
            ]
        })
        .collect();
    match format {
        Format::Csv => render_csv(&HEADER, &cells),
        _ => render_table(&HEADER, &cells),
    }
}

pub fn render_curve(points: &[(f64, f64, f64)]) -> String {
    let cells: Vec<Vec<String>> =
        points.iter().map(|(t, dk, b)| vec![t.to_string(), dk.to_string(), b.to_string()]).collect();
    render_csv(&["theta", "d_K", "bound"], &cells)
}
