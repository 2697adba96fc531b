//! Bound for laws with Frechet margins of different scale and index.

use kolmax::bounds::{bound_different_margins, MarginTerms};
use kolmax::distances::{kolmogorov_exact, kolmogorov_univariate_frechet, SearchOptions};
use kolmax::models::{MarginSpec, MaxStableModel};

fn main() -> kolmax::Result<()> {
    let m1 = MaxStableModel::logistic(2, 0.5, 1.0)?;
    let m2 = MaxStableModel::independent(2, 1.0)?;
    let dk = kolmogorov_exact(&m1, &m2, &SearchOptions::default())?.value;
    let a = MarginSpec::new(vec![1.0, 2.0], vec![1.0, 1.0])?;
    let b = MarginSpec::new(vec![1.2, 2.0], vec![1.0, 1.3])?;
    for terms in [MarginTerms::Analytic, MarginTerms::Exact] {
        let r = bound_different_margins(dk, &a, &b, terms)?;
        println!("{terms:?}: {:.6} {:?} {:?}", r.value, r.constants, r.notes);
    }
    let u = kolmogorov_univariate_frechet(1.0, 1.0, 1.0, 1.3)?;
    println!("unit scale, alpha 1 vs 1.3: exact {:.6} at x = {:.4}, analytic {:.6}", u.value, u.x_star, u.analytic_bound);
    Ok(())
}
