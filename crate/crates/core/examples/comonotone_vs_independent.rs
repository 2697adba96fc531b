//! Exact Kolmogorov distance between the comonotone and independent laws,
//! next to the Wasserstein and total-variation bounds.

use kolmax::bounds::{bound_tv, bound_wasserstein_measures};
use kolmax::distances::{kolmogorov_exact, SearchOptions};
use kolmax::models::MaxStableModel;
use kolmax::spectral::{AngularMeasure, NormSpec};

fn main() -> kolmax::Result<()> {
    let opts = SearchOptions::default();
    println!("{:>2}  {:>9}  {:>9}  {:>9}", "d", "d_K", "W bound", "TV bound");
    for d in 2..=6 {
        let com = MaxStableModel::comonotone(d, 1.0)?;
        let ind = MaxStableModel::independent(d, 1.0)?;
        let exact = kolmogorov_exact(&com, &ind, &opts)?;
        let n = NormSpec::lp(1.0);
        let (hc, hi) = (AngularMeasure::comonotone(d, 1.0, n.clone())?, AngularMeasure::independent(d, 1.0, n.clone())?);
        let w = bound_wasserstein_measures(&hc, &hi, &[])?;
        let tv = bound_tv(&hc, &hi, &[n])?;
        println!("{d:>2}  {:>9.6}  {:>9.6}  {:>9.6}", exact.value, w.value, tv.value);
    }
    Ok(())
}
