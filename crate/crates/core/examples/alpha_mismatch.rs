//! Same angular support, different tail index: exact distance and both forms of the bound.

use kolmax::bounds::{bound_alpha_lp, bound_alpha_mismatch};
use kolmax::distances::{kolmogorov_exact, SearchOptions};
use kolmax::models::MaxStableModel;
use kolmax::spectral::{AngularMeasure, NormSpec};

fn main() -> kolmax::Result<()> {
    let (a1, a2) = (1.0, 1.1);
    for d in 1..=3 {
        let h1 = AngularMeasure::independent(d, a1, NormSpec::lp(a1))?;
        let h2 = AngularMeasure::independent(d, a2, NormSpec::lp(a2))?;
        let general = bound_alpha_mismatch(&h1, a1, a2)?;
        let lp = bound_alpha_lp(d, a2, a1, a2)?;
        let dk = kolmogorov_exact(&MaxStableModel::discrete_spectral(h1)?, &MaxStableModel::discrete_spectral(h2)?, &SearchOptions::default())?;
        println!("d = {d}: d_K = {:.5}, general bound = {:.5}, l_p bound = {lp:.5}", dk.value, general.value);
    }
    Ok(())
}
