//! Archimax bounds for the two catalog generators.

use kolmax::bounds::{bound_archimax, k_psi};
use kolmax::distances::{kolmogorov_exact, SearchOptions};
use kolmax::models::{archimax_copula, Generator, MaxStableModel};

fn main() -> kolmax::Result<()> {
    let m1 = MaxStableModel::logistic(2, 0.4, 1.0)?;
    let m2 = MaxStableModel::logistic(2, 0.6, 1.0)?;
    let dk = kolmogorov_exact(&m1, &m2, &SearchOptions::default())?.value;
    for g in [Generator::Exponential, Generator::clayton(0.5)?, Generator::clayton(1.0)?, Generator::clayton(3.0)?] {
        let b = bound_archimax(&g, dk)?;
        let u = [0.3, 0.8];
        println!(
            "{:<13} K = {:.6}, bound = {:.6}, C1(u) = {:.6}, C2(u) = {:.6}",
            g.label(),
            k_psi(&g)?,
            b.value,
            archimax_copula(&g, &m1, &u)?,
            archimax_copula(&g, &m2, &u)?
        );
    }
    println!("d_K term = {dk:.6}");
    Ok(())
}
