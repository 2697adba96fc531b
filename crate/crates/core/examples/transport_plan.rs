//! Optimal coupling between the canonical representers of two angular measures.

use kolmax::bounds::bound_wasserstein;
use kolmax::distances::wasserstein1_sup;
use kolmax::spectral::{canonical_representer, AngularMeasure, Atom, NormSpec};

fn main() -> kolmax::Result<()> {
    let n = NormSpec::lp(1.0);
    let h1 = AngularMeasure::new(2, 1.0, n.clone(), vec![Atom::new(vec![0.5, 0.5], 1.0), Atom::new(vec![1.0, 0.0], 0.5), Atom::new(vec![0.0, 1.0], 0.5)])?;
    let h2 = AngularMeasure::new(2, 1.0, n, vec![Atom::new(vec![0.25, 0.75], 4.0 / 3.0), Atom::new(vec![1.0, 0.0], 2.0 / 3.0)])?;
    let (z1, z2) = (canonical_representer(&h1)?, canonical_representer(&h2)?);
    let (w, plan) = wasserstein1_sup(&z1, &z2, true)?;
    println!("W1 = {w:.6} after {} pivots", plan.iterations);
    for (a, row) in z1.atoms().iter().zip(&plan.coupling) {
        println!("{:?} -> {:.4?}", a.point, row);
    }
    println!("bound = {:.6}", bound_wasserstein(&z1, &z2)?.value);
    Ok(())
}
