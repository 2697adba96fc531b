//! Two representers of the same univariate law: the transport distance between
//! them is positive while the laws coincide.

use kolmax::distances::{kolmogorov_exact, wasserstein1_sup, SearchOptions};
use kolmax::models::MaxStableModel;
use kolmax::spectral::{angular_from_representer, Atom, DeHaanRepresenter, NormSpec};

fn main() -> kolmax::Result<()> {
    let one = DeHaanRepresenter::new(1, 1.0, vec![Atom::new(vec![1.0], 1.0)])?;
    let two = DeHaanRepresenter::new(1, 1.0, vec![Atom::new(vec![2.0], 1.0 / 3.0), Atom::new(vec![0.5], 2.0 / 3.0)])?;
    let (w, plan) = wasserstein1_sup(&one, &two, false)?;
    println!("W1 = {w:.6}, coupling {:?}", plan.coupling);
    let n = NormSpec::lp(1.0);
    let m1 = MaxStableModel::discrete_spectral(angular_from_representer(&one, &n)?)?;
    let m2 = MaxStableModel::discrete_spectral(angular_from_representer(&two, &n)?)?;
    println!("d_K = {}", kolmogorov_exact(&m1, &m2, &SearchOptions::default())?.value);
    Ok(())
}
