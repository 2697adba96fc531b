//! The TV bound depends on the sphere the angular measures live on; the
//! exponent function does not.

use kolmax::bounds::bound_tv;
use kolmax::spectral::{reproject, sphere_constants, tv_distance, AngularMeasure, Atom, NormSpec};

fn main() -> kolmax::Result<()> {
    let l2 = NormSpec::lp(2.0);
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let h1 = AngularMeasure::new(2, 2.0, l2.clone(), vec![Atom::new(vec![1.0, 0.0], 0.5), Atom::new(vec![0.0, 1.0], 0.5), Atom::new(vec![s, s], 1.0)])?;
    let h2 = AngularMeasure::independent(2, 2.0, l2)?;
    let x = [0.7, 1.3];
    for norm in [NormSpec::lp(1.0), NormSpec::lp(2.0), NormSpec::linf()] {
        let (a, b) = (reproject(&h1, &norm)?, reproject(&h2, &norm)?);
        let c = sphere_constants(&a);
        println!(
            "{:>4}: TV = {:.6}, M_alpha = {:.6}, V1(x) = {:.12}",
            norm.label(),
            tv_distance(&a, &b)?,
            c.m_alpha,
            a.exponent(&x)
        );
    }
    let best = bound_tv(&h1, &h2, &[NormSpec::lp(1.0), NormSpec::lp(2.0), NormSpec::linf()])?;
    println!("bound = {:.6} ({})", best.value, best.notes.join("; "));
    Ok(())
}
