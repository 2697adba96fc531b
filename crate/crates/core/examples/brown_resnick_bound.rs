//! Gaussian-covariance bound for Brown-Resnick pairs against the exact distance.

use nalgebra::DMatrix;

use kolmax::bounds::bound_brown_resnick;
use kolmax::distances::{kolmogorov_exact, SearchOptions};
use kolmax::models::MaxStableModel;

fn main() -> kolmax::Result<()> {
    let s1 = DMatrix::from_row_slice(2, 2, &[1.0, 0.6, 0.6, 1.0]);
    for rho in [0.5, 0.3, 0.0, -0.3] {
        let s2 = DMatrix::from_row_slice(2, 2, &[1.5, rho, rho, 0.8]);
        let b = bound_brown_resnick(&s1, None, &s2, None)?;
        let dk = kolmogorov_exact(&MaxStableModel::brown_resnick(s1.clone())?, &MaxStableModel::brown_resnick(s2)?, &SearchOptions::default())?;
        println!(
            "rho = {rho:>4}: d_K = {:.6}, bound = {:.6} (W2 = {:.4}, shift = {:.4})",
            dk.value, b.value, b.constants["w2_gelbrich"], b.constants["shift_norm"]
        );
    }
    Ok(())
}
