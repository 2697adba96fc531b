//! Psi functions of a trivariate Husler-Reiss model and the identity
//! `sum_i Psi_i(x) / x_i = V(x)`.

use nalgebra::DMatrix;

use kolmax::models::MaxStableModel;
use kolmax::psi::psi_model;

fn main() -> kolmax::Result<()> {
    let lambda = DMatrix::from_row_slice(3, 3, &[0.0, 0.8, 1.5, 0.8, 0.0, 1.1, 1.5, 1.1, 0.0]);
    let m = MaxStableModel::husler_reiss(lambda)?;
    for x in [[1.0, 1.0, 1.0], [0.5, 2.0, 1.0], [3.0, 0.2, 1.5]] {
        let psi = psi_model(&m, &x)?;
        let (v, err) = m.exponent_detail(&x)?;
        println!("x = {x:?}: Psi = {:.6?}, sum = {:.9}, V = {v:.9} (+/- {err:.1e})", psi.values, psi.reconstruct(1.0));
    }
    Ok(())
}
