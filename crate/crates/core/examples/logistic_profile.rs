//! Distance from the logistic family to its two endpoints as theta varies.

use std::f64::consts::E;

use kolmax::distances::{kolmogorov_exact, SearchOptions};
use kolmax::models::MaxStableModel;

fn main() -> kolmax::Result<()> {
    let d = 3;
    let df = d as f64;
    let opts = SearchOptions::default();
    let ind = MaxStableModel::independent(d, 1.0)?;
    let com = MaxStableModel::comonotone(d, 1.0)?;
    println!("theta,d_K_ind,bound_ind,d_K_com,bound_com");
    for k in 1..=10 {
        let theta = k as f64 / 10.0;
        let lg = MaxStableModel::logistic(d, theta, 1.0)?;
        let di = kolmogorov_exact(&ind, &lg, &opts)?.value;
        let dc = kolmogorov_exact(&com, &lg, &opts)?.value;
        println!("{theta},{di:.6},{:.6},{dc:.6},{:.6}", (df - df.powf(theta)) / E, (df.powf(theta) - 1.0) / E);
    }
    Ok(())
}
