//! Sampling cross-checks: margins, CDF and the empirical distance.

use kolmax::distances::SearchOptions;
use kolmax::models::MaxStableModel;
use kolmax::montecarlo::{default_cdf_grid, ks_frechet, sample_model, verify_bounds, verify_cdf, SamplerConfig};

fn main() -> kolmax::Result<()> {
    let cfg = SamplerConfig { seed: 42, n_samples: 20_000, ..SamplerConfig::default() };
    let com = MaxStableModel::comonotone(2, 1.0)?;
    let lg = MaxStableModel::independent(2, 1.0)?;
    let s = sample_model(&lg, &cfg)?;
    for j in 0..2 {
        let ks = ks_frechet(&s.column(j), 1.0, 0.01)?;
        println!("margin {j}: KS = {:.4}, p = {:.3}", ks.statistic, ks.p_value);
    }
    let c = verify_cdf(&lg, &s, &default_cdf_grid(2))?;
    println!("CDF discrepancy {:.4} (allowance {:.4})", c.discrepancy, c.allowance);
    let r = verify_bounds(&com, &lg, &[], &SearchOptions::default(), Some(&cfg))?;
    let mc = r.monte_carlo.expect("both models can be sampled");
    println!("exact {:.4}, empirical {:.4} +/- {:.4}, violations {}", r.exact.value, mc.value, mc.band, r.violations);
    Ok(())
}
