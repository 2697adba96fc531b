pub mod bounds;
pub mod cli;
pub mod distances;
pub mod error;
pub mod models;
pub mod montecarlo;
pub mod mvn;
pub mod psi;
pub mod spectral;

pub use error::{Error, Result};
