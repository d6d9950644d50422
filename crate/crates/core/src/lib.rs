pub mod asymptotics;
pub mod ensembles;
pub mod error;
pub mod exact_psi;
pub mod hp_math;

pub use error::{Error, Result};
