pub mod cli;
pub mod error;
pub mod lattice;
pub mod meanfield;
pub mod model;
pub mod sweep;

pub use error::{Error, Result};
pub use model::{InteractionMatrix, RegimeLabel, RegimeReport, SimplexPoint};
