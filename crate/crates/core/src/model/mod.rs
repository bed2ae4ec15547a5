//! Domain types shared by the mean-field, lattice and sweep modules.

mod family;
mod matrix;
mod regime;
mod simplex;

pub use family::{builtin_matrix, family_matrix, Builtin, Family, ThetaParams};
pub use matrix::{strict_cmp, strict_sign, theta_of_two_type, InteractionMatrix, TIE_TOLERANCE};
pub(crate) use regime::one_based;
pub use regime::{
    BoundaryEquilibrium, EquilibriumKind, Evidence, Named, RegimeLabel, RegimeReport,
};
pub use simplex::{SimplexPoint, SIMPLEX_TOLERANCE};
