//! Mean-field ODE and its equilibrium, stability and permanence analysis.

pub mod ode;
pub mod three_type;
pub mod two_type;

pub use crate::model::BoundaryEquilibrium;
pub use ode::{
    final_state, integrate, integrate_with, per_capita_growth, rhs, rhs_into, Trajectory,
    DEFAULT_STEP,
};
pub use three_type::{
    boundary_equilibria, classify, classify_m8, classify_three_type, heteroclinic_analysis,
    invadibility, nontrivial_equilibrium_stability, permanence_case, permanence_check, psi,
    tristability_check, trivial_equilibrium_stability, CycleKind, CycleReport, EdgeReport,
    EdgeStability, VertexReport, VertexStability,
};
pub use two_type::{
    classify_two_type, edge_equilibrium, extinction_rate, pair_relation, two_type_equilibrium,
    PairRelation,
};
