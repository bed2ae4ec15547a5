//! The stochastic spatial model on rings and tori.

pub mod interface;
pub mod rng;
pub mod run;
pub mod snapshot;
pub mod state;
pub mod update;

pub use interface::{run_1d_interface, InterfaceSeries};
pub use rng::{derive_seed, stream_rng, SimRng, DYNAMICS_STREAM, INIT_STREAM};
pub use run::{
    classify_outcome, clustering_threshold, run, run_observed, Fixation, Outcome, RunRecord,
    RunSummary, Sample, SimConfig, Snapshot, SURVIVAL_DENSITY,
};
pub use snapshot::{palette, Image};
pub use state::{init_product_measure, Dims, LatticeState, MAX_SPECIES};
pub use update::{step, UpdateRule};
