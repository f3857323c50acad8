//! Edge-pruned circuit flavors and the split-iteration optimization loop.
//!
//! A client prunes different edges from the cost layer for each untrusted
//! backend, then optimizes one shared parameter vector by alternating
//! iterations between the pruned circuits. The classical cost is always the
//! full graph's, evaluated on the client.

mod metrics;
pub mod optimizer;
mod plan;
mod run;

pub use metrics::{approximation_ratio, ApproxRatio};
pub use optimizer::SpsaGains;
pub use plan::{make_split_plan, prune, PrunedFlavor, Schedule, SplitPlan};
pub use run::{
    layer_sweep, optimize, optimize_arm, Arm, FinalEvaluation, Init, Method, OptimizerConfig,
    RunSummary, RunTrace, TraceEntry, FINAL_SHOTS,
};
pub(crate) use run::Lane;

use thiserror::Error;

use crate::circuit::CircuitError;
use crate::graph::{Edge, GraphError};
use crate::sim::SimError;

#[derive(Debug, Error)]
pub enum ObfuscationError {
    #[error("edge {0} is not in the graph")]
    EdgeNotInGraph(Edge),
    #[error("split plan: {0}")]
    Plan(String),
    #[error("optimizer config: {0}")]
    Config(String),
    #[error("approximation ratio is undefined for a graph without edges")]
    UndefinedRatio,
    #[error("non-finite value {0}")]
    NonFinite(f64),
    #[error("optimizer diverged at iteration {iteration}: {reason}")]
    Diverged {
        iteration: usize,
        reason: String,
        entries: Vec<TraceEntry>,
    },
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Circuit(#[from] CircuitError),
    #[error(transparent)]
    Sim(#[from] SimError),
}
