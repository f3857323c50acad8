//! Experiment runner: expands a spec into (sim, arm, p, seed) cells, runs
//! them, and aggregates a result table, traces, sent circuits and an
//! overhead report.

mod experiment;
mod overhead;
mod spec;
mod table;

pub use experiment::{run_experiment, CellTrace, ExperimentOutput, SentCircuit};
pub use overhead::{overhead, overhead_from_traces, ArmOverhead, LaneOverhead, OverheadReport};
pub use spec::{ArmKind, ExperimentSpec, GraphSource, PlanSpec, Resolved, SimKind};
pub use table::{mean_std, ResultRow, ResultTable};

use std::path::Path;

use thiserror::Error;

use crate::adversary::AdversaryError;
use crate::circuit::CircuitError;
use crate::graph::GraphError;
use crate::obfuscation::ObfuscationError;
use crate::sim::SimError;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("experiment spec: {0}")]
    Spec(String),
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("csv: {0}")]
    Csv(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Circuit(#[from] CircuitError),
    #[error(transparent)]
    Sim(#[from] SimError),
    #[error(transparent)]
    Obfuscation(#[from] ObfuscationError),
    #[error(transparent)]
    Adversary(#[from] AdversaryError),
}

impl HarnessError {
    pub(crate) fn io(path: &Path, source: std::io::Error) -> Self {
        HarnessError::Io {
            path: path.display().to_string(),
            source,
        }
    }
}
