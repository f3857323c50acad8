//! Named benchmark graphs.
//!
//! The fixed shapes live in `data/graphs/*.graph` and are compiled into the
//! crate, so every experiment refers to the same edge lists. Each file carries
//! a version line and a note on how the drawing was read.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::graph::{Graph, GraphError};

const CYCLE3: &str = include_str!("../data/graphs/cycle3.graph");
const CYCLE4: &str = include_str!("../data/graphs/cycle4.graph");
const COMPLETE4: &str = include_str!("../data/graphs/complete4_with_diagonals.graph");
const GRAPH5: &str = include_str!("../data/graphs/graph5.graph");
const GRAPH6: &str = include_str!("../data/graphs/graph6.graph");

/// Version tag of the bundled benchmark data.
pub const BENCHMARK_DATA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum BenchmarkId {
    Cycle3,
    Cycle4,
    Complete4WithDiagonals,
    Graph5,
    Graph6,
    Cycle(usize),
    Complete(usize),
}

impl BenchmarkId {
    /// The five fixed table graphs, smallest first.
    pub const TABLE: [BenchmarkId; 5] = [
        BenchmarkId::Cycle3,
        BenchmarkId::Cycle4,
        BenchmarkId::Complete4WithDiagonals,
        BenchmarkId::Graph5,
        BenchmarkId::Graph6,
    ];

    pub fn graph(self) -> Result<Graph, GraphError> {
        match self {
            BenchmarkId::Cycle3 => CYCLE3.parse(),
            BenchmarkId::Cycle4 => CYCLE4.parse(),
            BenchmarkId::Complete4WithDiagonals => COMPLETE4.parse(),
            BenchmarkId::Graph5 => GRAPH5.parse(),
            BenchmarkId::Graph6 => GRAPH6.parse(),
            BenchmarkId::Cycle(n) => Graph::cycle(n),
            BenchmarkId::Complete(n) => Graph::complete(n),
        }
    }

    /// Raw text of the bundled data file, if this id has one.
    pub fn data_file(self) -> Option<&'static str> {
        match self {
            BenchmarkId::Cycle3 => Some(CYCLE3),
            BenchmarkId::Cycle4 => Some(CYCLE4),
            BenchmarkId::Complete4WithDiagonals => Some(COMPLETE4),
            BenchmarkId::Graph5 => Some(GRAPH5),
            BenchmarkId::Graph6 => Some(GRAPH6),
            _ => None,
        }
    }
}

pub fn benchmark_graph(id: BenchmarkId) -> Result<Graph, GraphError> {
    id.graph()
}

impl fmt::Display for BenchmarkId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BenchmarkId::Cycle3 => write!(f, "cycle3"),
            BenchmarkId::Cycle4 => write!(f, "cycle4"),
            BenchmarkId::Complete4WithDiagonals => write!(f, "complete4_with_diagonals"),
            BenchmarkId::Graph5 => write!(f, "graph5"),
            BenchmarkId::Graph6 => write!(f, "graph6"),
            BenchmarkId::Cycle(n) => write!(f, "cycle({n})"),
            BenchmarkId::Complete(n) => write!(f, "complete({n})"),
        }
    }
}

impl FromStr for BenchmarkId {
    type Err = GraphError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let unknown = || GraphError::UnknownBenchmark(s.to_string());
        let sized = |prefix: &str| -> Option<Result<usize, GraphError>> {
            let inner = s.strip_prefix(prefix)?.strip_prefix('(')?.strip_suffix(')')?;
            Some(inner.trim().parse::<usize>().map_err(|_| unknown()))
        };
        match s {
            "cycle3" => Ok(BenchmarkId::Cycle3),
            "cycle4" => Ok(BenchmarkId::Cycle4),
            "complete4_with_diagonals" => Ok(BenchmarkId::Complete4WithDiagonals),
            "graph5" => Ok(BenchmarkId::Graph5),
            "graph6" => Ok(BenchmarkId::Graph6),
            _ => {
                if let Some(n) = sized("cycle") {
                    let n = n?;
                    if n == 0 {
                        return Err(unknown());
                    }
                    Ok(BenchmarkId::Cycle(n))
                } else if let Some(n) = sized("complete") {
                    let n = n?;
                    if n == 0 {
                        return Err(unknown());
                    }
                    Ok(BenchmarkId::Complete(n))
                } else {
                    Err(unknown())
                }
            }
        }
    }
}

impl TryFrom<String> for BenchmarkId {
    type Error = GraphError;
    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

impl From<BenchmarkId> for String {
    fn from(id: BenchmarkId) -> String {
        id.to_string()
    }
}
