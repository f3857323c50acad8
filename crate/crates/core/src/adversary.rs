//! The untrusted provider's view: recover the problem graph from a received
//! circuit and count how much guessing the hidden edges would take.
//!
//! Extraction scans the gate stream once, tracking a physical-to-logical map.
//! `CX(a,b) CX(b,a) CX(a,b)` is read as a SWAP and updates the map;
//! `CX(a,b) RZ(b,·) CX(a,b)` is read as a ZZ interaction, i.e. an edge between
//! the logical qubits currently at `a` and `b`. At each position the SWAP
//! signature is tried first.

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::circuit::{parse, Circuit, CircuitError, Gate};
use crate::graph::{Edge, Graph, GraphError};

#[derive(Debug, Error)]
pub enum AdversaryError {
    #[error(transparent)]
    Parse(#[from] CircuitError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("{observed} observed edges exceed the {universe} node pairs of a {n}-node graph")]
    TooManyEdges {
        n: usize,
        observed: usize,
        universe: usize,
    },
    #[error("node count must be positive")]
    NoNodes,
    #[error("reports disagree on node count ({0} vs {1})")]
    NodeCountMismatch(usize, usize),
    #[error("nothing to merge")]
    NoReports,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExtractionReport {
    pub n: usize,
    pub edges: Vec<Edge>,
    pub swap_count: usize,
    /// `final_mapping[physical] = logical` after the last SWAP.
    pub final_mapping: Vec<usize>,
    pub unmatched_gates: usize,
}

impl ExtractionReport {
    pub fn recovered_graph(&self) -> Graph {
        Graph::new(self.n, self.edges.iter().copied()).expect("extracted edges are canonical")
    }
}

/// Parses the wire text and extracts the encoded graph.
pub fn extract_graph(text: &str) -> Result<ExtractionReport, AdversaryError> {
    let c = parse(text)?;
    Ok(extract_from_circuit(&c))
}

pub fn extract_from_circuit(c: &Circuit) -> ExtractionReport {
    let gates = c.gates();
    let mut mapping: Vec<usize> = (0..c.num_qubits()).collect();
    let mut edges = std::collections::BTreeSet::new();
    let (mut swaps, mut unmatched) = (0usize, 0usize);
    let mut i = 0;
    while i < gates.len() {
        let window = &gates[i..gates.len().min(i + 3)];
        match *window {
            [Gate::Cx(a, b), Gate::Cx(b2, a2), Gate::Cx(a3, b3), ..]
                if (a, b) == (a2, b2) && (a, b) == (a3, b3) =>
            {
                mapping.swap(a, b);
                swaps += 1;
                i += 3;
            }
            [Gate::Cx(a, b), Gate::Rz(t, _), Gate::Cx(a3, b3), ..] if t == b && (a, b) == (a3, b3) => {
                edges.insert(Edge::new(mapping[a], mapping[b]));
                i += 3;
            }
            [Gate::H(_) | Gate::Rx(..) | Gate::MeasureAll, ..] => i += 1,
            _ => {
                unmatched += 1;
                i += 1;
            }
        }
    }
    ExtractionReport {
        n: c.num_qubits(),
        edges: edges.into_iter().collect(),
        swap_count: swaps,
        final_mapping: mapping,
        unmatched_gates: unmatched,
    }
}

/// Union of what several providers saw. Colluding holders of every flavor
/// get the whole graph back.
pub fn cross_provider_merge(reports: &[ExtractionReport]) -> Result<Graph, AdversaryError> {
    let first = reports.first().ok_or(AdversaryError::NoReports)?;
    if let Some(r) = reports.iter().find(|r| r.n != first.n) {
        return Err(AdversaryError::NodeCountMismatch(first.n, r.n));
    }
    let edges = reports
        .iter()
        .flat_map(|r| r.edges.iter().copied())
        .collect::<std::collections::BTreeSet<_>>();
    Ok(Graph::new(first.n, edges)?)
}

/// Guessing effort for an adversary holding a graph with `observed_edges` of
/// the `n(n-1)/2` possible edges.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EffortEstimate {
    pub n: usize,
    pub observed_edges: usize,
    /// Node pairs not present in the observed graph.
    pub candidate_edges: usize,
    /// `2^candidate_edges`: every subset of candidates might be the hidden part.
    #[serde(with = "biguint_string")]
    pub worst_case_trials: BigUint,
    /// Guesses needed when exactly one edge is known to be missing: one per
    /// candidate. A complete graph minus one edge needs just 1.
    pub min_guesses: usize,
}

pub fn effort(n: usize, observed_edges: usize) -> Result<EffortEstimate, AdversaryError> {
    if n == 0 {
        return Err(AdversaryError::NoNodes);
    }
    let universe = n * (n - 1) / 2;
    if observed_edges > universe {
        return Err(AdversaryError::TooManyEdges {
            n,
            observed: observed_edges,
            universe,
        });
    }
    let candidate_edges = universe - observed_edges;
    Ok(EffortEstimate {
        n,
        observed_edges,
        candidate_edges,
        worst_case_trials: BigUint::from(1u8) << candidate_edges,
        min_guesses: candidate_edges,
    })
}

/// Average guessing effort over arbitrary `n`-node graphs, `2^(n(n-1)/4)`.
///
/// For `n = 10` the exponent is 45/2 and the value about 5.93e6.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AverageEffort {
    pub exponent_numerator: u64,
    pub exponent_denominator: u64,
    pub approx: f64,
}

pub fn average_effort(n: usize) -> AverageEffort {
    let num = (n * n.saturating_sub(1)) as u64;
    let mut den = 4u64;
    let g = gcd(num, den);
    let (num, den_reduced) = if num == 0 { (0, 1) } else { (num / g, den / g) };
    den = den_reduced;
    AverageEffort {
        exponent_numerator: num,
        exponent_denominator: den,
        approx: 2f64.powf(num as f64 / den as f64),
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

mod biguint_string {
    use num_bigint::BigUint;
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &BigUint, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&v.to_str_radix(10))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigUint, D::Error> {
        let s = String::deserialize(d)?;
        BigUint::parse_bytes(s.as_bytes(), 10).ok_or_else(|| D::Error::custom("invalid integer"))
    }
}
