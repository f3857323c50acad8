use std::collections::{BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

use super::{Circuit, CircuitError, Gate};
use crate::graph::Edge;

/// Physical qubits and the pairs that support a native two-qubit gate.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "CouplingSpec", into = "CouplingSpec")]
pub struct CouplingMap {
    num_physical: usize,
    allowed: BTreeSet<Edge>,
    #[serde(skip)]
    adjacency: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct CouplingSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    num_physical: Option<usize>,
    edges: Vec<(usize, usize)>,
}

impl TryFrom<CouplingSpec> for CouplingMap {
    type Error = CircuitError;
    fn try_from(spec: CouplingSpec) -> Result<Self, Self::Error> {
        let inferred = spec.edges.iter().map(|&(a, b)| a.max(b) + 1).max().unwrap_or(0);
        CouplingMap::new(spec.num_physical.unwrap_or(inferred), spec.edges)
    }
}

impl From<CouplingMap> for CouplingSpec {
    fn from(map: CouplingMap) -> Self {
        CouplingSpec {
            num_physical: Some(map.num_physical),
            edges: map.allowed.iter().map(|e| (e.u, e.v)).collect(),
        }
    }
}

impl CouplingMap {
    pub fn new<I, E>(num_physical: usize, edges: I) -> Result<Self, CircuitError>
    where
        I: IntoIterator<Item = E>,
        E: Into<Edge>,
    {
        let mut allowed = BTreeSet::new();
        for e in edges {
            let e: Edge = e.into();
            if e.u == e.v || e.v >= num_physical {
                return Err(CircuitError::Coupling(format!(
                    "invalid pair {e} for {num_physical} physical qubits"
                )));
            }
            allowed.insert(e);
        }
        let mut adjacency = vec![Vec::new(); num_physical];
        for e in &allowed {
            adjacency[e.u].push(e.v);
            adjacency[e.v].push(e.u);
        }
        for adj in &mut adjacency {
            adj.sort_unstable();
        }
        Ok(CouplingMap {
            num_physical,
            allowed,
            adjacency,
        })
    }

    /// `0 - 1 - ... - (n-1)`.
    pub fn line(n: usize) -> Self {
        CouplingMap::new(n, (1..n).map(|i| (i - 1, i))).expect("line map is valid")
    }

    /// Nearest-neighbour grid, row-major numbering.
    pub fn grid(rows: usize, cols: usize) -> Self {
        let idx = |r: usize, c: usize| r * cols + c;
        let mut edges = Vec::new();
        for r in 0..rows {
            for c in 0..cols {
                if c + 1 < cols {
                    edges.push((idx(r, c), idx(r, c + 1)));
                }
                if r + 1 < rows {
                    edges.push((idx(r, c), idx(r + 1, c)));
                }
            }
        }
        CouplingMap::new(rows * cols, edges).expect("grid map is valid")
    }

    pub fn num_physical(&self) -> usize {
        self.num_physical
    }

    pub fn allowed(&self) -> impl Iterator<Item = Edge> + '_ {
        self.allowed.iter().copied()
    }

    pub fn is_adjacent(&self, a: usize, b: usize) -> bool {
        self.allowed.contains(&Edge::new(a, b))
    }

    /// BFS shortest path from `from` to `to`, both ends included. Ties go to
    /// the lower-numbered neighbour so routing is deterministic.
    pub fn shortest_path(&self, from: usize, to: usize) -> Option<Vec<usize>> {
        let mut prev = vec![usize::MAX; self.num_physical];
        prev[from] = from;
        let mut queue = VecDeque::from([from]);
        while let Some(x) = queue.pop_front() {
            if x == to {
                let mut path = vec![to];
                let mut cur = to;
                while cur != from {
                    cur = prev[cur];
                    path.push(cur);
                }
                path.reverse();
                return Some(path);
            }
            for &y in &self.adjacency[x] {
                if prev[y] == usize::MAX {
                    prev[y] = x;
                    queue.push_back(y);
                }
            }
        }
        None
    }

    /// True when every two-qubit gate of `c` sits on an allowed pair.
    pub fn conforms(&self, c: &Circuit) -> bool {
        c.num_qubits() <= self.num_physical
            && c.gates().iter().all(|g| match *g {
                Gate::Cx(a, b) => self.is_adjacent(a, b),
                _ => true,
            })
    }
}

/// Routed circuit plus the layouts needed to read its measurements.
#[derive(Debug, Clone, PartialEq)]
pub struct Transpiled {
    /// Acts on `num_physical` qubits.
    pub circuit: Circuit,
    /// `initial_layout[logical] = physical`.
    pub initial_layout: Vec<usize>,
    /// Where each logical qubit sits when the circuit is measured.
    pub final_layout: Vec<usize>,
    pub swaps_added: usize,
}

/// Greedy shortest-path router.
///
/// For each CX whose operands are not adjacent, the control is swapped along
/// a shortest path towards the target until the two are neighbours. Each SWAP
/// is emitted as `CX(a,b) CX(b,a) CX(a,b)` on physical qubits.
pub fn transpile(
    c: &Circuit,
    map: &CouplingMap,
    placement: &[usize],
) -> Result<Transpiled, CircuitError> {
    let n = c.num_qubits();
    if map.num_physical < n {
        return Err(CircuitError::Routing(format!(
            "{n} logical qubits do not fit on {} physical qubits",
            map.num_physical
        )));
    }
    if placement.len() != n {
        return Err(CircuitError::Routing(format!(
            "placement covers {} qubits, circuit has {n}",
            placement.len()
        )));
    }
    let mut occupant: Vec<Option<usize>> = vec![None; map.num_physical];
    for (logical, &phys) in placement.iter().enumerate() {
        if phys >= map.num_physical || occupant[phys].is_some() {
            return Err(CircuitError::Routing(format!(
                "placement is not injective into {} physical qubits",
                map.num_physical
            )));
        }
        occupant[phys] = Some(logical);
    }
    if let Some((&first, rest)) = placement.split_first() {
        if rest.iter().any(|&p| map.shortest_path(first, p).is_none()) {
            return Err(CircuitError::Routing(
                "coupling map is disconnected over the placed qubits".into(),
            ));
        }
    }

    let mut layout = placement.to_vec();
    let mut out = Circuit::new(map.num_physical);
    let mut swaps = 0usize;
    for gate in c.gates() {
        let routed = match *gate {
            Gate::H(q) => Gate::H(layout[q]),
            Gate::Rx(q, a) => Gate::Rx(layout[q], a),
            Gate::Rz(q, a) => Gate::Rz(layout[q], a),
            Gate::MeasureAll => Gate::MeasureAll,
            Gate::Cx(a, b) => {
                if !map.is_adjacent(layout[a], layout[b]) {
                    let path = map
                        .shortest_path(layout[a], layout[b])
                        .ok_or_else(|| CircuitError::Routing("no path between qubits".into()))?;
                    for w in path[..path.len() - 1].windows(2) {
                        let (p, q) = (w[0], w[1]);
                        out.push(Gate::Cx(p, q))?;
                        out.push(Gate::Cx(q, p))?;
                        out.push(Gate::Cx(p, q))?;
                        swaps += 1;
                        occupant.swap(p, q);
                        for phys in [p, q] {
                            if let Some(l) = occupant[phys] {
                                layout[l] = phys;
                            }
                        }
                    }
                }
                Gate::Cx(layout[a], layout[b])
            }
        };
        out.push(routed)?;
    }
    Ok(Transpiled {
        circuit: out,
        initial_layout: placement.to_vec(),
        final_layout: layout,
        swaps_added: swaps,
    })
}
