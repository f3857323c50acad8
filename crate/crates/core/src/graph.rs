//! Undirected problem graphs, cut evaluation and the exact MaxCut oracle.
//!
//! A [`Graph`] keeps its edges canonically ordered (`u < v` inside a pair,
//! pairs sorted lexicographically), so two graphs with the same node count and
//! edge set compare equal structurally.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Largest node count accepted by [`max_cut_bruteforce`].
pub const MAX_BRUTEFORCE_NODES: usize = 24;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("graph must have at least one node")]
    Empty,
    #[error("self-loop on node {0}")]
    SelfLoop(usize),
    #[error("edge ({u},{v}) references a node outside 0..{n}")]
    NodeOutOfRange { u: usize, v: usize, n: usize },
    #[error("duplicate edge ({0},{1})")]
    DuplicateEdge(usize, usize),
    #[error("assignment has length {got}, graph has {expected} nodes")]
    LengthMismatch { expected: usize, got: usize },
    #[error("brute-force MaxCut supports at most {max} nodes, graph has {n}")]
    TooLarge { n: usize, max: usize },
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("unknown benchmark graph `{0}`")]
    UnknownBenchmark(String),
}

/// An undirected edge with `u < v`. Serialized as a `[u, v]` pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(from = "(usize, usize)", into = "(usize, usize)")]
pub struct Edge {
    pub u: usize,
    pub v: usize,
}

impl Edge {
    /// Builds the canonical form of the pair, ordering the endpoints.
    ///
    /// Self-loops are not rejected here; [`Graph::new`] does that.
    pub fn new(a: usize, b: usize) -> Self {
        if a <= b {
            Edge { u: a, v: b }
        } else {
            Edge { u: b, v: a }
        }
    }
}

impl From<(usize, usize)> for Edge {
    fn from((a, b): (usize, usize)) -> Self {
        Edge::new(a, b)
    }
}

impl From<Edge> for (usize, usize) {
    fn from(e: Edge) -> Self {
        (e.u, e.v)
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.u, self.v)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    edges: Vec<Edge>,
}

impl Graph {
    /// Validates and canonicalizes an edge list.
    pub fn new<I, E>(n: usize, edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = E>,
        E: Into<Edge>,
    {
        if n == 0 {
            return Err(GraphError::Empty);
        }
        let mut out: Vec<Edge> = Vec::new();
        for e in edges {
            let e = e.into();
            if e.u == e.v {
                return Err(GraphError::SelfLoop(e.u));
            }
            if e.v >= n {
                return Err(GraphError::NodeOutOfRange { u: e.u, v: e.v, n });
            }
            out.push(e);
        }
        out.sort_unstable();
        if let Some(w) = out.windows(2).find(|w| w[0] == w[1]) {
            return Err(GraphError::DuplicateEdge(w[0].u, w[0].v));
        }
        Ok(Graph { n, edges: out })
    }

    pub fn cycle(n: usize) -> Result<Self, GraphError> {
        match n {
            0 => Err(GraphError::Empty),
            1 => Graph::new(1, Vec::<Edge>::new()),
            2 => Graph::new(2, [(0, 1)]),
            _ => Graph::new(n, (0..n).map(|i| (i, (i + 1) % n))),
        }
    }

    pub fn complete(n: usize) -> Result<Self, GraphError> {
        let edges = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)));
        Graph::new(n, edges)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn contains(&self, e: Edge) -> bool {
        self.edges.binary_search(&e).is_ok()
    }

    /// Number of node pairs, `n(n-1)/2`.
    pub fn pair_universe(&self) -> usize {
        self.n * (self.n - 1) / 2
    }

    /// True when `self` has the same node count and an edge set contained in
    /// `other`'s.
    pub fn is_subgraph_of(&self, other: &Graph) -> bool {
        self.n == other.n && self.edges.iter().all(|&e| other.contains(e))
    }

    /// Two-colouring check by BFS.
    pub fn is_bipartite(&self) -> bool {
        let mut adj = vec![Vec::new(); self.n];
        for e in &self.edges {
            adj[e.u].push(e.v);
            adj[e.v].push(e.u);
        }
        let mut colour: Vec<Option<bool>> = vec![None; self.n];
        for start in 0..self.n {
            if colour[start].is_some() {
                continue;
            }
            colour[start] = Some(false);
            let mut queue = std::collections::VecDeque::from([start]);
            while let Some(x) = queue.pop_front() {
                let cx = colour[x].unwrap();
                for &y in &adj[x] {
                    match colour[y] {
                        None => {
                            colour[y] = Some(!cx);
                            queue.push_back(y);
                        }
                        Some(cy) if cy == cx => return false,
                        Some(_) => {}
                    }
                }
            }
        }
        true
    }

    #[inline]
    pub(crate) fn cut_of_index(&self, z: u64) -> u32 {
        self.edges
            .iter()
            .filter(|e| ((z >> e.u) ^ (z >> e.v)) & 1 == 1)
            .count() as u32
    }

    /// Writes the line-oriented text format with sorted edges.
    pub fn to_text(&self) -> String {
        let mut s = format!("n {}\n", self.n);
        for e in &self.edges {
            s.push_str(&format!("e {} {}\n", e.u, e.v));
        }
        s
    }
}

impl fmt::Display for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n={} edges=[", self.n)?;
        for (i, e) in self.edges.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, "]")
    }
}

impl FromStr for Graph {
    type Err = GraphError;

    /// Parses `n <count>` followed by `e <u> <v>` lines. `#` starts a comment.
    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let mut n: Option<usize> = None;
        let mut edges = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |msg: &str| GraphError::Parse {
                line: line_no,
                msg: msg.to_string(),
            };
            let toks: Vec<&str> = line.split_whitespace().collect();
            let num = |s: &str| s.parse::<usize>().map_err(|_| err("expected a non-negative integer"));
            match toks.as_slice() {
                ["n", c] => {
                    if n.is_some() {
                        return Err(err("repeated `n` header"));
                    }
                    n = Some(num(c)?);
                }
                ["e", u, v] => {
                    if n.is_none() {
                        return Err(err("edge before `n` header"));
                    }
                    edges.push(Edge::new(num(u)?, num(v)?));
                    if edges.last().unwrap().u == edges.last().unwrap().v {
                        return Err(err("self-loop"));
                    }
                }
                _ => return Err(err("expected `n <count>` or `e <u> <v>`")),
            }
        }
        let n = n.ok_or(GraphError::Parse {
            line: 0,
            msg: "missing `n` header".into(),
        })?;
        Graph::new(n, edges)
    }
}

/// A bipartition: `bits[i]` is the side of node `i`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CutAssignment {
    bits: Vec<u8>,
}

impl CutAssignment {
    pub fn new(bits: Vec<u8>) -> Self {
        CutAssignment {
            bits: bits.into_iter().map(|b| b & 1).collect(),
        }
    }

    /// Bit `q` of `index` becomes node `q`'s side.
    pub fn from_index(index: u64, n: usize) -> Self {
        CutAssignment {
            bits: (0..n).map(|q| ((index >> q) & 1) as u8).collect(),
        }
    }

    pub fn bits(&self) -> &[u8] {
        &self.bits
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn complement(&self) -> Self {
        CutAssignment {
            bits: self.bits.iter().map(|b| b ^ 1).collect(),
        }
    }

    /// Node `i` is character `i` of the string.
    pub fn to_bitstring(&self) -> String {
        self.bits.iter().map(|&b| if b == 1 { '1' } else { '0' }).collect()
    }
}

impl FromStr for CutAssignment {
    type Err = GraphError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bits = s
            .chars()
            .map(|c| match c {
                '0' => Ok(0),
                '1' => Ok(1),
                _ => Err(GraphError::Parse {
                    line: 0,
                    msg: format!("invalid bit `{c}` in assignment"),
                }),
            })
            .collect::<Result<Vec<u8>, _>>()?;
        Ok(CutAssignment { bits })
    }
}

/// Number of edges whose endpoints fall on different sides of `a`.
pub fn cut_value(g: &Graph, a: &CutAssignment) -> Result<u32, GraphError> {
    if a.len() != g.n() {
        return Err(GraphError::LengthMismatch {
            expected: g.n(),
            got: a.len(),
        });
    }
    Ok(g
        .edges()
        .iter()
        .filter(|e| a.bits[e.u] != a.bits[e.v])
        .count() as u32)
}

/// Exhaustive MaxCut over the 2^(n-1) assignments with node `n-1` on side 0.
pub fn max_cut_bruteforce(g: &Graph) -> Result<(u32, CutAssignment), GraphError> {
    let n = g.n();
    if n > MAX_BRUTEFORCE_NODES {
        return Err(GraphError::TooLarge {
            n,
            max: MAX_BRUTEFORCE_NODES,
        });
    }
    let limit: u64 = 1 << (n - 1);
    let (mut best, mut witness) = (0u32, 0u64);
    for z in 0..limit {
        let c = g.cut_of_index(z);
        if c > best {
            best = c;
            witness = z;
        }
    }
    Ok((best, CutAssignment::from_index(witness, n)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn k3() -> Graph {
        Graph::complete(3).unwrap()
    }

    #[test]
    fn canonical_order_makes_equality_structural() {
        let a = Graph::new(4, [(3, 2), (0, 1), (1, 2)]).unwrap();
        let b = Graph::new(4, [(0, 1), (2, 1), (2, 3)]).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.edges()[2], Edge { u: 2, v: 3 });
    }

    #[test]
    fn rejects_malformed_edge_lists() {
        assert_eq!(Graph::new(3, [(1, 1)]), Err(GraphError::SelfLoop(1)));
        assert!(matches!(
            Graph::new(3, [(0, 3)]),
            Err(GraphError::NodeOutOfRange { .. })
        ));
        assert_eq!(
            Graph::new(3, [(0, 1), (1, 0)]),
            Err(GraphError::DuplicateEdge(0, 1))
        );
        assert_eq!(Graph::new(0, Vec::<Edge>::new()), Err(GraphError::Empty));
    }

    #[test]
    fn cut_value_examples() {
        let a = CutAssignment::new(vec![0, 1, 1]);
        assert_eq!(cut_value(&k3(), &a).unwrap(), 2);
        let zeros = CutAssignment::new(vec![0; 3]);
        assert_eq!(cut_value(&k3(), &zeros).unwrap(), 0);
        let short = CutAssignment::new(vec![0, 1]);
        assert!(matches!(
            cut_value(&k3(), &short),
            Err(GraphError::LengthMismatch { expected: 3, got: 2 })
        ));
    }

    #[test]
    fn max_cut_examples() {
        assert_eq!(max_cut_bruteforce(&k3()).unwrap().0, 2);
        assert_eq!(max_cut_bruteforce(&Graph::cycle(4).unwrap()).unwrap().0, 4);
        let big = Graph::cycle(25).unwrap();
        assert!(matches!(
            max_cut_bruteforce(&big),
            Err(GraphError::TooLarge { n: 25, .. })
        ));
    }

    #[test]
    fn witness_attains_cmax() {
        let g = Graph::complete(5).unwrap();
        let (cmax, w) = max_cut_bruteforce(&g).unwrap();
        assert_eq!(cmax, 6);
        assert_eq!(cut_value(&g, &w).unwrap(), cmax);
    }

    #[test]
    fn single_node_graph() {
        let g = Graph::new(1, Vec::<Edge>::new()).unwrap();
        assert_eq!(max_cut_bruteforce(&g).unwrap().0, 0);
    }

    #[test]
    fn text_format_round_trip_and_comments() {
        let text = "# a ring\nn 4\ne 2 3\ne 0 1 # first\n\ne 1 2\ne 3 0\n";
        let g: Graph = text.parse().unwrap();
        assert_eq!(g, Graph::cycle(4).unwrap());
        assert_eq!(g.to_text(), "n 4\ne 0 1\ne 0 3\ne 1 2\ne 2 3\n");
        assert_eq!(g.to_text().parse::<Graph>().unwrap(), g);
    }

    #[test]
    fn text_format_errors_carry_line_numbers() {
        let err = "n 3\ne 0 1\nx 1 2\n".parse::<Graph>().unwrap_err();
        assert!(matches!(err, GraphError::Parse { line: 3, .. }));
        let err = "e 0 1\n".parse::<Graph>().unwrap_err();
        assert!(matches!(err, GraphError::Parse { line: 1, .. }));
        assert!("n 2\ne 0 5\n".parse::<Graph>().is_err());
    }

    #[test]
    fn bipartite_detection() {
        assert!(Graph::cycle(4).unwrap().is_bipartite());
        assert!(!Graph::cycle(5).unwrap().is_bipartite());
        assert!(!k3().is_bipartite());
    }

    fn arb_graph() -> impl Strategy<Value = Graph> {
        (1usize..=10).prop_flat_map(|n| {
            let pairs: Vec<(usize, usize)> =
                (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
            let m = pairs.len();
            proptest::collection::vec(any::<bool>(), m).prop_map(move |keep| {
                let edges = pairs.iter().zip(&keep).filter(|(_, k)| **k).map(|(p, _)| *p);
                Graph::new(n, edges).unwrap()
            })
        })
    }

    proptest! {
        #[test]
        fn cut_is_complement_symmetric(g in arb_graph(), seed in any::<u64>()) {
            let a = CutAssignment::from_index(seed, g.n());
            prop_assert_eq!(cut_value(&g, &a).unwrap(), cut_value(&g, &a.complement()).unwrap());
        }

        #[test]
        fn text_round_trip(g in arb_graph()) {
            prop_assert_eq!(g.to_text().parse::<Graph>().unwrap(), g);
        }
    }
}
