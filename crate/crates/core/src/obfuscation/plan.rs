use std::collections::BTreeSet;

use rand::seq::index;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::ObfuscationError;
use crate::graph::{Edge, Graph};
use crate::sim::BackendProfile;

const PLAN_SAMPLING_ATTEMPTS: usize = 10_000;

/// Deletes `removed` from `g`. The node count never changes, so the qubit
/// count of the pruned circuit matches the full one.
pub fn prune(g: &Graph, removed: &[Edge]) -> Result<Graph, ObfuscationError> {
    if removed.is_empty() {
        return Err(ObfuscationError::Plan("removed edge set is empty".into()));
    }
    let removed: BTreeSet<Edge> = removed.iter().copied().collect();
    if let Some(e) = removed.iter().find(|e| !g.contains(**e)) {
        return Err(ObfuscationError::EdgeNotInGraph(*e));
    }
    let kept = g.edges().iter().filter(|e| !removed.contains(e)).copied();
    Ok(Graph::new(g.n(), kept).expect("subset of a valid graph"))
}

/// One pruned circuit variant and the backend it is sent to.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PrunedFlavor {
    pub removed_edges: Vec<Edge>,
    pub backend: BackendProfile,
}

impl PrunedFlavor {
    pub fn new(g: &Graph, removed: &[Edge], backend: BackendProfile) -> Result<Self, ObfuscationError> {
        let pruned = prune(g, removed)?;
        if pruned.num_edges() == 0 && g.num_edges() > 1 {
            return Err(ObfuscationError::Plan(
                "a flavor may not remove every edge".into(),
            ));
        }
        let mut removed_edges = removed.to_vec();
        removed_edges.sort_unstable();
        removed_edges.dedup();
        Ok(PrunedFlavor {
            removed_edges,
            backend,
        })
    }

    /// The graph this flavor's circuit encodes.
    pub fn visible_graph(&self, g: &Graph) -> Result<Graph, ObfuscationError> {
        prune(g, &self.removed_edges)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Schedule {
    /// Iteration `t` runs on flavor `t mod k`.
    #[default]
    RoundRobin,
}

/// k pruned flavors sharing one parameter vector.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SplitPlan {
    pub flavors: Vec<PrunedFlavor>,
    #[serde(default)]
    pub schedule: Schedule,
}

impl SplitPlan {
    /// Checks the plan against `g`: at least two flavors, distinct removed
    /// sets, and every removed edge still present in some other flavor.
    pub fn new(g: &Graph, flavors: Vec<PrunedFlavor>) -> Result<Self, ObfuscationError> {
        let plan = SplitPlan {
            flavors,
            schedule: Schedule::RoundRobin,
        };
        plan.validate(g)?;
        Ok(plan)
    }

    /// Builds flavors from explicit removed sets, one per backend.
    pub fn from_removed_sets(
        g: &Graph,
        sets: &[Vec<Edge>],
        backends: &[BackendProfile],
    ) -> Result<Self, ObfuscationError> {
        if sets.len() != backends.len() {
            return Err(ObfuscationError::Plan(format!(
                "{} removed sets for {} backends",
                sets.len(),
                backends.len()
            )));
        }
        let flavors = sets
            .iter()
            .zip(backends)
            .map(|(s, b)| PrunedFlavor::new(g, s, b.clone()))
            .collect::<Result<Vec<_>, _>>()?;
        SplitPlan::new(g, flavors)
    }

    pub fn k(&self) -> usize {
        self.flavors.len()
    }

    pub fn validate(&self, g: &Graph) -> Result<(), ObfuscationError> {
        if self.flavors.len() < 2 {
            return Err(ObfuscationError::Plan("a split plan needs at least two flavors".into()));
        }
        for (i, f) in self.flavors.iter().enumerate() {
            let visible = f.visible_graph(g)?;
            if visible.num_edges() == 0 && g.num_edges() > 1 {
                return Err(ObfuscationError::Plan(format!("flavor {i} removes every edge")));
            }
            if self.flavors[..i].iter().any(|o| o.removed_edges == f.removed_edges) {
                return Err(ObfuscationError::Plan(format!(
                    "flavor {i} repeats an earlier removed set"
                )));
            }
            for e in &f.removed_edges {
                let covered = self
                    .flavors
                    .iter()
                    .enumerate()
                    .any(|(j, o)| j != i && !o.removed_edges.contains(e));
                if !covered {
                    return Err(ObfuscationError::Plan(format!(
                        "edge {e} is removed by every flavor"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Union of the flavors' visible edge sets.
    pub fn covered_edges(&self, g: &Graph) -> Result<BTreeSet<Edge>, ObfuscationError> {
        let mut out = BTreeSet::new();
        for f in &self.flavors {
            out.extend(f.visible_graph(g)?.edges().iter().copied());
        }
        Ok(out)
    }
}

/// Draws `k` distinct removed sets of `edges_per_flavor` edges each,
/// uniformly under `seed`, rejecting draws that break the plan rules.
pub fn make_split_plan(
    g: &Graph,
    k: usize,
    edges_per_flavor: usize,
    backends: &[BackendProfile],
    seed: u64,
) -> Result<SplitPlan, ObfuscationError> {
    let m = g.num_edges();
    if k < 2 {
        return Err(ObfuscationError::Plan("k must be at least 2".into()));
    }
    if backends.len() != k {
        return Err(ObfuscationError::Plan(format!(
            "k = {k} flavors but {} backends",
            backends.len()
        )));
    }
    if edges_per_flavor == 0 || m < 2 || edges_per_flavor > m - 1 {
        return Err(ObfuscationError::Plan(format!(
            "cannot remove {edges_per_flavor} of {m} edges per flavor"
        )));
    }
    if k == 2 && 2 * edges_per_flavor > m {
        return Err(ObfuscationError::Plan(format!(
            "two flavors need disjoint removed sets, {edges_per_flavor} + {edges_per_flavor} > {m}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..PLAN_SAMPLING_ATTEMPTS {
        let sets: Vec<Vec<Edge>> = (0..k)
            .map(|_| {
                let mut s: Vec<Edge> = index::sample(&mut rng, m, edges_per_flavor)
                    .into_iter()
                    .map(|i| g.edges()[i])
                    .collect();
                s.sort_unstable();
                s
            })
            .collect();
        if let Ok(plan) = SplitPlan::from_removed_sets(g, &sets, backends) {
            return Ok(plan);
        }
    }
    Err(ObfuscationError::Plan(format!(
        "no valid {k}-flavor plan with {edges_per_flavor} edges each"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::benchmarks::BenchmarkId;

    fn e(u: usize, v: usize) -> Edge {
        Edge::new(u, v)
    }

    fn two_backends() -> Vec<BackendProfile> {
        vec![BackendProfile::ideal("a", 1), BackendProfile::ideal("b", 2)]
    }

    #[test]
    fn prune_ring_edge() {
        let ring = Graph::cycle(4).unwrap();
        let path = prune(&ring, &[e(0, 1)]).unwrap();
        assert_eq!(path.n(), 4);
        assert_eq!(path.num_edges(), 3);
        assert!(!path.contains(e(0, 1)));
    }

    #[test]
    fn prune_guards() {
        let ring = Graph::cycle(4).unwrap();
        assert!(prune(&ring, &[]).is_err());
        assert!(matches!(
            prune(&ring, &[e(0, 2)]),
            Err(ObfuscationError::EdgeNotInGraph(_))
        ));
        let k4 = Graph::complete(4).unwrap();
        assert_eq!(prune(&k4, &[e(0, 1), e(2, 3)]).unwrap().num_edges(), 4);
    }

    #[test]
    fn ring_pair_plan() {
        let ring = Graph::cycle(4).unwrap();
        let plan =
            SplitPlan::from_removed_sets(&ring, &[vec![e(0, 3)], vec![e(0, 1)]], &two_backends())
                .unwrap();
        assert_eq!(plan.k(), 2);
        let covered: Vec<Edge> = plan.covered_edges(&ring).unwrap().into_iter().collect();
        assert_eq!(covered, ring.edges());
    }

    #[test]
    fn identical_removed_sets_rejected() {
        let ring = Graph::cycle(4).unwrap();
        let err =
            SplitPlan::from_removed_sets(&ring, &[vec![e(0, 1)], vec![e(0, 1)]], &two_backends());
        assert!(matches!(err, Err(ObfuscationError::Plan(_))));
    }

    #[test]
    fn union_rule_enforced() {
        // k = 3, edge (0,1) removed everywhere
        let k4 = Graph::complete(4).unwrap();
        let backends = vec![
            BackendProfile::ideal("a", 1),
            BackendProfile::ideal("b", 2),
            BackendProfile::ideal("c", 3),
        ];
        let sets = [
            vec![e(0, 1), e(0, 2)],
            vec![e(0, 1), e(1, 2)],
            vec![e(0, 1), e(2, 3)],
        ];
        assert!(SplitPlan::from_removed_sets(&k4, &sets, &backends).is_err());
    }

    #[test]
    fn graph6_disjoint_triples() {
        let g = BenchmarkId::Graph6.graph().unwrap();
        let edges = g.edges();
        let sets = [edges[..3].to_vec(), edges[3..6].to_vec()];
        assert!(SplitPlan::from_removed_sets(&g, &sets, &two_backends()).is_ok());
    }

    #[test]
    fn random_plans_are_valid_and_seeded() {
        for id in BenchmarkId::TABLE {
            let g = id.graph().unwrap();
            for seed in 0..20 {
                let plan = make_split_plan(&g, 2, 1, &two_backends(), seed).unwrap();
                plan.validate(&g).unwrap();
                assert_eq!(plan, make_split_plan(&g, 2, 1, &two_backends(), seed).unwrap());
                let covered: Vec<Edge> = plan.covered_edges(&g).unwrap().into_iter().collect();
                assert_eq!(covered, g.edges());
            }
        }
    }

    #[test]
    fn unsatisfiable_plans() {
        let single = Graph::new(2, [(0, 1)]).unwrap();
        assert!(make_split_plan(&single, 2, 1, &two_backends(), 0).is_err());
        let ring = Graph::cycle(4).unwrap();
        assert!(make_split_plan(&ring, 2, 3, &two_backends(), 0).is_err());
        assert!(make_split_plan(&ring, 2, 1, &two_backends()[..1], 0).is_err());
        assert!(make_split_plan(&ring, 1, 1, &two_backends()[..1], 0).is_err());
    }

    #[test]
    fn three_flavor_plans() {
        let g = BenchmarkId::Graph6.graph().unwrap();
        let backends: Vec<_> = (0..3).map(|i| BackendProfile::ideal(format!("b{i}"), i)).collect();
        let plan = make_split_plan(&g, 3, 2, &backends, 9).unwrap();
        assert_eq!(plan.k(), 3);
        plan.validate(&g).unwrap();
    }
}
