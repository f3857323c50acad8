use std::fmt;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::HarnessError;
use crate::benchmarks::BenchmarkId;
use crate::graph::{Edge, Graph};
use crate::obfuscation::{
    make_split_plan, Init, Method, OptimizerConfig, PrunedFlavor, SpsaGains, SplitPlan, FINAL_SHOTS,
};
use crate::sim::{BackendConfig, BackendProfile, DEFAULT_SHOTS};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ArmKind {
    Original,
    PrunedOnly,
    Split,
}

impl fmt::Display for ArmKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ArmKind::Original => "original",
            ArmKind::PrunedOnly => "pruned_only",
            ArmKind::Split => "split",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SimKind {
    Ideal,
    Noisy,
}

impl fmt::Display for SimKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SimKind::Ideal => "ideal",
            SimKind::Noisy => "noisy",
        })
    }
}

/// Where the problem graph comes from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GraphSource {
    Benchmark(BenchmarkId),
    File(PathBuf),
}

impl GraphSource {
    pub fn load(&self, base: &Path) -> Result<Graph, HarnessError> {
        match self {
            GraphSource::Benchmark(id) => Ok(id.graph()?),
            GraphSource::File(p) => {
                let path = base.join(p);
                let text = std::fs::read_to_string(&path).map_err(|e| HarnessError::io(&path, e))?;
                Ok(text.parse()?)
            }
        }
    }

    pub fn label(&self) -> String {
        match self {
            GraphSource::Benchmark(id) => id.to_string(),
            GraphSource::File(p) => p
                .file_stem()
                .map_or_else(|| p.display().to_string(), |s| s.to_string_lossy().into_owned()),
        }
    }
}

/// How the split flavors are chosen.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PlanSpec {
    pub k: usize,
    pub edges_per_flavor: usize,
    /// Explicit removed sets, one per flavor. Overrides random selection.
    pub removed_sets: Option<Vec<Vec<Edge>>>,
    pub seed: u64,
}

impl Default for PlanSpec {
    fn default() -> Self {
        PlanSpec {
            k: 2,
            edges_per_flavor: 1,
            removed_sets: None,
            seed: 0,
        }
    }
}

/// One experiment: a graph, the arms to compare, and the grid of
/// (simulator kind, layer count, seed) cells to run them on.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentSpec {
    pub graph: GraphSource,
    pub arms: Vec<ArmKind>,
    pub plan: PlanSpec,
    pub p_layers: Vec<usize>,
    pub seeds: Vec<u64>,
    pub sims: Vec<SimKind>,
    /// Backend names, one per flavor. The original and pruned-only arms use
    /// the first. Ideal cells strip the noise from the same profiles.
    pub backends: Vec<String>,
    /// Profile file; the bundled profiles when absent.
    pub backend_file: Option<PathBuf>,
    pub shots: u64,
    pub final_shots: u64,
    pub iterations: usize,
    pub method: Method,
    pub spsa: SpsaGains,
    pub nm_step: f64,
}

impl Default for ExperimentSpec {
    fn default() -> Self {
        ExperimentSpec {
            graph: GraphSource::Benchmark(BenchmarkId::Cycle4),
            arms: vec![ArmKind::Original, ArmKind::PrunedOnly, ArmKind::Split],
            plan: PlanSpec::default(),
            p_layers: vec![1],
            seeds: (0..10).collect(),
            sims: vec![SimKind::Ideal],
            backends: vec!["hw1".into(), "hw2".into()],
            backend_file: None,
            shots: DEFAULT_SHOTS,
            final_shots: FINAL_SHOTS,
            iterations: 50,
            method: Method::Spsa,
            spsa: SpsaGains::default(),
            nm_step: 0.4,
        }
    }
}

/// Everything a spec resolves to before any cell runs.
#[derive(Debug, Clone)]
pub struct Resolved {
    pub graph: Graph,
    pub graph_label: String,
    pub plan_label: String,
    pub backends: Vec<BackendProfile>,
    pub plan: SplitPlan,
}

impl Resolved {
    pub fn backends_for(&self, sim: SimKind) -> Vec<BackendProfile> {
        match sim {
            SimKind::Noisy => self.backends.clone(),
            SimKind::Ideal => self.backends.iter().map(BackendProfile::as_ideal).collect(),
        }
    }

    pub fn plan_for(&self, sim: SimKind) -> SplitPlan {
        let backends = self.backends_for(sim);
        SplitPlan {
            flavors: self
                .plan
                .flavors
                .iter()
                .zip(backends)
                .map(|(f, backend)| PrunedFlavor {
                    removed_edges: f.removed_edges.clone(),
                    backend,
                })
                .collect(),
            schedule: self.plan.schedule,
        }
    }
}

impl ExperimentSpec {
    pub fn from_json(text: &str) -> Result<Self, HarnessError> {
        let spec: ExperimentSpec =
            serde_json::from_str(text).map_err(|e| HarnessError::Spec(e.to_string()))?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn from_file(path: &Path) -> Result<Self, HarnessError> {
        let text = std::fs::read_to_string(path).map_err(|e| HarnessError::io(path, e))?;
        Self::from_json(&text)
    }

    pub fn validate(&self) -> Result<(), HarnessError> {
        let bad = |m: &str| Err(HarnessError::Spec(m.into()));
        if self.arms.is_empty() {
            return bad("at least one arm is required");
        }
        if self.seeds.is_empty() {
            return bad("at least one seed is required");
        }
        if self.sims.is_empty() {
            return bad("at least one simulator kind is required");
        }
        if self.p_layers.is_empty() || self.p_layers.contains(&0) {
            return bad("layer counts must be non-empty and >= 1");
        }
        if self.backends.len() != self.plan.k {
            return Err(HarnessError::Spec(format!(
                "{} backends for k = {}",
                self.backends.len(),
                self.plan.k
            )));
        }
        Ok(())
    }

    /// Loads the graph and backends and fixes the split plan. `base` anchors
    /// relative paths in the spec.
    pub fn resolve(&self, base: &Path) -> Result<Resolved, HarnessError> {
        self.validate()?;
        let graph = self.graph.load(base)?;
        let config = match &self.backend_file {
            None => BackendConfig::bundled(),
            Some(p) => {
                let path = base.join(p);
                let text = std::fs::read_to_string(&path).map_err(|e| HarnessError::io(&path, e))?;
                BackendConfig::from_json(&text)?
            }
        };
        let backends = self
            .backends
            .iter()
            .map(|n| config.get(n).cloned())
            .collect::<Result<Vec<_>, _>>()?;
        let plan = match &self.plan.removed_sets {
            Some(sets) => SplitPlan::from_removed_sets(&graph, sets, &backends)?,
            None => make_split_plan(&graph, self.plan.k, self.plan.edges_per_flavor, &backends, self.plan.seed)?,
        };
        let plan_label = plan
            .flavors
            .iter()
            .map(|f| {
                f.removed_edges
                    .iter()
                    .map(|e| format!("{}-{}", e.u, e.v))
                    .collect::<Vec<_>>()
                    .join("+")
            })
            .collect::<Vec<_>>()
            .join("/");
        Ok(Resolved {
            graph_label: self.graph.label(),
            graph,
            plan_label,
            backends,
            plan,
        })
    }

    pub fn optimizer_config(&self, p: usize, seed: u64) -> OptimizerConfig {
        OptimizerConfig {
            method: self.method,
            total_iterations: self.iterations,
            p_layers: p,
            shots: self.shots,
            final_shots: self.final_shots,
            seed,
            spsa: self.spsa,
            nm_step: self.nm_step,
            init: Init::Uniform,
        }
    }
}
