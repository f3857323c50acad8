use std::path::Path;

use rayon::prelude::*;
use serde::Serialize;

use super::overhead::{overhead_from_traces, OverheadReport};
use super::spec::{ArmKind, ExperimentSpec, Resolved, SimKind};
use super::table::{mean_std, ResultRow, ResultTable};
use super::HarnessError;
use crate::adversary::{cross_provider_merge, extract_graph};
use crate::circuit::serialize;
use crate::obfuscation::{optimize_arm, Arm, PrunedFlavor, RunTrace};

/// Outcome of one (sim, arm, p, seed) cell.
#[derive(Debug, Clone, PartialEq)]
pub struct CellTrace {
    pub sim: SimKind,
    pub arm: ArmKind,
    pub p: usize,
    pub seed: u64,
    pub trace: Option<RunTrace>,
    pub error: Option<String>,
}

/// A serialized circuit as it would be sent to one backend.
#[derive(Debug, Clone, PartialEq)]
pub struct SentCircuit {
    pub arm: ArmKind,
    pub p: usize,
    pub flavor: usize,
    pub backend: String,
    pub text: String,
}

impl SentCircuit {
    pub fn file_name(&self) -> String {
        format!("{}_p{}_f{}_{}.qc", self.arm, self.p, self.flavor, self.backend)
    }
}

#[derive(Debug, Clone)]
pub struct ExperimentOutput {
    pub table: ResultTable,
    pub cells: Vec<CellTrace>,
    pub overhead: OverheadReport,
    pub circuits: Vec<SentCircuit>,
    /// Broken invariants. Non-empty means the run must not be reported as a success.
    pub violations: Vec<String>,
}

impl ExperimentOutput {
    pub fn failed_cells(&self) -> impl Iterator<Item = &CellTrace> {
        self.cells.iter().filter(|c| c.trace.is_none())
    }

    /// Every cell as a header record followed by its trace lines.
    pub fn traces_jsonl(&self) -> String {
        #[derive(Serialize)]
        struct CellLine<'a> {
            record: &'static str,
            sim: SimKind,
            arm: ArmKind,
            p: usize,
            seed: u64,
            #[serde(skip_serializing_if = "Option::is_none")]
            error: &'a Option<String>,
        }
        let mut out = String::new();
        for c in &self.cells {
            let head = CellLine {
                record: "cell",
                sim: c.sim,
                arm: c.arm,
                p: c.p,
                seed: c.seed,
                error: &c.error,
            };
            out.push_str(&serde_json::to_string(&head).expect("plain record"));
            out.push('\n');
            if let Some(t) = &c.trace {
                out.push_str(&t.to_jsonl());
            }
        }
        out
    }

    /// Writes `results.csv`, `traces.jsonl`, `overhead.json` and `circuits/`.
    pub fn write(&self, dir: &Path) -> Result<(), HarnessError> {
        let write = |path: &Path, text: &str| {
            std::fs::write(path, text).map_err(|e| HarnessError::io(path, e))
        };
        let circuits = dir.join("circuits");
        std::fs::create_dir_all(&circuits).map_err(|e| HarnessError::io(&circuits, e))?;
        write(&dir.join("results.csv"), &self.table.to_csv()?)?;
        write(&dir.join("traces.jsonl"), &self.traces_jsonl())?;
        let overhead = serde_json::to_string_pretty(&self.overhead).expect("plain report");
        write(&dir.join("overhead.json"), &(overhead + "\n"))?;
        for c in &self.circuits {
            write(&circuits.join(c.file_name()), &c.text)?;
        }
        Ok(())
    }
}

fn run_cell(
    spec: &ExperimentSpec,
    resolved: &Resolved,
    sim: SimKind,
    arm: ArmKind,
    p: usize,
    seed: u64,
) -> CellTrace {
    let plan = resolved.plan_for(sim);
    let backends = resolved.backends_for(sim);
    let pruned = PrunedFlavor {
        removed_edges: plan.flavors[0].removed_edges.clone(),
        backend: backends[0].clone(),
    };
    let arm_ref = match arm {
        ArmKind::Original => Arm::Original(&backends[0]),
        ArmKind::PrunedOnly => Arm::PrunedOnly(&pruned),
        ArmKind::Split => Arm::Split(&plan),
    };
    let result = optimize_arm(&resolved.graph, &arm_ref, &spec.optimizer_config(p, seed));
    let (trace, error) = match result {
        Ok(t) => (Some(t), None),
        Err(e) => (None, Some(e.to_string())),
    };
    CellTrace {
        sim,
        arm,
        p,
        seed,
        trace,
        error,
    }
}

/// Serializes every circuit a provider would receive at the first seed's
/// initial parameters and checks what each split flavor leaks.
fn sent_circuits(
    spec: &ExperimentSpec,
    resolved: &Resolved,
) -> Result<(Vec<SentCircuit>, Vec<String>), HarnessError> {
    let sim = spec.sims[0];
    let plan = resolved.plan_for(sim);
    let backends = resolved.backends_for(sim);
    let pruned = PrunedFlavor {
        removed_edges: plan.flavors[0].removed_edges.clone(),
        backend: backends[0].clone(),
    };
    let g = &resolved.graph;
    let mut circuits = Vec::new();
    let mut violations = Vec::new();
    for &arm in &spec.arms {
        let arm_ref = match arm {
            ArmKind::Original => Arm::Original(&backends[0]),
            ArmKind::PrunedOnly => Arm::PrunedOnly(&pruned),
            ArmKind::Split => Arm::Split(&plan),
        };
        let lanes = arm_ref.lanes(g)?;
        for &p in &spec.p_layers {
            let params = spec.optimizer_config(p, spec.seeds[0]).initial_params()?;
            let mut reports = Vec::new();
            for (flavor, lane) in lanes.iter().enumerate() {
                let (circuit, _) = lane.circuit(&params)?;
                let text = serialize(&circuit);
                if arm == ArmKind::Split {
                    let report = extract_graph(&text)?;
                    let seen = report.recovered_graph();
                    if seen != lane.visible || !seen.is_subgraph_of(g) || seen.num_edges() >= g.num_edges() {
                        violations.push(format!(
                            "split flavor {flavor} at p = {p} exposes {} of {} edges",
                            seen.num_edges(),
                            g.num_edges()
                        ));
                    }
                    if report.unmatched_gates != 0 {
                        violations.push(format!(
                            "split flavor {flavor} at p = {p} left {} gates unmatched",
                            report.unmatched_gates
                        ));
                    }
                    reports.push(report);
                }
                circuits.push(SentCircuit {
                    arm,
                    p,
                    flavor,
                    backend: lane.backend.name.clone(),
                    text,
                });
            }
            if arm == ArmKind::Split && &cross_provider_merge(&reports)? != g {
                violations.push(format!("split flavors at p = {p} do not cover the graph"));
            }
        }
    }
    Ok((circuits, violations))
}

/// Runs every (sim, arm, p, seed) cell, in parallel, and folds the results
/// in spec order. A failed cell is recorded, not fatal.
pub fn run_experiment(spec: &ExperimentSpec, base: &Path) -> Result<ExperimentOutput, HarnessError> {
    let resolved = spec.resolve(base)?;
    let (circuits, violations) = sent_circuits(spec, &resolved)?;

    let mut grid = Vec::new();
    for &sim in &spec.sims {
        for &arm in &spec.arms {
            for &p in &spec.p_layers {
                for &seed in &spec.seeds {
                    grid.push((sim, arm, p, seed));
                }
            }
        }
    }
    let cells: Vec<CellTrace> = grid
        .par_iter()
        .map(|&(sim, arm, p, seed)| run_cell(spec, &resolved, sim, arm, p, seed))
        .collect();

    let rows = cells
        .chunks(spec.seeds.len())
        .map(|group| {
            let ars: Vec<f64> = group.iter().filter_map(|c| c.trace.as_ref()).map(RunTrace::final_ar).collect();
            let (mean_ar, std_ar) = mean_std(&ars);
            ResultRow {
                graph: resolved.graph_label.clone(),
                spec: resolved.plan_label.clone(),
                sim: group[0].sim,
                arm: group[0].arm,
                p: group[0].p,
                mean_ar,
                std_ar,
                n_seeds: ars.len(),
            }
        })
        .collect();

    let overhead = overhead_from_traces(spec, &resolved, &cells)?;
    Ok(ExperimentOutput {
        table: ResultTable { rows },
        cells,
        overhead,
        circuits,
        violations,
    })
}
