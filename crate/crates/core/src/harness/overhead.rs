use serde::{Deserialize, Serialize};

use super::experiment::CellTrace;
use super::spec::{ArmKind, ExperimentSpec, Resolved};
use super::HarnessError;
use crate::circuit::ParamVector;
use crate::obfuscation::{Arm, Lane, Method, PrunedFlavor};

/// Static and dynamic cost of one circuit variant.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LaneOverhead {
    pub flavor: usize,
    pub backend: String,
    pub one_qubit: usize,
    /// Includes the CX gates of inserted SWAPs.
    pub two_qubit: usize,
    pub swaps_added: usize,
    pub depth: usize,
    /// Circuit executions on this lane, final re-evaluation included.
    pub evaluations: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ArmOverhead {
    pub arm: ArmKind,
    pub p: usize,
    pub lanes: Vec<LaneOverhead>,
    pub evaluations: f64,
    /// Sum over lanes of two-qubit gates times evaluations.
    pub cost: f64,
    pub relative_cost: f64,
}

/// Gate-count times evaluation-count proxy for quantum work, relative to a
/// single-layer pruned circuit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OverheadReport {
    pub graph: String,
    pub iterations: usize,
    pub baseline_cost: f64,
    pub arms: Vec<ArmOverhead>,
}

impl OverheadReport {
    pub fn find(&self, arm: ArmKind, p: usize) -> Option<&ArmOverhead> {
        self.arms.iter().find(|a| a.arm == arm && a.p == p)
    }
}

/// Predicted report: evaluation counts follow from the SPSA schedule
/// (two per iteration plus one final run per lane).
pub fn overhead(spec: &ExperimentSpec, base: &std::path::Path) -> Result<OverheadReport, HarnessError> {
    if spec.method != Method::Spsa {
        return Err(HarnessError::Spec(
            "Nelder-Mead evaluation counts are only known from traces".into(),
        ));
    }
    let resolved = spec.resolve(base)?;
    build(spec, &resolved, None)
}

/// Report with evaluation counts averaged over the traces of the first
/// simulator kind in the spec.
pub fn overhead_from_traces(
    spec: &ExperimentSpec,
    resolved: &Resolved,
    traces: &[CellTrace],
) -> Result<OverheadReport, HarnessError> {
    build(spec, resolved, Some(traces))
}

fn lane_shape(lane: &Lane, p: usize) -> Result<(usize, usize, usize, usize), HarnessError> {
    let params = ParamVector::new(vec![0.1; p], vec![0.1; p])?;
    let c = crate::circuit::build_qaoa(&lane.visible, &params)?;
    let (circuit, swaps) = match &lane.backend.coupling {
        None => (c, 0),
        Some(map) => {
            let placement: Vec<usize> = (0..c.num_qubits()).collect();
            let t = crate::circuit::transpile(&c, map, &placement)?;
            let swaps = t.swaps_added;
            (t.circuit, swaps)
        }
    };
    Ok((circuit.one_qubit_count(), circuit.two_qubit_count(), swaps, circuit.depth()))
}

fn build(
    spec: &ExperimentSpec,
    resolved: &Resolved,
    traces: Option<&[CellTrace]>,
) -> Result<OverheadReport, HarnessError> {
    let sim = spec.sims[0];
    let plan = resolved.plan_for(sim);
    let backends = resolved.backends_for(sim);
    let g = &resolved.graph;

    // lane evaluations: mean over seeds from traces, else the SPSA formula
    let lane_evals = |arm: ArmKind, p: usize, lane: usize, k: usize| -> f64 {
        let measured: Vec<f64> = traces
            .unwrap_or(&[])
            .iter()
            .filter(|c| c.sim == sim && c.arm == arm && c.p == p)
            .filter_map(|c| c.trace.as_ref())
            .map(|t| {
                t.entries
                    .iter()
                    .filter(|e| e.flavor == lane)
                    .map(|e| e.evaluations as f64)
                    .sum::<f64>()
                    + 1.0
            })
            .collect();
        if measured.is_empty() {
            let iters = (spec.iterations + k - 1 - lane) / k;
            2.0 * iters as f64 + 1.0
        } else {
            measured.iter().sum::<f64>() / measured.len() as f64
        }
    };

    let pruned_flavor = PrunedFlavor {
        removed_edges: plan.flavors[0].removed_edges.clone(),
        backend: plan.flavors[0].backend.clone(),
    };
    let arm_lanes = |kind: ArmKind| -> Result<Vec<Lane>, HarnessError> {
        let arm = match kind {
            ArmKind::Original => Arm::Original(&backends[0]),
            ArmKind::PrunedOnly => Arm::PrunedOnly(&pruned_flavor),
            ArmKind::Split => Arm::Split(&plan),
        };
        Ok(arm.lanes(g)?)
    };

    let measure = |kind: ArmKind, p: usize| -> Result<(Vec<LaneOverhead>, f64, f64), HarnessError> {
        let lanes = arm_lanes(kind)?;
        let k = lanes.len();
        let mut out = Vec::with_capacity(k);
        for (i, lane) in lanes.iter().enumerate() {
            let (one_qubit, two_qubit, swaps_added, depth) = lane_shape(lane, p)?;
            out.push(LaneOverhead {
                flavor: i,
                backend: lane.backend.name.clone(),
                one_qubit,
                two_qubit,
                swaps_added,
                depth,
                evaluations: lane_evals(kind, p, i, k),
            });
        }
        let evaluations = out.iter().map(|l| l.evaluations).sum();
        let cost = out.iter().map(|l| l.two_qubit as f64 * l.evaluations).sum();
        Ok((out, evaluations, cost))
    };

    let (_, _, baseline_cost) = measure(ArmKind::PrunedOnly, 1)?;
    let mut arms = Vec::new();
    for &kind in &spec.arms {
        for &p in &spec.p_layers {
            let (lanes, evaluations, cost) = measure(kind, p)?;
            arms.push(ArmOverhead {
                arm: kind,
                p,
                lanes,
                evaluations,
                cost,
                relative_cost: cost / baseline_cost,
            });
        }
    }
    Ok(OverheadReport {
        graph: resolved.graph_label.clone(),
        iterations: spec.iterations,
        baseline_cost,
        arms,
    })
}
