use std::collections::BTreeMap;
use std::f64::consts::{FRAC_PI_2, PI};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::optimizer::{NelderMead, Probe, Spsa, SpsaGains, StepOptimizer};
use super::{approximation_ratio, prune, ObfuscationError, PrunedFlavor, SplitPlan};
use crate::circuit::{build_qaoa, transpile, Circuit, ParamVector};
use crate::graph::{max_cut_bruteforce, Graph};
use crate::sim::{expectation_full_cost, run_shots_with_rng, BackendProfile, RNG_ALGORITHM};

/// Shots used to re-evaluate the best parameters at the end of a run.
pub const FINAL_SHOTS: u64 = 16_384;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    #[default]
    Spsa,
    NelderMead,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Init {
    /// `γ_k ~ U[0, π)`, `β_k ~ U[0, π/2)` drawn from the run seed.
    #[default]
    Uniform,
    Fixed(ParamVector),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct OptimizerConfig {
    pub method: Method,
    pub total_iterations: usize,
    pub p_layers: usize,
    pub shots: u64,
    pub final_shots: u64,
    pub seed: u64,
    pub spsa: SpsaGains,
    /// Initial simplex edge length for Nelder-Mead, in radians.
    pub nm_step: f64,
    pub init: Init,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        OptimizerConfig {
            method: Method::Spsa,
            total_iterations: 50,
            p_layers: 1,
            shots: crate::sim::DEFAULT_SHOTS,
            final_shots: FINAL_SHOTS,
            seed: 0,
            spsa: SpsaGains::default(),
            nm_step: 0.4,
            init: Init::Uniform,
        }
    }
}

impl OptimizerConfig {
    pub fn initial_params(&self) -> Result<ParamVector, ObfuscationError> {
        match &self.init {
            Init::Fixed(pv) => {
                if pv.p() != self.p_layers {
                    return Err(ObfuscationError::Config(format!(
                        "fixed init has {} layers, config has {}",
                        pv.p(),
                        self.p_layers
                    )));
                }
                Ok(pv.clone())
            }
            Init::Uniform => {
                let mut rng = self.stream(0);
                let gammas = (0..self.p_layers).map(|_| rng.gen_range(0.0..PI)).collect();
                let betas = (0..self.p_layers).map(|_| rng.gen_range(0.0..FRAC_PI_2)).collect();
                Ok(ParamVector::new(gammas, betas)?)
            }
        }
    }

    /// Stream 0 draws the initial point, stream 1 the SPSA perturbations.
    fn stream(&self, id: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(id);
        rng
    }
}

/// One optimizer iteration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceEntry {
    pub iteration: usize,
    pub backend: String,
    pub flavor: usize,
    /// Best probe of this iteration.
    pub params: ParamVector,
    pub expectation: f64,
    pub ar: f64,
    pub evaluations: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FinalEvaluation {
    pub flavor: usize,
    pub backend: String,
    pub expectation: f64,
    pub ar: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunSummary {
    pub best_params: ParamVector,
    pub best_observed_expectation: f64,
    pub best_observed_ar: f64,
    /// Mean of `reevaluations[*].ar`.
    pub final_ar: f64,
    pub reevaluations: Vec<FinalEvaluation>,
    pub cmax: u32,
    pub iterations: usize,
    pub circuit_evaluations: usize,
    pub final_evaluations: usize,
    pub rng: String,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunTrace {
    pub entries: Vec<TraceEntry>,
    pub summary: RunSummary,
}

#[derive(Serialize)]
#[serde(tag = "record", rename_all = "snake_case")]
enum TraceLine<'a> {
    Entry(&'a TraceEntry),
    Summary(&'a RunSummary),
}

impl RunTrace {
    pub fn final_ar(&self) -> f64 {
        self.summary.final_ar
    }

    /// One JSON object per iteration followed by the summary record.
    pub fn to_jsonl(&self) -> String {
        let mut out = String::new();
        for e in &self.entries {
            out.push_str(&serde_json::to_string(&TraceLine::Entry(e)).unwrap());
            out.push('\n');
        }
        out.push_str(&serde_json::to_string(&TraceLine::Summary(&self.summary)).unwrap());
        out.push('\n');
        out
    }
}

/// A circuit variant and where it runs.
#[derive(Debug, Clone)]
pub(crate) struct Lane {
    pub visible: Graph,
    pub backend: BackendProfile,
}

impl Lane {
    /// The circuit actually sent to the backend, plus the layout to read it.
    pub fn circuit(&self, params: &ParamVector) -> Result<(Circuit, Option<Vec<usize>>), ObfuscationError> {
        let c = build_qaoa(&self.visible, params)?;
        match &self.backend.coupling {
            None => Ok((c, None)),
            Some(map) => {
                let placement: Vec<usize> = (0..c.num_qubits()).collect();
                let t = transpile(&c, map, &placement)?;
                Ok((t.circuit, Some(t.final_layout)))
            }
        }
    }
}

/// Which circuits a run alternates over.
#[derive(Debug, Clone)]
pub enum Arm<'a> {
    /// The full graph on one backend.
    Original(&'a BackendProfile),
    /// A single pruned circuit on one backend, no alternation.
    PrunedOnly(&'a PrunedFlavor),
    Split(&'a SplitPlan),
}

impl Arm<'_> {
    pub(crate) fn lanes(&self, g: &Graph) -> Result<Vec<Lane>, ObfuscationError> {
        match self {
            Arm::Original(b) => Ok(vec![Lane {
                visible: g.clone(),
                backend: (*b).clone(),
            }]),
            Arm::PrunedOnly(f) => Ok(vec![Lane {
                visible: prune(g, &f.removed_edges)?,
                backend: f.backend.clone(),
            }]),
            Arm::Split(plan) => {
                plan.validate(g)?;
                plan.flavors
                    .iter()
                    .map(|f| {
                        Ok(Lane {
                            visible: f.visible_graph(g)?,
                            backend: f.backend.clone(),
                        })
                    })
                    .collect()
            }
        }
    }
}

enum Minimizer {
    Spsa(Box<Spsa>),
    NelderMead(NelderMead),
}

impl Minimizer {
    fn step(
        &mut self,
        f: &mut dyn FnMut(&[f64]) -> Result<f64, ObfuscationError>,
    ) -> Result<Vec<Probe>, ObfuscationError> {
        match self {
            Minimizer::Spsa(o) => o.step(f),
            Minimizer::NelderMead(o) => o.step(f),
        }
    }
}

/// Runs the QAOA loop on `g_full`. With `plan = None` the unobfuscated
/// circuit runs on `baseline`; otherwise iteration `t` uses flavor `t mod k`.
pub fn optimize(
    g_full: &Graph,
    plan: Option<&SplitPlan>,
    baseline: &BackendProfile,
    cfg: &OptimizerConfig,
) -> Result<RunTrace, ObfuscationError> {
    match plan {
        None => optimize_arm(g_full, &Arm::Original(baseline), cfg),
        Some(p) => optimize_arm(g_full, &Arm::Split(p), cfg),
    }
}

/// Shared loop behind every arm.
///
/// The optimizer minimizes `-E/Cmax`, where `E` is the full-graph cut
/// expectation over the samples of whichever (possibly pruned) circuit ran.
pub fn optimize_arm(g_full: &Graph, arm: &Arm<'_>, cfg: &OptimizerConfig) -> Result<RunTrace, ObfuscationError> {
    let lanes = arm.lanes(g_full)?;
    let k = lanes.len();
    if k > 1 && cfg.total_iterations < 2 * k {
        return Err(ObfuscationError::Config(format!(
            "{} iterations cannot cover {k} flavors twice",
            cfg.total_iterations
        )));
    }
    if cfg.total_iterations == 0 || cfg.shots == 0 || cfg.final_shots == 0 || cfg.p_layers == 0 {
        return Err(ObfuscationError::Config(
            "iterations, shots and layers must be positive".into(),
        ));
    }
    let (cmax, _) = max_cut_bruteforce(g_full)?;
    if cmax == 0 {
        return Err(ObfuscationError::UndefinedRatio);
    }

    // one shot stream per backend name, shared across lanes that reuse it
    let mut streams: BTreeMap<String, ChaCha8Rng> = BTreeMap::new();
    for lane in &lanes {
        streams.entry(lane.backend.name.clone()).or_insert_with(|| {
            let mut rng = ChaCha8Rng::seed_from_u64(lane.backend.seed);
            rng.set_stream(cfg.seed);
            rng
        });
    }

    let x0 = cfg.initial_params()?.to_flat();
    let mut opt = match cfg.method {
        Method::Spsa => Minimizer::Spsa(Box::new(Spsa::new(x0, cfg.spsa, cfg.stream(1)))),
        Method::NelderMead => Minimizer::NelderMead(NelderMead::new(x0, cfg.nm_step)),
    };

    let evaluate = |lane: &Lane,
                    x: &[f64],
                    shots: u64,
                    streams: &mut BTreeMap<String, ChaCha8Rng>|
     -> Result<f64, ObfuscationError> {
        let params = ParamVector::from_flat(x).map_err(|_| ObfuscationError::NonFinite(f64::NAN))?;
        let (circuit, layout) = lane.circuit(&params)?;
        let rng = streams.get_mut(&lane.backend.name).expect("stream per backend");
        let mut result = run_shots_with_rng(&circuit, &lane.backend, shots, rng)?;
        if let Some(layout) = layout {
            result = result.to_logical(&layout);
        }
        Ok(expectation_full_cost(g_full, &result)?)
    };

    let mut entries = Vec::with_capacity(cfg.total_iterations);
    let mut best: Option<(Vec<f64>, f64)> = None;
    let mut circuit_evaluations = 0usize;
    for t in 0..cfg.total_iterations {
        let flavor = t % k;
        let lane = &lanes[flavor];
        let mut objective = |x: &[f64]| -> Result<f64, ObfuscationError> {
            let e = evaluate(lane, x, cfg.shots, &mut streams)?;
            Ok(-e / cmax as f64)
        };
        let probes = match opt.step(&mut objective) {
            Ok(p) => p,
            Err(e) => {
                return Err(ObfuscationError::Diverged {
                    iteration: t,
                    reason: e.to_string(),
                    entries,
                })
            }
        };
        circuit_evaluations += probes.len();
        let top = probes
            .iter()
            .min_by(|a, b| a.value.total_cmp(&b.value))
            .expect("every step evaluates at least once");
        let expectation = -top.value * cmax as f64;
        if !expectation.is_finite() || top.x.iter().any(|v| !v.is_finite()) {
            return Err(ObfuscationError::Diverged {
                iteration: t,
                reason: "non-finite objective or parameters".into(),
                entries,
            });
        }
        entries.push(TraceEntry {
            iteration: t,
            backend: lane.backend.name.clone(),
            flavor,
            params: ParamVector::from_flat(&top.x)?,
            expectation,
            ar: approximation_ratio(expectation, cmax)?.value,
            evaluations: probes.len(),
        });
        if best.as_ref().is_none_or(|(_, e)| expectation > *e) {
            best = Some((top.x.clone(), expectation));
        }
    }

    let (best_x, best_e) = best.expect("at least one iteration");
    let mut reevaluations = Vec::with_capacity(k);
    for (flavor, lane) in lanes.iter().enumerate() {
        let e = evaluate(lane, &best_x, cfg.final_shots, &mut streams)?;
        reevaluations.push(FinalEvaluation {
            flavor,
            backend: lane.backend.name.clone(),
            expectation: e,
            ar: approximation_ratio(e, cmax)?.value,
        });
    }
    let final_ar = reevaluations.iter().map(|r| r.ar).sum::<f64>() / k as f64;
    Ok(RunTrace {
        entries,
        summary: RunSummary {
            best_params: ParamVector::from_flat(&best_x)?,
            best_observed_expectation: best_e,
            best_observed_ar: approximation_ratio(best_e, cmax)?.value,
            final_ar,
            final_evaluations: reevaluations.len(),
            reevaluations,
            cmax,
            iterations: cfg.total_iterations,
            circuit_evaluations,
            rng: RNG_ALGORITHM.to_string(),
            seed: cfg.seed,
        },
    })
}

/// One run per layer count. Run `i` uses seed `cfg.seed + i`, so a
/// single-entry sweep reproduces [`optimize`] exactly.
pub fn layer_sweep(
    g: &Graph,
    plan: &SplitPlan,
    p_values: &[usize],
    cfg: &OptimizerConfig,
) -> Result<Vec<RunTrace>, ObfuscationError> {
    if p_values.is_empty() || p_values.contains(&0) {
        return Err(ObfuscationError::Config("layer counts must be non-empty and >= 1".into()));
    }
    p_values
        .iter()
        .enumerate()
        .map(|(i, &p)| {
            let run_cfg = OptimizerConfig {
                p_layers: p,
                seed: cfg.seed.wrapping_add(i as u64),
                init: match &cfg.init {
                    Init::Fixed(pv) if pv.p() != p => Init::Uniform,
                    other => other.clone(),
                },
                ..cfg.clone()
            };
            optimize_arm(g, &Arm::Split(plan), &run_cfg)
        })
        .collect()
}
