use std::collections::{BTreeMap, HashMap};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::state::{run_statevector, Pauli, StateVector};
use super::{BackendProfile, NoiseModel, SimError};
use crate::circuit::{Circuit, Gate};
use crate::graph::Graph;

/// Default shots per objective evaluation.
pub const DEFAULT_SHOTS: u64 = 4096;

/// Measurement histogram. Keys are bitstrings where character `i` is qubit `i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShotResult {
    pub counts: BTreeMap<String, u64>,
    pub shots: u64,
}

impl ShotResult {
    /// Builds a result from counts, checking that all keys have one length
    /// and the counts add up.
    pub fn new(counts: BTreeMap<String, u64>, shots: u64) -> Result<Self, SimError> {
        let total: u64 = counts.values().sum();
        if total != shots || shots == 0 {
            return Err(SimError::Counts(format!("counts sum to {total}, shots = {shots}")));
        }
        let mut lens = counts.keys().map(|k| k.len());
        let first = lens.next().unwrap_or(0);
        if lens.any(|l| l != first)
            || counts.keys().any(|k| k.chars().any(|c| c != '0' && c != '1'))
        {
            return Err(SimError::Counts("malformed bitstring key".into()));
        }
        Ok(ShotResult { counts, shots })
    }

    fn from_indices(hist: &BTreeMap<u64, u64>, num_bits: usize, shots: u64) -> Self {
        let counts = hist
            .iter()
            .map(|(&z, &c)| (index_to_bitstring(z, num_bits), c))
            .collect();
        ShotResult { counts, shots }
    }

    pub fn num_bits(&self) -> usize {
        self.counts.keys().next().map_or(0, |k| k.len())
    }

    pub fn frequency(&self, bits: &str) -> f64 {
        self.counts.get(bits).copied().unwrap_or(0) as f64 / self.shots as f64
    }

    /// Reads a physical-qubit histogram back in logical order:
    /// logical qubit `i` is physical bit `layout[i]`.
    pub fn to_logical(&self, layout: &[usize]) -> ShotResult {
        let mut counts = BTreeMap::new();
        for (k, &c) in &self.counts {
            let bytes = k.as_bytes();
            let logical: String = layout.iter().map(|&p| bytes[p] as char).collect();
            *counts.entry(logical).or_insert(0) += c;
        }
        ShotResult {
            counts,
            shots: self.shots,
        }
    }
}

fn index_to_bitstring(z: u64, n: usize) -> String {
    (0..n).map(|q| if (z >> q) & 1 == 1 { '1' } else { '0' }).collect()
}

/// Mean full-graph cut value over the histogram.
pub fn expectation_full_cost(g_full: &Graph, result: &ShotResult) -> Result<f64, SimError> {
    let n = g_full.n();
    let mut total = 0u64;
    for (bits, &count) in &result.counts {
        if bits.len() != n {
            return Err(SimError::LengthMismatch {
                expected: n,
                got: bits.len(),
            });
        }
        let b = bits.as_bytes();
        let cut = g_full.edges().iter().filter(|e| b[e.u] != b[e.v]).count() as u64;
        total += cut * count;
    }
    Ok(total as f64 / result.shots as f64)
}

/// Fresh shot stream for a backend.
pub fn backend_rng(backend: &BackendProfile) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(backend.seed)
}

/// Samples `shots` measurements using the backend's own seed.
///
/// Identical `(seed, circuit, shots)` always give the same histogram.
pub fn run_shots(c: &Circuit, backend: &BackendProfile, shots: u64) -> Result<ShotResult, SimError> {
    run_shots_with_rng(c, backend, shots, &mut backend_rng(backend))
}

/// Like [`run_shots`], drawing from a caller-owned stream.
///
/// Gate noise is a Pauli-trajectory unravelling of the depolarizing channel:
/// after every gate each touched qubit suffers, with probability `p1` (one
/// qubit gate) or `p2` (CX), an X, Y or Z picked uniformly. The error pattern
/// of a shot is drawn first; shots without errors sample the ideal
/// distribution, and each distinct pattern is simulated once and cached.
/// Readout flips each bit independently with probability `readout_flip`.
pub fn run_shots_with_rng<R: Rng>(
    c: &Circuit,
    backend: &BackendProfile,
    shots: u64,
    rng: &mut R,
) -> Result<ShotResult, SimError> {
    if shots == 0 {
        return Err(SimError::Counts("shots must be at least 1".into()));
    }
    if let Some(map) = &backend.coupling {
        if !map.conforms(c) {
            return Err(SimError::NotConformant(backend.name.clone()));
        }
    }
    let n = c.num_qubits();
    let ideal = cumulative(&run_statevector(c)?);
    let noise = backend.noise.unwrap_or(NoiseModel {
        p1: 0.0,
        p2: 0.0,
        readout_flip: 0.0,
    });

    let mut hist: BTreeMap<u64, u64> = BTreeMap::new();
    let mut cache: HashMap<Vec<(u32, u8, u8)>, Vec<f64>> = HashMap::new();
    let mut pattern: Vec<(u32, u8, u8)> = Vec::new();
    for _ in 0..shots {
        pattern.clear();
        if noise.has_gate_noise() {
            draw_error_pattern(c, &noise, rng, &mut pattern);
        }
        let cdf = if pattern.is_empty() {
            &ideal
        } else {
            cache
                .entry(pattern.clone())
                .or_insert_with(|| cumulative(&trajectory(c, &pattern)))
        };
        let mut z = sample(cdf, rng.gen::<f64>());
        if noise.readout_flip > 0.0 {
            for q in 0..n {
                if rng.gen::<f64>() < noise.readout_flip {
                    z ^= 1 << q;
                }
            }
        }
        *hist.entry(z).or_insert(0) += 1;
    }
    Ok(ShotResult::from_indices(&hist, n, shots))
}

fn draw_error_pattern<R: Rng>(
    c: &Circuit,
    noise: &NoiseModel,
    rng: &mut R,
    out: &mut Vec<(u32, u8, u8)>,
) {
    for (i, g) in c.gates().iter().enumerate() {
        let (p, qubits): (f64, [Option<usize>; 2]) = match *g {
            Gate::H(q) | Gate::Rx(q, _) | Gate::Rz(q, _) => (noise.p1, [Some(q), None]),
            Gate::Cx(a, b) => (noise.p2, [Some(a), Some(b)]),
            Gate::MeasureAll => continue,
        };
        for q in qubits.into_iter().flatten() {
            if rng.gen::<f64>() < p {
                out.push((i as u32, q as u8, rng.gen_range(0..3u8)));
            }
        }
    }
}

fn trajectory(c: &Circuit, pattern: &[(u32, u8, u8)]) -> StateVector {
    let mut sv = StateVector::zero(c.num_qubits()).expect("capacity checked by ideal run");
    let mut errs = pattern.iter().peekable();
    for (i, g) in c.gates().iter().enumerate() {
        sv.apply(g);
        while let Some(&&(gi, q, p)) = errs.peek() {
            if gi as usize != i {
                break;
            }
            let pauli = match p {
                0 => Pauli::X,
                1 => Pauli::Y,
                _ => Pauli::Z,
            };
            sv.apply_pauli(q as usize, pauli);
            errs.next();
        }
    }
    sv
}

fn cumulative(sv: &StateVector) -> Vec<f64> {
    let mut acc = 0.0;
    sv.amplitudes()
        .iter()
        .map(|a| {
            acc += a.norm_sqr();
            acc
        })
        .collect()
}

fn sample(cdf: &[f64], u: f64) -> u64 {
    let total = *cdf.last().unwrap();
    let idx = cdf.partition_point(|&c| c <= u * total);
    idx.min(cdf.len() - 1) as u64
}
