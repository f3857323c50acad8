//! Gate-level circuit IR.
//!
//! Circuits only carry bound numeric angles. The text form produced by
//! [`serialize`] is what leaves the client and what an untrusted provider
//! (and the adversary module) gets to see.

mod qaoa;
mod routing;
mod text;

pub use qaoa::{build_qaoa, ParamVector};
pub use routing::{transpile, CouplingMap, Transpiled};
pub use text::{parse, serialize};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CircuitError {
    #[error("qubit {qubit} out of range for a {num_qubits}-qubit circuit")]
    QubitOutOfRange { qubit: usize, num_qubits: usize },
    #[error("two-qubit gate on a single qubit {0}")]
    RepeatedQubit(usize),
    #[error("non-finite angle {0}")]
    NonFiniteAngle(f64),
    #[error("gate after the final measurement")]
    GateAfterMeasure,
    #[error("parameter vector needs p >= 1 with equal gamma/beta lengths (got {gammas}/{betas})")]
    BadParams { gammas: usize, betas: usize },
    #[error("QAOA needs at least 2 qubits, graph has {0} nodes")]
    TooFewQubits(usize),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("coupling map: {0}")]
    Coupling(String),
    #[error("routing: {0}")]
    Routing(String),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Gate {
    H(usize),
    Rx(usize, f64),
    Rz(usize, f64),
    /// Control, target.
    Cx(usize, usize),
    MeasureAll,
}

impl Gate {
    pub fn is_two_qubit(&self) -> bool {
        matches!(self, Gate::Cx(..))
    }

    /// Qubits touched by the gate; empty for the measurement.
    pub fn qubits(&self) -> Vec<usize> {
        match *self {
            Gate::H(q) | Gate::Rx(q, _) | Gate::Rz(q, _) => vec![q],
            Gate::Cx(a, b) => vec![a, b],
            Gate::MeasureAll => vec![],
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Circuit {
    num_qubits: usize,
    gates: Vec<Gate>,
}

impl Circuit {
    pub fn new(num_qubits: usize) -> Self {
        Circuit {
            num_qubits,
            gates: Vec::new(),
        }
    }

    pub fn from_gates(num_qubits: usize, gates: Vec<Gate>) -> Result<Self, CircuitError> {
        let mut c = Circuit::new(num_qubits);
        for g in gates {
            c.push(g)?;
        }
        Ok(c)
    }

    /// Appends a gate after checking qubit indices, angles and the
    /// measure-last rule.
    pub fn push(&mut self, gate: Gate) -> Result<(), CircuitError> {
        if self.is_measured() {
            return Err(CircuitError::GateAfterMeasure);
        }
        let check = |q: usize| {
            if q < self.num_qubits {
                Ok(())
            } else {
                Err(CircuitError::QubitOutOfRange {
                    qubit: q,
                    num_qubits: self.num_qubits,
                })
            }
        };
        match gate {
            Gate::H(q) => check(q)?,
            Gate::Rx(q, a) | Gate::Rz(q, a) => {
                check(q)?;
                if !a.is_finite() {
                    return Err(CircuitError::NonFiniteAngle(a));
                }
            }
            Gate::Cx(a, b) => {
                check(a)?;
                check(b)?;
                if a == b {
                    return Err(CircuitError::RepeatedQubit(a));
                }
            }
            Gate::MeasureAll => {}
        }
        self.gates.push(gate);
        Ok(())
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn is_measured(&self) -> bool {
        matches!(self.gates.last(), Some(Gate::MeasureAll))
    }

    pub fn one_qubit_count(&self) -> usize {
        self.gates
            .iter()
            .filter(|g| matches!(g, Gate::H(_) | Gate::Rx(..) | Gate::Rz(..)))
            .count()
    }

    pub fn two_qubit_count(&self) -> usize {
        self.gates.iter().filter(|g| g.is_two_qubit()).count()
    }

    /// Longest chain of gates sharing qubits; the measurement is not counted.
    pub fn depth(&self) -> usize {
        let mut level = vec![0usize; self.num_qubits];
        for g in &self.gates {
            let qs = g.qubits();
            if qs.is_empty() {
                continue;
            }
            let d = qs.iter().map(|&q| level[q]).max().unwrap_or(0) + 1;
            for q in qs {
                level[q] = d;
            }
        }
        level.into_iter().max().unwrap_or(0)
    }
}
