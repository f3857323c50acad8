use serde::{Deserialize, Serialize};

use super::{Circuit, CircuitError, Gate};
use crate::graph::Graph;

/// The 2p QAOA angles: one cost angle and one mixer angle per layer.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParamVector {
    pub gammas: Vec<f64>,
    pub betas: Vec<f64>,
}

impl ParamVector {
    pub fn new(gammas: Vec<f64>, betas: Vec<f64>) -> Result<Self, CircuitError> {
        let pv = ParamVector { gammas, betas };
        pv.validate()?;
        Ok(pv)
    }

    pub fn validate(&self) -> Result<(), CircuitError> {
        if self.gammas.is_empty() || self.gammas.len() != self.betas.len() {
            return Err(CircuitError::BadParams {
                gammas: self.gammas.len(),
                betas: self.betas.len(),
            });
        }
        if let Some(&a) = self.gammas.iter().chain(&self.betas).find(|a| !a.is_finite()) {
            return Err(CircuitError::NonFiniteAngle(a));
        }
        Ok(())
    }

    pub fn p(&self) -> usize {
        self.gammas.len()
    }

    /// Flat layout `[γ_1..γ_p, β_1..β_p]` used by the optimizers.
    pub fn to_flat(&self) -> Vec<f64> {
        self.gammas.iter().chain(&self.betas).copied().collect()
    }

    pub fn from_flat(x: &[f64]) -> Result<Self, CircuitError> {
        if !x.len().is_multiple_of(2) {
            return Err(CircuitError::BadParams {
                gammas: x.len() / 2 + 1,
                betas: x.len() / 2,
            });
        }
        let p = x.len() / 2;
        ParamVector::new(x[..p].to_vec(), x[p..].to_vec())
    }
}

/// Builds the p-layer MaxCut QAOA circuit.
///
/// Layout: `H` on every qubit, then per layer a `CX(u,v) RZ(v, 2γ) CX(u,v)`
/// block for each edge in canonical order followed by `RX(q, 2β)` on every
/// qubit, then a single measurement. The cost block implements
/// `exp(-iγ Z_u Z_v)` and the mixer `exp(-iβ X)`.
pub fn build_qaoa(g: &Graph, params: &ParamVector) -> Result<Circuit, CircuitError> {
    params.validate()?;
    let n = g.n();
    if n < 2 {
        return Err(CircuitError::TooFewQubits(n));
    }
    let mut gates = Vec::with_capacity(n + params.p() * (3 * g.num_edges() + n) + 1);
    gates.extend((0..n).map(Gate::H));
    for (&gamma, &beta) in params.gammas.iter().zip(&params.betas) {
        for e in g.edges() {
            gates.push(Gate::Cx(e.u, e.v));
            gates.push(Gate::Rz(e.v, 2.0 * gamma));
            gates.push(Gate::Cx(e.u, e.v));
        }
        gates.extend((0..n).map(|q| Gate::Rx(q, 2.0 * beta)));
    }
    gates.push(Gate::MeasureAll);
    Circuit::from_gates(n, gates)
}
