//! Dense statevector simulation, shot sampling and trajectory noise.

mod backend;
mod shots;
mod state;

pub use backend::{BackendConfig, BackendProfile, NoiseModel, RNG_ALGORITHM};
pub use shots::{
    backend_rng, expectation_full_cost, run_shots, run_shots_with_rng, ShotResult, DEFAULT_SHOTS,
};
pub use state::{run_statevector, Pauli, StateVector, MAX_QUBITS};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SimError {
    #[error("{qubits} qubits exceed the simulator capacity of {max}")]
    Capacity { qubits: usize, max: usize },
    #[error("circuit does not conform to the coupling map of backend `{0}`; transpile it first")]
    NotConformant(String),
    #[error("bitstring length {got} does not match graph size {expected}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("noise model: {0}")]
    Noise(String),
    #[error("backend config: {0}")]
    Config(String),
    #[error("shot counts: {0}")]
    Counts(String),
}
