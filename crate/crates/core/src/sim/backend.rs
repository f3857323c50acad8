use serde::{Deserialize, Serialize};

use super::SimError;
use crate::circuit::CouplingMap;

const DEFAULT_BACKENDS: &str = include_str!("../../data/backends.json");

/// Identifier recorded with every run so shot streams can be reproduced.
pub const RNG_ALGORITHM: &str = "chacha8";

/// Per-gate depolarizing and readout error rates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoiseModel {
    pub p1: f64,
    pub p2: f64,
    pub readout_flip: f64,
}

impl NoiseModel {
    pub fn new(p1: f64, p2: f64, readout_flip: f64) -> Result<Self, SimError> {
        let m = NoiseModel { p1, p2, readout_flip };
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<(), SimError> {
        for (name, p) in [("p1", self.p1), ("p2", self.p2), ("readout_flip", self.readout_flip)] {
            if !(0.0..=0.5).contains(&p) {
                return Err(SimError::Noise(format!("{name} = {p} is outside [0, 0.5]")));
            }
        }
        Ok(())
    }

    pub fn has_gate_noise(&self) -> bool {
        self.p1 > 0.0 || self.p2 > 0.0
    }
}

/// A simulated hardware endpoint.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "BackendEntry", into = "BackendEntry")]
pub struct BackendProfile {
    pub name: String,
    /// `None` is an ideal device.
    pub noise: Option<NoiseModel>,
    /// `None` is all-to-all connectivity.
    pub coupling: Option<CouplingMap>,
    pub seed: u64,
}

impl BackendProfile {
    pub fn ideal(name: impl Into<String>, seed: u64) -> Self {
        BackendProfile {
            name: name.into(),
            noise: None,
            coupling: None,
            seed,
        }
    }

    pub fn noisy(name: impl Into<String>, noise: NoiseModel, seed: u64) -> Self {
        BackendProfile {
            name: name.into(),
            noise: Some(noise),
            coupling: None,
            seed,
        }
    }

    pub fn with_coupling(mut self, map: CouplingMap) -> Self {
        self.coupling = Some(map);
        self
    }

    pub fn is_ideal(&self) -> bool {
        self.noise.is_none()
    }

    /// The same endpoint with noise stripped, keeping name, coupling and seed.
    pub fn as_ideal(&self) -> Self {
        BackendProfile {
            noise: None,
            ..self.clone()
        }
    }
}

/// Flat JSON shape: missing error rates count as zero, and an entry with no
/// error rates at all is ideal.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct BackendEntry {
    name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    p1: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    p2: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    readout_flip: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    coupling: Option<CouplingMap>,
    seed: u64,
}

impl TryFrom<BackendEntry> for BackendProfile {
    type Error = SimError;
    fn try_from(e: BackendEntry) -> Result<Self, SimError> {
        let noise = if e.p1.is_none() && e.p2.is_none() && e.readout_flip.is_none() {
            None
        } else {
            Some(NoiseModel::new(
                e.p1.unwrap_or(0.0),
                e.p2.unwrap_or(0.0),
                e.readout_flip.unwrap_or(0.0),
            )?)
        };
        Ok(BackendProfile {
            name: e.name,
            noise,
            coupling: e.coupling,
            seed: e.seed,
        })
    }
}

impl From<BackendProfile> for BackendEntry {
    fn from(b: BackendProfile) -> Self {
        BackendEntry {
            name: b.name,
            p1: b.noise.map(|n| n.p1),
            p2: b.noise.map(|n| n.p2),
            readout_flip: b.noise.map(|n| n.readout_flip),
            coupling: b.coupling,
            seed: b.seed,
        }
    }
}

/// A named collection of backends, as stored in a profile file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BackendConfig {
    #[serde(default = "one")]
    pub version: u32,
    pub backends: Vec<BackendProfile>,
}

fn one() -> u32 {
    1
}

impl BackendConfig {
    pub fn from_json(text: &str) -> Result<Self, SimError> {
        let cfg: BackendConfig =
            serde_json::from_str(text).map_err(|e| SimError::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// The bundled HW1/HW2 profiles plus two ideal endpoints.
    pub fn bundled() -> Self {
        BackendConfig::from_json(DEFAULT_BACKENDS).expect("bundled backend profiles are valid")
    }

    pub fn validate(&self) -> Result<(), SimError> {
        for (i, b) in self.backends.iter().enumerate() {
            if self.backends[..i].iter().any(|o| o.name == b.name) {
                return Err(SimError::Config(format!("duplicate backend name `{}`", b.name)));
            }
        }
        Ok(())
    }

    pub fn get(&self, name: &str) -> Result<&BackendProfile, SimError> {
        self.backends
            .iter()
            .find(|b| b.name == name)
            .ok_or_else(|| SimError::Config(format!("unknown backend `{name}`")))
    }
}
