//! JSON run and sweep descriptions.
//!
//! ```json
//! {"n": 3, "marked": "ege", "phi": 1.0, "gammas": [0, 0, 0], "iterations": 2}
//! {"n": 2, "marked": "ee", "phi": {"start": 0, "stop": 1, "steps": 101}}
//! {"n": 4, "marked": "egee", "phi": 0.45008, "gbar": {"start": 0, "stop": 1, "steps": 11}, "qubits": [1, 2, 4]}
//! ```
//!
//! A scalar `phi` describes a single run; a grid `phi` a phase sweep; a `gbar`
//! grid a rate sweep at the scalar `phi`, over all qubits or only `qubits`.
//! Missing `gammas` means no dissipation.

use crate::error::{Error, Result};
use crate::experiments::{Grid, RateTarget, SweepAxis, SweepSpec};
use crate::gates::{DissipationRates, PhasePoint};
use crate::search::{default_iterations, RunConfig};
use crate::state::BasisPattern;
use serde::{Deserialize, Serialize};
use std::path::Path;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridFile {
    pub start: f64,
    pub stop: f64,
    pub steps: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PhiFile {
    Value(f64),
    Grid(GridFile),
}

/// The on-disk schema.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub n: usize,
    pub marked: String,
    pub phi: PhiFile,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gammas: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub iterations: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gbar: Option<GridFile>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub qubits: Option<Vec<usize>>,
}

/// A validated configuration.
#[derive(Debug, Clone, PartialEq)]
pub enum Config {
    Run(RunConfig),
    Sweep(SweepSpec),
}

fn field_error(field: &str, e: impl std::fmt::Display) -> Error {
    Error::MalformedConfig(format!("field `{field}`: {e}"))
}

impl ConfigFile {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| {
            Error::MalformedConfig(format!("line {}, column {}: {e}", e.line(), e.column()))
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    pub fn validate(&self) -> Result<Config> {
        let marked = BasisPattern::parse(&self.marked).map_err(|e| field_error("marked", e))?;
        if marked.len() != self.n {
            return Err(field_error(
                "marked",
                format!(
                    "{} has {} symbols but n = {}",
                    self.marked,
                    marked.len(),
                    self.n
                ),
            ));
        }
        let rates = match &self.gammas {
            Some(g) if g.len() != self.n => {
                return Err(field_error(
                    "gammas",
                    format!("{} values for n = {}", g.len(), self.n),
                ))
            }
            Some(g) => DissipationRates::new(g.clone()),
            None => DissipationRates::zeros(self.n),
        }
        .map_err(|e| field_error("gammas", e))?;
        if let Some(&g) = rates.as_slice().iter().find(|&&g| g >= 4.0) {
            return Err(field_error("gammas", Error::OverdampedQubit(g)));
        }
        if self.iterations == Some(0) {
            return Err(field_error("iterations", "must be at least 1"));
        }
        let grid = |g: &GridFile, name: &str| {
            Grid::new(g.start, g.stop, g.steps).map_err(|e| field_error(name, e))
        };

        match (self.phi, &self.gbar) {
            (PhiFile::Value(phi), None) => {
                if self.qubits.is_some() {
                    return Err(field_error("qubits", "only valid with `gbar`"));
                }
                let phase = PhasePoint::new(phi, self.n).map_err(|e| field_error("phi", e))?;
                let iterations = self
                    .iterations
                    .unwrap_or_else(|| default_iterations(self.n));
                Ok(Config::Run(RunConfig::with_iterations(
                    marked, phase, rates, iterations,
                )?))
            }
            (PhiFile::Grid(g), None) => {
                if self.qubits.is_some() {
                    return Err(field_error("qubits", "only valid with `gbar`"));
                }
                let mut spec = SweepSpec::phase(marked, rates, grid(&g, "phi")?)
                    .map_err(|e| field_error("phi", e))?;
                spec.iterations = self.iterations;
                Ok(Config::Sweep(spec))
            }
            (PhiFile::Value(phi), Some(g)) => {
                let target = match &self.qubits {
                    Some(qs) => RateTarget::Qubits(qs.clone()),
                    None => RateTarget::Uniform,
                };
                let mut spec = SweepSpec::dissipation(marked, phi, target, rates, grid(g, "gbar")?)
                    .map_err(|e| field_error("gbar", e))?;
                spec.iterations = self.iterations;
                Ok(Config::Sweep(spec))
            }
            (PhiFile::Grid(_), Some(_)) => {
                Err(field_error("phi", "must be a number when `gbar` is a grid"))
            }
        }
    }
}

impl From<&RunConfig> for ConfigFile {
    fn from(c: &RunConfig) -> Self {
        ConfigFile {
            n: c.num_qubits(),
            marked: c.marked.to_string(),
            phi: PhiFile::Value(c.phase.phi()),
            gammas: Some(c.rates.as_slice().to_vec()),
            iterations: Some(c.iterations),
            gbar: None,
            qubits: None,
        }
    }
}

impl From<&SweepSpec> for ConfigFile {
    fn from(s: &SweepSpec) -> Self {
        let grid = GridFile {
            start: s.grid.start,
            stop: s.grid.stop,
            steps: s.grid.steps,
        };
        let (phi, gbar, qubits) = match &s.axis {
            SweepAxis::Phase => (PhiFile::Grid(grid), None, None),
            SweepAxis::Dissipation { phi, target } => {
                let qubits = match target {
                    RateTarget::Uniform => None,
                    RateTarget::Qubits(q) => Some(q.clone()),
                };
                (PhiFile::Value(*phi), Some(grid), qubits)
            }
        };
        ConfigFile {
            n: s.num_qubits(),
            marked: s.marked.to_string(),
            phi,
            gammas: Some(s.rates.as_slice().to_vec()),
            iterations: s.iterations,
            gbar,
            qubits,
        }
    }
}

impl From<&Config> for ConfigFile {
    fn from(c: &Config) -> Self {
        match c {
            Config::Run(r) => r.into(),
            Config::Sweep(s) => s.into(),
        }
    }
}

pub fn parse_config(text: &str) -> Result<Config> {
    ConfigFile::from_json(text)?.validate()
}

pub fn load_config(path: impl AsRef<Path>) -> Result<Config> {
    let path = path.as_ref();
    let text =
        std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    parse_config(&text)
}
