//! Simulator for a dissipative dynamical quantum search algorithm.
//!
//! A register of n two-level systems starts in |g…g⟩, passes through a layer
//! of damped Walsh gates and then n − 1 rounds of a phase oracle followed by
//! a diffusion step. The control phase `phi = β/π` sets both gates; `phi = 1`
//! with no damping is Grover's algorithm. Each qubit may leak at its own
//! dimensionless rate ḡ_v, which makes every gate a contraction.
//!
//! ```
//! use dqsa::{report, BasisPattern, RunConfig};
//!
//! let marked = BasisPattern::parse("ege").unwrap();
//! let r = report(&RunConfig::dissipationless(marked, 1.0).unwrap()).unwrap();
//! assert!((r.marked_prob - 0.9453).abs() < 5e-4);
//! ```

pub mod cli;
pub mod config;
pub mod error;
pub mod experiments;
pub mod gates;
pub mod hamiltonian;
pub mod mat2;
pub mod search;
pub mod state;

pub use config::{load_config, parse_config, Config, ConfigFile};
pub use error::{Error, Result};
pub use gates::{
    oracle_gate, w_gate, walsh_layer, Diffusion, DissipationRates, PhasePoint, WalshLayer,
};
pub use hamiltonian::{
    build_hamiltonian, compose_w, coupling_assignment, evolve, verify_gate_realization,
    CouplingConfig,
};
pub use mat2::Mat2;
pub use num_complex::Complex64;
pub use search::{marked_amplitude_trace, report, run, ProbabilityReport, RunConfig};
pub use state::{BasisPattern, DiagonalGate, StateVector};
