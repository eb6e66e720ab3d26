//! The search iteration and its probability reports.

use crate::error::{Error, Result};
use crate::gates::{oracle_gate, Diffusion, DissipationRates, PhasePoint, WalshLayer};
use crate::state::{check_same, BasisPattern, DiagonalGate, StateVector};
use num_complex::Complex64;
use serde::Serialize;

/// One search run: marked pattern, control phase, rates and iteration count.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub marked: BasisPattern,
    pub phase: PhasePoint,
    pub rates: DissipationRates,
    pub iterations: usize,
}

/// Default iteration count n − 1 (at least one).
pub fn default_iterations(n: usize) -> usize {
    n.saturating_sub(1).max(1)
}

impl RunConfig {
    /// Builds a config with the default iteration count.
    pub fn new(marked: BasisPattern, phi: f64, rates: DissipationRates) -> Result<Self> {
        let n = marked.len();
        let phase = PhasePoint::new(phi, n)?;
        RunConfig::with_iterations(marked, phase, rates, default_iterations(n))
    }

    pub fn with_iterations(
        marked: BasisPattern,
        phase: PhasePoint,
        rates: DissipationRates,
        iterations: usize,
    ) -> Result<Self> {
        let config = RunConfig {
            marked,
            phase,
            rates,
            iterations,
        };
        config.validate()?;
        Ok(config)
    }

    /// Zero-dissipation config at the given phase.
    pub fn dissipationless(marked: BasisPattern, phi: f64) -> Result<Self> {
        let rates = DissipationRates::zeros(marked.len())?;
        RunConfig::new(marked, phi, rates)
    }

    pub fn num_qubits(&self) -> usize {
        self.marked.len()
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.marked.len();
        check_same(n, self.phase.num_qubits())?;
        check_same(n, self.rates.len())?;
        if let Some(&g) = self.rates.as_slice().iter().find(|&&g| g >= 4.0) {
            return Err(Error::OverdampedQubit(g));
        }
        if self.iterations == 0 {
            return Err(Error::MalformedConfig(
                "iterations must be at least 1".into(),
            ));
        }
        Ok(())
    }
}

/// Prebuilt gates for one config; immutable and shareable across threads.
#[derive(Debug, Clone)]
pub struct SearchCircuit {
    walsh: WalshLayer,
    oracle: DiagonalGate,
    diffusion: Diffusion,
    iterations: usize,
}

impl SearchCircuit {
    pub fn new(config: &RunConfig) -> Result<Self> {
        config.validate()?;
        Ok(SearchCircuit {
            walsh: WalshLayer::new(&config.rates)?,
            oracle: oracle_gate(&config.marked, &config.phase, &config.rates)?,
            diffusion: Diffusion::new(&config.phase, &config.rates)?,
            iterations: config.iterations,
        })
    }

    /// W|g…g⟩ followed by `iterations` rounds of D·P_x, calling `observe`
    /// after every round.
    pub fn run_with<F: FnMut(&StateVector)>(&self, mut observe: F) -> Result<StateVector> {
        let mut state = StateVector::ground(self.walsh.num_qubits())?;
        self.walsh.apply(&mut state)?;
        for _ in 0..self.iterations {
            state.apply_diagonal(&self.oracle)?;
            self.diffusion.apply(&mut state)?;
            observe(&state);
        }
        Ok(state)
    }

    pub fn run(&self) -> Result<StateVector> {
        self.run_with(|_| {})
    }
}

/// Final state of the search.
pub fn run(config: &RunConfig) -> Result<StateVector> {
    SearchCircuit::new(config)?.run()
}

/// Marked and remaining-state probabilities of a finished run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProbabilityReport {
    pub marked: BasisPattern,
    pub marked_prob: f64,
    /// Every other pattern in index order.
    pub unmarked: Vec<(BasisPattern, f64)>,
    pub survival: f64,
}

impl ProbabilityReport {
    pub fn from_state(state: &StateVector, marked: &BasisPattern) -> Result<Self> {
        let n = state.num_qubits();
        check_same(n, marked.len())?;
        let probs = state.probabilities();
        let target = marked.index();
        let mut unmarked = Vec::with_capacity(probs.len() - 1);
        for (i, &p) in probs.iter().enumerate() {
            if i != target {
                unmarked.push((BasisPattern::from_index(n, i)?, p));
            }
        }
        Ok(ProbabilityReport {
            marked: marked.clone(),
            marked_prob: probs[target],
            unmarked,
            survival: probs.iter().sum(),
        })
    }

    pub fn sum_unmarked(&self) -> f64 {
        self.unmarked.iter().map(|(_, p)| p).sum()
    }

    pub fn unmarked_values(&self) -> Vec<f64> {
        self.unmarked.iter().map(|&(_, p)| p).collect()
    }
}

pub fn report(config: &RunConfig) -> Result<ProbabilityReport> {
    ProbabilityReport::from_state(&run(config)?, &config.marked)
}

/// Marked-state amplitude after each iteration.
pub fn marked_amplitude_trace(config: &RunConfig) -> Result<Vec<Complex64>> {
    let target = config.marked.index();
    let mut trace = Vec::with_capacity(config.iterations);
    SearchCircuit::new(config)?.run_with(|s| trace.push(s.amplitudes()[target]))?;
    Ok(trace)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pat(s: &str) -> BasisPattern {
        BasisPattern::parse(s).unwrap()
    }

    fn grover(n: usize) -> f64 {
        let theta = (2f64.powf(-(n as f64) / 2.0)).asin();
        ((2.0 * (n - 1) as f64 + 1.0) * theta).sin().powi(2)
    }

    #[test]
    fn one_grover_step_on_two_qubits() {
        let config = RunConfig::dissipationless(pat("ee"), 1.0).unwrap();
        assert_eq!(config.iterations, 1);
        let state = run(&config).unwrap();
        let amp = state.amplitude(&pat("ee"));
        assert!((amp.norm() - 1.0).abs() < 1e-12);
        let trace = marked_amplitude_trace(&config).unwrap();
        assert_eq!(trace.len(), 1);
        // real, unit modulus: −1 up to the global sign of D
        assert!((trace[0].norm() - 1.0).abs() < 1e-12 && trace[0].im.abs() < 1e-12);
    }

    #[test]
    fn zero_phase_gives_uniform_state() {
        for n in [2, 4, 5] {
            let r =
                report(&RunConfig::dissipationless(BasisPattern::ground(n).unwrap(), 0.0).unwrap())
                    .unwrap();
            let p = 2f64.powi(-(n as i32));
            assert!((r.marked_prob - p).abs() < 1e-12);
            assert!(r.unmarked.iter().all(|(_, q)| (q - p).abs() < 1e-12));
        }
    }

    #[test]
    fn grover_closed_form() {
        for n in 2..=9 {
            let marked = BasisPattern::from_index(n, (5 * n) % (1 << n)).unwrap();
            let r = report(&RunConfig::dissipationless(marked, 1.0).unwrap()).unwrap();
            assert!((r.marked_prob - grover(n)).abs() < 1e-12, "n = {n}");
            assert!((r.survival - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn report_layout() {
        let r = report(&RunConfig::dissipationless(pat("ege"), 0.4).unwrap()).unwrap();
        assert_eq!(r.unmarked.len(), 7);
        let labels: Vec<String> = r.unmarked.iter().map(|(p, _)| p.to_string()).collect();
        assert_eq!(labels, ["ggg", "gge", "geg", "gee", "egg", "eeg", "eee"]);
        assert!((r.marked_prob + r.sum_unmarked() - r.survival).abs() < 1e-15);
    }

    #[test]
    fn weak_damping_two_qubits() {
        let rates = DissipationRates::new(vec![1.0 / 113.0, 1.0 / 90.0]).unwrap();
        let r = report(&RunConfig::new(pat("ee"), 1.0, rates).unwrap()).unwrap();
        assert!((r.marked_prob - 0.9618).abs() < 2e-3);
        assert!(r.unmarked.iter().all(|(_, q)| *q <= 1e-4));
        assert!(r.survival < 1.0);
    }

    #[test]
    fn trace_grows_monotonically_in_grover_limit() {
        let mut config = RunConfig::dissipationless(pat("egegg"), 1.0).unwrap();
        config.iterations = 4;
        let trace = marked_amplitude_trace(&config).unwrap();
        let mags: Vec<f64> = trace.iter().map(|a| a.norm()).collect();
        assert!(mags.windows(2).all(|w| w[1] > w[0]));
        let last = report(&config).unwrap().marked_prob;
        assert!((mags[3] * mags[3] - last).abs() < 1e-12);
    }

    #[test]
    fn config_validation() {
        let rates = DissipationRates::zeros(3).unwrap();
        assert!(matches!(
            RunConfig::new(pat("ee"), 1.0, rates),
            Err(Error::DimensionMismatch { .. })
        ));
        let phase = PhasePoint::new(1.0, 2).unwrap();
        assert!(matches!(
            RunConfig::with_iterations(pat("ee"), phase, DissipationRates::zeros(2).unwrap(), 0),
            Err(Error::MalformedConfig(_))
        ));
        assert_eq!(default_iterations(1), 1);
        assert_eq!(default_iterations(6), 5);
    }
}
