//! Ising-type diagonal Hamiltonians and the synthesis of the controlled-phase
//! oracles from σz coupling constants.
//!
//! The Hamiltonian is
//!
//! ```text
//! H = −Σ_k Σ_{s_1..s_k} J_{s_1..s_k} σz^{s_1}···σz^{s_k} − (i/2) Σ_v ḡ_v σ+^v σ−^v
//! ```
//!
//! with σz|e⟩ = +|e⟩. Everything is diagonal in the computational basis, so
//! time evolution is entrywise exponentiation.
//!
//! For n = 2, 3, 4 the coupling tables below pick one concrete solution of the
//! published coupling conditions for each marked pattern. The conditions fix
//! sums over index permutations rather than the individual components, so the
//! canonical choice spreads every sum evenly over its ordered tuples and
//! zeroes the components with repeated indices (other than the J_rr and J_rrrr
//! terms that set the energy scale θ_N = 1).

use crate::error::{Error, Result};
use crate::gates::{oracle_gate, xi_bar, DissipationRates, PhasePoint};
use crate::mat2::Mat2;
use crate::state::{check_same, check_size, BasisPattern, DiagonalGate};
use num_complex::Complex64;
use std::collections::BTreeMap;
use std::f64::consts::PI;

/// Tolerance at which a synthesized gate counts as realized.
pub const REALIZATION_TOLERANCE: f64 = 1e-10;

/// Sparse coupling constants keyed by ordered, 1-based qubit index tuples.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct CouplingConfig {
    n: usize,
    terms: BTreeMap<Vec<usize>, f64>,
}

impl CouplingConfig {
    pub fn new(n: usize) -> Result<Self> {
        check_size(n)?;
        Ok(CouplingConfig {
            n,
            terms: BTreeMap::new(),
        })
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn set(&mut self, indices: &[usize], value: f64) -> Result<()> {
        if indices.is_empty() {
            return Err(Error::MalformedConfig("empty coupling index tuple".into()));
        }
        if let Some(&bad) = indices.iter().find(|&&s| s == 0 || s > self.n) {
            return Err(Error::QubitOutOfRange {
                qubit: bad,
                n: self.n,
            });
        }
        if !value.is_finite() {
            return Err(Error::MalformedConfig(format!(
                "coupling {indices:?} is not finite"
            )));
        }
        if value == 0.0 {
            self.terms.remove(indices);
        } else {
            self.terms.insert(indices.to_vec(), value);
        }
        Ok(())
    }

    /// J for an ordered index tuple; unset components are zero.
    pub fn get(&self, indices: &[usize]) -> f64 {
        self.terms.get(indices).copied().unwrap_or(0.0)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[usize], f64)> {
        self.terms.iter().map(|(k, &v)| (k.as_slice(), v))
    }

    /// θ_N as the sum of the even-power self couplings J_rr (+ J_rrrr).
    pub fn theta(&self) -> f64 {
        self.terms
            .iter()
            .filter(|(k, _)| k.len() % 2 == 0 && k.iter().all(|&s| s == k[0]))
            .map(|(_, v)| v)
            .sum()
    }
}

/// Which half of a "±/∓" condition a pattern uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SignBranch {
    /// Upper sign; the pattern starts with `e`.
    Top,
    /// Lower sign; the pattern starts with `g`.
    Lower,
}

impl SignBranch {
    pub fn of(pattern: &BasisPattern) -> SignBranch {
        if pattern.is_excited(0) {
            SignBranch::Top
        } else {
            SignBranch::Lower
        }
    }

    pub fn sign(self) -> f64 {
        match self {
            SignBranch::Top => 1.0,
            SignBranch::Lower => -1.0,
        }
    }
}

/// The derived scalars of a coupling assignment.
#[derive(Debug, Clone, PartialEq)]
pub struct CouplingConditions {
    pub n: usize,
    pub pattern: BasisPattern,
    /// F_sjk for n = 3, E_sjkl for n = 4, J_11 + J_22 for n = 2.
    pub theta: f64,
    /// w_1 (n = 3) or w_1..w_4 (n = 4): J over the distinct index triples.
    pub w: Vec<f64>,
    /// a_1..a_4 = E_sjkl/6 (n = 4 only).
    pub a: Vec<f64>,
    pub branch: SignBranch,
}

/// Index triples behind w_1..w_4 for four qubits.
pub const FOUR_QUBIT_TRIPLES: [[usize; 3]; 4] = [[1, 2, 3], [1, 2, 4], [1, 3, 4], [2, 3, 4]];

fn check_synthesis_size(n: usize, pattern: &BasisPattern) -> Result<()> {
    if !(2..=4).contains(&n) {
        return Err(Error::UnsupportedSize(format!(
            "coupling synthesis covers 2..=4 qubits, got {n}"
        )));
    }
    if pattern.len() != n {
        return Err(Error::InvalidPattern(format!(
            "pattern {pattern} has {} symbols, expected {n}",
            pattern.len()
        )));
    }
    Ok(())
}

/// All ordered tuples of distinct indices from `1..=n` of length `k`.
fn distinct_tuples(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for s in 1..=n {
            if !cur.contains(&s) {
                cur.push(s);
                rec(n, k, cur, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    rec(n, k, &mut Vec::new(), &mut out);
    out
}

/// Canonical coupling constants realizing P_pattern for n ∈ {2, 3, 4}.
pub fn coupling_assignment(n: usize, pattern: &BasisPattern) -> Result<CouplingConfig> {
    check_synthesis_size(n, pattern)?;
    let signs = pattern.signs();
    let sign_of = |tuple: &[usize]| tuple.iter().map(|&s| signs[s - 1]).product::<f64>();
    let mut config = CouplingConfig::new(n)?;

    // Energy scale θ_N = 1.
    for r in 1..=n {
        if n == 4 {
            config.set(&[r, r], 1.0 / 8.0)?;
            config.set(&[r, r, r, r], 1.0 / 8.0)?;
        } else {
            config.set(&[r, r], 1.0 / n as f64)?;
        }
    }
    // Each distinct subset S must sum to Π_{s∈S} sign over its k! orderings.
    let mut permutations = 1.0;
    for k in 1..=n {
        permutations *= k as f64;
        for tuple in distinct_tuples(n, k) {
            config.set(&tuple, sign_of(&tuple) / permutations)?;
        }
    }
    Ok(config)
}

/// The scalars F/E, w_i, a_i and the sign branch of an assignment.
pub fn coupling_conditions(n: usize, pattern: &BasisPattern) -> Result<CouplingConditions> {
    let config = coupling_assignment(n, pattern)?;
    let theta = config.theta();
    let (w, a) = match n {
        3 => (vec![config.get(&[1, 2, 3])], Vec::new()),
        4 => (
            FOUR_QUBIT_TRIPLES.iter().map(|t| config.get(t)).collect(),
            vec![theta / 6.0; 4],
        ),
        _ => (Vec::new(), Vec::new()),
    };
    Ok(CouplingConditions {
        n,
        pattern: pattern.clone(),
        theta,
        w,
        a,
        branch: SignBranch::of(pattern),
    })
}

/// Complex diagonal energies of a dissipative Ising Hamiltonian.
#[derive(Debug, Clone, PartialEq)]
pub struct DiagonalHamiltonian {
    n: usize,
    energies: Vec<Complex64>,
}

impl DiagonalHamiltonian {
    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn energies(&self) -> &[Complex64] {
        &self.energies
    }

    pub fn energy(&self, pattern: &BasisPattern) -> Complex64 {
        self.energies[pattern.index()]
    }
}

pub fn build_hamiltonian(
    config: &CouplingConfig,
    rates: &DissipationRates,
) -> Result<DiagonalHamiltonian> {
    let n = config.num_qubits();
    check_same(n, rates.len())?;
    let energies = (0..1usize << n)
        .map(|y| {
            let z = |s: usize| if (y >> (n - s)) & 1 == 1 { 1.0 } else { -1.0 };
            let real: f64 = config
                .terms()
                .map(|(tuple, j)| j * tuple.iter().map(|&s| z(s)).product::<f64>())
                .sum();
            let decay: f64 = rates
                .as_slice()
                .iter()
                .enumerate()
                .filter(|(v, _)| (y >> (n - 1 - v)) & 1 == 1)
                .map(|(_, g)| g)
                .sum();
            Complex64::new(-real, -0.5 * decay)
        })
        .collect();
    Ok(DiagonalHamiltonian { n, energies })
}

/// exp(−iEτ) entrywise.
pub fn evolve(h: &DiagonalHamiltonian, phase: &PhasePoint) -> Result<DiagonalGate> {
    check_same(h.n, phase.num_qubits())?;
    let tau = phase.tau();
    let entries = h
        .energies
        .iter()
        .map(|&e| (Complex64::new(0.0, -tau) * e).exp())
        .collect();
    DiagonalGate::new(h.n, entries)
}

/// Max deviation between the evolved coupling Hamiltonian and the oracle,
/// after removing a global factor fixed on an unmarked reference entry.
pub fn verify_gate_realization(
    n: usize,
    pattern: &BasisPattern,
    phase: &PhasePoint,
    rates: &DissipationRates,
) -> Result<f64> {
    let config = coupling_assignment(n, pattern)?;
    let evolved = evolve(&build_hamiltonian(&config, rates)?, phase)?;
    let oracle = oracle_gate(pattern, phase, rates)?;
    let ground = BasisPattern::ground(n)?;
    let reference = if *pattern == ground {
        BasisPattern::excited_state(n)?
    } else {
        ground
    };
    let align = evolved.entry(&reference) / oracle.entry(&reference);
    Ok(evolved
        .entries()
        .iter()
        .zip(oracle.entries())
        .map(|(u, p)| (u - align * p).norm())
        .fold(0.0, f64::max))
}

/// V1(d) = exp(−i·H_s·d) for H_s = −σz (λJ_s = θ_N = 1).
pub fn v1_gate(duration: f64) -> Mat2 {
    Mat2::sigma_z().scale(Complex64::new(0.0, duration)).exp()
}

/// The rotated, damped single-qubit Hamiltonian behind V2.
pub fn rotated_hamiltonian(rate: f64) -> Mat2 {
    let rot = Mat2::sigma_y().scale(Complex64::new(0.0, PI / 4.0)).exp();
    let rot_inv = Mat2::sigma_y().scale(Complex64::new(0.0, -PI / 4.0)).exp();
    let hs = Mat2::sigma_z().scale(Complex64::new(-1.0, 0.0));
    rot * hs * rot_inv - Mat2::excited_projector().scale(Complex64::new(0.0, 0.5 * rate))
}

/// V2(d) = exp(−i·H'·d).
pub fn v2_gate(duration: f64, rate: f64) -> Result<Mat2> {
    check_rate(rate)?;
    Ok(rotated_hamiltonian(rate)
        .scale(Complex64::new(0.0, -duration))
        .exp())
}

fn check_rate(rate: f64) -> Result<()> {
    if !(rate.is_finite() && rate >= 0.0) {
        return Err(Error::InvalidRate(rate));
    }
    if rate >= crate::gates::OVERDAMPED_RATE {
        return Err(Error::OverdampedQubit(rate));
    }
    Ok(())
}

/// W(ḡ) assembled from pulses: e^{iπ/2}·V1(π/4)·V2(π/(4ξ̄))·V1(π/4).
pub fn compose_w(rate: f64) -> Result<Mat2> {
    check_rate(rate)?;
    let outer = v1_gate(PI / 4.0);
    let inner = v2_gate(PI / (4.0 * xi_bar(rate)), rate)?;
    Ok((outer * inner * outer).scale(Complex64::new(0.0, 1.0)))
}
