//! The gate families of the search: the damped Walsh gate, the dynamical
//! controlled-phase oracle and the dynamical diffusion.
//!
//! Units are natural: ħ = 1 and λθ_N = 1. A control phase is carried as
//! `phi = β/π`, and the matching evolution time is `τ = phi·π/2^n`.
//! Dissipation rates are dimensionless, `ḡ_v = γ_v/(λθ_N)`.

use crate::error::{Error, Result};
use crate::mat2::Mat2;
use crate::state::{check_same, check_size, BasisPattern, DenseGate, DiagonalGate, StateVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Rates at or above this make ξ imaginary.
pub const OVERDAMPED_RATE: f64 = 4.0;

/// A point on the dynamical phase schedule.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhasePoint {
    phi: f64,
    n: usize,
}

impl PhasePoint {
    pub fn new(phi: f64, n: usize) -> Result<Self> {
        check_size(n)?;
        if !phi.is_finite() || phi < 0.0 {
            return Err(Error::NegativePhase(phi));
        }
        Ok(PhasePoint { phi, n })
    }

    /// The Grover point β = π.
    pub fn grover(n: usize) -> Result<Self> {
        Self::new(1.0, n)
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    /// β in radians.
    pub fn beta(&self) -> f64 {
        self.phi * PI
    }

    /// Evolution time in natural units, β/2^n.
    pub fn tau(&self) -> f64 {
        self.beta() / (1u64 << self.n) as f64
    }
}

pub fn beta(phase: &PhasePoint) -> f64 {
    phase.beta()
}

/// Per-qubit dimensionless damping rates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct DissipationRates(Vec<f64>);

impl DissipationRates {
    pub fn new(rates: Vec<f64>) -> Result<Self> {
        check_size(rates.len())?;
        if let Some(&bad) = rates.iter().find(|r| !(r.is_finite() && **r >= 0.0)) {
            return Err(Error::InvalidRate(bad));
        }
        Ok(DissipationRates(rates))
    }

    pub fn zeros(n: usize) -> Result<Self> {
        Self::new(vec![0.0; n])
    }

    pub fn uniform(n: usize, rate: f64) -> Result<Self> {
        Self::new(vec![rate; n])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn is_dissipationless(&self) -> bool {
        self.0.iter().all(|&r| r == 0.0)
    }
}

impl TryFrom<Vec<f64>> for DissipationRates {
    type Error = Error;
    fn try_from(v: Vec<f64>) -> Result<Self> {
        DissipationRates::new(v)
    }
}

impl From<DissipationRates> for Vec<f64> {
    fn from(r: DissipationRates) -> Vec<f64> {
        r.0
    }
}

/// The damped Walsh gate W(ḡ) in closed form.
///
/// With ξ̄ = √(16 − ḡ²)/4:
/// W = e^{−πḡ/(16ξ̄)}/√2 · [[1 + ḡ/(4ξ̄), 1/ξ̄], [1/ξ̄, −(1 − ḡ/(4ξ̄))]].
pub fn w_gate(rate: f64) -> Result<Mat2> {
    if !(rate.is_finite() && rate >= 0.0) {
        return Err(Error::InvalidRate(rate));
    }
    if rate >= OVERDAMPED_RATE {
        return Err(Error::OverdampedQubit(rate));
    }
    let xi = xi_bar(rate);
    let pre = (-PI * rate / (16.0 * xi)).exp() * std::f64::consts::FRAC_1_SQRT_2;
    let k = rate / (4.0 * xi);
    Ok(Mat2::from_real(
        pre * (1.0 + k),
        pre / xi,
        pre / xi,
        -pre * (1.0 - k),
    ))
}

/// ξ̄ = √(16 − ḡ²)/4, the damped splitting in units of θ_N.
pub(crate) fn xi_bar(rate: f64) -> f64 {
    (16.0 - rate * rate).sqrt() / 4.0
}

/// W(ḡ_1) ⊗ ... ⊗ W(ḡ_n), applied as n single-qubit sweeps.
#[derive(Debug, Clone, PartialEq)]
pub struct WalshLayer {
    gates: Vec<Mat2>,
}

impl WalshLayer {
    pub fn new(rates: &DissipationRates) -> Result<Self> {
        let gates = rates
            .as_slice()
            .iter()
            .map(|&g| w_gate(g))
            .collect::<Result<Vec<_>>>()?;
        Ok(WalshLayer { gates })
    }

    pub fn num_qubits(&self) -> usize {
        self.gates.len()
    }

    pub fn gates(&self) -> &[Mat2] {
        &self.gates
    }

    pub fn apply(&self, state: &mut StateVector) -> Result<()> {
        check_same(self.gates.len(), state.num_qubits())?;
        for (v, g) in self.gates.iter().enumerate() {
            state.apply_single_qubit(v + 1, g)?;
        }
        Ok(())
    }

    pub fn to_dense(&self) -> Result<DenseGate> {
        DenseGate::kron(&self.gates)
    }
}

pub fn walsh_layer(n: usize, rates: &DissipationRates) -> Result<WalshLayer> {
    check_same(n, rates.len())?;
    WalshLayer::new(rates)
}

/// The dynamical controlled-phase gate P_x(τ; ḡ).
///
/// Every basis state y picks up exp(−(τ/2)·Σ_{v: y_v = e} ḡ_v); the marked
/// state additionally carries the phase e^{iβ}.
pub fn oracle_gate(
    marked: &BasisPattern,
    phase: &PhasePoint,
    rates: &DissipationRates,
) -> Result<DiagonalGate> {
    let n = marked.len();
    check_same(n, phase.num_qubits())?;
    check_same(n, rates.len())?;
    let mut entries = damping_profile(phase.tau(), rates);
    entries[marked.index()] *= Complex64::from_polar(1.0, phase.beta());
    DiagonalGate::new(n, entries)
}

/// exp(−(τ/2)·Σ_{v excited} ḡ_v) for every basis index.
fn damping_profile(tau: f64, rates: &DissipationRates) -> Vec<Complex64> {
    let n = rates.len();
    let mut profile = vec![Complex64::new(1.0, 0.0); 1 << n];
    for (v, &g) in rates.as_slice().iter().enumerate() {
        if g == 0.0 {
            continue;
        }
        let factor = (-0.5 * tau * g).exp();
        let bit = 1usize << (n - 1 - v);
        for (i, p) in profile.iter_mut().enumerate() {
            if i & bit != 0 {
                *p *= factor;
            }
        }
    }
    profile
}

/// Matrix-free D(τ; ḡ) = e^{iβ} · W · P_{g...g} · W.
#[derive(Debug, Clone, PartialEq)]
pub struct Diffusion {
    prefactor: Complex64,
    walsh: WalshLayer,
    ground_oracle: DiagonalGate,
}

impl Diffusion {
    pub fn new(phase: &PhasePoint, rates: &DissipationRates) -> Result<Self> {
        let n = phase.num_qubits();
        check_same(n, rates.len())?;
        Ok(Diffusion {
            prefactor: Complex64::from_polar(1.0, phase.beta()),
            walsh: WalshLayer::new(rates)?,
            ground_oracle: oracle_gate(&BasisPattern::ground(n)?, phase, rates)?,
        })
    }

    pub fn apply(&self, state: &mut StateVector) -> Result<()> {
        self.walsh.apply(state)?;
        state.apply_diagonal(&self.ground_oracle)?;
        self.walsh.apply(state)?;
        state.scale(self.prefactor);
        Ok(())
    }

    pub fn to_dense(&self) -> Result<DenseGate> {
        DenseGate::from_action(self.walsh.num_qubits(), |s| self.apply(s))
    }
}

pub fn diffusion_gate(n: usize, phase: &PhasePoint, rates: &DissipationRates) -> Result<DenseGate> {
    check_same(n, phase.num_qubits())?;
    Diffusion::new(phase, rates)?.to_dense()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pat(s: &str) -> BasisPattern {
        BasisPattern::parse(s).unwrap()
    }

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn beta_examples() {
        assert_eq!(beta(&PhasePoint::new(0.0, 3).unwrap()), 0.0);
        for n in 1..=9 {
            assert_eq!(beta(&PhasePoint::grover(n).unwrap()), PI);
        }
        assert_eq!(beta(&PhasePoint::new(0.6723, 3).unwrap()), 0.6723 * PI);
        assert_eq!(PhasePoint::new(-0.1, 3), Err(Error::NegativePhase(-0.1)));
        assert!(PhasePoint::new(f64::NAN, 3).is_err());
    }

    #[test]
    fn w_gate_at_zero_is_hadamard() {
        assert!(w_gate(0.0).unwrap().max_abs_diff(&Mat2::hadamard()) < 1e-15);
    }

    #[test]
    fn w_gate_weak_damping() {
        let g: f64 = 1.0 / 113.0;
        // frozen with mpmath at 30 digits
        let w = w_gate(g).unwrap();
        assert!((w.0[0][0].re - 0.707_440_855_068_602_3).abs() < 1e-14);
        assert!((w.0[0][1].re - 0.705_880_899_191_316_5).abs() < 1e-14);
        assert!((w.0[1][1].re + 0.704_317_488_258_021_2).abs() < 1e-14);
    }

    #[test]
    fn w_gate_boundary() {
        let w = w_gate(3.9999).unwrap();
        assert!(w.0.iter().flatten().all(|z| z.re.is_finite()));
        assert_eq!(w_gate(4.0), Err(Error::OverdampedQubit(4.0)));
        assert!(matches!(w_gate(-0.1), Err(Error::InvalidRate(_))));
    }

    #[test]
    fn walsh_layer_makes_uniform_state_and_is_involution() {
        for n in 1..=6 {
            let layer = walsh_layer(n, &DissipationRates::zeros(n).unwrap()).unwrap();
            let mut s = StateVector::ground(n).unwrap();
            layer.apply(&mut s).unwrap();
            let amp = (0.5f64).powf(n as f64 / 2.0);
            assert!(s.amplitudes().iter().all(|a| (a - c(amp)).norm() < 1e-14));
            layer.apply(&mut s).unwrap();
            assert!(s.max_abs_diff(&StateVector::ground(n).unwrap()) < 1e-12);
        }
    }

    #[test]
    fn walsh_layer_matches_explicit_kronecker() {
        let rates = DissipationRates::new(vec![1.0 / 113.0, 1.0 / 90.0]).unwrap();
        let layer = walsh_layer(2, &rates).unwrap();
        let (a, b) = (
            w_gate(1.0 / 113.0).unwrap().0,
            w_gate(1.0 / 90.0).unwrap().0,
        );
        // explicit 4x4 Kronecker product
        let mut explicit = vec![c(0.0); 16];
        for r in 0..4 {
            for col in 0..4 {
                explicit[r * 4 + col] = a[r >> 1][col >> 1] * b[r & 1][col & 1];
            }
        }
        let explicit = DenseGate::new(2, explicit).unwrap();
        assert!(layer.to_dense().unwrap().max_abs_diff(&explicit) < 1e-15);
        assert!(walsh_layer(3, &rates).is_err());
    }

    #[test]
    fn oracle_grover_limit() {
        let g = oracle_gate(
            &pat("ee"),
            &PhasePoint::grover(2).unwrap(),
            &DissipationRates::zeros(2).unwrap(),
        )
        .unwrap();
        let want = [c(1.0), c(1.0), c(1.0), c(-1.0)];
        for (a, b) in g.entries().iter().zip(want) {
            assert!((a - b).norm() < 1e-15);
        }
    }

    #[test]
    fn oracle_at_zero_phase_is_identity() {
        let rates = DissipationRates::new(vec![0.3, 0.7, 0.1]).unwrap();
        let g = oracle_gate(&pat("geg"), &PhasePoint::new(0.0, 3).unwrap(), &rates).unwrap();
        assert_eq!(g, DiagonalGate::identity(3).unwrap());
    }

    #[test]
    fn oracle_damped_entries() {
        let (g1, g2) = (1.0 / 113.0, 1.0 / 90.0);
        let rates = DissipationRates::new(vec![g1, g2]).unwrap();
        let g = oracle_gate(&pat("ee"), &PhasePoint::grover(2).unwrap(), &rates).unwrap();
        let ee = -(-(PI / 8.0) * (g1 + g2)).exp();
        let ge = (-(PI / 8.0) * g2).exp();
        let eg = (-(PI / 8.0) * g1).exp();
        assert!((g.entry(&pat("ee")) - c(ee)).norm() < 1e-15);
        assert!((g.entry(&pat("ge")) - c(ge)).norm() < 1e-15);
        assert!((g.entry(&pat("eg")) - c(eg)).norm() < 1e-15);
        assert_eq!(g.entry(&pat("gg")), c(1.0));
    }

    #[test]
    fn oracle_rejects_mismatched_inputs() {
        let rates = DissipationRates::zeros(3).unwrap();
        assert!(oracle_gate(&pat("ee"), &PhasePoint::grover(2).unwrap(), &rates).is_err());
        assert!(oracle_gate(&pat("eee"), &PhasePoint::grover(2).unwrap(), &rates).is_err());
    }

    #[test]
    fn diffusion_grover_limit_two_qubits() {
        let d = diffusion_gate(
            2,
            &PhasePoint::grover(2).unwrap(),
            &DissipationRates::zeros(2).unwrap(),
        )
        .unwrap();
        // 2|s><s| - I with |s> uniform: 1/2 off-diagonal, -1/2 on the diagonal
        for r in 0..4 {
            for col in 0..4 {
                let want = if r == col { -0.5 } else { 0.5 };
                assert!((d.get(r, col) - c(want)).norm() < 1e-15, "{r},{col}");
            }
        }
    }

    #[test]
    fn diffusion_identity_at_zero() {
        let d = diffusion_gate(
            3,
            &PhasePoint::new(0.0, 3).unwrap(),
            &DissipationRates::zeros(3).unwrap(),
        )
        .unwrap();
        assert!(d.max_abs_diff(&DiagonalGate::identity(3).unwrap().to_dense()) < 1e-14);
    }

    #[test]
    fn diffusion_symmetric_with_equal_diagonal() {
        let d = diffusion_gate(
            3,
            &PhasePoint::new(0.6723, 3).unwrap(),
            &DissipationRates::zeros(3).unwrap(),
        )
        .unwrap();
        assert!(d.asymmetry() < 1e-15);
        let diag = d.diagonal();
        assert!(diag.iter().all(|z| (z - diag[0]).norm() < 1e-15));
    }

    #[test]
    fn rates_validation() {
        assert!(matches!(
            DissipationRates::new(vec![0.1, -0.2]),
            Err(Error::InvalidRate(_))
        ));
        assert!(DissipationRates::new(vec![]).is_err());
        let r: DissipationRates = serde_json::from_str("[0.5, 0.25]").unwrap();
        assert_eq!(r.as_slice(), &[0.5, 0.25]);
        assert!(serde_json::from_str::<DissipationRates>("[-1.0]").is_err());
    }
}
