//! Basis conventions, state vectors and fast gate application.
//!
//! Qubit 1 is the most significant bit of a basis index and `g`/`e` map to
//! bits 0/1, so the pattern string reads left to right like the index in
//! binary: `"ege"` is index 5.

use crate::error::{Error, Result};
use crate::mat2::Mat2;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

/// Largest supported register.
pub const MAX_QUBITS: usize = 12;

/// A computational basis state written as a string over `{g, e}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct BasisPattern {
    excited: Vec<bool>,
}

impl BasisPattern {
    pub fn parse(s: &str) -> Result<Self> {
        if s.is_empty() {
            return Err(Error::InvalidPattern("empty pattern".into()));
        }
        if s.chars().count() > MAX_QUBITS {
            return Err(Error::InvalidPattern(format!(
                "{s:?} is longer than {MAX_QUBITS} qubits"
            )));
        }
        let excited = s
            .chars()
            .map(|c| match c {
                'g' => Ok(false),
                'e' => Ok(true),
                other => Err(Error::InvalidPattern(format!(
                    "{s:?} contains {other:?}; only 'g' and 'e' are allowed"
                ))),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(BasisPattern { excited })
    }

    pub fn from_index(n: usize, index: usize) -> Result<Self> {
        check_size(n)?;
        if index >= 1 << n {
            return Err(Error::InvalidPattern(format!(
                "index {index} out of range for {n} qubits"
            )));
        }
        let excited = (0..n).map(|v| (index >> (n - 1 - v)) & 1 == 1).collect();
        Ok(BasisPattern { excited })
    }

    pub fn ground(n: usize) -> Result<Self> {
        Self::from_index(n, 0)
    }

    pub fn excited_state(n: usize) -> Result<Self> {
        check_size(n)?;
        Self::from_index(n, (1 << n) - 1)
    }

    pub fn len(&self) -> usize {
        self.excited.len()
    }

    pub fn is_empty(&self) -> bool {
        self.excited.is_empty()
    }

    /// Whether qubit `v` (zero-based, qubit 1 is `v = 0`) is excited.
    pub fn is_excited(&self, v: usize) -> bool {
        self.excited[v]
    }

    pub fn index(&self) -> usize {
        self.excited
            .iter()
            .fold(0, |acc, &bit| (acc << 1) | usize::from(bit))
    }

    /// ±1 per qubit: +1 for `e`, -1 for `g`.
    pub fn signs(&self) -> Vec<f64> {
        self.excited
            .iter()
            .map(|&e| if e { 1.0 } else { -1.0 })
            .collect()
    }
}

/// Basis index of a pattern under the crate's ordering.
pub fn index_of(pattern: &BasisPattern) -> usize {
    pattern.index()
}

impl FromStr for BasisPattern {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        BasisPattern::parse(s)
    }
}

impl TryFrom<String> for BasisPattern {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        BasisPattern::parse(&s)
    }
}

impl From<BasisPattern> for String {
    fn from(p: BasisPattern) -> String {
        p.to_string()
    }
}

impl fmt::Display for BasisPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &e in &self.excited {
            f.write_str(if e { "e" } else { "g" })?;
        }
        Ok(())
    }
}

pub(crate) fn check_size(n: usize) -> Result<()> {
    if n == 0 || n > MAX_QUBITS {
        return Err(Error::UnsupportedSize(format!(
            "{n} qubits; supported range is 1..={MAX_QUBITS}"
        )));
    }
    Ok(())
}

pub(crate) fn check_same(expected: usize, actual: usize) -> Result<()> {
    if expected != actual {
        return Err(Error::DimensionMismatch { expected, actual });
    }
    Ok(())
}

/// Dense, possibly unnormalized, pure state of `n` qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n: usize,
    amps: Vec<Complex64>,
}

impl StateVector {
    pub fn basis(pattern: &BasisPattern) -> Self {
        let n = pattern.len();
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n];
        amps[pattern.index()] = Complex64::new(1.0, 0.0);
        StateVector { n, amps }
    }

    /// |g...g⟩
    pub fn ground(n: usize) -> Result<Self> {
        Ok(Self::basis(&BasisPattern::ground(n)?))
    }

    pub fn from_amplitudes(n: usize, amps: Vec<Complex64>) -> Result<Self> {
        check_size(n)?;
        check_same(1 << n, amps.len())?;
        Ok(StateVector { n, amps })
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn amplitude(&self, pattern: &BasisPattern) -> Complex64 {
        self.amps[pattern.index()]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amps.iter().map(|a| a.norm_sqr()).collect()
    }

    pub fn apply_diagonal(&mut self, gate: &DiagonalGate) -> Result<()> {
        check_same(self.n, gate.n)?;
        for (a, d) in self.amps.iter_mut().zip(&gate.entries) {
            *a *= d;
        }
        Ok(())
    }

    pub fn scale(&mut self, factor: Complex64) {
        for a in &mut self.amps {
            *a *= factor;
        }
    }

    /// Contracts `gate` over the tensor slot of qubit `qubit` (1-based).
    pub fn apply_single_qubit(&mut self, qubit: usize, gate: &Mat2) -> Result<()> {
        if qubit == 0 || qubit > self.n {
            return Err(Error::QubitOutOfRange { qubit, n: self.n });
        }
        let stride = 1usize << (self.n - qubit);
        let [[m00, m01], [m10, m11]] = gate.0;
        for block in self.amps.chunks_exact_mut(stride << 1) {
            let (lo, hi) = block.split_at_mut(stride);
            for (a0, a1) in lo.iter_mut().zip(hi.iter_mut()) {
                let (x, y) = (*a0, *a1);
                *a0 = m00 * x + m01 * y;
                *a1 = m10 * x + m11 * y;
            }
        }
        Ok(())
    }

    pub fn max_abs_diff(&self, other: &StateVector) -> f64 {
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

/// Functional wrappers around the in-place kernels.
pub fn apply_diagonal(state: &StateVector, gate: &DiagonalGate) -> Result<StateVector> {
    let mut out = state.clone();
    out.apply_diagonal(gate)?;
    Ok(out)
}

pub fn apply_single_qubit(state: &StateVector, qubit: usize, gate: &Mat2) -> Result<StateVector> {
    let mut out = state.clone();
    out.apply_single_qubit(qubit, gate)?;
    Ok(out)
}

pub fn probabilities(state: &StateVector) -> Vec<f64> {
    state.probabilities()
}

/// A gate stored as its 2^n diagonal entries.
#[derive(Debug, Clone, PartialEq)]
pub struct DiagonalGate {
    n: usize,
    entries: Vec<Complex64>,
}

impl DiagonalGate {
    pub fn new(n: usize, entries: Vec<Complex64>) -> Result<Self> {
        check_size(n)?;
        check_same(1 << n, entries.len())?;
        Ok(DiagonalGate { n, entries })
    }

    pub fn identity(n: usize) -> Result<Self> {
        Self::new(n, vec![Complex64::new(1.0, 0.0); 1 << n])
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn entry(&self, pattern: &BasisPattern) -> Complex64 {
        self.entries[pattern.index()]
    }

    pub fn to_dense(&self) -> DenseGate {
        let dim = self.entries.len();
        let mut data = vec![Complex64::new(0.0, 0.0); dim * dim];
        for (i, &d) in self.entries.iter().enumerate() {
            data[i * dim + i] = d;
        }
        DenseGate { n: self.n, data }
    }
}

/// Dense gates are only materialized for small registers.
pub const MAX_DENSE_QUBITS: usize = 10;

/// A full 2^n x 2^n matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseGate {
    n: usize,
    data: Vec<Complex64>,
}

impl DenseGate {
    pub fn new(n: usize, data: Vec<Complex64>) -> Result<Self> {
        check_size(n)?;
        if n > MAX_DENSE_QUBITS {
            return Err(Error::UnsupportedSize(format!(
                "dense gates are limited to {MAX_DENSE_QUBITS} qubits"
            )));
        }
        check_same(1 << (2 * n), data.len())?;
        Ok(DenseGate { n, data })
    }

    /// Materializes a linear action column by column.
    pub fn from_action<F>(n: usize, mut action: F) -> Result<Self>
    where
        F: FnMut(&mut StateVector) -> Result<()>,
    {
        check_size(n)?;
        if n > MAX_DENSE_QUBITS {
            return Err(Error::UnsupportedSize(format!(
                "dense gates are limited to {MAX_DENSE_QUBITS} qubits"
            )));
        }
        let dim = 1usize << n;
        let mut data = vec![Complex64::new(0.0, 0.0); dim * dim];
        for col in 0..dim {
            let mut column = StateVector::basis(&BasisPattern::from_index(n, col)?);
            action(&mut column)?;
            for (row, a) in column.amps.iter().enumerate() {
                data[row * dim + col] = *a;
            }
        }
        Ok(DenseGate { n, data })
    }

    /// Kronecker product of single-qubit matrices, qubit 1 first.
    pub fn kron(factors: &[Mat2]) -> Result<Self> {
        let n = factors.len();
        Self::from_action(n, |s| {
            for (v, m) in factors.iter().enumerate() {
                s.apply_single_qubit(v + 1, m)?;
            }
            Ok(())
        })
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        1 << self.n
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.data[row * self.dim() + col]
    }

    pub fn apply(&self, state: &StateVector) -> Result<StateVector> {
        check_same(self.n, state.n)?;
        let dim = self.dim();
        let amps = (0..dim)
            .map(|r| {
                self.data[r * dim..(r + 1) * dim]
                    .iter()
                    .zip(&state.amps)
                    .map(|(m, a)| m * a)
                    .sum()
            })
            .collect();
        Ok(StateVector { n: self.n, amps })
    }

    pub fn matmul(&self, other: &DenseGate) -> Result<DenseGate> {
        check_same(self.n, other.n)?;
        let dim = self.dim();
        let mut data = vec![Complex64::new(0.0, 0.0); dim * dim];
        for r in 0..dim {
            for k in 0..dim {
                let a = self.data[r * dim + k];
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for c in 0..dim {
                    data[r * dim + c] += a * other.data[k * dim + c];
                }
            }
        }
        Ok(DenseGate { n: self.n, data })
    }

    pub fn adjoint(&self) -> DenseGate {
        let dim = self.dim();
        let mut data = vec![Complex64::new(0.0, 0.0); dim * dim];
        for r in 0..dim {
            for c in 0..dim {
                data[c * dim + r] = self.data[r * dim + c].conj();
            }
        }
        DenseGate { n: self.n, data }
    }

    pub fn max_abs_diff(&self, other: &DenseGate) -> f64 {
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Largest |M_ij - M_ji|.
    pub fn asymmetry(&self) -> f64 {
        let dim = self.dim();
        let mut worst = 0.0_f64;
        for r in 0..dim {
            for c in r + 1..dim {
                worst = worst.max((self.get(r, c) - self.get(c, r)).norm());
            }
        }
        worst
    }

    pub fn diagonal(&self) -> Vec<Complex64> {
        (0..self.dim()).map(|i| self.get(i, i)).collect()
    }

    /// Spectral norm, by power iteration on M†M.
    pub fn operator_norm(&self) -> f64 {
        let gram = self
            .adjoint()
            .matmul(self)
            .expect("adjoint has matching size");
        let dim = self.dim();
        // Non-symmetric start so no eigenvector is missed by accident.
        let mut v: Vec<Complex64> = (0..dim)
            .map(|i| Complex64::new(1.0 + (i as f64 * 0.37).sin() * 0.5, 0.0))
            .collect();
        let mut lambda = 0.0;
        for _ in 0..500 {
            let w: Vec<Complex64> = (0..dim)
                .map(|r| {
                    gram.data[r * dim..(r + 1) * dim]
                        .iter()
                        .zip(&v)
                        .map(|(m, a)| m * a)
                        .sum()
                })
                .collect();
            let norm = w.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
            if norm == 0.0 {
                return 0.0;
            }
            let next = norm / v.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
            v = w.into_iter().map(|a| a / norm).collect();
            if (next - lambda).abs() < 1e-15 {
                lambda = next;
                break;
            }
            lambda = next;
        }
        lambda.sqrt()
    }

    /// Largest entrywise deviation of M†M from the identity.
    pub fn unitarity_defect(&self) -> f64 {
        let gram = self
            .adjoint()
            .matmul(self)
            .expect("adjoint has matching size");
        let dim = self.dim();
        let mut worst = 0.0_f64;
        for r in 0..dim {
            for c in 0..dim {
                let target = if r == c { 1.0 } else { 0.0 };
                worst = worst.max((gram.get(r, c) - target).norm());
            }
        }
        worst
    }
}
