//! 2x2 complex matrices for single-qubit gates and pulses.
//!
//! Rows and columns are ordered (g, e).

use num_complex::Complex64;
use std::ops::{Add, Mul, Sub};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mat2(pub [[Complex64; 2]; 2]);

impl Mat2 {
    pub const fn new(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Self {
        Mat2([[a, b], [c, d]])
    }

    pub fn from_real(a: f64, b: f64, c: f64, d: f64) -> Self {
        Mat2::new(a.into(), b.into(), c.into(), d.into())
    }

    pub const fn identity() -> Self {
        Mat2::new(ONE, ZERO, ZERO, ONE)
    }

    pub const fn zero() -> Self {
        Mat2::new(ZERO, ZERO, ZERO, ZERO)
    }

    /// σz with σz|e⟩ = +|e⟩.
    pub const fn sigma_z() -> Self {
        Mat2::new(Complex64::new(-1.0, 0.0), ZERO, ZERO, ONE)
    }

    pub const fn sigma_x() -> Self {
        Mat2::new(ZERO, ONE, ONE, ZERO)
    }

    /// σy consistent with `sigma_z` and σ+ = |e⟩⟨g| = (σx + iσy)/2.
    pub const fn sigma_y() -> Self {
        Mat2::new(ZERO, I, Complex64::new(0.0, -1.0), ZERO)
    }

    /// Projector |e⟩⟨e| = σ+σ-.
    pub const fn excited_projector() -> Self {
        Mat2::new(ZERO, ZERO, ZERO, ONE)
    }

    pub fn hadamard() -> Self {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        Mat2::from_real(h, h, h, -h)
    }

    pub fn scale(&self, s: Complex64) -> Self {
        let m = &self.0;
        Mat2::new(s * m[0][0], s * m[0][1], s * m[1][0], s * m[1][1])
    }

    pub fn trace(&self) -> Complex64 {
        self.0[0][0] + self.0[1][1]
    }

    pub fn det(&self) -> Complex64 {
        self.0[0][0] * self.0[1][1] - self.0[0][1] * self.0[1][0]
    }

    pub fn adjoint(&self) -> Self {
        let m = &self.0;
        Mat2::new(
            m[0][0].conj(),
            m[1][0].conj(),
            m[0][1].conj(),
            m[1][1].conj(),
        )
    }

    pub fn max_abs_diff(&self, other: &Mat2) -> f64 {
        let mut worst = 0.0_f64;
        for r in 0..2 {
            for c in 0..2 {
                worst = worst.max((self.0[r][c] - other.0[r][c]).norm());
            }
        }
        worst
    }

    /// Matrix exponential via Cayley-Hamilton.
    ///
    /// Writing A = mI + B with tr B = 0 gives B² = δI, δ = -det B, so
    /// exp(A) = e^m (cosh(√δ) I + sinh(√δ)/√δ · B). The ratio is replaced by
    /// its series when √δ is tiny.
    pub fn exp(&self) -> Mat2 {
        let m = self.trace() * 0.5;
        let b = *self - Mat2::identity().scale(m);
        let delta = -b.det();
        let root = delta.sqrt();
        let cosh = root.cosh();
        let sinhc = if root.norm() < 1e-6 {
            ONE + delta / 6.0 + delta * delta / 120.0
        } else {
            root.sinh() / root
        };
        (Mat2::identity().scale(cosh) + b.scale(sinhc)).scale(m.exp())
    }
}

impl Add for Mat2 {
    type Output = Mat2;
    fn add(self, o: Mat2) -> Mat2 {
        let (a, b) = (self.0, o.0);
        Mat2::new(
            a[0][0] + b[0][0],
            a[0][1] + b[0][1],
            a[1][0] + b[1][0],
            a[1][1] + b[1][1],
        )
    }
}

impl Sub for Mat2 {
    type Output = Mat2;
    fn sub(self, o: Mat2) -> Mat2 {
        let (a, b) = (self.0, o.0);
        Mat2::new(
            a[0][0] - b[0][0],
            a[0][1] - b[0][1],
            a[1][0] - b[1][0],
            a[1][1] - b[1][1],
        )
    }
}

impl Mul for Mat2 {
    type Output = Mat2;
    fn mul(self, o: Mat2) -> Mat2 {
        let (a, b) = (self.0, o.0);
        Mat2::new(
            a[0][0] * b[0][0] + a[0][1] * b[1][0],
            a[0][0] * b[0][1] + a[0][1] * b[1][1],
            a[1][0] * b[0][0] + a[1][1] * b[1][0],
            a[1][0] * b[0][1] + a[1][1] * b[1][1],
        )
    }
}
