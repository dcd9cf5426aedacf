//! Exact 2×2 complex linear algebra and the rotated computational basis.
//!
//! Every matrix in this crate is written in the fixed pointer basis
//! {|e₀⟩, |e₁⟩} (the basis in which the thermal state is diagonal), so the
//! Kraus operators of the damping channel need no conjugation. The
//! computational basis {|0⟩, |1⟩} carries its own change-of-basis vectors:
//!
//! |0⟩ = cos θ |e₀⟩ + e^{iφ} sin θ |e₁⟩
//! |1⟩ = sin θ |e₀⟩ − e^{iφ} cos θ |e₁⟩
//!
//! for θ ∈ [0, π/2], φ ∈ [0, 2π). This is the most general orthonormal qubit
//! basis up to global phases; the sign convention on |1⟩ is fixed so that
//! vector-level tests are deterministic.

use std::f64::consts::PI;
use std::ops::{Add, Index, Mul, Sub};

use num_complex::Complex64;

use crate::{check_range, Error, Result, ALGEBRA_TOL};

/// A 2×2 complex matrix, row-major, indexed by pointer-basis labels.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexMatrix2 {
    e: [[Complex64; 2]; 2],
}

impl ComplexMatrix2 {
    pub const fn new(e00: Complex64, e01: Complex64, e10: Complex64, e11: Complex64) -> Self {
        Self {
            e: [[e00, e01], [e10, e11]],
        }
    }

    /// Matrix with the given real diagonal and zero off-diagonal entries.
    pub fn from_diagonal(d0: f64, d1: f64) -> Self {
        Self::new(
            Complex64::new(d0, 0.0),
            Complex64::ZERO,
            Complex64::ZERO,
            Complex64::new(d1, 0.0),
        )
    }

    pub fn zero() -> Self {
        Self::new(
            Complex64::ZERO,
            Complex64::ZERO,
            Complex64::ZERO,
            Complex64::ZERO,
        )
    }

    pub fn identity() -> Self {
        Self::from_diagonal(1.0, 1.0)
    }

    /// Outer product |u⟩⟨v|.
    pub fn outer(u: &[Complex64; 2], v: &[Complex64; 2]) -> Self {
        Self::new(
            u[0] * v[0].conj(),
            u[0] * v[1].conj(),
            u[1] * v[0].conj(),
            u[1] * v[1].conj(),
        )
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::new(
            self.e[0][0].conj(),
            self.e[1][0].conj(),
            self.e[0][1].conj(),
            self.e[1][1].conj(),
        )
    }

    pub fn scaled(&self, c: Complex64) -> Self {
        Self::new(
            c * self.e[0][0],
            c * self.e[0][1],
            c * self.e[1][0],
            c * self.e[1][1],
        )
    }

    pub fn trace(&self) -> Complex64 {
        self.e[0][0] + self.e[1][1]
    }

    pub fn determinant(&self) -> Complex64 {
        self.e[0][0] * self.e[1][1] - self.e[0][1] * self.e[1][0]
    }

    /// Entrywise max norm, max_{ij} |m_ij|.
    pub fn max_norm(&self) -> f64 {
        self.e
            .iter()
            .flatten()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }

    /// ‖m − m†‖_max, the Hermiticity defect.
    pub fn hermiticity_defect(&self) -> f64 {
        (*self - self.adjoint()).max_norm()
    }

    pub fn is_finite(&self) -> bool {
        self.e
            .iter()
            .flatten()
            .all(|z| z.re.is_finite() && z.im.is_finite())
    }

    /// ⟨u| M |v⟩.
    pub fn sandwich(&self, u: &[Complex64; 2], v: &[Complex64; 2]) -> Complex64 {
        let mv = [
            self.e[0][0] * v[0] + self.e[0][1] * v[1],
            self.e[1][0] * v[0] + self.e[1][1] * v[1],
        ];
        u[0].conj() * mv[0] + u[1].conj() * mv[1]
    }
}

impl Index<(usize, usize)> for ComplexMatrix2 {
    type Output = Complex64;

    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.e[i][j]
    }
}

impl Add for ComplexMatrix2 {
    type Output = Self;

    fn add(self, rhs: Self) -> Self {
        Self::new(
            self.e[0][0] + rhs.e[0][0],
            self.e[0][1] + rhs.e[0][1],
            self.e[1][0] + rhs.e[1][0],
            self.e[1][1] + rhs.e[1][1],
        )
    }
}

impl Sub for ComplexMatrix2 {
    type Output = Self;

    fn sub(self, rhs: Self) -> Self {
        Self::new(
            self.e[0][0] - rhs.e[0][0],
            self.e[0][1] - rhs.e[0][1],
            self.e[1][0] - rhs.e[1][0],
            self.e[1][1] - rhs.e[1][1],
        )
    }
}

impl Mul for ComplexMatrix2 {
    type Output = Self;

    fn mul(self, rhs: Self) -> Self {
        let a = &self.e;
        let b = &rhs.e;
        Self::new(
            a[0][0] * b[0][0] + a[0][1] * b[1][0],
            a[0][0] * b[0][1] + a[0][1] * b[1][1],
            a[1][0] * b[0][0] + a[1][1] * b[1][0],
            a[1][0] * b[0][1] + a[1][1] * b[1][1],
        )
    }
}

impl Mul<ComplexMatrix2> for f64 {
    type Output = ComplexMatrix2;

    fn mul(self, rhs: ComplexMatrix2) -> ComplexMatrix2 {
        rhs.scaled(Complex64::new(self, 0.0))
    }
}

/// Eigenvalues of a Hermitian 2×2 matrix, sorted ascending.
///
/// Uses the closed form λ = μ ± √(μ² − det) with μ = tr/2, rewritten as
/// μ ± √(((d₀−d₁)/2)² + |m₀₁|²) to stay non-negative under the root.
/// Rejects inputs whose Hermiticity defect exceeds [`ALGEBRA_TOL`].
pub fn eigenvalues_hermitian(m: &ComplexMatrix2) -> Result<(f64, f64)> {
    let defect = m.hermiticity_defect();
    if !(defect <= ALGEBRA_TOL) {
        return Err(Error::NonHermitianInput(defect));
    }
    let d0 = m[(0, 0)].re;
    let d1 = m[(1, 1)].re;
    let mid = 0.5 * (d0 + d1);
    let radius = (0.25 * (d0 - d1) * (d0 - d1) + m[(0, 1)].norm_sqr()).sqrt();
    Ok((mid - radius, mid + radius))
}

/// A Hermitian, unit-trace, positive-semidefinite 2×2 matrix.
///
/// Construction runs the full validity check; the diagnostics carry the
/// measured defect of whichever invariant failed first (Hermiticity, then
/// trace, then positivity).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityMatrix {
    m: ComplexMatrix2,
}

impl DensityMatrix {
    /// Validates `m` as a density matrix. All checks use [`ALGEBRA_TOL`].
    pub fn new(m: ComplexMatrix2) -> Result<Self> {
        // Comparisons are phrased so that NaN entries fail rather than pass.
        let herm = m.hermiticity_defect();
        if !(herm <= ALGEBRA_TOL) {
            return Err(Error::HermiticityViolation(herm));
        }
        let trace_defect = (m.trace() - Complex64::ONE).norm();
        if !(trace_defect <= ALGEBRA_TOL) {
            return Err(Error::TraceViolation(trace_defect));
        }
        let (lo, _) = eigenvalues_hermitian(&m)?;
        if !(lo >= -ALGEBRA_TOL) {
            return Err(Error::NegativeEigenvalue(lo));
        }
        Ok(Self { m })
    }

    /// Pure state |u⟩⟨u| for a unit vector.
    pub fn pure(ket: &[Complex64; 2]) -> Result<Self> {
        Self::new(ComplexMatrix2::outer(ket, ket))
    }

    /// diag(a, 1−a) in the pointer basis.
    pub fn from_ground_population(a: f64) -> Result<Self> {
        check_range("a", a, 0.0, 1.0)?;
        Self::new(ComplexMatrix2::from_diagonal(a, 1.0 - a))
    }

    pub fn matrix(&self) -> &ComplexMatrix2 {
        &self.m
    }

    /// Pointer-basis ground population ⟨e₀|ρ|e₀⟩.
    pub fn ground_population(&self) -> f64 {
        self.m[(0, 0)].re
    }

    /// Pointer-basis coherence ⟨e₀|ρ|e₁⟩.
    pub fn coherence(&self) -> Complex64 {
        self.m[(0, 1)]
    }
}

/// The computational basis {|0⟩, |1⟩}, rotated from the pointer basis by
/// (θ, φ). The kets are derived at construction and cached in pointer-basis
/// coordinates.
#[derive(Debug, Clone, Copy)]
pub struct ComputationalBasis {
    theta: f64,
    phi: f64,
    ket0: [Complex64; 2],
    ket1: [Complex64; 2],
}

impl ComputationalBasis {
    /// Builds the basis for θ ∈ [0, π/2], φ ∈ [0, 2π). Out-of-range angles
    /// are rejected, not wrapped. Both degenerate angles (θ = 0, π/2) go
    /// through the same code path.
    pub fn new(theta: f64, phi: f64) -> Result<Self> {
        check_range("theta", theta, 0.0, PI / 2.0)?;
        // Half-open [0, 2π); no silent wrapping.
        if !(phi >= 0.0 && phi < 2.0 * PI) {
            return Err(Error::OutOfRange {
                name: "phi",
                value: phi,
                min: 0.0,
                max: 2.0 * PI,
            });
        }
        let (sin_t, cos_t) = theta.sin_cos();
        let phase = Complex64::from_polar(1.0, phi);
        let ket0 = [Complex64::new(cos_t, 0.0), phase * sin_t];
        let ket1 = [Complex64::new(sin_t, 0.0), -phase * cos_t];
        Ok(Self {
            theta,
            phi,
            ket0,
            ket1,
        })
    }

    /// The basis aligned with the pointer basis (θ = φ = 0).
    pub fn pointer_aligned() -> Self {
        Self::new(0.0, 0.0).expect("zero angles are in range")
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    pub fn ket0(&self) -> &[Complex64; 2] {
        &self.ket0
    }

    pub fn ket1(&self) -> &[Complex64; 2] {
        &self.ket1
    }

    fn ket(&self, bit: u8) -> &[Complex64; 2] {
        if bit == 0 {
            &self.ket0
        } else {
            &self.ket1
        }
    }

    /// ⟨0|1⟩; zero up to rounding by construction.
    pub fn overlap(&self) -> Complex64 {
        self.ket0[0].conj() * self.ket1[0] + self.ket0[1].conj() * self.ket1[1]
    }

    /// Projector |j⟩⟨j|.
    pub fn projector(&self, bit: u8) -> ComplexMatrix2 {
        let k = self.ket(bit);
        ComplexMatrix2::outer(k, k)
    }

    /// Pure state |j⟩⟨j| as a validated density matrix.
    pub fn pure_state(&self, bit: u8) -> Result<DensityMatrix> {
        check_range("bit", f64::from(bit), 0.0, 1.0)?;
        DensityMatrix::pure(self.ket(bit))
    }

    /// Population ⟨j|ρ|j⟩.
    pub fn population(&self, rho: &DensityMatrix, bit: u8) -> f64 {
        let k = self.ket(bit);
        rho.matrix().sandwich(k, k).re
    }

    /// Diagnostic used by tests and the validation suite: max of the
    /// orthogonality and normalization defects.
    pub fn construction_defect(&self) -> f64 {
        let norm0 = (self.ket0[0].norm_sqr() + self.ket0[1].norm_sqr()).sqrt();
        let norm1 = (self.ket1[0].norm_sqr() + self.ket1[1].norm_sqr()).sqrt();
        self.overlap()
            .norm()
            .max((norm0 - 1.0).abs())
            .max((norm1 - 1.0).abs())
    }
}
