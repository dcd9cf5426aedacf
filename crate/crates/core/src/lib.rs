//! Dynamics of a qubit that thermalizes through a generalized amplitude
//! damping channel while being periodically measured in a basis of the
//! experimenter's choosing.
//!
//! The physical picture: a classical bit is stored in a qubit as one of the
//! two computational-basis states |0⟩, |1⟩. The environment drives the qubit
//! toward a thermal state that is diagonal in a different basis (the pointer
//! basis {|e₀⟩, |e₁⟩}, rotated from the computational basis by angles θ, φ).
//! Non-selective projective measurements in the computational basis are
//! performed after every interval Δ, which erases coherences but keeps
//! populations. The crate provides:
//!
//! - [`qmath`]: exact 2×2 complex linear algebra, density-matrix validation,
//!   and the rotated computational basis.
//! - [`channel`]: the generalized amplitude damping semigroup, both as a
//!   Kraus operator sum and as a closed-form propagated state.
//! - [`protocol`]: a brute-force simulator of the measurement-interleaved
//!   evolution (the oracle everything else is checked against), plus the
//!   closed-form per-interval transition probabilities.
//! - [`analytic`]: closed forms for the stroboscopic population a(t = nΔ),
//!   its Zeno (Δ → 0) and free (Δ = t) limits, the first-order correction in
//!   δ = Δ/τ, and the bit-storage success probabilities with their bounds.
//!
//! All populations refer to instants immediately after a measurement,
//! t = nΔ; the closed forms are exact only there.

pub mod analytic;
pub mod channel;
pub mod protocol;
pub mod qmath;

use thiserror::Error;

/// Errors shared by all modules of the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A scalar parameter lies outside its admissible range (or is not finite).
    #[error("parameter `{name}` = {value} outside [{min}, {max}]")]
    OutOfRange {
        name: &'static str,
        value: f64,
        min: f64,
        max: f64,
    },

    /// ‖m − m†‖_max exceeded tolerance; carries the measured defect.
    #[error("matrix is not Hermitian (defect {0:e})")]
    HermiticityViolation(f64),

    /// |tr(m) − 1| exceeded tolerance; carries the measured defect.
    #[error("matrix trace differs from one by {0:e}")]
    TraceViolation(f64),

    /// An eigenvalue fell below −tolerance; carries the offending eigenvalue.
    #[error("matrix has negative eigenvalue {0:e}")]
    NegativeEigenvalue(f64),

    /// Input to an eigenvalue routine that requires a Hermitian matrix.
    #[error("expected a Hermitian matrix (defect {0:e})")]
    NonHermitianInput(f64),

    /// The stroboscopic formulas are defined only at t = nΔ.
    #[error("t = {t} is not an integer multiple of delta = {delta}")]
    NonCommensurateTime { t: f64, delta: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;

/// Tolerance for algebraic identities checked in double precision
/// (Hermiticity, unit trace, positivity, Kraus completeness, semigroup
/// composition).
pub const ALGEBRA_TOL: f64 = 1e-12;

/// Tolerance for the constructed-basis orthogonality and normalization.
pub const BASIS_TOL: f64 = 1e-14;

/// Relative tolerance for deciding whether t/Δ is an integer.
pub const COMMENSURATE_REL_TOL: f64 = 1e-9;

pub(crate) fn check_range(name: &'static str, value: f64, min: f64, max: f64) -> Result<f64> {
    // Written so that NaN fails the test.
    if value >= min && value <= max {
        Ok(value)
    } else {
        Err(Error::OutOfRange {
            name,
            value,
            min,
            max,
        })
    }
}
