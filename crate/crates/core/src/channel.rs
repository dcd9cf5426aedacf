//! The generalized amplitude damping semigroup.
//!
//! A qubit coupled weakly to a large thermal bath evolves under the channel
//!
//!   ρ_t = Σᵢ Kᵢ(γ_t) ρ Kᵢ†(γ_t),
//!
//! with four Kraus operators parametrized by the decay probability γ_t and
//! the thermal ground population p. Markovianity (CP-divisibility plus time
//! homogeneity, E_{t+t'} = E_{t'} E_t) forces the exponential schedule
//! γ_t = 1 − e^{−t/τ}. The fixed point is the thermal state
//! diag(p, 1−p) in the pointer basis.
//!
//! Two propagation paths are kept permanently: the Kraus operator sum
//! ([`apply`]) and the closed-form propagated matrix ([`apply_closed_form`]).
//! At 2×2 scale the redundancy is free and the two serve as mutual oracles.

use num_complex::Complex64;

use crate::qmath::{ComplexMatrix2, DensityMatrix};
use crate::{check_range, Result};

/// Parameters of the damping semigroup: thermal ground population
/// p ∈ [1/2, 1] and relaxation time τ > 0.
///
/// p < 1/2 would correspond to a negative bath temperature and is rejected.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelParams {
    p: f64,
    tau: f64,
}

impl ChannelParams {
    pub fn new(p: f64, tau: f64) -> Result<Self> {
        check_range("p", p, 0.5, 1.0)?;
        check_range("tau", tau, f64::MIN_POSITIVE, f64::INFINITY)?;
        Ok(Self { p, tau })
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    /// The channel's fixed point, diag(p, 1−p) in the pointer basis.
    pub fn thermal_state(&self) -> DensityMatrix {
        DensityMatrix::from_ground_population(self.p).expect("p is in [1/2, 1]")
    }
}

/// Thermal ground population p = 1/(1 + e^{−E/k_BT}) from the dimensionless
/// ratio E/(k_B T) ≥ 0 of level splitting to bath temperature.
///
/// The ratio 0 (infinite temperature) gives p = 1/2; the limit ∞ (zero
/// temperature) gives p = 1. Temperature itself is never stored; the channel
/// is parametrized by p directly.
pub fn thermal_ground_population(energy_over_kbt: f64) -> Result<f64> {
    check_range("energy_over_kbt", energy_over_kbt, 0.0, f64::INFINITY)?;
    Ok(1.0 / (1.0 + (-energy_over_kbt).exp()))
}

/// Decay probability γ_t = 1 − e^{−t/τ}, monotone in t, with γ_0 = 0 and
/// γ_t → 1 as t → ∞.
pub fn gamma(t: f64, tau: f64) -> Result<f64> {
    check_range("t", t, 0.0, f64::INFINITY)?;
    check_range("tau", tau, f64::MIN_POSITIVE, f64::INFINITY)?;
    Ok(-(-t / tau).exp_m1())
}

/// The four Kraus operators of the generalized amplitude damping channel at
/// a fixed decay probability:
///
///   K₀ = √p (|e₀⟩⟨e₀| + √(1−γ)|e₁⟩⟨e₁|)   K₁ = √(pγ) |e₀⟩⟨e₁|
///   K₂ = √(1−p) (√(1−γ)|e₀⟩⟨e₀| + |e₁⟩⟨e₁|)   K₃ = √((1−p)γ) |e₁⟩⟨e₀|
///
/// Completeness Σᵢ Kᵢ†Kᵢ = I holds by construction; the residual defect is
/// exposed for tests via [`KrausSet::completeness_defect`].
#[derive(Debug, Clone, Copy)]
pub struct KrausSet {
    k: [ComplexMatrix2; 4],
}

impl KrausSet {
    pub fn new(p: f64, gamma: f64) -> Result<Self> {
        Self::with_keep(p, gamma, 1.0 - gamma)
    }

    // `keep` must equal 1 − gamma; [`apply`] passes e^{−t/τ} directly so the
    // √(1−γ) factor keeps full relative precision at large t/τ, where
    // recovering it from a γ rounded near 1 would lose most digits.
    fn with_keep(p: f64, gamma: f64, keep: f64) -> Result<Self> {
        check_range("p", p, 0.5, 1.0)?;
        check_range("gamma", gamma, 0.0, 1.0)?;
        let root_keep = keep.sqrt();
        let zero = Complex64::ZERO;
        let re = |x: f64| Complex64::new(x, 0.0);
        let k0 = ComplexMatrix2::new(re(p.sqrt()), zero, zero, re(p.sqrt() * root_keep));
        let k1 = ComplexMatrix2::new(zero, re((p * gamma).sqrt()), zero, zero);
        let k2 = ComplexMatrix2::new(
            re((1.0 - p).sqrt() * root_keep),
            zero,
            zero,
            re((1.0 - p).sqrt()),
        );
        let k3 = ComplexMatrix2::new(zero, zero, re(((1.0 - p) * gamma).sqrt()), zero);
        Ok(Self {
            k: [k0, k1, k2, k3],
        })
    }

    pub fn operators(&self) -> &[ComplexMatrix2; 4] {
        &self.k
    }

    /// ‖Σᵢ Kᵢ†Kᵢ − I‖_max.
    pub fn completeness_defect(&self) -> f64 {
        let sum = self
            .k
            .iter()
            .fold(ComplexMatrix2::zero(), |acc, k| acc + k.adjoint() * *k);
        (sum - ComplexMatrix2::identity()).max_norm()
    }

    /// Σᵢ Kᵢ M Kᵢ† for an arbitrary matrix.
    pub fn conjugate(&self, m: &ComplexMatrix2) -> ComplexMatrix2 {
        self.k
            .iter()
            .fold(ComplexMatrix2::zero(), |acc, k| acc + *k * *m * k.adjoint())
    }
}

/// Propagates ρ for a time t through the Kraus operator sum.
pub fn apply(rho: &DensityMatrix, params: &ChannelParams, t: f64) -> Result<DensityMatrix> {
    let g = gamma(t, params.tau())?;
    let keep = (-t / params.tau()).exp();
    let kraus = KrausSet::with_keep(params.p(), g, keep)?;
    DensityMatrix::new(kraus.conjugate(rho.matrix()))
}

/// Propagates ρ for a time t through the closed-form matrix
///
///   [[ p − (1−γ)(p − a),  b √(1−γ)        ],
///    [ b* √(1−γ),         (1−p) + (1−γ)(p − a) ]]
///
/// for input [[a, b], [b*, 1−a]]. Independent of the Kraus sum code path;
/// the two agree to machine precision.
pub fn apply_closed_form(
    rho: &DensityMatrix,
    params: &ChannelParams,
    t: f64,
) -> Result<DensityMatrix> {
    check_range("t", t, 0.0, f64::INFINITY)?;
    let keep = (-t / params.tau()).exp();
    let p = params.p();
    let a = rho.ground_population();
    let b = rho.coherence();
    let a_next = p - keep * (p - a);
    let b_next = b * keep.sqrt();
    DensityMatrix::new(ComplexMatrix2::new(
        Complex64::new(a_next, 0.0),
        b_next,
        b_next.conj(),
        Complex64::new(1.0 - a_next, 0.0),
    ))
}
