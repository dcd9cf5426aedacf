//! Exact simulation of the measurement-interleaved dynamics.
//!
//! A classical bit j is stored as the computational-basis state |j⟩⟨j|. The
//! qubit then alternates between free thermalization for an interval Δ and a
//! non-selective projective measurement in the computational basis,
//!
//!   ρ ↦ Π₀ ρ Π₀ + Π₁ ρ Π₁,
//!
//! which erases coherences in that basis and leaves populations untouched.
//! [`run`] performs this loop literally, matrix by matrix; it is the oracle
//! against which every closed form in [`crate::analytic`] is checked.
//!
//! Because the channel is Markovian, the per-interval transition
//! probabilities P₀|₁ and P₁|₀ depend only on Δ, and the post-measurement
//! populations obey the linear recurrence a_{k+1} = P₀|₁ + β a_k with
//! β = 1 − (P₀|₁ + P₁|₀). [`transition_probs`] evaluates the closed
//! trigonometric forms for these probabilities and
//! [`transition_probs_oracle`] recomputes them by literal channel
//! propagation.

use crate::channel::{self, ChannelParams};
use crate::qmath::{ComputationalBasis, DensityMatrix};
use crate::{check_range, Error, Result};

/// Configuration of one storage run: channel, measurement basis, interval Δ,
/// number of steps n, and the stored bit. The simulated span is t = nΔ.
#[derive(Debug, Clone, Copy)]
pub struct ProtocolConfig {
    channel: ChannelParams,
    basis: ComputationalBasis,
    delta: f64,
    steps: u32,
    initial_bit: u8,
}

impl ProtocolConfig {
    pub fn new(
        channel: ChannelParams,
        basis: ComputationalBasis,
        delta: f64,
        steps: u32,
        initial_bit: u8,
    ) -> Result<Self> {
        check_range("delta", delta, f64::MIN_POSITIVE, f64::INFINITY)?;
        check_range("steps", f64::from(steps), 1.0, f64::from(u32::MAX))?;
        check_range("initial_bit", f64::from(initial_bit), 0.0, 1.0)?;
        Ok(Self {
            channel,
            basis,
            delta,
            steps,
            initial_bit,
        })
    }

    pub fn channel(&self) -> &ChannelParams {
        &self.channel
    }

    pub fn basis(&self) -> &ComputationalBasis {
        &self.basis
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn steps(&self) -> u32 {
        self.steps
    }

    pub fn initial_bit(&self) -> u8 {
        self.initial_bit
    }

    pub fn total_time(&self) -> f64 {
        f64::from(self.steps) * self.delta
    }

    /// a(0) = 1 − j.
    pub fn initial_population(&self) -> f64 {
        1.0 - f64::from(self.initial_bit)
    }
}

/// Computational-basis ground populations a(kΔ) = ⟨0|ρ|0⟩ recorded
/// immediately after each measurement, plus the final post-measurement state.
#[derive(Debug, Clone)]
pub struct PopulationSeries {
    pub times: Vec<f64>,
    pub a: Vec<f64>,
    pub final_state: DensityMatrix,
}

/// Non-selective projective measurement ρ ↦ Π₀ ρ Π₀ + Π₁ ρ Π₁ in the given
/// basis. Kills ⟨0|ρ|1⟩, preserves both populations, and is idempotent.
pub fn measure_nonselective(
    rho: &DensityMatrix,
    basis: &ComputationalBasis,
) -> Result<DensityMatrix> {
    let p0 = basis.projector(0);
    let p1 = basis.projector(1);
    DensityMatrix::new(p0 * *rho.matrix() * p0 + p1 * *rho.matrix() * p1)
}

/// Runs the storage protocol: starting from |j⟩⟨j|, alternately thermalize
/// for Δ and measure, n times. Populations are recorded only at the
/// post-measurement instants t = kΔ, where the closed forms are exact.
/// Every intermediate state passes the density-matrix validity check.
pub fn run(config: &ProtocolConfig) -> Result<PopulationSeries> {
    let n = config.steps() as usize;
    let mut times = Vec::with_capacity(n + 1);
    let mut a = Vec::with_capacity(n + 1);
    let mut rho = config.basis().pure_state(config.initial_bit())?;

    times.push(0.0);
    a.push(config.initial_population());

    for k in 1..=n {
        rho = channel::apply(&rho, config.channel(), config.delta())?;
        rho = measure_nonselective(&rho, config.basis())?;
        times.push(k as f64 * config.delta());
        a.push(config.basis().population(&rho, 0).clamp(0.0, 1.0));
    }

    Ok(PopulationSeries {
        times,
        a,
        final_state: rho,
    })
}

/// Probe for the state between measurements: the state at time kΔ + offset,
/// i.e. after k complete (evolve Δ, measure) cycles followed by a further
/// free evolution of `offset` ∈ [0, Δ] with no measurement at the end.
///
/// These states carry coherences and are excluded from the stroboscopic
/// population series.
pub fn state_between(config: &ProtocolConfig, step: u32, offset: f64) -> Result<DensityMatrix> {
    check_range("step", f64::from(step), 0.0, f64::from(config.steps()))?;
    check_range("offset", offset, 0.0, config.delta())?;
    let mut rho = config.basis().pure_state(config.initial_bit())?;
    for _ in 0..step {
        rho = channel::apply(&rho, config.channel(), config.delta())?;
        rho = measure_nonselective(&rho, config.basis())?;
    }
    channel::apply(&rho, config.channel(), offset)
}

/// Per-interval transition probabilities between the computational-basis
/// states: `p01` is the probability of 1 → 0 within Δ, `p10` of 0 → 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransitionProbs {
    pub p01: f64,
    pub p10: f64,
}

impl TransitionProbs {
    /// β = 1 − (P₀|₁ + P₁|₀), the per-step retention factor of the
    /// population recurrence.
    pub fn retention(&self) -> f64 {
        1.0 - (self.p01 + self.p10)
    }
}

/// Closed trigonometric forms for the transition probabilities:
///
///   P₀|₁ = ¼[(1 − cos 4θ)(1 − e^{−Δ/2τ}) + (1 + 2(2p−1)cos 2θ + cos 4θ)(1 − e^{−Δ/τ})]
///   P₁|₀ = ¼[(1 − cos 4θ)(1 − e^{−Δ/2τ}) + (1 − 2(2p−1)cos 2θ + cos 4θ)(1 − e^{−Δ/τ})]
pub fn transition_probs(delta: f64, params: &ChannelParams, theta: f64) -> Result<TransitionProbs> {
    check_range("delta", delta, 0.0, f64::INFINITY)?;
    check_range("theta", theta, 0.0, std::f64::consts::FRAC_PI_2)?;
    let tau = params.tau();
    let q = 2.0 * params.p() - 1.0;
    let cos2 = (2.0 * theta).cos();
    let cos4 = (4.0 * theta).cos();
    let slow = -(-delta / (2.0 * tau)).exp_m1(); // 1 − e^{−Δ/2τ}
    let fast = -(-delta / tau).exp_m1(); // 1 − e^{−Δ/τ}
    let shared = (1.0 - cos4) * slow;
    let p01 = 0.25 * (shared + (1.0 + 2.0 * q * cos2 + cos4) * fast);
    let p10 = 0.25 * (shared + (1.0 - 2.0 * q * cos2 + cos4) * fast);
    Ok(TransitionProbs { p01, p10 })
}

/// Stay probability P₀|₀ as a function of the raw decay probability γ,
///
///   P₀|₀ = ¼[3 − γ + √(1−γ) + 2γ(2p−1)cos 2θ + (1 − γ − √(1−γ))cos 4θ],
///
/// kept as a third route: it must equal 1 − P₁|₀ from [`transition_probs`].
pub fn stay_probability_from_gamma(gamma: f64, p: f64, theta: f64) -> Result<f64> {
    check_range("gamma", gamma, 0.0, 1.0)?;
    check_range("p", p, 0.5, 1.0)?;
    check_range("theta", theta, 0.0, std::f64::consts::FRAC_PI_2)?;
    let root_keep = (1.0 - gamma).sqrt();
    let q = 2.0 * p - 1.0;
    Ok(0.25
        * (3.0 - gamma
            + root_keep
            + 2.0 * gamma * q * (2.0 * theta).cos()
            + (1.0 - gamma - root_keep) * (4.0 * theta).cos()))
}

/// Transition probabilities by literal channel propagation: P₀|₁ projects
/// the evolved |1⟩⟨1| onto |0⟩, P₁|₀ projects the evolved |0⟩⟨0| onto |1⟩.
/// Independent of the trigonometric closed forms.
pub fn transition_probs_oracle(
    delta: f64,
    params: &ChannelParams,
    basis: &ComputationalBasis,
) -> Result<TransitionProbs> {
    check_range("delta", delta, 0.0, f64::INFINITY)?;
    let from_one = channel::apply(&basis.pure_state(1)?, params, delta)?;
    let from_zero = channel::apply(&basis.pure_state(0)?, params, delta)?;
    Ok(TransitionProbs {
        p01: basis.population(&from_one, 0),
        p10: basis.population(&from_zero, 1),
    })
}

/// Both solutions of the population recurrence a_{k+1} = P₀|₁ + β a_k: the
/// step-by-step iteration and the geometric-series closed form
/// a_k = a_∞ − (a_∞ − a₀)β^k with a_∞ = P₀|₁/(P₀|₁ + P₁|₀).
#[derive(Debug, Clone)]
pub struct RecurrenceSolution {
    pub iterated: Vec<f64>,
    pub closed: Vec<f64>,
    /// Set when P₀|₁ + P₁|₀ = 0: a_∞ is then defined by continuity as a₀
    /// (frozen dynamics) rather than by the 0/0 ratio.
    pub frozen: bool,
}

/// Solves the recurrence over k = 0..=n by both routes. `a0` must be exactly
/// 0 or 1 (the protocol stores a classical bit).
pub fn recurrence_solve(p01: f64, p10: f64, a0: f64, n: u32) -> Result<RecurrenceSolution> {
    check_range("p01", p01, 0.0, 1.0)?;
    check_range("p10", p10, 0.0, 1.0)?;
    if a0 != 0.0 && a0 != 1.0 {
        return Err(Error::OutOfRange {
            name: "a0",
            value: a0,
            min: 0.0,
            max: 1.0,
        });
    }
    let total = p01 + p10;
    if !(total <= 1.0 + 1e-12) {
        return Err(Error::OutOfRange {
            name: "p01 + p10",
            value: total,
            min: 0.0,
            max: 1.0,
        });
    }

    let frozen = total == 0.0;
    let beta = (1.0 - total).clamp(0.0, 1.0);
    let len = n as usize + 1;

    let mut iterated = Vec::with_capacity(len);
    let mut a = a0;
    iterated.push(a);
    for _ in 0..n {
        a = p01 + beta * a;
        iterated.push(a);
    }

    let a_inf = if frozen { a0 } else { p01 / total };
    let closed = (0..len)
        .map(|k| a_inf - (a_inf - a0) * beta.powi(k as i32))
        .collect();

    Ok(RecurrenceSolution {
        iterated,
        closed,
        frozen,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qmath::ComplexMatrix2;
    use crate::ALGEBRA_TOL;
    use num_complex::Complex64;

    fn params() -> ChannelParams {
        ChannelParams::new(0.9, 1.0).unwrap()
    }

    #[test]
    fn measurement_fixes_diagonal_states() {
        let basis = ComputationalBasis::new(0.6, 0.9).unwrap();
        let rho = basis.pure_state(1).unwrap();
        let out = measure_nonselective(&rho, &basis).unwrap();
        assert!((*out.matrix() - *rho.matrix()).max_norm() <= 1e-15);
    }

    #[test]
    fn measurement_dephases_equal_superposition() {
        // |+⟩⟨+| measured in the pointer basis becomes I/2.
        let basis = ComputationalBasis::pointer_aligned();
        let half = Complex64::new(0.5, 0.0);
        let rho = DensityMatrix::new(ComplexMatrix2::new(half, half, half, half)).unwrap();
        let out = measure_nonselective(&rho, &basis).unwrap();
        let expected = ComplexMatrix2::from_diagonal(0.5, 0.5);
        assert!((*out.matrix() - expected).max_norm() <= 1e-15);
    }

    #[test]
    fn measurement_is_idempotent() {
        let basis = ComputationalBasis::new(0.8, 2.0).unwrap();
        let rho = channel::apply(&basis.pure_state(0).unwrap(), &params(), 0.7).unwrap();
        let once = measure_nonselective(&rho, &basis).unwrap();
        let twice = measure_nonselective(&once, &basis).unwrap();
        assert!((*twice.matrix() - *once.matrix()).max_norm() <= 1e-15);
    }

    #[test]
    fn measurement_kills_coherence_and_keeps_populations() {
        let basis = ComputationalBasis::new(0.37, 5.1).unwrap();
        let rho = channel::apply(&basis.pure_state(0).unwrap(), &params(), 0.3).unwrap();
        let out = measure_nonselective(&rho, &basis).unwrap();
        let off_diag = out.matrix().sandwich(basis.ket0(), basis.ket1());
        assert!(off_diag.norm() <= 1e-14);
        for bit in [0, 1] {
            let before = basis.population(&rho, bit);
            let after = basis.population(&out, bit);
            assert!((before - after).abs() <= 1e-14);
        }
    }

    #[test]
    fn run_starts_at_the_stored_bit() {
        let basis = ComputationalBasis::new(0.5, 0.0).unwrap();
        for bit in [0, 1] {
            let config = ProtocolConfig::new(params(), basis, 0.5, 3, bit).unwrap();
            let series = run(&config).unwrap();
            assert_eq!(series.a[0], 1.0 - f64::from(bit));
            assert_eq!(series.times, vec![0.0, 0.5, 1.0, 1.5]);
        }
    }

    #[test]
    fn aligned_basis_reduces_to_bare_thermalization() {
        // At θ = 0 the measurements commute with the channel:
        // a(kΔ) = p + (1−p)e^{−kΔ/τ} for a₀ = 1.
        let basis = ComputationalBasis::pointer_aligned();
        let config = ProtocolConfig::new(params(), basis, 0.5, 4, 0).unwrap();
        let series = run(&config).unwrap();
        for (t, a) in series.times.iter().zip(&series.a) {
            let expected = 0.9 + 0.1 * (-t).exp();
            assert!((a - expected).abs() <= ALGEBRA_TOL, "t={t} a={a}");
        }
    }

    #[test]
    fn populations_stay_in_unit_interval() {
        let basis = ComputationalBasis::new(1.1, 4.0).unwrap();
        let config = ProtocolConfig::new(params(), basis, 0.05, 200, 1).unwrap();
        let series = run(&config).unwrap();
        assert!(series.a.iter().all(|a| (0.0..=1.0).contains(a)));
    }

    #[test]
    fn markov_recurrence_holds_along_the_run() {
        // Time homogeneity: one fixed affine map a ↦ P₀|₁ + βa connects
        // every consecutive pair of recorded populations.
        let basis = ComputationalBasis::new(0.52, 0.0).unwrap();
        let config = ProtocolConfig::new(params(), basis, 0.3, 40, 0).unwrap();
        let series = run(&config).unwrap();
        let probs = transition_probs(0.3, &params(), 0.52).unwrap();
        for k in 0..40 {
            let predicted = probs.p01 + probs.retention() * series.a[k];
            assert!(
                (series.a[k + 1] - predicted).abs() <= 1e-12,
                "step {k}: {} vs {predicted}",
                series.a[k + 1]
            );
        }
    }

    #[test]
    fn probe_state_carries_coherence_between_measurements() {
        let basis = ComputationalBasis::new(0.6, 0.0).unwrap();
        let config = ProtocolConfig::new(params(), basis, 0.4, 5, 0).unwrap();
        let mid = state_between(&config, 2, 0.2).unwrap();
        let off_diag = mid.matrix().sandwich(basis.ket0(), basis.ket1());
        assert!(off_diag.norm() > 1e-3);
        assert!(state_between(&config, 2, 0.5).is_err()); // offset > Δ
        assert!(state_between(&config, 6, 0.1).is_err()); // step > n
    }

    #[test]
    fn transitions_vanish_at_zero_interval() {
        let probs = transition_probs(0.0, &params(), 0.7).unwrap();
        assert_eq!(probs.p01, 0.0);
        assert_eq!(probs.p10, 0.0);
    }

    #[test]
    fn aligned_basis_transitions_scale_with_gamma() {
        // θ = 0: P₀|₁ = pγ(Δ), P₁|₀ = (1−p)γ(Δ).
        for delta in [0.1, 0.7, 3.0] {
            let g = channel::gamma(delta, 1.0).unwrap();
            let probs = transition_probs(delta, &params(), 0.0).unwrap();
            assert!((probs.p01 - 0.9 * g).abs() <= 1e-15);
            assert!((probs.p10 - 0.1 * g).abs() <= 1e-15);
        }
    }

    #[test]
    fn aligned_basis_transitions_saturate_at_thermal_populations() {
        let probs = transition_probs(1e3, &params(), 0.0).unwrap();
        assert!((probs.p01 - 0.9).abs() <= 1e-12);
        assert!((probs.p10 - 0.1).abs() <= 1e-12);
    }

    #[test]
    fn stay_probability_route_agrees() {
        for (delta, theta) in [(0.2, 0.3), (1.5, 1.0), (4.0, 0.05)] {
            let g = channel::gamma(delta, 1.0).unwrap();
            let p00 = stay_probability_from_gamma(g, 0.9, theta).unwrap();
            let probs = transition_probs(delta, &params(), theta).unwrap();
            assert!((p00 - (1.0 - probs.p10)).abs() <= 1e-15);
        }
    }

    #[test]
    fn oracle_normalization_is_exact() {
        let basis = ComputationalBasis::new(0.9, 0.4).unwrap();
        let from_zero = channel::apply(&basis.pure_state(0).unwrap(), &params(), 0.8).unwrap();
        let total = basis.population(&from_zero, 0) + basis.population(&from_zero, 1);
        assert!((total - 1.0).abs() <= 1e-14);
    }

    #[test]
    fn oracle_is_independent_of_phi() {
        let theta = 0.77;
        for phi in [std::f64::consts::FRAC_PI_3, std::f64::consts::PI] {
            let reference = transition_probs_oracle(
                0.6,
                &params(),
                &ComputationalBasis::new(theta, 0.0).unwrap(),
            )
            .unwrap();
            let rotated =
                transition_probs_oracle(0.6, &params(), &ComputationalBasis::new(theta, phi).unwrap())
                    .unwrap();
            assert!((reference.p01 - rotated.p01).abs() <= 1e-14);
            assert!((reference.p10 - rotated.p10).abs() <= 1e-14);
        }
    }

    #[test]
    fn recurrence_single_step_example() {
        let sol = recurrence_solve(0.25, 0.25, 1.0, 1).unwrap();
        assert_eq!(sol.iterated, vec![1.0, 0.75]);
        assert!((sol.closed[1] - 0.75).abs() <= 1e-15);
    }

    #[test]
    fn recurrence_converges_to_equilibrium_ratio() {
        let sol = recurrence_solve(0.3, 0.1, 0.0, 2000).unwrap();
        let a_inf = 0.3 / 0.4;
        assert!((sol.iterated[2000] - a_inf).abs() <= 1e-12);
        assert!((sol.closed[2000] - a_inf).abs() <= 1e-12);
    }

    #[test]
    fn recurrence_routes_agree_for_long_runs() {
        let sol = recurrence_solve(0.02, 0.05, 1.0, 10_000).unwrap();
        let worst = sol
            .iterated
            .iter()
            .zip(&sol.closed)
            .map(|(x, y)| (x - y).abs())
            .fold(0.0, f64::max);
        assert!(worst <= 1e-10, "worst defect {worst}");
    }

    #[test]
    fn recurrence_zero_rates_freeze_the_dynamics() {
        let sol = recurrence_solve(0.0, 0.0, 1.0, 5).unwrap();
        assert!(sol.frozen);
        assert!(sol.iterated.iter().all(|&a| a == 1.0));
        assert!(sol.closed.iter().all(|&a| a == 1.0));
    }

    #[test]
    fn recurrence_rejects_bad_inputs() {
        assert!(recurrence_solve(0.7, 0.7, 1.0, 3).is_err());
        assert!(recurrence_solve(-0.1, 0.2, 0.0, 3).is_err());
        assert!(recurrence_solve(0.1, 0.2, 0.5, 3).is_err());
    }

    #[test]
    fn config_rejects_invalid_fields() {
        let basis = ComputationalBasis::pointer_aligned();
        assert!(ProtocolConfig::new(params(), basis, 0.0, 3, 0).is_err());
        assert!(ProtocolConfig::new(params(), basis, 0.5, 0, 0).is_err());
        assert!(ProtocolConfig::new(params(), basis, 0.5, 3, 2).is_err());
    }
}
