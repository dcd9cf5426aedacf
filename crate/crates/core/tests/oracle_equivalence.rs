//! Cross-checks between the brute-force simulator and the closed forms.
//!
//! The simulator propagates actual 2×2 matrices through the Kraus sum and
//! projective measurements, never touching the trigonometric formulas; the
//! analytic module never touches a matrix. Agreement between the two is the
//! central correctness property of the crate.

use std::f64::consts::{FRAC_PI_2, PI};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use zeno_qubit::analytic::{self, DynamicsParams};
use zeno_qubit::channel::ChannelParams;
use zeno_qubit::protocol::{self, ProtocolConfig};
use zeno_qubit::qmath::ComputationalBasis;

#[test]
fn simulator_matches_general_population_on_random_configs() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut worst: f64 = 0.0;
    for _ in 0..250 {
        let theta = rng.random_range(0.0..=FRAC_PI_2);
        let phi = rng.random_range(0.0..2.0 * PI);
        let p = rng.random_range(0.5..=1.0);
        let delta = 10f64.powf(rng.random_range(-2.0..=1.0)); // Δ/τ ∈ [0.01, 10]
        let steps = rng.random_range(1..=100u32);
        let bit = rng.random_range(0..=1u8);

        let channel = ChannelParams::new(p, 1.0).unwrap();
        let basis = ComputationalBasis::new(theta, phi).unwrap();
        let config = ProtocolConfig::new(channel, basis, delta, steps, bit).unwrap();
        let series = protocol::run(&config).unwrap();

        let params = DynamicsParams::new(theta, p, 1.0, bit).unwrap();
        for (k, (&t, &a_sim)) in series.times.iter().zip(&series.a).enumerate() {
            let a_formula = analytic::population_general(&params, t, delta).unwrap();
            let err = (a_sim - a_formula).abs();
            worst = worst.max(err);
            assert!(
                err <= 1e-10,
                "config (θ={theta}, p={p}, Δ={delta}, bit={bit}) step {k}: \
                 simulated {a_sim} vs formula {a_formula}"
            );
        }
    }
    println!("oracle equivalence worst defect: {worst:e}");
}

#[test]
fn simulator_matches_showcase_config_tightly() {
    // θ = π/6, p = 0.9, Δ = 0.1, 50 steps.
    let channel = ChannelParams::new(0.9, 1.0).unwrap();
    let basis = ComputationalBasis::new(PI / 6.0, 0.0).unwrap();
    let config = ProtocolConfig::new(channel, basis, 0.1, 50, 0).unwrap();
    let series = protocol::run(&config).unwrap();
    let params = DynamicsParams::new(PI / 6.0, 0.9, 1.0, 0).unwrap();
    for (&t, &a_sim) in series.times.iter().zip(&series.a) {
        let a_formula = analytic::population_general(&params, t, 0.1).unwrap();
        assert!((a_sim - a_formula).abs() <= 1e-10, "t={t}");
    }
}

#[test]
fn transition_probabilities_closed_form_matches_channel_propagation() {
    // 20 × 20 × 5 grid over (Δ, θ, p).
    let mut worst: f64 = 0.0;
    for i in 0..20 {
        let delta = 0.01 + 10.0 * (i as f64) / 19.0;
        for j in 0..20 {
            let theta = FRAC_PI_2 * (j as f64) / 19.0;
            for k in 0..5 {
                let p = 0.5 + 0.5 * (k as f64) / 4.0;
                let channel = ChannelParams::new(p, 1.0).unwrap();
                let basis = ComputationalBasis::new(theta, 0.0).unwrap();
                let closed = protocol::transition_probs(delta, &channel, theta).unwrap();
                let oracle = protocol::transition_probs_oracle(delta, &channel, &basis).unwrap();
                worst = worst
                    .max((closed.p01 - oracle.p01).abs())
                    .max((closed.p10 - oracle.p10).abs());
            }
        }
    }
    assert!(worst <= 1e-12, "worst transition-probability defect {worst:e}");
}

#[test]
fn transition_probabilities_are_valid_and_subnormalized() {
    let channel = ChannelParams::new(0.77, 1.0).unwrap();
    for i in 0..30 {
        let delta = 0.05 * f64::from(i) + 0.01;
        for j in 0..30 {
            let theta = FRAC_PI_2 * f64::from(j) / 29.0;
            let probs = protocol::transition_probs(delta, &channel, theta).unwrap();
            assert!((0.0..=1.0).contains(&probs.p01));
            assert!((0.0..=1.0).contains(&probs.p10));
            assert!(probs.p01 + probs.p10 <= 1.0 + 1e-15);
        }
    }
}

#[test]
fn populations_are_independent_of_phi() {
    let channel = ChannelParams::new(0.85, 1.0).unwrap();
    let theta = 0.6;
    let reference = {
        let basis = ComputationalBasis::new(theta, 0.0).unwrap();
        let config = ProtocolConfig::new(channel, basis, 0.2, 30, 0).unwrap();
        protocol::run(&config).unwrap()
    };
    for phi in [PI / 3.0, PI, 5.0] {
        let basis = ComputationalBasis::new(theta, phi).unwrap();
        let config = ProtocolConfig::new(channel, basis, 0.2, 30, 0).unwrap();
        let series = protocol::run(&config).unwrap();
        for (a, b) in reference.a.iter().zip(&series.a) {
            assert!((a - b).abs() <= 1e-14, "phi={phi}");
        }
    }
}

#[test]
fn swapping_theta_and_bit_mirrors_the_series() {
    // Relabeling |0⟩ ↔ |1⟩ maps θ to π/2 − θ: the populations satisfy
    // a_{θ, bit 0}(k) = 1 − a_{π/2−θ, bit 1}(k).
    let channel = ChannelParams::new(0.9, 1.0).unwrap();
    for theta in [0.0, 0.3, 0.7, FRAC_PI_2] {
        let direct = {
            let basis = ComputationalBasis::new(theta, 0.0).unwrap();
            let config = ProtocolConfig::new(channel, basis, 0.25, 40, 0).unwrap();
            protocol::run(&config).unwrap()
        };
        let mirrored = {
            let basis = ComputationalBasis::new(FRAC_PI_2 - theta, 0.0).unwrap();
            let config = ProtocolConfig::new(channel, basis, 0.25, 40, 1).unwrap();
            protocol::run(&config).unwrap()
        };
        for (k, (a, b)) in direct.a.iter().zip(&mirrored.a).enumerate() {
            assert!(
                (a - (1.0 - b)).abs() <= 1e-12,
                "theta={theta} step {k}: {a} vs 1−{b}"
            );
        }
    }
}

#[test]
fn recurrence_on_measured_probabilities_reproduces_the_simulator() {
    // Third route: feed the closed-form transition probabilities into the
    // generic recurrence solver and compare with the matrix simulation.
    let channel = ChannelParams::new(0.8, 1.0).unwrap();
    let theta = 0.5;
    let delta = 0.3;
    let basis = ComputationalBasis::new(theta, 0.0).unwrap();
    let config = ProtocolConfig::new(channel, basis, delta, 60, 1).unwrap();
    let series = protocol::run(&config).unwrap();
    let probs = protocol::transition_probs(delta, &channel, theta).unwrap();
    let solution = protocol::recurrence_solve(probs.p01, probs.p10, 0.0, 60).unwrap();
    for (k, (sim, rec)) in series.a.iter().zip(&solution.iterated).enumerate() {
        assert!((sim - rec).abs() <= 1e-12, "step {k}");
    }
    for (k, (sim, rec)) in series.a.iter().zip(&solution.closed).enumerate() {
        assert!((sim - rec).abs() <= 1e-12, "closed step {k}");
    }
}

#[test]
fn zeno_limit_is_approached_as_delta_shrinks() {
    let params = DynamicsParams::new(PI / 6.0, 0.9, 1.0, 0).unwrap();
    let t = 2.0;
    let zeno = analytic::population_zeno(&params, t);
    let mut previous = f64::INFINITY;
    for delta in [1e-1, 1e-2, 1e-3, 1e-4] {
        let err = (analytic::population_general(&params, t, delta).unwrap() - zeno).abs();
        assert!(err < previous, "error must shrink with delta");
        previous = err;
    }
    // δ = 10⁻⁶ sits within 10⁻⁵ of the limit.
    let near = analytic::population_general(&params, t, 1e-6).unwrap();
    assert!((near - zeno).abs() <= 1e-5);
}

#[test]
fn free_limit_equals_single_interval_general_formula_on_grid() {
    for (theta, p, bit) in [(PI / 6.0, 0.9, 0u8), (0.3, 0.75, 1), (1.2, 0.99, 0)] {
        let params = DynamicsParams::new(theta, p, 1.0, bit).unwrap();
        for i in 1..=40 {
            let t = 0.25 * f64::from(i);
            let free = analytic::population_free(&params, t);
            let general = analytic::population_general(&params, t, t).unwrap();
            assert!(
                (free - general).abs() <= 1e-14,
                "theta={theta} t={t}: {free} vs {general}"
            );
        }
    }
}
