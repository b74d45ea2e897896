//! Monogamy relations on randomized families, and the steering-chain
//! consequence: steering cannot be passed along a chain.

use qsteer_core::discrete::{random_pure_state, DensityState};
use qsteer_core::gaussian::{
    apply_two_mode_squeeze, random_gaussian_state, vacuum,
};
use qsteer_core::monogamy::{
    check_bell_sum, check_chsh_moment_pair, check_r1, check_r3, check_r5_r6,
};
use qsteer_core::witness::{epr_witness, SpinSteeringMode};
use qsteer_core::Party;

#[test]
fn r1_holds_on_random_three_mode_states() {
    for seed in 0..300u64 {
        let state = random_gaussian_state(3, seed).unwrap();
        let report = check_r1(&state, &[Party::B], &[Party::A], &[Party::C]).unwrap();
        assert!(report.satisfied, "seed {seed}: slack {}", report.slack);
    }
}

#[test]
fn r3_holds_on_random_four_qubit_states() {
    for seed in 0..300u64 {
        let state = random_pure_state(&[2, 2, 2, 2], seed).unwrap();
        let report = check_r3(
            &state,
            Party::B,
            [&[Party::A], &[Party::C], &[Party::D]],
            &SpinSteeringMode::Optimized,
        )
        .unwrap();
        assert!(report.satisfied, "seed {seed}: slack {}", report.slack);
    }
}

#[test]
fn fully_mixed_states_show_no_correlations() {
    let mm = DensityState::maximally_mixed(vec![2, 2, 2]);
    let half_pi = std::f64::consts::FRAC_PI_2;
    for report in
        check_chsh_moment_pair(&mm, Party::B, Party::A, Party::C, (0.0, half_pi), (0.0, half_pi))
            .unwrap()
    {
        assert!(report.lhs.abs() < 1e-12);
        assert!(report.satisfied);
    }
    let report =
        check_bell_sum(&mm, Party::B, Party::A, Party::C, (0.0, half_pi), (0.0, half_pi))
            .unwrap();
    assert!(report.lhs.abs() < 1e-12);
}

#[test]
fn r5_r6_hold_on_random_three_mode_states() {
    for seed in 0..300u64 {
        let state = random_gaussian_state(3, seed).unwrap();
        for report in check_r5_r6(&state, &[Party::B], &[Party::A], &[Party::C]).unwrap() {
            assert!(
                report.satisfied,
                "seed {seed} {}: slack {}",
                report.id, report.slack
            );
        }
    }
}

/// Steering cannot be passed along a chain: whenever A steers B and B
/// steers C, A must fail to steer C. The mechanism is the product monogamy
/// applied at C (E_{C|B} E_{C|A} >= 1), which is checked unconditionally;
/// the chain implication itself is asserted on whatever sampled instances
/// show both premise edges (whether a Gaussian chain exists at all is an
/// open configuration, so none appearing is acceptable).
#[test]
fn steering_chains_do_not_pass_on() {
    let mut chains_seen = 0usize;
    let mut states: Vec<qsteer_core::gaussian::GaussianState> = (0..300)
        .map(|seed| random_gaussian_state(3, seed).unwrap())
        .collect();
    // a cascade candidate: squeeze (A, B), then couple B into C
    let mut cascade = vacuum(3);
    cascade = apply_two_mode_squeeze(&cascade, Party::A, Party::B, 1.2).unwrap();
    cascade = apply_two_mode_squeeze(&cascade, Party::B, Party::C, 1.2).unwrap();
    states.push(cascade);

    for (idx, state) in states.iter().enumerate() {
        // the mechanism: R1 at C over the steering parties B and A
        let report = check_r1(state, &[Party::C], &[Party::B], &[Party::A]).unwrap();
        assert!(report.satisfied, "state {idx}: slack {}", report.slack);

        let a_steers_b = epr_witness(state, &[Party::B], &[Party::A], None).unwrap();
        let b_steers_c = epr_witness(state, &[Party::C], &[Party::B], None).unwrap();
        if a_steers_b.detects_steering && b_steers_c.detects_steering {
            chains_seen += 1;
            let a_steers_c = epr_witness(state, &[Party::C], &[Party::A], None).unwrap();
            assert!(
                !a_steers_c.detects_steering,
                "state {idx}: chain passed on steering (E = {})",
                a_steers_c.value
            );
        }
    }
    println!("chain instances sampled: {chains_seen}");
}
