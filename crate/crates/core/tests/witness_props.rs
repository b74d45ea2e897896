//! Witness-level properties on randomized states: group dominance, local
//! unitary invariance, quantum bounds for correlation witnesses.

use approx::assert_relative_eq;

use qsteer_core::discrete::{
    make_bell, random_mixed_state, random_pure_state, BellKind, DensityState,
};
use qsteer_core::gaussian::random_gaussian_state;
use qsteer_core::linalg::{haar_unitary, seeded_rng, CMatrix};
use qsteer_core::witness::{
    bell_chsh, bell_chsh_optimized, chsh_moment_settings, epr_witness, s2_witness, s3_witness,
    s_tilde_m, SpinSteeringMode, SQRT_2,
};
use qsteer_core::Party;

/// A group dominates each of its members for the product witness.
#[test]
fn epr_witness_group_dominance() {
    for seed in 0..300u64 {
        let state = random_gaussian_state(3, seed).unwrap();
        let single = epr_witness(&state, &[Party::B], &[Party::A], None).unwrap();
        let group = epr_witness(&state, &[Party::B], &[Party::A, Party::C], None).unwrap();
        assert!(
            group.value <= single.value + 1e-9,
            "seed {seed}: {} > {}",
            group.value,
            single.value
        );
    }
}

/// The optimized spin witnesses are invariant under a local unitary on the
/// steering party: the projective family is closed under conjugation.
#[test]
fn optimized_spin_witnesses_are_local_unitary_invariant() {
    let mut rng = seeded_rng(0x10CA1);
    for case in 0..50u64 {
        let state = random_pure_state(&[2, 2], case).unwrap();
        let u = haar_unitary(2, &mut rng).kronecker(&CMatrix::identity(2, 2));
        let rotated = DensityState::new(vec![2, 2], &u * state.matrix() * u.adjoint()).unwrap();
        let before =
            s2_witness(&state, Party::B, &[Party::A], &SpinSteeringMode::Optimized).unwrap();
        let after =
            s2_witness(&rotated, Party::B, &[Party::A], &SpinSteeringMode::Optimized).unwrap();
        assert_relative_eq!(before.value, after.value, epsilon = 1e-6);
        let before =
            s3_witness(&state, Party::B, &[Party::A], &SpinSteeringMode::Optimized).unwrap();
        let after =
            s3_witness(&rotated, Party::B, &[Party::A], &SpinSteeringMode::Optimized).unwrap();
        assert_relative_eq!(before.value, after.value, epsilon = 1e-6);
    }
}

/// No sampled state beats the Tsirelson bound. As a descriptive note (no
/// claim is made either way), count how many Bell-violating states also
/// cross a two-setting steering threshold.
#[test]
fn bell_values_never_exceed_tsirelson() {
    let mut bell_violations = 0usize;
    let mut with_two_setting = 0usize;
    for seed in 0..200u64 {
        let state = if seed % 2 == 0 {
            random_pure_state(&[2, 2], seed).unwrap()
        } else {
            random_mixed_state(&[2, 2], seed).unwrap()
        };
        let w = bell_chsh_optimized(&state, Party::B, Party::A).unwrap();
        assert!(
            w.value <= 2.0 * SQRT_2 + 1e-6,
            "seed {seed}: Bell value {}",
            w.value
        );
        if w.detects_steering {
            bell_violations += 1;
            let grid = 24usize;
            let step = std::f64::consts::TAU / grid as f64;
            let mut best: f64 = 0.0;
            for i in 0..grid {
                for k in 0..grid {
                    let settings = chsh_moment_settings((i as f64 * step, k as f64 * step));
                    for s in &settings {
                        let w = s_tilde_m(&state, Party::B, Party::A, s, SQRT_2).unwrap();
                        best = best.max(w.value);
                    }
                }
            }
            if best > 1.0 {
                with_two_setting += 1;
            }
        }
    }
    println!(
        "descriptive: {with_two_setting} of {bell_violations} Bell-violating samples also \
         crossed a two-setting steering threshold"
    );
}

/// Product states never violate the Bell inequality, over a full angle grid.
#[test]
fn product_states_respect_the_classical_bell_bound() {
    let grid = 10usize;
    let step = std::f64::consts::TAU / grid as f64;
    for seed in 0..50u64 {
        let a = random_mixed_state(&[2], seed).unwrap();
        let b = random_mixed_state(&[2], seed + 500).unwrap();
        let product = DensityState::new(vec![2, 2], a.matrix().kronecker(b.matrix())).unwrap();
        let mut max_value = f64::NEG_INFINITY;
        for i0 in 0..grid {
            for i1 in 0..grid {
                for i2 in 0..grid {
                    for i3 in 0..grid {
                        let w = bell_chsh(
                            &product,
                            Party::A,
                            Party::B,
                            &[
                                i0 as f64 * step,
                                i1 as f64 * step,
                                i2 as f64 * step,
                                i3 as f64 * step,
                            ],
                        )
                        .unwrap();
                        max_value = max_value.max(w.value);
                    }
                }
            }
        }
        assert!(max_value <= 2.0 + 1e-9, "seed {seed}: {max_value}");
    }
}

/// Product states never cross the two-setting correlation threshold.
#[test]
fn product_states_show_no_two_setting_steering() {
    let grid = 16usize;
    let step = std::f64::consts::TAU / grid as f64;
    for seed in 0..50u64 {
        let a = random_mixed_state(&[2], seed).unwrap();
        let b = random_mixed_state(&[2], seed + 900).unwrap();
        let product = DensityState::new(vec![2, 2], b.matrix().kronecker(a.matrix())).unwrap();
        for i in 0..grid {
            for k in 0..grid {
                let settings = chsh_moment_settings((i as f64 * step, k as f64 * step));
                for s in &settings {
                    let w = s_tilde_m(&product, Party::A, Party::B, s, SQRT_2).unwrap();
                    assert!(
                        w.value <= 1.0 + 1e-9,
                        "seed {seed}: S~ = {} at ({i}, {k})",
                        w.value
                    );
                    assert!(!w.detects_steering);
                }
            }
        }
    }
}

/// The maximally entangled pair maximizes two-setting steering at sqrt(2).
/// On the singlet <s(theta) s(phi)> = -cos(theta - phi), so each instance
/// peaks at its own primed-angle choice.
#[test]
fn singlet_hits_the_two_setting_quantum_maximum() {
    let singlet = make_bell(BellKind::PsiMinus);
    let pi = std::f64::consts::PI;
    let first = &chsh_moment_settings((pi, pi / 2.0))[0];
    let w = s_tilde_m(&singlet, Party::B, Party::A, first, SQRT_2).unwrap();
    assert_relative_eq!(w.value, SQRT_2, epsilon = 1e-12);
    let second = &chsh_moment_settings((-pi / 2.0, pi))[1];
    let w = s_tilde_m(&singlet, Party::B, Party::A, second, SQRT_2).unwrap();
    assert_relative_eq!(w.value, SQRT_2, epsilon = 1e-12);
}
