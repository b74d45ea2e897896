//! Randomized property suites for the finite-dimensional state machinery.

use approx::assert_relative_eq;
use proptest::prelude::*;

use qsteer_core::discrete::{
    concurrence, make_bell, measure_projective, random_mixed_state, random_pure_state,
    spin_component_matrices, uncertainty_bound, validate_density, BellKind, DensityState,
};
use qsteer_core::linalg::{haar_unitary, re, seeded_rng, CMatrix, CVector};
use qsteer_core::Party;

fn random_hermitian(dim: usize, rng: &mut rand_chacha::ChaCha20Rng) -> CMatrix {
    let g = CMatrix::from_fn(dim, dim, |_, _| {
        num_complex::Complex64::new(
            qsteer_core::linalg::normal(rng),
            qsteer_core::linalg::normal(rng),
        )
    });
    (&g + g.adjoint()) * re(0.5)
}

#[test]
fn measurement_reconstructs_expectations() {
    // sum_i p_i * outcome_i = tr(rho O) over random states and observables
    let mut rng = seeded_rng(101);
    for case in 0..200u64 {
        let dims = if case % 2 == 0 { vec![2, 2] } else { vec![2, 3] };
        let state = if case % 3 == 0 {
            random_mixed_state(&dims, case).unwrap()
        } else {
            random_pure_state(&dims, case).unwrap()
        };
        let obs = random_hermitian(dims[0], &mut rng);
        let ensemble = measure_projective(&state, &[Party::A], &obs).unwrap();
        assert_relative_eq!(ensemble.total_probability(), 1.0, epsilon = 1e-10);
        let direct = state.expectation_on(&[Party::A], &obs).unwrap();
        assert_relative_eq!(ensemble.mean_outcome(), direct, epsilon = 1e-9);
    }
}

#[test]
fn partial_trace_commutes_with_local_expectations() {
    let mut rng = seeded_rng(202);
    for case in 0..100u64 {
        let state = random_pure_state(&[2, 2, 2], case).unwrap();
        let obs = random_hermitian(4, &mut rng);
        let full = state.expectation_on(&[Party::A, Party::C], &obs).unwrap();
        let reduced = state.partial_trace(&[Party::A, Party::C]).unwrap();
        let local = reduced.expectation(&obs).unwrap();
        assert_relative_eq!(full, local, epsilon = 1e-10);
    }
}

#[test]
fn spin_variance_bounds_hold_on_random_pure_states() {
    for &(j, dim) in &[(0.5_f64, 2usize), (1.0, 3)] {
        let [jx, jy, jz] = spin_component_matrices(j).unwrap();
        let c2 = uncertainty_bound(j, 2).unwrap();
        let mut rng = seeded_rng(303 + dim as u64);
        for case in 0..500 {
            let psi = qsteer_core::linalg::gaussian_complex_vector(dim, &mut rng);
            let psi: CVector = &psi / re(psi.norm());
            let var = |op: &CMatrix| -> f64 {
                let mean = psi.dotc(&(op * &psi)).re;
                let second = psi.dotc(&(op * (op * &psi))).re;
                second - mean * mean
            };
            let (vx, vy, vz) = (var(&jx), var(&jy), var(&jz));
            assert!(
                vx + vy + vz >= j - 1e-9,
                "case {case} (j={j}): three-axis sum {}",
                vx + vy + vz
            );
            assert!(
                vx + vy >= c2 - 1e-6,
                "case {case} (j={j}): two-axis sum {} < bound {c2}",
                vx + vy
            );
        }
    }
}

#[test]
fn concurrence_vanishes_on_products_and_survives_local_unitaries() {
    // separable product states have zero concurrence
    for seed in 0..20u64 {
        let a = random_mixed_state(&[2], seed).unwrap();
        let b = random_mixed_state(&[2], seed + 1000).unwrap();
        let product =
            DensityState::new(vec![2, 2], a.matrix().kronecker(b.matrix())).unwrap();
        assert_relative_eq!(concurrence(&product).unwrap(), 0.0, epsilon = 1e-10);
    }
    // local unitaries leave the Bell state's concurrence at 1
    let bell = make_bell(BellKind::PhiMinus);
    let mut rng = seeded_rng(404);
    for case in 0..50 {
        let u = haar_unitary(2, &mut rng).kronecker(&haar_unitary(2, &mut rng));
        let rotated = &u * bell.matrix() * u.adjoint();
        let state = DensityState::new(vec![2, 2], rotated).unwrap();
        assert_relative_eq!(
            concurrence(&state).unwrap(),
            1.0,
            epsilon = 1e-9,
        );
        let _ = case;
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn random_state_constructors_satisfy_invariants(seed in 0u64..1_000_000) {
        let pure = random_pure_state(&[2, 2], seed).unwrap();
        prop_assert!(validate_density(pure.party_dims(), pure.matrix()).is_ok());
        prop_assert!((pure.purity() - 1.0).abs() < 1e-9);

        let mixed = random_mixed_state(&[2, 2], seed).unwrap();
        prop_assert!(validate_density(mixed.party_dims(), mixed.matrix()).is_ok());
        prop_assert!(mixed.purity() <= 1.0 + 1e-9);
    }

    #[test]
    fn measurement_branches_are_valid_states(seed in 0u64..1_000_000) {
        let state = random_pure_state(&[2, 2], seed).unwrap();
        let mut rng = seeded_rng(seed);
        let obs = random_hermitian(2, &mut rng);
        let ensemble = measure_projective(&state, &[Party::A], &obs).unwrap();
        let mut total = 0.0;
        for branch in &ensemble.branches {
            prop_assert!(branch.probability >= 0.0);
            prop_assert!(
                validate_density(branch.state.party_dims(), branch.state.matrix()).is_ok()
            );
            total += branch.probability;
        }
        prop_assert!((total - 1.0).abs() < 1e-10);
    }
}
