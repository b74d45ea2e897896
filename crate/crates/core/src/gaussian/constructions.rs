//! Canonical Gaussian states: vacuum, two-mode squeezed vacuum, the
//! three-mode GHZ network and the dual-steering splitter network.

use nalgebra::{DMatrix, DVector};
use rand::RngExt;

use crate::error::{Error, Result};
use crate::linalg::seeded_rng;
use crate::party::Party;

use super::channels::{
    apply_beam_splitter, apply_passive_orthogonal, apply_phase_rotation, apply_squeeze,
    apply_two_mode_squeeze,
};
use super::GaussianState;

/// n-mode vacuum: zero mean, identity covariance.
pub fn vacuum(n_modes: usize) -> GaussianState {
    assert!(n_modes >= 1, "need at least one mode");
    GaussianState::new_unchecked(
        n_modes,
        DVector::zeros(2 * n_modes),
        DMatrix::identity(2 * n_modes, 2 * n_modes),
    )
}

/// Two-mode squeezed vacuum with squeezing parameter r:
/// Var(X) = Var(P) = cosh(2r) on each mode, <X_A X_B> = sinh(2r),
/// <P_A P_B> = -sinh(2r).
pub fn two_mode_squeezed(r: f64) -> Result<GaussianState> {
    if r < 0.0 {
        return Err(Error::InvalidArgument(format!(
            "squeezing parameter must be nonnegative, got {r}"
        )));
    }
    let (ch, sh) = ((2.0 * r).cosh(), (2.0 * r).sinh());
    let mut cov = DMatrix::identity(4, 4) * ch;
    cov[(0, 2)] = sh;
    cov[(2, 0)] = sh;
    cov[(1, 3)] = -sh;
    cov[(3, 1)] = -sh;
    Ok(GaussianState::new_unchecked(2, DVector::zeros(4), cov))
}

/// Three-mode CV GHZ network: one momentum-squeezed and two
/// position-squeezed vacua through a balanced three-way mixing network.
///
/// The output approaches a simultaneous eigenstate of every X_i - X_j and
/// of P_A + P_B + P_C as r grows: Var(X_i - X_j) = 2 e^{-2r} and
/// Var(P_A + P_B + P_C) = 3 e^{-2r}.
pub fn cv_ghz(r: f64) -> Result<GaussianState> {
    if r < 0.0 {
        return Err(Error::InvalidArgument(format!(
            "squeezing parameter must be nonnegative, got {r}"
        )));
    }
    let mut state = vacuum(3);
    state = apply_squeeze(&state, Party::A, -r)?; // momentum squeezed
    state = apply_squeeze(&state, Party::B, r)?; // position squeezed
    state = apply_squeeze(&state, Party::C, r)?;
    // Columns: the P-squeezed input spreads evenly over all three outputs;
    // the X-squeezed inputs span the difference subspace.
    let s3 = 3.0_f64.sqrt();
    let s2 = 2.0_f64.sqrt();
    let s6 = 6.0_f64.sqrt();
    let o = DMatrix::from_row_slice(
        3,
        3,
        &[
            1.0 / s3, 1.0 / s2, 1.0 / s6, //
            1.0 / s3, -1.0 / s2, 1.0 / s6, //
            1.0 / s3, 0.0, -2.0 / s6,
        ],
    );
    apply_passive_orthogonal(&state, &o)
}

/// Dual-steering network: a two-mode squeezed pair on (A, B'), then B'
/// split on a balanced beam splitter with vacuum into modes B and C.
/// The B and C outputs have identical statistics.
pub fn dual_steering_network(r: f64) -> Result<GaussianState> {
    if r < 0.0 {
        return Err(Error::InvalidArgument(format!(
            "squeezing parameter must be nonnegative, got {r}"
        )));
    }
    let mut state = vacuum(3);
    state = apply_two_mode_squeeze(&state, Party::A, Party::B, r)?;
    // balanced splitter with the mirror phase so B and C come out symmetric
    let s2 = 2.0_f64.sqrt();
    let o = DMatrix::from_row_slice(
        3,
        3,
        &[
            1.0, 0.0, 0.0, //
            0.0, 1.0 / s2, 1.0 / s2, //
            0.0, 1.0 / s2, -1.0 / s2,
        ],
    );
    apply_passive_orthogonal(&state, &o)
}

/// Random physical Gaussian state: a random symplectic network (beam
/// splitters, phase rotations, squeezers) applied to a thermal state with
/// symplectic eigenvalues >= 1, plus a random mean. Deterministic in the
/// seed.
pub fn random_gaussian_state(n_modes: usize, seed: u64) -> Result<GaussianState> {
    if n_modes == 0 {
        return Err(Error::InvalidArgument("need at least one mode".into()));
    }
    let mut rng = seeded_rng(seed ^ 0x6A55_1A11);
    let mut cov = DMatrix::zeros(2 * n_modes, 2 * n_modes);
    for k in 0..n_modes {
        let nu = 1.0 + rng.random::<f64>() * 1.5;
        cov[(2 * k, 2 * k)] = nu;
        cov[(2 * k + 1, 2 * k + 1)] = nu;
    }
    let mean = DVector::from_fn(2 * n_modes, |_, _| rng.random_range(-2.0..2.0));
    let mut state = GaussianState::new_unchecked(n_modes, mean, cov);

    let layers = 2 * n_modes * n_modes;
    for _ in 0..layers {
        let i = Party(rng.random_range(0..n_modes));
        state = apply_phase_rotation(&state, i, rng.random_range(0.0..std::f64::consts::TAU))?;
        state = apply_squeeze(&state, i, rng.random_range(-0.6..0.6))?;
        if n_modes > 1 {
            let j = loop {
                let j = Party(rng.random_range(0..n_modes));
                if j != i {
                    break j;
                }
            };
            state = apply_beam_splitter(&state, i, j, rng.random::<f64>())?;
        }
    }
    Ok(state)
}

/// Loss-channel equivalent of one arm of the dual-steering network, used as
/// an independent cross-check in tests.
#[cfg(test)]
pub(crate) fn tmsv_with_loss(r: f64, mode: Party, efficiency: f64) -> Result<GaussianState> {
    let tmsv = two_mode_squeezed(r)?;
    super::channels::apply_loss(&tmsv, mode, efficiency)
}
