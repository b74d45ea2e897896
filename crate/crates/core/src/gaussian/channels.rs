//! Symplectic channels acting on Gaussian states.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::party::Party;

use super::GaussianState;

/// Applies a symplectic matrix: cov -> S cov S^T, mean -> S mean.
pub fn apply_symplectic(state: &GaussianState, s: &DMatrix<f64>) -> Result<GaussianState> {
    let d = 2 * state.n_modes();
    if s.nrows() != d || s.ncols() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            actual: s.nrows(),
        });
    }
    Ok(GaussianState::new_unchecked(
        state.n_modes(),
        s * state.mean(),
        s * state.cov() * s.transpose(),
    ))
}

/// The beam-splitter symplectic matrix mixing two modes with
/// cos(theta) = sqrt(transmissivity).
pub fn beam_splitter_symplectic(
    n_modes: usize,
    mode_i: Party,
    mode_j: Party,
    transmissivity: f64,
) -> Result<DMatrix<f64>> {
    if mode_i == mode_j || mode_i.index() >= n_modes || mode_j.index() >= n_modes {
        return Err(Error::InvalidArgument(format!(
            "beam splitter needs two distinct valid modes, got {} {}",
            mode_i, mode_j
        )));
    }
    if !(0.0..=1.0).contains(&transmissivity) {
        return Err(Error::InvalidArgument(format!(
            "transmissivity {transmissivity} outside [0, 1]"
        )));
    }
    let c = transmissivity.sqrt();
    let s = (1.0 - transmissivity).sqrt();
    let mut m = DMatrix::identity(2 * n_modes, 2 * n_modes);
    for offset in 0..2 {
        let a = 2 * mode_i.index() + offset;
        let b = 2 * mode_j.index() + offset;
        m[(a, a)] = c;
        m[(a, b)] = s;
        m[(b, a)] = -s;
        m[(b, b)] = c;
    }
    Ok(m)
}

/// Mixes two modes on a beam splitter of the given transmissivity.
pub fn apply_beam_splitter(
    state: &GaussianState,
    mode_i: Party,
    mode_j: Party,
    transmissivity: f64,
) -> Result<GaussianState> {
    let s = beam_splitter_symplectic(state.n_modes(), mode_i, mode_j, transmissivity)?;
    apply_symplectic(state, &s)
}

/// Pure loss on one mode: beam splitter with a vacuum ancilla, ancilla
/// traced out. The mode block becomes eta * V + (1 - eta) * I, cross blocks
/// scale by sqrt(eta), the mean by sqrt(eta).
pub fn apply_loss(state: &GaussianState, mode: Party, efficiency: f64) -> Result<GaussianState> {
    if mode.index() >= state.n_modes() {
        return Err(Error::UnknownParty(mode.label()));
    }
    if !(0.0..=1.0).contains(&efficiency) {
        return Err(Error::InvalidArgument(format!(
            "efficiency {efficiency} outside [0, 1]"
        )));
    }
    let root = efficiency.sqrt();
    let mut cov = state.cov().clone();
    let mut mean = state.mean().clone();
    let d = 2 * state.n_modes();
    let xi = 2 * mode.index();
    for k in 0..d {
        if k == xi || k == xi + 1 {
            continue;
        }
        cov[(xi, k)] *= root;
        cov[(k, xi)] *= root;
        cov[(xi + 1, k)] *= root;
        cov[(k, xi + 1)] *= root;
    }
    for a in 0..2 {
        for b in 0..2 {
            cov[(xi + a, xi + b)] *= efficiency;
        }
        cov[(xi + a, xi + a)] += 1.0 - efficiency;
        mean[xi + a] *= root;
    }
    Ok(GaussianState::new_unchecked(state.n_modes(), mean, cov))
}

/// Single-mode squeezer: X -> e^{-r} X, P -> e^{r} P (r > 0 squeezes X).
pub fn apply_squeeze(state: &GaussianState, mode: Party, r: f64) -> Result<GaussianState> {
    if mode.index() >= state.n_modes() {
        return Err(Error::UnknownParty(mode.label()));
    }
    let d = 2 * state.n_modes();
    let mut s = DMatrix::identity(d, d);
    s[(2 * mode.index(), 2 * mode.index())] = (-r).exp();
    s[(2 * mode.index() + 1, 2 * mode.index() + 1)] = r.exp();
    apply_symplectic(state, &s)
}

/// Phase rotation of one mode by theta in its (X, P) plane.
pub fn apply_phase_rotation(state: &GaussianState, mode: Party, theta: f64) -> Result<GaussianState> {
    if mode.index() >= state.n_modes() {
        return Err(Error::UnknownParty(mode.label()));
    }
    let d = 2 * state.n_modes();
    let mut s = DMatrix::identity(d, d);
    let xi = 2 * mode.index();
    s[(xi, xi)] = theta.cos();
    s[(xi, xi + 1)] = theta.sin();
    s[(xi + 1, xi)] = -theta.sin();
    s[(xi + 1, xi + 1)] = theta.cos();
    apply_symplectic(state, &s)
}

/// Two-mode squeezing interaction; from vacuum it produces the standard
/// correlated-X / anticorrelated-P pair.
pub fn apply_two_mode_squeeze(
    state: &GaussianState,
    mode_i: Party,
    mode_j: Party,
    r: f64,
) -> Result<GaussianState> {
    if mode_i == mode_j
        || mode_i.index() >= state.n_modes()
        || mode_j.index() >= state.n_modes()
    {
        return Err(Error::InvalidArgument(
            "two-mode squeezer needs two distinct valid modes".into(),
        ));
    }
    let d = 2 * state.n_modes();
    let (ch, sh) = (r.cosh(), r.sinh());
    let mut s = DMatrix::identity(d, d);
    let (xi, pi) = (2 * mode_i.index(), 2 * mode_i.index() + 1);
    let (xj, pj) = (2 * mode_j.index(), 2 * mode_j.index() + 1);
    s[(xi, xi)] = ch;
    s[(xi, xj)] = sh;
    s[(xj, xi)] = sh;
    s[(xj, xj)] = ch;
    s[(pi, pi)] = ch;
    s[(pi, pj)] = -sh;
    s[(pj, pi)] = -sh;
    s[(pj, pj)] = ch;
    apply_symplectic(state, &s)
}

/// Applies an orthogonal mode-mixing matrix O (n x n) identically to the X
/// and P blocks. Any such transformation is passive and symplectic.
pub fn apply_passive_orthogonal(state: &GaussianState, o: &DMatrix<f64>) -> Result<GaussianState> {
    let n = state.n_modes();
    if o.nrows() != n || o.ncols() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            actual: o.nrows(),
        });
    }
    let defect = (o * o.transpose() - DMatrix::identity(n, n))
        .iter()
        .map(|v| v.abs())
        .fold(0.0, f64::max);
    if defect > 1e-10 {
        return Err(Error::InvalidArgument(format!(
            "mode matrix not orthogonal: defect {defect:.3e}"
        )));
    }
    let mut s = DMatrix::zeros(2 * n, 2 * n);
    for a in 0..n {
        for b in 0..n {
            s[(2 * a, 2 * b)] = o[(a, b)];
            s[(2 * a + 1, 2 * b + 1)] = o[(a, b)];
        }
    }
    apply_symplectic(state, &s)
}
