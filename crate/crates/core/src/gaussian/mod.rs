//! Continuous-variable Gaussian states in the covariance-matrix formalism.
//!
//! Quadratures are ordered (X1, P1, ..., Xn, Pn) and scaled so the vacuum
//! variance is 1 (Heisenberg bound dX dP >= 1). Modes double as parties:
//! mode k is party k.

mod channels;
mod constructions;

pub use channels::{
    apply_beam_splitter, apply_loss, apply_passive_orthogonal, apply_phase_rotation,
    apply_squeeze, apply_symplectic, apply_two_mode_squeeze, beam_splitter_symplectic,
};
pub use constructions::{
    cv_ghz, dual_steering_network, random_gaussian_state, two_mode_squeezed, vacuum,
};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigenvalues, im, re, CMatrix};
use crate::party::Party;

/// Symmetry / physicality tolerances for covariance validation.
pub const COV_SYMMETRY_TOL: f64 = 1e-10;
pub const PHYSICALITY_TOL: f64 = 1e-9;

/// The standard symplectic form for n modes in (X1, P1, ...) ordering:
/// block diagonal [[0, 1], [-1, 0]].
pub fn symplectic_form(n_modes: usize) -> DMatrix<f64> {
    let mut omega = DMatrix::zeros(2 * n_modes, 2 * n_modes);
    for k in 0..n_modes {
        omega[(2 * k, 2 * k + 1)] = 1.0;
        omega[(2 * k + 1, 2 * k)] = -1.0;
    }
    omega
}

/// A Gaussian state: mean vector and covariance matrix over n modes.
#[derive(Clone, Debug)]
pub struct GaussianState {
    n_modes: usize,
    mean: DVector<f64>,
    cov: DMatrix<f64>,
}

impl GaussianState {
    pub fn new(n_modes: usize, mean: DVector<f64>, cov: DMatrix<f64>) -> Result<Self> {
        if n_modes == 0 {
            return Err(Error::InvalidState("need at least one mode".into()));
        }
        let d = 2 * n_modes;
        if mean.len() != d || cov.nrows() != d || cov.ncols() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                actual: cov.nrows(),
            });
        }
        let sym_defect = (&cov - cov.transpose())
            .iter()
            .map(|v| v.abs())
            .fold(0.0, f64::max);
        if sym_defect > COV_SYMMETRY_TOL {
            return Err(Error::InvalidState(format!(
                "covariance not symmetric: defect {sym_defect:.3e}"
            )));
        }
        let state = GaussianState { n_modes, mean, cov };
        let defect = state.physicality_defect();
        if defect > PHYSICALITY_TOL {
            return Err(Error::InvalidState(format!(
                "unphysical covariance: min eig of (cov + i Omega) = {:.3e}",
                -defect
            )));
        }
        Ok(state)
    }

    pub(crate) fn new_unchecked(n_modes: usize, mean: DVector<f64>, cov: DMatrix<f64>) -> Self {
        GaussianState { n_modes, mean, cov }
    }

    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    pub fn modes(&self) -> Vec<Party> {
        (0..self.n_modes).map(Party).collect()
    }

    pub fn mean(&self) -> &DVector<f64> {
        &self.mean
    }

    pub fn cov(&self) -> &DMatrix<f64> {
        &self.cov
    }

    /// Index of X (or P) of a mode in the quadrature ordering.
    pub fn x_index(mode: Party) -> usize {
        2 * mode.index()
    }

    pub fn p_index(mode: Party) -> usize {
        2 * mode.index() + 1
    }

    /// How far cov + i Omega is from positive semidefinite (0 = physical).
    pub fn physicality_defect(&self) -> f64 {
        let d = 2 * self.n_modes;
        let omega = symplectic_form(self.n_modes);
        let h = CMatrix::from_fn(d, d, |i, j| re(self.cov[(i, j)]) + im(omega[(i, j)]));
        (-hermitian_eigenvalues(&h)[0]).max(0.0)
    }

    /// Symplectic (Williamson) eigenvalues; all >= 1 for physical states.
    pub fn symplectic_eigenvalues(&self) -> Vec<f64> {
        let d = 2 * self.n_modes;
        // sqrt(V) Omega sqrt(V) is real antisymmetric; i times it is
        // Hermitian with eigenvalues +/- nu_k.
        let cov_c = CMatrix::from_fn(d, d, |i, j| re(self.cov[(i, j)]));
        let sqrt_v = crate::linalg::psd_sqrt(&cov_c);
        let omega = symplectic_form(self.n_modes);
        let omega_c = CMatrix::from_fn(d, d, |i, j| re(omega[(i, j)]));
        let a = &sqrt_v * omega_c * &sqrt_v;
        let h = a.map(|z| z * Complex64::new(0.0, 1.0));
        let eigs = hermitian_eigenvalues(&h);
        eigs.into_iter().filter(|&v| v > 0.0).collect()
    }
}

/// A weighted quadrature combination sum_i w_i r_i.
#[derive(Clone, Debug)]
pub struct QuadratureObservable {
    weights: DVector<f64>,
}

impl QuadratureObservable {
    pub fn new(weights: DVector<f64>) -> Result<Self> {
        if weights.iter().all(|w| w.abs() < 1e-15) {
            return Err(Error::InvalidObservable("zero weight vector".into()));
        }
        Ok(QuadratureObservable { weights })
    }

    /// The X quadrature of one mode in an n-mode system.
    pub fn x(mode: Party, n_modes: usize) -> Self {
        let mut w = DVector::zeros(2 * n_modes);
        w[GaussianState::x_index(mode)] = 1.0;
        QuadratureObservable { weights: w }
    }

    /// The P quadrature of one mode in an n-mode system.
    pub fn p(mode: Party, n_modes: usize) -> Self {
        let mut w = DVector::zeros(2 * n_modes);
        w[GaussianState::p_index(mode)] = 1.0;
        QuadratureObservable { weights: w }
    }

    /// Linear combination with the given coefficients on X and P of each
    /// listed mode: sum_k (cx_k X_k + cp_k P_k).
    pub fn combination(terms: &[(Party, f64, f64)], n_modes: usize) -> Result<Self> {
        let mut w = DVector::zeros(2 * n_modes);
        for &(mode, cx, cp) in terms {
            if mode.index() >= n_modes {
                return Err(Error::UnknownParty(mode.label()));
            }
            w[GaussianState::x_index(mode)] += cx;
            w[GaussianState::p_index(mode)] += cp;
        }
        QuadratureObservable::new(w)
    }

    pub fn weights(&self) -> &DVector<f64> {
        &self.weights
    }

    /// Modes with a nonzero weight.
    pub fn support(&self) -> Vec<Party> {
        (0..self.weights.len() / 2)
            .filter(|&m| {
                self.weights[2 * m].abs() > 1e-15 || self.weights[2 * m + 1].abs() > 1e-15
            })
            .map(Party)
            .collect()
    }

    /// The commutator coefficient |w_u^T Omega w_v|; the uncertainty product
    /// bound for the pair (u, v).
    pub fn commutator_bound(&self, other: &QuadratureObservable) -> f64 {
        let n = self.weights.len() / 2;
        let omega = symplectic_form(n);
        (self.weights.transpose() * omega * &other.weights)[(0, 0)].abs()
    }
}

/// Variance of a quadrature combination: w^T cov w.
pub fn variance_of(state: &GaussianState, obs: &QuadratureObservable) -> Result<f64> {
    if obs.weights().len() != 2 * state.n_modes() {
        return Err(Error::DimensionMismatch {
            expected: 2 * state.n_modes(),
            actual: obs.weights().len(),
        });
    }
    Ok((obs.weights().transpose() * state.cov() * obs.weights())[(0, 0)])
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn vacuum_saturates_heisenberg() {
        let v = vacuum(1);
        let x = QuadratureObservable::x(Party::A, 1);
        let p = QuadratureObservable::p(Party::A, 1);
        let dx = variance_of(&v, &x).unwrap().sqrt();
        let dp = variance_of(&v, &p).unwrap().sqrt();
        assert_relative_eq!(dx * dp, 1.0, epsilon = 1e-12);
        assert!(v.physicality_defect() < 1e-12);
        let nus = v.symplectic_eigenvalues();
        assert_eq!(nus.len(), 1);
        assert_relative_eq!(nus[0], 1.0, epsilon = 1e-9);
    }

    #[test]
    fn rejects_unphysical_covariance() {
        // variance below vacuum in both quadratures
        let cov = DMatrix::from_diagonal(&DVector::from_vec(vec![0.5, 0.5]));
        assert!(GaussianState::new(1, DVector::zeros(2), cov).is_err());
        // asymmetric matrix
        let mut cov = DMatrix::identity(2, 2);
        cov[(0, 1)] = 0.1;
        assert!(GaussianState::new(1, DVector::zeros(2), cov).is_err());
    }

    #[test]
    fn commutator_bound_of_x_and_p() {
        let x = QuadratureObservable::x(Party::A, 2);
        let p = QuadratureObservable::p(Party::A, 2);
        assert_relative_eq!(x.commutator_bound(&p), 1.0, epsilon = 1e-15);
        let xb = QuadratureObservable::x(Party::B, 2);
        assert_relative_eq!(x.commutator_bound(&xb), 0.0, epsilon = 1e-15);
        // [X_B - X_C style] difference with a sum commutes
        let diff = QuadratureObservable::combination(
            &[(Party::A, 1.0, 0.0), (Party::B, -1.0, 0.0)],
            2,
        )
        .unwrap();
        let sum_p = QuadratureObservable::combination(
            &[(Party::A, 0.0, 1.0), (Party::B, 0.0, 1.0)],
            2,
        )
        .unwrap();
        assert_relative_eq!(diff.commutator_bound(&sum_p), 0.0, epsilon = 1e-15);
    }

    #[test]
    fn zero_observable_is_rejected() {
        assert!(QuadratureObservable::new(DVector::zeros(4)).is_err());
    }

    #[test]
    fn variance_checks_dimensions() {
        let v = vacuum(1);
        let obs = QuadratureObservable::x(Party::B, 2);
        assert!(variance_of(&v, &obs).is_err());
    }
}
