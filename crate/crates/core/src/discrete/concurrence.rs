//! Wootters concurrence for two-qubit states.

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigenvalues, psd_sqrt, CMatrix};

use super::{pauli_matrix, Axis, DensityState};

/// Wootters concurrence of a two-qubit state:
/// max{0, l1 - l2 - l3 - l4} where l_i are the decreasing square roots of the
/// eigenvalues of rho (sy x sy) rho* (sy x sy).
pub fn concurrence(state: &DensityState) -> Result<f64> {
    if state.party_dims() != [2, 2] {
        return Err(Error::InvalidArgument(format!(
            "concurrence needs two qubit parties, got dims {:?}",
            state.party_dims()
        )));
    }
    let sy = pauli_matrix(Axis::Y);
    let yy = sy.kronecker(&sy);
    let rho = state.matrix();
    let rho_conj: CMatrix = rho.map(|z| z.conj());
    let rho_tilde = &yy * rho_conj * &yy;

    // eigenvalues of rho * rho_tilde via the Hermitian form
    // sqrt(rho) rho_tilde sqrt(rho), which shares its spectrum
    let sqrt_rho = psd_sqrt(rho);
    let m = &sqrt_rho * rho_tilde * &sqrt_rho;
    let eigs = hermitian_eigenvalues(&m);
    // eigenvalues at rounding-noise scale would blow up under the square
    // root; zero them relative to the largest
    let floor = eigs.iter().cloned().fold(0.0, f64::max) * 1e-12;
    let mut lambdas: Vec<f64> = eigs
        .into_iter()
        .map(|v| if v > floor { v.sqrt() } else { 0.0 })
        .collect();
    lambdas.sort_by(|a, b| b.partial_cmp(a).unwrap());
    Ok((lambdas[0] - lambdas[1] - lambdas[2] - lambdas[3]).max(0.0))
}
