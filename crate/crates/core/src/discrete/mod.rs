//! Finite-dimensional multiparty states: density matrices over a tensor
//! product of parties, spin observables, canonical states, projective
//! measurement and concurrence.

mod concurrence;
mod measure;
mod spin;
mod states;

pub use concurrence::concurrence;
pub use measure::{measure_projective, measure_spin, MeasurementBranch, MeasurementEnsemble};
pub use spin::{
    pauli_matrix, spin_component_matrices, spin_matrix, uncertainty_bound, Axis, SpinObservable,
    SpinUnits,
};
pub use states::{
    make_bell, make_ghz, make_w, random_mixed_state, random_pure_state, BellKind,
};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{hermiticity_defect, min_hermitian_eigenvalue, re, trace_product_re, CMatrix, CVector};
use crate::party::{ensure_valid_group, Party};

/// Hermiticity / trace tolerance for state validation.
pub const STATE_TOL: f64 = 1e-10;

/// A density matrix over an ordered list of parties.
///
/// Party `k` occupies tensor slot `k` (slot 0 is the most significant index
/// factor). The matrix is validated on construction: Hermitian and unit
/// trace within 1e-10, smallest eigenvalue >= -1e-10.
#[derive(Clone, Debug)]
pub struct DensityState {
    party_dims: Vec<usize>,
    matrix: CMatrix,
}

impl DensityState {
    pub fn new(party_dims: Vec<usize>, matrix: CMatrix) -> Result<Self> {
        validate_density(&party_dims, &matrix)?;
        Ok(DensityState { party_dims, matrix })
    }

    /// Constructs without the eigenvalue check (still checks shape).
    /// For internal use on matrices that are positive by construction.
    pub(crate) fn new_unchecked(party_dims: Vec<usize>, matrix: CMatrix) -> Self {
        debug_assert_eq!(party_dims.iter().product::<usize>(), matrix.nrows());
        DensityState { party_dims, matrix }
    }

    /// Density matrix |psi><psi| of a pure state; the vector is normalized.
    pub fn from_pure(party_dims: Vec<usize>, psi: &CVector) -> Result<Self> {
        let dim: usize = party_dims.iter().product();
        if psi.len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                actual: psi.len(),
            });
        }
        let norm = psi.norm();
        if norm < 1e-14 {
            return Err(Error::InvalidState("zero state vector".into()));
        }
        let normalized = psi / re(norm);
        Ok(DensityState::new_unchecked(
            party_dims,
            &normalized * normalized.adjoint(),
        ))
    }

    pub fn maximally_mixed(party_dims: Vec<usize>) -> Self {
        let dim: usize = party_dims.iter().product();
        let m = CMatrix::identity(dim, dim) * re(1.0 / dim as f64);
        DensityState::new_unchecked(party_dims, m)
    }

    pub fn n_parties(&self) -> usize {
        self.party_dims.len()
    }

    pub fn parties(&self) -> Vec<Party> {
        (0..self.party_dims.len()).map(Party).collect()
    }

    pub fn party_dims(&self) -> &[usize] {
        &self.party_dims
    }

    pub fn dim_of(&self, party: Party) -> Result<usize> {
        self.party_dims
            .get(party.index())
            .copied()
            .ok_or_else(|| Error::UnknownParty(party.label()))
    }

    pub fn total_dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn trace(&self) -> f64 {
        self.matrix.trace().re
    }

    pub fn purity(&self) -> f64 {
        trace_product_re(&self.matrix, &self.matrix)
    }

    /// <op> = Re tr(rho * op) for a full-dimension operator.
    pub fn expectation(&self, op: &CMatrix) -> Result<f64> {
        if op.nrows() != self.total_dim() || op.ncols() != self.total_dim() {
            return Err(Error::DimensionMismatch {
                expected: self.total_dim(),
                actual: op.nrows(),
            });
        }
        Ok(trace_product_re(&self.matrix, op))
    }

    /// Expectation of an operator supported on `group` (in the listed order).
    pub fn expectation_on(&self, group: &[Party], op: &CMatrix) -> Result<f64> {
        let embedded = self.embed_operator(group, op)?;
        Ok(trace_product_re(&self.matrix, &embedded))
    }

    /// Lifts `op`, acting on the tensor product of `group` (in listed order),
    /// to the full space with identity on the remaining parties.
    pub fn embed_operator(&self, group: &[Party], op: &CMatrix) -> Result<CMatrix> {
        embed_operator(&self.party_dims, group, op)
    }

    /// Reduced state on `keep`; the result's slot `k` is `keep[k]`.
    pub fn partial_trace(&self, keep: &[Party]) -> Result<DensityState> {
        if keep.is_empty() {
            return Err(Error::InvalidArgument("empty keep list".into()));
        }
        ensure_valid_group(keep, self.n_parties())?;

        let kept_dims: Vec<usize> = keep.iter().map(|p| self.party_dims[p.index()]).collect();
        let kept_dim: usize = kept_dims.iter().product();
        let traced: Vec<usize> = (0..self.n_parties())
            .filter(|i| !keep.iter().any(|p| p.index() == *i))
            .collect();
        let traced_dims: Vec<usize> = traced.iter().map(|&i| self.party_dims[i]).collect();
        let traced_dim: usize = traced_dims.iter().product::<usize>().max(1);

        let strides = strides(&self.party_dims);
        let mut out = CMatrix::zeros(kept_dim, kept_dim);
        let mut kept_digits_a = vec![0usize; keep.len()];
        let mut kept_digits_b = vec![0usize; keep.len()];
        let mut traced_digits = vec![0usize; traced.len()];

        for a in 0..kept_dim {
            split_index(a, &kept_dims, &mut kept_digits_a);
            for b in 0..kept_dim {
                split_index(b, &kept_dims, &mut kept_digits_b);
                let mut acc = Complex64::new(0.0, 0.0);
                for t in 0..traced_dim {
                    split_index(t, &traced_dims, &mut traced_digits);
                    let mut row = 0usize;
                    let mut col = 0usize;
                    for (k, p) in keep.iter().enumerate() {
                        row += kept_digits_a[k] * strides[p.index()];
                        col += kept_digits_b[k] * strides[p.index()];
                    }
                    for (k, &slot) in traced.iter().enumerate() {
                        row += traced_digits[k] * strides[slot];
                        col += traced_digits[k] * strides[slot];
                    }
                    acc += self.matrix[(row, col)];
                }
                out[(a, b)] = acc;
            }
        }
        Ok(DensityState::new_unchecked(kept_dims, out))
    }
}

/// Validates the density-matrix invariants.
pub fn validate_density(party_dims: &[usize], matrix: &CMatrix) -> Result<()> {
    if party_dims.is_empty() || party_dims.contains(&0) {
        return Err(Error::InvalidState("party dimensions must be positive".into()));
    }
    let dim: usize = party_dims.iter().product();
    if matrix.nrows() != dim || matrix.ncols() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            actual: matrix.nrows(),
        });
    }
    let h = hermiticity_defect(matrix);
    if h > STATE_TOL {
        return Err(Error::InvalidState(format!("not Hermitian: defect {h:.3e}")));
    }
    let tr = matrix.trace();
    if (tr.re - 1.0).abs() > STATE_TOL || tr.im.abs() > STATE_TOL {
        return Err(Error::InvalidState(format!("trace {} != 1", tr.re)));
    }
    let min_eig = min_hermitian_eigenvalue(matrix);
    if min_eig < -STATE_TOL {
        return Err(Error::InvalidState(format!(
            "negative eigenvalue {min_eig:.3e}"
        )));
    }
    Ok(())
}

pub(crate) fn strides(dims: &[usize]) -> Vec<usize> {
    let mut s = vec![1usize; dims.len()];
    for i in (0..dims.len().saturating_sub(1)).rev() {
        s[i] = s[i + 1] * dims[i + 1];
    }
    s
}

pub(crate) fn split_index(mut idx: usize, dims: &[usize], out: &mut [usize]) {
    for k in (0..dims.len()).rev() {
        out[k] = idx % dims[k];
        idx /= dims[k];
    }
}

/// Standalone operator embedding used by `DensityState::embed_operator`.
pub fn embed_operator(party_dims: &[usize], group: &[Party], op: &CMatrix) -> Result<CMatrix> {
    if group.is_empty() {
        return Err(Error::InvalidArgument("empty group".into()));
    }
    ensure_valid_group(group, party_dims.len())?;
    let group_dims: Vec<usize> = group.iter().map(|p| party_dims[p.index()]).collect();
    let group_dim: usize = group_dims.iter().product();
    if op.nrows() != group_dim || op.ncols() != group_dim {
        return Err(Error::DimensionMismatch {
            expected: group_dim,
            actual: op.nrows(),
        });
    }
    let rest: Vec<usize> = (0..party_dims.len())
        .filter(|i| !group.iter().any(|p| p.index() == *i))
        .collect();
    let rest_dims: Vec<usize> = rest.iter().map(|&i| party_dims[i]).collect();
    let rest_dim: usize = rest_dims.iter().product::<usize>().max(1);
    let full_dim: usize = party_dims.iter().product();

    let strides = strides(party_dims);
    let mut out = CMatrix::zeros(full_dim, full_dim);
    let mut gi = vec![0usize; group.len()];
    let mut gj = vec![0usize; group.len()];
    let mut rr = vec![0usize; rest.len()];

    for i in 0..group_dim {
        split_index(i, &group_dims, &mut gi);
        for j in 0..group_dim {
            let v = op[(i, j)];
            if v.norm_sqr() == 0.0 {
                continue;
            }
            split_index(j, &group_dims, &mut gj);
            for r in 0..rest_dim {
                split_index(r, &rest_dims, &mut rr);
                let mut row = 0usize;
                let mut col = 0usize;
                for (k, p) in group.iter().enumerate() {
                    row += gi[k] * strides[p.index()];
                    col += gj[k] * strides[p.index()];
                }
                for (k, &slot) in rest.iter().enumerate() {
                    row += rr[k] * strides[slot];
                    col += rr[k] * strides[slot];
                }
                out[(row, col)] = v;
            }
        }
    }
    Ok(out)
}
