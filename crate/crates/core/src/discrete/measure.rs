//! Projective measurement of an observable on a party group.

use crate::error::{Error, Result};
use crate::linalg::{hermiticity_defect, outer, re, trace_product_re, CMatrix};
use crate::party::{ensure_valid_group, Party};

use super::DensityState;

/// Eigenvalues closer than this are merged into one coarse outcome with the
/// full eigenspace projector.
const DEGENERACY_TOL: f64 = 1e-8;

/// Probability below which an outcome branch is dropped (its conditional
/// state is undefined).
const BRANCH_TOL: f64 = 1e-12;

/// One measurement outcome: probability, outcome value, and the conditional
/// state of the unmeasured parties.
#[derive(Clone, Debug)]
pub struct MeasurementBranch {
    pub probability: f64,
    pub outcome: f64,
    pub state: DensityState,
}

/// The full outcome ensemble of a projective measurement. Conditional states
/// live on the unmeasured parties in ascending slot order.
#[derive(Clone, Debug)]
pub struct MeasurementEnsemble {
    pub branches: Vec<MeasurementBranch>,
}

impl MeasurementEnsemble {
    pub fn total_probability(&self) -> f64 {
        self.branches.iter().map(|b| b.probability).sum()
    }

    /// Sum of p_i * outcome_i; equals tr(rho O) for the measured observable.
    pub fn mean_outcome(&self) -> f64 {
        self.branches
            .iter()
            .map(|b| b.probability * b.outcome)
            .sum()
    }
}

/// Measures a spin component on a single party.
pub fn measure_spin(
    state: &DensityState,
    party: Party,
    observable: &super::SpinObservable,
) -> Result<MeasurementEnsemble> {
    let dim = state.dim_of(party)?;
    measure_projective(state, &[party], &observable.matrix(dim)?)
}

/// Measures the Hermitian `observable`, acting on the joint space of
/// `group` (in listed order), on `state`.
///
/// Outcomes are eigenvalues; degenerate eigenvalues are merged and measured
/// with the eigenspace projector. Conditional states are the normalized
/// projected remainders on the unmeasured parties.
pub fn measure_projective(
    state: &DensityState,
    group: &[Party],
    observable: &CMatrix,
) -> Result<MeasurementEnsemble> {
    if group.is_empty() {
        return Err(Error::InvalidArgument("empty measurement group".into()));
    }
    ensure_valid_group(group, state.n_parties())?;
    if group.len() == state.n_parties() {
        return Err(Error::InvalidArgument(
            "measurement must leave at least one unmeasured party".into(),
        ));
    }
    let group_dim: usize = group
        .iter()
        .map(|p| state.party_dims()[p.index()])
        .product();
    if observable.nrows() != group_dim || observable.ncols() != group_dim {
        return Err(Error::DimensionMismatch {
            expected: group_dim,
            actual: observable.nrows(),
        });
    }
    if hermiticity_defect(observable) > 1e-10 {
        return Err(Error::InvalidObservable(
            "measurement observable is not Hermitian".into(),
        ));
    }

    let rest: Vec<Party> = (0..state.n_parties())
        .map(Party)
        .filter(|p| !group.contains(p))
        .collect();

    let eig = observable.clone().symmetric_eigen();
    let mut order: Vec<usize> = (0..group_dim).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].partial_cmp(&eig.eigenvalues[b]).unwrap());

    let mut branches = Vec::new();
    let mut k = 0;
    while k < group_dim {
        // cluster eigenvalues within the degeneracy tolerance
        let mut cluster = vec![order[k]];
        let mut last = eig.eigenvalues[order[k]];
        let mut k2 = k + 1;
        while k2 < group_dim && (eig.eigenvalues[order[k2]] - last).abs() <= DEGENERACY_TOL {
            last = eig.eigenvalues[order[k2]];
            cluster.push(order[k2]);
            k2 += 1;
        }
        k = k2;

        let mut projector = CMatrix::zeros(group_dim, group_dim);
        let mut value = 0.0;
        for &idx in &cluster {
            let v = eig.eigenvectors.column(idx).into_owned();
            projector += outer(&v);
            value += eig.eigenvalues[idx];
        }
        value /= cluster.len() as f64;

        let projector_full = state.embed_operator(group, &projector)?;
        let probability = trace_product_re(state.matrix(), &projector_full);
        if probability < BRANCH_TOL {
            continue;
        }
        let projected = &projector_full * state.matrix() * &projector_full;
        let sub =
            DensityState::new_unchecked(state.party_dims().to_vec(), projected).partial_trace(&rest)?;
        // renormalize exactly so downstream validation stays inside tolerance
        let tr = sub.matrix().trace().re;
        let conditional =
            DensityState::new(sub.party_dims().to_vec(), sub.matrix() * re(1.0 / tr))?;
        branches.push(MeasurementBranch {
            probability,
            outcome: value,
            state: conditional,
        });
    }

    Ok(MeasurementEnsemble { branches })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use crate::discrete::{make_bell, make_w, pauli_matrix, Axis, BellKind, DensityState};

    #[test]
    fn w_state_z_measurement_on_alice() {
        let w = make_w();
        let obs = crate::discrete::SpinObservable::axis(Axis::Z, crate::discrete::SpinUnits::Pauli);
        let via_spin = measure_spin(&w, Party::A, &obs).unwrap();
        assert_eq!(via_spin.branches.len(), 2);
        let ens = measure_projective(&w, &[Party::A], &pauli_matrix(Axis::Z)).unwrap();
        assert_eq!(ens.branches.len(), 2);
        assert_relative_eq!(ens.total_probability(), 1.0, epsilon = 1e-12);

        // ascending eigenvalue order: -1 first
        let down = &ens.branches[0];
        assert_relative_eq!(down.outcome, -1.0, epsilon = 1e-12);
        assert_relative_eq!(down.probability, 2.0 / 3.0, epsilon = 1e-12);

        let up = &ens.branches[1];
        assert_relative_eq!(up.outcome, 1.0, epsilon = 1e-12);
        assert_relative_eq!(up.probability, 1.0 / 3.0, epsilon = 1e-12);
        // Alice up implies Bob and Charlie both down: |dd><dd|
        assert_relative_eq!(up.state.matrix()[(3, 3)].re, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn bell_x_measurement_gives_matching_eigenstates() {
        let bell = make_bell(BellKind::PsiPlus);
        let sx = pauli_matrix(Axis::X);
        let ens = measure_projective(&bell, &[Party::A], &sx).unwrap();
        assert_eq!(ens.branches.len(), 2);
        for branch in &ens.branches {
            assert_relative_eq!(branch.probability, 0.5, epsilon = 1e-12);
            // conditional B state is the X eigenstate with the same sign
            let ex = branch.state.expectation(&sx).unwrap();
            assert_relative_eq!(ex, branch.outcome, epsilon = 1e-12);
        }
    }

    #[test]
    fn maximally_mixed_stays_uncorrelated() {
        let mm = DensityState::maximally_mixed(vec![2, 2]);
        let ens = measure_projective(&mm, &[Party::A], &pauli_matrix(Axis::Z)).unwrap();
        for branch in &ens.branches {
            assert_relative_eq!(branch.probability, 0.5, epsilon = 1e-12);
            assert_relative_eq!(branch.state.matrix()[(0, 0)].re, 0.5, epsilon = 1e-12);
            assert_relative_eq!(branch.state.matrix()[(0, 1)].norm(), 0.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn degenerate_observable_merges_outcomes() {
        // sx (x) sx on a GHZ pair group has eigenvalues {+1, +1, -1, -1}
        let ghz = crate::discrete::make_ghz(3).unwrap();
        let sx = pauli_matrix(Axis::X);
        let xx = sx.kronecker(&sx);
        let ens = measure_projective(&ghz, &[Party::A, Party::C], &xx).unwrap();
        assert_eq!(ens.branches.len(), 2);
        assert_relative_eq!(ens.total_probability(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn rejects_invalid_measurements() {
        let bell = make_bell(BellKind::PhiPlus);
        // non-Hermitian
        let mut bad = CMatrix::zeros(2, 2);
        bad[(0, 1)] = re(1.0);
        assert!(measure_projective(&bell, &[Party::A], &bad).is_err());
        // dimension mismatch
        let sx = pauli_matrix(Axis::X);
        let xx = sx.kronecker(&sx);
        assert!(measure_projective(&bell, &[Party::A], &xx).is_err());
        // measuring everything leaves no conditional system
        assert!(measure_projective(&bell, &[Party::A, Party::B], &xx).is_err());
    }
}
