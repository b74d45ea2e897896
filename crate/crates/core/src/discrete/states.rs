//! Canonical qubit states and seeded random-state generators.

use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{gaussian_complex_vector, re, seeded_rng, CVector};
use crate::party::Party;

use super::DensityState;

/// n-qubit GHZ state (|up...up> - |down...down>)/sqrt(2) as a density matrix.
pub fn make_ghz(n_parties: usize) -> Result<DensityState> {
    if n_parties < 2 {
        return Err(Error::InvalidArgument(format!(
            "GHZ needs at least 2 parties, got {n_parties}"
        )));
    }
    let dim = 1usize << n_parties;
    let mut psi = CVector::zeros(dim);
    let amp = 1.0 / 2.0_f64.sqrt();
    psi[0] = re(amp);
    psi[dim - 1] = re(-amp);
    DensityState::from_pure(vec![2; n_parties], &psi)
}

/// Three-qubit W state (|udd> + |dud> + |ddu>)/sqrt(3).
pub fn make_w() -> DensityState {
    let mut psi = CVector::zeros(8);
    let amp = 1.0 / 3.0_f64.sqrt();
    // up = index 0, down = index 1; slot A is the most significant bit
    psi[0b011] = re(amp);
    psi[0b101] = re(amp);
    psi[0b110] = re(amp);
    DensityState::from_pure(vec![2, 2, 2], &psi).expect("w state is well formed")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum BellKind {
    PhiPlus,
    PhiMinus,
    PsiPlus,
    PsiMinus,
}

impl FromStr for BellKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "phi+" => Ok(BellKind::PhiPlus),
            "phi-" => Ok(BellKind::PhiMinus),
            "psi+" => Ok(BellKind::PsiPlus),
            "psi-" => Ok(BellKind::PsiMinus),
            other => Err(Error::InvalidArgument(format!(
                "unknown Bell state kind: {other}"
            ))),
        }
    }
}

impl std::fmt::Display for BellKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            BellKind::PhiPlus => "phi+",
            BellKind::PhiMinus => "phi-",
            BellKind::PsiPlus => "psi+",
            BellKind::PsiMinus => "psi-",
        };
        write!(f, "{s}")
    }
}

/// One of the four two-qubit Bell states.
pub fn make_bell(kind: BellKind) -> DensityState {
    let amp = 1.0 / 2.0_f64.sqrt();
    let mut psi = CVector::zeros(4);
    match kind {
        BellKind::PhiPlus => {
            psi[0b00] = re(amp);
            psi[0b11] = re(amp);
        }
        BellKind::PhiMinus => {
            psi[0b00] = re(amp);
            psi[0b11] = re(-amp);
        }
        BellKind::PsiPlus => {
            psi[0b01] = re(amp);
            psi[0b10] = re(amp);
        }
        BellKind::PsiMinus => {
            psi[0b01] = re(amp);
            psi[0b10] = re(-amp);
        }
    }
    DensityState::from_pure(vec![2, 2], &psi).expect("bell state is well formed")
}

/// Haar-random pure state on the given party dimensions, deterministic in
/// the seed.
pub fn random_pure_state(party_dims: &[usize], seed: u64) -> Result<DensityState> {
    if party_dims.is_empty() || party_dims.contains(&0) {
        return Err(Error::InvalidArgument(
            "party dimensions must be positive".into(),
        ));
    }
    let dim: usize = party_dims.iter().product();
    let mut rng = seeded_rng(seed);
    let psi = gaussian_complex_vector(dim, &mut rng);
    DensityState::from_pure(party_dims.to_vec(), &psi)
}

/// Random mixed state: partial trace of a random pure state on a doubled
/// space. Deterministic in the seed.
pub fn random_mixed_state(party_dims: &[usize], seed: u64) -> Result<DensityState> {
    if party_dims.is_empty() || party_dims.contains(&0) {
        return Err(Error::InvalidArgument(
            "party dimensions must be positive".into(),
        ));
    }
    let dim: usize = party_dims.iter().product();
    let doubled = random_pure_state(&[dim, dim], seed)?;
    let reduced = doubled.partial_trace(&[Party(0)])?;
    Ok(DensityState::new_unchecked(
        party_dims.to_vec(),
        reduced.matrix().clone(),
    ))
}
