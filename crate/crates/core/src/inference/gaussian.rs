//! Gaussian inference variances via the Schur complement.
//!
//! For Gaussian states the optimal measurement-plus-linear-estimation
//! residual for a target quadrature combination t given all quadratures of
//! a mode group G is the conditional covariance
//! Var(t) - Cov(t, r_G) V_G^{-1} Cov(r_G, t), with a pseudo-inverse when
//! the group block is singular.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::gaussian::{variance_of, GaussianState, QuadratureObservable};
use crate::party::{ensure_disjoint, ensure_valid_group, Party};

use super::{Conditioning, InferenceMode, InferenceResult, TargetSpec};

/// Optimal Gaussian inference variance of `target` given measurements on
/// `group`, plus the optimal linear-estimator weights over the group
/// quadratures.
pub fn conditional_variance_gaussian(
    state: &GaussianState,
    target: &QuadratureObservable,
    group: &[Party],
) -> Result<(f64, Vec<f64>)> {
    let total = variance_of(state, target)?;
    if group.is_empty() {
        return Ok((total, Vec::new()));
    }
    ensure_valid_group(group, state.n_modes())?;

    // quadrature indices of the group, (X, P) per mode in listed order
    let idx: Vec<usize> = group
        .iter()
        .flat_map(|m| [GaussianState::x_index(*m), GaussianState::p_index(*m)])
        .collect();
    let g = idx.len();

    let full_cross = state.cov() * target.weights();
    let cross = DVector::from_fn(g, |k, _| full_cross[idx[k]]);
    let block = DMatrix::from_fn(g, g, |r, c| state.cov()[(idx[r], idx[c])]);

    let estimator = match block.clone().cholesky() {
        Some(ch) => ch.solve(&cross),
        None => {
            let pinv = block
                .clone()
                .pseudo_inverse(1e-10)
                .map_err(|e| Error::InvalidState(format!("singular group block: {e}")))?;
            pinv * &cross
        }
    };
    let reduction = cross.dot(&estimator);
    let variance = (total - reduction).max(0.0);
    Ok((variance, estimator.iter().copied().collect()))
}

/// Full inference record for a steered mode group.
pub fn inf_variance_gaussian(
    state: &GaussianState,
    steered: &[Party],
    target: &QuadratureObservable,
    group: &[Party],
) -> Result<InferenceResult> {
    ensure_valid_group(steered, state.n_modes())?;
    ensure_disjoint(&[steered, group])?;
    let support = target.support();
    if !support.iter().all(|m| steered.contains(m)) {
        return Err(Error::InvalidObservable(format!(
            "target supported on {:?}, outside the steered modes",
            support.iter().map(|p| p.label()).collect::<Vec<_>>()
        )));
    }
    let (variance, weights) = conditional_variance_gaussian(state, target, group)?;
    let conditioning = if group.is_empty() {
        Conditioning::None
    } else {
        Conditioning::LinearEstimator {
            group: group.to_vec(),
            weights,
        }
    };
    Ok(InferenceResult {
        variance,
        steered: steered.to_vec(),
        steering_group: group.to_vec(),
        target: TargetSpec::Quadrature {
            weights: target.weights().iter().copied().collect(),
        },
        conditioning,
        mode: InferenceMode::Optimized,
    })
}

/// Product of inference uncertainties Delta(t1|G1) * Delta(t2|G2) for two
/// simultaneously measurable conditionings (disjoint groups).
pub fn inference_product_gaussian(
    state: &GaussianState,
    pair_a: (&QuadratureObservable, &[Party]),
    pair_b: (&QuadratureObservable, &[Party]),
) -> Result<f64> {
    ensure_disjoint(&[pair_a.1, pair_b.1])?;
    let (va, _) = conditional_variance_gaussian(state, pair_a.0, pair_a.1)?;
    let (vb, _) = conditional_variance_gaussian(state, pair_b.0, pair_b.1)?;
    Ok(va.sqrt() * vb.sqrt())
}
