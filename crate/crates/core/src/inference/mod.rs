//! Average conditional (inference) variances: how well a steering party or
//! group can predict a steered party's observable.

mod discrete;
mod gaussian;

pub use discrete::{
    inf_variance_discrete, inference_sum_discrete, optimize_spin_inference, DiscreteConditioning,
};
pub use gaussian::{conditional_variance_gaussian, inf_variance_gaussian, inference_product_gaussian};

use serde::{Deserialize, Serialize};

use crate::discrete::SpinUnits;
use crate::party::Party;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InferenceMode {
    Specified,
    Optimized,
}

/// What was measured (or estimated) on the steering group to produce an
/// inference variance.
#[derive(Clone, Debug, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Conditioning {
    /// Spin component along a Bloch direction on a single steering party.
    SpinDirection { party: Party, direction: [f64; 3] },
    /// Joint projective measurement on the group; described, not reproduced.
    JointObservable { group: Vec<Party>, description: String },
    /// Optimal linear estimator weights over the group quadratures,
    /// ordered (X, P) per mode in group order.
    LinearEstimator { group: Vec<Party>, weights: Vec<f64> },
    /// No conditioning (empty group): the bare variance.
    None,
}

/// The observable whose conditional variance was computed.
#[derive(Clone, Debug, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TargetSpec {
    Spin {
        party: Party,
        direction: [f64; 3],
        units: SpinUnits,
    },
    Quadrature { weights: Vec<f64> },
}

/// An average conditional variance together with the measurement that
/// produced it.
#[derive(Clone, Debug, Serialize)]
pub struct InferenceResult {
    pub variance: f64,
    pub steered: Vec<Party>,
    pub steering_group: Vec<Party>,
    pub target: TargetSpec,
    pub conditioning: Conditioning,
    pub mode: InferenceMode,
}
