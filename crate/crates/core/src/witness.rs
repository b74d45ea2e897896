//! Steering and Bell witnesses with their thresholds and detection verdicts.
//!
//! Variance-type witnesses (E, S2, S3) detect steering when the value drops
//! below the threshold; correlation-type witnesses (S-tilde, CHSH-moment
//! pairs, Bell-CHSH) detect when the value exceeds it.

use serde::{Deserialize, Serialize};

use crate::discrete::{pauli_matrix, Axis, DensityState, SpinObservable, SpinUnits};
use crate::error::{Error, Result};
use crate::gaussian::{GaussianState, QuadratureObservable};
use crate::inference::{
    conditional_variance_gaussian, inf_variance_discrete, optimize_spin_inference,
    DiscreteConditioning, InferenceMode,
};
use crate::linalg::CMatrix;
use crate::optim::NelderMead;
use crate::party::{ensure_disjoint, ensure_valid_group, group_label, Party};

pub const SQRT_2: f64 = std::f64::consts::SQRT_2;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum WitnessKind {
    E,
    S2,
    S3,
    STildeM,
    ChshPair,
    BellChsh,
}

/// A value within this margin of the threshold certifies nothing; saturated
/// witnesses (value = threshold up to rounding) must not flip the verdict on
/// floating-point noise.
pub const DETECTION_TOL: f64 = 1e-9;

impl WitnessKind {
    /// Variance-type witnesses detect below threshold; correlation-type
    /// above.
    pub fn is_variance_type(self) -> bool {
        matches!(self, WitnessKind::E | WitnessKind::S2 | WitnessKind::S3)
    }

    pub fn detects(self, value: f64, threshold: f64) -> bool {
        if self.is_variance_type() {
            value < threshold - DETECTION_TOL
        } else {
            value > threshold + DETECTION_TOL
        }
    }
}

impl std::fmt::Display for WitnessKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            WitnessKind::E => "E",
            WitnessKind::S2 => "S2",
            WitnessKind::S3 => "S3",
            WitnessKind::STildeM => "S_tilde_m",
            WitnessKind::ChshPair => "CHSH_pair",
            WitnessKind::BellChsh => "Bell_CHSH",
        };
        write!(f, "{s}")
    }
}

/// A witness evaluation: value, threshold and verdict, with the measurement
/// settings that produced it.
#[derive(Clone, Debug, Serialize)]
pub struct WitnessValue {
    pub kind: WitnessKind,
    pub value: f64,
    pub threshold: f64,
    pub detects_steering: bool,
    pub steered: Vec<Party>,
    pub steering_group: Vec<Party>,
    pub settings: Vec<String>,
}

impl WitnessValue {
    fn new(
        kind: WitnessKind,
        value: f64,
        threshold: f64,
        steered: Vec<Party>,
        steering_group: Vec<Party>,
        settings: Vec<String>,
    ) -> Self {
        WitnessValue {
            kind,
            value,
            threshold,
            detects_steering: kind.detects(value, threshold),
            steered,
            steering_group,
            settings,
        }
    }

    pub fn label(&self) -> String {
        format!(
            "{}[{}|{}]",
            self.kind,
            group_label(&self.steered),
            group_label(&self.steering_group)
        )
    }
}

/// The product witness Delta_inf(u) * Delta_inf(v) for a steered mode
/// (group) against its uncertainty-product threshold.
///
/// For a single steered mode the pair defaults to (X, P) with threshold 1.
/// For a composite steered group a noncommuting pair must be chosen; the
/// default is (X of the first mode, sum of P over the group), and the
/// threshold is the pair's commutator bound.
pub fn epr_witness(
    state: &GaussianState,
    steered: &[Party],
    group: &[Party],
    pair: Option<(&QuadratureObservable, &QuadratureObservable)>,
) -> Result<WitnessValue> {
    ensure_valid_group(steered, state.n_modes())?;
    ensure_valid_group(group, state.n_modes())?;
    ensure_disjoint(&[steered, group])?;
    if steered.is_empty() {
        return Err(Error::InvalidArgument("empty steered group".into()));
    }

    let default_pair;
    let (u, v) = match pair {
        Some((u, v)) => (u, v),
        None => {
            let n = state.n_modes();
            let u = QuadratureObservable::x(steered[0], n);
            let terms: Vec<(Party, f64, f64)> =
                steered.iter().map(|&m| (m, 0.0, 1.0)).collect();
            let v = QuadratureObservable::combination(&terms, n)?;
            default_pair = (u, v);
            (&default_pair.0, &default_pair.1)
        }
    };
    for obs in [u, v] {
        if !obs.support().iter().all(|m| steered.contains(m)) {
            return Err(Error::InvalidObservable(
                "witness pair must be supported on the steered modes".into(),
            ));
        }
    }
    let threshold = u.commutator_bound(v);
    if threshold < 1e-12 {
        return Err(Error::InvalidObservable(
            "witness pair commutes: no uncertainty-product threshold".into(),
        ));
    }
    let (vu, _) = conditional_variance_gaussian(state, u, group)?;
    let (vv, _) = conditional_variance_gaussian(state, v, group)?;
    let value = vu.sqrt() * vv.sqrt();
    Ok(WitnessValue::new(
        WitnessKind::E,
        value,
        threshold,
        steered.to_vec(),
        group.to_vec(),
        vec![
            format!("u weights {:?}", u.weights().iter().copied().collect::<Vec<_>>()),
            format!("v weights {:?}", v.weights().iter().copied().collect::<Vec<_>>()),
        ],
    ))
}

/// How the per-axis conditioning measurements of a spin witness are chosen.
#[derive(Clone, Debug)]
pub enum SpinSteeringMode {
    /// Measure the same spin axis on a single-party group.
    SameAxis,
    /// One explicit joint conditioning observable per axis.
    Specified(Vec<CMatrix>),
    /// Minimize each axis variance over projective measurements.
    Optimized,
}

fn spin_axis_variances(
    state: &DensityState,
    steered: Party,
    group: &[Party],
    axes: &[Axis],
    mode: &SpinSteeringMode,
) -> Result<(Vec<f64>, Vec<String>)> {
    let mut variances = Vec::with_capacity(axes.len());
    let mut settings = Vec::with_capacity(axes.len());
    for (k, &axis) in axes.iter().enumerate() {
        let target = SpinObservable::axis(axis, SpinUnits::J);
        let (variance, description) = match mode {
            SpinSteeringMode::SameAxis => {
                let r = inf_variance_discrete(
                    state,
                    steered,
                    &target,
                    group,
                    InferenceMode::Specified,
                    Some(&DiscreteConditioning::Spin(SpinObservable::axis(
                        axis,
                        SpinUnits::J,
                    ))),
                )?;
                (r.variance, format!("{axis}|same-axis"))
            }
            SpinSteeringMode::Specified(list) => {
                if list.len() != axes.len() {
                    return Err(Error::InvalidArgument(format!(
                        "need {} conditioning observables, got {}",
                        axes.len(),
                        list.len()
                    )));
                }
                let r = inf_variance_discrete(
                    state,
                    steered,
                    &target,
                    group,
                    InferenceMode::Specified,
                    Some(&DiscreteConditioning::Matrix(list[k].clone())),
                )?;
                (r.variance, format!("{axis}|specified"))
            }
            SpinSteeringMode::Optimized => {
                let (v, _) = optimize_spin_inference(state, steered, &target, group, &[])?;
                (v, format!("{axis}|optimized"))
            }
        };
        variances.push(variance);
        settings.push(description);
    }
    Ok((variances, settings))
}

/// Two-axis spin steering witness: (var_X + var_Y) / C_J, threshold 1.
pub fn s2_witness(
    state: &DensityState,
    steered: Party,
    group: &[Party],
    mode: &SpinSteeringMode,
) -> Result<WitnessValue> {
    let dim = state.dim_of(steered)?;
    let j = (dim as f64 - 1.0) / 2.0;
    let c = crate::discrete::uncertainty_bound(j, 2)?;
    let (vars, settings) =
        spin_axis_variances(state, steered, group, &[Axis::X, Axis::Y], mode)?;
    let value = vars.iter().sum::<f64>() / c;
    Ok(WitnessValue::new(
        WitnessKind::S2,
        value,
        1.0,
        vec![steered],
        group.to_vec(),
        settings,
    ))
}

/// Three-axis spin steering witness: (var_X + var_Y + var_Z) / J, threshold 1.
pub fn s3_witness(
    state: &DensityState,
    steered: Party,
    group: &[Party],
    mode: &SpinSteeringMode,
) -> Result<WitnessValue> {
    let dim = state.dim_of(steered)?;
    let j = (dim as f64 - 1.0) / 2.0;
    let (vars, settings) = spin_axis_variances(
        state,
        steered,
        group,
        &[Axis::X, Axis::Y, Axis::Z],
        mode,
    )?;
    let value = vars.iter().sum::<f64>() / j;
    Ok(WitnessValue::new(
        WitnessKind::S3,
        value,
        1.0,
        vec![steered],
        group.to_vec(),
        settings,
    ))
}

/// One term of an m-setting correlation witness: a sign, the steered
/// party's measurement angle and the partner's measurement angle (angles
/// are in the X-Y plane: sigma(theta) = cos(theta) X + sin(theta) Y).
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct CorrelationSetting {
    pub coefficient: f64,
    pub steered_angle: f64,
    pub group_angle: f64,
}

/// Pauli component at an angle in the X-Y plane.
fn sigma_at(theta: f64) -> CMatrix {
    pauli_matrix(Axis::X) * crate::linalg::re(theta.cos())
        + pauli_matrix(Axis::Y) * crate::linalg::re(theta.sin())
}

/// Plane correlation <sigma(theta)_first sigma(phi)_second> on a reduced
/// two-qubit pair.
fn plane_moment(pair: &DensityState, theta: f64, phi: f64) -> Result<f64> {
    pair.expectation(&sigma_at(theta).kronecker(&sigma_at(phi)))
}

fn reduced_qubit_pair(state: &DensityState, first: Party, second: Party) -> Result<DensityState> {
    let pair = state.partial_trace(&[first, second])?;
    if pair.party_dims() != [2, 2] {
        return Err(Error::InvalidArgument(
            "correlation witnesses need qubit parties".into(),
        ));
    }
    Ok(pair)
}

/// m-setting correlation steering witness
/// (1/C_m) * sum_j c_j <sigma_B^j sigma_A^{p_j}>, threshold 1,
/// steering detected when the value exceeds 1.
pub fn s_tilde_m(
    state: &DensityState,
    steered: Party,
    partner: Party,
    settings: &[CorrelationSetting],
    c_m: f64,
) -> Result<WitnessValue> {
    if settings.is_empty() {
        return Err(Error::InvalidArgument("no witness settings".into()));
    }
    if c_m <= 0.0 {
        return Err(Error::InvalidArgument(format!("C_m must be positive, got {c_m}")));
    }
    for s in settings {
        if (s.coefficient.abs() - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidArgument(format!(
                "coefficients must have unit magnitude, got {}",
                s.coefficient
            )));
        }
    }
    let pair = reduced_qubit_pair(state, steered, partner)?;
    let mut value = 0.0;
    let mut described = Vec::with_capacity(settings.len());
    for s in settings {
        value += s.coefficient * plane_moment(&pair, s.steered_angle, s.group_angle)?;
        described.push(format!(
            "{:+} * <sigma({}) sigma({})>",
            s.coefficient, s.steered_angle, s.group_angle
        ));
    }
    value /= c_m;
    Ok(WitnessValue::new(
        WitnessKind::STildeM,
        value,
        1.0,
        vec![steered],
        vec![partner],
        described,
    ))
}

/// The two built-in two-setting instances, as normalized settings with
/// C_2 = sqrt(2): (XX' - YY') and (XY' + YX'), with the partner's primed
/// angles supplied by the caller.
pub fn chsh_moment_settings(primed: (f64, f64)) -> [Vec<CorrelationSetting>; 2] {
    let half_pi = std::f64::consts::FRAC_PI_2;
    [
        vec![
            CorrelationSetting {
                coefficient: 1.0,
                steered_angle: 0.0,
                group_angle: primed.0,
            },
            CorrelationSetting {
                coefficient: -1.0,
                steered_angle: half_pi,
                group_angle: primed.1,
            },
        ],
        vec![
            CorrelationSetting {
                coefficient: 1.0,
                steered_angle: 0.0,
                group_angle: primed.1,
            },
            CorrelationSetting {
                coefficient: 1.0,
                steered_angle: half_pi,
                group_angle: primed.0,
            },
        ],
    ]
}

/// The raw CHSH-moment steering pair: <XX'> - <YY'> and <XY'> + <YX'>,
/// each against the threshold sqrt(2). The unprimed angles are the
/// steered party's two settings (default X and Y).
pub fn chsh_pair_steering(
    state: &DensityState,
    steered: Party,
    partner: Party,
    primed: (f64, f64),
    unprimed: (f64, f64),
) -> Result<[WitnessValue; 2]> {
    let pair = reduced_qubit_pair(state, steered, partner)?;
    let v1 = plane_moment(&pair, unprimed.0, primed.0)? - plane_moment(&pair, unprimed.1, primed.1)?;
    let v2 = plane_moment(&pair, unprimed.0, primed.1)? + plane_moment(&pair, unprimed.1, primed.0)?;
    let mk = |value: f64, name: &str| {
        WitnessValue::new(
            WitnessKind::ChshPair,
            value,
            SQRT_2,
            vec![steered],
            vec![partner],
            vec![format!(
                "{name}: B angles ({}, {}), partner angles ({}, {})",
                unprimed.0, unprimed.1, primed.0, primed.1
            )],
        )
    };
    Ok([mk(v1, "XX'-YY'"), mk(v2, "XY'+YX'")])
}

/// Bell-CHSH combination at fixed angles [b1, b2, a1, a2]:
/// <s(b1)s(a1)> - <s(b2)s(a2)> + <s(b1)s(a2)> + <s(b2)s(a1)>, threshold 2.
pub fn bell_chsh(
    state: &DensityState,
    steered: Party,
    partner: Party,
    angles: &[f64; 4],
) -> Result<WitnessValue> {
    let pair = reduced_qubit_pair(state, steered, partner)?;
    let value = bell_value_from_moments(&plane_correlations(&pair)?, angles);
    Ok(WitnessValue::new(
        WitnessKind::BellChsh,
        value,
        2.0,
        vec![steered],
        vec![partner],
        vec![format!("angles {:?}", angles)],
    ))
}

/// X-Y plane correlation matrix t[i][j] = <sigma_i sigma_j>, i, j in {X, Y}.
fn plane_correlations(pair: &DensityState) -> Result<[[f64; 2]; 2]> {
    let sx = pauli_matrix(Axis::X);
    let sy = pauli_matrix(Axis::Y);
    Ok([
        [
            pair.expectation(&sx.kronecker(&sx))?,
            pair.expectation(&sx.kronecker(&sy))?,
        ],
        [
            pair.expectation(&sy.kronecker(&sx))?,
            pair.expectation(&sy.kronecker(&sy))?,
        ],
    ])
}

fn moment(t: &[[f64; 2]; 2], theta: f64, phi: f64) -> f64 {
    let b = [theta.cos(), theta.sin()];
    let a = [phi.cos(), phi.sin()];
    b[0] * (t[0][0] * a[0] + t[0][1] * a[1]) + b[1] * (t[1][0] * a[0] + t[1][1] * a[1])
}

fn bell_value_from_moments(t: &[[f64; 2]; 2], angles: &[f64; 4]) -> f64 {
    moment(t, angles[0], angles[2]) - moment(t, angles[1], angles[3])
        + moment(t, angles[0], angles[3])
        + moment(t, angles[1], angles[2])
}

/// Bell-CHSH maximized over all four plane angles (coarse grid plus
/// Nelder-Mead refinement). Deterministic.
pub fn bell_chsh_optimized(
    state: &DensityState,
    steered: Party,
    partner: Party,
) -> Result<WitnessValue> {
    let pair = reduced_qubit_pair(state, steered, partner)?;
    let t = plane_correlations(&pair)?;
    let objective = |angles: &[f64]| -> f64 {
        -bell_value_from_moments(&t, &[angles[0], angles[1], angles[2], angles[3]])
    };

    let grid_n = 12;
    let step = std::f64::consts::TAU / grid_n as f64;
    let mut best: Vec<(f64, [f64; 4])> = Vec::new();
    for i0 in 0..grid_n {
        for i1 in 0..grid_n {
            for i2 in 0..grid_n {
                for i3 in 0..grid_n {
                    let angles = [
                        i0 as f64 * step,
                        i1 as f64 * step,
                        i2 as f64 * step,
                        i3 as f64 * step,
                    ];
                    let v = objective(&angles);
                    best.push((v, angles));
                    if best.len() > 2048 {
                        best.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
                        best.truncate(8);
                    }
                }
            }
        }
    }
    best.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    best.truncate(8);

    let nm = NelderMead {
        max_iter: 500,
        f_tol: 1e-14,
    };
    let mut top_value = -best[0].0;
    let mut top_angles = best[0].1;
    for (_, start) in &best {
        let (x, v) = nm.minimize(objective, start, 0.1);
        if -v > top_value {
            top_value = -v;
            top_angles = [x[0], x[1], x[2], x[3]];
        }
    }

    Ok(WitnessValue::new(
        WitnessKind::BellChsh,
        top_value,
        2.0,
        vec![steered],
        vec![partner],
        vec![format!("optimized angles {:?}", top_angles)],
    ))
}
