//! Monogamy inequalities over steering witnesses: product and sum relations
//! for the Gaussian witness, two-/three-axis spin relations, m-setting
//! correlation sums and Bell-CHSH sums, with tightness reporting.

use serde::{Deserialize, Serialize};

use crate::discrete::DensityState;
use crate::error::{Error, Result};
use crate::gaussian::GaussianState;
use crate::linalg::CMatrix;
use crate::party::{ensure_disjoint, Party};
use crate::witness::{
    bell_chsh, chsh_pair_steering, epr_witness, s2_witness, s3_witness, s_tilde_m,
    CorrelationSetting, SpinSteeringMode, WitnessValue, SQRT_2,
};

/// Satisfaction margin and tightness thresholds.
pub const SLACK_TOL: f64 = 1e-9;
pub const TIGHT_TOL: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum InequalityId {
    #[serde(rename = "R1_product")]
    R1Product,
    #[serde(rename = "R2_sum2")]
    R2Sum2,
    #[serde(rename = "R3_sum3")]
    R3Sum3,
    #[serde(rename = "R4_msum")]
    R4MSum,
    #[serde(rename = "CHSH_moment_pair")]
    ChshMomentPair,
    #[serde(rename = "Bell_sum")]
    BellSum,
    #[serde(rename = "R5_product_group")]
    R5ProductGroup,
    #[serde(rename = "R6_sum_group")]
    R6SumGroup,
    #[serde(rename = "R6_square_sum")]
    R6SquareSum,
    #[serde(rename = "combined_max_CV")]
    CombinedMaxCv,
    #[serde(rename = "combined_max_S2")]
    CombinedMaxS2,
    #[serde(rename = "S3_group_sum")]
    S3GroupSum,
}

impl std::fmt::Display for InequalityId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            InequalityId::R1Product => "R1_product",
            InequalityId::R2Sum2 => "R2_sum2",
            InequalityId::R3Sum3 => "R3_sum3",
            InequalityId::R4MSum => "R4_msum",
            InequalityId::ChshMomentPair => "CHSH_moment_pair",
            InequalityId::BellSum => "Bell_sum",
            InequalityId::R5ProductGroup => "R5_product_group",
            InequalityId::R6SumGroup => "R6_sum_group",
            InequalityId::R6SquareSum => "R6_square_sum",
            InequalityId::CombinedMaxCv => "combined_max_CV",
            InequalityId::CombinedMaxS2 => "combined_max_S2",
            InequalityId::S3GroupSum => "S3_group_sum",
        };
        write!(f, "{s}")
    }
}

/// One evaluated inequality. `slack` is signed so that positive always
/// means satisfied-with-margin, whichever way the inequality points;
/// |slack| below 1e-6 is flagged tight.
#[derive(Clone, Debug, Serialize)]
pub struct MonogamyReport {
    pub id: InequalityId,
    pub lhs: f64,
    pub rhs: f64,
    pub satisfied: bool,
    pub slack: f64,
    pub tight: bool,
    pub inputs: Vec<WitnessValue>,
}

impl MonogamyReport {
    fn geq(id: InequalityId, lhs: f64, rhs: f64, inputs: Vec<WitnessValue>) -> Self {
        Self::build(id, lhs, rhs, lhs - rhs, inputs)
    }

    fn leq(id: InequalityId, lhs: f64, rhs: f64, inputs: Vec<WitnessValue>) -> Self {
        Self::build(id, lhs, rhs, rhs - lhs, inputs)
    }

    fn build(id: InequalityId, lhs: f64, rhs: f64, slack: f64, inputs: Vec<WitnessValue>) -> Self {
        MonogamyReport {
            id,
            lhs,
            rhs,
            satisfied: slack >= -SLACK_TOL,
            slack,
            tight: slack.abs() < TIGHT_TOL,
            inputs,
        }
    }
}

/// E_{B|A} * E_{B|C} >= 1: two groups cannot both steer the same system
/// with the product witness.
pub fn check_r1(
    state: &GaussianState,
    steered: &[Party],
    group_a: &[Party],
    group_c: &[Party],
) -> Result<MonogamyReport> {
    ensure_disjoint(&[steered, group_a, group_c])?;
    let ea = epr_witness(state, steered, group_a, None)?;
    let ec = epr_witness(state, steered, group_c, None)?;
    let lhs = ea.value * ec.value;
    Ok(MonogamyReport::geq(
        InequalityId::R1Product,
        lhs,
        1.0,
        vec![ea, ec],
    ))
}

/// S2_{B|A} + S2_{B|C} >= 2.
pub fn check_r2(
    state: &DensityState,
    steered: Party,
    group_a: &[Party],
    group_c: &[Party],
    mode: &SpinSteeringMode,
) -> Result<MonogamyReport> {
    ensure_disjoint(&[&[steered], group_a, group_c])?;
    let sa = s2_witness(state, steered, group_a, mode)?;
    let sc = s2_witness(state, steered, group_c, mode)?;
    let lhs = sa.value + sc.value;
    Ok(MonogamyReport::geq(InequalityId::R2Sum2, lhs, 2.0, vec![sa, sc]))
}

/// S3_{B|A} + S3_{B|C} + S3_{B|D} >= 3.
pub fn check_r3(
    state: &DensityState,
    steered: Party,
    partners: [&[Party]; 3],
    mode: &SpinSteeringMode,
) -> Result<MonogamyReport> {
    ensure_disjoint(&[&[steered], partners[0], partners[1], partners[2]])?;
    let mut inputs = Vec::with_capacity(3);
    let mut lhs = 0.0;
    for group in partners {
        let w = s3_witness(state, steered, group, mode)?;
        lhs += w.value;
        inputs.push(w);
    }
    Ok(MonogamyReport::geq(InequalityId::R3Sum3, lhs, 3.0, inputs))
}

/// sum_k S~_{B|A_k} <= m for an m-setting correlation witness shared by m
/// partners.
pub fn check_r4(
    state: &DensityState,
    steered: Party,
    partners: &[Party],
    settings: &[Vec<CorrelationSetting>],
    c_m: f64,
) -> Result<MonogamyReport> {
    if partners.len() != settings.len() || partners.is_empty() {
        return Err(Error::InvalidArgument(
            "need one settings list per partner".into(),
        ));
    }
    let m = settings[0].len();
    if settings.iter().any(|s| s.len() != m) {
        return Err(Error::InvalidArgument(
            "all partners must use the same number of settings".into(),
        ));
    }
    if partners.len() != m {
        return Err(Error::InvalidArgument(format!(
            "an {m}-setting witness bounds exactly {m} partners, got {}",
            partners.len()
        )));
    }
    let mut groups: Vec<&[Party]> = vec![std::slice::from_ref(&steered)];
    for p in partners {
        groups.push(std::slice::from_ref(p));
    }
    ensure_disjoint(&groups)?;

    let mut lhs = 0.0;
    let mut inputs = Vec::with_capacity(partners.len());
    for (partner, s) in partners.iter().zip(settings) {
        let w = s_tilde_m(state, steered, *partner, s, c_m)?;
        lhs += w.value;
        inputs.push(w);
    }
    Ok(MonogamyReport::leq(
        InequalityId::R4MSum,
        lhs,
        m as f64,
        inputs,
    ))
}

/// The two CHSH-moment monogamy sums, each bounded by 2 sqrt(2):
/// (XX' - YY')_{B|A} + (XX' - YY')_{B|C} and the primed-swapped form.
pub fn check_chsh_moment_pair(
    state: &DensityState,
    steered: Party,
    partner_a: Party,
    partner_c: Party,
    primed_a: (f64, f64),
    primed_c: (f64, f64),
) -> Result<[MonogamyReport; 2]> {
    ensure_disjoint(&[&[steered], &[partner_a], &[partner_c]])?;
    let unprimed = (0.0, std::f64::consts::FRAC_PI_2);
    let wa = chsh_pair_steering(state, steered, partner_a, primed_a, unprimed)?;
    let wc = chsh_pair_steering(state, steered, partner_c, primed_c, unprimed)?;
    let first = MonogamyReport::leq(
        InequalityId::ChshMomentPair,
        wa[0].value + wc[0].value,
        2.0 * SQRT_2,
        vec![wa[0].clone(), wc[0].clone()],
    );
    let second = MonogamyReport::leq(
        InequalityId::ChshMomentPair,
        wa[1].value + wc[1].value,
        2.0 * SQRT_2,
        vec![wa[1].clone(), wc[1].clone()],
    );
    Ok([first, second])
}

/// Bell_{B|A} + Bell_{B|C} <= 4 at a fixed shared setting choice: the
/// steered party uses X and Y, each partner its own primed pair.
pub fn check_bell_sum(
    state: &DensityState,
    steered: Party,
    partner_a: Party,
    partner_c: Party,
    primed_a: (f64, f64),
    primed_c: (f64, f64),
) -> Result<MonogamyReport> {
    ensure_disjoint(&[&[steered], &[partner_a], &[partner_c]])?;
    let half_pi = std::f64::consts::FRAC_PI_2;
    let wa = bell_chsh(
        state,
        steered,
        partner_a,
        &[0.0, half_pi, primed_a.0, primed_a.1],
    )?;
    let wc = bell_chsh(
        state,
        steered,
        partner_c,
        &[0.0, half_pi, primed_c.0, primed_c.1],
    )?;
    Ok(MonogamyReport::leq(
        InequalityId::BellSum,
        wa.value + wc.value,
        4.0,
        vec![wa, wc],
    ))
}

/// The maximum of the Bell sum over a per-partner angle grid (the steered
/// party's settings stay fixed at X and Y). The two partner maxima are
/// independent, so the grid search separates.
pub fn check_bell_sum_grid(
    state: &DensityState,
    steered: Party,
    partner_a: Party,
    partner_c: Party,
    grid_n: usize,
) -> Result<MonogamyReport> {
    ensure_disjoint(&[&[steered], &[partner_a], &[partner_c]])?;
    let half_pi = std::f64::consts::FRAC_PI_2;
    let step = std::f64::consts::TAU / grid_n as f64;
    let mut best: [Option<WitnessValue>; 2] = [None, None];
    for (slot, partner) in [partner_a, partner_c].into_iter().enumerate() {
        for i in 0..grid_n {
            for k in 0..grid_n {
                let w = bell_chsh(
                    state,
                    steered,
                    partner,
                    &[0.0, half_pi, i as f64 * step, k as f64 * step],
                )?;
                let better = match &best[slot] {
                    None => true,
                    Some(prev) => w.value > prev.value,
                };
                if better {
                    best[slot] = Some(w);
                }
            }
        }
    }
    let wa = best[0].take().unwrap();
    let wc = best[1].take().unwrap();
    Ok(MonogamyReport::leq(
        InequalityId::BellSum,
        wa.value + wc.value,
        4.0,
        vec![wa, wc],
    ))
}

/// The group-dominance relations for the Gaussian product witness:
/// E_{B|A} E_{B|C} >= E^2_{B|{AC}}, the sum and square-sum forms, and the
/// combined bound max{1, E^2_{B|{AC}}}.
pub fn check_r5_r6(
    state: &GaussianState,
    steered: &[Party],
    group_a: &[Party],
    group_c: &[Party],
) -> Result<Vec<MonogamyReport>> {
    ensure_disjoint(&[steered, group_a, group_c])?;
    let ea = epr_witness(state, steered, group_a, None)?;
    let ec = epr_witness(state, steered, group_c, None)?;
    let joint: Vec<Party> = group_a.iter().chain(group_c.iter()).copied().collect();
    let eg = epr_witness(state, steered, &joint, None)?;
    let (a, c, g) = (ea.value, ec.value, eg.value);
    Ok(vec![
        MonogamyReport::geq(
            InequalityId::R5ProductGroup,
            a * c,
            g * g,
            vec![ea.clone(), ec.clone(), eg.clone()],
        ),
        MonogamyReport::geq(
            InequalityId::R6SumGroup,
            a + c,
            2.0 * g,
            vec![ea.clone(), ec.clone(), eg.clone()],
        ),
        MonogamyReport::geq(
            InequalityId::R6SquareSum,
            a * a + c * c,
            2.0 * g * g,
            vec![ea.clone(), ec.clone(), eg.clone()],
        ),
        MonogamyReport::geq(
            InequalityId::CombinedMaxCv,
            a * c,
            1.0_f64.max(g * g),
            vec![ea, ec, eg],
        ),
    ])
}

/// Options for the qubit group-sum relations: how single-partner witnesses
/// are conditioned and, optionally, explicit per-axis group conditionings
/// (otherwise the group value is optimized).
pub struct GroupSumOptions {
    pub single_mode: SpinSteeringMode,
    pub group_conditionings_s2: Option<Vec<CMatrix>>,
    pub group_conditionings_s3: Option<Vec<CMatrix>>,
}

impl Default for GroupSumOptions {
    fn default() -> Self {
        GroupSumOptions {
            single_mode: SpinSteeringMode::Optimized,
            group_conditionings_s2: None,
            group_conditionings_s3: None,
        }
    }
}

fn group_mode(explicit: &Option<Vec<CMatrix>>) -> SpinSteeringMode {
    match explicit {
        Some(list) => SpinSteeringMode::Specified(list.clone()),
        None => SpinSteeringMode::Optimized,
    }
}

/// Group-sharing relations for qubits:
/// S2_{B|A} + S2_{B|C} >= max{2, 2 S2_{B|{AC}}},
/// S3_{B|A} + S3_{B|C} >= 2 S3_{B|{AC}},
/// and with a fourth party the triple sum vs max{3, 3 S3_{B|{ACD}}}.
pub fn check_qubit_group_sums(
    state: &DensityState,
    steered: Party,
    group_a: &[Party],
    group_c: &[Party],
    group_d: Option<&[Party]>,
    options: &GroupSumOptions,
) -> Result<Vec<MonogamyReport>> {
    ensure_disjoint(&[&[steered], group_a, group_c])?;
    let joint_ac: Vec<Party> = group_a.iter().chain(group_c.iter()).copied().collect();

    let s2_a = s2_witness(state, steered, group_a, &options.single_mode)?;
    let s2_c = s2_witness(state, steered, group_c, &options.single_mode)?;
    let s2_g = s2_witness(
        state,
        steered,
        &joint_ac,
        &group_mode(&options.group_conditionings_s2),
    )?;
    let mut reports = vec![MonogamyReport::geq(
        InequalityId::CombinedMaxS2,
        s2_a.value + s2_c.value,
        2.0_f64.max(2.0 * s2_g.value),
        vec![s2_a, s2_c, s2_g],
    )];

    let s3_a = s3_witness(state, steered, group_a, &options.single_mode)?;
    let s3_c = s3_witness(state, steered, group_c, &options.single_mode)?;
    let s3_g = s3_witness(
        state,
        steered,
        &joint_ac,
        &group_mode(&options.group_conditionings_s3),
    )?;
    reports.push(MonogamyReport::geq(
        InequalityId::S3GroupSum,
        s3_a.value + s3_c.value,
        2.0 * s3_g.value,
        vec![s3_a.clone(), s3_c.clone(), s3_g],
    ));

    if let Some(group_d) = group_d {
        ensure_disjoint(&[&[steered], group_a, group_c, group_d])?;
        let s3_d = s3_witness(state, steered, group_d, &options.single_mode)?;
        let joint_acd: Vec<Party> = joint_ac
            .iter()
            .chain(group_d.iter())
            .copied()
            .collect();
        let s3_full = s3_witness(
            state,
            steered,
            &joint_acd,
            &group_mode(&options.group_conditionings_s3),
        )?;
        reports.push(MonogamyReport::geq(
            InequalityId::R3Sum3,
            s3_a.value + s3_c.value + s3_d.value,
            3.0_f64.max(3.0 * s3_full.value),
            vec![s3_a, s3_c, s3_d, s3_full],
        ));
    }
    Ok(reports)
}
