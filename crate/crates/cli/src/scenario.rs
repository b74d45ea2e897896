//! Scenario file schema (TOML) and validation.
//!
//! A scenario names a state (canonical constructor plus an optional channel
//! pipeline), the witness/monogamy/inference plans to evaluate on it, an
//! optional parameter sweep, and which outputs to emit.

use serde::{Deserialize, Serialize};

use qsteer_core::Party;

use crate::{CliError, CliResult};

pub const CANONICAL_KINDS: &[&str] = &["ghz", "w", "bell", "tmsv", "cv_ghz", "dual", "vacuum"];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OutputKind {
    Report,
    Table,
    Graph,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub name: String,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_outputs")]
    pub outputs: Vec<OutputKind>,
    pub state: StateSpec,
    #[serde(default)]
    pub inference: Vec<InferenceItem>,
    #[serde(default)]
    pub witness: Vec<WitnessItem>,
    #[serde(default)]
    pub monogamy: Vec<MonogamyItem>,
    #[serde(default)]
    pub graph: Option<GraphPlanSpec>,
    #[serde(default)]
    pub sweep: Option<SweepSpec>,
}

fn default_outputs() -> Vec<OutputKind> {
    vec![OutputKind::Report]
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateSpec {
    /// One of ghz | w | bell | tmsv | cv_ghz | dual | vacuum.
    pub kind: String,
    /// Party count for ghz/vacuum.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    /// Bell state variant: phi+ | phi- | psi+ | psi-.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub variant: Option<String>,
    /// Squeezing parameter for tmsv/cv_ghz/dual.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r: Option<f64>,
    /// Ordered channel pipeline (Gaussian states only).
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub channels: Vec<ChannelSpec>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChannelSpec {
    /// loss | beamsplitter
    pub op: String,
    /// Loss target mode.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mode: Option<String>,
    /// Beam-splitter mode pair.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub modes: Option<[String; 2]>,
    /// Transmissivity / efficiency in [0, 1].
    pub eta: f64,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InferenceItem {
    pub steered: String,
    /// Discrete: axis X | Y | Z (Pauli units). Gaussian: a quadrature
    /// expression such as "X_B" or "P_A+P_B+P_C".
    pub target: String,
    pub group: Vec<String>,
    /// specified | optimized (Gaussian inference is always optimal).
    #[serde(default = "default_mode")]
    pub mode: String,
    /// Specified-mode conditioning: one axis character per group party,
    /// e.g. "Z", "XX", "YX" (I for identity).
    #[serde(default)]
    pub conditioning: Option<String>,
}

fn default_mode() -> String {
    "optimized".into()
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WitnessItem {
    /// e | s2 | s3 | s_tilde | chsh_pair | bell
    pub kind: String,
    pub steered: Vec<String>,
    pub group: Vec<String>,
    /// Spin kinds: same_axis | optimized | specified.
    #[serde(default)]
    pub mode: Option<String>,
    /// Specified spin mode: per-axis conditioning strings.
    #[serde(default)]
    pub conditioning: Option<Vec<String>>,
    /// E with a composite steered group: quadrature pair override.
    #[serde(default)]
    pub u: Option<String>,
    #[serde(default)]
    pub v: Option<String>,
    /// bell: four fixed angles [b1, b2, a1, a2]; omitted means optimize.
    #[serde(default)]
    pub angles: Option<Vec<f64>>,
    /// chsh_pair / s_tilde: the partner's primed angle pair.
    #[serde(default)]
    pub primed: Option<[f64; 2]>,
    /// s_tilde: which built-in two-setting instance (1 or 2).
    #[serde(default)]
    pub instance: Option<usize>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MonogamyItem {
    /// R1_product | R2_sum2 | R3_sum3 | R4_msum | CHSH_moment_pair |
    /// Bell_sum | Bell_sum_grid | R5_R6 | qubit_group_sums
    pub id: String,
    pub steered: Vec<String>,
    pub partners: Vec<Vec<String>>,
    /// Spin checks: same_axis | optimized (default optimized).
    #[serde(default)]
    pub mode: Option<String>,
    /// qubit_group_sums: explicit per-axis group conditioning strings.
    #[serde(default)]
    pub conditioning_s2: Option<Vec<String>>,
    #[serde(default)]
    pub conditioning_s3: Option<Vec<String>>,
    /// Per-partner primed angles for moment/Bell checks.
    #[serde(default)]
    pub primed: Option<Vec<[f64; 2]>>,
    /// Bell_sum_grid: grid points per angle.
    #[serde(default)]
    pub grid_n: Option<usize>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphPlanSpec {
    /// Evaluate one witness kind over all ordered party pairs.
    #[serde(default)]
    pub all_pairs: Option<AllPairsSpec>,
    /// Explicit extra edges (e.g. collective groups).
    #[serde(default)]
    pub edges: Vec<GraphEdgeSpec>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AllPairsSpec {
    pub kind: String,
    #[serde(default)]
    pub mode: Option<String>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphEdgeSpec {
    pub kind: String,
    pub steered: Vec<String>,
    pub group: Vec<String>,
    #[serde(default)]
    pub mode: Option<String>,
    #[serde(default)]
    pub conditioning: Option<Vec<String>>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    /// "r" or "channels[k].eta".
    pub parameter: String,
    #[serde(default)]
    pub values: Option<Vec<f64>>,
    #[serde(default)]
    pub start: Option<f64>,
    #[serde(default)]
    pub stop: Option<f64>,
    #[serde(default)]
    pub step: Option<f64>,
}

impl SweepSpec {
    /// The finite, strictly increasing grid.
    pub fn grid(&self) -> CliResult<Vec<f64>> {
        let values = match (&self.values, self.start, self.stop, self.step) {
            (Some(v), None, None, None) => v.clone(),
            (None, Some(start), Some(stop), Some(step)) => {
                if step <= 0.0 || stop < start {
                    return Err(CliError::Validation(
                        "sweep: step must be positive and stop >= start".into(),
                    ));
                }
                let count = ((stop - start) / step).round() as usize + 1;
                (0..count).map(|k| start + k as f64 * step).collect()
            }
            _ => {
                return Err(CliError::Validation(
                    "sweep: give either `values` or `start`/`stop`/`step`".into(),
                ))
            }
        };
        if values.is_empty() {
            return Err(CliError::Validation("sweep: empty grid".into()));
        }
        if values.windows(2).any(|w| w[1] <= w[0]) {
            return Err(CliError::Validation(
                "sweep: grid must be strictly increasing".into(),
            ));
        }
        Ok(values)
    }
}

/// Parses a scenario from TOML text; syntax errors carry the position.
pub fn parse_scenario(text: &str) -> CliResult<ScenarioFile> {
    let scenario: ScenarioFile =
        toml::from_str(text).map_err(|e| CliError::Validation(format!("scenario parse: {e}")))?;
    validate(&scenario)?;
    Ok(scenario)
}

pub fn parse_party(label: &str) -> CliResult<Party> {
    Party::from_label(label)
        .map_err(|_| CliError::Validation(format!("unknown party label `{label}`")))
}

pub fn parse_group(labels: &[String]) -> CliResult<Vec<Party>> {
    labels.iter().map(|l| parse_party(l)).collect()
}

fn validate(scenario: &ScenarioFile) -> CliResult<()> {
    if scenario.name.trim().is_empty() {
        return Err(CliError::Validation("field `name`: must be nonempty".into()));
    }
    let kind = scenario.state.kind.as_str();
    if !CANONICAL_KINDS.contains(&kind) {
        return Err(CliError::Validation(format!(
            "field `state.kind`: unknown canonical state `{kind}` (expected one of {CANONICAL_KINDS:?})"
        )));
    }
    let gaussian = matches!(kind, "tmsv" | "cv_ghz" | "dual" | "vacuum");
    if !gaussian && !scenario.state.channels.is_empty() {
        return Err(CliError::Validation(
            "field `state.channels`: channel pipelines apply to Gaussian states only".into(),
        ));
    }
    if matches!(kind, "tmsv" | "cv_ghz" | "dual") && scenario.state.r.is_none() {
        return Err(CliError::Validation(format!(
            "field `state.r`: required for kind `{kind}`"
        )));
    }
    if let Some(r) = scenario.state.r {
        if r < 0.0 {
            return Err(CliError::Validation(
                "field `state.r`: must be nonnegative".into(),
            ));
        }
    }
    for (k, ch) in scenario.state.channels.iter().enumerate() {
        match ch.op.as_str() {
            "loss" => {
                if ch.mode.is_none() {
                    return Err(CliError::Validation(format!(
                        "field `state.channels[{k}].mode`: required for loss"
                    )));
                }
            }
            "beamsplitter" => {
                if ch.modes.is_none() {
                    return Err(CliError::Validation(format!(
                        "field `state.channels[{k}].modes`: required for beamsplitter"
                    )));
                }
            }
            other => {
                return Err(CliError::Validation(format!(
                    "field `state.channels[{k}].op`: unknown channel `{other}`"
                )))
            }
        }
        if !(0.0..=1.0).contains(&ch.eta) {
            return Err(CliError::Validation(format!(
                "field `state.channels[{k}].eta`: {} outside [0, 1]",
                ch.eta
            )));
        }
    }
    if let Some(sweep) = &scenario.sweep {
        sweep.grid()?;
        match sweep.parameter.as_str() {
            "r" => {
                if scenario.state.r.is_none() {
                    return Err(CliError::Validation(
                        "field `sweep.parameter`: state has no parameter `r`".into(),
                    ));
                }
            }
            other => {
                let index = parse_channel_eta_path(other).ok_or_else(|| {
                    CliError::Validation(format!(
                        "field `sweep.parameter`: `{other}` is not `r` or `channels[k].eta`"
                    ))
                })?;
                if index >= scenario.state.channels.len() {
                    return Err(CliError::Validation(format!(
                        "field `sweep.parameter`: channel index {index} out of range"
                    )));
                }
            }
        }
    }
    Ok(())
}

/// Parses "channels[k].eta" into k.
pub fn parse_channel_eta_path(path: &str) -> Option<usize> {
    let rest = path.strip_prefix("channels[")?;
    let (index, tail) = rest.split_once(']')?;
    if tail != ".eta" {
        return None;
    }
    index.parse().ok()
}
