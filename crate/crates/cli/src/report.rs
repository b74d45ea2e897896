//! The report document: everything a scenario run produced, serialized as
//! deterministic JSON. Re-running the same scenario with the same seed
//! yields a byte-identical payload; only the `timing` block varies.

use serde::Serialize;

use qsteer_core::graph::SteeringGraph;
use qsteer_core::inference::InferenceResult;
use qsteer_core::monogamy::MonogamyReport;
use qsteer_core::witness::WitnessValue;

use crate::scenario::{ScenarioFile, StateSpec};

#[derive(Clone, Debug, Serialize)]
pub struct SweepTable {
    pub parameter: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

#[derive(Serialize)]
pub struct Timing {
    pub total_ms: f64,
}

#[derive(Serialize)]
pub struct ReportDocument {
    pub scenario: String,
    pub tool_version: String,
    pub seed: u64,
    pub state: StateSpec,
    pub inference: Vec<InferenceResult>,
    pub witnesses: Vec<WitnessValue>,
    pub monogamy: Vec<MonogamyReport>,
    pub graph: Option<SteeringGraph>,
    pub sweep: Option<SweepTable>,
    pub timing: Timing,
}

impl ReportDocument {
    pub fn new(
        scenario: &ScenarioFile,
        inference: Vec<InferenceResult>,
        witnesses: Vec<WitnessValue>,
        monogamy: Vec<MonogamyReport>,
        graph: Option<SteeringGraph>,
        sweep: Option<SweepTable>,
        total_ms: f64,
    ) -> Self {
        ReportDocument {
            scenario: scenario.name.clone(),
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            seed: scenario.seed,
            state: scenario.state.clone(),
            inference,
            witnesses,
            monogamy,
            graph,
            sweep,
            timing: Timing { total_ms },
        }
    }

    /// Pretty JSON with a fixed field order.
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// The deterministic portion: the full document minus `timing`.
    pub fn payload_json(&self) -> String {
        let mut value: serde_json::Value =
            serde_json::to_value(self).expect("report serializes");
        if let Some(map) = value.as_object_mut() {
            map.remove("timing");
        }
        serde_json::to_string_pretty(&value).expect("payload serializes")
    }
}
