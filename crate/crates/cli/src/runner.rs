//! Scenario execution: state construction, plan evaluation and sweeps.

use qsteer_core::discrete::{
    make_bell, make_ghz, make_w, pauli_matrix, Axis, BellKind, DensityState, SpinObservable,
    SpinUnits,
};
use qsteer_core::gaussian::{
    apply_beam_splitter, apply_loss, cv_ghz, dual_steering_network, two_mode_squeezed, vacuum,
    GaussianState, QuadratureObservable,
};
use qsteer_core::graph::{build_steering_graph, PlannedWitness, StateRef, SteeringGraph};
use qsteer_core::inference::{
    inf_variance_discrete, inf_variance_gaussian, DiscreteConditioning, InferenceMode,
    InferenceResult,
};
use qsteer_core::linalg::CMatrix;
use qsteer_core::monogamy::{
    check_bell_sum, check_bell_sum_grid, check_chsh_moment_pair, check_qubit_group_sums,
    check_r1, check_r2, check_r3, check_r4, check_r5_r6, GroupSumOptions, MonogamyReport,
};
use qsteer_core::witness::{
    bell_chsh, bell_chsh_optimized, chsh_moment_settings, chsh_pair_steering, epr_witness,
    s2_witness, s3_witness, s_tilde_m, SpinSteeringMode, WitnessValue, SQRT_2,
};
use qsteer_core::Party;

use crate::report::{ReportDocument, SweepTable};
use crate::scenario::{
    parse_channel_eta_path, parse_group, parse_party, InferenceItem, MonogamyItem, OutputKind,
    ScenarioFile, StateSpec, WitnessItem,
};
use crate::{CliError, CliResult};

/// A constructed scenario state, either family.
pub enum BuiltState {
    Discrete(DensityState),
    Gaussian(GaussianState),
}

impl BuiltState {
    pub fn as_ref(&self) -> StateRef<'_> {
        match self {
            BuiltState::Discrete(s) => StateRef::Discrete(s),
            BuiltState::Gaussian(s) => StateRef::Gaussian(s),
        }
    }

    fn n_parties(&self) -> usize {
        match self {
            BuiltState::Discrete(s) => s.n_parties(),
            BuiltState::Gaussian(s) => s.n_modes(),
        }
    }

    fn discrete(&self) -> CliResult<&DensityState> {
        match self {
            BuiltState::Discrete(s) => Ok(s),
            BuiltState::Gaussian(_) => Err(CliError::Validation(
                "this plan item needs a discrete (qubit) state".into(),
            )),
        }
    }

    fn gaussian(&self) -> CliResult<&GaussianState> {
        match self {
            BuiltState::Gaussian(s) => Ok(s),
            BuiltState::Discrete(_) => Err(CliError::Validation(
                "this plan item needs a Gaussian state".into(),
            )),
        }
    }
}

/// Builds the scenario state with an optional sweep override applied.
pub fn build_state(spec: &StateSpec, sweep_override: Option<(&str, f64)>) -> CliResult<BuiltState> {
    let mut spec = spec.clone();
    if let Some((path, value)) = sweep_override {
        match path {
            "r" => spec.r = Some(value),
            other => {
                let index = parse_channel_eta_path(other)
                    .ok_or_else(|| CliError::Validation(format!("bad sweep path `{other}`")))?;
                spec.channels
                    .get_mut(index)
                    .ok_or_else(|| {
                        CliError::Validation(format!("sweep channel index {index} out of range"))
                    })?
                    .eta = value;
            }
        }
    }

    let state = match spec.kind.as_str() {
        "ghz" => BuiltState::Discrete(make_ghz(spec.n.unwrap_or(3)).map_err(CliError::from)?),
        "w" => BuiltState::Discrete(make_w()),
        "bell" => {
            let variant = spec.variant.as_deref().unwrap_or("phi+");
            let kind: BellKind = variant
                .parse()
                .map_err(|_| CliError::Validation(format!("unknown Bell variant `{variant}`")))?;
            BuiltState::Discrete(make_bell(kind))
        }
        "tmsv" => BuiltState::Gaussian(two_mode_squeezed(required_r(&spec)?)?),
        "cv_ghz" => BuiltState::Gaussian(cv_ghz(required_r(&spec)?)?),
        "dual" => BuiltState::Gaussian(dual_steering_network(required_r(&spec)?)?),
        "vacuum" => BuiltState::Gaussian(vacuum(spec.n.unwrap_or(1))),
        other => {
            return Err(CliError::Validation(format!(
                "unknown canonical state `{other}`"
            )))
        }
    };

    let mut state = state;
    for (k, ch) in spec.channels.iter().enumerate() {
        let gaussian = state.gaussian()?.clone();
        let next = match ch.op.as_str() {
            "loss" => {
                let mode = parse_party(ch.mode.as_deref().ok_or_else(|| {
                    CliError::Validation(format!("channels[{k}]: loss needs `mode`"))
                })?)?;
                apply_loss(&gaussian, mode, ch.eta)?
            }
            "beamsplitter" => {
                let modes = ch.modes.as_ref().ok_or_else(|| {
                    CliError::Validation(format!("channels[{k}]: beamsplitter needs `modes`"))
                })?;
                let i = parse_party(&modes[0])?;
                let j = parse_party(&modes[1])?;
                apply_beam_splitter(&gaussian, i, j, ch.eta)?
            }
            other => {
                return Err(CliError::Validation(format!(
                    "channels[{k}]: unknown channel `{other}`"
                )))
            }
        };
        state = BuiltState::Gaussian(next);
    }
    Ok(state)
}

fn required_r(spec: &StateSpec) -> CliResult<f64> {
    spec.r
        .ok_or_else(|| CliError::Validation(format!("state `{}` needs `r`", spec.kind)))
}

/// Parses a quadrature expression like "X_B", "P_A+P_B+P_C" or
/// "0.5*X_A-X_B" into an observable over `n_modes` modes.
pub fn parse_quadrature(expr: &str, n_modes: usize) -> CliResult<QuadratureObservable> {
    let cleaned: String = expr.chars().filter(|c| !c.is_whitespace()).collect();
    if cleaned.is_empty() {
        return Err(CliError::Validation("empty quadrature expression".into()));
    }
    let mut terms: Vec<(Party, f64, f64)> = Vec::new();
    let mut sign = 1.0;
    let mut rest = cleaned.as_str();
    while !rest.is_empty() {
        if let Some(tail) = rest.strip_prefix('+') {
            sign = 1.0;
            rest = tail;
            continue;
        }
        if let Some(tail) = rest.strip_prefix('-') {
            sign = -1.0;
            rest = tail;
            continue;
        }
        let end = rest
            .char_indices()
            .find(|(_, c)| *c == '+' || *c == '-')
            .map(|(i, _)| i)
            .unwrap_or(rest.len());
        let term = &rest[..end];
        rest = &rest[end..];

        let (coef, quad) = match term.split_once('*') {
            Some((c, q)) => (
                c.parse::<f64>().map_err(|_| {
                    CliError::Validation(format!("bad coefficient `{c}` in `{expr}`"))
                })?,
                q,
            ),
            None => (1.0, term),
        };
        let (which, party) = quad.split_once('_').ok_or_else(|| {
            CliError::Validation(format!("bad quadrature term `{term}` in `{expr}`"))
        })?;
        let party = parse_party(party)?;
        if party.index() >= n_modes {
            return Err(CliError::Validation(format!(
                "mode `{party}` out of range in `{expr}`"
            )));
        }
        match which {
            "X" => terms.push((party, sign * coef, 0.0)),
            "P" => terms.push((party, 0.0, sign * coef)),
            other => {
                return Err(CliError::Validation(format!(
                    "bad quadrature `{other}` in `{expr}` (expected X or P)"
                )))
            }
        }
        sign = 1.0;
    }
    QuadratureObservable::combination(&terms, n_modes)
        .map_err(|e| CliError::Validation(e.to_string()))
}

fn parse_axis(c: char) -> CliResult<Option<Axis>> {
    match c {
        'X' => Ok(Some(Axis::X)),
        'Y' => Ok(Some(Axis::Y)),
        'Z' => Ok(Some(Axis::Z)),
        'I' => Ok(None),
        other => Err(CliError::Validation(format!(
            "bad axis character `{other}` (expected I, X, Y or Z)"
        ))),
    }
}

/// Builds a joint conditioning observable from an axis string, one character
/// per group party (qubits), e.g. "XX", "YX", "ZI".
pub fn parse_conditioning(axes: &str, group_len: usize) -> CliResult<CMatrix> {
    if axes.chars().count() != group_len {
        return Err(CliError::Validation(format!(
            "conditioning `{axes}` must have one axis per group party ({group_len})"
        )));
    }
    let mut op = CMatrix::identity(1, 1);
    for c in axes.chars() {
        let factor = match parse_axis(c)? {
            Some(axis) => pauli_matrix(axis),
            None => CMatrix::identity(2, 2),
        };
        op = op.kronecker(&factor);
    }
    Ok(op)
}

fn parse_target_axis(target: &str) -> CliResult<Axis> {
    match target {
        "X" => Ok(Axis::X),
        "Y" => Ok(Axis::Y),
        "Z" => Ok(Axis::Z),
        other => Err(CliError::Validation(format!(
            "bad spin target `{other}` (expected X, Y or Z)"
        ))),
    }
}

fn parse_spin_mode(
    mode: Option<&str>,
    conditioning: Option<&Vec<String>>,
    group_len: usize,
) -> CliResult<SpinSteeringMode> {
    match mode.unwrap_or("same_axis") {
        "same_axis" => Ok(SpinSteeringMode::SameAxis),
        "optimized" => Ok(SpinSteeringMode::Optimized),
        "specified" => {
            let strings = conditioning.ok_or_else(|| {
                CliError::Validation("specified mode needs `conditioning`".into())
            })?;
            let mats = strings
                .iter()
                .map(|s| parse_conditioning(s, group_len))
                .collect::<CliResult<Vec<_>>>()?;
            Ok(SpinSteeringMode::Specified(mats))
        }
        other => Err(CliError::Validation(format!(
            "unknown spin mode `{other}` (expected same_axis, optimized or specified)"
        ))),
    }
}

pub fn run_inference_item(state: &BuiltState, item: &InferenceItem) -> CliResult<InferenceResult> {
    let steered = parse_party(&item.steered)?;
    let group = parse_group(&item.group)?;
    match state {
        BuiltState::Discrete(s) => {
            let axis = parse_target_axis(&item.target)?;
            let target = SpinObservable::axis(axis, SpinUnits::Pauli);
            let (mode, conditioning) = match item.mode.as_str() {
                "optimized" => (InferenceMode::Optimized, None),
                "specified" => {
                    let axes = item.conditioning.as_deref().ok_or_else(|| {
                        CliError::Validation("specified inference needs `conditioning`".into())
                    })?;
                    let matrix = parse_conditioning(axes, group.len())?;
                    (
                        InferenceMode::Specified,
                        Some(DiscreteConditioning::Matrix(matrix)),
                    )
                }
                other => {
                    return Err(CliError::Validation(format!(
                        "unknown inference mode `{other}`"
                    )))
                }
            };
            Ok(inf_variance_discrete(
                s,
                steered,
                &target,
                &group,
                mode,
                conditioning.as_ref(),
            )?)
        }
        BuiltState::Gaussian(s) => {
            let target = parse_quadrature(&item.target, s.n_modes())?;
            Ok(inf_variance_gaussian(s, &[steered], &target, &group)?)
        }
    }
}

pub fn run_witness_item(state: &BuiltState, item: &WitnessItem) -> CliResult<Vec<WitnessValue>> {
    let steered = parse_group(&item.steered)?;
    let group = parse_group(&item.group)?;
    let single_steered = || -> CliResult<Party> {
        if steered.len() == 1 {
            Ok(steered[0])
        } else {
            Err(CliError::Validation(format!(
                "witness `{}` needs a single steered party",
                item.kind
            )))
        }
    };
    let single_group = || -> CliResult<Party> {
        if group.len() == 1 {
            Ok(group[0])
        } else {
            Err(CliError::Validation(format!(
                "witness `{}` needs a single partner party",
                item.kind
            )))
        }
    };

    match item.kind.as_str() {
        "e" => {
            let s = state.gaussian()?;
            let pair = match (&item.u, &item.v) {
                (Some(u), Some(v)) => Some((
                    parse_quadrature(u, s.n_modes())?,
                    parse_quadrature(v, s.n_modes())?,
                )),
                (None, None) => None,
                _ => {
                    return Err(CliError::Validation(
                        "give both `u` and `v`, or neither".into(),
                    ))
                }
            };
            Ok(vec![epr_witness(
                s,
                &steered,
                &group,
                pair.as_ref().map(|(u, v)| (u, v)),
            )?])
        }
        "s2" | "s3" => {
            let s = state.discrete()?;
            let mode = parse_spin_mode(item.mode.as_deref(), item.conditioning.as_ref(), group.len())?;
            let w = if item.kind == "s2" {
                s2_witness(s, single_steered()?, &group, &mode)?
            } else {
                s3_witness(s, single_steered()?, &group, &mode)?
            };
            Ok(vec![w])
        }
        "s_tilde" => {
            let s = state.discrete()?;
            let primed = item.primed.unwrap_or([0.0, std::f64::consts::FRAC_PI_2]);
            let instances = chsh_moment_settings((primed[0], primed[1]));
            let which = item.instance.unwrap_or(1);
            let settings = instances.get(which - 1).ok_or_else(|| {
                CliError::Validation(format!("s_tilde instance must be 1 or 2, got {which}"))
            })?;
            Ok(vec![s_tilde_m(
                s,
                single_steered()?,
                single_group()?,
                settings,
                SQRT_2,
            )?])
        }
        "chsh_pair" => {
            let s = state.discrete()?;
            let primed = item.primed.unwrap_or([0.0, std::f64::consts::FRAC_PI_2]);
            let pair = chsh_pair_steering(
                s,
                single_steered()?,
                single_group()?,
                (primed[0], primed[1]),
                (0.0, std::f64::consts::FRAC_PI_2),
            )?;
            Ok(pair.to_vec())
        }
        "bell" => {
            let s = state.discrete()?;
            let w = match &item.angles {
                Some(angles) => {
                    if angles.len() != 4 {
                        return Err(CliError::Validation(
                            "bell needs exactly four angles".into(),
                        ));
                    }
                    bell_chsh(
                        s,
                        single_steered()?,
                        single_group()?,
                        &[angles[0], angles[1], angles[2], angles[3]],
                    )?
                }
                None => bell_chsh_optimized(s, single_steered()?, single_group()?)?,
            };
            Ok(vec![w])
        }
        other => Err(CliError::Validation(format!(
            "unknown witness kind `{other}`"
        ))),
    }
}

pub fn run_monogamy_item(
    state: &BuiltState,
    item: &MonogamyItem,
) -> CliResult<Vec<MonogamyReport>> {
    let steered = parse_group(&item.steered)?;
    let partners: Vec<Vec<Party>> = item
        .partners
        .iter()
        .map(|g| parse_group(g))
        .collect::<CliResult<Vec<_>>>()?;
    let need_partners = |n: usize| -> CliResult<()> {
        if partners.len() == n {
            Ok(())
        } else {
            Err(CliError::Validation(format!(
                "monogamy `{}` needs {n} partner groups, got {}",
                item.id,
                partners.len()
            )))
        }
    };
    let single_steered = || -> CliResult<Party> {
        if steered.len() == 1 {
            Ok(steered[0])
        } else {
            Err(CliError::Validation(format!(
                "monogamy `{}` needs a single steered party",
                item.id
            )))
        }
    };
    let single_partner = |k: usize| -> CliResult<Party> {
        if partners[k].len() == 1 {
            Ok(partners[k][0])
        } else {
            Err(CliError::Validation(format!(
                "monogamy `{}` needs single-party partners",
                item.id
            )))
        }
    };
    let spin_mode = || -> CliResult<SpinSteeringMode> {
        match item.mode.as_deref().unwrap_or("optimized") {
            "same_axis" => Ok(SpinSteeringMode::SameAxis),
            "optimized" => Ok(SpinSteeringMode::Optimized),
            other => Err(CliError::Validation(format!(
                "unknown monogamy mode `{other}`"
            ))),
        }
    };
    let primed = |k: usize| -> (f64, f64) {
        item.primed
            .as_ref()
            .and_then(|p| p.get(k))
            .map(|p| (p[0], p[1]))
            .unwrap_or((0.0, std::f64::consts::FRAC_PI_2))
    };

    match item.id.as_str() {
        "R1_product" => {
            need_partners(2)?;
            Ok(vec![check_r1(
                state.gaussian()?,
                &steered,
                &partners[0],
                &partners[1],
            )?])
        }
        "R2_sum2" => {
            need_partners(2)?;
            Ok(vec![check_r2(
                state.discrete()?,
                single_steered()?,
                &partners[0],
                &partners[1],
                &spin_mode()?,
            )?])
        }
        "R3_sum3" => {
            need_partners(3)?;
            Ok(vec![check_r3(
                state.discrete()?,
                single_steered()?,
                [&partners[0], &partners[1], &partners[2]],
                &spin_mode()?,
            )?])
        }
        "R4_msum" => {
            need_partners(2)?;
            let parties = [single_partner(0)?, single_partner(1)?];
            let settings = [
                chsh_moment_settings(primed(0))[0].clone(),
                chsh_moment_settings(primed(1))[0].clone(),
            ];
            Ok(vec![check_r4(
                state.discrete()?,
                single_steered()?,
                &parties,
                &settings,
                SQRT_2,
            )?])
        }
        "CHSH_moment_pair" => {
            need_partners(2)?;
            let reports = check_chsh_moment_pair(
                state.discrete()?,
                single_steered()?,
                single_partner(0)?,
                single_partner(1)?,
                primed(0),
                primed(1),
            )?;
            Ok(reports.to_vec())
        }
        "Bell_sum" => {
            need_partners(2)?;
            Ok(vec![check_bell_sum(
                state.discrete()?,
                single_steered()?,
                single_partner(0)?,
                single_partner(1)?,
                primed(0),
                primed(1),
            )?])
        }
        "Bell_sum_grid" => {
            need_partners(2)?;
            Ok(vec![check_bell_sum_grid(
                state.discrete()?,
                single_steered()?,
                single_partner(0)?,
                single_partner(1)?,
                item.grid_n.unwrap_or(8),
            )?])
        }
        "R5_R6" => {
            need_partners(2)?;
            Ok(check_r5_r6(
                state.gaussian()?,
                &steered,
                &partners[0],
                &partners[1],
            )?)
        }
        "qubit_group_sums" => {
            if partners.len() != 2 && partners.len() != 3 {
                return Err(CliError::Validation(
                    "qubit_group_sums needs 2 or 3 partner groups".into(),
                ));
            }
            let parse_conds = |strings: &Option<Vec<String>>, group_len: usize| {
                strings
                    .as_ref()
                    .map(|list| {
                        list.iter()
                            .map(|s| parse_conditioning(s, group_len))
                            .collect::<CliResult<Vec<_>>>()
                    })
                    .transpose()
            };
            let joint_len = partners[0].len() + partners[1].len();
            let options = GroupSumOptions {
                single_mode: spin_mode()?,
                group_conditionings_s2: parse_conds(&item.conditioning_s2, joint_len)?,
                group_conditionings_s3: parse_conds(&item.conditioning_s3, joint_len)?,
            };
            Ok(check_qubit_group_sums(
                state.discrete()?,
                single_steered()?,
                &partners[0],
                &partners[1],
                partners.get(2).map(|g| g.as_slice()),
                &options,
            )?)
        }
        other => Err(CliError::Validation(format!(
            "unknown monogamy id `{other}`"
        ))),
    }
}

fn graph_plan(state: &BuiltState, spec: &crate::scenario::GraphPlanSpec) -> CliResult<Vec<PlannedWitness>> {
    let mut plan = Vec::new();
    if let Some(all) = &spec.all_pairs {
        let n = state.n_parties();
        for i in 0..n {
            for j in 0..n {
                if i == j {
                    continue;
                }
                plan.push(planned_witness(
                    state,
                    &all.kind,
                    &[Party(j)],
                    &[Party(i)],
                    all.mode.as_deref(),
                    None,
                )?);
            }
        }
    }
    for edge in &spec.edges {
        let steered = parse_group(&edge.steered)?;
        let group = parse_group(&edge.group)?;
        plan.push(planned_witness(
            state,
            &edge.kind,
            &steered,
            &group,
            edge.mode.as_deref(),
            edge.conditioning.as_ref(),
        )?);
    }
    Ok(plan)
}

fn planned_witness(
    state: &BuiltState,
    kind: &str,
    steered: &[Party],
    group: &[Party],
    mode: Option<&str>,
    conditioning: Option<&Vec<String>>,
) -> CliResult<PlannedWitness> {
    let single = |parties: &[Party]| -> CliResult<Party> {
        if parties.len() == 1 {
            Ok(parties[0])
        } else {
            Err(CliError::Validation(format!(
                "graph witness `{kind}` needs single parties"
            )))
        }
    };
    match kind {
        "e" => {
            state.gaussian()?;
            Ok(PlannedWitness::Epr {
                steered: steered.to_vec(),
                group: group.to_vec(),
                pair: None,
            })
        }
        "s2" | "s3" => {
            state.discrete()?;
            Ok(PlannedWitness::Spin {
                steered: single(steered)?,
                group: group.to_vec(),
                n_axes: if kind == "s2" { 2 } else { 3 },
                mode: parse_spin_mode(mode, conditioning, group.len())?,
            })
        }
        "bell" => Ok(PlannedWitness::Bell {
            steered: single(steered)?,
            partner: single(group)?,
            angles: None,
        }),
        "chsh_pair" => Ok(PlannedWitness::ChshMoment {
            steered: single(steered)?,
            partner: single(group)?,
            primed: (0.0, std::f64::consts::FRAC_PI_2),
        }),
        other => Err(CliError::Validation(format!(
            "unknown graph witness kind `{other}`"
        ))),
    }
}

/// Runs a parsed scenario end to end.
pub fn run_scenario(scenario: &ScenarioFile) -> CliResult<ReportDocument> {
    let start = std::time::Instant::now();
    let state = build_state(&scenario.state, None)?;

    let mut inference = Vec::new();
    for item in &scenario.inference {
        inference.push(run_inference_item(&state, item)?);
    }
    let mut witnesses = Vec::new();
    for item in &scenario.witness {
        witnesses.extend(run_witness_item(&state, item)?);
    }
    let mut monogamy = Vec::new();
    for item in &scenario.monogamy {
        monogamy.extend(run_monogamy_item(&state, item)?);
    }
    let graph: Option<SteeringGraph> = match &scenario.graph {
        Some(spec) => {
            let plan = graph_plan(&state, spec)?;
            Some(build_steering_graph(state.as_ref(), &plan)?)
        }
        None => None,
    };

    let sweep = match &scenario.sweep {
        Some(spec) => Some(run_sweep(scenario, spec)?),
        None => None,
    };

    Ok(ReportDocument::new(
        scenario,
        inference,
        witnesses,
        monogamy,
        graph,
        sweep,
        start.elapsed().as_secs_f64() * 1e3,
    ))
}

fn run_sweep(scenario: &ScenarioFile, spec: &crate::scenario::SweepSpec) -> CliResult<SweepTable> {
    let grid = spec.grid()?;
    let mut columns: Vec<String> = vec![spec.parameter.clone()];
    let mut rows: Vec<Vec<f64>> = Vec::with_capacity(grid.len());

    for (point_index, &value) in grid.iter().enumerate() {
        let state = build_state(&scenario.state, Some((spec.parameter.as_str(), value)))?;
        let mut row = vec![value];
        let mut labels: Vec<String> = vec![spec.parameter.clone()];

        for item in &scenario.inference {
            let r = run_inference_item(&state, item)?;
            labels.push(format!(
                "var({}|{})",
                item.target,
                item.group.join(",")
            ));
            row.push(r.variance);
        }
        for item in &scenario.witness {
            for w in run_witness_item(&state, item)? {
                labels.push(w.label());
                row.push(w.value);
            }
        }
        for item in &scenario.monogamy {
            for (k, report) in run_monogamy_item(&state, item)?.into_iter().enumerate() {
                labels.push(format!("{}#{k}.lhs", report.id));
                row.push(report.lhs);
                labels.push(format!("{}#{k}.slack", report.id));
                row.push(report.slack);
            }
        }

        if point_index == 0 {
            columns = labels;
        }
        rows.push(row);
    }

    Ok(SweepTable {
        parameter: spec.parameter.clone(),
        columns,
        rows,
    })
}

/// Which outputs the scenario requests.
pub fn requested_outputs(scenario: &ScenarioFile) -> Vec<OutputKind> {
    scenario.outputs.clone()
}
