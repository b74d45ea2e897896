//! Steering graphs: directed edges for detected witnesses, undirected edges
//! for pairwise qubit concurrence.

use serde::{Deserialize, Serialize};

use crate::discrete::{concurrence, DensityState};
use crate::error::{Error, Result};
use crate::gaussian::{GaussianState, QuadratureObservable};
use crate::party::Party;
use crate::witness::{
    bell_chsh, bell_chsh_optimized, chsh_pair_steering, epr_witness, s2_witness, s3_witness,
    s_tilde_m, CorrelationSetting, SpinSteeringMode, WitnessValue,
};

/// Concurrence below this does not produce an entanglement edge.
const CONCURRENCE_TOL: f64 = 1e-9;

/// Either state family, for plan evaluation.
#[derive(Clone, Copy)]
pub enum StateRef<'a> {
    Discrete(&'a DensityState),
    Gaussian(&'a GaussianState),
}

impl<'a> StateRef<'a> {
    fn n_parties(&self) -> usize {
        match self {
            StateRef::Discrete(s) => s.n_parties(),
            StateRef::Gaussian(s) => s.n_modes(),
        }
    }
}

/// One witness to evaluate for the graph.
#[derive(Clone, Debug)]
pub enum PlannedWitness {
    Epr {
        steered: Vec<Party>,
        group: Vec<Party>,
        pair: Option<(QuadratureObservable, QuadratureObservable)>,
    },
    Spin {
        steered: Party,
        group: Vec<Party>,
        n_axes: usize,
        mode: SpinSteeringMode,
    },
    Bell {
        steered: Party,
        partner: Party,
        angles: Option<[f64; 4]>,
    },
    ChshMoment {
        steered: Party,
        partner: Party,
        primed: (f64, f64),
    },
    STilde {
        steered: Party,
        partner: Party,
        settings: Vec<CorrelationSetting>,
        c_m: f64,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DirectedEdge {
    pub from: Vec<String>,
    pub to: String,
    pub witness: String,
    pub value: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct UndirectedEdge {
    pub a: String,
    pub b: String,
    pub concurrence: f64,
}

/// Directed steering edges (only detected witnesses appear) plus undirected
/// concurrence edges for entangled qubit pairs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SteeringGraph {
    pub nodes: Vec<String>,
    pub directed: Vec<DirectedEdge>,
    pub undirected: Vec<UndirectedEdge>,
}

fn evaluate(state: StateRef<'_>, item: &PlannedWitness) -> Result<WitnessValue> {
    match (state, item) {
        (StateRef::Gaussian(s), PlannedWitness::Epr { steered, group, pair }) => {
            epr_witness(s, steered, group, pair.as_ref().map(|(u, v)| (u, v)))
        }
        (
            StateRef::Discrete(s),
            PlannedWitness::Spin {
                steered,
                group,
                n_axes,
                mode,
            },
        ) => match n_axes {
            2 => s2_witness(s, *steered, group, mode),
            3 => s3_witness(s, *steered, group, mode),
            other => Err(Error::InvalidArgument(format!(
                "spin witness axes must be 2 or 3, got {other}"
            ))),
        },
        (StateRef::Discrete(s), PlannedWitness::Bell { steered, partner, angles }) => {
            match angles {
                Some(a) => bell_chsh(s, *steered, *partner, a),
                None => bell_chsh_optimized(s, *steered, *partner),
            }
        }
        (StateRef::Discrete(s), PlannedWitness::ChshMoment { steered, partner, primed }) => {
            let pair = chsh_pair_steering(
                s,
                *steered,
                *partner,
                *primed,
                (0.0, std::f64::consts::FRAC_PI_2),
            )?;
            // either instance certifies; report the larger one
            let [first, second] = pair;
            Ok(if first.value >= second.value { first } else { second })
        }
        (
            StateRef::Discrete(s),
            PlannedWitness::STilde {
                steered,
                partner,
                settings,
                c_m,
            },
        ) => s_tilde_m(s, *steered, *partner, settings, *c_m),
        _ => Err(Error::InvalidArgument(
            "witness kind does not match the state family".into(),
        )),
    }
}

/// Evaluates the plan and assembles the graph. An edge appears exactly when
/// its witness detects steering; concurrence edges are added for every
/// entangled qubit pair of a discrete state.
pub fn build_steering_graph(
    state: StateRef<'_>,
    plan: &[PlannedWitness],
) -> Result<SteeringGraph> {
    let n = state.n_parties();
    let nodes: Vec<String> = (0..n).map(|k| Party(k).label()).collect();

    let mut directed = Vec::new();
    for item in plan {
        let witness = evaluate(state, item)?;
        if witness.detects_steering {
            directed.push(DirectedEdge {
                from: witness.steering_group.iter().map(|p| p.label()).collect(),
                to: witness
                    .steered
                    .iter()
                    .map(|p| p.label())
                    .collect::<Vec<_>>()
                    .join(","),
                witness: witness.kind.to_string(),
                value: witness.value,
            });
        }
    }

    let mut undirected = Vec::new();
    if let StateRef::Discrete(s) = state {
        if s.party_dims().iter().all(|&d| d == 2) && n >= 2 {
            for i in 0..n {
                for j in (i + 1)..n {
                    let pair = s.partial_trace(&[Party(i), Party(j)])?;
                    let c = concurrence(&pair)?;
                    if c > CONCURRENCE_TOL {
                        undirected.push(UndirectedEdge {
                            a: Party(i).label(),
                            b: Party(j).label(),
                            concurrence: c,
                        });
                    }
                }
            }
        }
    }

    directed.sort_by(|x, y| {
        (x.to.as_str(), x.from.join(","), x.witness.as_str())
            .cmp(&(y.to.as_str(), y.from.join(","), y.witness.as_str()))
    });
    undirected.sort_by(|x, y| (x.a.as_str(), x.b.as_str()).cmp(&(y.a.as_str(), y.b.as_str())));

    Ok(SteeringGraph {
        nodes,
        directed,
        undirected,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::discrete::{make_ghz, make_w};
    use crate::gaussian::dual_steering_network;
    use crate::linalg::CMatrix;

    fn all_ordered_pairs(n: usize) -> Vec<(Party, Party)> {
        let mut pairs = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    pairs.push((Party(j), Party(i)));
                }
            }
        }
        pairs
    }

    #[test]
    fn w_state_graph_is_fully_two_way_for_three_axes() {
        let w = make_w();
        let plan: Vec<PlannedWitness> = all_ordered_pairs(3)
            .into_iter()
            .map(|(steered, group)| PlannedWitness::Spin {
                steered,
                group: vec![group],
                n_axes: 3,
                mode: SpinSteeringMode::SameAxis,
            })
            .collect();
        let graph = build_steering_graph(StateRef::Discrete(&w), &plan).unwrap();
        assert_eq!(graph.directed.len(), 6);
        // all three pairs are entangled
        assert_eq!(graph.undirected.len(), 3);
    }

    #[test]
    fn ghz_graph_has_only_the_collective_edge() {
        let ghz = make_ghz(3).unwrap();
        let sx = crate::discrete::pauli_matrix(crate::discrete::Axis::X);
        let sy = crate::discrete::pauli_matrix(crate::discrete::Axis::Y);
        let sz = crate::discrete::pauli_matrix(crate::discrete::Axis::Z);
        let id = CMatrix::identity(2, 2);
        let mut plan: Vec<PlannedWitness> = all_ordered_pairs(3)
            .into_iter()
            .map(|(steered, group)| PlannedWitness::Spin {
                steered,
                group: vec![group],
                n_axes: 3,
                mode: SpinSteeringMode::Optimized,
            })
            .collect();
        plan.push(PlannedWitness::Spin {
            steered: Party::B,
            group: vec![Party::A, Party::C],
            n_axes: 3,
            mode: SpinSteeringMode::Specified(vec![
                sx.kronecker(&sx),
                sy.kronecker(&sx),
                sz.kronecker(&id),
            ]),
        });
        let graph = build_steering_graph(StateRef::Discrete(&ghz), &plan).unwrap();
        assert_eq!(graph.directed.len(), 1);
        assert_eq!(graph.directed[0].from, vec!["A", "C"]);
        assert_eq!(graph.directed[0].to, "B");
        assert!(graph.undirected.is_empty());
    }

    #[test]
    fn dual_network_graph_shows_one_to_two_steering() {
        let s = dual_steering_network(1.0).unwrap();
        let plan: Vec<PlannedWitness> = all_ordered_pairs(3)
            .into_iter()
            .map(|(steered, group)| PlannedWitness::Epr {
                steered: vec![steered],
                group: vec![group],
                pair: None,
            })
            .collect();
        let graph = build_steering_graph(StateRef::Gaussian(&s), &plan).unwrap();
        assert_eq!(graph.directed.len(), 2);
        for edge in &graph.directed {
            assert_eq!(edge.from, vec!["A"]);
        }
        let targets: Vec<&str> = graph.directed.iter().map(|e| e.to.as_str()).collect();
        assert_eq!(targets, vec!["B", "C"]);
    }

    #[test]
    fn empty_plan_yields_nodes_only() {
        let w = make_w();
        let graph = build_steering_graph(StateRef::Discrete(&w), &[]).unwrap();
        assert_eq!(graph.nodes, vec!["A", "B", "C"]);
        assert!(graph.directed.is_empty());
        // W pairs stay entangled regardless of the plan
        assert_eq!(graph.undirected.len(), 3);
    }
}
