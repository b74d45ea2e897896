//! Graph export: a dot-like text form and a structured JSON form that
//! parses back losslessly. Ordering is lexical and deterministic.

use qsteer_core::graph::SteeringGraph;

use crate::{CliError, CliResult};

/// Dot-like rendering: node lines, then `A -> B [label=witness:value]`
/// directed edges, then `A -- B [label=concurrence:value]` undirected
/// edges. Group sources join their labels with commas.
pub fn export_dot(graph: &SteeringGraph) -> String {
    let mut out = String::from("steering {\n");
    for node in &graph.nodes {
        out.push_str(&format!("  node {node}\n"));
    }
    for edge in &graph.directed {
        out.push_str(&format!(
            "  {} -> {} [label={}:{}]\n",
            edge.from.join(","),
            edge.to,
            edge.witness,
            edge.value
        ));
    }
    for edge in &graph.undirected {
        out.push_str(&format!(
            "  {} -- {} [label=concurrence:{}]\n",
            edge.a, edge.b, edge.concurrence
        ));
    }
    out.push_str("}\n");
    out
}

/// Structured export: the graph as JSON with nodes/edges arrays.
pub fn export_structured(graph: &SteeringGraph) -> String {
    serde_json::to_string_pretty(graph).expect("graph serializes")
}

/// Parses a structured export back into a graph.
pub fn parse_structured(text: &str) -> CliResult<SteeringGraph> {
    serde_json::from_str(text).map_err(|e| CliError::Validation(format!("graph parse: {e}")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use qsteer_core::graph::{DirectedEdge, UndirectedEdge};

    fn sample() -> SteeringGraph {
        SteeringGraph {
            nodes: vec!["A".into(), "B".into(), "C".into()],
            directed: vec![DirectedEdge {
                from: vec!["A".into(), "C".into()],
                to: "B".into(),
                witness: "S3".into(),
                value: 0.5,
            }],
            undirected: vec![UndirectedEdge {
                a: "A".into(),
                b: "B".into(),
                concurrence: 2.0 / 3.0,
            }],
        }
    }

    #[test]
    fn structured_round_trip_is_lossless() {
        let graph = sample();
        let text = export_structured(&graph);
        let parsed = parse_structured(&text).unwrap();
        assert_eq!(parsed, graph);
    }

    #[test]
    fn dot_rendering_lists_edges() {
        let text = export_dot(&sample());
        assert!(text.contains("A,C -> B [label=S3:0.5]"));
        assert!(text.contains("A -- B [label=concurrence:0.6666666666666666]"));
        assert!(text.contains("node A\n"));
    }

    #[test]
    fn export_is_deterministic() {
        let graph = sample();
        assert_eq!(export_structured(&graph), export_structured(&graph));
        assert_eq!(export_dot(&graph), export_dot(&graph));
    }
}
