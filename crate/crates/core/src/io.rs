//! Graph and configuration file formats.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::maxcut::WeightedGraph;

/// Name of the bundled seven-node instance.
pub const BUILTIN_GRAPH: &str = "table1";

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GraphFile {
    nodes: usize,
    edges: Vec<(usize, usize, f64)>,
}

fn parse_error(e: serde_json::Error) -> Error {
    Error::Parse {
        line: e.line(),
        column: e.column(),
        msg: e.to_string(),
    }
}

/// Parses `{"nodes": m, "edges": [[i, j, w], ...]}`.
pub fn parse_graph(text: &str) -> Result<WeightedGraph> {
    let file: GraphFile = serde_json::from_str(text).map_err(parse_error)?;
    WeightedGraph::new(file.nodes, file.edges).map_err(|e| match e {
        Error::InvalidGraph(msg) => Error::InvalidGraph(format!("field \"edges\": {msg}")),
        other => other,
    })
}

pub fn serialize_graph(graph: &WeightedGraph) -> String {
    let file = GraphFile {
        nodes: graph.num_nodes(),
        edges: graph.edges().iter().map(|e| (e.i, e.j, e.weight)).collect(),
    };
    serde_json::to_string(&file).expect("graph serializes")
}

/// `"table1"` or a path to a graph file.
pub fn load_graph(source: &str) -> Result<WeightedGraph> {
    if source == BUILTIN_GRAPH {
        return Ok(WeightedGraph::table1());
    }
    let text = std::fs::read_to_string(Path::new(source))?;
    parse_graph(&text)
}

/// Parses a JSON document into `T`, mapping syntax and schema errors to
/// [`Error::Parse`].
pub fn parse_json<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(parse_error)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_graph() {
        let g = parse_graph(r#"{"nodes":2, "edges":[[0,1,1.0]]}"#).unwrap();
        assert_eq!(g.num_nodes(), 2);
        assert_eq!(g.edges().len(), 1);
    }

    #[test]
    fn bundled_graph() {
        let g = load_graph("table1").unwrap();
        assert_eq!(g.num_nodes(), 7);
        assert_eq!(g.edges().len(), 9);
        assert!((g.total_weight() - 5.17).abs() < 1e-12);
    }

    #[test]
    fn errors() {
        let e = parse_graph(r#"{"nodes":2, "edges":[[0,0,1.0]]}"#).unwrap_err();
        assert!(e.to_string().contains("self-loop"), "{e}");
        let e = parse_graph("{\"nodes\":2,\n \"edges\":[[0,1,]]}").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 2, .. }), "{e}");
        let e = parse_graph(r#"{"nodes":2, "edges":[], "extra":1}"#).unwrap_err();
        assert!(matches!(e, Error::Parse { .. }));
        let e = parse_graph(r#"{"nodes":3, "edges":[[0,1,1],[1,0,2]]}"#).unwrap_err();
        assert!(e.to_string().contains("duplicate"));
    }

    #[test]
    fn normalizes_order() {
        let g = parse_graph(r#"{"nodes":3, "edges":[[2,1,0.5],[1,0,-1.0]]}"#).unwrap();
        let pairs: Vec<_> = g.edges().iter().map(|e| (e.i, e.j)).collect();
        assert_eq!(pairs, vec![(0, 1), (1, 2)]);
    }

    #[test]
    fn round_trip() {
        let g = WeightedGraph::table1();
        assert_eq!(parse_graph(&serialize_graph(&g)).unwrap(), g);
    }
}
