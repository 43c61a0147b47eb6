//! Inputs shared by the benchmarks in `benches/`.

use latcoh::{LatticeContext, PlumbingGraph};

/// Loads a graph from the workspace `graphs/` directory, with its pending
/// blow-ups carried out.
pub fn graph(name: &str) -> PlumbingGraph {
    let path = format!("{}/../../graphs/{name}.graph", env!("CARGO_MANIFEST_DIR"));
    let text = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{path}: {e}"));
    PlumbingGraph::parse(&text).expect("valid graph").apply_decorations().0
}

pub fn context(name: &str) -> LatticeContext {
    LatticeContext::new(&graph(name))
}
