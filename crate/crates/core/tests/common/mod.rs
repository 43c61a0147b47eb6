#![allow(dead_code)]

use latcoh::{LatticeContext, PlumbingGraph};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

pub fn graph(name: &str) -> PlumbingGraph {
    let path = format!("{}/../../graphs/{name}.graph", env!("CARGO_MANIFEST_DIR"));
    PlumbingGraph::parse(&std::fs::read_to_string(&path).unwrap()).unwrap()
}

pub fn context(name: &str) -> LatticeContext {
    LatticeContext::new(&graph(name))
}

pub fn golden(name: &str) -> String {
    let path = format!("{}/tests/golden/{name}", env!("CARGO_MANIFEST_DIR"));
    std::fs::read_to_string(path).unwrap()
}

/// Negative definite trees of rank 1..=4 with at least two classes.
pub fn random_trees(seed: u64, count: usize) -> Vec<PlumbingGraph> {
    let mut rng = StdRng::seed_from_u64(seed);
    let mut out = Vec::new();
    while out.len() < count {
        let n = rng.gen_range(1..=4);
        let mut text = String::new();
        for i in 1..=n {
            text.push_str(&format!("vertex {i} {}\n", -rng.gen_range(1..=5)));
        }
        for i in 2..=n {
            text.push_str(&format!("edge {} {i}\n", rng.gen_range(1..i)));
        }
        let Ok(g) = PlumbingGraph::parse(&text) else {
            continue;
        };
        if LatticeContext::new(&g).h_order() >= 2 {
            out.push(g);
        }
    }
    out
}
