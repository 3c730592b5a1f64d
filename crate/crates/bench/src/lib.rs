//! Graphs shared by the benchmarks.

use impartial::generators::{cycle, lower_bound_family, random_graph};
use impartial::NominationGraph;

/// A labelled graph on `n` vertices for each benchmark size.
pub fn fixtures(sizes: &[usize]) -> Vec<(String, NominationGraph)> {
    sizes
        .iter()
        .map(|&n| (format!("random/{n}"), random_graph(n, n as u64).expect("n >= 2")))
        .collect()
}

pub fn tightness_graph(nprime: usize) -> NominationGraph {
    lower_bound_family(2, nprime).expect("nprime >= 1")
}

pub fn ring(n: usize) -> NominationGraph {
    cycle(n).expect("n >= 2")
}
