//! Random dictatorship: a uniformly random vertex picks the winner with its nomination.

use rand::Rng;

use crate::distribution::SelectionDistribution;
use crate::graph::NominationGraph;

/// `RD_v(G) = δ⁻(v) / n`.
pub fn rd_exact(g: &NominationGraph) -> SelectionDistribution {
    let n = g.n() as u64;
    let counts: Vec<u64> = g.indegrees().into_iter().map(|d| d as u64).collect();
    SelectionDistribution::from_counts(&counts, n)
}

pub fn rd_sample<R: Rng + ?Sized>(g: &NominationGraph, rng: &mut R) -> usize {
    let u = rng.random_range(0..g.n());
    g.out_idx()[u] + 1
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distribution::ratio;
    use crate::generators;

    #[test]
    fn proportional_to_indegree() {
        let d = rd_exact(&NominationGraph::new(vec![2, 1]).unwrap());
        assert_eq!(d.probs(), &[ratio(1, 2), ratio(1, 2)]);
        let g0 = generators::ub_family(7, 0).unwrap();
        let d = rd_exact(&g0);
        assert_eq!(d.prob(2), &ratio(2, 7));
        assert!(d.is_exact());
    }

    #[test]
    fn sampler_returns_a_nominee() {
        let g = generators::random_graph(8, 1).unwrap();
        let mut r = crate::rng::seeded(5);
        for _ in 0..200 {
            let v = rd_sample(&g, &mut r);
            assert!(g.indegree(v).unwrap() > 0);
        }
    }
}
