//! Negative correlation between the left-indegree of a top vertex and that of the others.
//!
//! For a uniformly random permutation, `A_j` is the event that the fixed top
//! vertex `v*` has `j` in-neighbours to its left and `B_i` the event that some
//! other vertex has at least `i`. The check asserts
//! `P[B_i | A_j] ≥ P[B_i | A_i]` for `1 ≤ i ≤ Δ`, `0 ≤ j < i`, and
//! `P[A_i] = 1/(Δ+1)`, from exact permutation counts.

use serde::Serialize;

use crate::analysis::serialize_display;
use crate::distribution::{ratio_u, serialize_rational, Rational};
use crate::enumerate::{factorial, fold_permutations};
use crate::error::{Error, Result};
use crate::graph::NominationGraph;
use crate::mechanisms::ExactConfig;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum PairOutcome {
    Pass {
        #[serde(serialize_with = "serialize_rational")]
        given_j: Rational,
        #[serde(serialize_with = "serialize_rational")]
        given_i: Rational,
    },
    Fail {
        #[serde(serialize_with = "serialize_rational")]
        given_j: Rational,
        #[serde(serialize_with = "serialize_rational")]
        given_i: Rational,
    },
    /// A conditioning event has probability zero.
    Vacuous,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PairCheck {
    pub i: usize,
    pub j: usize,
    pub outcome: PairOutcome,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CorrelationReport {
    #[serde(serialize_with = "serialize_display")]
    pub graph: NominationGraph,
    pub delta: usize,
    pub top: usize,
    /// `counts[j][m]`: permutations where `v*` has left-indegree `j` and the
    /// largest left-indegree among the other vertices is `m`.
    pub counts: Vec<Vec<u64>>,
    #[serde(serialize_with = "crate::distribution::serialize_rationals")]
    pub p_a: Vec<Rational>,
    pub pairs: Vec<PairCheck>,
    pub uniform_a: bool,
}

impl CorrelationReport {
    pub fn violations(&self) -> usize {
        self.pairs
            .iter()
            .filter(|p| matches!(p.outcome, PairOutcome::Fail { .. }))
            .count()
    }

    pub fn passed(&self) -> bool {
        self.uniform_a && self.violations() == 0
    }

    /// `P[B_i | A_j]`, or `None` when `A_j` is empty.
    pub fn conditional(&self, i: usize, j: usize) -> Option<Rational> {
        let row = self.counts.get(j)?;
        let total: u64 = row.iter().sum();
        if total == 0 {
            return None;
        }
        let hit: u64 = row.iter().skip(i).sum();
        Some(ratio_u(hit, total))
    }
}

/// Checks every `(i, j)` with `i` in `i_range` (defaults to `1..=Δ`).
pub fn verify_correlation_lemma(
    g: &NominationGraph,
    i_range: Option<std::ops::RangeInclusive<usize>>,
    cfg: &ExactConfig,
) -> Result<CorrelationReport> {
    let n = g.n();
    if n > cfg.perm_cap {
        return Err(Error::capacity("correlation check", n, cfg.perm_cap));
    }
    let (delta, _, top) = g.max_indegree_and_top();
    let star = top - 1;
    let out = g.out_idx();
    let width = delta + 1;
    let flat = fold_permutations(
        n,
        cfg.parallel_at(n),
        || (vec![0u64; width * width], vec![0usize; n]),
        |(counts, left), seq| {
            left.iter_mut().for_each(|x| *x = 0);
            let mut seen_star = 0;
            let mut other_max = 0;
            for &v in seq {
                if v == star {
                    seen_star = left[v];
                } else {
                    other_max = other_max.max(left[v]);
                }
                left[out[v]] += 1;
            }
            counts[seen_star * width + other_max] += 1;
        },
        |(mut a, l), (b, _)| {
            a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
            (a, l)
        },
    )
    .0;
    let counts: Vec<Vec<u64>> = flat.chunks(width).map(|c| c.to_vec()).collect();
    let total = factorial(n);
    let p_a: Vec<Rational> = counts.iter().map(|r| ratio_u(r.iter().sum(), total)).collect();
    let uniform_a = p_a.iter().all(|p| *p == ratio_u(1, width as u64));
    let mut report = CorrelationReport {
        graph: g.clone(),
        delta,
        top,
        counts,
        p_a,
        pairs: Vec::new(),
        uniform_a,
    };
    let range = i_range.unwrap_or(1..=delta);
    if *range.start() == 0 || *range.end() > delta {
        return Err(Error::input(format!("i must lie in 1..={delta}")));
    }
    for i in range {
        for j in 0..i {
            let outcome = match (report.conditional(i, j), report.conditional(i, i)) {
                (Some(given_j), Some(given_i)) if given_j >= given_i => PairOutcome::Pass { given_j, given_i },
                (Some(given_j), Some(given_i)) => PairOutcome::Fail { given_j, given_i },
                _ => PairOutcome::Vacuous,
            };
            report.pairs.push(PairCheck { i, j, outcome });
        }
    }
    Ok(report)
}

/// The seven-vertex example used to illustrate the check, with `Δ = 3` at vertex 7.
pub fn example_graph() -> NominationGraph {
    NominationGraph::new(vec![7, 3, 1, 7, 4, 7, 3]).expect("valid example")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distribution::ratio;
    use crate::generators;

    #[test]
    fn example_passes() {
        let g = example_graph();
        let r = verify_correlation_lemma(&g, None, &ExactConfig::default()).unwrap();
        assert_eq!((r.delta, r.top), (3, 7));
        assert!(r.passed(), "{:?}", r.pairs);
        assert_eq!(r.pairs.len(), 6);
        let p = r.pairs.iter().find(|p| p.i == 3 && p.j == 1).unwrap();
        assert!(matches!(p.outcome, PairOutcome::Pass { .. }));
    }

    #[test]
    fn a_events_are_uniform_on_lower_bound_family() {
        let g = generators::lower_bound_family(2, 1).unwrap();
        let r = verify_correlation_lemma(&g, None, &ExactConfig::default()).unwrap();
        assert!(r.uniform_a);
        assert!(r.p_a.iter().all(|p| *p == ratio(1, 3)));
    }

    #[test]
    fn counts_cover_every_permutation() {
        let g = generators::random_graph(6, 2).unwrap();
        let r = verify_correlation_lemma(&g, None, &ExactConfig::default()).unwrap();
        assert_eq!(r.counts.iter().flatten().sum::<u64>(), 720);
        assert!(verify_correlation_lemma(&g, Some(0..=1), &ExactConfig::default()).is_err());
    }
}
