//! Plurality with runner-up and gap, an inexact mechanism.
//!
//! For a permutation `π`, vertices are compared lexicographically by
//! `(indegree, position in π)`. The top vertex `v^F` gets 3/4 when removing
//! its own nomination leaves every other vertex at least two nominations
//! behind it, and 1/2 otherwise. The runner-up `v^S` gets 1/2 when it
//! nominates `v^F` and would become the top vertex without that nomination.
//! A single vector can total 5/4; averaging `π` with its reverse keeps the
//! total at most 1.

use rand::seq::SliceRandom;
use rand::Rng;
use serde::Serialize;

use crate::distribution::{ratio, Rational, SelectionDistribution};
use crate::enumerate::{factorial, fold_permutations};
use crate::error::{Error, Result};
use crate::graph::{PartialNominationGraph, Permutation};
use crate::mechanisms::{ExactConfig, PartialMechanism};
use crate::rng;

/// Per-graph data shared by every permutation.
#[derive(Debug, Clone)]
pub(crate) struct PrugContext<'a> {
    out: &'a [Option<usize>],
    indeg: Vec<usize>,
    delta: usize,
    /// `gap[v]`: `δ⁻(v, G) ≥ δ⁻(u, G₋ᵥ) + 2` for every `u ≠ v`.
    gap: Vec<bool>,
}

/// Non-zero entries of one permutation's vector, in quarters.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct Assignment {
    pub first: usize,
    pub first_quarters: u64,
    pub second: Option<usize>,
}

impl<'a> PrugContext<'a> {
    pub fn new(g: &'a PartialNominationGraph) -> Self {
        let out = g.out_idx();
        let n = out.len();
        let indeg = g.indegrees();
        let delta = indeg.iter().copied().max().unwrap_or(0);
        let gap = (0..n)
            .map(|v| {
                (0..n).filter(|&u| u != v).all(|u| {
                    let without_v = indeg[u] - (out[v] == Some(u)) as usize;
                    indeg[v] >= without_v + 2
                })
            })
            .collect();
        Self { out, indeg, delta, gap }
    }

    /// `pos[v]` is the 0-based position of `v`.
    #[inline]
    pub fn assign(&self, pos: &[usize]) -> Assignment {
        let n = pos.len();
        let key = |v: usize| self.indeg[v] * n + pos[v];
        let (mut first, mut second) = if key(0) > key(1) { (0, 1) } else { (1, 0) };
        for v in 2..n {
            let k = key(v);
            if k > key(first) {
                second = first;
                first = v;
            } else if k > key(second) {
                second = v;
            }
        }
        let first_quarters = if self.gap[first] { 3 } else { 2 };
        let ds = self.indeg[second];
        let runner_up =
            self.out[second] == Some(first) && (ds == self.delta || (ds + 1 == self.delta && pos[second] > pos[first]));
        Assignment {
            first,
            first_quarters,
            second: runner_up.then_some(second),
        }
    }
}

/// The vector `p(π)` for a single permutation. Its total lies in {1/2, 3/4, 1, 5/4}.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PrugVector {
    /// Entries in units of 1/4, 0-based by vertex.
    pub quarters: Vec<u64>,
}

impl PrugVector {
    pub fn probs(&self) -> Vec<Rational> {
        self.quarters.iter().map(|&q| ratio(q as i64, 4)).collect()
    }

    pub fn prob(&self, v: usize) -> Rational {
        ratio(self.quarters[v - 1] as i64, 4)
    }

    pub fn total(&self) -> Rational {
        ratio(self.quarters.iter().sum::<u64>() as i64, 4)
    }
}

pub fn prug_p_vector(g: &PartialNominationGraph, pi: &Permutation) -> Result<PrugVector> {
    if pi.len() != g.n() {
        return Err(Error::input(format!(
            "permutation of length {} for a graph on {} vertices",
            pi.len(),
            g.n()
        )));
    }
    let a = PrugContext::new(g).assign(pi.pos_idx());
    let mut quarters = vec![0; g.n()];
    quarters[a.first] = a.first_quarters;
    if let Some(s) = a.second {
        quarters[s] = 2;
    }
    Ok(PrugVector { quarters })
}

/// Sum of `p(π)` over all permutations, in quarters.
pub(crate) fn prug_quarter_counts(g: &PartialNominationGraph, cfg: &ExactConfig) -> Result<Vec<u64>> {
    let n = g.n();
    if n > cfg.prug_cap {
        return Err(Error::capacity(
            "exact plurality with runner-up and gap",
            n,
            cfg.prug_cap,
        ));
    }
    let ctx = PrugContext::new(g);
    let (counts, _) = fold_permutations(
        n,
        cfg.parallel_at(n),
        || (vec![0u64; n], vec![0usize; n]),
        |(counts, pos), seq| {
            for (i, &v) in seq.iter().enumerate() {
                pos[v] = i;
            }
            let a = ctx.assign(pos);
            counts[a.first] += a.first_quarters;
            if let Some(s) = a.second {
                counts[s] += 2;
            }
        },
        |(mut a, p), (b, _)| {
            for (x, y) in a.iter_mut().zip(b) {
                *x += y;
            }
            (a, p)
        },
    );
    Ok(counts)
}

/// Exact output: the average of `p(π)` over all permutations. The total may be below 1.
pub fn prug_exact(g: &PartialNominationGraph, cfg: &ExactConfig) -> Result<SelectionDistribution> {
    let counts = prug_quarter_counts(g, cfg)?;
    let d = SelectionDistribution::from_counts(&counts, 4 * factorial(g.n()));
    SelectionDistribution::new(d.probs().to_vec())
}

/// Draws `π̄`, forms `q = (p(π̄) + p(π̄^R)) / 2` and returns a vertex with
/// probability `q_v`, or `None` with the remaining mass.
pub fn prug_sample<R: Rng + ?Sized>(g: &PartialNominationGraph, rng: &mut R) -> Option<usize> {
    let n = g.n();
    let ctx = PrugContext::new(g);
    let mut seq: Vec<usize> = (0..n).collect();
    seq.shuffle(rng);
    let mut pos = vec![0; n];
    for (i, &v) in seq.iter().enumerate() {
        pos[v] = i;
    }
    let rev: Vec<usize> = pos.iter().map(|&p| n - 1 - p).collect();
    // q in eighths: q_v = (p_v(π̄) + p_v(π̄^R)) / 2 with p in quarters
    let mut eighths = vec![0u64; n];
    for a in [ctx.assign(&pos), ctx.assign(&rev)] {
        eighths[a.first] += a.first_quarters;
        if let Some(s) = a.second {
            eighths[s] += 2;
        }
    }
    rng::categorical_units(&eighths, 8, rng).map(|v| v + 1)
}

#[derive(Debug, Clone, Copy, Default)]
pub struct Prug;

impl PartialMechanism for Prug {
    fn name(&self) -> &str {
        "prug"
    }

    fn exact_partial(&self, g: &PartialNominationGraph, cfg: &ExactConfig) -> Result<SelectionDistribution> {
        prug_exact(g, cfg)
    }

    fn sample_partial(&self, g: &PartialNominationGraph, rng: &mut dyn rand::RngCore) -> Option<usize> {
        prug_sample(g, rng)
    }
}
