//! The permutation mechanism.
//!
//! Vertices are scanned along a uniformly random permutation while a
//! candidate and its indegree from the left are maintained. A vertex takes
//! over when its indegree from the left, ignoring any edge from the current
//! candidate, is at least the stored value; the stored value then counts
//! that edge. The asymmetry is what makes the mechanism impartial.

use rand::seq::SliceRandom;
use rand::Rng;
use serde::Serialize;

use crate::distribution::SelectionDistribution;
use crate::enumerate::{factorial, fold_permutations};
use crate::error::{Error, Result};
use crate::graph::{PartialNominationGraph, Permutation};
use crate::mechanisms::{ExactConfig, PartialMechanism};

/// Candidate-update rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PermRule {
    /// The comparison ignores the current candidate's edge.
    #[default]
    Standard,
    /// Broken variant: the comparison counts the candidate's edge too.
    /// Not impartial; kept as a negative control for the checkers.
    IncludeCandidateEdge,
}

/// One step of a run: the candidate and its stored indegree after position `j`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CandidateStep {
    pub candidate: usize,
    pub d: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PermRunTrace {
    pub permutation: Permutation,
    pub steps: Vec<CandidateStep>,
    pub selected: usize,
    /// True indegree of the selected vertex.
    pub indegree: usize,
    /// Indegree from the left of every vertex (1-based order), for the max-from-left check.
    pub left_indegrees: Vec<usize>,
}

impl PermRunTrace {
    /// The selected vertex attains the maximum indegree from the left.
    pub fn selects_max_from_left(&self) -> bool {
        let max = self.left_indegrees.iter().copied().max().unwrap_or(0);
        self.left_indegrees[self.selected - 1] == max
    }
}

/// Outcome of one run on 0-based data.
#[derive(Debug, Clone, Copy)]
pub(crate) struct RunOutcome {
    pub selected: usize,
    pub d: u32,
    pub max_left: u32,
}

/// Runs the mechanism along `seq` (0-based vertices). `left` is scratch of length n.
#[inline]
pub(crate) fn run_idx(out: &[Option<usize>], seq: &[usize], left: &mut [u32], rule: PermRule) -> RunOutcome {
    left.fill(0);
    let first = seq[0];
    let mut cand = first;
    let mut d = 0u32;
    let mut max_left = 0u32;
    if let Some(t) = out[first] {
        left[t] += 1;
    }
    for &v in &seq[1..] {
        let l = left[v];
        max_left = max_left.max(l);
        let compared = match rule {
            PermRule::Standard => l - (out[cand] == Some(v)) as u32,
            PermRule::IncludeCandidateEdge => l,
        };
        if compared >= d {
            cand = v;
            d = l;
        }
        if let Some(t) = out[v] {
            left[t] += 1;
        }
    }
    RunOutcome {
        selected: cand,
        d,
        max_left,
    }
}

/// Runs the mechanism along a fixed permutation and records every step.
pub fn perm_run(g: &PartialNominationGraph, pi: &Permutation) -> Result<PermRunTrace> {
    let n = g.n();
    if pi.len() != n {
        return Err(Error::input(format!(
            "permutation of length {} for a graph on {n} vertices",
            pi.len()
        )));
    }
    let out = g.out_idx();
    let seq = pi.seq_idx();
    let mut left = vec![0usize; n];
    let mut left_at = vec![0usize; n];
    let mut cand = seq[0];
    let mut d = 0usize;
    let mut steps = vec![CandidateStep { candidate: cand + 1, d }];
    if let Some(t) = out[cand] {
        left[t] += 1;
    }
    for &v in &seq[1..] {
        left_at[v] = left[v];
        let without_candidate = left[v] - (out[cand] == Some(v)) as usize;
        if without_candidate >= d {
            cand = v;
            d = left[v];
        }
        steps.push(CandidateStep { candidate: cand + 1, d });
        if let Some(t) = out[v] {
            left[t] += 1;
        }
    }
    let indegree = g.indegrees()[cand];
    Ok(PermRunTrace {
        permutation: pi.clone(),
        steps,
        selected: cand + 1,
        indegree,
        left_indegrees: left_at,
    })
}

/// Selection counts over all `n!` permutations, plus the max-from-left audit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PermTally {
    pub counts: Vec<u64>,
    pub runs: u64,
    /// Runs whose selected vertex did not attain the maximum indegree from the left.
    pub max_left_violations: u64,
}

impl PermTally {
    fn zero(n: usize) -> Self {
        Self {
            counts: vec![0; n],
            runs: 0,
            max_left_violations: 0,
        }
    }

    fn merge(mut self, other: Self) -> Self {
        for (a, b) in self.counts.iter_mut().zip(other.counts) {
            *a += b;
        }
        self.runs += other.runs;
        self.max_left_violations += other.max_left_violations;
        self
    }

    pub fn distribution(&self) -> SelectionDistribution {
        SelectionDistribution::from_counts(&self.counts, self.runs)
    }
}

pub fn perm_tally(g: &PartialNominationGraph, cfg: &ExactConfig) -> Result<PermTally> {
    perm_tally_with_rule(g, cfg, PermRule::Standard)
}

pub fn perm_tally_with_rule(g: &PartialNominationGraph, cfg: &ExactConfig, rule: PermRule) -> Result<PermTally> {
    let n = g.n();
    if n > cfg.perm_cap {
        return Err(Error::capacity("exact permutation mechanism", n, cfg.perm_cap));
    }
    let out = g.out_idx();
    let tally = fold_permutations(
        n,
        cfg.parallel_at(n),
        || (PermTally::zero(n), vec![0u32; n]),
        |(t, left), seq| {
            let r = run_idx(out, seq, left, rule);
            t.counts[r.selected] += 1;
            t.runs += 1;
            if r.d != r.max_left {
                t.max_left_violations += 1;
            }
        },
        |(a, l), (b, _)| (a.merge(b), l),
    )
    .0;
    debug_assert_eq!(tally.runs, factorial(n));
    Ok(tally)
}

/// Exact distribution: the fraction of permutations selecting each vertex.
///
/// Fails with [`Error::Invariant`] if any run violates the max-from-left property.
pub fn perm_exact(g: &PartialNominationGraph, cfg: &ExactConfig) -> Result<SelectionDistribution> {
    let t = perm_tally(g, cfg)?;
    if t.max_left_violations > 0 {
        return Err(Error::Invariant(format!(
            "{} runs selected a vertex without maximum indegree from the left on {g}",
            t.max_left_violations
        )));
    }
    Ok(t.distribution())
}

pub fn perm_exact_with_rule(
    g: &PartialNominationGraph,
    cfg: &ExactConfig,
    rule: PermRule,
) -> Result<SelectionDistribution> {
    Ok(perm_tally_with_rule(g, cfg, rule)?.distribution())
}

/// Shuffles a uniformly random permutation and returns the run's selection (1-based).
pub fn perm_sample<R: Rng + ?Sized>(g: &PartialNominationGraph, rng: &mut R) -> usize {
    let n = g.n();
    let mut seq: Vec<usize> = (0..n).collect();
    seq.shuffle(rng);
    let mut left = vec![0u32; n];
    run_idx(g.out_idx(), &seq, &mut left, PermRule::Standard).selected + 1
}

/// The permutation mechanism as a [`PartialMechanism`].
#[derive(Debug, Clone, Copy, Default)]
pub struct Perm;

impl PartialMechanism for Perm {
    fn name(&self) -> &str {
        "perm"
    }

    fn exact_partial(&self, g: &PartialNominationGraph, cfg: &ExactConfig) -> Result<SelectionDistribution> {
        perm_exact(g, cfg)
    }

    fn sample_partial(&self, g: &PartialNominationGraph, rng: &mut dyn rand::RngCore) -> Option<usize> {
        Some(perm_sample(g, rng))
    }
}
