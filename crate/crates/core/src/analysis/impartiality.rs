//! Impartiality: a vertex's own nomination never changes its own selection probability.

use rayon::prelude::*;
use serde::Serialize;

use crate::analysis::serialize_display;
use crate::analysis::sweep::{check_sweep_cap, evaluate, space_distributions, RunStats};
use crate::distribution::{serialize_rational, Rational, SelectionDistribution};
use crate::error::Result;
use crate::generators::random_graph_with;
use crate::graph::NominationGraph;
use crate::mechanisms::{ExactConfig, MechanismId};
use crate::rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum CheckMode {
    /// Every graph in `𝒢ₙ` and every deviation.
    Exhaustive,
    /// `graphs` uniform random graphs and all their deviations.
    Sampled { graphs: u64, seed: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ImpartialityViolation {
    #[serde(serialize_with = "serialize_display")]
    pub graph: NominationGraph,
    pub vertex: usize,
    pub new_target: usize,
    #[serde(serialize_with = "serialize_rational")]
    pub before: Rational,
    #[serde(serialize_with = "serialize_rational")]
    pub after: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ImpartialityReport {
    pub mechanism: String,
    pub n: usize,
    pub mode: CheckMode,
    pub graphs: u64,
    pub deviations: u64,
    pub counterexample: Option<ImpartialityViolation>,
    pub runs: RunStats,
}

impl ImpartialityReport {
    pub fn passed(&self) -> bool {
        self.counterexample.is_none()
    }
}

pub fn check_impartial(id: MechanismId, n: usize, mode: CheckMode, cfg: &ExactConfig) -> Result<ImpartialityReport> {
    check_impartial_with(id.name(), n, mode, cfg, |g, c| evaluate(id, g, c))
}

/// Impartiality check for an arbitrary exact evaluator.
pub fn check_impartial_with<F>(
    name: &str,
    n: usize,
    mode: CheckMode,
    cfg: &ExactConfig,
    eval: F,
) -> Result<ImpartialityReport>
where
    F: Fn(&NominationGraph, &ExactConfig) -> Result<(SelectionDistribution, RunStats)> + Sync,
{
    let (graphs, deviations, counterexample, runs) = match mode {
        CheckMode::Exhaustive => exhaustive(n, cfg, &eval)?,
        CheckMode::Sampled { graphs, seed } => sampled(n, graphs, seed, cfg, &eval)?,
    };
    Ok(ImpartialityReport {
        mechanism: name.to_string(),
        n,
        mode,
        graphs,
        deviations,
        counterexample,
        runs,
    })
}

type Outcome = (u64, u64, Option<ImpartialityViolation>, RunStats);

fn exhaustive<F>(n: usize, cfg: &ExactConfig, eval: &F) -> Result<Outcome>
where
    F: Fn(&NominationGraph, &ExactConfig) -> Result<(SelectionDistribution, RunStats)> + Sync,
{
    let space = check_sweep_cap("exhaustive impartiality check (try sampled mode)", n, cfg)?;
    let (dists, runs) = space_distributions(n, cfg, eval)?;
    let found = (0..space.len())
        .into_par_iter()
        .map(|code| {
            let g = space.graph(code);
            let out = g.out_idx();
            let mut checked = 0u64;
            for v in 0..n {
                for t in (0..n).filter(|&t| t != v && t != out[v]) {
                    checked += 1;
                    let dev = space.deviate(code, v, t);
                    let (a, b) = (&dists[code as usize].probs()[v], &dists[dev as usize].probs()[v]);
                    if a != b {
                        return (checked, Some((code, v, t)));
                    }
                }
            }
            (checked, None)
        })
        .collect::<Vec<_>>();
    let deviations = found.iter().map(|(c, _)| c).sum();
    let counterexample = found.into_iter().find_map(|(_, f)| f).map(|(code, v, t)| {
        let dev = space.deviate(code, v, t);
        ImpartialityViolation {
            graph: space.graph(code),
            vertex: v + 1,
            new_target: t + 1,
            before: dists[code as usize].probs()[v].clone(),
            after: dists[dev as usize].probs()[v].clone(),
        }
    });
    Ok((space.len(), deviations, counterexample, runs))
}

fn sampled<F>(n: usize, graphs: u64, seed: u64, cfg: &ExactConfig, eval: &F) -> Result<Outcome>
where
    F: Fn(&NominationGraph, &ExactConfig) -> Result<(SelectionDistribution, RunStats)> + Sync,
{
    let inner = cfg.sequential();
    let per_graph = (0..graphs)
        .into_par_iter()
        .map(|k| -> Result<(u64, Option<ImpartialityViolation>, RunStats)> {
            let g = random_graph_with(n, &mut rng::stream(seed, k))?;
            let (base, mut runs) = eval(&g, &inner)?;
            let mut checked = 0;
            for v in 1..=n {
                let own = g.target(v)?;
                for t in (1..=n).filter(|&t| t != v && t != own) {
                    checked += 1;
                    let (d, r) = eval(&g.with_target(v, t)?, &inner)?;
                    runs = runs.merge(r);
                    if d.prob(v) != base.prob(v) {
                        let violation = ImpartialityViolation {
                            graph: g.clone(),
                            vertex: v,
                            new_target: t,
                            before: base.prob(v).clone(),
                            after: d.prob(v).clone(),
                        };
                        return Ok((checked, Some(violation), runs));
                    }
                }
            }
            Ok((checked, None, runs))
        })
        .collect::<Result<Vec<_>>>()?;
    let deviations = per_graph.iter().map(|(c, _, _)| c).sum();
    let runs = per_graph.iter().fold(RunStats::default(), |a, (_, _, r)| a.merge(*r));
    let counterexample = per_graph.into_iter().find_map(|(_, v, _)| v);
    Ok((graphs, deviations, counterexample, runs))
}
