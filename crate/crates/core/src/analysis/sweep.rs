//! Exhaustive sweeps over `𝒢ₙ`: worst-case ratios and per-graph guarantee checks.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::analysis::bounds::{
    mix_alpha_table, perm_alpha, perm_alpha_multi_high, prugd_alpha, prugd_alpha_special, rd_alpha, HighVertices,
};
use crate::analysis::ratio::ratio_of;
use crate::analysis::serialize_display;
use crate::distribution::{ratio, serialize_rational, Rational, SelectionDistribution};
use crate::enumerate::GraphSpace;
use crate::error::{Error, Result};
use crate::graph::NominationGraph;
use crate::mechanisms::mix::{mix_weights, MIX_RD_MAX_N};
use crate::mechanisms::perm::perm_tally;
use crate::mechanisms::{self, prugd_exact, ExactConfig, MechanismId};

/// Permutation-mechanism runs performed during an evaluation, and how many of
/// them selected a vertex without the maximum indegree from the left.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct RunStats {
    pub perm_runs: u64,
    pub max_left_violations: u64,
}

impl RunStats {
    pub fn merge(self, other: RunStats) -> RunStats {
        RunStats {
            perm_runs: self.perm_runs + other.perm_runs,
            max_left_violations: self.max_left_violations + other.max_left_violations,
        }
    }
}

/// Exact distribution of `id` on `g`, recording the permutation runs it took.
pub fn evaluate(id: MechanismId, g: &NominationGraph, cfg: &ExactConfig) -> Result<(SelectionDistribution, RunStats)> {
    let perm = |stats: &mut RunStats| -> Result<SelectionDistribution> {
        let t = perm_tally(&g.as_partial(), cfg)?;
        stats.perm_runs += t.runs;
        stats.max_left_violations += t.max_left_violations;
        Ok(t.distribution())
    };
    let mut stats = RunStats::default();
    let d = match id {
        MechanismId::Perm => perm(&mut stats)?,
        MechanismId::Mix if g.n() > MIX_RD_MAX_N => {
            let (wp, wd) = mix_weights();
            let p = perm(&mut stats)?;
            let q = prugd_exact(g, cfg)?;
            &(&p * &wp) + &(&q * &wd)
        }
        other => mechanisms::exact(other, g, cfg)?,
    };
    Ok((d, stats))
}

pub(crate) fn check_sweep_cap(what: &str, n: usize, cfg: &ExactConfig) -> Result<GraphSpace> {
    if n < 2 {
        return Err(Error::input(format!("{what} needs n >= 2")));
    }
    if n > cfg.sweep_cap {
        return Err(Error::capacity(what, n, cfg.sweep_cap));
    }
    Ok(GraphSpace::new(n))
}

/// Distributions for every member of `𝒢ₙ`, indexed by [`GraphSpace`] code.
/// Graphs are spread over threads; each graph is evaluated sequentially.
pub fn space_distributions<F>(n: usize, cfg: &ExactConfig, eval: F) -> Result<(Vec<SelectionDistribution>, RunStats)>
where
    F: Fn(&NominationGraph, &ExactConfig) -> Result<(SelectionDistribution, RunStats)> + Sync,
{
    let space = check_sweep_cap("exhaustive sweep", n, cfg)?;
    let inner = cfg.sequential();
    let results: Vec<(SelectionDistribution, RunStats)> = (0..space.len())
        .into_par_iter()
        .map(|code| eval(&space.graph(code), &inner))
        .collect::<Result<_>>()?;
    let stats = results.iter().fold(RunStats::default(), |a, (_, s)| a.merge(*s));
    Ok((results.into_iter().map(|(d, _)| d).collect(), stats))
}

/// Number of vertices with indegree at least 2.
pub fn high_vertices(g: &NominationGraph) -> usize {
    g.count_indegree_at_least(2)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Witness {
    #[serde(serialize_with = "serialize_display")]
    pub graph: NominationGraph,
    pub delta: usize,
    pub high_vertices: usize,
    #[serde(serialize_with = "serialize_rational")]
    pub ratio: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DeltaSummary {
    pub graphs: u64,
    pub min: Witness,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SweepReport {
    pub mechanism: MechanismId,
    pub n: usize,
    pub graphs: u64,
    pub min: Witness,
    /// Minimum per maximum indegree.
    pub per_delta: BTreeMap<usize, DeltaSummary>,
    pub runs: RunStats,
}

/// Ratio of every graph in `𝒢ₙ`, in code order.
fn space_ratios(id: MechanismId, n: usize, cfg: &ExactConfig) -> Result<(Vec<Witness>, RunStats)> {
    let space = check_sweep_cap("worst-case search", n, cfg)?;
    let (dists, runs) = space_distributions(n, cfg, |g, c| evaluate(id, g, c))?;
    let witnesses = dists
        .par_iter()
        .enumerate()
        .map(|(code, d)| {
            let g = space.graph(code as u64);
            let (_, r) = ratio_of(&g, d)?;
            Ok(Witness {
                delta: g.max_indegree(),
                high_vertices: high_vertices(&g),
                graph: g,
                ratio: r,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((witnesses, runs))
}

fn summarize(id: MechanismId, n: usize, ws: &[Witness], runs: RunStats) -> SweepReport {
    let mut per_delta: BTreeMap<usize, DeltaSummary> = BTreeMap::new();
    for w in ws {
        per_delta
            .entry(w.delta)
            .and_modify(|s| {
                s.graphs += 1;
                if w.ratio < s.min.ratio {
                    s.min = w.clone();
                }
            })
            .or_insert_with(|| DeltaSummary {
                graphs: 1,
                min: w.clone(),
            });
    }
    let min = ws
        .iter()
        .fold(None::<&Witness>, |best, w| match best {
            Some(b) if b.ratio <= w.ratio => Some(b),
            _ => Some(w),
        })
        .expect("𝒢ₙ is non-empty")
        .clone();
    SweepReport {
        mechanism: id,
        n,
        graphs: ws.len() as u64,
        min,
        per_delta,
        runs,
    }
}

/// Exact minimum ratio over `𝒢ₙ` with a witness (the first in code order).
pub fn worst_case(id: MechanismId, n: usize, cfg: &ExactConfig) -> Result<SweepReport> {
    let (ws, runs) = space_ratios(id, n, cfg)?;
    Ok(summarize(id, n, &ws, runs))
}

/// The guarantee `id` claims on `n`-vertex graphs with maximum indegree `delta`
/// and `high` vertices of indegree at least 2, with the name of its source.
pub fn guarantee(id: MechanismId, n: usize, delta: usize, high: usize) -> Result<Option<(Rational, &'static str)>> {
    if delta == 1 && id.is_exact() {
        return Ok(Some((ratio(1, 1), "regular")));
    }
    Ok(match id {
        MechanismId::Perm => Some((perm_alpha(delta)?, "perm_alpha")),
        MechanismId::Rd if n <= 5 => Some((rd_alpha(n)?, "rd_alpha")),
        MechanismId::Rd | MechanismId::Prug => None,
        MechanismId::PrugD if n < 6 => None,
        MechanismId::PrugD => {
            let sp = prugd_alpha_special();
            match (delta, high) {
                (2, _) => Some((sp.delta2, "prugd_delta2")),
                (3, 1) => Some((sp.delta3_single_high, "prugd_delta3_single")),
                (d, _) => Some((prugd_alpha(d)?, "prugd_alpha")),
            }
        }
        MechanismId::Mix if n <= MIX_RD_MAX_N => Some((rd_alpha(n)?, "rd_alpha")),
        MechanismId::Mix => {
            let case = match (delta, high) {
                (3, 1) => HighVertices::Single,
                (3, _) => HighVertices::Multiple,
                _ => HighVertices::Any,
            };
            let rows = mix_alpha_table(delta.max(2))?;
            let row = rows
                .into_iter()
                .find(|r| r.delta == delta && r.case == case)
                .expect("table covers every delta >= 2");
            Some((row.mix, "mix_table"))
        }
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundViolation {
    pub witness: Witness,
    #[serde(serialize_with = "serialize_rational")]
    pub bound: Rational,
    pub rule: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundsReport {
    pub sweep: SweepReport,
    /// Graphs compared against a guarantee, per rule.
    pub checked: BTreeMap<String, u64>,
    pub violations: Vec<BoundViolation>,
}

impl BoundsReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty() && self.sweep.runs.max_left_violations == 0
    }

    pub fn checked_under(&self, rule: &str) -> u64 {
        self.checked.get(rule).copied().unwrap_or(0)
    }
}

/// Compares every graph in `𝒢ₙ` with the guarantee that applies to it. For the
/// permutation mechanism it also checks that every graph with ratio below
/// 31/45 has `Δ ∈ {2, 3}` and a single vertex of indegree at least 2.
pub fn check_bounds(id: MechanismId, n: usize, cfg: &ExactConfig) -> Result<BoundsReport> {
    if id == MechanismId::Prug {
        return Err(Error::Precondition("prug is inexact and carries no guarantee".into()));
    }
    let (ws, runs) = space_ratios(id, n, cfg)?;
    let mut checked: BTreeMap<String, u64> = BTreeMap::new();
    let mut violations = Vec::new();
    for w in &ws {
        if let Some((bound, rule)) = guarantee(id, n, w.delta, w.high_vertices)? {
            *checked.entry(rule.to_string()).or_default() += 1;
            if w.ratio < bound {
                violations.push(BoundViolation {
                    witness: w.clone(),
                    bound,
                    rule: rule.to_string(),
                });
            }
        }
        if id == MechanismId::Perm {
            *checked.entry("perm_tight_instances".into()).or_default() += 1;
            let low = w.ratio < perm_alpha_multi_high();
            if low && !(matches!(w.delta, 2 | 3) && w.high_vertices == 1) {
                violations.push(BoundViolation {
                    witness: w.clone(),
                    bound: perm_alpha_multi_high(),
                    rule: "perm_tight_instances".into(),
                });
            }
        }
    }
    Ok(BoundsReport {
        sweep: summarize(id, n, &ws, runs),
        checked,
        violations,
    })
}
