//! Symmetry under relabeling, and relabel-averaging.
//!
//! A relabeling `π` maps each edge `(u, v)` to `(π_u, π_v)`. A mechanism `f` is
//! symmetric when `f_{π_v}(G_π) = f_v(G)` for all `G`, `π` and `v`.

use rayon::prelude::*;
use serde::Serialize;

use crate::analysis::serialize_display;
use crate::analysis::sweep::{check_sweep_cap, evaluate, space_distributions};
use crate::distribution::{ratio_u, serialize_rational, Rational, SelectionDistribution};
use crate::enumerate::{factorial, for_each_permutation};
use crate::error::{Error, Result};
use crate::graph::{NominationGraph, Permutation};
use crate::mechanisms::{self, ExactConfig, MechanismId};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SymmetryViolation {
    #[serde(serialize_with = "serialize_display")]
    pub graph: NominationGraph,
    #[serde(serialize_with = "serialize_display")]
    pub relabeling: Permutation,
    #[serde(serialize_with = "serialize_display")]
    pub relabeled: NominationGraph,
    pub vertex: usize,
    /// `f_v(G)`.
    #[serde(serialize_with = "serialize_rational")]
    pub original: Rational,
    /// `f_{π_v}(G_π)`.
    #[serde(serialize_with = "serialize_rational")]
    pub image: Rational,
}

impl std::fmt::Display for SymmetryViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "relabeling {} maps {} to {}; vertex {} has probability {} before and {} after",
            self.relabeling,
            self.graph,
            self.relabeled,
            self.vertex,
            crate::distribution::fmt_rational(&self.original),
            crate::distribution::fmt_rational(&self.image),
        )
    }
}

fn first_mismatch(
    g: &NominationGraph,
    pi: &Permutation,
    relabeled: &NominationGraph,
    d: &SelectionDistribution,
    dp: &SelectionDistribution,
) -> Option<SymmetryViolation> {
    let seq = pi.seq_idx();
    (0..g.n())
        .find(|&v| d.probs()[v] != dp.probs()[seq[v]])
        .map(|v| SymmetryViolation {
            graph: g.clone(),
            relabeling: pi.clone(),
            relabeled: relabeled.clone(),
            vertex: v + 1,
            original: d.probs()[v].clone(),
            image: dp.probs()[seq[v]].clone(),
        })
}

/// Tries every relabeling of `g`; returns the first that changes a probability.
pub fn symmetry_witness<F>(g: &NominationGraph, cfg: &ExactConfig, eval: F) -> Result<Option<SymmetryViolation>>
where
    F: Fn(&NominationGraph, &ExactConfig) -> Result<SelectionDistribution> + Sync,
{
    let n = g.n();
    if n > cfg.symmetrize_cap {
        return Err(Error::capacity("relabeling enumeration", n, cfg.symmetrize_cap));
    }
    let d = eval(g, cfg)?;
    let mut perms = Vec::with_capacity(factorial(n) as usize);
    for_each_permutation(n, |s| perms.push(Permutation::from_idx_unchecked(s.to_vec())));
    let inner = cfg.sequential();
    let found = perms
        .par_iter()
        .map(|pi| -> Result<Option<SymmetryViolation>> {
            let gp = g.relabel(pi)?;
            let dp = eval(&gp, &inner)?;
            Ok(first_mismatch(g, pi, &gp, &d, &dp))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(found.into_iter().flatten().next())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SymmetryReport {
    pub mechanism: MechanismId,
    pub n: usize,
    pub graphs: u64,
    pub relabelings: u64,
    pub counterexample: Option<SymmetryViolation>,
}

impl SymmetryReport {
    pub fn passed(&self) -> bool {
        self.counterexample.is_none()
    }
}

/// Checks symmetry on every graph of `𝒢ₙ` under every relabeling.
pub fn check_symmetric(id: MechanismId, n: usize, cfg: &ExactConfig) -> Result<SymmetryReport> {
    let space = check_sweep_cap("exhaustive symmetry check", n, cfg)?;
    if n > cfg.symmetrize_cap {
        return Err(Error::capacity("relabeling enumeration", n, cfg.symmetrize_cap));
    }
    let (dists, _) = space_distributions(n, cfg, |g, c| evaluate(id, g, c))?;
    let mut perms = Vec::with_capacity(factorial(n) as usize);
    for_each_permutation(n, |s| perms.push(Permutation::from_idx_unchecked(s.to_vec())));
    let counterexample = (0..space.len()).into_par_iter().find_map_first(|code| {
        let g = space.graph(code);
        perms.iter().find_map(|pi| {
            let gp = g.relabel(pi).expect("same length");
            let dp = &dists[space.code(&gp) as usize];
            first_mismatch(&g, pi, &gp, &dists[code as usize], dp)
        })
    });
    Ok(SymmetryReport {
        mechanism: id,
        n,
        graphs: space.len(),
        relabelings: perms.len() as u64,
        counterexample,
    })
}

/// `(f_s(G))_v = (1/n!) Σ_π f_{π_v}(G_π)`.
pub fn symmetrize(id: MechanismId, g: &NominationGraph, cfg: &ExactConfig) -> Result<SelectionDistribution> {
    let n = g.n();
    if n > cfg.symmetrize_cap {
        return Err(Error::capacity("symmetrization", n, cfg.symmetrize_cap));
    }
    let mut perms = Vec::with_capacity(factorial(n) as usize);
    for_each_permutation(n, |s| perms.push(Permutation::from_idx_unchecked(s.to_vec())));
    let inner = cfg.sequential();
    let parts = perms
        .par_iter()
        .map(|pi| -> Result<Vec<Rational>> {
            let dp = mechanisms::exact(id, &g.relabel(pi)?, &inner)?;
            Ok(pi.seq_idx().iter().map(|&img| dp.probs()[img].clone()).collect())
        })
        .collect::<Result<Vec<_>>>()?;
    let mut acc = vec![Rational::default(); n];
    for p in parts {
        for (a, x) in acc.iter_mut().zip(p) {
            *a += x;
        }
    }
    let inv = ratio_u(1, factorial(n));
    SelectionDistribution::new(acc.into_iter().map(|a| a * &inv).collect())
}
