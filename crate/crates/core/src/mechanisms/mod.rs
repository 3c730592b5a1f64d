//! Selection mechanisms: exact rational evaluators and seeded samplers.

pub mod default_vertex;
pub mod mix;
pub mod perm;
pub mod prug;
pub mod rd;

use std::fmt;
use std::str::FromStr;

use rand::RngCore;
use serde::{Deserialize, Serialize};

use crate::distribution::SelectionDistribution;
use crate::error::{Error, Result};
use crate::graph::{NominationGraph, PartialNominationGraph};

pub use default_vertex::{dv_wrap_exact, dv_wrap_sample, prugd_exact, prugd_sample};
pub use mix::{mix_exact, mix_sample, MIX_PERM_WEIGHT, MIX_PRUGD_WEIGHT};
pub use perm::{perm_exact, perm_run, perm_sample, perm_tally, Perm, PermRule, PermRunTrace, PermTally};
pub use prug::{prug_exact, prug_p_vector, prug_sample, Prug, PrugVector};
pub use rd::{rd_exact, rd_sample};

/// Limits and parallelism for exact evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ExactConfig {
    pub perm_cap: usize,
    pub prug_cap: usize,
    pub prugd_cap: usize,
    /// Largest `n` for relabel-averaging, which costs `n!` evaluations.
    pub symmetrize_cap: usize,
    /// Largest `n` for sweeps over all of `𝒢ₙ`, which has `(n-1)^n` members.
    pub sweep_cap: usize,
    /// Split permutation enumeration across threads for `n ≥ 8`.
    pub parallel: bool,
}

impl Default for ExactConfig {
    fn default() -> Self {
        Self {
            perm_cap: 10,
            prug_cap: 10,
            prugd_cap: 8,
            symmetrize_cap: 6,
            sweep_cap: 6,
            parallel: true,
        }
    }
}

impl ExactConfig {
    /// Same caps, single-threaded per graph. Used when parallelism is spent over graphs.
    pub fn sequential(self) -> Self {
        Self {
            parallel: false,
            ..self
        }
    }

    /// Applies one cap to every exact evaluator.
    pub fn with_cap(self, cap: usize) -> Self {
        Self {
            perm_cap: cap,
            prug_cap: cap,
            prugd_cap: cap,
            ..self
        }
    }

    pub(crate) fn parallel_at(&self, n: usize) -> bool {
        self.parallel && n >= 8
    }
}

/// A mechanism defined on graphs where some vertices may lack an out-edge.
/// Inexact mechanisms return totals below 1 and `None` from the sampler.
pub trait PartialMechanism: Sync {
    fn name(&self) -> &str;

    fn exact_partial(&self, g: &PartialNominationGraph, cfg: &ExactConfig) -> Result<SelectionDistribution>;

    fn sample_partial(&self, g: &PartialNominationGraph, rng: &mut dyn RngCore) -> Option<usize>;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MechanismId {
    Perm,
    Rd,
    Prug,
    #[serde(rename = "prugd")]
    PrugD,
    Mix,
}

impl MechanismId {
    pub const ALL: [MechanismId; 5] = [
        MechanismId::Perm,
        MechanismId::Rd,
        MechanismId::Prug,
        MechanismId::PrugD,
        MechanismId::Mix,
    ];

    pub fn name(self) -> &'static str {
        match self {
            MechanismId::Perm => "perm",
            MechanismId::Rd => "rd",
            MechanismId::Prug => "prug",
            MechanismId::PrugD => "prugd",
            MechanismId::Mix => "mix",
        }
    }

    /// Probabilities always sum to 1.
    pub fn is_exact(self) -> bool {
        self != MechanismId::Prug
    }

    pub fn accepts_partial(self) -> bool {
        matches!(self, MechanismId::Perm | MechanismId::Prug)
    }

    /// Invariant under relabeling of the vertices. The position tie-breaking in
    /// PRUG breaks symmetry, and MIX inherits it for `n ≥ 6`.
    pub fn symmetric(self) -> bool {
        matches!(self, MechanismId::Perm | MechanismId::Rd)
    }
}

impl fmt::Display for MechanismId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for MechanismId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "perm" => Ok(MechanismId::Perm),
            "rd" => Ok(MechanismId::Rd),
            "prug" => Ok(MechanismId::Prug),
            "prugd" | "prug_d" | "prug^d" => Ok(MechanismId::PrugD),
            "mix" => Ok(MechanismId::Mix),
            other => Err(Error::input(format!(
                "unknown mechanism `{other}` (expected perm|rd|prug|prugd|mix)"
            ))),
        }
    }
}

pub fn exact(id: MechanismId, g: &NominationGraph, cfg: &ExactConfig) -> Result<SelectionDistribution> {
    match id {
        MechanismId::Perm => perm_exact(&g.as_partial(), cfg),
        MechanismId::Rd => Ok(rd_exact(g)),
        MechanismId::Prug => prug_exact(&g.as_partial(), cfg),
        MechanismId::PrugD => prugd_exact(g, cfg),
        MechanismId::Mix => mix_exact(g, cfg),
    }
}

pub fn exact_partial(id: MechanismId, g: &PartialNominationGraph, cfg: &ExactConfig) -> Result<SelectionDistribution> {
    match id {
        MechanismId::Perm => perm_exact(g, cfg),
        MechanismId::Prug => prug_exact(g, cfg),
        _ => match g.to_total() {
            Some(t) => exact(id, &t, cfg),
            None => Err(Error::input(format!(
                "{id} is only defined on graphs where every vertex nominates"
            ))),
        },
    }
}

/// One draw; `None` only for the inexact PRUG.
pub fn sample<R: RngCore + ?Sized>(id: MechanismId, g: &NominationGraph, rng: &mut R) -> Option<usize> {
    match id {
        MechanismId::Perm => Some(perm_sample(&g.as_partial(), rng)),
        MechanismId::Rd => Some(rd_sample(g, rng)),
        MechanismId::Prug => prug_sample(&g.as_partial(), rng),
        MechanismId::PrugD => Some(prugd_sample(g, rng)),
        MechanismId::Mix => Some(mix_sample(g, rng)),
    }
}
