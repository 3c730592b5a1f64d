//! Mixture of the permutation mechanism and PRUG^D, with random dictatorship for small `n`.

use rand::RngCore;

use crate::distribution::{ratio, Rational, SelectionDistribution};
use crate::error::Result;
use crate::graph::NominationGraph;
use crate::mechanisms::default_vertex::{prugd_exact, prugd_sample};
use crate::mechanisms::perm::{perm_exact, perm_sample};
use crate::mechanisms::rd::{rd_exact, rd_sample};
use crate::mechanisms::ExactConfig;
use crate::rng;

pub const MIX_PERM_WEIGHT: (u64, u64) = (825, 1049);
pub const MIX_PRUGD_WEIGHT: (u64, u64) = (224, 1049);

/// Graphs with at most this many vertices go to random dictatorship.
pub const MIX_RD_MAX_N: usize = 5;

pub fn mix_weights() -> (Rational, Rational) {
    (
        ratio(MIX_PERM_WEIGHT.0 as i64, MIX_PERM_WEIGHT.1 as i64),
        ratio(MIX_PRUGD_WEIGHT.0 as i64, MIX_PRUGD_WEIGHT.1 as i64),
    )
}

pub fn mix_exact(g: &NominationGraph, cfg: &ExactConfig) -> Result<SelectionDistribution> {
    if g.n() <= MIX_RD_MAX_N {
        return Ok(rd_exact(g));
    }
    let (wp, wd) = mix_weights();
    let p = perm_exact(&g.as_partial(), cfg)?;
    let d = prugd_exact(g, cfg)?;
    Ok(&(&p * &wp) + &(&d * &wd))
}

pub fn mix_sample<R: RngCore + ?Sized>(g: &NominationGraph, rng: &mut R) -> usize {
    if g.n() <= MIX_RD_MAX_N {
        return rd_sample(g, rng);
    }
    if rng::bernoulli(MIX_PERM_WEIGHT.0, MIX_PERM_WEIGHT.1, rng) {
        perm_sample(&g.as_partial(), rng)
    } else {
        prugd_sample(g, rng)
    }
}
