//! Ratios of the permutation mechanism on the lower-bound family as it grows.

use serde::Serialize;

use crate::analysis::bounds::perm_alpha;
use crate::analysis::montecarlo::{estimate_ratio, Estimate};
use crate::analysis::ratio::ratio;
use crate::distribution::{serialize_rational, Rational};
use crate::error::Result;
use crate::generators::lower_bound_family;
use crate::mechanisms::{ExactConfig, MechanismId};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TightnessRow {
    pub nprime: usize,
    pub n: usize,
    #[serde(serialize_with = "serialize_opt_rational")]
    pub exact: Option<Rational>,
    pub estimate: Option<Estimate>,
}

fn serialize_opt_rational<S: serde::Serializer>(r: &Option<Rational>, s: S) -> Result<S::Ok, S::Error> {
    match r {
        Some(r) => serialize_rational(r, s),
        None => s.serialize_none(),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TightnessReport {
    pub delta: usize,
    #[serde(serialize_with = "serialize_rational")]
    pub alpha: Rational,
    pub rows: Vec<TightnessRow>,
    /// Exact rows decrease strictly with `n'`.
    pub exact_decreasing: bool,
    /// Every exact row lies strictly above the guarantee.
    pub exact_above_alpha: bool,
}

/// Exact rows while the family fits under the permutation cap, sampled rows
/// (`samples` draws, stream seeded with `seed`) beyond it.
pub fn tightness_scan(
    delta: usize,
    nprimes: impl IntoIterator<Item = usize>,
    samples: u64,
    seed: u64,
    cfg: &ExactConfig,
) -> Result<TightnessReport> {
    let alpha = perm_alpha(delta)?;
    let mut rows = Vec::new();
    for nprime in nprimes {
        let g = lower_bound_family(delta, nprime)?;
        let n = g.n();
        let row = if n <= cfg.perm_cap {
            TightnessRow {
                nprime,
                n,
                exact: Some(ratio(MechanismId::Perm, &g, cfg)?.ratio),
                estimate: None,
            }
        } else {
            TightnessRow {
                nprime,
                n,
                exact: None,
                estimate: Some(estimate_ratio(MechanismId::Perm, &g, samples, seed)?),
            }
        };
        rows.push(row);
    }
    let exact: Vec<&Rational> = rows.iter().filter_map(|r| r.exact.as_ref()).collect();
    Ok(TightnessReport {
        delta,
        exact_decreasing: exact.windows(2).all(|w| w[1] < w[0]),
        exact_above_alpha: exact.iter().all(|r| **r > alpha),
        alpha,
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distribution::ratio as q;

    #[test]
    fn small_exact_trend() {
        let r = tightness_scan(2, 1..=2, 0, 0, &ExactConfig::default()).unwrap();
        assert!(r.exact_decreasing && r.exact_above_alpha);
        assert_eq!(r.alpha, q(2, 3));
        assert_eq!(r.rows.len(), 2);
    }
}
