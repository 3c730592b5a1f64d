//! Performance ratio: expected indegree of the selected vertex over the maximum indegree.

use serde::Serialize;

use crate::analysis::serialize_display;
use crate::distribution::{from_int, serialize_rational, Rational, SelectionDistribution};
use crate::error::{Error, Result};
use crate::graph::NominationGraph;
use crate::mechanisms::{self, ExactConfig, MechanismId};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RatioReport {
    #[serde(serialize_with = "serialize_display")]
    pub graph: NominationGraph,
    pub mechanism: MechanismId,
    pub distribution: SelectionDistribution,
    #[serde(serialize_with = "serialize_rational")]
    pub expectation: Rational,
    pub delta: usize,
    #[serde(serialize_with = "serialize_rational")]
    pub ratio: Rational,
}

/// `(E[δ⁻(selected)], E[δ⁻(selected)] / Δ)` for a distribution on `g`.
pub fn ratio_of(g: &NominationGraph, d: &SelectionDistribution) -> Result<(Rational, Rational)> {
    if d.n() != g.n() {
        return Err(Error::input(format!(
            "distribution over {} vertices for a graph on {}",
            d.n(),
            g.n()
        )));
    }
    let e = d.expectation(&g.indegrees());
    let r = &e / from_int(g.max_indegree() as i64);
    Ok((e, r))
}

pub fn ratio(id: MechanismId, g: &NominationGraph, cfg: &ExactConfig) -> Result<RatioReport> {
    let distribution = mechanisms::exact(id, g, cfg)?;
    let (expectation, ratio) = ratio_of(g, &distribution)?;
    Ok(RatioReport {
        graph: g.clone(),
        mechanism: id,
        distribution,
        expectation,
        delta: g.max_indegree(),
        ratio,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distribution::ratio as q;
    use crate::generators;

    #[test]
    fn regular_graphs_have_ratio_one() {
        let cfg = ExactConfig::default();
        for id in MechanismId::ALL {
            if id == MechanismId::Prug {
                continue;
            }
            let r = ratio(id, &generators::cycle(5).unwrap(), &cfg).unwrap();
            assert_eq!(r.ratio, q(1, 1), "{id}");
        }
    }

    #[test]
    fn expectation_is_weighted_indegree() {
        let g = generators::ub_family(7, 0).unwrap();
        let r = ratio(MechanismId::Rd, &g, &ExactConfig::default()).unwrap();
        // RD picks v with probability δ⁻(v)/7, so E = Σ δ⁻(v)² / 7
        assert_eq!(r.expectation, q(9, 7));
        assert_eq!(r.ratio, q(9, 14));
        assert_eq!(r.delta, 2);
    }

    #[test]
    fn perm_on_prime_family_respects_the_x_bound() {
        let cfg = ExactConfig::default();
        let g = generators::ub_family(7, 1).unwrap();
        let gp = generators::ub_family_prime(7, 1).unwrap();
        let x = mechanisms::exact(MechanismId::Perm, &g, &cfg).unwrap().prob(2).clone();
        let r = ratio(MechanismId::Perm, &gp, &cfg).unwrap();
        assert_eq!(r.distribution.prob(2), &x);
        assert!(r.ratio <= (x + q(1, 1)) / q(2, 1));
    }
}
