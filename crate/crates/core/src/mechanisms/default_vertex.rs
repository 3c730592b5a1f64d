//! Turning an inexact mechanism into a mechanism with a default vertex.
//!
//! A uniformly random vertex `v̄` loses its out-edge, the inner mechanism runs
//! on `G₋v̄`, and whatever mass it leaves unassigned goes to `v̄`.

use num_traits::{One, Signed};
use rand::{Rng, RngCore};

use crate::distribution::{fmt_rational, ratio_u, Rational, SelectionDistribution};
use crate::enumerate::factorial;
use crate::error::{Error, Result};
use crate::graph::NominationGraph;
use crate::mechanisms::prug::{prug_quarter_counts, prug_sample};
use crate::mechanisms::{ExactConfig, PartialMechanism};

pub fn dv_wrap_exact(
    inner: &dyn PartialMechanism,
    g: &NominationGraph,
    cfg: &ExactConfig,
) -> Result<SelectionDistribution> {
    let n = g.n();
    let mut acc = vec![Rational::default(); n];
    for vbar in 0..n {
        let d = inner.exact_partial(&g.remove_out_edge_idx(vbar), cfg)?;
        let deficit = d.deficit();
        if deficit.is_negative() {
            return Err(Error::Invariant(format!(
                "{} assigns total {} on {g} without the edge of {}",
                inner.name(),
                fmt_rational(&d.total()),
                vbar + 1
            )));
        }
        for (a, p) in acc.iter_mut().zip(d.probs()) {
            *a += p;
        }
        acc[vbar] += deficit;
    }
    let inv = ratio_u(1, n as u64);
    SelectionDistribution::new(acc.into_iter().map(|a| a * &inv).collect())
}

pub fn dv_wrap_sample<R: RngCore + ?Sized>(inner: &dyn PartialMechanism, g: &NominationGraph, rng: &mut R) -> usize {
    let vbar = rng.random_range(0..g.n());
    let mut r = rng;
    inner
        .sample_partial(&g.remove_out_edge_idx(vbar), &mut r)
        .unwrap_or(vbar + 1)
}

/// Integer tallies for PRUG^D with denominator `4 · n · n!`.
pub(crate) fn prugd_counts(g: &NominationGraph, cfg: &ExactConfig) -> Result<Vec<u64>> {
    let n = g.n();
    if n > cfg.prugd_cap {
        return Err(Error::capacity("exact PRUG with a default vertex", n, cfg.prugd_cap));
    }
    let full = 4 * factorial(n);
    let mut acc = vec![0u64; n];
    for vbar in 0..n {
        let counts = prug_quarter_counts(&g.remove_out_edge_idx(vbar), cfg)?;
        let total: u64 = counts.iter().sum();
        if total > full {
            return Err(Error::Invariant(format!(
                "prug assigns more than 1 on {g} without the edge of {}",
                vbar + 1
            )));
        }
        for (a, c) in acc.iter_mut().zip(&counts) {
            *a += c;
        }
        acc[vbar] += full - total;
    }
    Ok(acc)
}

pub fn prugd_exact(g: &NominationGraph, cfg: &ExactConfig) -> Result<SelectionDistribution> {
    let n = g.n();
    let counts = prugd_counts(g, cfg)?;
    let d = SelectionDistribution::from_counts(&counts, 4 * n as u64 * factorial(n));
    debug_assert!(d.total().is_one());
    Ok(d)
}

pub fn prugd_sample<R: RngCore + ?Sized>(g: &NominationGraph, rng: &mut R) -> usize {
    let vbar = rng.random_range(0..g.n());
    prug_sample(&g.remove_out_edge_idx(vbar), rng).unwrap_or(vbar + 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distribution::ratio;
    use crate::enumerate::for_each_permutation;
    use crate::graph::{PartialNominationGraph, Permutation};
    use crate::mechanisms::prug::{prug_p_vector, Prug};
    use crate::mechanisms::{perm_exact, Perm};
    use crate::{generators, rng};

    struct Nothing;

    impl PartialMechanism for Nothing {
        fn name(&self) -> &str {
            "nothing"
        }
        fn exact_partial(&self, g: &PartialNominationGraph, _: &ExactConfig) -> Result<SelectionDistribution> {
            Ok(SelectionDistribution::zeros(g.n()))
        }
        fn sample_partial(&self, _: &PartialNominationGraph, _: &mut dyn RngCore) -> Option<usize> {
            None
        }
    }

    #[test]
    fn nothing_wraps_to_uniform() {
        let g = generators::random_graph(6, 3).unwrap();
        let d = dv_wrap_exact(&Nothing, &g, &ExactConfig::default()).unwrap();
        assert_eq!(d, SelectionDistribution::uniform(6));
        let mut r = rng::seeded(1);
        let s = dv_wrap_sample(&Nothing, &g, &mut r);
        assert!((1..=6).contains(&s));
    }

    #[test]
    fn exact_inner_wraps_to_plain_average() {
        let g = generators::random_graph(5, 9).unwrap();
        let cfg = ExactConfig::default();
        let d = dv_wrap_exact(&Perm, &g, &cfg).unwrap();
        let mut acc = SelectionDistribution::zeros(5);
        for v in 1..=5 {
            acc = &acc + &perm_exact(&g.remove_out_edge(v).unwrap(), &cfg).unwrap();
        }
        assert_eq!(d, acc.scale(&ratio(1, 5)));
    }

    #[test]
    fn integer_path_matches_generic_wrap() {
        let cfg = ExactConfig::default();
        for seed in 0..20 {
            let g = generators::random_graph(5, seed).unwrap();
            assert_eq!(prugd_exact(&g, &cfg).unwrap(), dv_wrap_exact(&Prug, &g, &cfg).unwrap());
        }
    }

    #[test]
    fn star_matches_pairwise_oracle() {
        // (2,1), (3,1), (4,1), (1,2): 4 defaults × 24 permutations
        let g = NominationGraph::new(vec![2, 1, 1, 1]).unwrap();
        let mut acc = vec![Rational::default(); 4];
        for vbar in 1..=4 {
            let p = g.remove_out_edge(vbar).unwrap();
            for_each_permutation(4, |seq| {
                let pi = Permutation::new(seq.iter().map(|v| v + 1).collect()).unwrap();
                let v = prug_p_vector(&p, &pi).unwrap();
                for (a, q) in acc.iter_mut().zip(v.probs()) {
                    *a += q;
                }
                acc[vbar - 1] += Rational::one() - v.total();
            });
        }
        let expected: Vec<Rational> = acc.into_iter().map(|a| a / ratio(96, 1)).collect();
        let d = prugd_exact(&g, &ExactConfig::default()).unwrap();
        assert_eq!(d.probs(), expected.as_slice());
        assert!(d.is_exact());
        assert!(d.prob(1) >= &ratio(3, 4));
    }

    #[test]
    fn cap_is_enforced() {
        let g = generators::cycle(9).unwrap();
        assert!(matches!(
            prugd_exact(&g, &ExactConfig::default()),
            Err(Error::Capacity { .. })
        ));
    }
}
