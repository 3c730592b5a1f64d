//! Seeded Monte Carlo estimates with normal-approximation intervals.
//!
//! Draws are split into chunks of [`CHUNK`]; chunk `k` uses stream `k` of the
//! seed, and chunk results are integer sums, so output does not depend on
//! thread scheduling.

use rayon::prelude::*;
use serde::Serialize;

use crate::distribution::{to_f64, SelectionDistribution};
use crate::error::{Error, Result};
use crate::graph::NominationGraph;
use crate::mechanisms::{self, MechanismId};
use crate::rng;

pub const CHUNK: u64 = 10_000;

/// Width of the reported intervals in standard errors.
pub const SIGMAS: f64 = 3.0;

fn chunks(samples: u64) -> impl ParallelIterator<Item = (u64, u64)> {
    let count = samples.div_ceil(CHUNK);
    (0..count)
        .into_par_iter()
        .map(move |k| (k, CHUNK.min(samples - k * CHUNK)))
}

/// Selection counts per vertex (0-based) plus draws that selected nobody.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SampleCounts {
    pub samples: u64,
    pub seed: u64,
    pub counts: Vec<u64>,
    pub none: u64,
}

pub fn sample_counts(id: MechanismId, g: &NominationGraph, samples: u64, seed: u64) -> SampleCounts {
    let n = g.n();
    let (counts, none) = chunks(samples)
        .map(|(k, len)| {
            let mut r = rng::stream(seed, k);
            let mut counts = vec![0u64; n];
            let mut none = 0u64;
            for _ in 0..len {
                match mechanisms::sample(id, g, &mut r) {
                    Some(v) => counts[v - 1] += 1,
                    None => none += 1,
                }
            }
            (counts, none)
        })
        .reduce(
            || (vec![0u64; n], 0),
            |(mut a, x), (b, y)| {
                a.iter_mut().zip(b).for_each(|(p, q)| *p += q);
                (a, x + y)
            },
        );
    SampleCounts {
        samples,
        seed,
        counts,
        none,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Estimate {
    pub samples: u64,
    pub seed: u64,
    pub mean: f64,
    pub std_error: f64,
    pub low: f64,
    pub high: f64,
}

impl Estimate {
    fn from_sums(samples: u64, seed: u64, sum: f64, sum_sq: f64) -> Self {
        let n = samples as f64;
        let mean = sum / n;
        let var = if samples > 1 {
            ((sum_sq - n * mean * mean) / (n - 1.0)).max(0.0)
        } else {
            0.0
        };
        let std_error = (var / n).sqrt();
        Self {
            samples,
            seed,
            mean,
            std_error,
            low: mean - SIGMAS * std_error,
            high: mean + SIGMAS * std_error,
        }
    }
}

/// Estimated ratio `E[δ⁻(selected)] / Δ`; selecting nobody counts as indegree 0.
pub fn estimate_ratio(id: MechanismId, g: &NominationGraph, samples: u64, seed: u64) -> Result<Estimate> {
    if samples == 0 {
        return Err(Error::input("need at least one sample"));
    }
    let deg = g.indegrees();
    let delta = g.max_indegree() as f64;
    let (sum, sum_sq) = chunks(samples)
        .map(|(k, len)| {
            let mut r = rng::stream(seed, k);
            let (mut s, mut s2) = (0u64, 0u64);
            for _ in 0..len {
                let d = mechanisms::sample(id, g, &mut r).map_or(0, |v| deg[v - 1] as u64);
                s += d;
                s2 += d * d;
            }
            (s, s2)
        })
        .reduce(|| (0, 0), |a, b| (a.0 + b.0, a.1 + b.1));
    Ok(Estimate::from_sums(
        samples,
        seed,
        sum as f64 / delta,
        sum_sq as f64 / (delta * delta),
    ))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoordinateCheck {
    /// 1-based vertex, or 0 for "nobody".
    pub vertex: usize,
    pub exact: f64,
    pub observed: f64,
    pub sigma: f64,
    pub within: bool,
}

/// Compares empirical frequencies with exact probabilities, coordinate by
/// coordinate, at [`SIGMAS`] binomial standard deviations. A zero-probability
/// coordinate must never be observed.
pub fn compare_frequencies(counts: &SampleCounts, exact: &SelectionDistribution) -> Vec<CoordinateCheck> {
    let n = counts.samples as f64;
    let check = |vertex, p: f64, c: u64| {
        let observed = c as f64 / n;
        let sigma = (p * (1.0 - p) / n).sqrt();
        let within = if p == 0.0 {
            c == 0
        } else {
            (observed - p).abs() <= SIGMAS * sigma
        };
        CoordinateCheck {
            vertex,
            exact: p,
            observed,
            sigma,
            within,
        }
    };
    let mut out: Vec<CoordinateCheck> = exact
        .probs()
        .iter()
        .zip(&counts.counts)
        .enumerate()
        .map(|(v, (p, &c))| check(v + 1, to_f64(p), c))
        .collect();
    out.push(check(0, to_f64(&exact.deficit()), counts.none));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators;
    use crate::mechanisms::ExactConfig;

    #[test]
    fn counts_are_reproducible_and_complete() {
        let g = generators::random_graph(6, 1).unwrap();
        let a = sample_counts(MechanismId::Perm, &g, 25_000, 9);
        assert_eq!(a.counts.iter().sum::<u64>() + a.none, 25_000);
        assert_eq!(a, sample_counts(MechanismId::Perm, &g, 25_000, 9));
        assert_ne!(a, sample_counts(MechanismId::Perm, &g, 25_000, 10));
    }

    #[test]
    fn two_cycle_frequencies() {
        let g = generators::cycle(2).unwrap();
        let c = sample_counts(MechanismId::Perm, &g, 100_000, 3);
        let exact = mechanisms::exact(MechanismId::Perm, &g, &ExactConfig::default()).unwrap();
        assert!(compare_frequencies(&c, &exact).iter().all(|x| x.within));
    }

    #[test]
    fn ratio_estimate_covers_exact() {
        let g = generators::lower_bound_family(2, 1).unwrap();
        let e = estimate_ratio(MechanismId::Perm, &g, 200_000, 5).unwrap();
        let exact = crate::analysis::ratio::ratio(MechanismId::Perm, &g, &ExactConfig::default()).unwrap();
        let x = to_f64(&exact.ratio);
        assert!(e.low <= x && x <= e.high, "{e:?} vs {x}");
    }
}
