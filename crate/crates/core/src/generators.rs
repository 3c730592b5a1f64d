//! Named graph families and a seeded uniform sampler over `𝒢ₙ`.
//!
//! Every generator emits the exact vertex labels of its construction, so
//! relabeling identities between family members can be checked verbatim.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::NominationGraph;
use crate::rng;

/// Assembles a graph from 1-based edges, requiring exactly one out-edge per vertex.
/// Duplicate copies of the same edge are merged.
fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<NominationGraph> {
    let mut out: Vec<Option<usize>> = vec![None; n];
    for &(u, v) in edges {
        if u == 0 || u > n || v == 0 || v > n {
            return Err(Error::input(format!("edge ({u},{v}) out of range for n = {n}")));
        }
        match out[u - 1] {
            Some(t) if t != v => return Err(Error::Invariant(format!("vertex {u} would nominate both {t} and {v}"))),
            _ => out[u - 1] = Some(v),
        }
    }
    let targets = out
        .into_iter()
        .enumerate()
        .map(|(i, t)| t.ok_or_else(|| Error::Invariant(format!("vertex {} has no nomination", i + 1))))
        .collect::<Result<Vec<_>>>()?;
    NominationGraph::new(targets)
}

/// `Cₙ`: `n → n-1 → … → 1 → n`.
pub fn cycle(n: usize) -> Result<NominationGraph> {
    if n < 2 {
        return Err(Error::input(format!("cycle needs n >= 2, got {n}")));
    }
    let mut edges: Vec<_> = (1..n).map(|v| (v + 1, v)).collect();
    edges.push((1, n));
    from_edges(n, &edges)
}

/// `C₂,ₙ`: a 2-cycle on `{1, 2}` beside the cycle `n → n-1 → … → 3 → n`.
pub fn two_cycle_path(n: usize) -> Result<NominationGraph> {
    if n < 4 {
        return Err(Error::input(format!("two_cycle_path needs n >= 4, got {n}")));
    }
    let mut edges: Vec<_> = (3..n).map(|v| (v + 1, v)).collect();
    edges.extend([(1, 2), (2, 1), (3, n)]);
    from_edges(n, &edges)
}

/// Largest admissible family index `n' = ⌊n/2⌋ - 1`.
pub fn ub_family_max_index(n: usize) -> usize {
    n / 2 - 1
}

/// `Gᵢ`: a 2-cycle on `{1, 2}`, a path `i+2 → … → 3` into vertex 1 and a
/// path `n → … → i+3` into vertex 2 (for `i = 0` the second path runs through 3).
pub fn ub_family(n: usize, i: usize) -> Result<NominationGraph> {
    if n < 6 {
        return Err(Error::input(format!("ub_family needs n >= 6, got {n}")));
    }
    let max = ub_family_max_index(n);
    if i > max {
        return Err(Error::input(format!(
            "ub_family index i = {i} outside 0..={max} for n = {n}"
        )));
    }
    let mut edges: Vec<_> = (1..n).filter(|&v| v != 2 && v != i + 2).map(|v| (v + 1, v)).collect();
    edges.extend([(1, 2), (3, if i == 0 { 2 } else { 1 }), (i + 3, 2)]);
    from_edges(n, &edges)
}

/// `G′ᵢ`: `Gᵢ` with vertex 2 nominating `n` instead of 1.
pub fn ub_family_prime(n: usize, i: usize) -> Result<NominationGraph> {
    if i == 0 {
        return Err(Error::input("ub_family_prime is defined for i >= 1 only"));
    }
    ub_family(n, i)?.with_target(2, n)
}

/// Vertex count of the tightness construction.
pub fn lower_bound_size(delta: usize, nprime: usize) -> usize {
    delta + 1 + nprime * (delta / 2 + 1)
}

/// The tightness family: vertex 1 with indegree `Δ` and vertices `2..=n'+1`
/// with indegree `⌊Δ/2⌋`, in `n'+1` disjoint components.
///
/// Vertex 1 nominates `n'+Δ`, one of its in-neighbours. Each hub `v ≥ 2`
/// nominates its smallest in-neighbour `n'+Δ+2+(v-2)⌊Δ/2⌋`.
pub fn lower_bound_family(delta: usize, nprime: usize) -> Result<NominationGraph> {
    if delta < 2 {
        return Err(Error::input(format!(
            "lower_bound_family needs delta >= 2, got {delta}"
        )));
    }
    if nprime < 1 {
        return Err(Error::input("lower_bound_family needs nprime >= 1"));
    }
    let half = delta / 2;
    let n = lower_bound_size(delta, nprime);
    let mut edges = vec![(1, nprime + delta)];
    edges.extend((nprime + 2..=nprime + delta + 1).map(|u| (u, 1)));
    for v in 2..=nprime + 1 {
        let first = nprime + delta + 2 + (v - 2) * half;
        edges.push((v, first));
        edges.extend((first..first + half).map(|u| (u, v)));
    }
    from_edges(n, &edges)
}

/// Smallest `n'` for which the tightness construction is within `ε` of the
/// permutation mechanism's guarantee: the least integer strictly above
///
/// `(log((Δ-⌊Δ/2⌋)(⌊Δ/2⌋+1)) - log((Δ+1)ε)) / (log(2⌊Δ/2⌋+2) - log(2⌊Δ/2⌋+1))`.
pub fn required_nprime(delta: usize, eps: f64) -> Result<usize> {
    if delta < 2 {
        return Err(Error::input(format!("required_nprime needs delta >= 2, got {delta}")));
    }
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::input(format!("required_nprime needs 0 < eps < 1, got {eps}")));
    }
    let h = (delta / 2) as f64;
    let d = delta as f64;
    let num = ((d - h) * (h + 1.0)).ln() - ((d + 1.0) * eps).ln();
    let den = (2.0 * h + 2.0).ln() - (2.0 * h + 1.0).ln();
    let threshold = num / den;
    if threshold < 0.0 {
        return Ok(0);
    }
    Ok(threshold.floor() as usize + 1)
}

/// A uniform member of `𝒢ₙ`: each vertex nominates one of the other `n-1` vertices.
pub fn random_graph(n: usize, seed: u64) -> Result<NominationGraph> {
    random_graph_with(n, &mut rng::seeded(seed))
}

pub fn random_graph_with<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<NominationGraph> {
    if n < 2 {
        return Err(Error::input(format!("random_graph needs n >= 2, got {n}")));
    }
    let out = (0..n)
        .map(|v| {
            let d = rng.random_range(0..n - 1);
            if d < v {
                d
            } else {
                d + 1
            }
        })
        .collect();
    Ok(NominationGraph::from_idx_unchecked(out))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FamilyKind {
    Cycle,
    TwoCyclePath,
    UbFamily,
    UbFamilyPrime,
    LowerBound,
}

impl FamilyKind {
    pub fn name(self) -> &'static str {
        match self {
            FamilyKind::Cycle => "cycle",
            FamilyKind::TwoCyclePath => "two_cycle_path",
            FamilyKind::UbFamily => "ub",
            FamilyKind::UbFamilyPrime => "ub_prime",
            FamilyKind::LowerBound => "lb",
        }
    }
}

impl FromStr for FamilyKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "cycle" => FamilyKind::Cycle,
            "two_cycle_path" | "c2" => FamilyKind::TwoCyclePath,
            "ub" | "ub_family" => FamilyKind::UbFamily,
            "ub_prime" | "ub_family_prime" => FamilyKind::UbFamilyPrime,
            "lb" | "lower_bound" => FamilyKind::LowerBound,
            other => {
                return Err(Error::input(format!(
                    "unknown family {other:?} (expected cycle, two_cycle_path, ub, ub_prime, lb)"
                )))
            }
        })
    }
}

/// A family name plus its parameters, parsed from `family=name,key=value,...`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FamilySpec {
    pub kind: FamilyKind,
    pub params: BTreeMap<String, usize>,
}

impl FamilySpec {
    fn param(&self, key: &str) -> Result<usize> {
        self.params
            .get(key)
            .copied()
            .ok_or_else(|| Error::input(format!("family {} needs parameter {key}", self.kind.name())))
    }

    fn allowed(&self) -> &'static [&'static str] {
        match self.kind {
            FamilyKind::Cycle | FamilyKind::TwoCyclePath => &["n"],
            FamilyKind::UbFamily | FamilyKind::UbFamilyPrime => &["n", "i"],
            FamilyKind::LowerBound => &["delta", "nprime"],
        }
    }

    pub fn build(&self) -> Result<NominationGraph> {
        match self.kind {
            FamilyKind::Cycle => cycle(self.param("n")?),
            FamilyKind::TwoCyclePath => two_cycle_path(self.param("n")?),
            FamilyKind::UbFamily => ub_family(self.param("n")?, self.param("i")?),
            FamilyKind::UbFamilyPrime => ub_family_prime(self.param("n")?, self.param("i")?),
            FamilyKind::LowerBound => lower_bound_family(self.param("delta")?, self.param("nprime")?),
        }
    }
}

impl FromStr for FamilySpec {
    type Err = Error;

    /// Accepts pairs separated by commas and/or whitespace.
    fn from_str(s: &str) -> Result<Self> {
        let mut kind = None;
        let mut params = BTreeMap::new();
        for pair in s
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|p| !p.is_empty())
        {
            let (k, v) = pair
                .split_once('=')
                .ok_or_else(|| Error::input(format!("expected key=value, got {pair:?}")))?;
            let k = k.trim().to_ascii_lowercase();
            if k == "family" {
                kind = Some(v.trim().parse::<FamilyKind>()?);
            } else {
                let key = match k.as_str() {
                    "n'" | "n_prime" => "nprime".to_string(),
                    "d" => "delta".to_string(),
                    _ => k,
                };
                let v: usize = v
                    .trim()
                    .parse()
                    .map_err(|_| Error::input(format!("parameter {key} needs an integer, got {v:?}")))?;
                params.insert(key, v);
            }
        }
        let kind = kind.ok_or_else(|| Error::input("missing family=<name>"))?;
        let spec = FamilySpec { kind, params };
        if let Some(k) = spec.params.keys().find(|k| !spec.allowed().contains(&k.as_str())) {
            return Err(Error::input(format!(
                "family {} does not take parameter {k}",
                spec.kind.name()
            )));
        }
        Ok(spec)
    }
}

impl fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "family={}", self.kind.name())?;
        for (k, v) in &self.params {
            write!(f, ",{k}={v}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn edges(g: &NominationGraph) -> Vec<(usize, usize)> {
        g.targets().into_iter().enumerate().map(|(i, t)| (i + 1, t)).collect()
    }

    #[test]
    fn cycle_shapes() {
        assert_eq!(cycle(2).unwrap().targets(), vec![2, 1]);
        assert_eq!(cycle(7).unwrap().to_string(), "7; 7,1,2,3,4,5,6");
        assert!(cycle(10).unwrap().indegrees().iter().all(|&d| d == 1));
        assert!(cycle(1).is_err());
    }

    #[test]
    fn two_cycle_path_shapes() {
        let g = two_cycle_path(7).unwrap();
        assert_eq!(g.to_string(), "7; 2,1,7,3,4,5,6");
        assert!(g.indegrees().iter().all(|&d| d == 1));
        assert_eq!(two_cycle_path(4).unwrap().targets(), vec![2, 1, 4, 3]);
        assert!(two_cycle_path(3).is_err());
    }

    #[test]
    fn ub_family_matches_construction() {
        // G0 at n = 7: 2-cycle {1,2} plus the path 7 → 6 → 5 → 4 → 3 → 2.
        let g0 = ub_family(7, 0).unwrap();
        assert_eq!(g0.targets(), vec![2, 1, 2, 3, 4, 5, 6]);
        assert_eq!(g0.indegree(2).unwrap(), 2);
        assert_eq!(g0.indegree_from(2, &[1, 3]).unwrap(), 2);
        assert_eq!(g0.max_indegree_and_top(), (2, vec![2], 2));

        // G1: 3 → 1, 4 → 2, 5 → 4, ...
        let g1 = ub_family(7, 1).unwrap();
        assert_eq!(g1.targets(), vec![2, 1, 1, 2, 4, 5, 6]);
        let g2 = ub_family(7, 2).unwrap();
        assert_eq!(g2.targets(), vec![2, 1, 1, 3, 2, 5, 6]);
        for i in 1..=2 {
            let g = ub_family(7, i).unwrap();
            assert!(edges(&g).contains(&(2, 1)));
            assert_eq!(g.indegree(2).unwrap(), 2);
        }
        assert!(ub_family(7, 3).is_err());
        assert!(ub_family(5, 0).is_err());
    }

    #[test]
    fn ub_family_prime_has_unique_top() {
        for n in 6..=9 {
            for i in 1..=ub_family_max_index(n) {
                let g = ub_family_prime(n, i).unwrap();
                assert_eq!(g.target(2).unwrap(), n);
                let (delta, top, _) = g.max_indegree_and_top();
                assert_eq!((delta, top), (2, vec![2]));
            }
        }
        assert_eq!(ub_family_prime(7, 1).unwrap().targets(), vec![2, 7, 1, 2, 4, 5, 6]);
        assert!(ub_family_prime(7, 0).is_err());
    }

    #[test]
    fn lower_bound_family_shapes() {
        let g = lower_bound_family(4, 2).unwrap();
        assert_eq!(g.n(), 11);
        assert_eq!(g.target(1).unwrap(), 2 + 4);
        assert_eq!(g.indegree(1).unwrap(), 4);
        assert_eq!(g.max_indegree_and_top(), (4, vec![1], 1));
        // hub 2 nominates n'+6, hub 3 nominates n'+8
        assert_eq!(g.target(2).unwrap(), 8);
        assert_eq!(g.target(3).unwrap(), 10);

        let small = lower_bound_family(2, 1).unwrap();
        assert_eq!(small.n(), 5);
        assert_eq!(small.indegree(1).unwrap(), 2);
        assert_eq!(small.indegree(2).unwrap(), 1);
        assert_eq!(small.indegree_multiset(), vec![0, 1, 1, 1, 2]);
        assert!(lower_bound_family(1, 3).is_err());
        assert!(lower_bound_family(3, 0).is_err());
    }

    #[test]
    fn lower_bound_family_degree_profile() {
        for delta in 2..=6 {
            for nprime in 1..=4 {
                let g = lower_bound_family(delta, nprime).unwrap();
                assert_eq!(g.n(), delta + 1 + nprime * (delta / 2 + 1));
                let deg = g.indegrees();
                assert_eq!(deg.iter().filter(|&&d| d == delta).count(), 1);
                assert_eq!(deg[0], delta);
                for v in 1..=nprime {
                    assert_eq!(deg[v], delta / 2, "delta {delta} nprime {nprime} hub {}", v + 1);
                }
                assert!(deg[nprime + 1..].iter().all(|&d| d <= 1));
            }
        }
    }

    #[test]
    fn required_nprime_values() {
        assert_eq!(required_nprime(4, 0.1).unwrap(), 14);
        // (ln 2 - ln 0.3) / (ln 4 - ln 3) = 6.594...
        assert_eq!(required_nprime(2, 0.1).unwrap(), 7);
        let mut last = usize::MAX;
        for k in 1..20 {
            let v = required_nprime(4, k as f64 / 20.0).unwrap();
            assert!(v <= last);
            last = v;
        }
        assert!(required_nprime(4, 0.0).is_err());
        assert!(required_nprime(1, 0.1).is_err());
    }

    #[test]
    fn random_graphs() {
        assert_eq!(random_graph(9, 3).unwrap(), random_graph(9, 3).unwrap());
        for seed in 0..20 {
            assert_eq!(random_graph(2, seed).unwrap().targets(), vec![2, 1]);
        }
    }

    #[test]
    fn family_spec_parsing() {
        let s: FamilySpec = "family=cycle,n=7".parse().unwrap();
        assert_eq!(s.build().unwrap(), cycle(7).unwrap());
        let s: FamilySpec = "family=ub n=7 i=0".parse().unwrap();
        assert_eq!(s.build().unwrap(), ub_family(7, 0).unwrap());
        let s: FamilySpec = "family=lb,delta=4,nprime=2".parse().unwrap();
        assert_eq!(s.build().unwrap().n(), 11);
        assert_eq!(s.to_string(), "family=lb,delta=4,nprime=2");
        assert!("family=cycle".parse::<FamilySpec>().unwrap().build().is_err());
        assert!("family=nope,n=3".parse::<FamilySpec>().is_err());
        assert!("family=cycle,i=3".parse::<FamilySpec>().is_err());
        assert!("n=3".parse::<FamilySpec>().is_err());
    }
}
