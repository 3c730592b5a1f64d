//! Nomination graphs and vertex permutations.
//!
//! Vertices are numbered `1..=n` in every public signature and in the text
//! encoding. Internally targets are stored 0-based; the `*_idx` accessors
//! expose that form to the evaluators in this crate.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A graph in which every vertex nominates exactly one other vertex.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct NominationGraph {
    out: Vec<usize>,
}

/// A graph in which every vertex nominates at most one other vertex.
///
/// Arises as `G_{-v}` when a vertex's nomination is dropped.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PartialNominationGraph {
    out: Vec<Option<usize>>,
}

fn check_n(n: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::input(format!(
            "a nomination graph needs n >= 2 vertices, got {n}"
        )));
    }
    Ok(())
}

fn check_vertex(n: usize, v: usize) -> Result<usize> {
    if v == 0 || v > n {
        return Err(Error::input(format!("vertex {v} out of range 1..={n}")));
    }
    Ok(v - 1)
}

impl NominationGraph {
    /// Builds a graph from 1-based targets: `targets[i]` is the vertex nominated by `i + 1`.
    pub fn new(targets: Vec<usize>) -> Result<Self> {
        let n = targets.len();
        check_n(n)?;
        let mut out = Vec::with_capacity(n);
        for (i, &t) in targets.iter().enumerate() {
            let t = check_vertex(n, t)?;
            if t == i {
                return Err(Error::input(format!("vertex {} nominates itself", i + 1)));
            }
            out.push(t);
        }
        Ok(Self { out })
    }

    /// Builds from 0-based targets without validation beyond debug assertions.
    pub(crate) fn from_idx_unchecked(out: Vec<usize>) -> Self {
        debug_assert!(out.len() >= 2);
        debug_assert!(out.iter().enumerate().all(|(i, &t)| t != i && t < out.len()));
        Self { out }
    }

    pub fn n(&self) -> usize {
        self.out.len()
    }

    /// The vertex nominated by `v` (1-based).
    pub fn target(&self, v: usize) -> Result<usize> {
        let i = check_vertex(self.n(), v)?;
        Ok(self.out[i] + 1)
    }

    /// 1-based targets in vertex order.
    pub fn targets(&self) -> Vec<usize> {
        self.out.iter().map(|&t| t + 1).collect()
    }

    pub(crate) fn out_idx(&self) -> &[usize] {
        &self.out
    }

    pub fn indegree(&self, v: usize) -> Result<usize> {
        let i = check_vertex(self.n(), v)?;
        Ok(self.out.iter().filter(|&&t| t == i).count())
    }

    pub fn indegree_from(&self, v: usize, from: &[usize]) -> Result<usize> {
        self.as_partial().indegree_from(v, from)
    }

    /// Indegrees of all vertices, indexed 0-based.
    pub fn indegrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.n()];
        for &t in &self.out {
            deg[t] += 1;
        }
        deg
    }

    pub fn max_indegree(&self) -> usize {
        self.indegrees().into_iter().max().unwrap_or(0)
    }

    /// `(Δ, T, v*)`: maximum indegree, every vertex attaining it, and the smallest such vertex.
    pub fn max_indegree_and_top(&self) -> (usize, Vec<usize>, usize) {
        self.as_partial().max_indegree_and_top()
    }

    /// Number of vertices whose indegree is at least `d`.
    pub fn count_indegree_at_least(&self, d: usize) -> usize {
        self.indegrees().into_iter().filter(|&x| x >= d).count()
    }

    pub fn as_partial(&self) -> PartialNominationGraph {
        PartialNominationGraph {
            out: self.out.iter().map(|&t| Some(t)).collect(),
        }
    }

    /// `G_{-v}`: the same graph with `v`'s nomination dropped.
    pub fn remove_out_edge(&self, v: usize) -> Result<PartialNominationGraph> {
        self.as_partial().remove_out_edge(v)
    }

    pub(crate) fn remove_out_edge_idx(&self, v: usize) -> PartialNominationGraph {
        let mut g = self.as_partial();
        g.out[v] = None;
        g
    }

    /// Returns a copy in which `v` nominates `u` instead.
    pub fn with_target(&self, v: usize, u: usize) -> Result<Self> {
        let vi = check_vertex(self.n(), v)?;
        let ui = check_vertex(self.n(), u)?;
        if vi == ui {
            return Err(Error::input(format!("vertex {v} cannot nominate itself")));
        }
        let mut out = self.out.clone();
        out[vi] = ui;
        Ok(Self { out })
    }

    /// `G_π`: every edge `(u, v)` becomes `(π_u, π_v)`.
    pub fn relabel(&self, pi: &Permutation) -> Result<Self> {
        if pi.len() != self.n() {
            return Err(Error::input(format!(
                "permutation of length {} applied to a graph on {} vertices",
                pi.len(),
                self.n()
            )));
        }
        let mut out = vec![0; self.n()];
        for (u, &t) in self.out.iter().enumerate() {
            out[pi.seq[u]] = pi.seq[t];
        }
        Ok(Self { out })
    }

    /// Sorted indegree multiset.
    pub fn indegree_multiset(&self) -> Vec<usize> {
        let mut d = self.indegrees();
        d.sort_unstable();
        d
    }
}

impl TryFrom<Vec<usize>> for NominationGraph {
    type Error = Error;

    fn try_from(targets: Vec<usize>) -> Result<Self> {
        Self::new(targets)
    }
}

impl From<NominationGraph> for Vec<usize> {
    fn from(g: NominationGraph) -> Self {
        g.targets()
    }
}

impl From<&NominationGraph> for PartialNominationGraph {
    fn from(g: &NominationGraph) -> Self {
        g.as_partial()
    }
}

impl PartialNominationGraph {
    /// Builds from 1-based optional targets; `None` marks a vertex without a nomination.
    pub fn new(targets: Vec<Option<usize>>) -> Result<Self> {
        let n = targets.len();
        check_n(n)?;
        let mut out = Vec::with_capacity(n);
        for (i, t) in targets.into_iter().enumerate() {
            let t = match t {
                Some(t) => {
                    let t = check_vertex(n, t)?;
                    if t == i {
                        return Err(Error::input(format!("vertex {} nominates itself", i + 1)));
                    }
                    Some(t)
                }
                None => None,
            };
            out.push(t);
        }
        Ok(Self { out })
    }

    pub fn n(&self) -> usize {
        self.out.len()
    }

    pub fn target(&self, v: usize) -> Result<Option<usize>> {
        let i = check_vertex(self.n(), v)?;
        Ok(self.out[i].map(|t| t + 1))
    }

    pub fn targets(&self) -> Vec<Option<usize>> {
        self.out.iter().map(|t| t.map(|t| t + 1)).collect()
    }

    pub(crate) fn out_idx(&self) -> &[Option<usize>] {
        &self.out
    }

    pub fn edge_count(&self) -> usize {
        self.out.iter().filter(|t| t.is_some()).count()
    }

    /// `Some` when every vertex has a nomination.
    pub fn to_total(&self) -> Option<NominationGraph> {
        let out: Option<Vec<usize>> = self.out.iter().copied().collect();
        out.map(|out| NominationGraph { out })
    }

    pub fn indegree(&self, v: usize) -> Result<usize> {
        let i = check_vertex(self.n(), v)?;
        Ok(self.out.iter().filter(|&&t| t == Some(i)).count())
    }

    /// Number of in-neighbours of `v` that belong to `from` (1-based vertex set).
    pub fn indegree_from(&self, v: usize, from: &[usize]) -> Result<usize> {
        let i = check_vertex(self.n(), v)?;
        let mut member = vec![false; self.n()];
        for &u in from {
            member[check_vertex(self.n(), u)?] = true;
        }
        Ok(self
            .out
            .iter()
            .enumerate()
            .filter(|&(u, &t)| member[u] && t == Some(i))
            .count())
    }

    pub fn indegrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.n()];
        for t in self.out.iter().flatten() {
            deg[*t] += 1;
        }
        deg
    }

    pub fn max_indegree(&self) -> usize {
        self.indegrees().into_iter().max().unwrap_or(0)
    }

    pub fn max_indegree_and_top(&self) -> (usize, Vec<usize>, usize) {
        let deg = self.indegrees();
        let delta = deg.iter().copied().max().unwrap_or(0);
        let top: Vec<usize> = (0..self.n()).filter(|&v| deg[v] == delta).map(|v| v + 1).collect();
        let first = top[0];
        (delta, top, first)
    }

    pub fn remove_out_edge(&self, v: usize) -> Result<Self> {
        let i = check_vertex(self.n(), v)?;
        let mut g = self.clone();
        g.out[i] = None;
        Ok(g)
    }

    pub fn relabel(&self, pi: &Permutation) -> Result<Self> {
        if pi.len() != self.n() {
            return Err(Error::input(format!(
                "permutation of length {} applied to a graph on {} vertices",
                pi.len(),
                self.n()
            )));
        }
        let mut out = vec![None; self.n()];
        for (u, t) in self.out.iter().enumerate() {
            out[pi.seq[u]] = t.map(|t| pi.seq[t]);
        }
        Ok(Self { out })
    }
}

/// Text encoding `n; t1,t2,...,tn` with 1-based targets and `0` for a missing nomination.
impl fmt::Display for PartialNominationGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}; ", self.n())?;
        for (i, t) in self.out.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{}", t.map_or(0, |t| t + 1))?;
        }
        Ok(())
    }
}

impl fmt::Display for NominationGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.as_partial().fmt(f)
    }
}

impl FromStr for PartialNominationGraph {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (head, body) = s
            .split_once(';')
            .ok_or_else(|| Error::input(format!("expected `n; t1,...,tn`, got {s:?}")))?;
        let n: usize = head
            .trim()
            .parse()
            .map_err(|_| Error::input(format!("bad vertex count {head:?}")))?;
        let targets = body
            .split(',')
            .map(|t| {
                let t = t.trim();
                t.parse::<usize>()
                    .map_err(|_| Error::input(format!("bad target {t:?}")))
                    .map(|t| if t == 0 { None } else { Some(t) })
            })
            .collect::<Result<Vec<_>>>()?;
        if targets.len() != n {
            return Err(Error::input(format!(
                "header says {n} vertices but {} targets follow",
                targets.len()
            )));
        }
        Self::new(targets)
    }
}

impl FromStr for NominationGraph {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let partial: PartialNominationGraph = s.parse()?;
        partial
            .to_total()
            .ok_or_else(|| Error::input("every vertex needs a nomination (found target 0)".to_string()))
    }
}

/// An ordering of the vertices.
///
/// `seq[i]` is the vertex at position `i` and `pos[v]` the position of `v`;
/// both are stored 0-based. Used both as an ordering (the permutation
/// mechanism) and as a relabeling map `v ↦ π_v` (symmetry arguments).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Permutation {
    seq: Vec<usize>,
    pos: Vec<usize>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Self {
            seq: (0..n).collect(),
            pos: (0..n).collect(),
        }
    }

    /// From a 1-based vertex sequence.
    pub fn new(seq: Vec<usize>) -> Result<Self> {
        let n = seq.len();
        let mut idx = Vec::with_capacity(n);
        for v in seq {
            idx.push(check_vertex(n, v)?);
        }
        Self::from_idx(idx)
    }

    pub(crate) fn from_idx(seq: Vec<usize>) -> Result<Self> {
        let n = seq.len();
        let mut pos = vec![usize::MAX; n];
        for (i, &v) in seq.iter().enumerate() {
            if v >= n || pos[v] != usize::MAX {
                return Err(Error::input("not a permutation".to_string()));
            }
            pos[v] = i;
        }
        Ok(Self { seq, pos })
    }

    pub(crate) fn from_idx_unchecked(seq: Vec<usize>) -> Self {
        let mut pos = vec![0; seq.len()];
        for (i, &v) in seq.iter().enumerate() {
            pos[v] = i;
        }
        Self { seq, pos }
    }

    pub fn len(&self) -> usize {
        self.seq.len()
    }

    pub fn is_empty(&self) -> bool {
        self.seq.is_empty()
    }

    /// 1-based vertex sequence.
    pub fn seq(&self) -> Vec<usize> {
        self.seq.iter().map(|&v| v + 1).collect()
    }

    pub(crate) fn seq_idx(&self) -> &[usize] {
        &self.seq
    }

    pub(crate) fn pos_idx(&self) -> &[usize] {
        &self.pos
    }

    /// Vertex at 1-based position `i`; also the image `π_i` when used as a relabeling.
    pub fn at(&self, i: usize) -> Result<usize> {
        let i = check_vertex(self.len(), i)?;
        Ok(self.seq[i] + 1)
    }

    /// 1-based position of vertex `v`.
    pub fn position(&self, v: usize) -> Result<usize> {
        let v = check_vertex(self.len(), v)?;
        Ok(self.pos[v] + 1)
    }

    /// `π^R`.
    pub fn reverse(&self) -> Self {
        let mut seq = self.seq.clone();
        seq.reverse();
        Self::from_idx_unchecked(seq)
    }

    /// `π^{i,j}`: swaps the elements at 1-based positions `i` and `j`.
    pub fn swap(&self, i: usize, j: usize) -> Result<Self> {
        let i = check_vertex(self.len(), i)?;
        let j = check_vertex(self.len(), j)?;
        let mut p = self.clone();
        p.seq.swap(i, j);
        p.pos[p.seq[i]] = i;
        p.pos[p.seq[j]] = j;
        Ok(p)
    }

    /// `π_{<v}`: the vertices strictly left of `v`, in order.
    pub fn prefix_set(&self, v: usize) -> Result<Vec<usize>> {
        let v = check_vertex(self.len(), v)?;
        Ok(self.seq[..self.pos[v]].iter().map(|&u| u + 1).collect())
    }

    /// `π(S)`: the members of `subset` in the order they appear in `π`.
    pub fn restrict(&self, subset: &[usize]) -> Result<Vec<usize>> {
        let mut member = vec![false; self.len()];
        for &u in subset {
            member[check_vertex(self.len(), u)?] = true;
        }
        Ok(self.seq.iter().filter(|&&u| member[u]).map(|&u| u + 1).collect())
    }

    pub fn inverse(&self) -> Self {
        Self {
            seq: self.pos.clone(),
            pos: self.seq.clone(),
        }
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, v) in self.seq.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{}", v + 1)?;
        }
        f.write_str(")")
    }
}

impl Serialize for Permutation {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.seq().serialize(s)
    }
}

impl Serialize for PartialNominationGraph {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_cycle() -> NominationGraph {
        NominationGraph::new(vec![2, 1]).unwrap()
    }

    #[test]
    fn rejects_loops_and_small_n() {
        assert!(NominationGraph::new(vec![1, 1]).is_err());
        assert!(NominationGraph::new(vec![2]).is_err());
        assert!(NominationGraph::new(vec![3, 1]).is_err());
        assert!(PartialNominationGraph::new(vec![Some(2), Some(2)]).is_err());
    }

    #[test]
    fn indegree_basics() {
        let g = two_cycle();
        assert_eq!(g.indegree(1).unwrap(), 1);
        assert_eq!(g.indegree_from(2, &[1]).unwrap(), 1);
        assert_eq!(g.indegree_from(2, &[]).unwrap(), 0);
        assert!(g.indegree(3).is_err());
        assert!(g.indegree(0).is_err());
    }

    #[test]
    fn top_uses_smallest_index() {
        let g = NominationGraph::new(vec![2, 1, 2, 1]).unwrap();
        assert_eq!(g.max_indegree_and_top(), (2, vec![1, 2], 1));
    }

    #[test]
    fn remove_out_edge_is_idempotent() {
        let g = two_cycle();
        let once = g.remove_out_edge(1).unwrap();
        assert_eq!(once.targets(), vec![None, Some(1)]);
        assert_eq!(once.remove_out_edge(1).unwrap(), once);
        assert_eq!(once.to_string(), "2; 0,1");
    }

    #[test]
    fn text_format() {
        let g: NominationGraph = "7; 7,1,2,3,4,5,6".parse().unwrap();
        assert_eq!(g.to_string(), "7; 7,1,2,3,4,5,6");
        assert!("3; 2,0,1".parse::<NominationGraph>().is_err());
        assert!("3; 2,0,1".parse::<PartialNominationGraph>().is_ok());
        assert!("3; 2,1".parse::<PartialNominationGraph>().is_err());
        assert!("3 2,1,1".parse::<PartialNominationGraph>().is_err());
    }

    #[test]
    fn permutation_ops() {
        let p = Permutation::new(vec![1, 2, 3]).unwrap();
        assert_eq!(p.reverse().seq(), vec![3, 2, 1]);
        assert_eq!(p.swap(1, 3).unwrap().seq(), vec![3, 2, 1]);
        assert_eq!(p.swap(2, 2).unwrap(), p);
        let q = Permutation::new(vec![3, 1, 4, 2]).unwrap();
        assert_eq!(q.prefix_set(4).unwrap(), vec![3, 1]);
        assert_eq!(q.prefix_set(3).unwrap(), Vec::<usize>::new());
        assert_eq!(q.restrict(&[2, 3]).unwrap(), vec![3, 2]);
        assert_eq!(q.position(2).unwrap(), 4);
        assert!(Permutation::new(vec![1, 1, 2]).is_err());
    }

    #[test]
    fn relabel_rotation_of_cycle() {
        let c: NominationGraph = "5; 5,1,2,3,4".parse().unwrap();
        let rot = Permutation::new(vec![2, 3, 4, 5, 1]).unwrap();
        let r = c.relabel(&rot).unwrap();
        assert_eq!(r, c);
        assert_eq!(r.indegree_multiset(), vec![1; 5]);
    }

    #[test]
    fn serde_round_trip() {
        let g = two_cycle();
        let json = serde_json::to_string(&g).unwrap();
        assert_eq!(json, "[2,1]");
        let back: NominationGraph = serde_json::from_str(&json).unwrap();
        assert_eq!(back, g);
        assert!(serde_json::from_str::<NominationGraph>("[1,1]").is_err());
    }
}
