//! Exhaustive enumeration of permutations and of the graph space `𝒢ₙ`.

use rayon::prelude::*;

use crate::graph::NominationGraph;

pub fn factorial(n: usize) -> u64 {
    (1..=n as u64).product()
}

/// Calls `f` with every permutation of `0..n` (0-based vertex sequences).
///
/// Uses Heap's algorithm; the order is deterministic but not lexicographic.
pub fn for_each_permutation(n: usize, mut f: impl FnMut(&[usize])) {
    let mut seq: Vec<usize> = (0..n).collect();
    heap_permute(&mut seq, 0, &mut f);
}

/// Permutes `seq[start..]` in place, visiting every arrangement once.
fn heap_permute(seq: &mut [usize], start: usize, f: &mut impl FnMut(&[usize])) {
    let k = seq.len() - start;
    if k <= 1 {
        f(seq);
        return;
    }
    let mut c = vec![0usize; k];
    f(seq);
    let mut i = 1;
    while i < k {
        if c[i] < i {
            if i % 2 == 0 {
                seq.swap(start, start + i);
            } else {
                seq.swap(start + c[i], start + i);
            }
            f(seq);
            c[i] += 1;
            i = 1;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
}

/// Folds over all permutations of `0..n`, splitting the space by first element across
/// rayon workers when `parallel` is set. Partial results are merged with `combine`, which
/// must be associative and commutative (integer tallies are).
pub fn fold_permutations<T, I, F, C>(n: usize, parallel: bool, init: I, fold: F, combine: C) -> T
where
    T: Send,
    I: Fn() -> T + Sync + Send,
    F: Fn(&mut T, &[usize]) + Sync + Send,
    C: Fn(T, T) -> T + Sync + Send,
{
    if !parallel || n < 2 {
        let mut acc = init();
        for_each_permutation(n, |p| fold(&mut acc, p));
        return acc;
    }
    (0..n)
        .into_par_iter()
        .map(|first| {
            let mut seq: Vec<usize> = Vec::with_capacity(n);
            seq.push(first);
            seq.extend((0..n).filter(|&v| v != first));
            let mut acc = init();
            heap_permute(&mut seq, 1, &mut |p: &[usize]| fold(&mut acc, p));
            acc
        })
        .reduce(&init, combine)
}

/// The set `𝒢ₙ`, indexed by a mixed-radix code: digit `v` (base `n-1`) selects
/// vertex `v`'s target among the `n-1` other vertices.
#[derive(Debug, Clone, Copy)]
pub struct GraphSpace {
    n: usize,
    len: u64,
}

impl GraphSpace {
    pub fn new(n: usize) -> Self {
        assert!(n >= 2, "GraphSpace needs n >= 2");
        Self {
            n,
            len: ((n - 1) as u64).pow(n as u32),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `(n-1)^n`.
    pub fn len(&self) -> u64 {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn graph(&self, code: u64) -> NominationGraph {
        let base = (self.n - 1) as u64;
        let mut c = code;
        let out = (0..self.n)
            .map(|v| {
                let d = (c % base) as usize;
                c /= base;
                if d < v {
                    d
                } else {
                    d + 1
                }
            })
            .collect();
        NominationGraph::from_idx_unchecked(out)
    }

    pub fn code(&self, g: &NominationGraph) -> u64 {
        let base = (self.n - 1) as u64;
        g.out_idx()
            .iter()
            .enumerate()
            .rev()
            .fold(0u64, |acc, (v, &t)| acc * base + Self::digit(v, t) as u64)
    }

    fn digit(v: usize, t: usize) -> usize {
        if t < v {
            t
        } else {
            t - 1
        }
    }

    /// Code of the graph in which 0-based vertex `v` nominates 0-based `t` instead.
    pub fn deviate(&self, code: u64, v: usize, t: usize) -> u64 {
        let base = (self.n - 1) as u64;
        let place = base.pow(v as u32);
        let old = (code / place) % base;
        let new = Self::digit(v, t) as u64;
        code - old * place + new * place
    }

    pub fn iter(&self) -> impl Iterator<Item = NominationGraph> + '_ {
        (0..self.len).map(move |c| self.graph(c))
    }
}
