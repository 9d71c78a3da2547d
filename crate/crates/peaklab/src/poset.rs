//! Finite labeled posets and their linear extensions.
//!
//! Elements are the indices `0..n`; the strict order is stored transitively
//! closed, so constructors accept any generating set of relations. Every
//! element carries a positive label, and labels are injective across the
//! poset. Linear extensions are produced as sequences of element indices.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::perm::Permutation;

/// A finite poset on `0..n` with an injective positive labeling.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabeledPoset {
    labels: Vec<u32>,
    less: Vec<Vec<bool>>,
}

impl LabeledPoset {
    /// Builds a poset from strict relations `(a, b)` meaning `a < b`.
    ///
    /// The relations may be any generating set; the transitive closure is
    /// taken internally. Relations that force `a < a` are rejected.
    pub fn new(labels: Vec<u32>, relations: &[(usize, usize)]) -> Result<Self> {
        let n = labels.len();
        let mut seen = BTreeSet::new();
        for &l in &labels {
            if l == 0 {
                return Err(Error::ZeroLetter);
            }
            if !seen.insert(l) {
                return Err(Error::NonInjectiveLabels);
            }
        }
        let mut less = vec![vec![false; n]; n];
        for &(a, b) in relations {
            assert!(a < n && b < n, "relation endpoint out of range");
            less[a][b] = true;
        }
        for k in 0..n {
            for i in 0..n {
                if less[i][k] {
                    for j in 0..n {
                        if less[k][j] {
                            less[i][j] = true;
                        }
                    }
                }
            }
        }
        if (0..n).any(|i| less[i][i]) {
            return Err(Error::CyclicPoset);
        }
        Ok(LabeledPoset { labels, less })
    }

    /// The chain `0 < 1 < … < n−1` with the given labels.
    pub fn chain(labels: Vec<u32>) -> Result<Self> {
        let rels: Vec<(usize, usize)> = (1..labels.len()).map(|i| (i - 1, i)).collect();
        LabeledPoset::new(labels, &rels)
    }

    /// A poset with no relations.
    pub fn antichain(labels: Vec<u32>) -> Result<Self> {
        LabeledPoset::new(labels, &[])
    }

    /// The chain labeled by the letters of a word.
    pub fn from_word(word: &Permutation) -> Result<Self> {
        LabeledPoset::chain(word.letters().to_vec())
    }

    /// Number of elements.
    pub fn len(&self) -> usize {
        self.labels.len()
    }

    /// True if the poset has no elements.
    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    /// Label of element `i`.
    pub fn label(&self, i: usize) -> u32 {
        self.labels[i]
    }

    /// All labels, indexed by element.
    pub fn labels(&self) -> &[u32] {
        &self.labels
    }

    /// True if `a < b` in the poset order.
    pub fn less(&self, a: usize, b: usize) -> bool {
        self.less[a][b]
    }

    /// Some listing of the elements in which every element follows all
    /// elements below it.
    pub fn topo_order(&self) -> Vec<usize> {
        let n = self.len();
        let mut placed = vec![false; n];
        let mut order = Vec::with_capacity(n);
        while order.len() < n {
            for e in 0..n {
                if !placed[e] && (0..n).all(|x| !self.less[x][e] || placed[x]) {
                    placed[e] = true;
                    order.push(e);
                    break;
                }
            }
        }
        order
    }

    /// All linear extensions, each a listing of the elements compatible with
    /// the order, produced in lexicographic order of the index sequences.
    pub fn linear_extensions(&self) -> Vec<Vec<usize>> {
        let n = self.len();
        let mut out = Vec::new();
        let mut used = vec![false; n];
        let mut current = Vec::with_capacity(n);
        self.extend_rec(&mut used, &mut current, &mut out);
        out
    }

    fn extend_rec(&self, used: &mut [bool], current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        let n = self.len();
        if current.len() == n {
            out.push(current.clone());
            return;
        }
        for e in 0..n {
            if !used[e] && (0..n).all(|x| !self.less[x][e] || used[x]) {
                used[e] = true;
                current.push(e);
                self.extend_rec(used, current, out);
                current.pop();
                used[e] = false;
            }
        }
    }

    /// Disjoint union: elements of `other` are re-indexed after `self`, and
    /// no relations are added between the parts. Labels must not overlap.
    pub fn disjoint_union(&self, other: &LabeledPoset) -> Result<LabeledPoset> {
        if let Some(&l) = self.labels.iter().find(|l| other.labels.contains(l)) {
            return Err(Error::NotDisjoint(l));
        }
        let n = self.len();
        let m = other.len();
        let mut labels = self.labels.clone();
        labels.extend_from_slice(&other.labels);
        let mut rels = Vec::new();
        for a in 0..n {
            for b in 0..n {
                if self.less[a][b] {
                    rels.push((a, b));
                }
            }
        }
        for a in 0..m {
            for b in 0..m {
                if other.less[a][b] {
                    rels.push((n + a, n + b));
                }
            }
        }
        LabeledPoset::new(labels, &rels)
    }
}
