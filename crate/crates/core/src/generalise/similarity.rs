use std::collections::BTreeMap;
use std::fmt;

use num_traits::One;

use crate::error::{Error, Result};
use crate::numeric::Rational;
use crate::ofs::{ObjectSet, OfsModel};

/// Jaccard similarity `|a ∩ b| / |a ∪ b|`.
pub fn similarity(a: &ObjectSet, b: &ObjectSet) -> Result<Rational> {
    let inter = a.intersection_len(b) as u64;
    let union = (a.len() + b.len()) as u64 - inter;
    if union == 0 {
        return Err(Error::UndefinedSimilarity);
    }
    Ok(Rational::new(inter, union))
}

/// Pairwise similarities of the level-0 sets, in rule order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimilarityMatrix {
    pub names: Vec<String>,
    pub values: Vec<Vec<Rational>>,
}

impl SimilarityMatrix {
    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn get(&self, a: &str, b: &str) -> Option<Rational> {
        let i = self.names.iter().position(|n| n == a)?;
        let j = self.names.iter().position(|n| n == b)?;
        Some(self.values[i][j])
    }

    /// Off-diagonal pairs `(i, j, sim)` with `i < j`.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize, Rational)> + '_ {
        (0..self.len()).flat_map(move |i| (i + 1..self.len()).map(move |j| (i, j, self.values[i][j])))
    }
}

pub(crate) fn check_pruned(model: &OfsModel) -> Result<()> {
    match model.base.iter().find(|r| r.rhs.is_empty()) {
        Some(r) => Err(Error::UnprunedModel(r.name.clone())),
        None => Ok(()),
    }
}

pub fn similarity_matrix(model: &OfsModel) -> Result<SimilarityMatrix> {
    check_pruned(model)?;
    let n = model.base.len();
    let mut values = vec![vec![Rational::one(); n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let s = similarity(&model.base[i].rhs, &model.base[j].rhs)?;
            values[i][j] = s;
            values[j][i] = s;
        }
    }
    Ok(SimilarityMatrix {
        names: model.base.iter().map(|r| r.name.clone()).collect(),
        values,
    })
}

/// Disjoint blocks of names. Members are sorted within a block and blocks
/// are sorted, so equal partitions compare equal.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Partition {
    pub blocks: Vec<Vec<String>>,
}

impl Partition {
    pub(crate) fn from_blocks(blocks: impl IntoIterator<Item = Vec<String>>) -> Self {
        let mut blocks: Vec<Vec<String>> = blocks
            .into_iter()
            .map(|mut b| {
                b.sort();
                b
            })
            .collect();
        blocks.sort();
        Partition { blocks }
    }

    /// Every block of `self` lies inside some block of `coarser`.
    pub fn refines(&self, coarser: &Partition) -> bool {
        let owner: BTreeMap<&str, usize> = coarser
            .blocks
            .iter()
            .enumerate()
            .flat_map(|(i, b)| b.iter().map(move |n| (n.as_str(), i)))
            .collect();
        self.blocks.iter().all(|b| {
            let first = owner.get(b[0].as_str());
            first.is_some() && b.iter().all(|n| owner.get(n.as_str()) == first)
        })
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let blocks: Vec<String> = self
            .blocks
            .iter()
            .map(|b| format!("{{{}}}", b.join(",")))
            .collect();
        f.write_str(&blocks.join(" "))
    }
}

pub(crate) struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    pub fn find(&mut self, x: usize) -> usize {
        let mut root = x;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        let mut x = x;
        while self.parent[x] != root {
            let next = self.parent[x];
            self.parent[x] = root;
            x = next;
        }
        root
    }

    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        // smaller index becomes the root so groups are keyed by first member
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.parent[hi] = lo;
        true
    }

    /// Groups of indices, each in ascending order, ordered by first member.
    pub fn groups(&mut self) -> Vec<Vec<usize>> {
        let mut by_root: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for i in 0..self.parent.len() {
            let r = self.find(i);
            by_root.entry(r).or_default().push(i);
        }
        by_root.into_values().collect()
    }
}

/// Connected components of the graph joining every pair with `sim ≥ tau`.
pub fn cluster_partition(matrix: &SimilarityMatrix, tau: Rational) -> Partition {
    let mut uf = UnionFind::new(matrix.len());
    for (i, j, s) in matrix.pairs() {
        if s >= tau {
            uf.union(i, j);
        }
    }
    Partition::from_blocks(
        uf.groups()
            .into_iter()
            .map(|g| g.into_iter().map(|i| matrix.names[i].clone()).collect()),
    )
}
