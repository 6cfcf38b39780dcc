use std::collections::BTreeMap;
use std::fmt::Write as _;

use super::similarity::{cluster_partition, Partition, SimilarityMatrix, UnionFind};
use crate::numeric::{format_decimal, format_exact, Rational};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DendroNode {
    Leaf(String),
    /// Children unite at `height`: the largest threshold at which they are
    /// one cluster. Ties produce more than two children.
    Merge {
        height: Rational,
        children: Vec<DendroNode>,
    },
}

impl DendroNode {
    pub fn leaves(&self) -> Vec<&str> {
        match self {
            DendroNode::Leaf(n) => vec![n.as_str()],
            DendroNode::Merge { children, .. } => children.iter().flat_map(|c| c.leaves()).collect(),
        }
    }

    fn first_leaf(&self) -> &str {
        match self {
            DendroNode::Leaf(n) => n,
            DendroNode::Merge { children, .. } => children[0].first_leaf(),
        }
    }

    fn cut_into(&self, tau: Rational, out: &mut Vec<Vec<String>>) {
        match self {
            DendroNode::Merge { height, children } if *height < tau => {
                for c in children {
                    c.cut_into(tau, out);
                }
            }
            node => out.push(node.leaves().into_iter().map(str::to_string).collect()),
        }
    }
}

/// Single-linkage merge tree with exact heights.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dendrogram {
    pub root: Option<DendroNode>,
}

impl Dendrogram {
    /// Builds the tree by uniting clusters over pairs in descending
    /// similarity. Pairs of equal similarity are handled together, so a tie
    /// yields one multiway node. Zero-similarity pairs join at height 0.
    pub fn build(matrix: &SimilarityMatrix) -> Dendrogram {
        let n = matrix.len();
        if n == 0 {
            return Dendrogram { root: None };
        }
        let mut by_height: BTreeMap<Rational, Vec<(usize, usize)>> = BTreeMap::new();
        for (i, j, s) in matrix.pairs() {
            by_height.entry(s).or_default().push((i, j));
        }
        // current cluster node for each union-find root
        let mut nodes: BTreeMap<usize, DendroNode> = (0..n)
            .map(|i| (i, DendroNode::Leaf(matrix.names[i].clone())))
            .collect();
        let mut uf = UnionFind::new(n);
        for (height, pairs) in by_height.into_iter().rev() {
            // which current clusters this height joins, keyed by old root
            let before: Vec<usize> = (0..n).map(|i| uf.find(i)).collect();
            let mut any = false;
            for (i, j) in pairs {
                any |= uf.union(i, j);
            }
            if !any {
                continue;
            }
            let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
            for (i, &old) in before.iter().enumerate() {
                if old == i {
                    groups.entry(uf.find(i)).or_default().push(old);
                }
            }
            for (new_root, olds) in groups.into_iter().filter(|(_, o)| o.len() > 1) {
                let mut children: Vec<DendroNode> = olds
                    .iter()
                    .map(|o| nodes.remove(o).expect("cluster node"))
                    .collect();
                children.sort_by(|a, b| a.first_leaf().cmp(b.first_leaf()));
                // a child merging at the same height is flattened into this node
                let children = children
                    .into_iter()
                    .flat_map(|c| match c {
                        DendroNode::Merge { height: h, children } if h == height => children,
                        other => vec![other],
                    })
                    .collect::<Vec<_>>();
                let mut children = children;
                children.sort_by(|a, b| a.first_leaf().cmp(b.first_leaf()));
                nodes.insert(new_root, DendroNode::Merge { height, children });
            }
        }
        let root = nodes.into_values().next();
        Dendrogram { root }
    }

    /// Clusters at threshold `tau`: subtrees whose height reaches `tau`.
    pub fn cut(&self, tau: Rational) -> Partition {
        let mut blocks = Vec::new();
        if let Some(root) = &self.root {
            root.cut_into(tau, &mut blocks);
        }
        Partition::from_blocks(blocks)
    }

    /// Partition at every threshold of `grid`.
    pub fn sweep(&self, grid: &[Rational]) -> Vec<(Rational, Partition)> {
        grid.iter().map(|&t| (t, self.cut(t))).collect()
    }

    /// Indented tree, one node per line; heights shown exactly and with
    /// `places` decimals.
    pub fn to_text(&self, places: u32) -> String {
        fn go(node: &DendroNode, depth: usize, places: u32, out: &mut String) {
            let pad = "  ".repeat(depth);
            match node {
                DendroNode::Leaf(n) => {
                    let _ = writeln!(out, "{pad}{n}");
                }
                DendroNode::Merge { height, children } => {
                    let _ = writeln!(
                        out,
                        "{pad}{} ({})",
                        format_exact(height),
                        format_decimal(height, places)
                    );
                    for c in children {
                        go(c, depth + 1, places, out);
                    }
                }
            }
        }
        let mut out = String::new();
        if let Some(root) = &self.root {
            go(root, 0, places, &mut out);
        }
        out
    }

    /// Graphviz rendering.
    pub fn to_dot(&self, places: u32) -> String {
        fn go(node: &DendroNode, places: u32, next: &mut usize, out: &mut String) -> usize {
            let id = *next;
            *next += 1;
            match node {
                DendroNode::Leaf(n) => {
                    let _ = writeln!(out, "  n{id} [label=\"{n}\", shape=box];");
                }
                DendroNode::Merge { height, children } => {
                    let _ = writeln!(
                        out,
                        "  n{id} [label=\"{} ({})\"];",
                        format_exact(height),
                        format_decimal(height, places)
                    );
                    for c in children {
                        let child = go(c, places, next, out);
                        let _ = writeln!(out, "  n{id} -> n{child};");
                    }
                }
            }
            id
        }
        let mut out = String::from("digraph dendrogram {\n");
        if let Some(root) = &self.root {
            go(root, places, &mut 0, &mut out);
        }
        out.push_str("}\n");
        out
    }
}

/// TSV of the partition at each threshold: exact τ, decimal τ, block
/// count, blocks.
pub fn sweep_tsv(sweep: &[(Rational, Partition)], places: u32) -> String {
    let mut out = String::from("tau\ttau_decimal\tclusters\tpartition\n");
    for (tau, p) in sweep {
        let _ = writeln!(
            out,
            "{}\t{}\t{}\t{}",
            format_exact(tau),
            format_decimal(tau, places),
            p.blocks.len(),
            p
        );
    }
    out
}

/// Sweep computed directly from the matrix rather than the tree.
pub fn sweep_partitions(matrix: &SimilarityMatrix, grid: &[Rational]) -> Vec<(Rational, Partition)> {
    grid.iter()
        .map(|&t| (t, cluster_partition(matrix, t)))
        .collect()
}
