//! Contributor–outlet bipartite graph and its weighted one-mode outlet projection.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ingest::ArticleSet;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    /// Contributors.
    Left,
    /// Outlets.
    Right,
}

/// A simple bipartite graph. Nodes are identified by opaque string ids and stored sorted;
/// edges are `(left index, right index)` pairs, sorted and unique.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BipartiteGraph {
    left: Vec<String>,
    right: Vec<String>,
    edges: Vec<(u32, u32)>,
}

impl BipartiteGraph {
    /// Builds a graph from `(left id, right id)` pairs; duplicates collapse to one edge.
    pub fn from_pairs<'a, I>(pairs: I) -> Self
    where
        I: IntoIterator<Item = (&'a str, &'a str)>,
    {
        let set: BTreeSet<(&str, &str)> = pairs.into_iter().collect();
        let left: Vec<String> = set
            .iter()
            .map(|(l, _)| *l)
            .collect::<BTreeSet<_>>()
            .into_iter()
            .map(String::from)
            .collect();
        let right: Vec<String> = set
            .iter()
            .map(|(_, r)| *r)
            .collect::<BTreeSet<_>>()
            .into_iter()
            .map(String::from)
            .collect();
        let li: HashMap<&str, u32> = left.iter().enumerate().map(|(i, s)| (s.as_str(), i as u32)).collect();
        let ri: HashMap<&str, u32> = right.iter().enumerate().map(|(i, s)| (s.as_str(), i as u32)).collect();
        let mut edges: Vec<(u32, u32)> = set.iter().map(|(l, r)| (li[l], ri[r])).collect();
        edges.sort_unstable();
        BipartiteGraph { left, right, edges }
    }

    /// Same node sets, different edge list. Used by the sampler; edges are re-sorted.
    pub(crate) fn with_edges(&self, mut edges: Vec<(u32, u32)>) -> Self {
        edges.sort_unstable();
        BipartiteGraph {
            left: self.left.clone(),
            right: self.right.clone(),
            edges,
        }
    }

    pub fn left_nodes(&self) -> &[String] {
        &self.left
    }

    pub fn right_nodes(&self) -> &[String] {
        &self.right
    }

    pub fn edges(&self) -> &[(u32, u32)] {
        &self.edges
    }

    /// Edge count `m`.
    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn edge_ids(&self) -> impl Iterator<Item = (&str, &str)> {
        self.edges
            .iter()
            .map(move |&(l, r)| (self.left[l as usize].as_str(), self.right[r as usize].as_str()))
    }

    pub fn contains(&self, left: &str, right: &str) -> bool {
        match (
            self.left.binary_search_by(|s| s.as_str().cmp(left)),
            self.right.binary_search_by(|s| s.as_str().cmp(right)),
        ) {
            (Ok(l), Ok(r)) => self.edges.binary_search(&(l as u32, r as u32)).is_ok(),
            _ => false,
        }
    }

    /// Degrees indexed like `left_nodes()` / `right_nodes()`.
    pub fn degrees(&self, side: Side) -> Vec<usize> {
        let n = match side {
            Side::Left => self.left.len(),
            Side::Right => self.right.len(),
        };
        let mut deg = vec![0usize; n];
        for &(l, r) in &self.edges {
            match side {
                Side::Left => deg[l as usize] += 1,
                Side::Right => deg[r as usize] += 1,
            }
        }
        deg
    }

    /// Node id → degree for one side.
    pub fn degree_sequence(&self, side: Side) -> BTreeMap<String, usize> {
        let names = match side {
            Side::Left => &self.left,
            Side::Right => &self.right,
        };
        names.iter().cloned().zip(self.degrees(side)).collect()
    }

    /// Drops one right-side node and every edge touching it, plus left nodes left isolated.
    pub fn without_right(&self, right: &str) -> BipartiteGraph {
        BipartiteGraph::from_pairs(self.edge_ids().filter(|(_, r)| *r != right))
    }

    pub fn read_edge_list(path: &Path) -> Result<Self> {
        let mut rdr = crate::ingest::csv_reader(crate::ingest::open(path)?);
        let mut pairs = Vec::new();
        for row in rdr.records() {
            let row = row?;
            let line = row.position().map(|p| p.line()).unwrap_or(0);
            match (row.get(0), row.get(1)) {
                (Some(c), Some(o)) if !c.is_empty() && !o.is_empty() => {
                    pairs.push((c.to_string(), o.to_string()))
                }
                _ => {
                    return Err(Error::Malformed {
                        path: path.display().to_string(),
                        line,
                        message: "expected contributor_id,outlet_id".into(),
                    })
                }
            }
        }
        Ok(BipartiteGraph::from_pairs(pairs.iter().map(|(a, b)| (a.as_str(), b.as_str()))))
    }
}

/// Edge `(c, o)` exists iff contributor `c` has at least one record in outlet `o`.
/// Records without a contributor id are ignored.
pub fn build_bipartite(articles: &ArticleSet) -> BipartiteGraph {
    BipartiteGraph::from_pairs(
        articles
            .iter()
            .filter_map(|r| r.contributor_id.as_deref().map(|c| (c, r.outlet_id.as_str()))),
    )
}

/// Index of the unordered pair `(i, j)`, `i < j < n`, in row-major upper-triangular order.
#[inline]
pub fn pair_index(i: usize, j: usize, n: usize) -> usize {
    debug_assert!(i < j && j < n);
    i * (2 * n - i - 1) / 2 + (j - i - 1)
}

pub fn pair_count(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

/// Dense shared-neighbour counts over right-node pairs, in [`pair_index`] order.
/// `edges` must be sorted by left index.
pub(crate) fn co_occurrence_counts(edges: &[(u32, u32)], n_right: usize, out: &mut [u32]) {
    out.iter_mut().for_each(|w| *w = 0);
    let mut start = 0;
    while start < edges.len() {
        let left = edges[start].0;
        let mut end = start;
        while end < edges.len() && edges[end].0 == left {
            end += 1;
        }
        let group = &edges[start..end];
        for a in 0..group.len() {
            for b in a + 1..group.len() {
                let (x, y) = (group[a].1 as usize, group[b].1 as usize);
                let (i, j) = if x < y { (x, y) } else { (y, x) };
                out[pair_index(i, j, n_right)] += 1;
            }
        }
        start = end;
    }
}

/// Weighted outlet–outlet graph: weight = number of shared contributors.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Projection {
    nodes: Vec<String>,
    /// Dense upper-triangular weights in [`pair_index`] order, zeros included.
    weights: Vec<u32>,
}

impl Projection {
    pub fn nodes(&self) -> &[String] {
        &self.nodes
    }

    pub fn node_index(&self, id: &str) -> Option<usize> {
        self.nodes.binary_search_by(|n| n.as_str().cmp(id)).ok()
    }

    /// Symmetric weight; `None` for unknown nodes or `a == b`.
    pub fn weight(&self, a: &str, b: &str) -> Option<u32> {
        let (i, j) = (self.node_index(a)?, self.node_index(b)?);
        self.weight_idx(i, j)
    }

    pub fn weight_idx(&self, i: usize, j: usize) -> Option<u32> {
        match i.cmp(&j) {
            std::cmp::Ordering::Equal => None,
            std::cmp::Ordering::Less => Some(self.weights[pair_index(i, j, self.nodes.len())]),
            std::cmp::Ordering::Greater => Some(self.weights[pair_index(j, i, self.nodes.len())]),
        }
    }

    /// Every unordered node pair `(i, j, weight)` with `i < j`, zero-weight pairs included.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize, u32)> + '_ {
        let n = self.nodes.len();
        (0..n).flat_map(move |i| (i + 1..n).map(move |j| (i, j, self.weights[pair_index(i, j, n)])))
    }

    /// Pairs with positive weight only.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, u32)> + '_ {
        self.pairs().filter(|&(_, _, w)| w > 0)
    }

    pub fn total_weight(&self) -> u64 {
        self.weights.iter().map(|&w| u64::from(w)).sum()
    }
}

/// One-mode projection onto the right (outlet) side.
pub fn project(g: &BipartiteGraph) -> Projection {
    let n = g.right.len();
    let mut weights = vec![0u32; pair_count(n)];
    co_occurrence_counts(&g.edges, n, &mut weights);
    Projection {
        nodes: g.right.clone(),
        weights,
    }
}
