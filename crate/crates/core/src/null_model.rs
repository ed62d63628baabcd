//! Degree-preserving null model for bipartite graphs.
//!
//! Random graphs are drawn with an edge-swap Markov chain: pick two distinct edges
//! `(a, x)`, `(b, y)` uniformly and, if `a != b`, `x != y` and neither `(a, y)` nor
//! `(b, x)` exists, rewire them to `(a, y)`, `(b, x)`. Rejected proposals still count
//! as attempts, so mixing is measured in attempts rather than successful swaps.
//!
//! An ensemble is a set of such graphs, each projected onto the outlet side; every
//! outlet pair keeps a histogram of its sampled weights. From the histogram we get
//! the null mean, the sample standard deviation, a Z-score and an add-one empirical
//! p-value for the observed weight.

use std::collections::{BTreeSet, HashSet};

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{co_occurrence_counts, pair_count, pair_index, BipartiteGraph, Projection, Side};
use crate::partition::Partition;
use crate::seed;

/// Membership test for the current edge set of a chain.
enum Adjacency {
    Dense { words_per_row: usize, bits: Vec<u64> },
    Sparse(HashSet<u64>),
}

const DENSE_LIMIT_BITS: usize = 1 << 28;

impl Adjacency {
    fn new(n_left: usize, n_right: usize, edges: &[(u32, u32)]) -> Self {
        let words_per_row = n_right.div_ceil(64).max(1);
        let mut adj = if n_left.saturating_mul(words_per_row * 64) <= DENSE_LIMIT_BITS {
            Adjacency::Dense {
                words_per_row,
                bits: vec![0; n_left * words_per_row],
            }
        } else {
            Adjacency::Sparse(HashSet::with_capacity(edges.len()))
        };
        for &(l, r) in edges {
            adj.insert(l, r);
        }
        adj
    }

    #[inline]
    fn key(l: u32, r: u32) -> u64 {
        (u64::from(l) << 32) | u64::from(r)
    }

    #[inline]
    fn contains(&self, l: u32, r: u32) -> bool {
        match self {
            Adjacency::Dense { words_per_row, bits } => {
                let w = l as usize * words_per_row + (r as usize >> 6);
                bits[w] >> (r & 63) & 1 == 1
            }
            Adjacency::Sparse(set) => set.contains(&Self::key(l, r)),
        }
    }

    #[inline]
    fn insert(&mut self, l: u32, r: u32) {
        match self {
            Adjacency::Dense { words_per_row, bits } => {
                bits[l as usize * *words_per_row + (r as usize >> 6)] |= 1 << (r & 63);
            }
            Adjacency::Sparse(set) => {
                set.insert(Self::key(l, r));
            }
        }
    }

    #[inline]
    fn remove(&mut self, l: u32, r: u32) {
        match self {
            Adjacency::Dense { words_per_row, bits } => {
                bits[l as usize * *words_per_row + (r as usize >> 6)] &= !(1 << (r & 63));
            }
            Adjacency::Sparse(set) => {
                set.remove(&Self::key(l, r));
            }
        }
    }
}

/// Mutable state of one swap chain.
struct SwapChain {
    edges: Vec<(u32, u32)>,
    adjacency: Adjacency,
}

impl SwapChain {
    fn new(g: &BipartiteGraph) -> Self {
        SwapChain {
            edges: g.edges().to_vec(),
            adjacency: Adjacency::new(g.left_nodes().len(), g.right_nodes().len(), g.edges()),
        }
    }

    /// Runs `attempts` swap proposals; returns the number accepted.
    fn run<R: Rng>(&mut self, attempts: usize, rng: &mut R) -> usize {
        let m = self.edges.len();
        if m < 2 {
            return 0;
        }
        let mut accepted = 0;
        for _ in 0..attempts {
            let i = rng.gen_range(0..m);
            let mut j = rng.gen_range(0..m - 1);
            if j >= i {
                j += 1;
            }
            let (a, x) = self.edges[i];
            let (b, y) = self.edges[j];
            if a == b || x == y || self.adjacency.contains(a, y) || self.adjacency.contains(b, x) {
                continue;
            }
            self.adjacency.remove(a, x);
            self.adjacency.remove(b, y);
            self.adjacency.insert(a, y);
            self.adjacency.insert(b, x);
            self.edges[i] = (a, y);
            self.edges[j] = (b, x);
            accepted += 1;
        }
        accepted
    }

    fn sorted_edges(&self) -> Vec<(u32, u32)> {
        let mut e = self.edges.clone();
        e.sort_unstable();
        e
    }
}

/// Applies `attempts` swap proposals to a copy of `g`, seeded by `rng_seed`.
pub fn randomize(g: &BipartiteGraph, attempts: usize, rng_seed: u64) -> BipartiteGraph {
    let mut chain = SwapChain::new(g);
    let mut rng = seed::rng(rng_seed, seed::tags::SWAP_SAMPLE, 0);
    chain.run(attempts, &mut rng);
    g.with_edges(chain.edges)
}

/// `⌈m · ln m⌉` swap attempts per sample; 0 for an empty graph.
pub fn default_attempts(g: &BipartiteGraph) -> usize {
    attempts_for(g.m())
}

pub fn attempts_for(m: usize) -> usize {
    if m == 0 {
        return 0;
    }
    let m = m as f64;
    (m * m.ln()).ceil() as usize
}

/// How to draw the ensemble.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EnsembleConfig {
    pub n_samples: usize,
    pub master_seed: u64,
    /// Swap attempts between consecutive samples; `None` means [`default_attempts`].
    pub attempts: Option<usize>,
    /// Samples per independent chain. Part of the result's identity: changing it
    /// changes the ensemble, while the thread count never does.
    pub chain_len: usize,
}

impl EnsembleConfig {
    pub fn new(n_samples: usize, master_seed: u64) -> Self {
        EnsembleConfig {
            n_samples,
            master_seed,
            attempts: None,
            chain_len: 250,
        }
    }
}

impl Default for EnsembleConfig {
    fn default() -> Self {
        EnsembleConfig::new(10_000, 0)
    }
}

/// Per-pair sampled weight distributions over the outlet projection.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnsembleAccumulator {
    nodes: Vec<String>,
    /// One histogram per pair in `pair_index` order: `hist[w]` = samples with weight `w`.
    histograms: Vec<Vec<u64>>,
    pub n_samples: usize,
    pub master_seed: u64,
    pub swap_attempts_per_sample: usize,
}

impl EnsembleAccumulator {
    fn empty(nodes: Vec<String>, caps: &[usize], master_seed: u64, attempts: usize) -> Self {
        EnsembleAccumulator {
            histograms: caps.iter().map(|&c| vec![0; c + 1]).collect(),
            nodes,
            n_samples: 0,
            master_seed,
            swap_attempts_per_sample: attempts,
        }
    }

    fn add_sample(&mut self, weights: &[u32]) {
        for (h, &w) in self.histograms.iter_mut().zip(weights) {
            h[w as usize] += 1;
        }
        self.n_samples += 1;
    }

    /// Adds another accumulator over the same nodes. Associative and commutative.
    pub fn merge(&mut self, other: &EnsembleAccumulator) -> Result<()> {
        if self.nodes != other.nodes {
            return Err(Error::Internal("merging accumulators over different nodes".into()));
        }
        for (a, b) in self.histograms.iter_mut().zip(&other.histograms) {
            for (x, y) in a.iter_mut().zip(b) {
                *x += y;
            }
        }
        self.n_samples += other.n_samples;
        Ok(())
    }

    pub fn nodes(&self) -> &[String] {
        &self.nodes
    }

    /// Number of outlet pairs covered; always `C(|outlets|, 2)`.
    pub fn pair_count(&self) -> usize {
        self.histograms.len()
    }

    /// Sampled weight histogram for a pair of node indices.
    pub fn histogram(&self, i: usize, j: usize) -> Option<&[u64]> {
        let (i, j) = if i < j { (i, j) } else { (j, i) };
        if i == j || j >= self.nodes.len() {
            return None;
        }
        self.histograms
            .get(pair_index(i, j, self.nodes.len()))
            .map(Vec::as_slice)
    }

    /// `(Σw, Σw²)` over samples for a pair.
    pub fn sums(&self, i: usize, j: usize) -> Option<(u64, u64)> {
        self.histogram(i, j).map(|h| {
            h.iter().enumerate().fold((0, 0), |(s, q), (w, &c)| {
                let w = w as u64;
                (s + w * c, q + w * w * c)
            })
        })
    }
}

fn check_degrees(edges: &[(u32, u32)], left: &[usize], right: &[usize]) -> Result<()> {
    let mut l = vec![0usize; left.len()];
    let mut r = vec![0usize; right.len()];
    for &(a, b) in edges {
        l[a as usize] += 1;
        r[b as usize] += 1;
    }
    if l != left || r != right {
        return Err(Error::Internal("swap chain changed a degree sequence".into()));
    }
    Ok(())
}

/// Draws `n_samples` null graphs and accumulates projected pair weights.
///
/// Samples are split into contiguous chains of `chain_len`. Each chain starts at the
/// observed graph, takes one stride of burn-in that is discarded, then records a
/// sample after every further stride. The RNG stream of sample `k` is derived from
/// `(master_seed, k)`, and a chain's burn-in stream from `(master_seed, chain)`, so
/// the result does not depend on how chains are scheduled over threads.
pub fn run_ensemble(g: &BipartiteGraph, config: &EnsembleConfig) -> Result<EnsembleAccumulator> {
    if config.n_samples < 1 {
        return Err(Error::Argument("n_samples must be at least 1".into()));
    }
    if config.chain_len < 1 {
        return Err(Error::Argument("chain_len must be at least 1".into()));
    }
    let attempts = config.attempts.unwrap_or_else(|| default_attempts(g));
    let n_right = g.right_nodes().len();
    let left_deg = g.degrees(Side::Left);
    let right_deg = g.degrees(Side::Right);
    let caps: Vec<usize> = (0..n_right)
        .flat_map(|i| (i + 1..n_right).map(move |j| (i, j)))
        .map(|(i, j)| right_deg[i].min(right_deg[j]))
        .collect();
    let template = EnsembleAccumulator::empty(g.right_nodes().to_vec(), &caps, config.master_seed, attempts);

    let n_chains = config.n_samples.div_ceil(config.chain_len);
    let partials: Vec<EnsembleAccumulator> = (0..n_chains)
        .into_par_iter()
        .map(|c| {
            let first = c * config.chain_len;
            let last = (first + config.chain_len).min(config.n_samples);
            let mut acc = template.clone();
            let mut chain = SwapChain::new(g);
            let mut weights = vec![0u32; pair_count(n_right)];
            let mut burn = seed::rng(config.master_seed, seed::tags::SWAP_BURN_IN, c as u64);
            chain.run(attempts, &mut burn);
            for k in first..last {
                let mut rng = seed::rng(config.master_seed, seed::tags::SWAP_SAMPLE, k as u64);
                chain.run(attempts, &mut rng);
                let edges = chain.sorted_edges();
                check_degrees(&edges, &left_deg, &right_deg)?;
                co_occurrence_counts(&edges, n_right, &mut weights);
                acc.add_sample(&weights);
            }
            Ok(acc)
        })
        .collect::<Result<_>>()?;

    let mut total = template;
    for p in &partials {
        total.merge(p)?;
    }
    Ok(total)
}

/// Null statistics for one outlet pair.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EdgeSignificance {
    pub from: String,
    pub to: String,
    pub w_obs: u32,
    pub null_mean: f64,
    pub null_std: f64,
    /// `None` when the null standard deviation is zero.
    pub z: Option<f64>,
    /// Two-sided empirical p-value with add-one correction.
    pub p_emp: f64,
    pub n_samples: usize,
}

impl EdgeSignificance {
    pub fn is_degenerate(&self) -> bool {
        self.z.is_none()
    }
}

/// Scores every projection pair (zero-weight pairs included) against the ensemble.
pub fn edge_significance(p: &Projection, acc: &EnsembleAccumulator) -> Result<Vec<EdgeSignificance>> {
    if acc.n_samples < 1 {
        return Err(Error::Argument("ensemble has no samples".into()));
    }
    if p.nodes() != acc.nodes() {
        return Err(Error::Internal(
            "projection nodes are not covered by the ensemble accumulator".into(),
        ));
    }
    let n = acc.n_samples as i128;
    p.pairs()
        .map(|(i, j, w_obs)| {
            let hist = acc
                .histogram(i, j)
                .ok_or_else(|| Error::Internal(format!("pair ({}, {}) missing from accumulator", i, j)))?;
            let (sum, sum_sq) = acc.sums(i, j).unwrap_or_default();
            let (sum, sum_sq) = (sum as i128, sum_sq as i128);
            let null_mean = sum as f64 / n as f64;
            // exact integer form of the n−1 variance
            let null_std = if n > 1 {
                let num = n * sum_sq - sum * sum;
                (num as f64 / (n * (n - 1)) as f64).max(0.0).sqrt()
            } else {
                0.0
            };
            let z = if null_std > 0.0 {
                Some((w_obs as f64 - null_mean) / null_std)
            } else {
                None
            };
            let obs_dev = (n * w_obs as i128 - sum).abs();
            let extreme: u64 = hist
                .iter()
                .enumerate()
                .filter(|(w, _)| (n * *w as i128 - sum).abs() >= obs_dev)
                .map(|(_, &c)| c)
                .sum();
            Ok(EdgeSignificance {
                from: p.nodes()[i].clone(),
                to: p.nodes()[j].clone(),
                w_obs,
                null_mean,
                null_std,
                z,
                p_emp: (1 + extreme) as f64 / (acc.n_samples + 1) as f64,
                n_samples: acc.n_samples,
            })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Keep {
    Positive,
    Negative,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sign {
    Negative,
    Positive,
}

impl Sign {
    pub fn as_str(self) -> &'static str {
        match self {
            Sign::Positive => "+",
            Sign::Negative => "-",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SignedEdge {
    pub from: String,
    pub to: String,
    pub sign: Sign,
    pub z: f64,
    /// Observed shared-contributor count.
    pub weight: u32,
}

/// Significance-filtered backbone.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidatedNetwork {
    pub nodes: Vec<String>,
    pub edges: Vec<SignedEdge>,
    pub threshold: f64,
}

impl ValidatedNetwork {
    pub fn positive_edges(&self) -> impl Iterator<Item = &SignedEdge> {
        self.edges.iter().filter(|e| e.sign == Sign::Positive)
    }

    /// `(from, to, sign)` keys, for set comparisons.
    pub fn edge_keys(&self) -> BTreeSet<(String, String, Sign)> {
        self.edges
            .iter()
            .map(|e| (e.from.clone(), e.to.clone(), e.sign))
            .collect()
    }

    pub fn contains_node(&self, id: &str) -> bool {
        self.nodes.iter().any(|n| n == id)
    }
}

/// Keeps edges with `z > θ` (positive), `z < −θ` (negative) or either. Degenerate pairs never pass.
pub fn filter_network(sigs: &[EdgeSignificance], threshold: f64, keep: Keep) -> Result<ValidatedNetwork> {
    if threshold.is_nan() || threshold <= 0.0 {
        return Err(Error::Argument(format!("threshold must be positive, got {}", threshold)));
    }
    let nodes: BTreeSet<&str> = sigs
        .iter()
        .flat_map(|s| [s.from.as_str(), s.to.as_str()])
        .collect();
    let edges = sigs
        .iter()
        .filter_map(|s| {
            let z = s.z?;
            let sign = if z > threshold {
                Sign::Positive
            } else if z < -threshold {
                Sign::Negative
            } else {
                return None;
            };
            let wanted = matches!(
                (keep, sign),
                (Keep::Both, _) | (Keep::Positive, Sign::Positive) | (Keep::Negative, Sign::Negative)
            );
            wanted.then(|| SignedEdge {
                from: s.from.clone(),
                to: s.to.clone(),
                sign,
                z,
                weight: s.w_obs,
            })
        })
        .collect();
    Ok(ValidatedNetwork {
        nodes: nodes.into_iter().map(String::from).collect(),
        edges,
        threshold,
    })
}

/// Connected components of the positive-edge subgraph; isolates become singletons.
///
/// Components are labelled `cluster_1`, `cluster_2`, … by decreasing size, ties by
/// smallest member id.
pub fn clusters(v: &ValidatedNetwork) -> Partition {
    let n = v.nodes.len();
    let index = |id: &str| v.nodes.binary_search_by(|x| x.as_str().cmp(id)).ok();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for e in v.positive_edges() {
        if let (Some(a), Some(b)) = (index(&e.from), index(&e.to)) {
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            if ra != rb {
                parent[ra.max(rb)] = ra.min(rb);
            }
        }
    }
    let mut groups: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
    for i in 0..n {
        let r = find(&mut parent, i);
        groups.entry(r).or_default().push(i);
    }
    let mut groups: Vec<Vec<usize>> = groups.into_values().collect();
    groups.sort_by(|a, b| b.len().cmp(&a.len()).then(a[0].cmp(&b[0])));
    Partition::from_labels(groups.iter().enumerate().flat_map(|(k, members)| {
        members
            .iter()
            .map(move |&i| (v.nodes[i].clone(), format!("cluster_{}", k + 1)))
    }))
}
