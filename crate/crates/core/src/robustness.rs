//! Sensitivity of the backbone to the Z threshold and to dropping single outlets.

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ingest::ArticleSet;
use crate::network::{analyze, NetworkSettings};
use crate::null_model::{clusters, filter_network, EdgeSignificance, Keep, Sign, SignedEdge, ValidatedNetwork};
use crate::partition::Partition;
use crate::seed;

pub const DEFAULT_THRESHOLDS: [f64; 4] = [1.64, 1.96, 2.58, 3.29];

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct EdgeKey {
    pub from: String,
    pub to: String,
    pub sign: Sign,
}

impl From<&SignedEdge> for EdgeKey {
    fn from(e: &SignedEdge) -> Self {
        EdgeKey {
            from: e.from.clone(),
            to: e.to.clone(),
            sign: e.sign,
        }
    }
}

fn keys(v: &ValidatedNetwork) -> BTreeSet<EdgeKey> {
    v.edges.iter().map(EdgeKey::from).collect()
}

fn components(v: &ValidatedNetwork) -> Vec<Vec<String>> {
    clusters(v)
        .blocks()
        .into_iter()
        .map(|b| b.into_iter().collect())
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepEntry {
    pub threshold: f64,
    pub edges: Vec<SignedEdge>,
    pub gained: Vec<EdgeKey>,
    pub lost: Vec<EdgeKey>,
    /// Positive-edge components, each sorted, listed in sorted order.
    pub components: Vec<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub baseline: f64,
    pub entries: Vec<SweepEntry>,
    /// Edge sets shrink as the threshold grows.
    pub nested: bool,
}

/// Backbones (both signs) at each threshold, diffed against the `baseline` threshold.
pub fn threshold_sweep(sigs: &[EdgeSignificance], thresholds: &[f64], baseline: f64) -> Result<SweepReport> {
    if thresholds.is_empty() {
        return Err(Error::Argument("no thresholds given".into()));
    }
    if thresholds.iter().any(|t| t.is_nan() || *t <= 0.0) || thresholds.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Argument("thresholds must be positive and strictly increasing".into()));
    }
    let base = keys(&filter_network(sigs, baseline, Keep::Both)?);
    let networks = thresholds
        .iter()
        .map(|&t| filter_network(sigs, t, Keep::Both))
        .collect::<Result<Vec<_>>>()?;
    let nested = networks.windows(2).all(|w| keys(&w[1]).is_subset(&keys(&w[0])));
    let entries = networks
        .into_iter()
        .map(|v| {
            let k = keys(&v);
            SweepEntry {
                threshold: v.threshold,
                gained: k.difference(&base).cloned().collect(),
                lost: base.difference(&k).cloned().collect(),
                components: components(&v),
                edges: v.edges,
            }
        })
        .collect();
    Ok(SweepReport {
        baseline,
        entries,
        nested,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StructureComparison {
    pub edges_only_in_base: Vec<EdgeKey>,
    pub edges_only_in_variant: Vec<EdgeKey>,
    pub components_only_in_base: Vec<Vec<String>>,
    pub components_only_in_variant: Vec<Vec<String>>,
    pub shared_nodes: usize,
    /// Fraction of shared-node pairs on whose co-membership both structures agree;
    /// `None` when fewer than two nodes are shared.
    pub agreement: Option<f64>,
}

/// Edge and component differences plus pairwise co-membership agreement on shared nodes.
pub fn compare_structures(base: &ValidatedNetwork, variant: &ValidatedNetwork) -> StructureComparison {
    let (kb, kv) = (keys(base), keys(variant));
    let (cb, cv): (BTreeSet<Vec<String>>, BTreeSet<Vec<String>>) =
        (components(base).into_iter().collect(), components(variant).into_iter().collect());
    let (pb, pv) = (clusters(base), clusters(variant));
    let shared: Vec<&str> = pb.nodes().filter(|n| pv.label(n).is_some()).collect();
    let mut agree = 0usize;
    let mut total = 0usize;
    for i in 0..shared.len() {
        for j in i + 1..shared.len() {
            let same_b = pb.label(shared[i]) == pb.label(shared[j]);
            let same_v = pv.label(shared[i]) == pv.label(shared[j]);
            total += 1;
            if same_b == same_v {
                agree += 1;
            }
        }
    }
    StructureComparison {
        edges_only_in_base: kb.difference(&kv).cloned().collect(),
        edges_only_in_variant: kv.difference(&kb).cloned().collect(),
        components_only_in_base: cb.difference(&cv).cloned().collect(),
        components_only_in_variant: cv.difference(&cb).cloned().collect(),
        shared_nodes: shared.len(),
        agreement: (total > 0).then(|| agree as f64 / total as f64),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AblationEntry {
    pub removed: String,
    pub seed: u64,
    pub network: ValidatedNetwork,
    pub clusters: BTreeMap<String, Vec<String>>,
    /// Positive significant edges joining different reference clusters.
    pub cross_cluster_edges: usize,
    pub comparison: StructureComparison,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AblationReport {
    pub entries: Vec<AblationEntry>,
}

/// Drops one outlet's articles and reruns the network stage from the multi-outlet
/// restriction onward, with an ensemble seed derived from the outlet id.
pub fn leave_one_out(
    articles: &ArticleSet,
    outlet: &str,
    settings: &NetworkSettings,
    baseline: &ValidatedNetwork,
    reference: &Partition,
) -> Result<AblationEntry> {
    if !articles.iter().any(|r| r.outlet_id == outlet) {
        return Err(Error::Argument(format!("outlet `{}` is not in the corpus", outlet)));
    }
    let remaining = articles.filtered(&format!("without outlet {}", outlet), |r| r.outlet_id != outlet);
    let seed = seed::derive_str(settings.ensemble.master_seed, seed::tags::ABLATION, outlet);
    let mut s = settings.clone();
    s.ensemble.master_seed = seed;
    let restricted = crate::ingest::restrict_multi_outlet(&remaining, s.min_outlets)?;
    if restricted.is_empty() {
        return Err(Error::Data(format!("removing `{}` leaves no multi-outlet contributors", outlet)));
    }
    let analysis = analyze(&restricted, &s)?;
    let cross = analysis
        .backbone
        .positive_edges()
        .filter(|e| match (reference.label(&e.from), reference.label(&e.to)) {
            (Some(a), Some(b)) => a != b,
            _ => false,
        })
        .count();
    Ok(AblationEntry {
        removed: outlet.to_string(),
        seed,
        comparison: compare_structures(baseline, &analysis.backbone),
        clusters: analysis.clusters.groups(),
        cross_cluster_edges: cross,
        network: analysis.backbone,
    })
}

/// [`leave_one_out`] for every outlet in `outlets`, in parallel, reported in id order.
pub fn ablation_report(
    articles: &ArticleSet,
    outlets: &[String],
    settings: &NetworkSettings,
    baseline: &ValidatedNetwork,
    reference: &Partition,
) -> Result<AblationReport> {
    let mut sorted: Vec<&String> = outlets.iter().collect();
    sorted.sort();
    sorted.dedup();
    let entries = sorted
        .par_iter()
        .map(|o| leave_one_out(articles, o, settings, baseline, reference))
        .collect::<Result<Vec<_>>>()?;
    Ok(AblationReport { entries })
}
