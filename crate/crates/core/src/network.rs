//! The network stage as one call: restrict → bipartite graph → projection → null
//! ensemble → significance → backbone → clusters.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::graph::{build_bipartite, project, BipartiteGraph, Projection};
use crate::ingest::{restrict_multi_outlet, ArticleSet};
use crate::null_model::{
    clusters, edge_significance, filter_network, run_ensemble, EdgeSignificance, EnsembleConfig, Keep,
    ValidatedNetwork,
};
use crate::partition::Partition;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct NetworkSettings {
    pub min_outlets: usize,
    pub ensemble: EnsembleConfig,
    pub threshold: f64,
    /// Signs kept in the backbone. Clusters always use positive edges only.
    pub keep: Keep,
}

impl Default for NetworkSettings {
    fn default() -> Self {
        NetworkSettings {
            min_outlets: 2,
            ensemble: EnsembleConfig::default(),
            threshold: 1.96,
            keep: Keep::Both,
        }
    }
}

#[derive(Debug, Clone)]
pub struct NetworkAnalysis {
    pub articles: ArticleSet,
    pub graph: BipartiteGraph,
    pub projection: Projection,
    pub significance: Vec<EdgeSignificance>,
    pub backbone: ValidatedNetwork,
    pub clusters: Partition,
}

/// Runs the network stage on cleaned articles (contributor ids set).
pub fn analyze(articles: &ArticleSet, settings: &NetworkSettings) -> Result<NetworkAnalysis> {
    let articles = restrict_multi_outlet(articles, settings.min_outlets)?;
    let graph = build_bipartite(&articles);
    analyze_graph(articles, graph, settings)
}

pub fn analyze_graph(articles: ArticleSet, graph: BipartiteGraph, settings: &NetworkSettings) -> Result<NetworkAnalysis> {
    let projection = project(&graph);
    let acc = run_ensemble(&graph, &settings.ensemble)?;
    let significance = edge_significance(&projection, &acc)?;
    let backbone = filter_network(&significance, settings.threshold, settings.keep)?;
    let clusters = clusters(&backbone);
    Ok(NetworkAnalysis {
        articles,
        graph,
        projection,
        significance,
        backbone,
        clusters,
    })
}
