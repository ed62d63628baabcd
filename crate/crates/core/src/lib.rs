//! Statistically validated outlet networks from contributor co-publication records.
//!
//! The crate covers the whole analysis path:
//!
//! - [`ingest`]: article corpora, byline cleaning, multi-outlet restriction, contributor descriptives
//! - [`graph`]: contributor–outlet bipartite graph and its weighted outlet projection
//! - [`null_model`]: degree-preserving edge-swap ensembles, per-pair Z-scores and empirical
//!   p-values, significance-filtered backbones and their clusters
//! - [`partition`]: attribute-derived partitions and their modularity on the backbone
//! - [`text`]: tokenization, stopwords, Porter stemming, document-frequency filtering
//! - [`topic_model`]: LDA fitted by collapsed Gibbs sampling
//! - [`feature_stats`]: label-shuffle Z-tests, purist/transitioning labels, lexicon scoring,
//!   Mann-Whitney U / AUC and Bonferroni correction
//! - [`robustness`]: Z-threshold sweeps and leave-one-outlet-out reruns
//! - [`pipeline`]: configuration and the staged end-to-end runs behind the `copub` binary
//!
//! Runnable walkthroughs for each capability live in `crates/core/examples/`.

pub mod error;
pub mod export;
pub mod feature_stats;
pub mod graph;
pub mod network;
pub mod ingest;
pub mod null_model;
pub mod partition;
pub mod pipeline;
pub mod robustness;
pub mod seed;
pub mod synthetic;
pub mod text;
pub mod topic_model;

pub use error::{Error, Result};
pub use graph::{BipartiteGraph, Projection, Side};
pub use ingest::{ArticleRecord, ArticleSet, ContributorProfile};
pub use null_model::{EdgeSignificance, EnsembleAccumulator, EnsembleConfig, Keep, ValidatedNetwork};
pub use partition::{AttributeTable, Partition, WeightedGraph};
