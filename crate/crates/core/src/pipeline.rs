//! Run configuration and the staged pipeline behind the `copub` binary.
//!
//! Stages write into subdirectories of the output directory and each reads only the
//! files of the stages before it:
//!
//! | stage        | reads                                   | writes        |
//! |--------------|-----------------------------------------|---------------|
//! | `ingest`     | raw corpus                              | `ingest/`     |
//! | `network`    | `ingest/articles.csv`                   | `network/`    |
//! | `modularity` | `network/significance.csv`, `network/clusters.csv`, attributes | `modularity/` |
//! | `content`    | `ingest/articles.csv`, `network/clusters.csv`, lexicon | `content/` |
//! | `robustness` | `ingest/articles.csv`, `network/significance.csv`, `network/clusters.csv` | `robustness/` |
//!
//! Configuration precedence: command-line flags, then the JSON config file, then the
//! defaults of [`RunConfig`]. Relative paths in the config file resolve against the
//! file's directory.

use std::collections::{BTreeMap, BTreeSet};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::export::{self, Meta};
use crate::feature_stats::{
    compare_groups, lexicon_matrix, purist_transition_labels, shuffle_ztest, within_cluster_ztest, Contrast,
    DocContext, FeatureMatrix, Lexicon, ShuffleUnit,
};
use crate::ingest::{self, clean_bylines, contributor_stats, restrict_multi_outlet, ArticleSet, BylineRules};
use crate::network::{analyze, NetworkSettings};
use crate::null_model::{attempts_for, filter_network, EnsembleConfig, Keep};
use crate::partition::{derive_partition, rank_classifications, Attribute, AttributeTable, DeriveMode, WeightedGraph};
use crate::robustness::{ablation_report, threshold_sweep, DEFAULT_THRESHOLDS};
use crate::seed::{self, tags};
use crate::text::{FrequencyFilter, Stoplist, TextPipeline};
use crate::topic_model::{doc_topics, fit, top_keywords, LdaConfig};

/// One outlet classification to score by modularity.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Classification {
    pub name: String,
    pub attribute: String,
    #[serde(flatten)]
    pub mode: DeriveMode,
}

/// What moves together in the cluster-level topic Z-tests.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ClusterShuffle {
    /// Each article's cluster label is shuffled independently.
    Articles,
    /// All articles of an outlet move together.
    Outlets,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    /// Raw corpus, CSV or JSONL (by extension).
    pub articles: Option<PathBuf>,
    /// Per-outlet attribute CSV, needed by the modularity stage.
    pub attributes: Option<PathBuf>,
    pub generic_phrases: Option<PathBuf>,
    pub outlet_names: Option<PathBuf>,
    pub stopwords: Option<PathBuf>,
    /// Category → pattern lexicon for the style table.
    pub lexicon: Option<PathBuf>,
    pub out: PathBuf,
    pub seed: u64,
    pub n_samples: usize,
    pub chain_len: usize,
    /// Explicit swap attempts per sample; `⌈m ln m⌉` when unset.
    pub swap_attempts: Option<usize>,
    pub z: f64,
    pub keep: Keep,
    pub thresholds: Vec<f64>,
    pub min_outlets: usize,
    pub classifications: Vec<Classification>,
    /// Adds a randomly relabelled copy of every classification to the ranking.
    pub shuffled_baselines: bool,
    pub topics: Vec<usize>,
    pub lda_iterations: usize,
    pub alpha_sum: f64,
    pub beta: f64,
    pub top_keywords: usize,
    pub n_rand: usize,
    pub cluster_shuffle: ClusterShuffle,
    pub min_docs: usize,
    /// Terms in more than `num/den` of the documents are dropped.
    pub max_doc_fraction: (usize, usize),
    pub ablation: bool,
    pub threads: Option<usize>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            articles: None,
            attributes: None,
            generic_phrases: None,
            outlet_names: None,
            stopwords: None,
            lexicon: None,
            out: PathBuf::from("out"),
            seed: 0,
            n_samples: 10_000,
            chain_len: 250,
            swap_attempts: None,
            z: 1.96,
            keep: Keep::Both,
            thresholds: DEFAULT_THRESHOLDS.to_vec(),
            min_outlets: 2,
            classifications: Vec::new(),
            shuffled_baselines: true,
            topics: vec![20],
            lda_iterations: 1000,
            alpha_sum: 5.0,
            beta: 0.01,
            top_keywords: 10,
            n_rand: 1000,
            cluster_shuffle: ClusterShuffle::Articles,
            min_docs: 10,
            max_doc_fraction: (1, 3),
            ablation: true,
            threads: None,
        }
    }
}

/// Command-line overrides; `None` leaves the config value alone.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub samples: Option<usize>,
    pub z: Option<f64>,
    pub topics: Option<Vec<usize>>,
    pub randomizations: Option<usize>,
    pub threads: Option<usize>,
    pub out: Option<PathBuf>,
}

impl RunConfig {
    /// Reads a JSON config and resolves its relative paths against the file's directory.
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| match e.kind() {
            std::io::ErrorKind::NotFound => Error::MissingFile(path.to_path_buf()),
            _ => Error::Config(format!("{}: {}", path.display(), e)),
        })?;
        let mut cfg: RunConfig =
            serde_json::from_str(&text).map_err(|e| Error::Config(format!("{}: {}", path.display(), e)))?;
        let base = path.parent().unwrap_or(Path::new(""));
        cfg.resolve_paths(base);
        Ok(cfg)
    }

    fn resolve_paths(&mut self, base: &Path) {
        let fix = |p: &mut PathBuf| {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        };
        for p in [
            &mut self.articles,
            &mut self.attributes,
            &mut self.generic_phrases,
            &mut self.outlet_names,
            &mut self.stopwords,
            &mut self.lexicon,
        ]
        .into_iter()
        .flatten()
        {
            fix(p);
        }
        fix(&mut self.out);
    }

    pub fn apply(&mut self, o: &Overrides) {
        if let Some(s) = o.seed {
            self.seed = s;
        }
        if let Some(n) = o.samples {
            self.n_samples = n;
        }
        if let Some(z) = o.z {
            self.z = z;
        }
        if let Some(t) = &o.topics {
            self.topics = t.clone();
        }
        if let Some(r) = o.randomizations {
            self.n_rand = r;
        }
        if let Some(t) = o.threads {
            self.threads = Some(t);
        }
        if let Some(out) = &o.out {
            self.out = out.clone();
        }
    }

    /// Parameter checks that do not touch the filesystem.
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Config(m));
        if self.n_samples == 0 {
            return bad("n_samples must be at least 1".into());
        }
        if self.chain_len == 0 {
            return bad("chain_len must be at least 1".into());
        }
        if self.z.is_nan() || self.z <= 0.0 {
            return bad(format!("z must be positive, got {}", self.z));
        }
        if self.min_outlets == 0 {
            return bad("min_outlets must be at least 1".into());
        }
        if self.topics.is_empty() || self.topics.contains(&0) {
            return bad("topics must list at least one positive topic count".into());
        }
        if self.n_rand < 2 {
            return bad("n_rand must be at least 2".into());
        }
        if self.max_doc_fraction.1 == 0 {
            return bad("max_doc_fraction denominator must be positive".into());
        }
        if self.threads == Some(0) {
            return bad("threads must be at least 1".into());
        }
        if !self.thresholds.windows(2).all(|w| w[0] < w[1]) || self.thresholds.iter().any(|&t| t.is_nan() || t <= 0.0) {
            return bad("thresholds must be positive and strictly increasing".into());
        }
        Ok(())
    }

    /// SHA-256 of the canonical JSON form, excluding `threads` and `out`, which never
    /// affect results.
    pub fn hash(&self) -> String {
        let mut c = self.clone();
        c.threads = None;
        c.out = PathBuf::new();
        let json = serde_json::to_vec(&c).expect("config serializes");
        let digest = Sha256::digest(&json);
        digest.iter().take(8).map(|b| format!("{:02x}", b)).collect()
    }

    pub fn meta(&self) -> Meta {
        Meta::new(&self.hash(), self.seed)
    }

    pub fn network_settings(&self) -> NetworkSettings {
        NetworkSettings {
            min_outlets: self.min_outlets,
            ensemble: EnsembleConfig {
                n_samples: self.n_samples,
                master_seed: self.seed,
                attempts: self.swap_attempts,
                chain_len: self.chain_len,
            },
            threshold: self.z,
            keep: self.keep,
        }
    }

    fn stage_dir(&self, stage: &str) -> PathBuf {
        self.out.join(stage)
    }

    fn stage_file(&self, stage: &str, name: &str) -> PathBuf {
        self.out.join(stage).join(name)
    }
}

fn require(path: &Option<PathBuf>, what: &str) -> Result<PathBuf> {
    let p = path
        .as_ref()
        .ok_or_else(|| Error::Config(format!("no {} path configured", what)))?;
    if !p.exists() {
        return Err(Error::MissingFile(p.clone()));
    }
    Ok(p.clone())
}

/// Input from an earlier stage; a missing file names the stage to run first.
fn stage_input(cfg: &RunConfig, stage: &str, name: &str) -> Result<PathBuf> {
    let p = cfg.stage_file(stage, name);
    if !p.exists() {
        return Err(Error::Config(format!(
            "{} not found; run the `{}` stage first",
            p.display(),
            stage
        )));
    }
    Ok(p)
}

fn file_safe(id: &str) -> String {
    id.chars()
        .map(|c| if c.is_ascii_alphanumeric() || c == '-' || c == '_' { c } else { '_' })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Ingest,
    Network,
    Modularity,
    Content,
    Robustness,
    All,
}

/// Runs a command inside a thread pool of the configured size.
pub fn run(command: Command, cfg: &RunConfig) -> Result<()> {
    cfg.validate()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.threads.unwrap_or(0))
        .build()
        .map_err(|e| Error::Internal(e.to_string()))?;
    pool.install(|| match command {
        Command::Ingest => cmd_ingest(cfg),
        Command::Network => cmd_network(cfg),
        Command::Modularity => cmd_modularity(cfg),
        Command::Content => cmd_content(cfg),
        Command::Robustness => cmd_robustness(cfg),
        Command::All => cmd_all(cfg),
    })
}

#[derive(Debug, Serialize)]
struct IngestSummary {
    raw_articles: usize,
    attributed_articles: usize,
    contributors: usize,
    multi_outlet_contributors: usize,
    outlets: usize,
    provenance: Vec<String>,
}

/// Parses the raw corpus, cleans bylines and writes the attributed articles and
/// per-contributor descriptives.
pub fn cmd_ingest(cfg: &RunConfig) -> Result<()> {
    let path = require(&cfg.articles, "articles")?;
    let raw = ingest::parse_corpus(&path, ingest::CorpusFormat::from_path(&path))?;
    let mut rules = BylineRules::default();
    if let Some(p) = &cfg.generic_phrases {
        rules.generic_phrases = ingest::read_phrase_list(&require(&Some(p.clone()), "generic phrases")?)?;
    }
    if let Some(p) = &cfg.outlet_names {
        rules.outlet_names = ingest::read_phrase_list(&require(&Some(p.clone()), "outlet names")?)?;
    }
    // a byline that is just the outlet's own name is not a person
    rules
        .outlet_names
        .extend(raw.outlets().into_iter().map(str::to_lowercase));
    let clean = clean_bylines(&raw, &rules);
    if clean.is_empty() {
        return Err(Error::Data("no article has a usable person byline".into()));
    }
    let stats = contributor_stats(&clean);
    let meta = cfg.meta();
    export::write_articles(&cfg.stage_file("ingest", "articles.csv"), &clean, Some(&meta))?;
    export::write_contributor_stats(&cfg.stage_file("ingest", "contributors.csv"), &stats, Some(&meta))?;
    let summary = IngestSummary {
        raw_articles: raw.len(),
        attributed_articles: clean.len(),
        contributors: stats.len(),
        multi_outlet_contributors: stats.iter().filter(|s| s.outlet_count >= cfg.min_outlets).count(),
        outlets: clean.outlets().len(),
        provenance: clean.provenance.clone(),
    };
    export::write_json(&cfg.stage_file("ingest", "summary.json"), &summary, Some(&meta))?;
    log::info!(
        "ingest: {} of {} articles attributed to {} contributors",
        summary.attributed_articles,
        summary.raw_articles,
        summary.contributors
    );
    Ok(())
}

#[derive(Debug, Serialize)]
struct NetworkSummary {
    articles: usize,
    contributors: usize,
    outlets: usize,
    bipartite_edges: usize,
    n_samples: usize,
    swap_attempts_per_sample: usize,
    threshold: f64,
    positive_edges: usize,
    negative_edges: usize,
    degenerate_pairs: usize,
    clusters: BTreeMap<String, Vec<String>>,
}

/// Builds the bipartite graph and projection, runs the null ensemble and writes the
/// significance table, backbone and clusters.
pub fn cmd_network(cfg: &RunConfig) -> Result<()> {
    let articles = ingest::read_clean_articles(&stage_input(cfg, "ingest", "articles.csv")?)?;
    let settings = cfg.network_settings();
    let a = analyze(&articles, &settings)?;
    if a.graph.right_nodes().len() < 2 {
        return Err(Error::Data("fewer than two outlets remain after the multi-outlet restriction".into()));
    }
    let meta = cfg.meta();
    let dir = |n: &str| cfg.stage_file("network", n);
    export::write_bipartite_edges(&dir("bipartite_edges.csv"), &a.graph, Some(&meta))?;
    export::write_projection_csv(&dir("projection.csv"), &a.projection, Some(&meta))?;
    export::write_projection_graphml(&dir("projection.graphml"), &a.projection, Some(&meta))?;
    export::write_significance_csv(&dir("significance.csv"), &a.significance, Some(&meta))?;
    export::write_backbone_graphml(&dir("backbone.graphml"), &a.backbone, Some(&a.clusters), Some(&meta))?;
    export::write_backbone_dot(&dir("backbone.dot"), &a.backbone, Some(&meta))?;
    export::write_partition_csv(&dir("clusters.csv"), &a.clusters, ["outlet_id", "cluster"], Some(&meta))?;
    let summary = NetworkSummary {
        articles: a.articles.len(),
        contributors: a.graph.left_nodes().len(),
        outlets: a.graph.right_nodes().len(),
        bipartite_edges: a.graph.m(),
        n_samples: cfg.n_samples,
        swap_attempts_per_sample: cfg.swap_attempts.unwrap_or_else(|| attempts_for(a.graph.m())),
        threshold: cfg.z,
        positive_edges: a.backbone.positive_edges().count(),
        negative_edges: a.backbone.edges.len() - a.backbone.positive_edges().count(),
        degenerate_pairs: a.significance.iter().filter(|s| s.is_degenerate()).count(),
        clusters: a.clusters.groups(),
    };
    export::write_json(&dir("summary.json"), &summary, Some(&meta))?;
    log::info!(
        "network: {} outlets, {} positive and {} negative backbone edges, {} clusters",
        summary.outlets,
        summary.positive_edges,
        summary.negative_edges,
        summary.clusters.len()
    );
    Ok(())
}

fn default_classifications(table: &AttributeTable) -> Vec<Classification> {
    table
        .attributes
        .iter()
        .map(|(name, attr)| Classification {
            name: name.clone(),
            attribute: name.clone(),
            mode: match attr {
                Attribute::Continuous { .. } => DeriveMode::Bin { k: 2 },
                Attribute::Categorical { .. } => DeriveMode::Categorical,
                Attribute::Counts { .. } => DeriveMode::LargestGroup,
            },
        })
        .collect()
}

/// Ranks outlet classifications by their modularity on the positive backbone.
pub fn cmd_modularity(cfg: &RunConfig) -> Result<()> {
    let attr_path = require(&cfg.attributes, "attributes")?;
    let sigs = export::read_significance_csv(&stage_input(cfg, "network", "significance.csv")?)?;
    let clusters = export::read_partition_csv(&stage_input(cfg, "network", "clusters.csv")?)?;
    let backbone = filter_network(&sigs, cfg.z, cfg.keep)?;
    let net = WeightedGraph::from_backbone(&backbone);
    let table = AttributeTable::read_csv(&attr_path)?;
    let missing = table.missing_outlets(&backbone.nodes);
    if !missing.is_empty() {
        return Err(Error::Config(format!(
            "{} has no row for outlet(s): {}",
            attr_path.display(),
            missing.join(", ")
        )));
    }
    let specs = if cfg.classifications.is_empty() {
        default_classifications(&table)
    } else {
        cfg.classifications.clone()
    };
    let mut parts = vec![("backbone_clusters".to_string(), clusters)];
    for spec in &specs {
        if !table.attributes.contains_key(&spec.attribute) {
            return Err(Error::Config(format!("unknown attribute `{}`", spec.attribute)));
        }
        let derived = derive_partition(&table, &backbone.nodes, &spec.attribute, &spec.mode).map_err(|e| match e {
            Error::Argument(m) => Error::Config(m),
            other => other,
        })?;
        if cfg.shuffled_baselines {
            let mut rng = seed::rng(seed::derive_str(cfg.seed, tags::SHUFFLE, &spec.name), tags::SHUFFLE, 0);
            parts.push((format!("{} (shuffled)", spec.name), derived.partition.permuted(&mut rng)));
        }
        parts.push((spec.name.clone(), derived.partition));
    }
    let ranking = rank_classifications(&net, &parts)?;
    let meta = cfg.meta();
    export::write_ranking_csv(&cfg.stage_file("modularity", "ranking.csv"), &ranking, Some(&meta))?;

    let mut w = export::csv_writer(&cfg.stage_file("modularity", "partitions.csv"), Some(&meta))?;
    let mut header = vec!["outlet_id".to_string()];
    header.extend(parts.iter().map(|(n, _)| n.clone()));
    w.write_record(&header)?;
    for o in &backbone.nodes {
        let mut row = vec![o.clone()];
        row.extend(parts.iter().map(|(_, p)| p.label(o).unwrap_or("").to_string()));
        w.write_record(&row)?;
    }
    w.flush()?;
    for (name, q) in &ranking {
        log::info!("modularity: {:>8.4}  {}", q, name);
    }
    Ok(())
}

/// Articles the content stage works on: by contributors in at least `min_outlets`
/// outlets, in clustered outlets, with text.
fn content_articles(cfg: &RunConfig, clusters: &crate::partition::Partition) -> Result<ArticleSet> {
    let articles = ingest::read_clean_articles(&stage_input(cfg, "ingest", "articles.csv")?)?;
    let restricted = restrict_multi_outlet(&articles, cfg.min_outlets)?;
    let with_text = restricted.filtered("has text, clustered outlet", |r| {
        r.text.as_deref().is_some_and(|t| !t.trim().is_empty()) && clusters.label(&r.outlet_id).is_some()
    });
    if with_text.is_empty() {
        return Err(Error::Data("no article text available for the content stage".into()));
    }
    Ok(with_text)
}

#[derive(Debug, Serialize)]
struct ContentSummary {
    documents: usize,
    vocabulary: usize,
    tokens: usize,
    topic_counts: Vec<usize>,
    tested_clusters: Vec<String>,
    significant_topics: BTreeMap<String, usize>,
    style_groups: Option<(String, String)>,
    significant_style_features: Option<usize>,
    notes: Vec<String>,
}

/// Topic model, topic Z tables and the lexicon style table.
pub fn cmd_content(cfg: &RunConfig) -> Result<()> {
    let clusters = export::read_partition_csv(&stage_input(cfg, "network", "clusters.csv")?)?;
    let articles = content_articles(cfg, &clusters)?;
    let meta = cfg.meta();
    let file = |n: &str| cfg.stage_file("content", n);
    let mut notes = Vec::new();

    let stoplist = match &cfg.stopwords {
        Some(p) => Stoplist::parse(&std::fs::read_to_string(require(&Some(p.clone()), "stopwords")?)?),
        None => Stoplist::english(),
    };
    let pipeline = TextPipeline {
        stoplist,
        filter: FrequencyFilter {
            min_docs: cfg.min_docs,
            max_fraction: cfg.max_doc_fraction,
        },
    };
    let docs: Vec<(String, String)> = articles
        .iter()
        .map(|r| (r.article_id.clone(), r.text.clone().unwrap_or_default()))
        .collect();
    let (vocab, corpus) = pipeline.run(&docs)?;
    export::write_vocabulary_csv(&file("vocabulary.csv"), &vocab, Some(&meta))?;
    export::write_corpus_triplets(&file("corpus.csv"), &corpus, Some(&meta))?;

    let outlet: Vec<String> = articles.iter().map(|r| r.outlet_id.clone()).collect();
    let contributor: Vec<String> = articles
        .iter()
        .map(|r| r.contributor_id.clone().unwrap_or_default())
        .collect();
    let cluster_of: Vec<String> = outlet
        .iter()
        .map(|o| clusters.label(o).unwrap_or_default().to_string())
        .collect();
    let kinds = purist_transition_labels(&articles.contributor_outlets(), &clusters)?;
    let ctx = DocContext {
        contributor: &contributor,
        outlet: &outlet,
    };
    // clusters of at least two outlets that have documents
    let present: BTreeSet<&str> = cluster_of.iter().map(String::as_str).collect();
    let tested: Vec<String> = clusters
        .groups()
        .into_iter()
        .filter(|(c, members)| members.len() >= 2 && present.contains(c.as_str()))
        .map(|(c, _)| c)
        .collect();
    let unit = match cfg.cluster_shuffle {
        ClusterShuffle::Articles => ShuffleUnit::Documents,
        ClusterShuffle::Outlets => {
            let ids: BTreeMap<&str, usize> = outlet
                .iter()
                .map(String::as_str)
                .collect::<BTreeSet<_>>()
                .into_iter()
                .enumerate()
                .map(|(i, o)| (o, i))
                .collect();
            ShuffleUnit::Blocks(outlet.iter().map(|o| ids[o.as_str()]).collect())
        }
    };

    let mut significant_topics = BTreeMap::new();
    for &k in &cfg.topics {
        let lda = LdaConfig {
            topics: k,
            iterations: cfg.lda_iterations,
            alpha_sum: cfg.alpha_sum,
            beta: cfg.beta,
            seed: cfg.seed,
            average_last: 0,
        };
        let state = fit(&corpus, vocab.terms(), &lda)?;
        let theta = doc_topics(&state);
        let keywords: Vec<Vec<(String, f64)>> =
            (0..k).map(|t| top_keywords(&state, t, cfg.top_keywords)).collect::<Result<_>>()?;
        export::write_keywords_csv(&file(&format!("keywords_k{}.csv", k)), &keywords, Some(&meta))?;
        export::write_feature_matrix(&file(&format!("theta_k{}.csv", k)), &theta, Some(&meta))?;
        let (table, n_sig) = topic_z_table(cfg, k, &theta, &keywords, &cluster_of, &ctx, &kinds, &clusters, &tested, &unit, &mut notes)?;
        write_topic_z(&file(&format!("topic_z_k{}.csv", k)), &table, &tested, &meta)?;
        significant_topics.insert(format!("k{}", k), n_sig);
    }

    let mut style_groups = None;
    let mut significant_style_features = None;
    if let Some(p) = &cfg.lexicon {
        let lex = Lexicon::read(&require(&Some(p.clone()), "lexicon")?)?;
        let scores: FeatureMatrix = lexicon_matrix(&docs, &lex)?;
        if tested.len() >= 2 {
            let (a, b) = (tested[0].clone(), tested[1].clone());
            let mut rows = compare_groups(&scores, &cluster_of, &a, &b)?;
            rows.sort_by(|x, y| y.auc.total_cmp(&x.auc).then_with(|| x.feature.cmp(&y.feature)));
            export::write_comparison_csv(&file("style.csv"), &rows, (&a, &b), Some(&meta))?;
            significant_style_features = Some(rows.iter().filter(|r| r.p_adjusted < 0.01).count());
            style_groups = Some((a, b));
        } else {
            notes.push("style table skipped: fewer than two clusters with two or more outlets".into());
        }
    }

    let summary = ContentSummary {
        documents: corpus.len(),
        vocabulary: vocab.len(),
        tokens: corpus.total_tokens(),
        topic_counts: cfg.topics.clone(),
        tested_clusters: tested,
        significant_topics,
        style_groups,
        significant_style_features,
        notes,
    };
    for n in &summary.notes {
        log::warn!("content: {}", n);
    }
    export::write_json(&file("summary.json"), &summary, Some(&meta))?;
    Ok(())
}

struct TopicRow {
    topic: usize,
    keywords: String,
    cluster_z: Vec<Option<f64>>,
    trans_z: Vec<Option<f64>>,
}

#[allow(clippy::too_many_arguments)]
fn topic_z_table(
    cfg: &RunConfig,
    k: usize,
    theta: &FeatureMatrix,
    keywords: &[Vec<(String, f64)>],
    cluster_of: &[String],
    ctx: &DocContext<'_>,
    kinds: &BTreeMap<String, crate::feature_stats::ContributorKind>,
    clusters: &crate::partition::Partition,
    tested: &[String],
    unit: &ShuffleUnit,
    notes: &mut Vec<String>,
) -> Result<(Vec<TopicRow>, usize)> {
    let mut cluster_cols = Vec::new();
    let mut trans_cols = Vec::new();
    for c in tested {
        let s = seed::derive_str(cfg.seed, tags::SHUFFLE, &format!("k{}:cluster:{}", k, c));
        cluster_cols.push(shuffle_ztest(theta, cluster_of, c, cfg.n_rand, s, unit)?);
        let s = seed::derive_str(cfg.seed, tags::SHUFFLE, &format!("k{}:transition:{}", k, c));
        match within_cluster_ztest(theta, ctx, kinds, clusters, c, Contrast::Transitioning, cfg.n_rand, s) {
            Ok(z) => trans_cols.push(Some(z)),
            Err(Error::Data(m)) => {
                notes.push(format!("k{}: {}", k, m));
                trans_cols.push(None);
            }
            Err(e) => return Err(e),
        }
    }
    let rows: Vec<TopicRow> = (0..k)
        .map(|t| TopicRow {
            topic: t,
            keywords: keywords[t].iter().take(5).map(|(w, _)| w.as_str()).collect::<Vec<_>>().join(" "),
            cluster_z: cluster_cols.iter().map(|col| col[t].z).collect(),
            trans_z: trans_cols.iter().map(|col| col.as_ref().and_then(|c| c[t].z)).collect(),
        })
        .collect();
    let n_sig = rows
        .iter()
        .filter(|r| r.cluster_z.iter().any(|z| z.is_some_and(|z| z > cfg.z)))
        .count();
    Ok((rows, n_sig))
}

fn write_topic_z(path: &Path, rows: &[TopicRow], tested: &[String], meta: &Meta) -> Result<()> {
    let mut w = export::csv_writer(path, Some(meta))?;
    let mut header = vec!["topic".to_string(), "keywords".to_string()];
    header.extend(tested.iter().map(|c| format!("z_{}", c)));
    header.extend(tested.iter().map(|c| format!("trans_z_{}", c)));
    w.write_record(&header)?;
    for r in rows {
        let mut row = vec![r.topic.to_string(), r.keywords.clone()];
        row.extend(r.cluster_z.iter().chain(&r.trans_z).map(|z| export::fmt_f64(*z)));
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

/// Threshold sweep and leave-one-outlet-out reruns.
pub fn cmd_robustness(cfg: &RunConfig) -> Result<()> {
    let sigs = export::read_significance_csv(&stage_input(cfg, "network", "significance.csv")?)?;
    let clusters = export::read_partition_csv(&stage_input(cfg, "network", "clusters.csv")?)?;
    let meta = cfg.meta();
    let file = |n: &str| cfg.stage_file("robustness", n);

    let sweep = threshold_sweep(&sigs, &cfg.thresholds, cfg.z)?;
    export::write_json(&file("sweep.json"), &sweep, Some(&meta))?;
    for t in &cfg.thresholds {
        let v = filter_network(&sigs, *t, cfg.keep)?;
        export::write_backbone_graphml(&file(&format!("backbone_z{}.graphml", t)), &v, None, Some(&meta))?;
    }
    if !sweep.nested {
        return Err(Error::Internal("threshold sweep is not nested".into()));
    }

    if cfg.ablation {
        let articles = ingest::read_clean_articles(&stage_input(cfg, "ingest", "articles.csv")?)?;
        let baseline = filter_network(&sigs, cfg.z, cfg.keep)?;
        let report = ablation_report(&articles, &baseline.nodes, &cfg.network_settings(), &baseline, &clusters)?;
        export::write_json(&file("ablation.json"), &report, Some(&meta))?;
        for e in &report.entries {
            let name = format!("without_{}.graphml", file_safe(&e.removed));
            export::write_backbone_graphml(&file(&name), &e.network, None, Some(&meta))?;
        }
    }
    Ok(())
}

/// Every stage in order. Modularity is skipped without an attribute table and content
/// without article text.
pub fn cmd_all(cfg: &RunConfig) -> Result<()> {
    cmd_ingest(cfg)?;
    cmd_network(cfg)?;
    if cfg.attributes.is_some() {
        cmd_modularity(cfg)?;
    } else {
        log::info!("all: no attribute table configured; skipping modularity");
    }
    match cmd_content(cfg) {
        Err(Error::Data(m)) if m.starts_with("no article text") => log::info!("all: {}; skipping content", m),
        other => other?,
    }
    cmd_robustness(cfg)
}

/// Stage output directories, for callers that want to inspect results.
pub fn stage_dirs(cfg: &RunConfig) -> Vec<PathBuf> {
    ["ingest", "network", "modularity", "content", "robustness"]
        .iter()
        .map(|s| cfg.stage_dir(s))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hash_ignores_threads_and_out() {
        let a = RunConfig::default();
        let b = RunConfig {
            threads: Some(8),
            out: PathBuf::from("/elsewhere"),
            ..RunConfig::default()
        };
        assert_eq!(a.hash(), b.hash());
        let c = RunConfig {
            seed: 1,
            ..RunConfig::default()
        };
        assert_ne!(a.hash(), c.hash());
    }

    #[test]
    fn flags_override_config() {
        let mut c = RunConfig::default();
        c.apply(&Overrides {
            seed: Some(9),
            z: Some(2.58),
            topics: Some(vec![5, 10]),
            ..Default::default()
        });
        assert_eq!((c.seed, c.z, c.topics.clone()), (9, 2.58, vec![5, 10]));
        assert_eq!(c.n_samples, 10_000);
    }

    #[test]
    fn relative_paths_follow_the_config_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.json");
        std::fs::write(&path, r#"{"articles": "data/a.csv", "out": "results", "seed": 3}"#).unwrap();
        let c = RunConfig::load(&path).unwrap();
        assert_eq!(c.articles, Some(dir.path().join("data/a.csv")));
        assert_eq!(c.out, dir.path().join("results"));
        assert_eq!(c.seed, 3);
    }

    #[test]
    fn unknown_config_key_is_a_config_error() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.json");
        std::fs::write(&path, r#"{"sed": 3}"#).unwrap();
        assert_eq!(RunConfig::load(&path).unwrap_err().exit_code(), 2);
    }

    #[test]
    fn missing_input_is_exit_2_with_path() {
        let cfg = RunConfig {
            articles: Some(PathBuf::from("/no/such/corpus.csv")),
            ..Default::default()
        };
        let e = run(Command::Ingest, &cfg).unwrap_err();
        assert_eq!(e.exit_code(), 2);
        assert!(e.to_string().contains("/no/such/corpus.csv"));
    }
}
