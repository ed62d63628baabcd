//! File outputs: CSV tables, GraphML, DOT and JSON reports.
//!
//! Every file starts with a metadata header (tool version, config hash, master seed):
//! `#` lines for CSV, a comment for GraphML and DOT, a `meta` object for JSON. CSV
//! readers in this crate skip `#` lines.

use std::fmt::Write as _;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::feature_stats::{FeatureComparison, FeatureMatrix};
use crate::graph::{BipartiteGraph, Projection};
use crate::ingest::{ArticleSet, ContributorProfile};
use crate::null_model::{EdgeSignificance, ValidatedNetwork};
use crate::partition::Partition;
use crate::text::{DocTermCorpus, Vocabulary};

pub const TOOL: &str = concat!("copub ", env!("CARGO_PKG_VERSION"));

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Meta {
    pub tool: String,
    pub config_hash: String,
    pub seed: u64,
}

impl Meta {
    pub fn new(config_hash: &str, seed: u64) -> Self {
        Meta {
            tool: TOOL.to_string(),
            config_hash: config_hash.to_string(),
            seed,
        }
    }

    fn lines(&self, prefix: &str) -> String {
        format!(
            "{p}tool: {}\n{p}config_hash: {}\n{p}seed: {}\n",
            self.tool,
            self.config_hash,
            self.seed,
            p = prefix
        )
    }
}

/// `f64` as written in tables; `None` becomes `NA`.
pub fn fmt_f64(x: Option<f64>) -> String {
    match x {
        Some(v) if v.is_finite() => format!("{}", v),
        _ => "NA".to_string(),
    }
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    if let Some(dir) = path.parent() {
        if !dir.as_os_str().is_empty() {
            std::fs::create_dir_all(dir)?;
        }
    }
    Ok(BufWriter::new(File::create(path)?))
}

/// Opens a CSV writer with the metadata header already written.
pub fn csv_writer(path: &Path, meta: Option<&Meta>) -> Result<csv::Writer<BufWriter<File>>> {
    let mut out = create(path)?;
    if let Some(m) = meta {
        out.write_all(m.lines("# ").as_bytes())?;
    }
    Ok(csv::Writer::from_writer(out))
}

fn finish(mut w: csv::Writer<BufWriter<File>>) -> Result<()> {
    w.flush()?;
    Ok(())
}

pub fn write_articles(path: &Path, set: &ArticleSet, meta: Option<&Meta>) -> Result<()> {
    let mut w = csv_writer(path, meta)?;
    w.write_record(["article_id", "outlet_id", "byline", "contributor_id", "date", "text"])?;
    for r in set.iter() {
        w.write_record([
            r.article_id.as_str(),
            r.outlet_id.as_str(),
            r.byline_raw.as_str(),
            r.contributor_id.as_deref().unwrap_or(""),
            &r.date.map(|d| d.format("%Y-%m-%d").to_string()).unwrap_or_default(),
            r.text.as_deref().unwrap_or(""),
        ])?;
    }
    finish(w)
}

pub fn write_contributor_stats(path: &Path, stats: &[ContributorProfile], meta: Option<&Meta>) -> Result<()> {
    let mut w = csv_writer(path, meta)?;
    w.write_record(["contributor_id", "story_count", "outlet_count", "active_span_days"])?;
    for s in stats {
        w.write_record([
            s.contributor_id.clone(),
            s.story_count.to_string(),
            s.outlet_count.to_string(),
            s.active_span_days.map(|d| d.to_string()).unwrap_or_else(|| "NA".into()),
        ])?;
    }
    finish(w)
}

pub fn write_bipartite_edges(path: &Path, g: &BipartiteGraph, meta: Option<&Meta>) -> Result<()> {
    let mut w = csv_writer(path, meta)?;
    w.write_record(["contributor_id", "outlet_id"])?;
    for (c, o) in g.edge_ids() {
        w.write_record([c, o])?;
    }
    finish(w)
}

/// Positive-weight projection edges.
pub fn write_projection_csv(path: &Path, p: &Projection, meta: Option<&Meta>) -> Result<()> {
    let mut w = csv_writer(path, meta)?;
    w.write_record(["source", "target", "weight"])?;
    for (i, j, wt) in p.edges() {
        w.write_record([p.nodes()[i].as_str(), p.nodes()[j].as_str(), &wt.to_string()])?;
    }
    finish(w)
}

pub const SIGNIFICANCE_COLUMNS: [&str; 8] = ["from", "to", "shared", "w_obs", "null_mean", "null_std", "z", "p"];

/// One row per outlet pair. `shared` and `w_obs` both carry the observed count; a
/// degenerate Z is written `NA`.
pub fn write_significance_csv(path: &Path, sigs: &[EdgeSignificance], meta: Option<&Meta>) -> Result<()> {
    let mut out = create(path)?;
    if let Some(m) = meta {
        out.write_all(m.lines("# ").as_bytes())?;
    }
    let n = sigs.first().map_or(0, |s| s.n_samples);
    writeln!(out, "# n_samples: {}", n)?;
    let mut w = csv::Writer::from_writer(out);
    w.write_record(SIGNIFICANCE_COLUMNS)?;
    for s in sigs {
        w.write_record([
            s.from.clone(),
            s.to.clone(),
            s.w_obs.to_string(),
            s.w_obs.to_string(),
            fmt_f64(Some(s.null_mean)),
            fmt_f64(Some(s.null_std)),
            fmt_f64(s.z),
            fmt_f64(Some(s.p_emp)),
        ])?;
    }
    finish(w)
}

pub fn read_significance_csv(path: &Path) -> Result<Vec<EdgeSignificance>> {
    let content = std::fs::read_to_string(path).map_err(|e| match e.kind() {
        std::io::ErrorKind::NotFound => Error::MissingFile(path.to_path_buf()),
        _ => Error::Io(e),
    })?;
    let n_samples = content
        .lines()
        .take_while(|l| l.starts_with('#'))
        .find_map(|l| l.strip_prefix("# n_samples:"))
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(0);
    let mut rdr = crate::ingest::csv_reader(content.as_bytes());
    let headers = rdr.headers()?.clone();
    if headers.iter().collect::<Vec<_>>() != SIGNIFICANCE_COLUMNS {
        return Err(Error::Malformed {
            path: path.display().to_string(),
            line: 1,
            message: format!("expected columns {}", SIGNIFICANCE_COLUMNS.join(",")),
        });
    }
    let mut out = Vec::new();
    for row in rdr.records() {
        let row = row?;
        let line = row.position().map(|p| p.line()).unwrap_or(0);
        let bad = |m: &str| Error::Malformed {
            path: path.display().to_string(),
            line,
            message: m.to_string(),
        };
        let num = |i: usize| -> Result<Option<f64>> {
            match row.get(i).unwrap_or("") {
                "NA" => Ok(None),
                v => v.parse().map(Some).map_err(|_| bad(&format!("bad number `{}`", v))),
            }
        };
        out.push(EdgeSignificance {
            from: row[0].to_string(),
            to: row[1].to_string(),
            w_obs: row[3].parse().map_err(|_| bad("bad w_obs"))?,
            null_mean: num(4)?.ok_or_else(|| bad("missing null_mean"))?,
            null_std: num(5)?.ok_or_else(|| bad("missing null_std"))?,
            z: num(6)?,
            p_emp: num(7)?.ok_or_else(|| bad("missing p"))?,
            n_samples,
        });
    }
    Ok(out)
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
        .replace('\'', "&apos;")
}

/// Named node attribute and the function giving each node's value.
type NodeAttr<'a> = (&'a str, &'a dyn Fn(&str) -> Option<String>);

/// `(key, graphml type)` edge attributes and rows of `(from, to, values)`.
fn graphml(
    path: &Path,
    meta: Option<&Meta>,
    nodes: &[String],
    node_attr: Option<NodeAttr<'_>>,
    edge_keys: &[(&str, &str)],
    edges: &[(String, String, Vec<String>)],
) -> Result<()> {
    let mut s = String::new();
    s.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    if let Some(m) = meta {
        let _ = writeln!(s, "<!--\n{}-->", m.lines("  "));
    }
    s.push_str("<graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\">\n");
    if let Some((key, _)) = node_attr {
        let _ = writeln!(s, "  <key id=\"{0}\" for=\"node\" attr.name=\"{0}\" attr.type=\"string\"/>", key);
    }
    for (key, ty) in edge_keys {
        let _ = writeln!(s, "  <key id=\"{0}\" for=\"edge\" attr.name=\"{0}\" attr.type=\"{1}\"/>", key, ty);
    }
    s.push_str("  <graph id=\"G\" edgedefault=\"undirected\">\n");
    for n in nodes {
        let id = xml_escape(n);
        match node_attr.and_then(|(k, f)| f(n).map(|v| (k, v))) {
            Some((k, v)) => {
                let _ = writeln!(s, "    <node id=\"{}\"><data key=\"{}\">{}</data></node>", id, k, xml_escape(&v));
            }
            None => {
                let _ = writeln!(s, "    <node id=\"{}\"/>", id);
            }
        }
    }
    for (i, (a, b, values)) in edges.iter().enumerate() {
        let _ = write!(s, "    <edge id=\"e{}\" source=\"{}\" target=\"{}\">", i, xml_escape(a), xml_escape(b));
        for ((key, _), v) in edge_keys.iter().zip(values) {
            let _ = write!(s, "<data key=\"{}\">{}</data>", key, xml_escape(v));
        }
        s.push_str("</edge>\n");
    }
    s.push_str("  </graph>\n</graphml>\n");
    create(path)?.write_all(s.as_bytes())?;
    Ok(())
}

pub fn write_projection_graphml(path: &Path, p: &Projection, meta: Option<&Meta>) -> Result<()> {
    let edges: Vec<_> = p
        .edges()
        .map(|(i, j, w)| (p.nodes()[i].clone(), p.nodes()[j].clone(), vec![w.to_string()]))
        .collect();
    graphml(path, meta, p.nodes(), None, &[("weight", "int")], &edges)
}

/// Backbone with `sign`, `z` and `weight` edge attributes; nodes carry their cluster
/// when a partition is given.
pub fn write_backbone_graphml(
    path: &Path,
    v: &ValidatedNetwork,
    clusters: Option<&Partition>,
    meta: Option<&Meta>,
) -> Result<()> {
    let edges: Vec<_> = v
        .edges
        .iter()
        .map(|e| {
            (
                e.from.clone(),
                e.to.clone(),
                vec![e.sign.as_str().to_string(), fmt_f64(Some(e.z)), e.weight.to_string()],
            )
        })
        .collect();
    let label = |n: &str| clusters.and_then(|c| c.label(n).map(String::from));
    graphml(
        path,
        meta,
        &v.nodes,
        clusters.map(|_| ("cluster", &label as &dyn Fn(&str) -> Option<String>)),
        &[("sign", "string"), ("z", "double"), ("weight", "int")],
        &edges,
    )
}

pub fn write_backbone_dot(path: &Path, v: &ValidatedNetwork, meta: Option<&Meta>) -> Result<()> {
    let mut s = String::new();
    if let Some(m) = meta {
        s.push_str(&m.lines("// "));
    }
    let _ = writeln!(s, "graph backbone {{\n  // threshold: {}", v.threshold);
    let q = |x: &str| format!("\"{}\"", x.replace('\\', "\\\\").replace('"', "\\\""));
    for n in &v.nodes {
        let _ = writeln!(s, "  {};", q(n));
    }
    for e in &v.edges {
        let style = if e.sign.as_str() == "+" { "solid" } else { "dashed" };
        let _ = writeln!(
            s,
            "  {} -- {} [sign=\"{}\", z={}, weight={}, style={}];",
            q(&e.from),
            q(&e.to),
            e.sign.as_str(),
            fmt_f64(Some(e.z)),
            e.weight,
            style
        );
    }
    s.push_str("}\n");
    create(path)?.write_all(s.as_bytes())?;
    Ok(())
}

pub fn write_partition_csv(path: &Path, p: &Partition, header: [&str; 2], meta: Option<&Meta>) -> Result<()> {
    let mut w = csv_writer(path, meta)?;
    w.write_record(header)?;
    for (n, l) in p.labels() {
        w.write_record([n, l])?;
    }
    finish(w)
}

pub fn read_partition_csv(path: &Path) -> Result<Partition> {
    let mut rdr = crate::ingest::csv_reader(crate::ingest::open(path)?);
    let mut labels = Vec::new();
    for row in rdr.records() {
        let row = row?;
        labels.push((row.get(0).unwrap_or("").to_string(), row.get(1).unwrap_or("").to_string()));
    }
    Ok(Partition::from_labels(labels))
}

pub fn write_ranking_csv(path: &Path, ranking: &[(String, f64)], meta: Option<&Meta>) -> Result<()> {
    let mut w = csv_writer(path, meta)?;
    w.write_record(["classification", "modularity"])?;
    for (name, q) in ranking {
        w.write_record([name.clone(), fmt_f64(Some(*q))])?;
    }
    finish(w)
}

pub fn write_vocabulary_csv(path: &Path, vocab: &Vocabulary, meta: Option<&Meta>) -> Result<()> {
    let mut w = csv_writer(path, meta)?;
    w.write_record(["term_index", "term", "doc_freq"])?;
    for (i, t) in vocab.terms().iter().enumerate() {
        w.write_record([i.to_string(), t.clone(), vocab.doc_freq(i).to_string()])?;
    }
    finish(w)
}

/// Sparse `(doc_id, term_index, count)` triplets.
pub fn write_corpus_triplets(path: &Path, corpus: &DocTermCorpus, meta: Option<&Meta>) -> Result<()> {
    let mut w = csv_writer(path, meta)?;
    w.write_record(["doc_id", "term_index", "count"])?;
    for (id, doc) in corpus.doc_ids.iter().zip(&corpus.docs) {
        for (t, c) in doc {
            w.write_record([id.clone(), t.to_string(), c.to_string()])?;
        }
    }
    finish(w)
}

pub fn write_feature_matrix(path: &Path, m: &FeatureMatrix, meta: Option<&Meta>) -> Result<()> {
    let mut w = csv_writer(path, meta)?;
    let mut header = vec!["doc_id".to_string()];
    header.extend(m.names().iter().cloned());
    w.write_record(&header)?;
    for d in 0..m.n_docs() {
        let mut row = vec![m.doc_ids()[d].clone()];
        row.extend(m.row(d).iter().map(|x| fmt_f64(Some(*x))));
        w.write_record(&row)?;
    }
    finish(w)
}

/// `(topic, rank, term, probability)` rows.
pub fn write_keywords_csv(path: &Path, keywords: &[Vec<(String, f64)>], meta: Option<&Meta>) -> Result<()> {
    let mut w = csv_writer(path, meta)?;
    w.write_record(["topic", "rank", "term", "probability"])?;
    for (t, words) in keywords.iter().enumerate() {
        for (r, (term, p)) in words.iter().enumerate() {
            w.write_record([t.to_string(), (r + 1).to_string(), term.clone(), fmt_f64(Some(*p))])?;
        }
    }
    finish(w)
}

/// Feature comparison rows: feature, U, AUC, group means, difference, raw and adjusted p.
pub fn write_comparison_csv(
    path: &Path,
    rows: &[FeatureComparison],
    groups: (&str, &str),
    meta: Option<&Meta>,
) -> Result<()> {
    let mut w = csv_writer(path, meta)?;
    w.write_record([
        "feature".to_string(),
        "u".to_string(),
        "auc".to_string(),
        format!("mean_{}", groups.0),
        format!("mean_{}", groups.1),
        "diff".to_string(),
        "p".to_string(),
        "p_bonferroni".to_string(),
    ])?;
    for r in rows {
        w.write_record([
            r.feature.clone(),
            fmt_f64(Some(r.u)),
            fmt_f64(Some(r.auc)),
            fmt_f64(Some(r.mean_a)),
            fmt_f64(Some(r.mean_b)),
            fmt_f64(Some(r.diff)),
            fmt_f64(Some(r.p)),
            fmt_f64(Some(r.p_adjusted)),
        ])?;
    }
    finish(w)
}

#[derive(Serialize)]
struct Wrapped<'a, T: Serialize> {
    meta: Option<&'a Meta>,
    report: &'a T,
}

pub fn write_json<T: Serialize>(path: &Path, value: &T, meta: Option<&Meta>) -> Result<()> {
    let mut out = create(path)?;
    serde_json::to_writer_pretty(&mut out, &Wrapped { meta, report: value })?;
    out.write_all(b"\n")?;
    out.flush()?;
    Ok(())
}
