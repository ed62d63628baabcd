//! Content statistics over per-document feature vectors: label-shuffle Z-tests,
//! purist/transitioning contributor labels, lexicon scoring, Mann-Whitney U with AUC,
//! and Bonferroni correction.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::path::Path;

use rand::seq::SliceRandom;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal};

use crate::error::{Error, Result};
use crate::partition::Partition;
use crate::seed;

/// Documents × features, row-major.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureMatrix {
    doc_ids: Vec<String>,
    names: Vec<String>,
    data: Vec<f64>,
}

impl FeatureMatrix {
    pub fn new(doc_ids: Vec<String>, names: Vec<String>, rows: Vec<Vec<f64>>) -> Result<Self> {
        if rows.len() != doc_ids.len() {
            return Err(Error::Argument("row count does not match document ids".into()));
        }
        let unique: BTreeSet<&String> = names.iter().collect();
        if unique.len() != names.len() {
            return Err(Error::Argument("feature names must be unique".into()));
        }
        let mut data = Vec::with_capacity(rows.len() * names.len());
        for (d, row) in rows.into_iter().enumerate() {
            if row.len() != names.len() {
                return Err(Error::Argument(format!("row {} has {} values, expected {}", d, row.len(), names.len())));
            }
            if row.iter().any(|x| !x.is_finite()) {
                return Err(Error::Argument(format!("row {} has a non-finite value", d)));
            }
            data.extend(row);
        }
        Ok(FeatureMatrix { doc_ids, names, data })
    }

    pub fn n_docs(&self) -> usize {
        self.doc_ids.len()
    }

    pub fn n_features(&self) -> usize {
        self.names.len()
    }

    pub fn doc_ids(&self) -> &[String] {
        &self.doc_ids
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn get(&self, doc: usize, feature: usize) -> f64 {
        self.data[doc * self.names.len() + feature]
    }

    pub fn row(&self, doc: usize) -> &[f64] {
        let f = self.names.len();
        &self.data[doc * f..(doc + 1) * f]
    }

    pub fn column(&self, feature: usize) -> Vec<f64> {
        (0..self.n_docs()).map(|d| self.get(d, feature)).collect()
    }

    /// Keeps the given rows, in the given order.
    pub fn select_rows(&self, rows: &[usize]) -> FeatureMatrix {
        FeatureMatrix {
            doc_ids: rows.iter().map(|&r| self.doc_ids[r].clone()).collect(),
            names: self.names.clone(),
            data: rows.iter().flat_map(|&r| self.row(r).iter().copied()).collect(),
        }
    }

    /// Appends the columns of `other`, matching rows by document id.
    pub fn hstack(&self, other: &FeatureMatrix) -> Result<FeatureMatrix> {
        let idx: HashMap<&str, usize> = other.doc_ids.iter().enumerate().map(|(i, d)| (d.as_str(), i)).collect();
        let mut names = self.names.clone();
        names.extend(other.names.iter().cloned());
        let rows = self
            .doc_ids
            .iter()
            .enumerate()
            .map(|(d, id)| {
                let o = idx
                    .get(id.as_str())
                    .ok_or_else(|| Error::Data(format!("document `{}` missing from extra features", id)))?;
                Ok(self.row(d).iter().chain(other.row(*o)).copied().collect())
            })
            .collect::<Result<_>>()?;
        FeatureMatrix::new(self.doc_ids.clone(), names, rows)
    }

    /// Reads `doc_id,<feature>,...` CSV.
    pub fn read_csv(path: &Path) -> Result<Self> {
        let mut rdr = crate::ingest::csv_reader(crate::ingest::open(path)?);
        let headers = rdr.headers()?.clone();
        let names: Vec<String> = headers.iter().skip(1).map(|h| h.trim().to_string()).collect();
        let mut ids = Vec::new();
        let mut rows = Vec::new();
        for row in rdr.records() {
            let row = row?;
            let line = row.position().map(|p| p.line()).unwrap_or(0);
            ids.push(row.get(0).unwrap_or("").to_string());
            let values = row
                .iter()
                .skip(1)
                .map(|v| v.trim().parse::<f64>())
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(|e| Error::Malformed {
                    path: path.display().to_string(),
                    line,
                    message: e.to_string(),
                })?;
            rows.push(values);
        }
        FeatureMatrix::new(ids, names, rows)
    }
}

/// Result of a label-shuffle test for one feature.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ZScore {
    /// `None` when the permutation null has zero variance.
    pub z: Option<f64>,
    pub obs_mean: f64,
    pub null_mean: f64,
    pub null_std: f64,
}

/// What moves together when labels are shuffled.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ShuffleUnit {
    Documents,
    /// Block id per document; a block's documents share one label and move together.
    Blocks(Vec<usize>),
}

/// Mean feature vector of the documents labelled `group`, standardized against the same
/// mean under `n_rand` random permutations of the labels (label counts preserved).
pub fn shuffle_ztest(
    m: &FeatureMatrix,
    labels: &[String],
    group: &str,
    n_rand: usize,
    seed: u64,
    unit: &ShuffleUnit,
) -> Result<Vec<ZScore>> {
    if labels.len() != m.n_docs() {
        return Err(Error::Argument("one label per document required".into()));
    }
    if n_rand < 2 {
        return Err(Error::Argument("n_rand must be at least 2".into()));
    }
    // unit of permutation → its documents
    let (unit_docs, unit_in_group): (Vec<Vec<usize>>, Vec<bool>) = match unit {
        ShuffleUnit::Documents => ((0..m.n_docs()).map(|d| vec![d]).collect(), labels.iter().map(|l| l == group).collect()),
        ShuffleUnit::Blocks(blocks) => {
            if blocks.len() != m.n_docs() {
                return Err(Error::Argument("one block id per document required".into()));
            }
            let mut by: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
            for (d, &b) in blocks.iter().enumerate() {
                by.entry(b).or_default().push(d);
            }
            let mut members = Vec::with_capacity(by.len());
            let mut flags = Vec::with_capacity(by.len());
            for docs in by.into_values() {
                let first = &labels[docs[0]];
                if docs.iter().any(|&d| labels[d] != *first) {
                    return Err(Error::Argument("labels must be constant within a shuffle block".into()));
                }
                flags.push(first == group);
                members.push(docs);
            }
            (members, flags)
        }
    };
    if !unit_in_group.iter().any(|&g| g) {
        return Err(Error::Argument(format!("group `{}` has no documents", group)));
    }
    let f = m.n_features();
    let group_mean = |in_group: &[bool]| -> Vec<f64> {
        let mut in_doc = vec![false; m.n_docs()];
        for (u, &g) in in_group.iter().enumerate() {
            if g {
                for &d in &unit_docs[u] {
                    in_doc[d] = true;
                }
            }
        }
        let mut sum = vec![0.0; f];
        let mut n = 0usize;
        for (d, _) in in_doc.iter().enumerate().filter(|(_, &g)| g) {
            n += 1;
            sum.iter_mut().zip(m.row(d)).for_each(|(s, x)| *s += x);
        }
        sum.into_iter().map(|s| s / n as f64).collect()
    };
    let observed = group_mean(&unit_in_group);
    let replicates: Vec<Vec<f64>> = (0..n_rand)
        .into_par_iter()
        .map(|r| {
            let mut rng = seed::rng(seed, seed::tags::SHUFFLE, r as u64);
            let mut flags = unit_in_group.clone();
            flags.shuffle(&mut rng);
            group_mean(&flags)
        })
        .collect();
    Ok((0..f)
        .map(|j| {
            let values: Vec<f64> = replicates.iter().map(|r| r[j]).collect();
            let (mean, std) = mean_std(&values);
            ZScore {
                z: (std > 0.0).then(|| (observed[j] - mean) / std),
                obs_mean: observed[j],
                null_mean: mean,
                null_std: std,
            }
        })
        .collect())
}

/// Mean and n−1 standard deviation; the deviation is exactly 0 for constant input.
fn mean_std(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.iter().all(|&v| v == values[0]) {
        return (values[0], 0.0);
    }
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ContributorKind {
    /// Every outlet of the contributor lies in this cluster.
    Purist(String),
    Transitioning,
}

impl ContributorKind {
    pub fn is_transitioning(&self) -> bool {
        matches!(self, ContributorKind::Transitioning)
    }
}

/// Labels each contributor purist of a cluster or transitioning.
pub fn purist_transition_labels(
    contributor_outlets: &BTreeMap<String, BTreeSet<String>>,
    clusters: &Partition,
) -> Result<BTreeMap<String, ContributorKind>> {
    contributor_outlets
        .iter()
        .map(|(c, outlets)| {
            if outlets.is_empty() {
                return Err(Error::Argument(format!("contributor `{}` has no outlets", c)));
            }
            let labels = outlets
                .iter()
                .map(|o| {
                    clusters
                        .label(o)
                        .ok_or_else(|| Error::Argument(format!("outlet `{}` is not in any cluster", o)))
                })
                .collect::<Result<BTreeSet<_>>>()?;
            let kind = if labels.len() == 1 {
                ContributorKind::Purist(labels.into_iter().next().unwrap_or_default().to_string())
            } else {
                ContributorKind::Transitioning
            };
            Ok((c.clone(), kind))
        })
        .collect()
}

pub const PURIST: &str = "purist";
pub const TRANSITIONING: &str = "transitioning";

/// Which side of a within-cluster contrast to report.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Contrast {
    Purist,
    Transitioning,
}

/// Document metadata needed by the within-cluster test.
pub struct DocContext<'a> {
    pub contributor: &'a [String],
    pub outlet: &'a [String],
}

/// Among documents published in `cluster`, tests the target kind's mean features against
/// shuffles of the purist/transitioning labels across contributors.
#[allow(clippy::too_many_arguments)]
pub fn within_cluster_ztest(
    m: &FeatureMatrix,
    docs: &DocContext<'_>,
    kinds: &BTreeMap<String, ContributorKind>,
    clusters: &Partition,
    cluster: &str,
    target: Contrast,
    n_rand: usize,
    seed: u64,
) -> Result<Vec<ZScore>> {
    if docs.contributor.len() != m.n_docs() || docs.outlet.len() != m.n_docs() {
        return Err(Error::Argument("document metadata does not match the feature matrix".into()));
    }
    let rows: Vec<usize> = (0..m.n_docs())
        .filter(|&d| clusters.label(&docs.outlet[d]) == Some(cluster))
        .collect();
    let mut contributor_ids: BTreeMap<&str, usize> = BTreeMap::new();
    let mut blocks = Vec::with_capacity(rows.len());
    let mut labels = Vec::with_capacity(rows.len());
    let mut purists = BTreeSet::new();
    let mut movers = BTreeSet::new();
    for &d in &rows {
        let c = docs.contributor[d].as_str();
        let kind = kinds
            .get(c)
            .ok_or_else(|| Error::Argument(format!("contributor `{}` has no purist/transitioning label", c)))?;
        let next = contributor_ids.len();
        blocks.push(*contributor_ids.entry(c).or_insert(next));
        if kind.is_transitioning() {
            movers.insert(c);
            labels.push(TRANSITIONING.to_string());
        } else {
            purists.insert(c);
            labels.push(PURIST.to_string());
        }
    }
    if purists.len() < 2 || movers.len() < 2 {
        return Err(Error::Data(format!(
            "cluster `{}` has {} purist and {} transitioning contributors; need at least 2 of each",
            cluster,
            purists.len(),
            movers.len()
        )));
    }
    let group = match target {
        Contrast::Purist => PURIST,
        Contrast::Transitioning => TRANSITIONING,
    };
    shuffle_ztest(&m.select_rows(&rows), &labels, group, n_rand, seed, &ShuffleUnit::Blocks(blocks))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Pattern {
    Literal(String),
    /// Written with a trailing `*`.
    Prefix(String),
}

impl Pattern {
    pub fn parse(raw: &str) -> Self {
        let raw = raw.trim().to_lowercase();
        match raw.strip_suffix('*') {
            Some(p) => Pattern::Prefix(p.to_string()),
            None => Pattern::Literal(raw),
        }
    }

    pub fn matches(&self, token: &str) -> bool {
        match self {
            Pattern::Literal(w) => token == w,
            Pattern::Prefix(p) => token.starts_with(p.as_str()),
        }
    }
}

/// Category → word patterns.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Lexicon {
    pub categories: BTreeMap<String, Vec<Pattern>>,
}

impl Lexicon {
    /// Two accepted layouts: `category,pattern` CSV rows, or category header lines each
    /// followed by indented patterns. `#` starts a comment line.
    pub fn parse(content: &str) -> Result<Self> {
        let lines: Vec<&str> = content
            .lines()
            .filter(|l| !l.trim().is_empty() && !l.trim_start().starts_with('#'))
            .collect();
        let mut categories: BTreeMap<String, Vec<Pattern>> = BTreeMap::new();
        let is_csv = lines.first().is_some_and(|l| l.contains(','));
        if is_csv {
            let joined = lines.join("\n");
            let mut rdr = csv::ReaderBuilder::new()
                .has_headers(false)
                .flexible(true)
                .from_reader(joined.as_bytes());
            for row in rdr.records() {
                let row = row?;
                let (cat, pat) = (row.get(0).unwrap_or("").trim(), row.get(1).unwrap_or("").trim());
                if cat == "category" && pat == "pattern" {
                    continue;
                }
                let entry = categories.entry(cat.to_lowercase()).or_default();
                if !pat.is_empty() {
                    entry.push(Pattern::parse(pat));
                }
            }
        } else {
            let mut current: Option<String> = None;
            for line in lines {
                if line.starts_with(char::is_whitespace) {
                    let cat = current
                        .as_ref()
                        .ok_or_else(|| Error::Data("lexicon pattern before any category header".into()))?;
                    categories.get_mut(cat).expect("header inserted").push(Pattern::parse(line));
                } else {
                    let cat = line.trim().trim_end_matches(':').to_lowercase();
                    categories.entry(cat.clone()).or_default();
                    current = Some(cat);
                }
            }
        }
        Ok(Lexicon { categories })
    }

    pub fn read(path: &Path) -> Result<Self> {
        Lexicon::parse(&std::fs::read_to_string(path).map_err(|e| match e.kind() {
            std::io::ErrorKind::NotFound => Error::MissingFile(path.to_path_buf()),
            _ => Error::Io(e),
        })?)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LexiconScore {
    /// Category → percentage of tokens matched.
    pub scores: BTreeMap<String, f64>,
    pub token_count: usize,
}

impl LexiconScore {
    pub fn zero_tokens(&self) -> bool {
        self.token_count == 0
    }
}

/// Percentage of the text's tokens matching each category. Tokens use the same rules as
/// the topic pipeline, without stemming; a token may count toward several categories.
pub fn lexicon_score(text: &str, lex: &Lexicon) -> Result<LexiconScore> {
    if lex.categories.is_empty() {
        return Err(Error::Argument("lexicon has no categories".into()));
    }
    let tokens = crate::text::tokenize(text);
    let n = tokens.len();
    let scores = lex
        .categories
        .iter()
        .map(|(cat, patterns)| {
            let hits = tokens.iter().filter(|t| patterns.iter().any(|p| p.matches(t))).count();
            let score = if n == 0 { 0.0 } else { 100.0 * hits as f64 / n as f64 };
            (cat.clone(), score)
        })
        .collect();
    Ok(LexiconScore { scores, token_count: n })
}

/// Lexicon scores for many documents, one column per category.
pub fn lexicon_matrix(docs: &[(String, String)], lex: &Lexicon) -> Result<FeatureMatrix> {
    let rows = docs
        .par_iter()
        .map(|(_, text)| lexicon_score(text, lex).map(|s| s.scores.into_values().collect()))
        .collect::<Result<Vec<Vec<f64>>>>()?;
    FeatureMatrix::new(
        docs.iter().map(|(id, _)| id.clone()).collect(),
        lex.categories.keys().cloned().collect(),
        rows,
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MannWhitney {
    /// `Σ_ij [x_i > y_j] + ½ [x_i = y_j]`.
    pub u: f64,
    pub p_two_sided: f64,
    /// Whether `p` came from exact enumeration of the permutation distribution.
    pub exact: bool,
}

/// Pairs `|x|·|y|` up to which the p-value is computed exactly.
pub const EXACT_LIMIT: usize = 400;

/// Midranks (1-based) of the pooled sample.
fn midranks(values: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let mut ranks = vec![0.0; values.len()];
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && values[order[j + 1]] == values[order[i]] {
            j += 1;
        }
        let r = (i + j) as f64 / 2.0 + 1.0;
        for &o in &order[i..=j] {
            ranks[o] = r;
        }
        i = j + 1;
    }
    ranks
}

pub fn mann_whitney(x: &[f64], y: &[f64]) -> Result<MannWhitney> {
    if x.is_empty() || y.is_empty() {
        return Err(Error::Argument("both samples must be nonempty".into()));
    }
    if x.iter().chain(y).any(|v| !v.is_finite()) {
        return Err(Error::Argument("samples must be finite".into()));
    }
    let (n1, n2) = (x.len(), y.len());
    let pooled: Vec<f64> = x.iter().chain(y).copied().collect();
    let ranks = midranks(&pooled);
    let rank_sum_x: f64 = ranks[..n1].iter().sum();
    let u = rank_sum_x - (n1 * (n1 + 1)) as f64 / 2.0;

    if pooled.iter().all(|&v| v == pooled[0]) {
        return Ok(MannWhitney { u, p_two_sided: 1.0, exact: true });
    }
    if n1 * n2 <= EXACT_LIMIT {
        let p = exact_p(&ranks, n1, n2);
        return Ok(MannWhitney { u, p_two_sided: p, exact: true });
    }
    let n = (n1 + n2) as f64;
    let mean = (n1 * n2) as f64 / 2.0;
    let mut tie_term = 0.0;
    let mut sorted = pooled.clone();
    sorted.sort_by(f64::total_cmp);
    let mut i = 0;
    while i < sorted.len() {
        let mut j = i;
        while j + 1 < sorted.len() && sorted[j + 1] == sorted[i] {
            j += 1;
        }
        let t = (j - i + 1) as f64;
        tie_term += t * t * t - t;
        i = j + 1;
    }
    let var = (n1 * n2) as f64 / 12.0 * ((n + 1.0) - tie_term / (n * (n - 1.0)));
    let dev = (u - mean).abs() - 0.5;
    let p = if dev <= 0.0 || var <= 0.0 {
        1.0
    } else {
        let normal = Normal::standard();
        (2.0 * normal.sf(dev / var.sqrt())).min(1.0)
    };
    Ok(MannWhitney { u, p_two_sided: p, exact: false })
}

/// Two-sided permutation p-value of the rank sum, by dynamic programming over the
/// distribution of the smaller sample's (doubled) midrank sum.
fn exact_p(ranks: &[f64], n1: usize, n2: usize) -> f64 {
    let doubled: Vec<usize> = ranks.iter().map(|r| (r * 2.0).round() as usize).collect();
    let (k, observed): (usize, usize) = if n1 <= n2 {
        (n1, doubled[..n1].iter().sum())
    } else {
        (n2, doubled[n1..].iter().sum())
    };
    let total: usize = doubled.iter().sum();
    let n = doubled.len();
    let max_sum = doubled.iter().copied().max().unwrap_or(0) * k;
    // counts[j][s]: subsets of size j with doubled sum s
    let mut counts = vec![vec![0.0f64; max_sum + 1]; k + 1];
    counts[0][0] = 1.0;
    for (seen, &r) in doubled.iter().enumerate() {
        for j in (1..=k.min(seen + 1)).rev() {
            let (lo, hi) = counts.split_at_mut(j);
            let prev = &lo[j - 1];
            let cur = &mut hi[0];
            for s in (r..=max_sum).rev() {
                if prev[s - r] != 0.0 {
                    cur[s] += prev[s - r];
                }
            }
        }
    }
    // |n·S − k·total| compared in integers
    let centre = (k * total) as i128;
    let dev = |s: usize| ((n * s) as i128 - centre).abs();
    let obs = dev(observed);
    let (mut extreme, mut all) = (0.0, 0.0);
    for (s, &c) in counts[k].iter().enumerate() {
        all += c;
        if c > 0.0 && dev(s) >= obs {
            extreme += c;
        }
    }
    (extreme / all).min(1.0)
}

pub fn auc_from_u(u: f64, n1: usize, n2: usize) -> Result<f64> {
    if n1 == 0 || n2 == 0 {
        return Err(Error::Argument("sample sizes must be positive".into()));
    }
    Ok(u / (n1 * n2) as f64)
}

/// `min(p · m, 1)` for each p, order preserved.
pub fn bonferroni(pvals: &[f64], m_tests: usize) -> Result<Vec<f64>> {
    if m_tests < pvals.len() {
        return Err(Error::Argument(format!(
            "{} p-values but only {} tests declared",
            pvals.len(),
            m_tests
        )));
    }
    Ok(pvals.iter().map(|p| (p * m_tests as f64).min(1.0)).collect())
}

/// One row of a two-group feature comparison.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureComparison {
    pub feature: String,
    pub u: f64,
    pub auc: f64,
    pub mean_a: f64,
    pub mean_b: f64,
    pub diff: f64,
    pub p: f64,
    pub p_adjusted: f64,
}

/// Mann-Whitney comparison of every feature between documents labelled `a` and `b`,
/// Bonferroni-corrected over the number of features.
pub fn compare_groups(m: &FeatureMatrix, labels: &[String], a: &str, b: &str) -> Result<Vec<FeatureComparison>> {
    let rows_a: Vec<usize> = (0..m.n_docs()).filter(|&d| labels[d] == a).collect();
    let rows_b: Vec<usize> = (0..m.n_docs()).filter(|&d| labels[d] == b).collect();
    if rows_a.is_empty() || rows_b.is_empty() {
        return Err(Error::Data(format!("groups `{}` and `{}` both need documents", a, b)));
    }
    let tests = (0..m.n_features())
        .into_par_iter()
        .map(|f| {
            let x: Vec<f64> = rows_a.iter().map(|&d| m.get(d, f)).collect();
            let y: Vec<f64> = rows_b.iter().map(|&d| m.get(d, f)).collect();
            let mw = mann_whitney(&x, &y)?;
            let mean_a = x.iter().sum::<f64>() / x.len() as f64;
            let mean_b = y.iter().sum::<f64>() / y.len() as f64;
            Ok(FeatureComparison {
                feature: m.names()[f].clone(),
                u: mw.u,
                auc: auc_from_u(mw.u, x.len(), y.len())?,
                mean_a,
                mean_b,
                diff: mean_a - mean_b,
                p: mw.p_two_sided,
                p_adjusted: f64::NAN,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let adjusted = bonferroni(&tests.iter().map(|t| t.p).collect::<Vec<_>>(), tests.len())?;
    Ok(tests
        .into_iter()
        .zip(adjusted)
        .map(|(t, p_adjusted)| FeatureComparison { p_adjusted, ..t })
        .collect())
}
