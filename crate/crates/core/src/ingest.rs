//! Article corpora: parsing, byline cleaning, multi-outlet restriction and
//! contributor-level descriptives.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fs::File;
use std::io::{BufRead, BufReader, Read};
use std::path::Path;

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const DEFAULT_GENERIC_PHRASES: &str = include_str!("../data/generic_phrases.txt");
pub const DEFAULT_OUTLET_NAMES: &str = include_str!("../data/outlet_names.txt");
pub const DEFAULT_HONORIFICS: &str = include_str!("../data/honorifics.txt");

const DATE_FORMAT: &str = "%Y-%m-%d";

/// One publication event.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArticleRecord {
    pub article_id: String,
    pub outlet_id: String,
    pub byline_raw: String,
    /// Set iff the record survived byline cleaning.
    pub contributor_id: Option<String>,
    pub date: Option<NaiveDate>,
    pub text: Option<String>,
}

impl ArticleRecord {
    pub fn new(article_id: &str, outlet_id: &str, byline: &str) -> Self {
        ArticleRecord {
            article_id: article_id.to_string(),
            outlet_id: outlet_id.to_string(),
            byline_raw: byline.to_string(),
            contributor_id: None,
            date: None,
            text: None,
        }
    }

    pub fn with_date(mut self, date: NaiveDate) -> Self {
        self.date = Some(date);
        self
    }

    pub fn with_text(mut self, text: &str) -> Self {
        self.text = Some(text.to_string());
        self
    }

    pub fn with_contributor(mut self, contributor: &str) -> Self {
        self.contributor_id = Some(contributor.to_string());
        self
    }
}

/// An ordered collection of articles with unique ids.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArticleSet {
    records: Vec<ArticleRecord>,
    /// Filters applied so far, in order.
    pub provenance: Vec<String>,
}

impl ArticleSet {
    pub fn new(records: Vec<ArticleRecord>) -> Result<Self> {
        let mut seen = HashSet::with_capacity(records.len());
        for r in &records {
            if !seen.insert(r.article_id.as_str()) {
                return Err(Error::DuplicateId(r.article_id.clone()));
            }
        }
        Ok(ArticleSet {
            records,
            provenance: Vec::new(),
        })
    }

    pub fn records(&self) -> &[ArticleRecord] {
        &self.records
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, ArticleRecord> {
        self.records.iter()
    }

    /// Distinct outlet ids, sorted.
    pub fn outlets(&self) -> BTreeSet<&str> {
        self.records.iter().map(|r| r.outlet_id.as_str()).collect()
    }

    /// Keeps the records matching `pred`; ids stay unique so no re-check is needed.
    pub fn filtered<F>(&self, note: &str, mut pred: F) -> ArticleSet
    where
        F: FnMut(&ArticleRecord) -> bool,
    {
        let mut provenance = self.provenance.clone();
        provenance.push(note.to_string());
        ArticleSet {
            records: self.records.iter().filter(|r| pred(r)).cloned().collect(),
            provenance,
        }
    }

    /// Contributor → set of outlets they published in. Records without a contributor are ignored.
    pub fn contributor_outlets(&self) -> BTreeMap<String, BTreeSet<String>> {
        let mut map: BTreeMap<String, BTreeSet<String>> = BTreeMap::new();
        for r in &self.records {
            if let Some(c) = &r.contributor_id {
                map.entry(c.clone()).or_default().insert(r.outlet_id.clone());
            }
        }
        map
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CorpusFormat {
    Csv,
    Jsonl,
}

impl CorpusFormat {
    /// Guesses the format from the file extension (`.jsonl`/`.ndjson` → JSON lines, else CSV).
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some("jsonl") | Some("ndjson") | Some("json") => CorpusFormat::Jsonl,
            _ => CorpusFormat::Csv,
        }
    }
}

/// Reads a raw corpus. `contributor_id` is left unset on every record.
pub fn parse_corpus(path: &Path, format: CorpusFormat) -> Result<ArticleSet> {
    let file = open(path)?;
    let name = path.display().to_string();
    let mut set = match format {
        CorpusFormat::Csv => parse_csv(file, &name, false)?,
        CorpusFormat::Jsonl => parse_jsonl(file, &name)?,
    };
    set.provenance.push(format!("parsed {}", name));
    Ok(set)
}

/// Reads a cleaned article file written by [`crate::export::write_articles`],
/// keeping its `contributor_id` column.
pub fn read_clean_articles(path: &Path) -> Result<ArticleSet> {
    let file = open(path)?;
    let mut set = parse_csv(file, &path.display().to_string(), true)?;
    set.provenance.push(format!("loaded cleaned articles {}", path.display()));
    Ok(set)
}

pub(crate) fn open(path: &Path) -> Result<File> {
    File::open(path).map_err(|e| match e.kind() {
        std::io::ErrorKind::NotFound => Error::MissingFile(path.to_path_buf()),
        _ => Error::Io(e),
    })
}

fn malformed(path: &str, line: u64, message: impl Into<String>) -> Error {
    Error::Malformed {
        path: path.to_string(),
        line,
        message: message.into(),
    }
}

fn parse_date(raw: &str, path: &str, line: u64) -> Result<Option<NaiveDate>> {
    let raw = raw.trim();
    if raw.is_empty() {
        return Ok(None);
    }
    NaiveDate::parse_from_str(raw, DATE_FORMAT)
        .map(Some)
        .map_err(|_| malformed(path, line, format!("unparseable date `{}`", raw)))
}

fn non_empty(s: &str) -> Option<String> {
    if s.is_empty() {
        None
    } else {
        Some(s.to_string())
    }
}

pub(crate) fn csv_reader<R: Read>(reader: R) -> csv::Reader<R> {
    csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .has_headers(true)
        .from_reader(reader)
}

fn parse_csv<R: Read>(reader: R, path: &str, with_contributor: bool) -> Result<ArticleSet> {
    let mut rdr = csv_reader(reader);
    let headers = rdr
        .headers()
        .map_err(|e| malformed(path, 1, e.to_string()))?
        .clone();
    let col = |name: &str| headers.iter().position(|h| h.trim() == name);
    let (id_col, outlet_col, byline_col) = match (col("article_id"), col("outlet_id"), col("byline")) {
        (Some(a), Some(o), Some(b)) => (a, o, b),
        _ => {
            return Err(malformed(
                path,
                1,
                "header must include article_id, outlet_id and byline",
            ))
        }
    };
    let date_col = col("date");
    let text_col = col("text");
    let contributor_col = if with_contributor { col("contributor_id") } else { None };

    let mut records = Vec::new();
    let mut seen = HashSet::new();
    for row in rdr.records() {
        let row = row.map_err(|e| {
            let line = e.position().map(|p| p.line()).unwrap_or(0);
            malformed(path, line, e.to_string())
        })?;
        let line = row.position().map(|p| p.line()).unwrap_or(0);
        let field = |i: usize| row.get(i).unwrap_or("");
        let article_id = field(id_col).trim();
        let outlet_id = field(outlet_col).trim();
        if article_id.is_empty() || outlet_id.is_empty() {
            return Err(malformed(path, line, "empty article_id or outlet_id"));
        }
        if !seen.insert(article_id.to_string()) {
            return Err(Error::DuplicateId(article_id.to_string()));
        }
        records.push(ArticleRecord {
            article_id: article_id.to_string(),
            outlet_id: outlet_id.to_string(),
            byline_raw: field(byline_col).to_string(),
            contributor_id: contributor_col.and_then(|c| non_empty(field(c))),
            date: match date_col {
                Some(c) => parse_date(field(c), path, line)?,
                None => None,
            },
            text: text_col.and_then(|c| non_empty(field(c))),
        });
    }
    Ok(ArticleSet {
        records,
        provenance: Vec::new(),
    })
}

fn parse_jsonl<R: Read>(reader: R, path: &str) -> Result<ArticleSet> {
    let mut records = Vec::new();
    let mut seen = HashSet::new();
    for (i, line) in BufReader::new(reader).lines().enumerate() {
        let line_no = i as u64 + 1;
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let value: serde_json::Value =
            serde_json::from_str(&line).map_err(|e| malformed(path, line_no, e.to_string()))?;
        let required = |key: &str| -> Result<String> {
            match value.get(key) {
                Some(serde_json::Value::String(s)) => Ok(s.clone()),
                Some(serde_json::Value::Number(n)) if key != "byline" => Ok(n.to_string()),
                Some(_) => Err(malformed(path, line_no, format!("`{}` must be a string", key))),
                None => Err(malformed(path, line_no, format!("missing key `{}`", key))),
            }
        };
        let optional = |key: &str| -> Result<Option<String>> {
            match value.get(key) {
                None | Some(serde_json::Value::Null) => Ok(None),
                Some(serde_json::Value::String(s)) => Ok(non_empty(s)),
                Some(_) => Err(malformed(path, line_no, format!("`{}` must be a string", key))),
            }
        };
        let article_id = required("article_id")?;
        let outlet_id = required("outlet_id")?;
        let byline_raw = required("byline")?;
        if !seen.insert(article_id.clone()) {
            return Err(Error::DuplicateId(article_id));
        }
        let date = match optional("date")? {
            Some(d) => parse_date(&d, path, line_no)?,
            None => None,
        };
        records.push(ArticleRecord {
            article_id,
            outlet_id,
            byline_raw,
            contributor_id: None,
            date,
            text: optional("text")?,
        });
    }
    Ok(ArticleSet {
        records,
        provenance: Vec::new(),
    })
}

/// Parses a one-entry-per-line list; blank lines and `#` comments are skipped, entries lowercased.
pub fn parse_phrase_list(content: &str) -> Vec<String> {
    content
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(str::to_lowercase)
        .collect()
}

pub fn read_phrase_list(path: &Path) -> Result<Vec<String>> {
    let mut content = String::new();
    open(path)?.read_to_string(&mut content)?;
    Ok(parse_phrase_list(&content))
}

/// Rules for turning a raw byline into a contributor id.
#[derive(Debug, Clone)]
pub struct BylineRules {
    pub generic_phrases: Vec<String>,
    pub outlet_names: Vec<String>,
    /// Leading tokens stripped before matching (compared without trailing dots).
    pub honorifics: Vec<String>,
}

impl Default for BylineRules {
    fn default() -> Self {
        BylineRules {
            generic_phrases: parse_phrase_list(DEFAULT_GENERIC_PHRASES),
            outlet_names: parse_phrase_list(DEFAULT_OUTLET_NAMES),
            honorifics: parse_phrase_list(DEFAULT_HONORIFICS),
        }
    }
}

impl BylineRules {
    pub fn new(generic_phrases: Vec<String>, outlet_names: Vec<String>) -> Self {
        BylineRules {
            generic_phrases,
            outlet_names,
            ..BylineRules::default()
        }
    }

    /// Lowercase, trim, collapse whitespace, then drop leading honorifics.
    pub fn normalize(&self, byline: &str) -> String {
        let lower = byline.to_lowercase();
        let mut tokens: Vec<&str> = lower.split_whitespace().collect();
        let honorifics: HashSet<&str> = self
            .honorifics
            .iter()
            .map(|h| h.trim_end_matches('.'))
            .collect();
        while tokens.len() > 1 && honorifics.contains(tokens[0].trim_end_matches('.')) {
            tokens.remove(0);
        }
        tokens.join(" ")
    }

    /// The contributor id for a byline, or `None` if the byline must be dropped.
    pub fn contributor_id(&self, byline: &str) -> Option<String> {
        let norm = self.normalize(byline);
        if norm.is_empty() || has_multiple_names(&norm) {
            return None;
        }
        let is_listed = |list: &[String]| list.contains(&norm);
        if is_listed(&self.generic_phrases) || is_listed(&self.outlet_names) {
            return None;
        }
        Some(norm)
    }
}

fn has_multiple_names(normalized: &str) -> bool {
    normalized.contains(',') || normalized.contains('&') || normalized.contains(" and ")
}

/// Drops non-person and multi-name bylines; survivors get `contributor_id` = normalized byline.
pub fn clean_bylines(articles: &ArticleSet, rules: &BylineRules) -> ArticleSet {
    let mut provenance = articles.provenance.clone();
    provenance.push("clean_bylines".to_string());
    let records = articles
        .iter()
        .filter_map(|r| {
            rules.contributor_id(&r.byline_raw).map(|id| ArticleRecord {
                contributor_id: Some(id),
                ..r.clone()
            })
        })
        .collect();
    ArticleSet { records, provenance }
}

/// Keeps only records by contributors who appear in at least `min_outlets` distinct outlets.
pub fn restrict_multi_outlet(articles: &ArticleSet, min_outlets: usize) -> Result<ArticleSet> {
    if min_outlets < 1 {
        return Err(Error::Argument("min_outlets must be at least 1".into()));
    }
    if let Some(r) = articles.iter().find(|r| r.contributor_id.is_none()) {
        return Err(Error::Argument(format!(
            "article `{}` has no contributor id; run clean_bylines first",
            r.article_id
        )));
    }
    let keep: HashSet<String> = articles
        .contributor_outlets()
        .into_iter()
        .filter(|(_, outlets)| outlets.len() >= min_outlets)
        .map(|(c, _)| c)
        .collect();
    let out = articles.filtered(&format!("restrict_multi_outlet(min_outlets={})", min_outlets), |r| {
        keep.contains(r.contributor_id.as_deref().unwrap_or_default())
    });
    // A contributor's outlet count depends only on their own records, so one pass is a fixed point.
    debug_assert!(out
        .contributor_outlets()
        .values()
        .all(|o| o.len() >= min_outlets));
    Ok(out)
}

/// Per-contributor activity descriptives.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContributorProfile {
    pub contributor_id: String,
    pub story_count: usize,
    pub outlet_count: usize,
    /// Whole days between first and last dated story; `None` when no story is dated.
    pub active_span_days: Option<i64>,
}

/// One profile per contributor, sorted by id. Records without a contributor are skipped.
pub fn contributor_stats(articles: &ArticleSet) -> Vec<ContributorProfile> {
    struct Acc<'a> {
        stories: usize,
        outlets: BTreeSet<&'a str>,
        first: Option<NaiveDate>,
        last: Option<NaiveDate>,
    }
    let mut by: BTreeMap<&str, Acc> = BTreeMap::new();
    for r in articles.iter() {
        let Some(c) = r.contributor_id.as_deref() else {
            continue;
        };
        let acc = by.entry(c).or_insert(Acc {
            stories: 0,
            outlets: BTreeSet::new(),
            first: None,
            last: None,
        });
        acc.stories += 1;
        acc.outlets.insert(&r.outlet_id);
        if let Some(d) = r.date {
            acc.first = Some(acc.first.map_or(d, |f| f.min(d)));
            acc.last = Some(acc.last.map_or(d, |l| l.max(d)));
        }
    }
    by.into_iter()
        .map(|(c, acc)| ContributorProfile {
            contributor_id: c.to_string(),
            story_count: acc.stories,
            outlet_count: acc.outlets.len(),
            active_span_days: match (acc.first, acc.last) {
                (Some(f), Some(l)) => Some((l - f).num_days()),
                _ => None,
            },
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    fn date(s: &str) -> NaiveDate {
        NaiveDate::parse_from_str(s, DATE_FORMAT).unwrap()
    }

    fn write_tmp(content: &str, ext: &str) -> tempfile::NamedTempFile {
        let mut f = tempfile::Builder::new().suffix(ext).tempfile().unwrap();
        f.write_all(content.as_bytes()).unwrap();
        f
    }

    fn cleaned(rows: &[(&str, &str, &str)]) -> ArticleSet {
        ArticleSet::new(
            rows.iter()
                .map(|(id, o, c)| ArticleRecord::new(id, o, c).with_contributor(c))
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn parses_csv_row() {
        let f = write_tmp("article_id,outlet_id,byline,date\na1,nyt,\"Jane Doe\",2016-05-01\n", ".csv");
        let set = parse_corpus(f.path(), CorpusFormat::Csv).unwrap();
        assert_eq!(set.len(), 1);
        let r = &set.records()[0];
        assert_eq!(r.article_id, "a1");
        assert_eq!(r.outlet_id, "nyt");
        assert_eq!(r.byline_raw, "Jane Doe");
        assert_eq!(r.date, Some(date("2016-05-01")));
        assert_eq!(r.contributor_id, None);
    }

    #[test]
    fn csv_quoting_preserves_commas() {
        let f = write_tmp(
            "article_id,outlet_id,byline,text\na1,nyt,\"Doe, Jane\",\"Hello, \"\"world\"\"\"\n",
            ".csv",
        );
        let set = parse_corpus(f.path(), CorpusFormat::Csv).unwrap();
        assert_eq!(set.records()[0].byline_raw, "Doe, Jane");
        assert_eq!(set.records()[0].text.as_deref(), Some("Hello, \"world\""));
    }

    #[test]
    fn duplicate_id_is_rejected() {
        let f = write_tmp("article_id,outlet_id,byline\na1,nyt,x\na1,vox,y\n", ".csv");
        assert!(matches!(
            parse_corpus(f.path(), CorpusFormat::Csv),
            Err(Error::DuplicateId(id)) if id == "a1"
        ));
    }

    #[test]
    fn short_csv_row_names_line() {
        let f = write_tmp("article_id,outlet_id,byline\na1,nyt,x\na2,vox\n", ".csv");
        match parse_corpus(f.path(), CorpusFormat::Csv) {
            Err(Error::Malformed { line, .. }) => assert_eq!(line, 3),
            other => panic!("unexpected {:?}", other),
        }
    }

    #[test]
    fn jsonl_missing_byline_is_malformed() {
        let f = write_tmp(
            "{\"article_id\":\"a1\",\"outlet_id\":\"nyt\",\"byline\":\"Jane Doe\"}\n{\"article_id\":\"a2\",\"outlet_id\":\"nyt\"}\n",
            ".jsonl",
        );
        match parse_corpus(f.path(), CorpusFormat::Jsonl) {
            Err(Error::Malformed { line, message, .. }) => {
                assert_eq!(line, 2);
                assert!(message.contains("byline"));
            }
            other => panic!("unexpected {:?}", other),
        }
    }

    #[test]
    fn jsonl_parses_optional_fields() {
        let f = write_tmp(
            "{\"article_id\":\"a1\",\"outlet_id\":\"nyt\",\"byline\":\"Jane\",\"date\":\"2016-01-02\",\"text\":\"hi\"}\n\n",
            ".jsonl",
        );
        let set = parse_corpus(f.path(), CorpusFormat::from_path(f.path())).unwrap();
        assert_eq!(set.records()[0].date, Some(date("2016-01-02")));
        assert_eq!(set.records()[0].text.as_deref(), Some("hi"));
    }

    #[test]
    fn missing_file_reports_path() {
        let err = parse_corpus(Path::new("/no/such/file.csv"), CorpusFormat::Csv).unwrap_err();
        assert!(err.to_string().contains("/no/such/file.csv"));
        assert_eq!(err.exit_code(), 2);
    }

    #[test]
    fn byline_cleaning_rules() {
        let rules = BylineRules::default();
        assert_eq!(rules.contributor_id("The Associated Press"), None);
        assert_eq!(rules.contributor_id("NPR Staff"), None);
        assert_eq!(rules.contributor_id("Anonymous"), None);
        assert_eq!(rules.contributor_id("Jane Doe and John Roe"), None);
        assert_eq!(rules.contributor_id("Jane Doe & John Roe"), None);
        assert_eq!(rules.contributor_id("Doe, Jane"), None);
        assert_eq!(rules.contributor_id("Jane Doe"), Some("jane doe".into()));
        assert_eq!(rules.contributor_id("  By Dr.   Jane  DOE "), Some("jane doe".into()));
        assert_eq!(rules.contributor_id("   "), None);
        // "and" inside a name is not a separator
        assert_eq!(rules.contributor_id("Sandy Anderson"), Some("sandy anderson".into()));
    }

    #[test]
    fn clean_is_idempotent_and_pure() {
        let set = ArticleSet::new(vec![
            ArticleRecord::new("a", "nyt", "Jane Doe"),
            ArticleRecord::new("b", "nyt", "The Editors"),
            ArticleRecord::new("c", "vox", "Jane Doe and John Roe"),
            ArticleRecord::new("d", "vox", "Mr. John Roe"),
        ])
        .unwrap();
        let before = set.clone();
        let rules = BylineRules::default();
        let once = clean_bylines(&set, &rules);
        let twice = clean_bylines(&once, &rules);
        assert_eq!(set, before);
        assert_eq!(once.records(), twice.records());
        let ids: Vec<_> = once.iter().map(|r| r.contributor_id.clone().unwrap()).collect();
        assert_eq!(ids, vec!["jane doe", "john roe"]);
    }

    #[test]
    fn restrict_thresholds() {
        let set = cleaned(&[("1", "nyt", "solo"), ("2", "nyt", "both"), ("3", "guardian", "both")]);
        let out = restrict_multi_outlet(&set, 2).unwrap();
        let ids: Vec<_> = out.iter().map(|r| r.article_id.as_str()).collect();
        assert_eq!(ids, vec!["2", "3"]);
        assert_eq!(restrict_multi_outlet(&out, 2).unwrap().records(), out.records());
        assert!(matches!(restrict_multi_outlet(&set, 0), Err(Error::Argument(_))));
    }

    #[test]
    fn restrict_requires_contributors() {
        let set = ArticleSet::new(vec![ArticleRecord::new("a", "nyt", "x")]).unwrap();
        assert!(restrict_multi_outlet(&set, 1).is_err());
    }

    #[test]
    fn contributor_profiles() {
        let set = ArticleSet::new(vec![
            ArticleRecord::new("1", "nyt", "a").with_contributor("a").with_date(date("2016-01-01")),
            ArticleRecord::new("2", "vox", "a").with_contributor("a").with_date(date("2016-01-11")),
            ArticleRecord::new("3", "nyt", "a").with_contributor("a").with_date(date("2016-01-05")),
            ArticleRecord::new("4", "nyt", "b").with_contributor("b").with_date(date("2017-03-03")),
            ArticleRecord::new("5", "nyt", "c").with_contributor("c"),
        ])
        .unwrap();
        let stats = contributor_stats(&set);
        assert_eq!(stats.len(), 3);
        assert_eq!((stats[0].story_count, stats[0].outlet_count, stats[0].active_span_days), (3, 2, Some(10)));
        assert_eq!((stats[1].story_count, stats[1].outlet_count, stats[1].active_span_days), (1, 1, Some(0)));
        assert_eq!(stats[2].active_span_days, None);
    }
}
