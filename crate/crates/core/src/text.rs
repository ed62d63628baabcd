//! Text preprocessing: tokenize → stopwords → Porter stem → document-frequency filter.

use std::collections::{BTreeMap, HashSet};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const DEFAULT_STOPWORDS: &str = include_str!("../data/stopwords_en.txt");

fn is_apostrophe(c: char) -> bool {
    matches!(c, '\'' | '\u{2019}' | '\u{2018}' | '\u{02BC}')
}

/// Lowercases, deletes apostrophes, then splits on every non-alphanumeric character.
pub fn tokenize(text: &str) -> Vec<String> {
    let cleaned: String = text
        .chars()
        .filter(|c| !is_apostrophe(*c))
        .flat_map(char::to_lowercase)
        .collect();
    cleaned
        .split(|c: char| !c.is_alphanumeric())
        .filter(|t| !t.is_empty())
        .map(String::from)
        .collect()
}

/// A stopword set. Entries are normalized like tokens (lowercase, apostrophes removed).
#[derive(Debug, Clone, Default)]
pub struct Stoplist(HashSet<String>);

impl Stoplist {
    pub fn parse(content: &str) -> Self {
        Stoplist(
            crate::ingest::parse_phrase_list(content)
                .into_iter()
                .map(|w| w.chars().filter(|c| !is_apostrophe(*c)).collect())
                .collect(),
        )
    }

    pub fn english() -> Self {
        Stoplist::parse(DEFAULT_STOPWORDS)
    }

    pub fn contains(&self, token: &str) -> bool {
        self.0.contains(token)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

pub fn remove_stopwords(tokens: Vec<String>, stoplist: &Stoplist) -> Vec<String> {
    tokens.into_iter().filter(|t| !stoplist.contains(t)).collect()
}

pub fn stem(tokens: Vec<String>) -> Vec<String> {
    tokens.into_iter().map(|t| porter_stem(&t)).collect()
}

/// The original Porter (1980) suffix-stripping algorithm.
///
/// Words of one or two letters and words with non-ASCII-lowercase characters are
/// returned unchanged.
pub fn porter_stem(word: &str) -> String {
    if word.len() <= 2 || !word.bytes().all(|b| b.is_ascii_lowercase()) {
        return word.to_string();
    }
    let mut s = Stemmer { b: word.as_bytes().to_vec() };
    s.step1a();
    s.step1b();
    s.step1c();
    s.step2();
    s.step3();
    s.step4();
    s.step5();
    String::from_utf8(s.b).expect("ascii")
}

struct Stemmer {
    b: Vec<u8>,
}

impl Stemmer {
    fn cons(&self, i: usize) -> bool {
        match self.b[i] {
            b'a' | b'e' | b'i' | b'o' | b'u' => false,
            b'y' => i == 0 || !self.cons(i - 1),
            _ => true,
        }
    }

    /// Number of VC sequences in `b[..len]`.
    fn measure(&self, len: usize) -> usize {
        let mut m = 0;
        let mut i = 0;
        while i < len && self.cons(i) {
            i += 1;
        }
        loop {
            while i < len && !self.cons(i) {
                i += 1;
            }
            if i >= len {
                return m;
            }
            while i < len && self.cons(i) {
                i += 1;
            }
            m += 1;
        }
    }

    fn has_vowel(&self, len: usize) -> bool {
        (0..len).any(|i| !self.cons(i))
    }

    fn double_cons(&self, len: usize) -> bool {
        len >= 2 && self.b[len - 1] == self.b[len - 2] && self.cons(len - 1)
    }

    /// `b[..len]` ends consonant–vowel–consonant, the last not w, x or y.
    fn cvc(&self, len: usize) -> bool {
        len >= 3
            && self.cons(len - 3)
            && !self.cons(len - 2)
            && self.cons(len - 1)
            && !matches!(self.b[len - 1], b'w' | b'x' | b'y')
    }

    fn ends(&self, suffix: &str) -> bool {
        self.b.ends_with(suffix.as_bytes())
    }

    fn stem_len(&self, suffix: &str) -> usize {
        self.b.len() - suffix.len()
    }

    fn replace(&mut self, suffix: &str, with: &str) {
        let n = self.stem_len(suffix);
        self.b.truncate(n);
        self.b.extend_from_slice(with.as_bytes());
    }

    /// Applies the longest matching rule if its stem has measure > `min_m`.
    fn rules(&mut self, rules: &[(&str, &str)], min_m: usize) {
        let Some(&(suffix, with)) = rules
            .iter()
            .filter(|(s, _)| self.ends(s) && self.b.len() > s.len())
            .max_by_key(|(s, _)| s.len())
        else {
            return;
        };
        let n = self.stem_len(suffix);
        if self.measure(n) > min_m {
            self.replace(suffix, with);
        }
    }

    fn step1a(&mut self) {
        if self.ends("sses") {
            self.replace("sses", "ss");
        } else if self.ends("ies") {
            self.replace("ies", "i");
        } else if self.ends("ss") {
        } else if self.ends("s") {
            self.replace("s", "");
        }
    }

    fn step1b(&mut self) {
        if self.ends("eed") {
            if self.measure(self.stem_len("eed")) > 0 {
                self.replace("eed", "ee");
            }
            return;
        }
        let stripped = if self.ends("ed") && self.has_vowel(self.stem_len("ed")) {
            self.replace("ed", "");
            true
        } else if self.ends("ing") && self.has_vowel(self.stem_len("ing")) {
            self.replace("ing", "");
            true
        } else {
            false
        };
        if !stripped {
            return;
        }
        let len = self.b.len();
        if self.ends("at") || self.ends("bl") || self.ends("iz") {
            self.b.push(b'e');
        } else if self.double_cons(len) && !matches!(self.b[len - 1], b'l' | b's' | b'z') {
            self.b.pop();
        } else if self.measure(len) == 1 && self.cvc(len) {
            self.b.push(b'e');
        }
    }

    fn step1c(&mut self) {
        if self.ends("y") && self.has_vowel(self.b.len() - 1) {
            let n = self.b.len();
            self.b[n - 1] = b'i';
        }
    }

    fn step2(&mut self) {
        const RULES: &[(&str, &str)] = &[
            ("ational", "ate"),
            ("tional", "tion"),
            ("enci", "ence"),
            ("anci", "ance"),
            ("izer", "ize"),
            ("abli", "able"),
            ("alli", "al"),
            ("entli", "ent"),
            ("eli", "e"),
            ("ousli", "ous"),
            ("ization", "ize"),
            ("ation", "ate"),
            ("ator", "ate"),
            ("alism", "al"),
            ("iveness", "ive"),
            ("fulness", "ful"),
            ("ousness", "ous"),
            ("aliti", "al"),
            ("iviti", "ive"),
            ("biliti", "ble"),
        ];
        self.rules(RULES, 0);
    }

    fn step3(&mut self) {
        const RULES: &[(&str, &str)] = &[
            ("icate", "ic"),
            ("ative", ""),
            ("alize", "al"),
            ("iciti", "ic"),
            ("ical", "ic"),
            ("ful", ""),
            ("ness", ""),
        ];
        self.rules(RULES, 0);
    }

    fn step4(&mut self) {
        const SUFFIXES: &[&str] = &[
            "al", "ance", "ence", "er", "ic", "able", "ible", "ant", "ement", "ment", "ent", "ion", "ou", "ism",
            "ate", "iti", "ous", "ive", "ize",
        ];
        let Some(suffix) = SUFFIXES
            .iter()
            .filter(|s| self.ends(s) && self.b.len() > s.len())
            .max_by_key(|s| s.len())
        else {
            return;
        };
        let n = self.stem_len(suffix);
        if self.measure(n) <= 1 {
            return;
        }
        if *suffix == "ion" && !matches!(self.b[n - 1], b's' | b't') {
            return;
        }
        self.b.truncate(n);
    }

    fn step5(&mut self) {
        if self.ends("e") {
            let n = self.b.len() - 1;
            let m = self.measure(n);
            if m > 1 || (m == 1 && !self.cvc(n)) {
                self.b.truncate(n);
            }
        }
        let len = self.b.len();
        if self.b[len - 1] == b'l' && self.double_cons(len) && self.measure(len) > 1 {
            self.b.pop();
        }
    }
}

/// Document-frequency bounds. A term is dropped when its document frequency is strictly
/// above `max_fraction` of the corpus or strictly below `min_docs`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FrequencyFilter {
    pub min_docs: usize,
    /// `(numerator, denominator)`, compared exactly: drop if `df · den > N · num`.
    pub max_fraction: (usize, usize),
}

impl Default for FrequencyFilter {
    fn default() -> Self {
        FrequencyFilter {
            min_docs: 10,
            max_fraction: (1, 3),
        }
    }
}

impl FrequencyFilter {
    pub fn keeps(&self, df: usize, n_docs: usize) -> bool {
        let (num, den) = self.max_fraction;
        df >= self.min_docs && df * den <= n_docs * num
    }
}

/// Term ↔ index map with document frequencies; indices follow lexicographic term order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Vocabulary {
    terms: Vec<String>,
    doc_freq: Vec<usize>,
}

impl Vocabulary {
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &[String] {
        &self.terms
    }

    pub fn term(&self, index: usize) -> &str {
        &self.terms[index]
    }

    pub fn doc_freq(&self, index: usize) -> usize {
        self.doc_freq[index]
    }

    pub fn index(&self, term: &str) -> Option<usize> {
        self.terms.binary_search_by(|t| t.as_str().cmp(term)).ok()
    }
}

/// Bag-of-words documents over a [`Vocabulary`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DocTermCorpus {
    pub doc_ids: Vec<String>,
    /// Per document: `(term index, count)` sorted by index.
    pub docs: Vec<Vec<(u32, u32)>>,
    pub vocab_size: usize,
}

impl DocTermCorpus {
    pub fn len(&self) -> usize {
        self.docs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.docs.is_empty()
    }

    pub fn doc_len(&self, d: usize) -> usize {
        self.docs[d].iter().map(|&(_, c)| c as usize).sum()
    }

    pub fn total_tokens(&self) -> usize {
        (0..self.docs.len()).map(|d| self.doc_len(d)).sum()
    }

    /// Builds a corpus directly from index bags (used for synthetic data).
    pub fn from_bags(doc_ids: Vec<String>, bags: Vec<Vec<u32>>, vocab_size: usize) -> Result<Self> {
        let docs = bags
            .into_iter()
            .map(|bag| {
                let mut counts: BTreeMap<u32, u32> = BTreeMap::new();
                for w in bag {
                    if w as usize >= vocab_size {
                        return Err(Error::Argument(format!("term index {} out of range", w)));
                    }
                    *counts.entry(w).or_default() += 1;
                }
                Ok(counts.into_iter().collect())
            })
            .collect::<Result<_>>()?;
        Ok(DocTermCorpus {
            doc_ids,
            docs,
            vocab_size,
        })
    }
}

/// Tokens of one document after stopword removal and stemming.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TokenizedDoc {
    pub id: String,
    pub tokens: Vec<String>,
}

/// Drops too-rare and too-common terms and indexes the survivors densely.
pub fn frequency_filter(docs: &[TokenizedDoc], filter: &FrequencyFilter) -> Result<(Vocabulary, DocTermCorpus)> {
    if docs.is_empty() {
        return Err(Error::Argument("corpus has no documents".into()));
    }
    let mut df: BTreeMap<&str, usize> = BTreeMap::new();
    for d in docs {
        let unique: HashSet<&str> = d.tokens.iter().map(String::as_str).collect();
        for t in unique {
            *df.entry(t).or_default() += 1;
        }
    }
    let kept: Vec<(&str, usize)> = df
        .into_iter()
        .filter(|&(_, f)| filter.keeps(f, docs.len()))
        .collect();
    if kept.is_empty() {
        return Err(Error::Data("vocabulary is empty after frequency filtering".into()));
    }
    let vocab = Vocabulary {
        terms: kept.iter().map(|(t, _)| t.to_string()).collect(),
        doc_freq: kept.iter().map(|&(_, f)| f).collect(),
    };
    let bags = docs
        .iter()
        .map(|d| d.tokens.iter().filter_map(|t| vocab.index(t).map(|i| i as u32)).collect())
        .collect();
    let corpus = DocTermCorpus::from_bags(docs.iter().map(|d| d.id.clone()).collect(), bags, vocab.len())?;
    Ok((vocab, corpus))
}

/// The full preprocessing recipe.
#[derive(Debug, Clone, Default)]
pub struct TextPipeline {
    pub stoplist: Stoplist,
    pub filter: FrequencyFilter,
}

impl TextPipeline {
    pub fn english() -> Self {
        TextPipeline {
            stoplist: Stoplist::english(),
            filter: FrequencyFilter::default(),
        }
    }

    pub fn preprocess(&self, text: &str) -> Vec<String> {
        stem(remove_stopwords(tokenize(text), &self.stoplist))
    }

    /// `(doc id, text)` pairs → vocabulary and corpus, in input document order.
    pub fn run(&self, docs: &[(String, String)]) -> Result<(Vocabulary, DocTermCorpus)> {
        let tokenized: Vec<TokenizedDoc> = docs
            .par_iter()
            .map(|(id, text)| TokenizedDoc {
                id: id.clone(),
                tokens: self.preprocess(text),
            })
            .collect();
        frequency_filter(&tokenized, &self.filter)
    }
}
