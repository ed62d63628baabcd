//! Synthetic corpora with known structure: planted outlet blocks, topic corpora with
//! known topic–word distributions, and article text for the example dataset.

use chrono::NaiveDate;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_distr::{Distribution, Gamma};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ingest::{ArticleRecord, ArticleSet};
use crate::partition::Partition;
use crate::seed::{self, tags};
use crate::text::DocTermCorpus;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlantedConfig {
    /// Outlets per block.
    pub block_sizes: Vec<usize>,
    pub contributors: usize,
    /// Probability that each outlet a contributor writes for is in their home block.
    pub within: f64,
    /// Inclusive range of distinct outlets per contributor.
    pub outlets_per_contributor: (usize, usize),
    /// Inclusive range of articles per (contributor, outlet).
    pub articles_per_outlet: (usize, usize),
    pub home: HomeAssignment,
    pub seed: u64,
}

/// How contributors are spread over home blocks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HomeAssignment {
    /// Equal expected number of contributors per block.
    Even,
    /// Probability proportional to block size.
    BySize,
}

impl Default for PlantedConfig {
    fn default() -> Self {
        PlantedConfig {
            block_sizes: vec![9, 4],
            contributors: 350,
            within: 0.9,
            outlets_per_contributor: (2, 4),
            articles_per_outlet: (1, 3),
            home: HomeAssignment::Even,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone)]
pub struct PlantedCorpus {
    pub articles: ArticleSet,
    /// Outlet → block label (`block_1`, `block_2`, ...).
    pub blocks: Partition,
    /// Home block index of each contributor, in contributor id order.
    pub home: Vec<usize>,
}

pub fn outlet_name(block: usize, i: usize) -> String {
    format!("b{}_outlet_{:02}", block + 1, i + 1)
}

/// Contributors pick a home block (see [`HomeAssignment`]), then
/// choose distinct outlets one at a time: from the home block with probability
/// `within`, otherwise from another block. Contributor ids are already set.
pub fn planted_corpus(cfg: &PlantedConfig) -> Result<PlantedCorpus> {
    let (lo, hi) = cfg.outlets_per_contributor;
    if cfg.block_sizes.len() < 2 || cfg.block_sizes.iter().any(|&s| s < hi) || lo == 0 || lo > hi {
        return Err(Error::Argument(
            "need at least two blocks, each at least as large as the maximum outlets per contributor".into(),
        ));
    }
    if !(0.0..=1.0).contains(&cfg.within) {
        return Err(Error::Argument("within must lie in [0, 1]".into()));
    }
    let mut rng = seed::rng(cfg.seed, tags::SYNTHETIC, 0);
    let total: usize = cfg.block_sizes.iter().sum();
    let names: Vec<Vec<String>> = cfg
        .block_sizes
        .iter()
        .enumerate()
        .map(|(b, &s)| (0..s).map(|i| outlet_name(b, i)).collect())
        .collect();
    let start = NaiveDate::from_ymd_opt(2016, 1, 1).expect("valid date");

    let mut records = Vec::new();
    let mut home = Vec::with_capacity(cfg.contributors);
    for c in 0..cfg.contributors {
        let h = match cfg.home {
            HomeAssignment::Even => rng.gen_range(0..cfg.block_sizes.len()),
            HomeAssignment::BySize => {
                let mut r = rng.gen_range(0..total);
                cfg.block_sizes
                    .iter()
                    .position(|&s| {
                        if r < s {
                            true
                        } else {
                            r -= s;
                            false
                        }
                    })
                    .expect("r < total")
            }
        };
        home.push(h);
        let k = rng.gen_range(lo..=hi);
        let mut chosen: Vec<(usize, usize)> = Vec::with_capacity(k);
        while chosen.len() < k {
            let b = if rng.gen_bool(cfg.within) {
                h
            } else {
                let other = rng.gen_range(0..cfg.block_sizes.len() - 1);
                if other >= h {
                    other + 1
                } else {
                    other
                }
            };
            let o = rng.gen_range(0..cfg.block_sizes[b]);
            if !chosen.contains(&(b, o)) {
                chosen.push((b, o));
            }
        }
        let contributor = format!("contributor_{:04}", c + 1);
        let byline = format!("Writer {:04}", c + 1);
        for (b, o) in chosen {
            for _ in 0..rng.gen_range(cfg.articles_per_outlet.0..=cfg.articles_per_outlet.1) {
                let id = format!("art_{:06}", records.len() + 1);
                let date = start + chrono::Days::new(rng.gen_range(0..1461));
                records.push(
                    ArticleRecord::new(&id, &names[b][o], &byline)
                        .with_contributor(&contributor)
                        .with_date(date),
                );
            }
        }
    }
    let blocks = Partition::from_labels(
        names
            .iter()
            .enumerate()
            .flat_map(|(b, ns)| ns.iter().map(move |n| (n.clone(), format!("block_{}", b + 1)))),
    );
    Ok(PlantedCorpus {
        articles: ArticleSet::new(records)?,
        blocks,
        home,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TopicCorpusConfig {
    pub docs: usize,
    pub topics: usize,
    pub terms_per_topic: usize,
    pub doc_len: usize,
    /// Symmetric Dirichlet parameter for document–topic mixtures.
    pub alpha: f64,
    pub seed: u64,
}

impl Default for TopicCorpusConfig {
    fn default() -> Self {
        TopicCorpusConfig {
            docs: 2000,
            topics: 4,
            terms_per_topic: 50,
            doc_len: 100,
            alpha: 0.5,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone)]
pub struct TopicCorpus {
    pub corpus: DocTermCorpus,
    pub terms: Vec<String>,
    /// True topic–word distributions over the full vocabulary.
    pub phi: Vec<Vec<f64>>,
    pub theta: Vec<Vec<f64>>,
}

fn dirichlet<R: Rng>(rng: &mut R, alpha: f64, k: usize) -> Vec<f64> {
    let g = Gamma::new(alpha, 1.0).expect("alpha > 0");
    let mut v: Vec<f64> = (0..k).map(|_| g.sample(rng)).collect();
    let s: f64 = v.iter().sum();
    if s > 0.0 {
        v.iter_mut().for_each(|x| *x /= s);
    } else {
        v = vec![1.0 / k as f64; k];
    }
    v
}

fn draw<R: Rng>(rng: &mut R, p: &[f64]) -> usize {
    let mut u = rng.gen::<f64>();
    for (i, &x) in p.iter().enumerate() {
        if u < x {
            return i;
        }
        u -= x;
    }
    p.len() - 1
}

/// Topic `t` owns terms `t*terms_per_topic ..`; its word weights are drawn once from
/// a flat Dirichlet over its own block and zero elsewhere.
pub fn topic_corpus(cfg: &TopicCorpusConfig) -> Result<TopicCorpus> {
    if cfg.topics == 0 || cfg.terms_per_topic == 0 || cfg.docs == 0 || cfg.doc_len == 0 || cfg.alpha <= 0.0 {
        return Err(Error::Argument("topic corpus parameters must be positive".into()));
    }
    let mut rng = seed::rng(cfg.seed, tags::SYNTHETIC, 1);
    let v = cfg.topics * cfg.terms_per_topic;
    let terms: Vec<String> = (0..v)
        .map(|i| format!("t{}w{:03}", i / cfg.terms_per_topic, i % cfg.terms_per_topic))
        .collect();
    let phi: Vec<Vec<f64>> = (0..cfg.topics)
        .map(|t| {
            let w = dirichlet(&mut rng, 1.0, cfg.terms_per_topic);
            let mut row = vec![0.0; v];
            row[t * cfg.terms_per_topic..(t + 1) * cfg.terms_per_topic].copy_from_slice(&w);
            row
        })
        .collect();
    let mut theta = Vec::with_capacity(cfg.docs);
    let mut bags = Vec::with_capacity(cfg.docs);
    for _ in 0..cfg.docs {
        let th = dirichlet(&mut rng, cfg.alpha, cfg.topics);
        let bag: Vec<u32> = (0..cfg.doc_len)
            .map(|_| {
                let t = draw(&mut rng, &th);
                let w = draw(&mut rng, &phi[t][t * cfg.terms_per_topic..(t + 1) * cfg.terms_per_topic]);
                (t * cfg.terms_per_topic + w) as u32
            })
            .collect();
        theta.push(th);
        bags.push(bag);
    }
    let ids = (0..cfg.docs).map(|d| format!("doc_{:05}", d + 1)).collect();
    Ok(TopicCorpus {
        corpus: DocTermCorpus::from_bags(ids, bags, v)?,
        terms,
        phi,
        theta,
    })
}

/// Word lists for generated article text, one per theme.
pub const THEMES: [&[&str]; 6] = [
    &[
        "climate", "emissions", "carbon", "warming", "renewable", "solar", "pollution", "drought", "glacier",
        "wildfire", "ocean", "forest", "species", "agreement", "temperature", "coastline", "flooding",
        "hurricane", "rainfall", "methane", "turbine", "battery", "recycling", "wetlands", "habitat",
        "biodiversity", "conservation", "coral", "acidification", "deforestation", "heatwave", "smog",
        "pipeline", "fracking", "offshore", "groundwater", "reservoir",
    ],
    &[
        "healthcare", "insurance", "hospital", "patients", "medicaid", "premiums", "doctors", "coverage",
        "clinic", "vaccine", "nurses", "prescription", "treatment", "disease", "pharmacy", "surgery",
        "diagnosis", "outbreak", "pandemic", "infection", "therapy", "opioid", "addiction", "overdose",
        "cancer", "diabetes", "obesity", "wellness", "pediatric", "dental", "mental", "emergency",
        "ambulance", "clinical", "trials", "antibiotics",
    ],
    &[
        "immigration", "border", "wall", "deportation", "asylum", "migrants", "visa", "customs", "refugees",
        "citizenship", "detention", "patrol", "caravan", "sanctuary", "enforcement", "amnesty",
        "naturalization", "smuggling", "checkpoint", "daca", "dreamers", "quota", "undocumented",
        "guestworker", "resettlement", "consulate", "passport", "green", "seasonal", "farmworkers", "shelter",
        "interpreter", "hearings", "backlog",
    ],
    &[
        "election", "ballot", "campaign", "voters", "polling", "candidate", "primary", "senate", "debate",
        "turnout", "district", "donors", "rally", "governor", "delegates", "caucus", "incumbent",
        "challenger", "endorsement", "fundraising", "precinct", "recount", "absentee", "redistricting",
        "gerrymandering", "superpac", "nominee", "runoff", "registration", "canvass", "consultant",
        "pollster", "swing",
    ],
    &[
        "economy", "markets", "inflation", "wages", "unemployment", "tariffs", "trade", "growth", "stocks",
        "interest", "budget", "deficit", "manufacturing", "investors", "recession", "mortgage", "housing",
        "retail", "earnings", "dividends", "bonds", "currency", "exports", "imports", "payroll", "startups",
        "venture", "bankruptcy", "merger", "acquisition", "layoffs", "productivity", "commodities", "pension",
    ],
    &[
        "police", "court", "justice", "prison", "sentence", "verdict", "prosecutors", "judge", "crime",
        "lawsuit", "officers", "jury", "trial", "attorney", "investigation", "indictment", "testimony",
        "appeal", "warrant", "arrest", "homicide", "burglary", "parole", "probation", "bail", "plea",
        "subpoena", "felony", "misdemeanor", "forensic", "detective", "custody", "acquittal", "conviction",
    ],
];

const FILLER: [&str; 12] = [
    "reported", "officials", "according", "statement", "week", "people", "percent", "country", "state", "public",
    "local", "national",
];

/// Article text mixing themes with the given weights, plus common filler words.
pub fn article_text<R: Rng>(rng: &mut R, theme_weights: &[f64], words: usize) -> String {
    let total: f64 = theme_weights.iter().sum();
    let p: Vec<f64> = theme_weights.iter().map(|w| w / total).collect();
    let mut out: Vec<&str> = Vec::with_capacity(words);
    for _ in 0..words {
        if rng.gen_bool(0.25) {
            out.push(FILLER.choose(rng).expect("nonempty"));
        } else {
            let t = draw(rng, &p);
            out.push(THEMES[t % THEMES.len()].choose(rng).expect("nonempty"));
        }
    }
    let mut s = out.join(" ");
    if let Some(first) = s.get_mut(0..1) {
        first.make_ascii_uppercase();
    }
    s.push('.');
    s
}

/// Adds text to every article of a planted corpus. Each block leans towards its own
/// themes; contributors writing outside their home block lean further towards the
/// last theme, so that transitioning contributors differ in content.
pub fn attach_text(corpus: &PlantedCorpus, words: usize, seed: u64) -> Result<ArticleSet> {
    let transitioning: std::collections::BTreeSet<String> = corpus
        .articles
        .contributor_outlets()
        .into_iter()
        .filter(|(_, outs)| {
            let labels: std::collections::BTreeSet<_> = outs.iter().filter_map(|o| corpus.blocks.label(o)).collect();
            labels.len() > 1
        })
        .map(|(c, _)| c)
        .collect();
    let mut rng = seed::rng(seed, tags::SYNTHETIC, 2);
    let records = corpus
        .articles
        .iter()
        .map(|r| {
            let block = corpus
                .blocks
                .label(&r.outlet_id)
                .and_then(|l| l.strip_prefix("block_"))
                .and_then(|n| n.parse::<usize>().ok())
                .map_or(0, |n| n - 1);
            let mut w = vec![1.0; THEMES.len()];
            w[(2 * block) % THEMES.len()] += 4.0;
            w[(2 * block + 1) % THEMES.len()] += 2.0;
            if r.contributor_id.as_ref().is_some_and(|c| transitioning.contains(c)) {
                w[THEMES.len() - 1] += 3.0;
            }
            r.clone().with_text(&article_text(&mut rng, &w, words))
        })
        .collect();
    ArticleSet::new(records)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn planted_corpus_is_deterministic_and_well_formed() {
        let cfg = PlantedConfig::default();
        let a = planted_corpus(&cfg).unwrap();
        let b = planted_corpus(&cfg).unwrap();
        assert_eq!(a.articles.records(), b.articles.records());
        assert_eq!(a.blocks.group_count(), 2);
        assert_eq!(a.blocks.len(), 13);
        let outlets = a.articles.contributor_outlets();
        assert_eq!(outlets.len(), 350);
        assert!(outlets.values().all(|o| (2..=4).contains(&o.len())));
    }

    #[test]
    fn within_one_keeps_contributors_home() {
        let cfg = PlantedConfig {
            within: 1.0,
            ..Default::default()
        };
        let c = planted_corpus(&cfg).unwrap();
        for (outs, h) in c.articles.contributor_outlets().values().zip(&c.home) {
            let want = format!("block_{}", h + 1);
            assert!(outs.iter().all(|o| c.blocks.label(o) == Some(want.as_str())));
        }
    }

    #[test]
    fn home_assignment_modes() {
        let share = |home| {
            let c = planted_corpus(&PlantedConfig { home, ..Default::default() }).unwrap();
            c.home.iter().filter(|&&h| h == 0).count() as f64 / c.home.len() as f64
        };
        // 350 draws: 4 binomial SDs is about 0.107
        assert!((share(HomeAssignment::Even) - 0.5).abs() < 0.107);
        assert!((share(HomeAssignment::BySize) - 9.0 / 13.0).abs() < 0.1);
    }

    #[test]
    fn topic_corpus_rows_are_distributions() {
        let t = topic_corpus(&TopicCorpusConfig {
            docs: 50,
            ..Default::default()
        })
        .unwrap();
        for row in t.phi.iter().chain(&t.theta) {
            assert!((row.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        }
        assert_eq!(t.corpus.total_tokens(), 50 * 100);
    }
}
