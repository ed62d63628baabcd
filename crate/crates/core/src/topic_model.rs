//! Latent Dirichlet Allocation fitted by collapsed Gibbs sampling.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::feature_stats::FeatureMatrix;
use crate::seed;
use crate::text::DocTermCorpus;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LdaConfig {
    pub topics: usize,
    pub iterations: usize,
    /// Sum of the symmetric document–topic prior; each topic gets `alpha_sum / topics`.
    pub alpha_sum: f64,
    pub beta: f64,
    pub seed: u64,
    /// When > 0, θ and φ are averaged over the last `average_last` sweeps instead of
    /// read off the final state.
    pub average_last: usize,
}

impl Default for LdaConfig {
    fn default() -> Self {
        LdaConfig {
            topics: 20,
            iterations: 1000,
            alpha_sum: 5.0,
            beta: 0.01,
            seed: 0,
            average_last: 0,
        }
    }
}

/// Sampler state. Count tables always agree with the token assignments.
#[derive(Debug, Clone)]
pub struct TopicModelState {
    k: usize,
    alpha: Vec<f64>,
    beta: f64,
    terms: Vec<String>,
    doc_ids: Vec<String>,
    /// Token word ids per document.
    words: Vec<Vec<u32>>,
    assignments: Vec<Vec<u16>>,
    doc_topic: Vec<u32>,
    topic_term: Vec<u32>,
    topic_total: Vec<u32>,
    rng: ChaCha8Rng,
    pub seed: u64,
    pub iteration: usize,
    theta_sum: Option<(usize, Vec<f64>)>,
    phi_sum: Option<(usize, Vec<f64>)>,
}

impl TopicModelState {
    /// Random initial assignments.
    pub fn init(corpus: &DocTermCorpus, terms: &[String], config: &LdaConfig) -> Result<Self> {
        let k = config.topics;
        if k < 2 {
            return Err(Error::Argument("topic count must be at least 2".into()));
        }
        if k > u16::MAX as usize {
            return Err(Error::Argument("too many topics".into()));
        }
        if corpus.is_empty() {
            return Err(Error::Argument("corpus has no documents".into()));
        }
        if terms.len() != corpus.vocab_size {
            return Err(Error::Argument(format!(
                "{} terms given for a vocabulary of {}",
                terms.len(),
                corpus.vocab_size
            )));
        }
        if !(config.alpha_sum > 0.0 && config.beta > 0.0) {
            return Err(Error::Argument("priors must be positive".into()));
        }
        let v = corpus.vocab_size;
        let mut rng = seed::rng(config.seed, seed::tags::LDA, k as u64);
        let words: Vec<Vec<u32>> = corpus
            .docs
            .iter()
            .map(|bag| bag.iter().flat_map(|&(w, c)| std::iter::repeat_n(w, c as usize)).collect())
            .collect();
        let mut state = TopicModelState {
            k,
            alpha: vec![config.alpha_sum / k as f64; k],
            beta: config.beta,
            terms: terms.to_vec(),
            doc_ids: corpus.doc_ids.clone(),
            assignments: Vec::with_capacity(words.len()),
            doc_topic: vec![0; words.len() * k],
            topic_term: vec![0; k * v],
            topic_total: vec![0; k],
            words,
            rng: rng.clone(),
            seed: config.seed,
            iteration: 0,
            theta_sum: None,
            phi_sum: None,
        };
        for d in 0..state.words.len() {
            let mut z = Vec::with_capacity(state.words[d].len());
            for &w in &state.words[d] {
                let t = rng.gen_range(0..k);
                state.doc_topic[d * k + t] += 1;
                state.topic_term[t * v + w as usize] += 1;
                state.topic_total[t] += 1;
                z.push(t as u16);
            }
            state.assignments.push(z);
        }
        state.rng = rng;
        Ok(state)
    }

    pub fn topics(&self) -> usize {
        self.k
    }

    pub fn vocab_size(&self) -> usize {
        self.terms.len()
    }

    pub fn n_docs(&self) -> usize {
        self.words.len()
    }

    pub fn alpha(&self) -> &[f64] {
        &self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn terms(&self) -> &[String] {
        &self.terms
    }

    pub fn assignments(&self) -> &[Vec<u16>] {
        &self.assignments
    }

    pub fn total_tokens(&self) -> usize {
        self.words.iter().map(Vec::len).sum()
    }

    pub fn topic_totals(&self) -> &[u32] {
        &self.topic_total
    }

    /// One Gibbs sweep over every token.
    pub fn sweep(&mut self) {
        let k = self.k;
        let v = self.terms.len();
        let vbeta = v as f64 * self.beta;
        let mut probs = vec![0.0f64; k];
        for d in 0..self.words.len() {
            for i in 0..self.words[d].len() {
                let w = self.words[d][i] as usize;
                let old = self.assignments[d][i] as usize;
                self.doc_topic[d * k + old] -= 1;
                self.topic_term[old * v + w] -= 1;
                self.topic_total[old] -= 1;

                let mut total = 0.0;
                for (t, p) in probs.iter_mut().enumerate() {
                    total += (f64::from(self.doc_topic[d * k + t]) + self.alpha[t])
                        * (f64::from(self.topic_term[t * v + w]) + self.beta)
                        / (f64::from(self.topic_total[t]) + vbeta);
                    *p = total;
                }
                let u = self.rng.gen::<f64>() * total;
                let new = probs.iter().position(|&c| u < c).unwrap_or(k - 1);

                self.doc_topic[d * k + new] += 1;
                self.topic_term[new * v + w] += 1;
                self.topic_total[new] += 1;
                self.assignments[d][i] = new as u16;
            }
        }
        self.iteration += 1;
    }

    /// Recounts the tables from the assignments and compares.
    pub fn check_counts(&self) -> Result<()> {
        let k = self.k;
        let v = self.terms.len();
        let mut dt = vec![0u32; self.doc_topic.len()];
        let mut tt = vec![0u32; self.topic_term.len()];
        let mut tot = vec![0u32; k];
        for (d, (ws, zs)) in self.words.iter().zip(&self.assignments).enumerate() {
            if ws.len() != zs.len() {
                return Err(Error::Internal(format!("document {} lost tokens", d)));
            }
            for (&w, &z) in ws.iter().zip(zs) {
                dt[d * k + z as usize] += 1;
                tt[z as usize * v + w as usize] += 1;
                tot[z as usize] += 1;
            }
        }
        if dt != self.doc_topic || tt != self.topic_term || tot != self.topic_total {
            return Err(Error::Internal("topic count tables disagree with assignments".into()));
        }
        let n: u64 = tot.iter().map(|&c| u64::from(c)).sum();
        if n as usize != self.total_tokens() {
            return Err(Error::Internal("token count not conserved".into()));
        }
        Ok(())
    }

    fn theta_now(&self) -> Vec<f64> {
        let k = self.k;
        let alpha_sum: f64 = self.alpha.iter().sum();
        let mut out = vec![0.0; self.words.len() * k];
        for d in 0..self.words.len() {
            let len = self.words[d].len() as f64;
            for t in 0..k {
                out[d * k + t] = (f64::from(self.doc_topic[d * k + t]) + self.alpha[t]) / (len + alpha_sum);
            }
        }
        out
    }

    fn phi_now(&self) -> Vec<f64> {
        let v = self.terms.len();
        let vbeta = v as f64 * self.beta;
        let mut out = vec![0.0; self.k * v];
        for t in 0..self.k {
            let denom = f64::from(self.topic_total[t]) + vbeta;
            for w in 0..v {
                out[t * v + w] = (f64::from(self.topic_term[t * v + w]) + self.beta) / denom;
            }
        }
        out
    }

    fn accumulate(&mut self) {
        let theta = self.theta_now();
        let phi = self.phi_now();
        for (slot, now) in [(&mut self.theta_sum, theta), (&mut self.phi_sum, phi)] {
            match slot {
                Some((n, sum)) => {
                    *n += 1;
                    sum.iter_mut().zip(&now).for_each(|(s, x)| *s += x);
                }
                None => *slot = Some((1, now)),
            }
        }
    }

    /// Topic–word distributions φ, one row per topic.
    pub fn topic_word(&self) -> Vec<Vec<f64>> {
        let v = self.terms.len();
        let flat = match &self.phi_sum {
            Some((n, sum)) => sum.iter().map(|s| s / *n as f64).collect(),
            None => self.phi_now(),
        };
        flat.chunks(v.max(1)).map(<[f64]>::to_vec).collect()
    }
}

/// Fits a model: random initialisation followed by `iterations` sweeps.
pub fn fit(corpus: &DocTermCorpus, terms: &[String], config: &LdaConfig) -> Result<TopicModelState> {
    if config.iterations < 1 {
        return Err(Error::Argument("iterations must be at least 1".into()));
    }
    let mut state = TopicModelState::init(corpus, terms, config)?;
    let average_from = config.iterations.saturating_sub(config.average_last);
    for it in 0..config.iterations {
        state.sweep();
        if config.average_last > 0 && it >= average_from {
            state.accumulate();
        }
    }
    debug_assert!(state.check_counts().is_ok());
    Ok(state)
}

/// Per-document topic proportions `θ_dk = (n_dk + α_k) / (len_d + Σα)`.
pub fn doc_topics(state: &TopicModelState) -> FeatureMatrix {
    let k = state.k;
    let flat = match &state.theta_sum {
        Some((n, sum)) => sum.iter().map(|s| s / *n as f64).collect(),
        None => state.theta_now(),
    };
    let rows = flat.chunks(k).map(<[f64]>::to_vec).collect();
    let names = (0..k).map(|t| format!("topic_{}", t)).collect();
    FeatureMatrix::new(state.doc_ids.clone(), names, rows).expect("θ is finite with unique names")
}

/// The `n` most probable terms of a topic with their probabilities, ties broken by term.
pub fn top_keywords(state: &TopicModelState, topic: usize, n: usize) -> Result<Vec<(String, f64)>> {
    if topic >= state.k {
        return Err(Error::Argument(format!("topic {} out of range (K = {})", topic, state.k)));
    }
    let phi = state.topic_word();
    let mut ranked: Vec<(String, f64)> = state.terms.iter().cloned().zip(phi[topic].iter().copied()).collect();
    ranked.sort_by(|a, b| b.1.total_cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    ranked.truncate(n);
    Ok(ranked)
}

/// Fits one model per topic count, in parallel. Each fit's stream is derived from the
/// shared seed and its topic count.
pub fn sweep_k(
    corpus: &DocTermCorpus,
    terms: &[String],
    ks: &[usize],
    base: &LdaConfig,
) -> Result<Vec<TopicModelState>> {
    ks.par_iter()
        .map(|&k| {
            let cfg = LdaConfig { topics: k, ..base.clone() };
            fit(corpus, terms, &cfg)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tiny_corpus() -> (DocTermCorpus, Vec<String>) {
        let terms: Vec<String> = (0..6).map(|i| format!("w{}", i)).collect();
        let bags = vec![vec![0, 1, 2, 0, 1], vec![3, 4, 5, 5], vec![], vec![2]];
        let ids = (0..bags.len()).map(|d| format!("d{}", d)).collect();
        (DocTermCorpus::from_bags(ids, bags, 6).unwrap(), terms)
    }

    fn cfg(k: usize, iterations: usize) -> LdaConfig {
        LdaConfig { topics: k, iterations, seed: 11, ..LdaConfig::default() }
    }

    #[test]
    fn counts_stay_consistent_every_sweep() {
        let (corpus, terms) = tiny_corpus();
        let mut s = TopicModelState::init(&corpus, &terms, &cfg(3, 1)).unwrap();
        s.check_counts().unwrap();
        for _ in 0..50 {
            s.sweep();
            s.check_counts().unwrap();
            assert_eq!(s.topic_totals().iter().sum::<u32>() as usize, corpus.total_tokens());
        }
    }

    #[test]
    fn rejects_bad_arguments() {
        let (corpus, terms) = tiny_corpus();
        assert!(fit(&corpus, &terms, &cfg(1, 5)).is_err());
        assert!(fit(&corpus, &terms, &cfg(2, 0)).is_err());
        assert!(fit(&corpus, &terms[..3], &cfg(2, 5)).is_err());
    }

    #[test]
    fn deterministic_given_seed() {
        let (corpus, terms) = tiny_corpus();
        let a = fit(&corpus, &terms, &cfg(3, 20)).unwrap();
        let b = fit(&corpus, &terms, &cfg(3, 20)).unwrap();
        assert_eq!(a.assignments(), b.assignments());
        assert_eq!(top_keywords(&a, 0, 3).unwrap(), top_keywords(&b, 0, 3).unwrap());
    }

    #[test]
    fn theta_rows() {
        let (corpus, terms) = tiny_corpus();
        let s = fit(&corpus, &terms, &cfg(4, 10)).unwrap();
        let theta = doc_topics(&s);
        for d in 0..theta.n_docs() {
            let sum: f64 = theta.row(d).iter().sum();
            assert!((sum - 1.0).abs() < 1e-12);
        }
        // empty document → prior only
        for t in 0..4 {
            assert!((theta.get(2, t) - 0.25).abs() < 1e-15);
        }
        // one-token document: (1 + α)/(1 + Σα) on its topic, α/(1 + Σα) elsewhere
        let z = s.assignments()[3][0] as usize;
        assert!((theta.get(3, z) - (1.0 + 1.25) / 6.0).abs() < 1e-12);
        assert!((theta.get(3, (z + 1) % 4) - 1.25 / 6.0).abs() < 1e-12);
    }

    #[test]
    fn keywords_cover_vocabulary_when_n_is_large() {
        let (corpus, terms) = tiny_corpus();
        let s = fit(&corpus, &terms, &cfg(2, 5)).unwrap();
        assert_eq!(top_keywords(&s, 1, 100).unwrap().len(), 6);
        assert!(top_keywords(&s, 2, 5).is_err());
    }

    #[test]
    fn averaged_estimates_are_distributions() {
        let (corpus, terms) = tiny_corpus();
        let s = fit(&corpus, &terms, &LdaConfig { average_last: 5, ..cfg(3, 10) }).unwrap();
        for row in s.topic_word() {
            assert!((row.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        }
        let theta = doc_topics(&s);
        assert!((theta.row(0).iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn sweep_returns_one_state_per_k() {
        let (corpus, terms) = tiny_corpus();
        let states = sweep_k(&corpus, &terms, &[2, 3, 5], &cfg(0, 3)).unwrap();
        assert_eq!(states.iter().map(|s| s.topics()).collect::<Vec<_>>(), vec![2, 3, 5]);
        for s in &states {
            s.check_counts().unwrap();
        }
    }
}
