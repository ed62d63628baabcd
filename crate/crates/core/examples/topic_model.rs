//! Collapsed Gibbs LDA on a synthetic corpus with known topics; prints the top words of
//! each fitted topic next to the topic it most resembles.
//!
//! cargo run --release --example topic_model [iterations]

use copub::synthetic::{topic_corpus, TopicCorpusConfig};
use copub::topic_model::{doc_topics, fit, top_keywords, LdaConfig};

fn cosine(a: &[f64], b: &[f64]) -> f64 {
    let dot: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
    let na: f64 = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    let nb: f64 = b.iter().map(|x| x * x).sum::<f64>().sqrt();
    dot / (na * nb)
}

fn main() -> copub::Result<()> {
    let iterations = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(200);
    let truth = topic_corpus(&TopicCorpusConfig {
        docs: 500,
        seed: 3,
        ..Default::default()
    })?;
    let state = fit(
        &truth.corpus,
        &truth.terms,
        &LdaConfig {
            topics: 4,
            iterations,
            seed: 3,
            ..Default::default()
        },
    )?;
    state.check_counts()?;

    let phi = state.topic_word();
    for (k, row) in phi.iter().enumerate() {
        let (best, sim) = truth
            .phi
            .iter()
            .enumerate()
            .map(|(j, t)| (j, cosine(row, t)))
            .max_by(|a, b| a.1.total_cmp(&b.1))
            .expect("topics");
        let words: Vec<String> = top_keywords(&state, k, 6)?.into_iter().map(|(w, _)| w).collect();
        println!("topic {}  ~ true {} (cos {:.3}): {}", k, best, sim, words.join(" "));
    }
    let theta = doc_topics(&state);
    println!("\ndoc 0 mixture: {:.3?}", theta.row(0));
    Ok(())
}
