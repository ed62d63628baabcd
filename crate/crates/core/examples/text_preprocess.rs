//! Tokenize, drop stopwords, stem, and apply document-frequency bounds.
//!
//! cargo run --example text_preprocess

use copub::text::{porter_stem, FrequencyFilter, TextPipeline};

fn main() -> copub::Result<()> {
    for w in ["running", "connection", "relational", "generalizations", "agreed", "ponies"] {
        println!("{:>16} -> {}", w, porter_stem(w));
    }

    let texts = [
        "Wildfires spread across the dry hills as firefighters battled the flames.",
        "The council voted to fund new firefighting crews before the dry season.",
        "Hospitals reported fewer flu cases this winter, officials said.",
        "Officials said the vaccine clinics would stay open through the winter.",
        "Voters in the hills will decide on the new council seats in March.",
        "Flames reached the edge of town; crews evacuated the hospitals nearby.",
    ];
    let docs: Vec<(String, String)> = texts.iter().enumerate().map(|(i, t)| (format!("doc{}", i + 1), t.to_string())).collect();
    let pipeline = TextPipeline {
        filter: FrequencyFilter {
            min_docs: 2,
            max_fraction: (1, 2),
        },
        ..TextPipeline::english()
    };
    println!("\n{:?}", pipeline.preprocess(texts[0]));

    let (vocab, corpus) = pipeline.run(&docs)?;
    println!("\nkept {} terms over {} documents ({} tokens):", vocab.len(), corpus.len(), corpus.total_tokens());
    for (i, t) in vocab.terms().iter().enumerate() {
        println!("  {:<10} df {}", t, vocab.doc_freq(i));
    }
    Ok(())
}
