//! Lexicon scores, Mann-Whitney comparisons and label-shuffle z-scores on the bundled
//! example corpus, grouped by planted block.
//!
//! cargo run --release --example content_tests

use std::path::Path;

use copub::feature_stats::{compare_groups, lexicon_matrix, shuffle_ztest, Lexicon, ShuffleUnit};
use copub::synthetic::{attach_text, planted_corpus, PlantedConfig};

fn main() -> copub::Result<()> {
    let lexicon = Lexicon::read(&Path::new(env!("CARGO_MANIFEST_DIR")).join("data/example/lexicon.txt"))?;

    let planted = planted_corpus(&PlantedConfig {
        seed: 5,
        ..Default::default()
    })?;
    let articles = attach_text(&planted, 60, 5)?;
    let docs: Vec<(String, String)> = articles
        .iter()
        .map(|r| (r.article_id.clone(), r.text.clone().unwrap_or_default()))
        .collect();
    let labels: Vec<String> = articles
        .iter()
        .map(|r| planted.blocks.label(&r.outlet_id).expect("planted outlet").to_string())
        .collect();
    let m = lexicon_matrix(&docs, &lexicon)?;

    println!("{:<14} {:>8} {:>7} {:>9}", "feature", "auc", "diff", "p_bonf");
    for c in compare_groups(&m, &labels, "block_1", "block_2")? {
        println!("{:<14} {:>8.3} {:>7.2} {:>9.2e}", c.feature, c.auc, c.diff, c.p_adjusted);
    }

    let z = shuffle_ztest(&m, &labels, "block_2", 500, 5, &ShuffleUnit::Documents)?;
    println!("\nblock_2 mean vs 500 label shuffles:");
    for (name, s) in m.names().iter().zip(&z) {
        println!("  {:<14} z {:>7.2}", name, s.z.unwrap_or(f64::NAN));
    }
    Ok(())
}
