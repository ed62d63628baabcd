//! Ranks outlet classifications by modularity on a significance backbone and compares
//! each with a shuffled copy of itself.
//!
//! cargo run --release --example modularity_ranking

use std::collections::BTreeMap;

use copub::network::{analyze, NetworkSettings};
use copub::null_model::EnsembleConfig;
use copub::partition::{bin_continuous, modularity, rank_classifications, Partition, WeightedGraph};
use copub::synthetic::{planted_corpus, PlantedConfig};
use rand::SeedableRng;

fn main() -> copub::Result<()> {
    let planted = planted_corpus(&PlantedConfig {
        seed: 11,
        ..Default::default()
    })?;
    let a = analyze(
        &planted.articles,
        &NetworkSettings {
            ensemble: EnsembleConfig::new(1000, 11),
            ..Default::default()
        },
    )?;
    let net = WeightedGraph::from_backbone(&a.backbone);

    // a noisy continuous "lean" that mostly follows the planted blocks
    let mut lean = BTreeMap::new();
    for (i, o) in planted.blocks.nodes().enumerate() {
        let base = if planted.blocks.label(o) == Some("block_1") { -1.0 } else { 1.0 };
        let wobble = ((i * 37 % 11) as f64 - 5.0) / 8.0;
        lean.insert(o.to_string(), base + wobble);
    }
    let by_lean = bin_continuous(&lean, 2)?;
    let alphabetical = Partition::from_labels(planted.blocks.nodes().map(|o| (o, if o < "b1_outlet_05" { "a" } else { "z" })));
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);

    let parts = vec![
        ("planted blocks".to_string(), planted.blocks.clone()),
        ("lean (2 bins)".to_string(), by_lean.clone()),
        ("lean (shuffled)".to_string(), by_lean.permuted(&mut rng)),
        ("alphabetical".to_string(), alphabetical),
    ];
    for (name, q) in rank_classifications(&net, &parts)? {
        println!("{:>8.4}  {}", q, name);
    }
    println!("\nbackbone clusters: {:.4}", modularity(&net, &a.clusters)?);
    Ok(())
}
