//! Threshold sweep and leave-one-outlet-out ablation on a planted corpus.
//!
//! cargo run --release --example robustness_checks

use copub::network::{analyze, NetworkSettings};
use copub::null_model::EnsembleConfig;
use copub::robustness::{ablation_report, threshold_sweep};
use copub::synthetic::{planted_corpus, PlantedConfig};

fn main() -> copub::Result<()> {
    let planted = planted_corpus(&PlantedConfig {
        seed: 2,
        ..Default::default()
    })?;
    let settings = NetworkSettings {
        ensemble: EnsembleConfig::new(1000, 2),
        ..Default::default()
    };
    let a = analyze(&planted.articles, &settings)?;

    let sweep = threshold_sweep(&a.significance, &[1.64, 1.96, 2.58, 3.29], 1.96)?;
    println!("nested: {}", sweep.nested);
    for e in &sweep.entries {
        println!(
            "  z > {:<5} {:>3} edges  +{:<3} -{:<3} components {}",
            e.threshold,
            e.edges.len(),
            e.gained.len(),
            e.lost.len(),
            e.components.len()
        );
    }

    let outlets: Vec<String> = planted.blocks.nodes().map(String::from).collect();
    let report = ablation_report(&a.articles, &outlets, &settings, &a.backbone, &a.clusters)?;
    println!("\nleave one out:");
    for e in &report.entries {
        println!(
            "  without {:<13} clusters {}  cross-cluster edges {}  agreement {:.3}",
            e.removed,
            e.clusters.len(),
            e.cross_cluster_edges,
            e.comparison.agreement.unwrap_or(f64::NAN)
        );
    }
    Ok(())
}
