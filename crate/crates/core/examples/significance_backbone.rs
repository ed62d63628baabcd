//! Degree-preserving null ensemble on a planted two-block corpus, then the significance
//! backbone and its clusters.
//!
//! cargo run --release --example significance_backbone [n_samples]

use copub::network::{analyze, NetworkSettings};
use copub::null_model::EnsembleConfig;
use copub::synthetic::{planted_corpus, PlantedConfig};

fn main() -> copub::Result<()> {
    let n: usize = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(2000);
    let planted = planted_corpus(&PlantedConfig {
        seed: 7,
        ..Default::default()
    })?;
    let settings = NetworkSettings {
        ensemble: EnsembleConfig::new(n, 7),
        ..Default::default()
    };
    let a = analyze(&planted.articles, &settings)?;
    println!(
        "{} contributors, {} outlets, {} edges, {} null samples",
        a.graph.left_nodes().len(),
        a.graph.right_nodes().len(),
        a.graph.m(),
        n
    );

    let mut sigs = a.significance.clone();
    sigs.sort_by(|x, y| y.z.unwrap_or(0.0).total_cmp(&x.z.unwrap_or(0.0)));
    println!("\nstrongest pairs:");
    for s in sigs.iter().take(8) {
        println!(
            "  {} - {}  shared {:>3}  null {:6.2} ± {:4.2}  z {:6.2}  p {:.4}",
            s.from,
            s.to,
            s.w_obs,
            s.null_mean,
            s.null_std,
            s.z.unwrap_or(f64::NAN),
            s.p_emp
        );
    }

    let positive = a.backbone.positive_edges().count();
    println!("\nbackbone: {} positive, {} negative edges", positive, a.backbone.edges.len() - positive);
    for (label, members) in a.clusters.groups() {
        println!("{}: {}", label, members.join(" "));
    }
    println!("planted blocks recovered: {}", a.clusters.blocks() == planted.blocks.blocks());
    Ok(())
}
