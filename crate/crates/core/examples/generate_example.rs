//! Regenerates the example dataset in `data/example/`.
//!
//!     cargo run --example generate_example -- crates/core/data/example
//!
//! The corpus plants two outlet blocks (9 and 4 outlets), adds single-outlet writers,
//! and mixes in bylines that cleaning must drop: wire services, staff credits, the
//! outlet's own name and multi-author credits.

use std::fmt::Write as _;
use std::path::PathBuf;

use copub::synthetic::{attach_text, planted_corpus, PlantedConfig};
use rand::seq::SliceRandom;
use rand::Rng;

const OUTLETS: [&str; 13] = [
    "Harbor Ledger",
    "Metro Dispatch",
    "Capital Wire",
    "Riverside Chronicle",
    "The Sentinel Review",
    "Northern Gazette",
    "Civic Daily",
    "The Morning Record",
    "Lakeshore Times",
    "Frontier Patriot",
    "Liberty Herald",
    "The Heartland Post",
    "Eagle Report",
];

const FIRST: [&str; 24] = [
    "Ana", "Ben", "Carla", "David", "Elena", "Frank", "Grace", "Hassan", "Irene", "Jamal", "Kira", "Luis", "Maya",
    "Noah", "Olga", "Pedro", "Quinn", "Rosa", "Samir", "Tara", "Umar", "Vera", "Wes", "Yara",
];
const LAST: [&str; 20] = [
    "Abbott", "Baker", "Castillo", "Dunn", "Ellison", "Fischer", "Garza", "Hughes", "Iqbal", "Jensen", "Kowalski",
    "Lindqvist", "Moreno", "Nakamura", "Okafor", "Petrov", "Quintero", "Reyes", "Sato", "Tanaka",
];

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn main() -> copub::Result<()> {
    let dir = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| "crates/core/data/example".into()));
    std::fs::create_dir_all(&dir)?;
    let seed = 2020;
    let planted = planted_corpus(&PlantedConfig {
        seed,
        ..PlantedConfig::default()
    })?;
    let with_text = attach_text(&planted, 40, seed)?;
    let mut rng = copub::seed::rng(seed, copub::seed::tags::SYNTHETIC, 99);

    // planted outlet ids → display names
    let outlet_ids: Vec<String> = planted.blocks.nodes().map(String::from).collect();
    let name_of = |id: &str| OUTLETS[outlet_ids.iter().position(|o| o == id).expect("known outlet")];

    // contributor ids → person names (unique)
    let mut names: Vec<String> = FIRST
        .iter()
        .flat_map(|f| LAST.iter().map(move |l| format!("{} {}", f, l)))
        .collect();
    names.shuffle(&mut rng);

    let mut out = String::from("article_id,outlet_id,byline,date,text\n");
    let mut n = 0usize;
    let mut push = |out: &mut String, outlet: &str, byline: &str, date: &str, text: &str| {
        n += 1;
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            format_args!("a{:05}", n),
            csv_field(outlet),
            csv_field(byline),
            date,
            csv_field(text)
        );
    };
    for r in with_text.iter() {
        let c: usize = r.contributor_id.as_deref().and_then(|c| c.strip_prefix("contributor_")).and_then(|n| n.parse().ok()).expect("planted id");
        let person = &names[c - 1];
        let byline = match rng.gen_range(0..10) {
            0 => format!("By {}", person),
            1 => person.to_uppercase(),
            2 => format!("Dr. {}", person),
            _ => person.clone(),
        };
        let date = r.date.map(|d| d.to_string()).unwrap_or_default();
        push(&mut out, name_of(&r.outlet_id), &byline, &date, r.text.as_deref().unwrap_or(""));
    }
    // single-outlet writers and bylines that are not one person
    let extra_people = &names[350..410];
    let records: Vec<_> = with_text.iter().collect();
    for i in 0..400 {
        let template = records[rng.gen_range(0..records.len())];
        let outlet = name_of(&template.outlet_id);
        let byline = match i % 5 {
            0 | 1 => extra_people[(i / 5) % extra_people.len()].clone(),
            2 => ["Staff", "Associated Press", "Reuters", "The Editorial Board"][i % 4].to_string(),
            3 => outlet.to_string(),
            _ => format!("{} and {}", names[i % 350], names[(i + 7) % 350]),
        };
        let date = template.date.map(|d| d.to_string()).unwrap_or_default();
        push(&mut out, outlet, &byline, &date, template.text.as_deref().unwrap_or(""));
    }
    std::fs::write(dir.join("articles.csv"), out)?;

    let mut attrs = String::from("outlet_id,lean,reach[millions],ownership,audience:left,audience:right\n");
    for id in &outlet_ids {
        let right_block = planted.blocks.label(id) == Some("block_2");
        let lean: f64 = if right_block { rng.gen_range(0.4..1.0) } else { rng.gen_range(-1.0..0.2) };
        let reach: f64 = rng.gen_range(0.5..40.0);
        let owner = ["family", "public", "nonprofit"][rng.gen_range(0..3)];
        let total = 1000.0;
        let right_share = (0.5 + lean / 2.5).clamp(0.05, 0.95);
        let _ = writeln!(
            attrs,
            "{},{:.3},{:.1},{},{:.0},{:.0}",
            csv_field(name_of(id)),
            lean,
            reach,
            owner,
            total * (1.0 - right_share),
            total * right_share
        );
    }
    std::fs::write(dir.join("attributes.csv"), attrs)?;
    println!("wrote {} articles for {} outlets to {}", n, outlet_ids.len(), dir.display());
    Ok(())
}
