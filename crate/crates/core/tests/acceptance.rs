//! Acceptance gate: every criterion runs at its stated size and tolerance and prints
//! one PASS/FAIL line. The binary exits non-zero if any criterion fails.

mod support;

use std::collections::{BTreeMap, BTreeSet};
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use copub::feature_stats::{auc_from_u, mann_whitney, shuffle_ztest, FeatureMatrix, ShuffleUnit};
use copub::graph::Side;
use copub::network::{analyze, NetworkSettings};
use copub::null_model::{
    attempts_for, edge_significance, filter_network, randomize, run_ensemble, EdgeSignificance, EnsembleConfig,
    Keep, Sign,
};
use copub::partition::{modularity, Partition, WeightedGraph};
use copub::pipeline::{run, Command, RunConfig};
use copub::synthetic::{planted_corpus, topic_corpus, PlantedConfig, TopicCorpusConfig};
use copub::topic_model::{doc_topics, LdaConfig, TopicModelState};
use copub::graph::project;
use copub::{export, BipartiteGraph};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

// ---------------------------------------------------------------- 1

fn small_graphs() -> Vec<(&'static str, BipartiteGraph)> {
    use support::bipartite as b;
    vec![
        ("path", b(&[("c1", "A"), ("c1", "B"), ("c2", "B"), ("c2", "C"), ("c3", "C"), ("c3", "A")])),
        (
            "star-and-pairs",
            b(&[("c1", "A"), ("c1", "B"), ("c1", "C"), ("c2", "A"), ("c2", "D"), ("c3", "B"), ("c3", "D"), ("c4", "C")]),
        ),
        (
            "two-blocks",
            b(&[
                ("c1", "A"),
                ("c1", "B"),
                ("c2", "A"),
                ("c2", "B"),
                ("c3", "C"),
                ("c3", "D"),
                ("c4", "C"),
                ("c4", "D"),
                ("c5", "A"),
                ("c5", "D"),
            ]),
        ),
        (
            "uneven",
            b(&[
                ("c1", "A"),
                ("c1", "B"),
                ("c1", "C"),
                ("c1", "D"),
                ("c2", "A"),
                ("c2", "B"),
                ("c3", "C"),
                ("c3", "E"),
                ("c4", "E"),
                ("c4", "A"),
                ("c5", "B"),
                ("c5", "E"),
            ]),
        ),
        (
            "five-outlets",
            b(&[
                ("c1", "A"),
                ("c1", "B"),
                ("c2", "B"),
                ("c2", "C"),
                ("c3", "C"),
                ("c3", "D"),
                ("c4", "D"),
                ("c4", "E"),
                ("c5", "E"),
                ("c5", "A"),
                ("c6", "A"),
                ("c6", "C"),
            ]),
        ),
    ]
}

fn criterion_1() -> Outcome {
    let mut worst = 0.0f64;
    let mut fails = Vec::new();
    let mut slowest = Duration::ZERO;
    let mut total_pairs = 0;
    for (name, g) in small_graphs() {
        assert!(g.m() <= 12);
        let (count, exact) = support::exact_pair_moments(&g);
        let start = Instant::now();
        let acc = run_ensemble(&g, &EnsembleConfig::new(10_000, 1)).expect("ensemble");
        let sigs = edge_significance(&project(&g), &acc).expect("significance");
        slowest = slowest.max(start.elapsed());
        for s in &sigs {
            let (mean, var) = exact[&(s.from.clone(), s.to.clone())];
            let se = (var / 10_000.0).sqrt();
            total_pairs += 1;
            let ok = if se == 0.0 {
                (s.null_mean - mean).abs() < 1e-12
            } else {
                let k = (s.null_mean - mean).abs() / se;
                worst = worst.max(k);
                k <= 3.0
            };
            if !ok {
                fails.push(format!("{} {}-{}: {} vs exact {} ({} realizations)", name, s.from, s.to, s.null_mean, mean, count));
            }
        }
    }
    let pass = fails.is_empty() && slowest < Duration::from_secs(60);
    outcome(
        pass,
        format!(
            "5 graphs, {} pairs, worst |error| = {:.2} SE, slowest graph {:.2?}{}",
            total_pairs,
            worst,
            slowest,
            if fails.is_empty() { String::new() } else { format!("; {}", fails.join("; ")) }
        ),
    )
}

// ---------------------------------------------------------------- 2

fn random_bipartite(m: usize, n_left: usize, n_right: usize, seed: u64) -> BipartiteGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut set = BTreeSet::new();
    while set.len() < m {
        set.insert((rng.gen_range(0..n_left), rng.gen_range(0..n_right)));
    }
    let names: Vec<(String, String)> = set
        .into_iter()
        .map(|(l, r)| (format!("c{:03}", l), format!("o{:02}", r)))
        .collect();
    BipartiteGraph::from_pairs(names.iter().map(|(a, b)| (a.as_str(), b.as_str())))
}

fn degree_maps(g: &BipartiteGraph) -> (BTreeMap<String, usize>, BTreeMap<String, usize>) {
    let mut l = BTreeMap::new();
    let mut r = BTreeMap::new();
    for (a, b) in g.edge_ids() {
        *l.entry(a.to_string()).or_default() += 1;
        *r.entry(b.to_string()).or_default() += 1;
    }
    (l, r)
}

fn criterion_2() -> Outcome {
    let g = random_bipartite(784, 350, 20, 784);
    let want = degree_maps(&g);
    let attempts = attempts_for(g.m());
    let mut current = g.clone();
    let mut violations = 0;
    let mut moved = 0;
    for k in 0..1000u64 {
        current = randomize(&current, attempts, k);
        if current.m() != 784 || degree_maps(&current) != want {
            violations += 1;
        }
        if current.edges() != g.edges() {
            moved += 1;
        }
    }
    // the ensemble itself also checks every sample and errors on a violation
    let ensemble_ok = run_ensemble(&g, &EnsembleConfig::new(1000, 7)).is_ok();
    let left_ok = g.degree_sequence(Side::Left) == want.0;
    outcome(
        violations == 0 && ensemble_ok && left_ok && moved == 1000,
        format!(
            "1000 chained samples of a 784-edge graph: {} violations, {} differ from the observed graph; ensemble check {}",
            violations,
            moved,
            if ensemble_ok { "ok" } else { "FAILED" }
        ),
    )
}

// ---------------------------------------------------------------- 3, 4, 5

struct Trial {
    blocks: Partition,
    sigs: Vec<EdgeSignificance>,
    clusters: Partition,
}

const PLANTED_SAMPLES: usize = 1000;

fn planted_trials() -> (Vec<Trial>, Duration) {
    let start = Instant::now();
    let trials = (0..100u64)
        .map(|t| {
            let p = planted_corpus(&PlantedConfig {
                seed: t,
                ..Default::default()
            })
            .expect("planted corpus");
            let settings = NetworkSettings {
                ensemble: EnsembleConfig::new(PLANTED_SAMPLES, 1000 + t),
                ..Default::default()
            };
            let a = analyze(&p.articles, &settings).expect("network stage");
            Trial {
                blocks: p.blocks,
                sigs: a.significance,
                clusters: a.clusters,
            }
        })
        .collect();
    (trials, start.elapsed())
}

fn criterion_3(trials: &[Trial], elapsed: Duration) -> Outcome {
    let mut recovered = 0;
    for t in trials {
        let backbone = filter_network(&t.sigs, 1.96, Keep::Both).expect("filter");
        let cross = backbone
            .positive_edges()
            .any(|e| t.blocks.label(&e.from) != t.blocks.label(&e.to));
        if t.clusters.blocks() == t.blocks.blocks() && !cross {
            recovered += 1;
        }
    }
    outcome(
        recovered >= 95 && elapsed < Duration::from_secs(300),
        format!(
            "{}/100 trials recover both blocks with no positive cross-block edge (n_samples = {}), {:.1?}",
            recovered, PLANTED_SAMPLES, elapsed
        ),
    )
}

fn criterion_4(trials: &[Trial]) -> Outcome {
    let unit = |pairs: &[(&str, &str, f64)]| {
        WeightedGraph::from_edges(vec!["a".into(), "b".into(), "c".into(), "d".into()], pairs).expect("graph")
    };
    let g = unit(&[("a", "b", 1.0), ("c", "d", 1.0)]);
    let aligned = Partition::from_labels([("a", "x"), ("b", "x"), ("c", "y"), ("d", "y")]);
    let anti = Partition::from_labels([("a", "x"), ("b", "y"), ("c", "x"), ("d", "y")]);
    let single = Partition::from_labels([("a", "x"), ("b", "x"), ("c", "x"), ("d", "x")]);
    let q_al = modularity(&g, &aligned).expect("q");
    let q_anti = modularity(&g, &anti).expect("q");
    let q_one = modularity(&g, &single).expect("q");
    let exact_ok = (q_al - 0.5).abs() < 1e-12 && (q_anti + 0.5).abs() < 1e-12 && q_one.abs() < 1e-12;

    let mut weakest = 1.0f64;
    let mut failing = 0;
    for (i, t) in trials.iter().enumerate() {
        let backbone = filter_network(&t.sigs, 1.96, Keep::Both).expect("filter");
        let net = WeightedGraph::from_backbone(&backbone);
        let q = modularity(&net, &t.blocks).expect("q");
        let mut rng = ChaCha8Rng::seed_from_u64(i as u64);
        let beaten = (0..1000)
            .filter(|_| modularity(&net, &t.blocks.permuted(&mut rng)).expect("q") < q)
            .count();
        let frac = beaten as f64 / 1000.0;
        weakest = weakest.min(frac);
        if frac < 0.95 {
            failing += 1;
        }
    }
    outcome(
        exact_ok && failing == 0,
        format!(
            "Q aligned = {}, anti-aligned = {}, single group = {}; planted labels beat >= {:.1}% of 1000 relabelings on every one of {} networks ({} below 95%)",
            q_al,
            q_anti,
            q_one,
            100.0 * weakest,
            trials.len(),
            failing
        ),
    )
}

fn criterion_5(trials: &[Trial]) -> Outcome {
    let thresholds = [1.64, 1.96, 2.58, 3.29];
    let mut violations = 0;
    for t in trials {
        let sets: Vec<BTreeSet<(String, String, Sign)>> = thresholds
            .iter()
            .map(|&z| filter_network(&t.sigs, z, Keep::Both).expect("filter").edge_keys())
            .collect();
        for w in sets.windows(2) {
            violations += w[1].difference(&w[0]).count();
        }
    }
    outcome(
        violations == 0,
        format!("{} networks, 1.64 ⊇ 1.96 ⊇ 2.58 ⊇ 3.29: {} violations", trials.len(), violations),
    )
}

// ---------------------------------------------------------------- 6

fn criterion_6() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let (mut u_bad, mut auc_bad, mut worst_p) = (0, 0, 0.0f64);
    for i in 0..200 {
        let n1 = rng.gen_range(1..=20);
        let n2 = rng.gen_range(1..=20);
        // half the pairs draw from a small integer range, so ties are common
        let mut draw = |n: usize| -> Vec<f64> {
            (0..n)
                .map(|_| if i % 2 == 0 { f64::from(rng.gen_range(0..6)) } else { rng.gen::<f64>() * 10.0 })
                .collect()
        };
        let x = draw(n1);
        let y = draw(n2);
        let mw = mann_whitney(&x, &y).expect("mann-whitney");
        if mw.u != support::brute_u(&x, &y) {
            u_bad += 1;
        }
        if auc_from_u(mw.u, n1, n2).expect("auc") != mw.u / (n1 * n2) as f64 {
            auc_bad += 1;
        }
        worst_p = worst_p.max((mw.p_two_sided - support::exact_u_p(&x, &y)).abs());
    }
    outcome(
        u_bad == 0 && auc_bad == 0 && worst_p <= 0.02,
        format!(
            "200 random pairs: {} U mismatches, {} AUC mismatches, max |p - exact p| = {:.2e}",
            u_bad, auc_bad, worst_p
        ),
    )
}

// ---------------------------------------------------------------- 7

const CAL_DOCS: usize = 200;

fn calibration_labels(rng: &mut ChaCha8Rng) -> Vec<String> {
    (0..CAL_DOCS)
        .map(|_| if rng.gen_bool(0.4) { "g".to_string() } else { "h".to_string() })
        .collect()
}

fn gaussian(rng: &mut ChaCha8Rng) -> f64 {
    // Box-Muller
    let (u1, u2): (f64, f64) = (rng.gen::<f64>().max(f64::MIN_POSITIVE), rng.gen());
    (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
}

/// Mean and standard deviation of a group mean under permutation of the labels:
/// sampling `k` of the `n` values without replacement.
fn permutation_moments(values: &[f64], k: usize) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let pop_var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
    let k = k as f64;
    (mean, (pop_var / k * (n - k) / (n - 1.0)).sqrt())
}

fn criterion_7() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let labels = calibration_labels(&mut rng);
    let cols: Vec<Vec<f64>> = (0..300)
        .map(|f| {
            (0..CAL_DOCS)
                .map(|_| match f % 3 {
                    0 => gaussian(&mut rng),
                    1 => rng.gen::<f64>(),
                    _ => -rng.gen::<f64>().ln(),
                })
                .collect()
        })
        .collect();
    let m = matrix(&cols);
    let z = shuffle_ztest(&m, &labels, "g", 1000, 70, &ShuffleUnit::Documents).expect("z-test");
    let rate = z.iter().filter(|s| s.z.is_some_and(|z| z.abs() > 1.96)).count() as f64 / 300.0;

    // planted effects: shift the group so the observed mean sits 3 permutation SDs out
    let trials = 200;
    let mut detected = 0;
    let mut smallest_effect = f64::INFINITY;
    for t in 0..trials {
        let labels = calibration_labels(&mut rng);
        let in_group: Vec<bool> = labels.iter().map(|l| l == "g").collect();
        let k = in_group.iter().filter(|&&g| g).count();
        let base: Vec<f64> = (0..CAL_DOCS).map(|_| gaussian(&mut rng)).collect();
        let effect = |delta: f64| {
            let v: Vec<f64> = base
                .iter()
                .zip(&in_group)
                .map(|(x, &g)| if g { x + delta } else { *x })
                .collect();
            let obs = v.iter().zip(&in_group).filter(|(_, &g)| g).map(|(x, _)| x).sum::<f64>() / k as f64;
            let (mean, sd) = permutation_moments(&v, k);
            ((obs - mean) / sd, v)
        };
        // smallest shift giving an effect of at least 3 SDs, by bisection
        let (mut lo, mut hi) = (0.0, 10.0);
        for _ in 0..60 {
            let mid = (lo + hi) / 2.0;
            if effect(mid).0 >= 3.0 {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        let (size, values) = effect(hi);
        smallest_effect = smallest_effect.min(size);
        let sign = if t % 2 == 0 { 1.0 } else { -1.0 };
        let values: Vec<f64> = values.iter().map(|v| sign * v).collect();
        let m = matrix(&[values]);
        let z = shuffle_ztest(&m, &labels, "g", 1000, 700 + t as u64, &ShuffleUnit::Documents).expect("z-test");
        if z[0].z.is_some_and(|z| z.abs() > 1.96) {
            detected += 1;
        }
    }
    let power = detected as f64 / trials as f64;
    outcome(
        (0.03..=0.07).contains(&rate) && power >= 0.99 && smallest_effect >= 3.0,
        format!(
            "null: {:.1}% of 300 features with |z| > 1.96; planted (>= {:.3} SD): {}/{} detected",
            100.0 * rate,
            smallest_effect,
            detected,
            trials
        ),
    )
}

fn matrix(cols: &[Vec<f64>]) -> FeatureMatrix {
    let n = cols[0].len();
    FeatureMatrix::new(
        (0..n).map(|d| format!("d{}", d)).collect(),
        (0..cols.len()).map(|f| format!("f{}", f)).collect(),
        (0..n).map(|d| cols.iter().map(|c| c[d]).collect()).collect(),
    )
    .expect("matrix")
}

// ---------------------------------------------------------------- 8

fn criterion_8() -> Outcome {
    let start = Instant::now();
    let synth = topic_corpus(&TopicCorpusConfig::default()).expect("corpus");
    let cfg = LdaConfig {
        topics: 4,
        iterations: 500,
        seed: 8,
        ..LdaConfig::default()
    };
    let mut state = TopicModelState::init(&synth.corpus, &synth.terms, &cfg).expect("init");
    let tokens = synth.corpus.total_tokens();
    let mut conservation_failures = 0;
    for _ in 0..cfg.iterations {
        state.sweep();
        let totals: u64 = state.topic_totals().iter().map(|&c| u64::from(c)).sum();
        let assigned: usize = state.assignments().iter().map(Vec::len).sum();
        if state.check_counts().is_err() || totals != tokens as u64 || assigned != tokens {
            conservation_failures += 1;
        }
    }
    let cosine = support::best_alignment(&synth.phi, &state.topic_word());
    let theta = doc_topics(&state);
    let worst_row = (0..theta.n_docs())
        .map(|d| (theta.row(d).iter().sum::<f64>() - 1.0).abs())
        .fold(0.0, f64::max);
    let elapsed = start.elapsed();
    outcome(
        cosine >= 0.9 && worst_row <= 1e-12 && conservation_failures == 0 && elapsed < Duration::from_secs(120),
        format!(
            "mean aligned cosine {:.4}; max |row sum - 1| = {:.1e}; {} conservation failures over 500 sweeps; {:.1?}",
            cosine, worst_row, conservation_failures, elapsed
        ),
    )
}

// ---------------------------------------------------------------- 9, 10

fn example_config() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("data/example/config.json")
}

fn tree(dir: &Path) -> BTreeMap<PathBuf, Vec<u8>> {
    fn walk(root: &Path, dir: &Path, out: &mut BTreeMap<PathBuf, Vec<u8>>) {
        for e in std::fs::read_dir(dir).expect("read dir") {
            let p = e.expect("entry").path();
            if p.is_dir() {
                walk(root, &p, out);
            } else {
                out.insert(p.strip_prefix(root).expect("prefix").to_path_buf(), std::fs::read(&p).expect("read"));
            }
        }
    }
    let mut out = BTreeMap::new();
    walk(dir, dir, &mut out);
    out
}

fn criterion_9() -> Outcome {
    let base = RunConfig {
        n_samples: 500,
        n_rand: 200,
        lda_iterations: 100,
        ..RunConfig::load(&example_config()).expect("example config")
    };
    let tmp = tempfile::tempdir().expect("tempdir");
    let mut outputs = Vec::new();
    for (i, threads) in [1usize, 4, 8, 8].iter().enumerate() {
        let cfg = RunConfig {
            threads: Some(*threads),
            out: tmp.path().join(format!("run{}", i)),
            ..base.clone()
        };
        if let Err(e) = run(Command::All, &cfg) {
            return outcome(false, format!("run at {} threads failed: {}", threads, e));
        }
        outputs.push(tree(&cfg.out));
    }
    let files = outputs[0].len();
    let differing: BTreeSet<&PathBuf> = outputs[1..]
        .iter()
        .flat_map(|o| {
            outputs[0]
                .iter()
                .filter(move |(p, bytes)| o.get(*p) != Some(*bytes))
                .map(|(p, _)| p)
                .chain(o.keys().filter(|p| !outputs[0].contains_key(*p)))
        })
        .collect();
    outcome(
        differing.is_empty() && files > 0,
        format!(
            "cmd_all at 1, 4, 8 and again 8 threads: {} files each, {} differ{}",
            files,
            differing.len(),
            if differing.is_empty() {
                String::new()
            } else {
                format!(" ({:?})", differing)
            }
        ),
    )
}

fn criterion_10() -> Outcome {
    let tmp = tempfile::tempdir().expect("tempdir");
    let cfg = RunConfig {
        out: tmp.path().join("out"),
        ..match RunConfig::load(&example_config()) {
            Ok(c) => c,
            Err(e) => return outcome(false, format!("example config does not load: {}", e)),
        }
    };
    if let Err(e) = run(Command::All, &cfg) {
        return outcome(false, format!("example run failed: {}", e));
    }
    let sig_path = cfg.out.join("network/significance.csv");
    let text = std::fs::read_to_string(&sig_path).expect("significance csv");
    let header = text.lines().find(|l| !l.starts_with('#')).unwrap_or("");
    let sigs = match export::read_significance_csv(&sig_path) {
        Ok(s) => s,
        Err(e) => return outcome(false, format!("significance CSV does not read back: {}", e)),
    };
    let outlets: BTreeSet<&str> = sigs.iter().flat_map(|s| [s.from.as_str(), s.to.as_str()]).collect();
    let n = outlets.len();
    let rewritten = tmp.path().join("rewritten.csv");
    let meta = cfg.meta();
    export::write_significance_csv(&rewritten, &sigs, Some(&meta)).expect("rewrite");
    let round_trip = std::fs::read_to_string(&rewritten).expect("read") == text;
    let expected = [
        "network/significance.csv",
        "network/backbone.graphml",
        "network/backbone.dot",
        "network/clusters.csv",
        "modularity/ranking.csv",
        "content/topic_z_k6.csv",
        "content/style.csv",
        "robustness/sweep.json",
        "robustness/ablation.json",
    ];
    let missing: Vec<&str> = expected.iter().copied().filter(|f| !cfg.out.join(f).exists()).collect();
    let header_ok = header == "from,to,shared,w_obs,null_mean,null_std,z,p";
    let starts_with_meta = text.starts_with("# tool: copub");
    outcome(
        header_ok && round_trip && missing.is_empty() && sigs.len() == n * (n - 1) / 2 && starts_with_meta,
        format!(
            "example dataset: {} outlets, {} pair rows, header `{}`, byte-exact round trip {}, missing outputs {:?}",
            n,
            sigs.len(),
            header,
            round_trip,
            missing
        ),
    )
}

fn main() {
    let mut results: Vec<(usize, &str, Outcome)> = Vec::new();
    let mut record = |i: usize, name: &'static str, f: &dyn Fn() -> Outcome| {
        let start = Instant::now();
        let o = f();
        println!(
            "criterion {:>2} {} [{}] {} ({:.1?})",
            i,
            if o.pass { "PASS" } else { "FAIL" },
            name,
            o.detail,
            start.elapsed()
        );
        results.push((i, name, o));
    };
    record(1, "null-model exactness", &criterion_1);
    record(2, "degree and edge conservation", &criterion_2);
    let (trials, elapsed) = planted_trials();
    record(3, "planted-partition recovery", &|| criterion_3(&trials, elapsed));
    record(4, "modularity oracle", &|| criterion_4(&trials));
    record(5, "threshold monotonicity", &|| criterion_5(&trials));
    record(6, "Mann-Whitney / AUC oracle", &criterion_6);
    record(7, "permutation-test calibration", &criterion_7);
    record(8, "LDA recovery", &criterion_8);
    record(9, "pipeline determinism", &criterion_9);
    record(10, "format fidelity", &criterion_10);

    let failed: Vec<usize> = results.iter().filter(|(_, _, o)| !o.pass).map(|(i, _, _)| *i).collect();
    println!(
        "acceptance: {}/{} criteria passed",
        results.len() - failed.len(),
        results.len()
    );
    if !failed.is_empty() {
        println!("acceptance: failed criteria {:?}", failed);
        std::process::exit(1);
    }
}
