//! Independent oracles shared by the integration and acceptance tests.
#![allow(dead_code)]

use std::collections::BTreeMap;

use copub::BipartiteGraph;

/// Every 0/1 matrix with the given row and column sums, as lists of `(row, col)` cells.
pub fn realizations(rows: &[usize], cols: &[usize]) -> Vec<Vec<(usize, usize)>> {
    fn go(
        r: usize,
        rows: &[usize],
        cap: &mut Vec<usize>,
        cur: &mut Vec<(usize, usize)>,
        out: &mut Vec<Vec<(usize, usize)>>,
    ) {
        if r == rows.len() {
            if cap.iter().all(|&c| c == 0) {
                out.push(cur.clone());
            }
            return;
        }
        choose(r, 0, rows[r], rows, cap, cur, out);
    }
    fn choose(
        r: usize,
        from: usize,
        left: usize,
        rows: &[usize],
        cap: &mut Vec<usize>,
        cur: &mut Vec<(usize, usize)>,
        out: &mut Vec<Vec<(usize, usize)>>,
    ) {
        if left == 0 {
            go(r + 1, rows, cap, cur, out);
            return;
        }
        for c in from..cap.len() {
            if cap[c] > 0 {
                cap[c] -= 1;
                cur.push((r, c));
                choose(r, c + 1, left - 1, rows, cap, cur, out);
                cur.pop();
                cap[c] += 1;
            }
        }
    }
    let mut out = Vec::new();
    go(0, rows, &mut cols.to_vec(), &mut Vec::new(), &mut out);
    out
}

/// `(from, to)` outlet pair → `(mean, variance)`.
pub type PairMoments = BTreeMap<(String, String), (f64, f64)>;

/// Exact mean and variance of every outlet-pair co-occurrence count under the uniform
/// distribution over degree-preserving realizations, keyed by outlet ids.
pub fn exact_pair_moments(g: &BipartiteGraph) -> (usize, PairMoments) {
    let nl = g.left_nodes().len();
    let nr = g.right_nodes().len();
    let mut rows = vec![0; nl];
    let mut cols = vec![0; nr];
    for &(l, r) in g.edges() {
        rows[l as usize] += 1;
        cols[r as usize] += 1;
    }
    let all = realizations(&rows, &cols);
    let mut sums = vec![vec![(0.0f64, 0.0f64); nr]; nr];
    for cells in &all {
        let mut adj = vec![vec![false; nr]; nl];
        for &(l, r) in cells {
            adj[l][r] = true;
        }
        for i in 0..nr {
            for j in i + 1..nr {
                let w = (0..nl).filter(|&l| adj[l][i] && adj[l][j]).count() as f64;
                sums[i][j].0 += w;
                sums[i][j].1 += w * w;
            }
        }
    }
    let n = all.len() as f64;
    let mut out = BTreeMap::new();
    for (i, row) in sums.iter().enumerate() {
        for (j, &(s1, s2)) in row.iter().enumerate().skip(i + 1) {
            let mean = s1 / n;
            let var = (s2 / n - mean * mean).max(0.0);
            out.insert((g.right_nodes()[i].clone(), g.right_nodes()[j].clone()), (mean, var));
        }
    }
    (all.len(), out)
}

/// `Σ [x > y] + ½ [x = y]` by direct pair counting.
pub fn brute_u(x: &[f64], y: &[f64]) -> f64 {
    let mut u = 0.0;
    for a in x {
        for b in y {
            if a > b {
                u += 1.0;
            } else if a == b {
                u += 0.5;
            }
        }
    }
    u
}

/// Exact two-sided permutation p of U. Works on tie groups of the sorted pooled
/// sample: choosing `a` of a group's `t` values for x adds `a·(ys below) + a·(t−a)/2`
/// to U, with multiplicity C(t, a). Doubled U keeps everything integral.
pub fn exact_u_p(x: &[f64], y: &[f64]) -> f64 {
    let (n1, n2) = (x.len(), y.len());
    let mut pooled: Vec<f64> = x.iter().chain(y).copied().collect();
    pooled.sort_by(f64::total_cmp);
    let mut groups = Vec::new();
    let mut i = 0;
    while i < pooled.len() {
        let mut j = i;
        while j + 1 < pooled.len() && pooled[j + 1] == pooled[i] {
            j += 1;
        }
        groups.push(j - i + 1);
        i = j + 1;
    }
    let max2u = 2 * n1 * n2;
    // dist[xs][2U] = number of labelled arrangements
    let mut dist = vec![vec![0f64; max2u + 1]; n1 + 1];
    dist[0][0] = 1.0;
    let mut seen = 0usize;
    for &t in &groups {
        let mut next = vec![vec![0f64; max2u + 1]; n1 + 1];
        for xs in 0..=n1.min(seen) {
            let ys_below = seen - xs;
            if ys_below > n2 {
                continue;
            }
            for u2 in 0..=max2u {
                let c = dist[xs][u2];
                if c == 0.0 {
                    continue;
                }
                for a in 0..=t.min(n1 - xs) {
                    if t - a + ys_below > n2 {
                        continue;
                    }
                    let add = 2 * a * ys_below + a * (t - a);
                    next[xs + a][u2 + add] += c * binom(t, a);
                }
            }
        }
        dist = next;
        seen += t;
    }
    let u_obs2 = (2.0 * brute_u(x, y)).round() as i64;
    let centre = (n1 * n2) as i64;
    let obs = (u_obs2 - centre).abs();
    let row = &dist[n1];
    let total: f64 = row.iter().sum();
    let extreme: f64 = row
        .iter()
        .enumerate()
        .filter(|(u2, _)| (*u2 as i64 - centre).abs() >= obs)
        .map(|(_, c)| c)
        .sum();
    extreme / total
}

fn binom(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Two-sided permutation p of U by enumerating every split of the pooled sample.
/// Only for small samples.
pub fn enumerated_u_p(x: &[f64], y: &[f64]) -> f64 {
    fn go(pooled: &[f64], i: usize, xs: &mut Vec<f64>, ys: &mut Vec<f64>, k: usize, f: &mut dyn FnMut(&[f64], &[f64])) {
        if i == pooled.len() {
            if xs.len() == k {
                f(xs, ys);
            }
            return;
        }
        if xs.len() < k {
            xs.push(pooled[i]);
            go(pooled, i + 1, xs, ys, k, f);
            xs.pop();
        }
        if ys.len() < pooled.len() - k {
            ys.push(pooled[i]);
            go(pooled, i + 1, xs, ys, k, f);
            ys.pop();
        }
    }
    let pooled: Vec<f64> = x.iter().chain(y).copied().collect();
    let centre = (x.len() * y.len()) as f64 / 2.0;
    let obs = (brute_u(x, y) - centre).abs();
    let (mut extreme, mut all) = (0u64, 0u64);
    go(&pooled, 0, &mut Vec::new(), &mut Vec::new(), x.len(), &mut |a, b| {
        all += 1;
        if (brute_u(a, b) - centre).abs() >= obs - 1e-9 {
            extreme += 1;
        }
    });
    extreme as f64 / all as f64
}

/// Cosine similarity of two vectors.
pub fn cosine(a: &[f64], b: &[f64]) -> f64 {
    let dot: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
    let na: f64 = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    let nb: f64 = b.iter().map(|x| x * x).sum::<f64>().sqrt();
    dot / (na * nb)
}

/// Best mean cosine over all one-to-one matchings of fitted to true rows (K small).
pub fn best_alignment(truth: &[Vec<f64>], fitted: &[Vec<f64>]) -> f64 {
    let k = truth.len();
    let sim: Vec<Vec<f64>> = truth
        .iter()
        .map(|t| fitted.iter().map(|f| cosine(t, f)).collect())
        .collect();
    let mut perm: Vec<usize> = (0..fitted.len()).collect();
    let mut best = f64::NEG_INFINITY;
    permute(&mut perm, 0, &mut |p| {
        let s: f64 = (0..k).map(|i| sim[i][p[i]]).sum::<f64>() / k as f64;
        best = best.max(s);
    });
    best
}

fn permute(p: &mut Vec<usize>, i: usize, f: &mut dyn FnMut(&[usize])) {
    if i == p.len() {
        f(p);
        return;
    }
    for j in i..p.len() {
        p.swap(i, j);
        permute(p, i + 1, f);
        p.swap(i, j);
    }
}

/// Builds a bipartite graph from `(contributor, outlet)` literals.
pub fn bipartite(pairs: &[(&str, &str)]) -> BipartiteGraph {
    BipartiteGraph::from_pairs(pairs.iter().copied())
}
