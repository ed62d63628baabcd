//! Partitions of outlets derived from attribute tables, and their modularity on a
//! weighted network.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::path::Path;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Projection;
use crate::null_model::ValidatedNetwork;

/// Node → group label. Labels are opaque.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Partition {
    labels: BTreeMap<String, String>,
}

impl Partition {
    pub fn from_labels<I, K, V>(labels: I) -> Self
    where
        I: IntoIterator<Item = (K, V)>,
        K: Into<String>,
        V: Into<String>,
    {
        Partition {
            labels: labels.into_iter().map(|(k, v)| (k.into(), v.into())).collect(),
        }
    }

    pub fn label(&self, node: &str) -> Option<&str> {
        self.labels.get(node).map(String::as_str)
    }

    pub fn labels(&self) -> &BTreeMap<String, String> {
        &self.labels
    }

    pub fn nodes(&self) -> impl Iterator<Item = &str> {
        self.labels.keys().map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    /// Label → sorted members.
    pub fn groups(&self) -> BTreeMap<String, Vec<String>> {
        let mut g: BTreeMap<String, Vec<String>> = BTreeMap::new();
        for (n, l) in &self.labels {
            g.entry(l.clone()).or_default().push(n.clone());
        }
        g
    }

    pub fn group_count(&self) -> usize {
        self.labels.values().collect::<BTreeSet<_>>().len()
    }

    /// Member sets, ignoring label names. Handy for comparing partitions.
    pub fn blocks(&self) -> BTreeSet<BTreeSet<String>> {
        self.groups()
            .into_values()
            .map(|m| m.into_iter().collect())
            .collect()
    }

    /// Same group sizes, labels randomly reassigned to nodes.
    pub fn permuted<R: Rng + ?Sized>(&self, rng: &mut R) -> Partition {
        let mut labels: Vec<String> = self.labels.values().cloned().collect();
        labels.shuffle(rng);
        Partition {
            labels: self.labels.keys().cloned().zip(labels).collect(),
        }
    }
}

/// Undirected graph with nonnegative real weights.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightedGraph {
    pub nodes: Vec<String>,
    /// `(i, j, weight)` with `i != j`; each undirected edge listed once.
    pub edges: Vec<(usize, usize, f64)>,
}

impl WeightedGraph {
    pub fn new(nodes: Vec<String>) -> Self {
        WeightedGraph { nodes, edges: Vec::new() }
    }

    pub fn from_edges(nodes: Vec<String>, edges: &[(&str, &str, f64)]) -> Result<Self> {
        let idx: HashMap<&str, usize> = nodes.iter().enumerate().map(|(i, n)| (n.as_str(), i)).collect();
        let edges = edges
            .iter()
            .map(|(a, b, w)| match (idx.get(a), idx.get(b)) {
                (Some(&i), Some(&j)) => Ok((i, j, *w)),
                _ => Err(Error::Argument(format!("edge {}–{} references an unknown node", a, b))),
            })
            .collect::<Result<_>>()?;
        Ok(WeightedGraph { nodes, edges })
    }

    /// Positive backbone edges weighted by their observed shared-contributor counts.
    pub fn from_backbone(v: &ValidatedNetwork) -> Self {
        let idx: HashMap<&str, usize> = v.nodes.iter().enumerate().map(|(i, n)| (n.as_str(), i)).collect();
        WeightedGraph {
            nodes: v.nodes.clone(),
            edges: v
                .positive_edges()
                .filter_map(|e| Some((*idx.get(e.from.as_str())?, *idx.get(e.to.as_str())?, f64::from(e.weight))))
                .collect(),
        }
    }

    /// The raw weighted projection.
    pub fn from_projection(p: &Projection) -> Self {
        WeightedGraph {
            nodes: p.nodes().to_vec(),
            edges: p.edges().map(|(i, j, w)| (i, j, f64::from(w))).collect(),
        }
    }

    pub fn total_weight(&self) -> f64 {
        self.edges.iter().map(|e| e.2).sum()
    }
}

/// Newman modularity of `part` on `net`.
///
/// `Q = 1/(2W) Σ_ij (A_ij − k_i k_j / 2W) δ(c_i, c_j)` over ordered pairs, with no self-loops.
pub fn modularity(net: &WeightedGraph, part: &Partition) -> Result<f64> {
    let mut group_of = Vec::with_capacity(net.nodes.len());
    let mut group_ids: HashMap<&str, usize> = HashMap::new();
    for n in &net.nodes {
        let label = part
            .label(n)
            .ok_or_else(|| Error::Argument(format!("node `{}` has no group label", n)))?;
        let next = group_ids.len();
        group_of.push(*group_ids.entry(label).or_insert(next));
    }
    let mut internal = vec![0.0; group_ids.len()];
    let mut degree = vec![0.0; group_ids.len()];
    let mut two_w = 0.0;
    for &(i, j, w) in &net.edges {
        if w < 0.0 || !w.is_finite() {
            return Err(Error::Argument(format!("edge weight {} is not a nonnegative number", w)));
        }
        if i == j {
            return Err(Error::Argument("self-loops are not allowed".into()));
        }
        two_w += 2.0 * w;
        degree[group_of[i]] += w;
        degree[group_of[j]] += w;
        if group_of[i] == group_of[j] {
            internal[group_of[i]] += 2.0 * w;
        }
    }
    if two_w == 0.0 {
        return Err(Error::ZeroWeight);
    }
    Ok(internal
        .iter()
        .zip(&degree)
        .map(|(a, k)| a / two_w - (k / two_w) * (k / two_w))
        .sum())
}

/// Scores each named partition and orders by decreasing Q, ties by name.
pub fn rank_classifications(net: &WeightedGraph, parts: &[(String, Partition)]) -> Result<Vec<(String, f64)>> {
    if parts.is_empty() {
        return Err(Error::Argument("no partitions to rank".into()));
    }
    let mut scored = parts
        .iter()
        .map(|(name, p)| modularity(net, p).map(|q| (name.clone(), q)))
        .collect::<Result<Vec<_>>>()?;
    scored.sort_by(|a, b| b.1.total_cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    Ok(scored)
}

/// Equal-width bins over `[min, max]`; bin `i` is `[min + i·w, min + (i+1)·w)` and the top
/// bin also includes `max`. Labels are `bin_0` … `bin_{k−1}`.
pub fn bin_continuous(values: &BTreeMap<String, f64>, k: usize) -> Result<Partition> {
    if values.is_empty() {
        return Err(Error::Argument("cannot bin an empty value set".into()));
    }
    if k < 1 {
        return Err(Error::Argument("bin count must be at least 1".into()));
    }
    if let Some((n, v)) = values.iter().find(|(_, v)| !v.is_finite()) {
        return Err(Error::Argument(format!("value for `{}` is not finite: {}", n, v)));
    }
    let min = values.values().copied().fold(f64::INFINITY, f64::min);
    let max = values.values().copied().fold(f64::NEG_INFINITY, f64::max);
    let width = (max - min) / k as f64;
    Ok(Partition::from_labels(values.iter().map(|(n, &v)| {
        let bin = if width == 0.0 {
            0
        } else {
            (1..k).rev().find(|&i| v >= min + i as f64 * width).unwrap_or(0)
        };
        (n.clone(), format!("bin_{}", bin))
    })))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Attribute {
    Continuous {
        values: BTreeMap<String, f64>,
        units: Option<String>,
    },
    Categorical {
        values: BTreeMap<String, String>,
    },
    /// Per-outlet counts (or shares) over named categories, e.g. audience by region.
    Counts {
        values: BTreeMap<String, BTreeMap<String, f64>>,
    },
}

impl Attribute {
    fn covers(&self, outlet: &str) -> bool {
        match self {
            Attribute::Continuous { values, .. } => values.contains_key(outlet),
            Attribute::Categorical { values } => values.contains_key(outlet),
            Attribute::Counts { values } => values.contains_key(outlet),
        }
    }
}

/// Per-outlet attributes.
///
/// CSV layout: an `outlet_id` column, then one column per attribute. A column whose
/// non-empty cells all parse as numbers is continuous (`name[units]` records units);
/// otherwise it is categorical. Columns named `attr:category` are grouped into one
/// counts attribute `attr`.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct AttributeTable {
    pub outlets: Vec<String>,
    pub attributes: BTreeMap<String, Attribute>,
}

impl AttributeTable {
    pub fn read_csv(path: &Path) -> Result<Self> {
        let mut rdr = crate::ingest::csv_reader(crate::ingest::open(path)?);
        let headers = rdr.headers()?.clone();
        if headers.get(0).map(str::trim) != Some("outlet_id") {
            return Err(Error::Malformed {
                path: path.display().to_string(),
                line: 1,
                message: "first column must be outlet_id".into(),
            });
        }
        let mut rows: Vec<csv::StringRecord> = Vec::new();
        let mut outlets = Vec::new();
        let mut seen = BTreeSet::new();
        for row in rdr.records() {
            let row = row?;
            let id = row.get(0).unwrap_or("").trim().to_string();
            if id.is_empty() || !seen.insert(id.clone()) {
                return Err(Error::Malformed {
                    path: path.display().to_string(),
                    line: row.position().map(|p| p.line()).unwrap_or(0),
                    message: format!("empty or duplicate outlet_id `{}`", id),
                });
            }
            outlets.push(id);
            rows.push(row);
        }

        let mut attributes = BTreeMap::new();
        for (c, header) in headers.iter().enumerate().skip(1) {
            let header = header.trim();
            let cells: Vec<(&String, &str)> = outlets
                .iter()
                .zip(&rows)
                .map(|(o, r)| (o, r.get(c).unwrap_or("").trim()))
                .filter(|(_, v)| !v.is_empty())
                .collect();
            if let Some((attr, category)) = header.split_once(':') {
                let entry = attributes
                    .entry(attr.to_string())
                    .or_insert_with(|| Attribute::Counts { values: BTreeMap::new() });
                let Attribute::Counts { values } = entry else {
                    return Err(Error::Config(format!("attribute `{}` is declared twice", attr)));
                };
                for (o, v) in cells {
                    let x: f64 = v.parse().map_err(|_| {
                        Error::Config(format!("count column `{}` has non-numeric value `{}`", header, v))
                    })?;
                    values.entry(o.clone()).or_default().insert(category.to_string(), x);
                }
                continue;
            }
            let (name, units) = match header.split_once('[') {
                Some((n, u)) => (n.trim().to_string(), Some(u.trim_end_matches(']').to_string())),
                None => (header.to_string(), None),
            };
            let numeric: Option<BTreeMap<String, f64>> = cells
                .iter()
                .map(|(o, v)| v.parse::<f64>().ok().map(|x| ((*o).clone(), x)))
                .collect();
            let attr = match numeric {
                Some(values) if !values.is_empty() => Attribute::Continuous { values, units },
                _ => Attribute::Categorical {
                    values: cells.iter().map(|(o, v)| ((*o).clone(), v.to_string())).collect(),
                },
            };
            if attributes.insert(name.clone(), attr).is_some() {
                return Err(Error::Config(format!("attribute `{}` is declared twice", name)));
            }
        }
        Ok(AttributeTable { outlets, attributes })
    }

    /// Outlets of `required` missing from the table.
    pub fn missing_outlets<'a>(&self, required: &'a [String]) -> Vec<&'a str> {
        required
            .iter()
            .filter(|o| !self.outlets.contains(o))
            .map(String::as_str)
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum DeriveMode {
    Bin { k: usize },
    /// `numerator / denominator` of a counts attribute, then binned.
    RatioBin { k: usize, numerator: String, denominator: String },
    Categorical,
    LargestGroup,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DerivedPartition {
    pub partition: Partition,
    /// Outlets that could not be labelled (zero denominator); each sits in its own
    /// singleton group `excluded:<id>`.
    pub excluded: Vec<String>,
}

/// Turns one attribute into a partition of the given outlets.
pub fn derive_partition(
    table: &AttributeTable,
    outlets: &[String],
    attr: &str,
    mode: &DeriveMode,
) -> Result<DerivedPartition> {
    let attribute = table
        .attributes
        .get(attr)
        .ok_or_else(|| Error::Argument(format!("unknown attribute `{}`", attr)))?;
    if let Some(o) = outlets.iter().find(|o| !attribute.covers(o)) {
        return Err(Error::Argument(format!("attribute `{}` has no value for outlet `{}`", attr, o)));
    }
    let wrong_kind = || Error::Argument(format!("attribute `{}` does not support mode {:?}", attr, mode));
    let mut excluded = Vec::new();
    let partition = match (mode, attribute) {
        (DeriveMode::Bin { k }, Attribute::Continuous { values, .. }) => {
            let subset = outlets.iter().map(|o| (o.clone(), values[o])).collect();
            bin_continuous(&subset, *k)?
        }
        (DeriveMode::Categorical, Attribute::Categorical { values }) => {
            Partition::from_labels(outlets.iter().map(|o| (o.clone(), values[o].clone())))
        }
        (DeriveMode::LargestGroup, Attribute::Counts { values }) => Partition::from_labels(outlets.iter().map(|o| {
            let best = values[o]
                .iter()
                .fold(None::<(&String, f64)>, |best, (cat, &v)| match best {
                    Some((_, bv)) if bv >= v => best,
                    _ => Some((cat, v)),
                })
                .map(|(c, _)| c.clone())
                .unwrap_or_default();
            (o.clone(), best)
        })),
        (DeriveMode::RatioBin { k, numerator, denominator }, Attribute::Counts { values }) => {
            let mut ratios = BTreeMap::new();
            for o in outlets {
                let get = |cat: &str| {
                    values[o]
                        .get(cat)
                        .copied()
                        .ok_or_else(|| Error::Argument(format!("outlet `{}` lacks `{}:{}`", o, attr, cat)))
                };
                let (num, den) = (get(numerator)?, get(denominator)?);
                if den == 0.0 {
                    log::warn!("{}: outlet `{}` has zero `{}`; excluded from ratio binning", attr, o, denominator);
                    excluded.push(o.clone());
                } else {
                    ratios.insert(o.clone(), num / den);
                }
            }
            let mut labels = if ratios.is_empty() {
                BTreeMap::new()
            } else {
                bin_continuous(&ratios, *k)?.labels
            };
            for o in &excluded {
                labels.insert(o.clone(), format!("excluded:{}", o));
            }
            Partition { labels }
        }
        _ => return Err(wrong_kind()),
    };
    Ok(DerivedPartition { partition, excluded })
}
