//! Pairwise dissimilarity between hypergraphs.
//!
//! Jaccard compares labeled hyperedge sets. NetSimilie compares aggregated
//! per-node feature statistics with the Canberra distance. Portrait
//! divergence compares distributions of hyperedge-to-hyperedge distances.
//! The last two are invariant under node relabeling.

use std::collections::{BTreeMap, HashSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hypergraph::Hypergraph;

/// `1 − |E1 ∩ E2| / |E1 ∪ E2|` over hyperedge sets.
pub fn jaccard_distance(h1: &Hypergraph, h2: &Hypergraph) -> Result<f64> {
    let a: HashSet<&Vec<usize>> = h1.edges().iter().collect();
    let b: HashSet<&Vec<usize>> = h2.edges().iter().collect();
    let union = a.union(&b).count();
    if union == 0 {
        return Err(Error::BothEmpty);
    }
    let inter = a.intersection(&b).count();
    Ok(1.0 - inter as f64 / union as f64)
}

/// Per-node features, one row per node. Columns: hyperdegree, distinct
/// neighbour count, mean incident hyperedge size, mean neighbour hyperdegree,
/// then the number of incident hyperedges of each size `2..=max_size`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FeatureVector {
    pub max_size: usize,
    pub rows: Vec<Vec<f64>>,
}

impl FeatureVector {
    pub fn new(h: &Hypergraph, max_size: usize) -> Self {
        let n = h.n();
        let max_size = max_size.max(2);
        let mut degree = vec![0usize; n];
        let mut size_sum = vec![0usize; n];
        let mut by_size = vec![vec![0usize; max_size - 1]; n];
        let mut neighbours = vec![vec![false; n]; n];
        for e in h.edges() {
            for &v in e {
                degree[v] += 1;
                size_sum[v] += e.len();
                if e.len() <= max_size {
                    by_size[v][e.len() - 2] += 1;
                }
                for &u in e {
                    neighbours[v][u] |= u != v;
                }
            }
        }
        let rows = (0..n)
            .map(|v| {
                let nbrs: Vec<usize> = (0..n).filter(|&u| neighbours[v][u]).collect();
                let mean_size = if degree[v] == 0 {
                    0.0
                } else {
                    size_sum[v] as f64 / degree[v] as f64
                };
                let mean_nbr_degree = if nbrs.is_empty() {
                    0.0
                } else {
                    nbrs.iter().map(|&u| degree[u] as f64).sum::<f64>() / nbrs.len() as f64
                };
                let mut row = vec![degree[v] as f64, nbrs.len() as f64, mean_size, mean_nbr_degree];
                row.extend(by_size[v].iter().map(|&c| c as f64));
                row
            })
            .collect();
        FeatureVector { max_size, rows }
    }

    pub fn feature_count(&self) -> usize {
        4 + self.max_size - 1
    }

    /// Median, mean, standard deviation, skewness and kurtosis of each
    /// feature column, concatenated.
    pub fn embedding(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(5 * self.feature_count());
        for j in 0..self.feature_count() {
            let col: Vec<f64> = self.rows.iter().map(|r| r[j]).collect();
            out.extend(aggregate(&col));
        }
        out
    }
}

/// Population moments; skewness and (non-excess) kurtosis are 0 when the
/// variance is 0.
fn aggregate(xs: &[f64]) -> [f64; 5] {
    if xs.is_empty() {
        return [0.0; 5];
    }
    let n = xs.len() as f64;
    // sums run over sorted values so results do not depend on node order
    let mut sorted = xs.to_vec();
    sorted.sort_by(f64::total_cmp);
    let xs = &sorted[..];
    let mid = sorted.len() / 2;
    let median = if sorted.len() % 2 == 1 {
        sorted[mid]
    } else {
        (sorted[mid - 1] + sorted[mid]) / 2.0
    };
    let mean = xs.iter().sum::<f64>() / n;
    let moment = |p: i32| xs.iter().map(|x| (x - mean).powi(p)).sum::<f64>() / n;
    let var = moment(2);
    let std = var.sqrt();
    let (skew, kurt) = if var <= 1e-12 {
        (0.0, 0.0)
    } else {
        (moment(3) / (var * std), moment(4) / (var * var))
    };
    [median, mean, std, skew, kurt]
}

/// Canberra distance; `0/0` terms contribute 0.
pub fn canberra(x: &[f64], y: &[f64]) -> f64 {
    x.iter()
        .zip(y)
        .map(|(a, b)| {
            let den = a.abs() + b.abs();
            if den == 0.0 {
                0.0
            } else {
                (a - b).abs() / den
            }
        })
        .sum()
}

pub fn netsimilie_distance(h1: &Hypergraph, h2: &Hypergraph) -> f64 {
    let max_size = h1.n().max(h2.n());
    let a = FeatureVector::new(h1, max_size).embedding();
    let b = FeatureVector::new(h2, max_size).embedding();
    canberra(&a, &b)
}

/// One portrait coordinate: a hyperedge of size `own_size` has exactly
/// `count` hyperedges of size `other_size` at distance `distance`
/// (`None` = unreachable).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct PortraitKey {
    pub own_size: usize,
    pub other_size: usize,
    pub distance: Option<usize>,
    pub count: usize,
}

/// Sparse count tensor over [`PortraitKey`]s. Distances are shortest paths in
/// the hyperedge intersection graph; only nonzero `count` coordinates appear.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Portrait {
    pub entries: BTreeMap<PortraitKey, u64>,
}

impl Portrait {
    pub fn get(&self, own_size: usize, other_size: usize, distance: Option<usize>, count: usize) -> u64 {
        let key = PortraitKey {
            own_size,
            other_size,
            distance,
            count,
        };
        self.entries.get(&key).copied().unwrap_or(0)
    }

    pub fn total(&self) -> u64 {
        self.entries.values().sum()
    }

    /// Entries divided by their total; empty for an empty portrait.
    pub fn normalized(&self) -> BTreeMap<PortraitKey, f64> {
        let total = self.total() as f64;
        self.entries.iter().map(|(k, &v)| (*k, v as f64 / total)).collect()
    }
}

pub fn portrait(h: &Hypergraph) -> Portrait {
    let edges = h.edges();
    let m = edges.len();
    let mut incident = vec![Vec::new(); h.n()];
    for (i, e) in edges.iter().enumerate() {
        for &v in e {
            incident[v].push(i);
        }
    }
    let mut adj = vec![Vec::new(); m];
    for list in &incident {
        for &i in list {
            adj[i].extend(list.iter().copied().filter(|&j| j != i));
        }
    }
    for a in &mut adj {
        a.sort_unstable();
        a.dedup();
    }

    let mut out = Portrait::default();
    let mut dist = vec![usize::MAX; m];
    let mut queue = VecDeque::new();
    for src in 0..m {
        dist.fill(usize::MAX);
        dist[src] = 0;
        queue.push_back(src);
        while let Some(i) = queue.pop_front() {
            for &j in &adj[i] {
                if dist[j] == usize::MAX {
                    dist[j] = dist[i] + 1;
                    queue.push_back(j);
                }
            }
        }
        let mut tally: BTreeMap<(usize, Option<usize>), usize> = BTreeMap::new();
        for j in 0..m {
            let d = (dist[j] != usize::MAX).then_some(dist[j]);
            *tally.entry((edges[j].len(), d)).or_default() += 1;
        }
        for ((other_size, distance), count) in tally {
            let key = PortraitKey {
                own_size: edges[src].len(),
                other_size,
                distance,
                count,
            };
            *out.entries.entry(key).or_default() += 1;
        }
    }
    out
}

/// Jensen-Shannon divergence (base 2) between normalized portraits. Two empty
/// portraits are at distance 0; an empty and a non-empty one at distance 1.
pub fn portrait_divergence(h1: &Hypergraph, h2: &Hypergraph) -> f64 {
    js_divergence(&portrait(h1).normalized(), &portrait(h2).normalized())
}

fn js_divergence(p: &BTreeMap<PortraitKey, f64>, q: &BTreeMap<PortraitKey, f64>) -> f64 {
    match (p.is_empty(), q.is_empty()) {
        (true, true) => return 0.0,
        (true, false) | (false, true) => return 1.0,
        _ => {}
    }
    let keys: std::collections::BTreeSet<&PortraitKey> = p.keys().chain(q.keys()).collect();
    let mut d = 0.0;
    for k in keys {
        let a = p.get(k).copied().unwrap_or(0.0);
        let b = q.get(k).copied().unwrap_or(0.0);
        let mid = (a + b) / 2.0;
        if a > 0.0 {
            d += 0.5 * a * (a / mid).log2();
        }
        if b > 0.0 {
            d += 0.5 * b * (b / mid).log2();
        }
    }
    d.clamp(0.0, 1.0)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Measure {
    Jaccard,
    NetSimilie,
    Portrait,
}

impl Measure {
    pub fn distance(self, h1: &Hypergraph, h2: &Hypergraph) -> Result<f64> {
        match self {
            Measure::Jaccard => jaccard_distance(h1, h2),
            Measure::NetSimilie => Ok(netsimilie_distance(h1, h2)),
            Measure::Portrait => Ok(portrait_divergence(h1, h2)),
        }
    }
}

impl fmt::Display for Measure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Measure::Jaccard => "jaccard",
            Measure::NetSimilie => "netsimilie",
            Measure::Portrait => "portrait",
        })
    }
}

impl FromStr for Measure {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "jaccard" => Ok(Measure::Jaccard),
            "netsimilie" => Ok(Measure::NetSimilie),
            "portrait" => Ok(Measure::Portrait),
            other => Err(Error::InvalidConstraints(format!("unknown measure {other:?}"))),
        }
    }
}

/// Distances for all unordered pairs `(i, j)`, `i < j`, in row-major order.
pub fn pairwise_distances(hs: &[Hypergraph], measure: Measure) -> Result<Vec<(usize, usize, f64)>> {
    let pairs: Vec<(usize, usize)> = (0..hs.len())
        .flat_map(|i| ((i + 1)..hs.len()).map(move |j| (i, j)))
        .collect();
    match measure {
        // embeddings and portraits are per-hypergraph, so compute them once
        Measure::NetSimilie => {
            let max_size = hs.iter().map(Hypergraph::n).max().unwrap_or(0);
            let emb: Vec<Vec<f64>> = hs
                .par_iter()
                .map(|h| FeatureVector::new(h, max_size).embedding())
                .collect();
            Ok(pairs
                .into_par_iter()
                .map(|(i, j)| (i, j, canberra(&emb[i], &emb[j])))
                .collect())
        }
        Measure::Portrait => {
            let ports: Vec<_> = hs.par_iter().map(|h| portrait(h).normalized()).collect();
            Ok(pairs
                .into_par_iter()
                .map(|(i, j)| (i, j, js_divergence(&ports[i], &ports[j])))
                .collect())
        }
        Measure::Jaccard => pairs
            .into_par_iter()
            .map(|(i, j)| jaccard_distance(&hs[i], &hs[j]).map(|d| (i, j, d)))
            .collect(),
    }
}

/// Mean over all pairs; `None` with fewer than two hypergraphs.
pub fn mean_pairwise_distance(hs: &[Hypergraph], measure: Measure) -> Result<Option<f64>> {
    let d = pairwise_distances(hs, measure)?;
    if d.is_empty() {
        return Ok(None);
    }
    Ok(Some(d.iter().map(|t| t.2).sum::<f64>() / d.len() as f64))
}
