//! Clique enumeration and the edge/clique factor graph that drives the search.
//!
//! Edge-nodes are the node pairs with positive weight in the projection.
//! Clique-nodes are *all* cliques (not only maximal ones) of the binarized
//! projection, filtered by the twin constraints. `eta[e]` lists the
//! clique-nodes containing edge-node `e`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hypergraph::{ProjectionMatrix, SizeDistribution};

/// Node limit for factor graphs and search; node sets are `u64` bitmasks.
pub const MAX_NODES: usize = 64;

/// Number of cliques of each size `i` in the binarized projection.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CliqueCensus {
    pub counts: BTreeMap<usize, u64>,
}

impl CliqueCensus {
    pub fn get(&self, size: usize) -> u64 {
        self.counts.get(&size).copied().unwrap_or(0)
    }

    /// Sum of counts over sizes in `lo..=hi`.
    pub fn total_between(&self, lo: usize, hi: usize) -> u64 {
        self.counts.range(lo..=hi).map(|(_, c)| c).sum()
    }
}

/// The four combinations of the edge-count and diagonal refinements.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Refinement {
    None,
    EdgeCount,
    Diagonal,
    Both,
}

impl Refinement {
    pub const ALL: [Refinement; 4] = [
        Refinement::None,
        Refinement::EdgeCount,
        Refinement::Diagonal,
        Refinement::Both,
    ];

    pub fn matches_edge_count(self) -> bool {
        matches!(self, Refinement::EdgeCount | Refinement::Both)
    }

    pub fn matches_diagonal(self) -> bool {
        matches!(self, Refinement::Diagonal | Refinement::Both)
    }

    /// Adds this refinement to `base`, with `m` the edge count to match.
    pub fn apply(self, base: TwinConstraints, m: usize) -> TwinConstraints {
        let c = if self.matches_edge_count() {
            base.with_edge_count(m)
        } else {
            base
        };
        if self.matches_diagonal() {
            c.matching_diagonal()
        } else {
            c
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Refinement::None => "none",
            Refinement::EdgeCount => "edge-count",
            Refinement::Diagonal => "diagonal",
            Refinement::Both => "both",
        }
    }
}

impl std::fmt::Display for Refinement {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Refinement {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Refinement::ALL
            .into_iter()
            .find(|r| r.name() == s)
            .ok_or_else(|| Error::InvalidConstraints(format!("unknown refinement {s:?}")))
    }
}

/// Refinements applied to a twin search.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TwinConstraints {
    /// Largest clique size considered as a hyperedge.
    pub k_max: usize,
    /// Only hyperedges of exactly this size.
    pub uniform_k: Option<usize>,
    /// Exact number of hyperedges.
    pub edge_count: Option<usize>,
    /// Exact hyperedge size distribution.
    pub size_dist: Option<SizeDistribution>,
    /// Require hyperdegrees equal to the input diagonal.
    pub match_diagonal: bool,
    /// Whether 2-cliques are candidate hyperedges.
    pub allow_pairwise: bool,
}

impl TwinConstraints {
    /// No refinement: any simple hypergraph with hyperedges of size `2..=k_max`.
    pub fn unrefined(k_max: usize) -> Self {
        TwinConstraints {
            k_max,
            uniform_k: None,
            edge_count: None,
            size_dist: None,
            match_diagonal: false,
            allow_pairwise: true,
        }
    }

    /// `k`-uniform hypergraphs only.
    pub fn uniform(k: usize) -> Self {
        TwinConstraints {
            k_max: k,
            uniform_k: Some(k),
            ..TwinConstraints::unrefined(k)
        }
    }

    pub fn with_edge_count(mut self, m: usize) -> Self {
        self.edge_count = Some(m);
        self
    }

    pub fn with_size_dist(mut self, dist: SizeDistribution) -> Self {
        if let Some(k) = dist.max_size() {
            self.k_max = self.k_max.max(k);
        }
        self.size_dist = Some(dist);
        self
    }

    pub fn matching_diagonal(mut self) -> Self {
        self.match_diagonal = true;
        self
    }

    pub fn without_pairwise(mut self) -> Self {
        self.allow_pairwise = false;
        self
    }

    /// Checks internal consistency and compatibility with `w`.
    pub fn validate(&self, w: &ProjectionMatrix) -> Result<()> {
        let bad = |msg: &str| Err(Error::InvalidConstraints(msg.to_string()));
        if self.k_max < 2 {
            return bad("k_max must be at least 2");
        }
        if let Some(k) = self.uniform_k {
            if k < 2 {
                return Err(Error::BadUniformSize(k));
            }
            if self.k_max != k {
                return bad("k_max must equal the uniform size");
            }
            if self.size_dist.is_some() {
                return bad("uniform size and size distribution are mutually exclusive");
            }
        }
        if let Some(d) = &self.size_dist {
            if d.max_size().is_some_and(|k| k > self.k_max) {
                return bad("size distribution uses sizes above k_max");
            }
            if let Some(m) = self.edge_count {
                if d.total() != m as u64 {
                    return bad("edge count disagrees with the size distribution total");
                }
            }
        }
        if self.match_diagonal && !w.has_diagonal() {
            return bad("matching the diagonal needs a projection with diagonal");
        }
        if w.n() > MAX_NODES {
            return Err(Error::TooManyNodes {
                n: w.n(),
                max: MAX_NODES,
            });
        }
        Ok(())
    }

    /// Whether hyperedges of `size` may appear at all.
    pub fn allows_size(&self, size: usize) -> bool {
        if size < 2 || size > self.k_max {
            return false;
        }
        if let Some(k) = self.uniform_k {
            return size == k;
        }
        if size == 2 && !self.allow_pairwise && self.k_max > 2 {
            return false;
        }
        match &self.size_dist {
            Some(d) => d.get(size) > 0,
            None => true,
        }
    }
}

/// Bipartite edge-node / clique-node structure over a binarized projection.
#[derive(Clone, Debug)]
pub struct FactorGraph {
    n: usize,
    edge_nodes: Vec<(usize, usize)>,
    weights: Vec<u64>,
    pair_to_edge: Vec<Option<u32>>,
    clique_nodes: Vec<Vec<usize>>,
    clique_masks: Vec<u64>,
    clique_edges: Vec<Vec<u32>>,
    eta: Vec<Vec<u32>>,
}

impl FactorGraph {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edge_nodes(&self) -> &[(usize, usize)] {
        &self.edge_nodes
    }

    /// Weight `W_e` of each edge-node.
    pub fn weights(&self) -> &[u64] {
        &self.weights
    }

    pub fn clique_nodes(&self) -> &[Vec<usize>] {
        &self.clique_nodes
    }

    pub fn clique_mask(&self, c: usize) -> u64 {
        self.clique_masks[c]
    }

    /// Edge-node indices covered by clique `c`.
    pub fn clique_edges(&self, c: usize) -> &[u32] {
        &self.clique_edges[c]
    }

    /// Clique-nodes containing edge-node `e`, ordered by (size, nodes).
    pub fn eta(&self, e: usize) -> &[u32] {
        &self.eta[e]
    }

    pub fn etas(&self) -> &[Vec<u32>] {
        &self.eta
    }

    /// Edge-node index of the pair `{u, v}`, if it carries weight.
    pub fn edge_index(&self, u: usize, v: usize) -> Option<usize> {
        let (a, b) = if u < v { (u, v) } else { (v, u) };
        self.pair_to_edge[a * self.n + b].map(|e| e as usize)
    }
}

fn adjacency_masks(w: &ProjectionMatrix) -> Vec<u64> {
    let n = w.n();
    (0..n)
        .map(|u| {
            (0..n)
                .filter(|&v| v != u && w.get(u, v) > 0)
                .fold(0u64, |m, v| m | (1 << v))
        })
        .collect()
}

/// Nodes strictly greater than `u`.
#[inline]
fn above(u: usize) -> u64 {
    (!0u64).checked_shl(u as u32 + 1).unwrap_or(0)
}

/// Cliques of sizes `2..=k_max` as bitmasks, grouped by size, each group in
/// lexicographic order of node lists.
fn clique_masks_by_size(w: &ProjectionMatrix, k_max: usize) -> Vec<Vec<u64>> {
    let n = w.n();
    let adj = adjacency_masks(w);
    // (mask, common neighbours above the current maximum node)
    let mut level: Vec<(u64, u64)> = Vec::new();
    for u in 0..n {
        let mut rest = adj[u] & above(u);
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            let common = adj[u] & adj[v] & above(v);
            level.push(((1 << u) | (1 << v), common));
        }
    }
    let mut out = vec![level.iter().map(|&(m, _)| m).collect::<Vec<_>>()];
    for _size in 3..=k_max.min(n) {
        let mut next = Vec::new();
        for &(mask, common) in &level {
            let mut rest = common;
            while rest != 0 {
                let x = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                next.push((mask | (1 << x), common & adj[x] & above(x)));
            }
        }
        if next.is_empty() {
            break;
        }
        out.push(next.iter().map(|&(m, _)| m).collect());
        level = next;
    }
    out
}

fn mask_nodes(mask: u64) -> Vec<usize> {
    let mut v = Vec::with_capacity(mask.count_ones() as usize);
    let mut rest = mask;
    while rest != 0 {
        v.push(rest.trailing_zeros() as usize);
        rest &= rest - 1;
    }
    v
}

/// Cliques grouped by size.
pub type CliquesBySize = BTreeMap<usize, Vec<Vec<usize>>>;

/// All cliques of sizes `2..=k_max` of the binarized `w`, lexicographic per size.
pub fn enumerate_cliques(w: &ProjectionMatrix, k_max: usize) -> Result<(CliqueCensus, CliquesBySize)> {
    if w.n() > MAX_NODES {
        return Err(Error::TooManyNodes {
            n: w.n(),
            max: MAX_NODES,
        });
    }
    let mut census = CliqueCensus::default();
    let mut by_size = BTreeMap::new();
    let groups = clique_masks_by_size(w, k_max);
    for size in 2..=k_max {
        let list: Vec<Vec<usize>> = groups
            .get(size - 2)
            .map(|g| g.iter().map(|&m| mask_nodes(m)).collect())
            .unwrap_or_default();
        census.counts.insert(size, list.len() as u64);
        by_size.insert(size, list);
    }
    Ok((census, by_size))
}

/// Counts only; avoids materializing node lists.
pub fn clique_census(w: &ProjectionMatrix, k_max: usize) -> CliqueCensus {
    let groups = clique_masks_by_size(w, k_max);
    let counts = (2..=k_max)
        .map(|s| (s, groups.get(s - 2).map_or(0, |g| g.len() as u64)))
        .collect();
    CliqueCensus { counts }
}

/// Builds the factor graph of `w` with clique-nodes filtered by `constraints`.
pub fn build_factor_graph(w: &ProjectionMatrix, constraints: &TwinConstraints) -> Result<FactorGraph> {
    constraints.validate(w)?;
    let n = w.n();
    let mut edge_nodes = Vec::new();
    let mut weights = Vec::new();
    let mut pair_to_edge = vec![None; n * n];
    for u in 0..n {
        for v in (u + 1)..n {
            let x = w.get(u, v);
            if x > 0 {
                pair_to_edge[u * n + v] = Some(edge_nodes.len() as u32);
                edge_nodes.push((u, v));
                weights.push(x);
            }
        }
    }

    let groups = clique_masks_by_size(w, constraints.k_max);
    let mut clique_nodes = Vec::new();
    let mut clique_masks = Vec::new();
    let mut clique_edges = Vec::new();
    let mut eta = vec![Vec::new(); edge_nodes.len()];
    for (i, group) in groups.iter().enumerate() {
        let size = i + 2;
        if !constraints.allows_size(size) {
            continue;
        }
        for &mask in group {
            let id = clique_nodes.len() as u32;
            let nodes = mask_nodes(mask);
            let mut pairs = Vec::with_capacity(size * (size - 1) / 2);
            for (a, &u) in nodes.iter().enumerate() {
                for &v in &nodes[a + 1..] {
                    let e = pair_to_edge[u * n + v].expect("clique pair must be an edge-node");
                    pairs.push(e);
                    eta[e as usize].push(id);
                }
            }
            clique_nodes.push(nodes);
            clique_masks.push(mask);
            clique_edges.push(pairs);
        }
    }
    if let Some(e) = eta.iter().position(Vec::is_empty) {
        let (u, v) = edge_nodes[e];
        return Err(Error::EmptyCandidates(u, v));
    }
    Ok(FactorGraph {
        n,
        edge_nodes,
        weights,
        pair_to_edge,
        clique_nodes,
        clique_masks,
        clique_edges,
        eta,
    })
}
