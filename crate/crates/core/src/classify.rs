//! Isomorphism classes of twins and Gram Mate detection.

use std::collections::HashMap;
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::canon::{canonical_form, ColoredGraph};
use crate::hypergraph::{project, DiagonalMode, Hypergraph, ProjectionMatrix};
use crate::search::TwinSet;

/// Byte string identifying a hypergraph or weighted graph up to isomorphism.
/// Serialized as lowercase hex.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalCode(pub Vec<u8>);

impl CanonicalCode {
    fn from_words(tag: u8, words: &[u64]) -> Self {
        let mut bytes = Vec::with_capacity(words.len() + 1);
        bytes.push(tag);
        for &w in words {
            push_varint(&mut bytes, w);
        }
        CanonicalCode(bytes)
    }
}

fn push_varint(out: &mut Vec<u8>, mut v: u64) {
    loop {
        let low = (v & 0x7f) as u8;
        v >>= 7;
        if v == 0 {
            out.push(low);
            return;
        }
        out.push(low | 0x80);
    }
}

impl fmt::Display for CanonicalCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in &self.0 {
            write!(f, "{b:02x}")?;
        }
        Ok(())
    }
}

impl Serialize for CanonicalCode {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for CanonicalCode {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        if s.len() % 2 != 0 {
            return Err(serde::de::Error::custom("odd-length hex string"));
        }
        (0..s.len())
            .step_by(2)
            .map(|i| u8::from_str_radix(&s[i..i + 2], 16))
            .collect::<Result<Vec<u8>, _>>()
            .map(CanonicalCode)
            .map_err(serde::de::Error::custom)
    }
}

const TAG_HYPERGRAPH: u8 = 1;
const TAG_PROJECTION: u8 = 2;
const TAG_LINE_GRAPH: u8 = 3;

/// Canonical code of the node/hyperedge incidence graph; nodes and hyperedges
/// get distinct vertex colors so the two sides never swap.
pub fn canonical_label_hypergraph(h: &Hypergraph) -> CanonicalCode {
    let n = h.n();
    let mut colors = vec![0u64; n];
    colors.extend(std::iter::repeat_n(1, h.edge_count()));
    let mut g = ColoredGraph::new(colors);
    for (i, e) in h.edges().iter().enumerate() {
        for &v in e {
            g.set_edge(v, n + i, 1);
        }
    }
    CanonicalCode::from_words(TAG_HYPERGRAPH, &canonical_form(&g).certificate)
}

/// Canonical code of the weighted graph, with diagonal entries (when present)
/// as vertex colors. Matrices with and without a diagonal never share a code.
pub fn canonical_label_projection(w: &ProjectionMatrix) -> CanonicalCode {
    let n = w.n();
    let colors = if w.has_diagonal() { w.diagonal() } else { vec![0; n] };
    let mut g = ColoredGraph::new(colors);
    for u in 0..n {
        for v in (u + 1)..n {
            g.set_edge(u, v, w.get(u, v));
        }
    }
    let mut words = canonical_form(&g).certificate;
    words.push(w.has_diagonal() as u64);
    CanonicalCode::from_words(TAG_PROJECTION, &words)
}

/// `A·Aᵀ` for the incidence matrix with hyperedges as rows, in emitted order:
/// hyperedge sizes on the diagonal, intersection sizes off it. Row-major m×m.
pub fn line_graph_matrix(h: &Hypergraph) -> Vec<u64> {
    let edges = h.edges();
    let m = edges.len();
    let masks: Vec<Vec<bool>> = edges
        .iter()
        .map(|e| {
            let mut mask = vec![false; h.n()];
            for &v in e {
                mask[v] = true;
            }
            mask
        })
        .collect();
    let mut out = vec![0u64; m * m];
    for i in 0..m {
        for j in 0..m {
            out[i * m + j] = edges[j].iter().filter(|&&v| masks[i][v]).count() as u64;
        }
    }
    out
}

/// Canonical code of the weighted line graph `A·Aᵀ` up to hyperedge relabeling.
pub fn canonical_label_line_graph(h: &Hypergraph) -> CanonicalCode {
    let m = h.edge_count();
    let l = line_graph_matrix(h);
    let mut g = ColoredGraph::new((0..m).map(|i| l[i * m + i]).collect());
    for i in 0..m {
        for j in (i + 1)..m {
            g.set_edge(i, j, l[i * m + j]);
        }
    }
    CanonicalCode::from_words(TAG_LINE_GRAPH, &canonical_form(&g).certificate)
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct IsoPartition {
    /// Twin indices per class; classes ordered by their smallest member.
    pub classes: Vec<Vec<usize>>,
    /// Smallest index of each class.
    pub representatives: Vec<usize>,
}

impl IsoPartition {
    pub fn class_count(&self) -> usize {
        self.classes.len()
    }
}

pub fn partition_isomorphism_classes(t: &TwinSet) -> IsoPartition {
    partition_hypergraphs(&t.twins)
}

/// Groups hypergraphs by [`canonical_label_hypergraph`].
pub fn partition_hypergraphs(hs: &[Hypergraph]) -> IsoPartition {
    let codes: Vec<CanonicalCode> = hs.par_iter().map(canonical_label_hypergraph).collect();
    let mut index: HashMap<&CanonicalCode, usize> = HashMap::new();
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for (i, code) in codes.iter().enumerate() {
        let slot = *index.entry(code).or_insert_with(|| {
            classes.push(Vec::new());
            classes.len() - 1
        });
        classes[slot].push(i);
    }
    let representatives = classes.iter().map(|c| c[0]).collect();
    IsoPartition {
        classes,
        representatives,
    }
}

/// Unordered index pairs `(i, j)`, `i < j`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatePairs {
    pub exact: Vec<(usize, usize)>,
    pub isomorphic: Vec<(usize, usize)>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct MateCounts {
    pub exact: u64,
    pub isomorphic: u64,
}

/// Key equal for two hypergraphs iff `A·Aᵀ` and `Aᵀ·A` are equal as labeled
/// matrices (hyperedges in emitted order).
fn exact_key(h: &Hypergraph) -> Vec<u8> {
    let mut key = Vec::new();
    push_varint(&mut key, h.n() as u64);
    push_varint(&mut key, h.edge_count() as u64);
    for &x in project(h, DiagonalMode::WithDiagonal).as_slice() {
        push_varint(&mut key, x);
    }
    for x in line_graph_matrix(h) {
        push_varint(&mut key, x);
    }
    key
}

fn isomorphic_key(h: &Hypergraph) -> (CanonicalCode, CanonicalCode) {
    (
        canonical_label_projection(&project(h, DiagonalMode::WithDiagonal)),
        canonical_label_line_graph(h),
    )
}

fn pairs_within<K: std::hash::Hash + Eq>(keys: &[K], hs: &[Hypergraph]) -> Vec<(usize, usize)> {
    let mut groups: HashMap<&K, Vec<usize>> = HashMap::new();
    for (i, k) in keys.iter().enumerate() {
        groups.entry(k).or_default().push(i);
    }
    let mut pairs: Vec<(usize, usize)> = groups
        .values()
        .flat_map(|g| {
            g.iter()
                .enumerate()
                .flat_map(move |(a, &i)| g[a + 1..].iter().map(move |&j| (i, j)))
        })
        .filter(|&(i, j)| hs[i] != hs[j])
        .collect();
    pairs.sort_unstable();
    pairs
}

/// Exact pairs: `A·Aᵀ = B·Bᵀ`, `Aᵀ·A = Bᵀ·B`, `A ≠ B` with hyperedge rows in
/// the emitted (sorted) order. Isomorphic pairs: the same with each equality
/// replaced by isomorphism, each matrix tested independently.
pub fn gram_mates(t: &TwinSet) -> MatePairs {
    let hs = &t.twins;
    let exact: Vec<Vec<u8>> = hs.par_iter().map(exact_key).collect();
    let iso: Vec<_> = hs.par_iter().map(isomorphic_key).collect();
    MatePairs {
        exact: pairs_within(&exact, hs),
        isomorphic: pairs_within(&iso, hs),
    }
}

/// Streaming mate-pair counter for twin sets too large to hold pairwise.
/// Assumes the hypergraphs fed in are pairwise distinct, as twins are.
#[derive(Default)]
pub struct MateCounter {
    exact: HashMap<Vec<u8>, u64>,
    isomorphic: HashMap<(CanonicalCode, CanonicalCode), u64>,
}

impl MateCounter {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, h: &Hypergraph) {
        *self.exact.entry(exact_key(h)).or_default() += 1;
        *self.isomorphic.entry(isomorphic_key(h)).or_default() += 1;
    }

    pub fn counts(&self) -> MateCounts {
        let pairs = |g: u64| g * g.saturating_sub(1) / 2;
        MateCounts {
            exact: self.exact.values().map(|&g| pairs(g)).sum(),
            isomorphic: self.isomorphic.values().map(|&g| pairs(g)).sum(),
        }
    }
}

pub fn gram_mate_counts(hs: &[Hypergraph]) -> MateCounts {
    let mut c = MateCounter::new();
    for h in hs {
        c.add(h);
    }
    c.counts()
}
