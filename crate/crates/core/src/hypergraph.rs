//! Simple labeled hypergraphs and their node co-occurrence projections.
//!
//! A [`Hypergraph`] on `n` nodes is a set of hyperedges, each a set of at
//! least two node indices. Its projection is the symmetric matrix whose
//! `(u, v)` entry counts the hyperedges containing both `u` and `v`, with the
//! node hyperdegrees optionally kept on the diagonal.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A simple labeled hypergraph with dense node labels `0..n`.
///
/// Hyperedges are stored sorted, each as a strictly increasing node list, so
/// two values compare equal exactly when their incidence matrices do.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawHypergraph")]
pub struct Hypergraph {
    n: usize,
    edges: Vec<Vec<usize>>,
}

/// Unvalidated serialized form; deserialization goes through [`Hypergraph::new`].
#[derive(Deserialize)]
struct RawHypergraph {
    n: usize,
    edges: Vec<Vec<usize>>,
}

impl TryFrom<RawHypergraph> for Hypergraph {
    type Error = Error;

    fn try_from(raw: RawHypergraph) -> Result<Self> {
        Hypergraph::new(raw.n, raw.edges)
    }
}

impl Hypergraph {
    /// Builds a hypergraph, sorting nodes within each hyperedge and the
    /// hyperedges themselves.
    pub fn new(n: usize, edges: Vec<Vec<usize>>) -> Result<Self> {
        let mut out = Vec::with_capacity(edges.len());
        for mut e in edges {
            e.sort_unstable();
            if e.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::RepeatedNode(e));
            }
            if e.len() < 2 {
                return Err(Error::EdgeTooSmall(e));
            }
            if let Some(&node) = e.last().filter(|&&v| v >= n) {
                return Err(Error::NodeOutOfRange { node, n });
            }
            out.push(e);
        }
        out.sort_unstable();
        if let Some(w) = out.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::DuplicateEdge(w[0].clone()));
        }
        Ok(Hypergraph { n, edges: out })
    }

    /// The hypergraph with no hyperedges.
    pub fn empty(n: usize) -> Self {
        Hypergraph { n, edges: Vec::new() }
    }

    /// Builds from already-sorted, validated hyperedges. Callers inside the
    /// crate use this on search output where the invariants hold by construction.
    pub(crate) fn from_sorted_unchecked(n: usize, edges: Vec<Vec<usize>>) -> Self {
        debug_assert!(edges.windows(2).all(|w| w[0] < w[1]));
        Hypergraph { n, edges }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[Vec<usize>] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    /// Largest hyperedge size, 0 when empty.
    pub fn max_edge_size(&self) -> usize {
        self.edges.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Applies a node relabeling `u -> perm[u]`.
    pub fn relabel(&self, perm: &[usize]) -> Result<Self> {
        assert_eq!(perm.len(), self.n, "permutation length must equal n");
        let edges = self
            .edges
            .iter()
            .map(|e| e.iter().map(|&u| perm[u]).collect())
            .collect();
        Hypergraph::new(self.n, edges)
    }

    /// Row-major `m x n` 0/1 incidence matrix in the stored hyperedge order.
    pub fn incidence_matrix(&self) -> Vec<Vec<u8>> {
        self.edges
            .iter()
            .map(|e| {
                let mut row = vec![0u8; self.n];
                for &u in e {
                    row[u] = 1;
                }
                row
            })
            .collect()
    }

    /// Parses the line-oriented hypergraph format: one hyperedge per line as
    /// comma-separated node indices, `#` comments, blank lines ignored. A
    /// comment of the form `# n=<count>` fixes the node count, otherwise it is
    /// one more than the largest index seen.
    pub fn parse(text: &str) -> Result<Self> {
        let mut n_declared = None;
        let mut edges = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() {
                continue;
            }
            if let Some(comment) = line.strip_prefix('#') {
                if let Some(v) = comment.trim().strip_prefix("n=") {
                    n_declared = Some(v.trim().parse::<usize>().map_err(|e| Error::Parse {
                        line: i + 1,
                        msg: e.to_string(),
                    })?);
                }
                continue;
            }
            let edge = line
                .split(',')
                .map(|t| {
                    t.trim().parse::<usize>().map_err(|e| Error::Parse {
                        line: i + 1,
                        msg: format!("bad node index {t:?}: {e}"),
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            edges.push(edge);
        }
        let n = n_declared.unwrap_or_else(|| edges.iter().flat_map(|e| e.iter().copied()).max().map_or(0, |m| m + 1));
        Hypergraph::new(n, edges)
    }

    /// Like [`Hypergraph::parse`] but accepts arbitrary node names, assigning
    /// dense indices in order of first appearance. Returns the name table.
    pub fn parse_named(text: &str) -> Result<(Self, Vec<String>)> {
        let mut names: Vec<String> = Vec::new();
        let mut index: HashMap<String, usize> = HashMap::new();
        let mut edges = Vec::new();
        for line in text.lines().map(str::trim) {
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let edge = line
                .split(',')
                .map(|t| {
                    let t = t.trim().to_string();
                    *index.entry(t.clone()).or_insert_with(|| {
                        names.push(t);
                        names.len() - 1
                    })
                })
                .collect();
            edges.push(edge);
        }
        Ok((Hypergraph::new(names.len(), edges)?, names))
    }

    /// Writes the line-oriented format, including an `# n=` header.
    pub fn to_text(&self) -> String {
        let mut s = format!("# n={}\n", self.n);
        for e in &self.edges {
            let line: Vec<String> = e.iter().map(usize::to_string).collect();
            s.push_str(&line.join(","));
            s.push('\n');
        }
        s
    }
}

impl fmt::Display for Hypergraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, e) in self.edges.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{{")?;
            for (j, u) in e.iter().enumerate() {
                if j > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{u}")?;
            }
            write!(f, "}}")?;
        }
        write!(f, "}}")
    }
}

impl FromStr for Hypergraph {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Hypergraph::parse(s)
    }
}

/// Whether a projection keeps node hyperdegrees on its diagonal.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DiagonalMode {
    #[serde(rename = "with")]
    WithDiagonal,
    #[serde(rename = "without")]
    WithoutDiagonal,
}

/// Symmetric nonnegative integer node co-occurrence matrix.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawProjection")]
pub struct ProjectionMatrix {
    n: usize,
    w: Vec<u64>,
    diagonal_mode: DiagonalMode,
}

#[derive(Deserialize)]
struct RawProjection {
    n: usize,
    w: Vec<u64>,
    diagonal_mode: DiagonalMode,
}

impl TryFrom<RawProjection> for ProjectionMatrix {
    type Error = Error;

    fn try_from(raw: RawProjection) -> Result<Self> {
        ProjectionMatrix::new(raw.n, raw.w, raw.diagonal_mode)
    }
}

impl ProjectionMatrix {
    /// Validates and wraps a row-major `n x n` matrix.
    pub fn new(n: usize, w: Vec<u64>, diagonal_mode: DiagonalMode) -> Result<Self> {
        if w.len() != n * n {
            return Err(Error::BadShape { n, len: w.len() });
        }
        for u in 0..n {
            for v in (u + 1)..n {
                if w[u * n + v] != w[v * n + u] {
                    return Err(Error::NotSymmetric(u, v));
                }
            }
            if diagonal_mode == DiagonalMode::WithoutDiagonal && w[u * n + u] != 0 {
                return Err(Error::UnexpectedDiagonal(u));
            }
        }
        Ok(ProjectionMatrix { n, w, diagonal_mode })
    }

    /// Builds from a nested-row matrix.
    pub fn from_rows(rows: &[Vec<u64>], diagonal_mode: DiagonalMode) -> Result<Self> {
        let n = rows.len();
        let mut w = Vec::with_capacity(n * n);
        for row in rows {
            if row.len() != n {
                return Err(Error::BadShape { n, len: n * row.len() });
            }
            w.extend_from_slice(row);
        }
        ProjectionMatrix::new(n, w, diagonal_mode)
    }

    /// The all-zero projection on `n` nodes.
    pub fn zeros(n: usize, diagonal_mode: DiagonalMode) -> Self {
        ProjectionMatrix {
            n,
            w: vec![0; n * n],
            diagonal_mode,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn diagonal_mode(&self) -> DiagonalMode {
        self.diagonal_mode
    }

    pub fn has_diagonal(&self) -> bool {
        self.diagonal_mode == DiagonalMode::WithDiagonal
    }

    #[inline]
    pub fn get(&self, u: usize, v: usize) -> u64 {
        self.w[u * self.n + v]
    }

    pub fn as_slice(&self) -> &[u64] {
        &self.w
    }

    pub fn rows(&self) -> Vec<Vec<u64>> {
        self.w.chunks(self.n.max(1)).map(<[u64]>::to_vec).take(self.n).collect()
    }

    /// Diagonal entries (all zero when the matrix carries no diagonal).
    pub fn diagonal(&self) -> Vec<u64> {
        (0..self.n).map(|u| self.get(u, u)).collect()
    }

    /// Copy with the diagonal zeroed and the mode set to `WithoutDiagonal`.
    pub fn off_diagonal(&self) -> ProjectionMatrix {
        let mut w = self.w.clone();
        for u in 0..self.n {
            w[u * self.n + u] = 0;
        }
        ProjectionMatrix {
            n: self.n,
            w,
            diagonal_mode: DiagonalMode::WithoutDiagonal,
        }
    }

    /// Copy carrying `diag` on the diagonal.
    pub fn with_diagonal(&self, diag: &[u64]) -> ProjectionMatrix {
        assert_eq!(diag.len(), self.n);
        let mut w = self.w.clone();
        for (u, &d) in diag.iter().enumerate() {
            w[u * self.n + u] = d;
        }
        ProjectionMatrix {
            n: self.n,
            w,
            diagonal_mode: DiagonalMode::WithDiagonal,
        }
    }

    /// Off-diagonal row sums.
    pub fn off_diagonal_row_sums(&self) -> Vec<u64> {
        (0..self.n)
            .map(|u| (0..self.n).filter(|&v| v != u).map(|v| self.get(u, v)).sum())
            .collect()
    }

    /// Whether the off-diagonal parts are equal.
    pub fn off_diagonal_eq(&self, other: &ProjectionMatrix) -> bool {
        self.n == other.n && (0..self.n).all(|u| (0..self.n).all(|v| u == v || self.get(u, v) == other.get(u, v)))
    }

    /// Simultaneous row/column permutation: entry `(u, v)` moves to `(perm[u], perm[v])`.
    pub fn permute(&self, perm: &[usize]) -> ProjectionMatrix {
        let n = self.n;
        let mut w = vec![0; n * n];
        for u in 0..n {
            for v in 0..n {
                w[perm[u] * n + perm[v]] = self.get(u, v);
            }
        }
        ProjectionMatrix {
            n,
            w,
            diagonal_mode: self.diagonal_mode,
        }
    }

    /// Parses the CSV format: full symmetric matrix, one row per line, with an
    /// optional `# diagonal=with|without` header. Without the header the mode
    /// is `with` exactly when some diagonal entry is non-zero.
    pub fn parse_csv(text: &str) -> Result<Self> {
        let mut mode = None;
        let mut rows = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() {
                continue;
            }
            if let Some(comment) = line.strip_prefix('#') {
                if let Some(v) = comment.trim().strip_prefix("diagonal=") {
                    mode = Some(match v.trim() {
                        "with" => DiagonalMode::WithDiagonal,
                        "without" => DiagonalMode::WithoutDiagonal,
                        other => {
                            return Err(Error::Parse {
                                line: i + 1,
                                msg: format!("unknown diagonal mode {other:?}"),
                            })
                        }
                    });
                }
                continue;
            }
            let row = line
                .split(',')
                .map(|t| {
                    t.trim().parse::<u64>().map_err(|e| Error::Parse {
                        line: i + 1,
                        msg: format!("bad entry {t:?}: {e}"),
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            rows.push(row);
        }
        let n = rows.len();
        let mode = mode.unwrap_or_else(|| {
            if (0..n).any(|u| rows[u].get(u).copied().unwrap_or(0) != 0) {
                DiagonalMode::WithDiagonal
            } else {
                DiagonalMode::WithoutDiagonal
            }
        });
        ProjectionMatrix::from_rows(&rows, mode)
    }

    pub fn to_csv(&self) -> String {
        let mode = match self.diagonal_mode {
            DiagonalMode::WithDiagonal => "with",
            DiagonalMode::WithoutDiagonal => "without",
        };
        let mut s = format!("# diagonal={mode}\n");
        for u in 0..self.n {
            let row: Vec<String> = (0..self.n).map(|v| self.get(u, v).to_string()).collect();
            s.push_str(&row.join(","));
            s.push('\n');
        }
        s
    }
}

/// Number of hyperedges of each size.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct SizeDistribution {
    pub counts: BTreeMap<usize, u64>,
}

impl SizeDistribution {
    pub fn new() -> Self {
        Self::default()
    }

    /// Single-size distribution `{k: m}`.
    pub fn uniform(k: usize, m: u64) -> Self {
        let mut counts = BTreeMap::new();
        if m > 0 {
            counts.insert(k, m);
        }
        SizeDistribution { counts }
    }

    pub fn get(&self, k: usize) -> u64 {
        self.counts.get(&k).copied().unwrap_or(0)
    }

    pub fn total(&self) -> u64 {
        self.counts.values().sum()
    }

    /// Largest size with a positive count.
    pub fn max_size(&self) -> Option<usize> {
        self.counts.iter().rev().find(|(_, &c)| c > 0).map(|(&k, _)| k)
    }

    /// Parses `"2:3,3:1"`.
    pub fn parse(s: &str) -> Result<Self> {
        let mut counts = BTreeMap::new();
        for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (k, c) = part.split_once(':').ok_or_else(|| Error::Parse {
                line: 1,
                msg: format!("expected size:count, got {part:?}"),
            })?;
            let bad = |e: std::num::ParseIntError| Error::Parse {
                line: 1,
                msg: e.to_string(),
            };
            let k: usize = k.trim().parse().map_err(bad)?;
            let c: u64 = c.trim().parse().map_err(bad)?;
            if k < 2 {
                return Err(Error::BadUniformSize(k));
            }
            if c > 0 {
                *counts.entry(k).or_insert(0) += c;
            }
        }
        Ok(SizeDistribution { counts })
    }
}

impl fmt::Display for SizeDistribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.counts.iter().map(|(k, c)| format!("{k}:{c}")).collect();
        write!(f, "{}", parts.join(","))
    }
}

/// Node co-occurrence projection `AᵀA` (with diagonal) or `AᵀA − D` (without).
pub fn project(h: &Hypergraph, diagonal_mode: DiagonalMode) -> ProjectionMatrix {
    let n = h.n;
    let mut w = vec![0u64; n * n];
    for e in &h.edges {
        for (i, &u) in e.iter().enumerate() {
            if diagonal_mode == DiagonalMode::WithDiagonal {
                w[u * n + u] += 1;
            }
            for &v in &e[i + 1..] {
                w[u * n + v] += 1;
                w[v * n + u] += 1;
            }
        }
    }
    ProjectionMatrix { n, w, diagonal_mode }
}

/// Number of hyperedges containing each node.
pub fn hyperdegrees(h: &Hypergraph) -> Vec<u64> {
    let mut d = vec![0u64; h.n];
    for &u in h.edges.iter().flatten() {
        d[u] += 1;
    }
    d
}

pub fn size_distribution(h: &Hypergraph) -> SizeDistribution {
    let mut counts = BTreeMap::new();
    for e in &h.edges {
        *counts.entry(e.len()).or_insert(0) += 1;
    }
    SizeDistribution { counts }
}

/// Hyperdegrees forced on any `k`-uniform realization of the off-diagonal
/// part of `w`: each node's row sum divided by `k − 1`.
pub fn implied_diagonal(w: &ProjectionMatrix, k: usize) -> Result<Vec<u64>> {
    if k < 2 {
        return Err(Error::BadUniformSize(k));
    }
    let div = (k - 1) as u64;
    w.off_diagonal_row_sums()
        .into_iter()
        .enumerate()
        .map(|(u, s)| {
            if s % div == 0 {
                Ok(s / div)
            } else {
                Err(Error::NonDivisibleRowSum(u))
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hg(n: usize, edges: &[&[usize]]) -> Hypergraph {
        Hypergraph::new(n, edges.iter().map(|e| e.to_vec()).collect()).unwrap()
    }

    #[test]
    fn deserialization_validates() {
        let h = hg(4, &[&[0, 3], &[1, 2, 3]]);
        let json = serde_json::to_string(&h).unwrap();
        assert_eq!(serde_json::from_str::<Hypergraph>(&json).unwrap(), h);
        assert!(serde_json::from_str::<Hypergraph>(r#"{"n":3,"edges":[[0,5]]}"#).is_err());
        assert!(serde_json::from_str::<Hypergraph>(r#"{"n":3,"edges":[[1,0],[0,1]]}"#).is_err());

        let w = project(&h, DiagonalMode::WithDiagonal);
        let json = serde_json::to_string(&w).unwrap();
        assert_eq!(serde_json::from_str::<ProjectionMatrix>(&json).unwrap(), w);
        let asym = r#"{"n":2,"w":[0,1,2,0],"diagonal_mode":"without"}"#;
        assert!(serde_json::from_str::<ProjectionMatrix>(asym).is_err());
    }

    #[test]
    fn single_triple_versus_triangle() {
        let triple = hg(3, &[&[0, 1, 2]]);
        let triangle = hg(3, &[&[0, 1], &[1, 2], &[0, 2]]);
        let a = project(&triple, DiagonalMode::WithDiagonal);
        let b = project(&triangle, DiagonalMode::WithDiagonal);
        for (u, v) in [(0, 1), (0, 2), (1, 2)] {
            assert_eq!(a.get(u, v), 1);
            assert_eq!(b.get(u, v), 1);
        }
        assert_eq!(a.diagonal(), vec![1, 1, 1]);
        assert_eq!(b.diagonal(), vec![2, 2, 2]);
        assert!(a.off_diagonal_eq(&b));
    }

    #[test]
    fn same_edge_count_different_hyperdegrees() {
        // A, B, C, D = 0, 1, 2, 3: {AD, CD, ABC} vs {AB, BC, ACD}
        let h1 = hg(4, &[&[0, 3], &[2, 3], &[0, 1, 2]]);
        let h2 = hg(4, &[&[0, 1], &[1, 2], &[0, 2, 3]]);
        let p1 = project(&h1, DiagonalMode::WithDiagonal);
        let p2 = project(&h2, DiagonalMode::WithDiagonal);
        assert!(p1.off_diagonal_eq(&p2));
        let (d1, d2) = (p1.diagonal(), p2.diagonal());
        let differing: Vec<usize> = (0..4).filter(|&u| d1[u] != d2[u]).collect();
        assert_eq!(differing, vec![1, 3]);
    }

    #[test]
    fn hyperdegree_examples() {
        assert_eq!(hyperdegrees(&hg(3, &[&[0, 1, 2]])), vec![1, 1, 1]);
        assert_eq!(hyperdegrees(&hg(3, &[&[0, 1], &[1, 2], &[0, 2]])), vec![2, 2, 2]);
        // node 0: {0,3},{0,1,2}; node 1: {0,1,2}; node 2: {2,3},{0,1,2}; node 3: {0,3},{2,3}
        assert_eq!(hyperdegrees(&hg(4, &[&[0, 3], &[2, 3], &[0, 1, 2]])), vec![2, 1, 2, 2]);
    }

    #[test]
    fn size_distribution_examples() {
        let d = size_distribution(&hg(4, &[&[0, 3], &[2, 3], &[0, 1, 2]]));
        assert_eq!(d.get(2), 2);
        assert_eq!(d.get(3), 1);
        assert_eq!(d.total(), 3);
        assert_eq!(
            size_distribution(&hg(3, &[&[0, 1], &[1, 2], &[0, 2]])).to_string(),
            "2:3"
        );
        assert_eq!(size_distribution(&hg(3, &[&[0, 1, 2]])).to_string(), "3:1");
    }

    #[test]
    fn implied_diagonal_examples() {
        let tri = project(&hg(3, &[&[0, 1], &[1, 2], &[0, 2]]), DiagonalMode::WithoutDiagonal);
        assert_eq!(implied_diagonal(&tri, 3).unwrap(), vec![1, 1, 1]);
        let zero = ProjectionMatrix::zeros(4, DiagonalMode::WithoutDiagonal);
        assert_eq!(implied_diagonal(&zero, 5).unwrap(), vec![0; 4]);
        let h = hg(4, &[&[0, 1, 2], &[0, 1, 3]]);
        let p = project(&h, DiagonalMode::WithoutDiagonal);
        assert_eq!(p.get(0, 1), 2);
        assert_eq!(implied_diagonal(&p, 3).unwrap(), vec![2, 2, 1, 1]);
        assert_eq!(implied_diagonal(&p, 3).unwrap(), hyperdegrees(&h));
    }

    #[test]
    fn implied_diagonal_rejects_non_divisible_rows() {
        let p = project(&hg(3, &[&[0, 1]]), DiagonalMode::WithoutDiagonal);
        assert_eq!(implied_diagonal(&p, 3), Err(Error::NonDivisibleRowSum(0)));
        assert_eq!(implied_diagonal(&p, 1), Err(Error::BadUniformSize(1)));
    }

    #[test]
    fn constructor_validation() {
        assert!(matches!(Hypergraph::new(3, vec![vec![0]]), Err(Error::EdgeTooSmall(_))));
        assert!(matches!(
            Hypergraph::new(3, vec![vec![0, 0, 1]]),
            Err(Error::RepeatedNode(_))
        ));
        assert!(matches!(
            Hypergraph::new(3, vec![vec![0, 1], vec![1, 0]]),
            Err(Error::DuplicateEdge(_))
        ));
        assert!(matches!(
            Hypergraph::new(3, vec![vec![0, 3]]),
            Err(Error::NodeOutOfRange { node: 3, n: 3 })
        ));
        let h = Hypergraph::new(4, vec![vec![3, 1], vec![2, 0, 1]]).unwrap();
        assert_eq!(h.edges(), &[vec![0, 1, 2], vec![1, 3]]);
    }

    #[test]
    fn projection_validation() {
        assert!(matches!(
            ProjectionMatrix::new(2, vec![0, 1, 2, 0], DiagonalMode::WithoutDiagonal),
            Err(Error::NotSymmetric(0, 1))
        ));
        assert!(matches!(
            ProjectionMatrix::new(2, vec![1, 1, 1, 0], DiagonalMode::WithoutDiagonal),
            Err(Error::UnexpectedDiagonal(0))
        ));
        assert!(ProjectionMatrix::new(2, vec![1, 1, 1, 0], DiagonalMode::WithDiagonal).is_ok());
    }

    #[test]
    fn text_formats() {
        let h = Hypergraph::parse("# a comment\n0,1,2\n\n2, 3\n").unwrap();
        assert_eq!(h.n(), 4);
        assert_eq!(Hypergraph::parse(&h.to_text()).unwrap(), h);
        let padded = Hypergraph::parse("# n=6\n0,1\n").unwrap();
        assert_eq!(padded.n(), 6);
        assert!(Hypergraph::parse("0,x\n").is_err());

        let (named, names) = Hypergraph::parse_named("a,d\nc,d\na,b,c\n").unwrap();
        assert_eq!(names, vec!["a", "d", "c", "b"]);
        assert_eq!(named.edge_count(), 3);

        let p = project(&h, DiagonalMode::WithDiagonal);
        assert_eq!(ProjectionMatrix::parse_csv(&p.to_csv()).unwrap(), p);
        let q = ProjectionMatrix::parse_csv("0,1\n1,0\n").unwrap();
        assert_eq!(q.diagonal_mode(), DiagonalMode::WithoutDiagonal);
    }

    #[test]
    fn size_distribution_parse() {
        let d = SizeDistribution::parse("2:3, 3:1").unwrap();
        assert_eq!(d.get(2), 3);
        assert_eq!(d.max_size(), Some(3));
        assert!(SizeDistribution::parse("1:2").is_err());
        assert!(SizeDistribution::parse("2").is_err());
    }
}
