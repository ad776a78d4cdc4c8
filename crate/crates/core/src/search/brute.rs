//! Reference enumeration used to cross-check the tree search.
//!
//! Walks the include/exclude lattice over all candidate cliques in a fixed
//! order and keeps the subsets whose projection equals the input. The only
//! pruning is on subsets that provably cannot match: a pair whose residual went
//! negative or exceeds the number of undecided cliques covering it, or an edge
//! count that can no longer be hit exactly. Final acceptance re-projects the
//! candidate hypergraph from scratch.

use std::time::Instant;

use crate::bounds::BigCount;
use crate::error::{Error, Result};
use crate::factorgraph::{enumerate_cliques, TwinConstraints};
use crate::hypergraph::{hyperdegrees, project, size_distribution, DiagonalMode, Hypergraph, ProjectionMatrix};

use super::{SearchStats, TwinSet};

/// Largest candidate-clique count accepted by [`brute_force_twins`].
pub const DEFAULT_BRUTE_FORCE_CAP: usize = 25;

pub fn brute_force_twins(w: &ProjectionMatrix, c: &TwinConstraints) -> Result<TwinSet> {
    brute_force_twins_capped(w, c, DEFAULT_BRUTE_FORCE_CAP)
}

pub fn brute_force_twins_capped(w: &ProjectionMatrix, c: &TwinConstraints, cap: usize) -> Result<TwinSet> {
    c.validate(w)?;
    let start = Instant::now();
    let n = w.n();
    let (_, by_size) = enumerate_cliques(w, c.k_max)?;
    // largest cliques first: every pair then closes on its own 2-clique
    let candidates: Vec<Vec<usize>> = by_size
        .into_iter()
        .rev()
        .filter(|(size, _)| c.allows_size(*size))
        .flat_map(|(_, list)| list)
        .collect();
    if candidates.len() > cap {
        return Err(Error::TooLarge {
            what: "candidate cliques",
            count: candidates.len() as u128,
            limit: cap as u128,
        });
    }

    let mut residual: Vec<i64> = w.as_slice().iter().map(|&x| x as i64).collect();
    for u in 0..n {
        residual[u * n + u] = 0;
    }
    // undecided candidates still able to cover each pair
    let mut cover = vec![0i64; n * n];
    for cl in &candidates {
        for (a, &u) in cl.iter().enumerate() {
            for &v in &cl[a + 1..] {
                cover[u * n + v] += 1;
            }
        }
    }
    if (0..n).any(|u| ((u + 1)..n).any(|v| residual[u * n + v] > cover[u * n + v])) {
        return Ok(finish(w, c, Vec::new(), 0, start));
    }

    let mut state = Lattice {
        n,
        w,
        c,
        candidates: &candidates,
        residual,
        cover,
        chosen: Vec::new(),
        found: Vec::new(),
        visited: 0,
    };
    state.walk(0);
    let Lattice { found, visited, .. } = state;
    let mut twins = found;
    twins.sort_unstable();
    Ok(finish(w, c, twins, visited, start))
}

fn finish(w: &ProjectionMatrix, c: &TwinConstraints, twins: Vec<Hypergraph>, visited: u64, start: Instant) -> TwinSet {
    TwinSet {
        stats: SearchStats {
            nodes_expanded: visited,
            twins_found: twins.len() as u64,
            wall_time: start.elapsed(),
            worst_case_bound: BigCount::zero(),
            partial: false,
        },
        twins,
        source: w.clone(),
        constraints: c.clone(),
    }
}

struct Lattice<'a> {
    n: usize,
    w: &'a ProjectionMatrix,
    c: &'a TwinConstraints,
    candidates: &'a [Vec<usize>],
    residual: Vec<i64>,
    cover: Vec<i64>,
    chosen: Vec<usize>,
    found: Vec<Hypergraph>,
    visited: u64,
}

impl Lattice<'_> {
    fn pairs(&self, i: usize) -> impl Iterator<Item = (usize, usize)> + '_ {
        let cl = &self.candidates[i];
        cl.iter()
            .enumerate()
            .flat_map(move |(a, &u)| cl[a + 1..].iter().map(move |&v| (u, v)))
    }

    fn feasible(&self, pairs: &[(usize, usize)]) -> bool {
        pairs.iter().all(|&(u, v)| {
            let r = self.residual[u * self.n + v];
            r >= 0 && r <= self.cover[u * self.n + v]
        })
    }

    fn walk(&mut self, i: usize) {
        self.visited += 1;
        if i == self.candidates.len() {
            self.check_leaf();
            return;
        }
        let n = self.n;
        let pairs: Vec<_> = self.pairs(i).collect();
        for &(u, v) in &pairs {
            self.cover[u * n + v] -= 1;
        }
        if self.c.edge_count.is_none_or(|m| self.chosen.len() < m) {
            for &(u, v) in &pairs {
                self.residual[u * n + v] -= 1;
            }
            if self.feasible(&pairs) {
                self.chosen.push(i);
                self.walk(i + 1);
                self.chosen.pop();
            }
            for &(u, v) in &pairs {
                self.residual[u * n + v] += 1;
            }
        }
        let left = self.candidates.len() - i - 1;
        if self.feasible(&pairs) && self.c.edge_count.is_none_or(|m| self.chosen.len() + left >= m) {
            self.walk(i + 1);
        }
        for &(u, v) in &pairs {
            self.cover[u * n + v] += 1;
        }
    }

    fn check_leaf(&mut self) {
        let edges = self.chosen.iter().map(|&i| self.candidates[i].clone()).collect();
        let h = Hypergraph::new(self.n, edges).expect("candidate cliques form a simple hypergraph");
        let p = project(&h, DiagonalMode::WithoutDiagonal);
        if !p.off_diagonal_eq(self.w) {
            return;
        }
        if let Some(m) = self.c.edge_count {
            if h.edge_count() != m {
                return;
            }
        }
        if let Some(k) = self.c.uniform_k {
            if h.edges().iter().any(|e| e.len() != k) {
                return;
            }
        }
        if let Some(d) = &self.c.size_dist {
            if size_distribution(&h) != *d {
                return;
            }
        }
        if self.c.match_diagonal && hyperdegrees(&h) != self.w.diagonal() {
            return;
        }
        self.found.push(h);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypergraph::SizeDistribution;

    fn triangle() -> ProjectionMatrix {
        ProjectionMatrix::new(3, vec![0, 1, 1, 1, 0, 1, 1, 1, 0], DiagonalMode::WithoutDiagonal).unwrap()
    }

    #[test]
    fn triangle_non_uniform() {
        let t = brute_force_twins(&triangle(), &TwinConstraints::unrefined(3)).unwrap();
        assert_eq!(t.len(), 2);
    }

    #[test]
    fn zero_matrix() {
        let w = ProjectionMatrix::zeros(5, DiagonalMode::WithoutDiagonal);
        let t = brute_force_twins(&w, &TwinConstraints::unrefined(5)).unwrap();
        assert_eq!(t.twins, vec![Hypergraph::empty(5)]);
    }

    #[test]
    fn cap_is_enforced() {
        let mut w = vec![1u64; 36];
        for u in 0..6 {
            w[u * 6 + u] = 0;
        }
        let w = ProjectionMatrix::new(6, w, DiagonalMode::WithoutDiagonal).unwrap();
        assert!(matches!(
            brute_force_twins(&w, &TwinConstraints::unrefined(6)),
            Err(Error::TooLarge { count: 57, .. })
        ));
        // only 3-cliques: 20 candidates
        assert!(brute_force_twins(&w, &TwinConstraints::uniform(3)).is_ok());
    }

    #[test]
    fn size_distribution_filter() {
        let c = TwinConstraints::unrefined(3).with_size_dist(SizeDistribution::uniform(3, 1));
        let t = brute_force_twins(&triangle(), &c).unwrap();
        assert_eq!(t.len(), 1);
    }
}
