//! Random and exhaustive `k`-uniform hypergraph ensembles, experiment
//! drivers built on them, and rank statistics for their reports.

mod stats;
mod study;

pub use stats::{kendall_tau, rank_correlation_report, KendallTau, RankCorrelationRow, RankSeries};
pub use study::{
    distance_study, exhaustive_study, projection_stats, sampled_study, satisfies_refinement, unique_projections,
    DistanceRow, ExhaustiveConfig, ExhaustiveReport, ProjectionStats, SampledCell, SampledConfig, UniqueProjection,
};

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::bounds::binomial_saturating;
use crate::error::{Error, Result};
use crate::hypergraph::Hypergraph;

/// Rejections allowed per sample before giving up.
pub const DEFAULT_REJECTION_CAP: u64 = 1_000_000;

/// Largest candidate count `binom(binom(n, k), m)` that [`enumerate_gknm`]
/// accepts.
pub const ENUMERATION_LIMIT: u64 = 50_000_000;

/// Parameters of `G_k(n, m)`: `m` distinct `k`-subsets of `n` nodes, every
/// node covered.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnsembleParams {
    pub n: usize,
    pub m: usize,
    pub k: usize,
    pub seed: u64,
}

impl EnsembleParams {
    pub fn new(n: usize, m: usize, k: usize, seed: u64) -> Self {
        EnsembleParams { n, m, k, seed }
    }

    pub fn validate(&self) -> Result<()> {
        let EnsembleParams { n, m, k, .. } = *self;
        if k < 2 || k > n {
            return Err(Error::BadUniformSize(k));
        }
        let slots = binomial_saturating(n as u64, k as u64);
        if m == 0 || m as u64 > slots {
            return Err(Error::Infeasible(format!(
                "m = {m} must lie in 1..={slots} for n = {n}, k = {k}"
            )));
        }
        if m * k < n {
            return Err(Error::Infeasible(format!(
                "{m} hyperedges of size {k} cannot cover {n} nodes"
            )));
        }
        Ok(())
    }

    /// Fresh generator seeded from `seed`.
    pub fn rng(&self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed)
    }
}

/// The `rank`-th `k`-subset of `0..n` in lexicographic order.
pub fn unrank_combination(n: usize, k: usize, mut rank: u64) -> Vec<usize> {
    let mut out = Vec::with_capacity(k);
    let mut next = 0;
    for slot in 0..k {
        let left = k - slot - 1;
        loop {
            // subsets starting with `next` at this slot
            let block = binomial_saturating((n - next - 1) as u64, left as u64);
            if rank < block {
                break;
            }
            rank -= block;
            next += 1;
        }
        out.push(next);
        next += 1;
    }
    out
}

fn covers_all(n: usize, edges: &[Vec<usize>]) -> bool {
    let mut seen = vec![false; n];
    for e in edges {
        for &v in e {
            seen[v] = true;
        }
    }
    seen.into_iter().all(|s| s)
}

/// One draw from `G_k(n, m)`: `m` distinct subset ranks sampled without
/// replacement, unranked, and rejected while some node is uncovered.
pub fn sample_gknm<R: Rng + ?Sized>(p: &EnsembleParams, rng: &mut R) -> Result<Hypergraph> {
    sample_gknm_capped(p, rng, DEFAULT_REJECTION_CAP)
}

pub fn sample_gknm_capped<R: Rng + ?Sized>(p: &EnsembleParams, rng: &mut R, cap: u64) -> Result<Hypergraph> {
    p.validate()?;
    let slots = binomial_saturating(p.n as u64, p.k as u64);
    let slots = usize::try_from(slots).map_err(|_| Error::TooLarge {
        what: "hyperedge slots",
        count: slots as u128,
        limit: usize::MAX as u128,
    })?;
    for _ in 0..=cap {
        let edges: Vec<Vec<usize>> = index::sample(rng, slots, p.m)
            .into_iter()
            .map(|r| unrank_combination(p.n, p.k, r as u64))
            .collect();
        if covers_all(p.n, &edges) {
            return Hypergraph::new(p.n, edges);
        }
    }
    Err(Error::RejectionBudgetExceeded(cap))
}

/// All singleton-free `m`-edge `k`-uniform hypergraphs on `n` nodes in
/// lexicographic order of their (sorted) hyperedge lists.
pub fn enumerate_gknm(n: usize, k: usize, m: usize) -> Result<Gknm> {
    if k < 2 || k > n {
        return Err(Error::BadUniformSize(k));
    }
    if n > 64 {
        return Err(Error::TooManyNodes { n, max: 64 });
    }
    let slots = binomial_saturating(n as u64, k as u64);
    let count = binomial_saturating(slots, m as u64);
    if count > ENUMERATION_LIMIT {
        return Err(Error::TooLarge {
            what: "candidate hypergraphs",
            count: count as u128,
            limit: ENUMERATION_LIMIT as u128,
        });
    }
    let subsets: Vec<Vec<usize>> = (0..slots).map(|r| unrank_combination(n, k, r)).collect();
    let masks = subsets
        .iter()
        .map(|s| s.iter().fold(0u64, |acc, &v| acc | 1 << v))
        .collect();
    let full = if n == 64 { !0 } else { (1u64 << n) - 1 };
    let exhausted = m > subsets.len();
    Ok(Gknm {
        n,
        subsets,
        masks,
        full,
        idx: (0..m).collect(),
        exhausted,
    })
}

/// Iterator returned by [`enumerate_gknm`].
pub struct Gknm {
    n: usize,
    subsets: Vec<Vec<usize>>,
    masks: Vec<u64>,
    full: u64,
    idx: Vec<usize>,
    exhausted: bool,
}

impl Gknm {
    /// Moves `idx` to the next `m`-combination; false when past the last one.
    fn advance(&mut self) -> bool {
        let total = self.subsets.len();
        let m = self.idx.len();
        let mut i = m;
        while i > 0 {
            i -= 1;
            if self.idx[i] < total - (m - i) {
                self.idx[i] += 1;
                for j in (i + 1)..m {
                    self.idx[j] = self.idx[j - 1] + 1;
                }
                return true;
            }
        }
        false
    }
}

impl Iterator for Gknm {
    type Item = Hypergraph;

    fn next(&mut self) -> Option<Hypergraph> {
        while !self.exhausted {
            let cover = self.idx.iter().fold(0u64, |acc, &i| acc | self.masks[i]);
            let hit = (cover == self.full).then(|| {
                let edges = self.idx.iter().map(|&i| self.subsets[i].clone()).collect();
                Hypergraph::from_sorted_unchecked(self.n, edges)
            });
            self.exhausted = !self.advance();
            if hit.is_some() {
                return hit;
            }
        }
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unranking_is_lexicographic() {
        let all: Vec<Vec<usize>> = (0..20).map(|r| unrank_combination(6, 3, r)).collect();
        assert_eq!(all[0], vec![0, 1, 2]);
        assert_eq!(all[1], vec![0, 1, 3]);
        assert_eq!(all[19], vec![3, 4, 5]);
        assert!(all.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn enumeration_examples() {
        assert_eq!(enumerate_gknm(6, 3, 20).unwrap().count(), 1);
        let pairs: Vec<Hypergraph> = enumerate_gknm(6, 3, 2).unwrap().collect();
        assert_eq!(pairs.len(), 10);
        assert!(pairs.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(enumerate_gknm(4, 3, 1).unwrap().count(), 0);
        assert_eq!(enumerate_gknm(4, 3, 5).unwrap().count(), 0);
        assert!(matches!(enumerate_gknm(12, 3, 10), Err(Error::TooLarge { .. })));
    }

    #[test]
    fn enumeration_total_matches_inclusion_exclusion() {
        // singleton-free 2-uniform graphs with m edges on 4 nodes, summed over m:
        // edge sets of K4 covering every node = sum_j (-1)^j C(4,j) 2^C(4-j,2)
        let total: usize = (1..=6).map(|m| enumerate_gknm(4, 2, m).unwrap().count()).sum();
        assert_eq!(total as i64, 64 - 4 * 8 + 6 * 2 - 4 + 1);
    }

    #[test]
    fn sampler_examples() {
        let p = EnsembleParams::new(6, 20, 3, 1);
        let h = sample_gknm(&p, &mut p.rng()).unwrap();
        assert_eq!(h, enumerate_gknm(6, 3, 20).unwrap().next().unwrap());
        let p = EnsembleParams::new(6, 2, 3, 7);
        let mut rng = p.rng();
        for _ in 0..50 {
            let h = sample_gknm(&p, &mut rng).unwrap();
            assert!(covers_all(6, h.edges()));
        }
        assert!(matches!(
            EnsembleParams::new(6, 1, 3, 0).validate(),
            Err(Error::Infeasible(_))
        ));
    }

    #[test]
    fn sampler_is_deterministic() {
        let p = EnsembleParams::new(8, 5, 3, 42);
        let a: Vec<_> = {
            let mut r = p.rng();
            (0..20).map(|_| sample_gknm(&p, &mut r).unwrap()).collect()
        };
        let b: Vec<_> = {
            let mut r = p.rng();
            (0..20).map(|_| sample_gknm(&p, &mut r).unwrap()).collect()
        };
        assert_eq!(a, b);
    }

    #[test]
    fn rejection_cap() {
        // covering 6 nodes with 2 triples is rare but possible; a zero cap still
        // allows one attempt
        let p = EnsembleParams::new(6, 2, 3, 3);
        let mut rng = p.rng();
        let outcomes: Vec<_> = (0..200).map(|_| sample_gknm_capped(&p, &mut rng, 0)).collect();
        assert!(outcomes
            .iter()
            .any(|o| matches!(o, Err(Error::RejectionBudgetExceeded(0)))));
        assert!(outcomes.iter().any(|o| o.is_ok()));
    }
}
