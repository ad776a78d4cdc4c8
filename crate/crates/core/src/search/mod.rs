//! Twin enumeration as a constraint-satisfaction tree search.
//!
//! A search-tree node is a [`PartialHypergraph`]: a set of clique-nodes chosen
//! as hyperedges together with the residual `R = W − W'`. Expanding a node
//! picks one unsatisfied edge-node `e` and branches over every way of choosing
//! `R_e` of the clique-nodes still available around `e`. Once `e` has been
//! expanded its residual is zero in every child, so no clique containing `e`
//! can be added further down: sibling subtrees differ in the set of cliques
//! containing `e`, and every partial hypergraph occurs at most once.

mod brute;
mod parallel;

use std::collections::VecDeque;
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

pub use brute::{brute_force_twins, brute_force_twins_capped, DEFAULT_BRUTE_FORCE_CAP};
pub use parallel::{twin_search_parallel, twin_search_parallel_with};

use crate::bounds::{binomial_saturating, worst_case_tree_size, BigCount};
use crate::error::{Error, Result};
use crate::factorgraph::{build_factor_graph, FactorGraph, TwinConstraints};
use crate::hypergraph::{Hypergraph, ProjectionMatrix};

/// How the next edge-node to satisfy is chosen.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Heuristic {
    /// Lowest-index edge-node with positive residual.
    FirstUnsatisfied,
    /// Edge-node minimizing `binom(|η'_e|, R_e)`, ties to the lowest index.
    #[default]
    MinBranching,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Traversal {
    #[default]
    DepthFirst,
    BreadthFirst,
}

#[derive(Clone, Debug, Default)]
pub struct SearchOptions {
    pub heuristic: Heuristic,
    pub traversal: Traversal,
    /// Stop after processing this many search-tree nodes.
    pub node_budget: Option<u64>,
    /// Stop after this much wall-clock time.
    pub time_budget: Option<Duration>,
}

impl SearchOptions {
    pub fn with_heuristic(heuristic: Heuristic) -> Self {
        SearchOptions {
            heuristic,
            ..Default::default()
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchStats {
    pub nodes_expanded: u64,
    pub twins_found: u64,
    #[serde(with = "duration_secs")]
    pub wall_time: Duration,
    pub worst_case_bound: BigCount,
    /// Set when a budget stopped the search before it finished.
    pub partial: bool,
}

mod duration_secs {
    use std::time::Duration;

    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(d: &Duration, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_f64(d.as_secs_f64())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Duration, D::Error> {
        Ok(Duration::from_secs_f64(f64::deserialize(d)?))
    }
}

/// All twins of a projection under a set of constraints, sorted.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TwinSet {
    pub twins: Vec<Hypergraph>,
    pub source: ProjectionMatrix,
    pub constraints: TwinConstraints,
    pub stats: SearchStats,
}

impl TwinSet {
    pub fn len(&self) -> usize {
        self.twins.len()
    }

    pub fn is_empty(&self) -> bool {
        self.twins.is_empty()
    }
}

/// A node of the search tree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartialHypergraph {
    chosen: Vec<u32>,
    chosen_set: Vec<u64>,
    residual: Vec<u32>,
    zero_edges: Vec<u64>,
    remaining: u64,
    degrees: Vec<u32>,
    sizes: Vec<u32>,
}

impl PartialHypergraph {
    /// Clique-node ids chosen so far, in the order they were added.
    pub fn chosen(&self) -> &[u32] {
        &self.chosen
    }

    /// Residual weight per edge-node.
    pub fn residual(&self) -> &[u32] {
        &self.residual
    }

    /// Sum of the residual.
    pub fn remaining(&self) -> u64 {
        self.remaining
    }

    /// Running hyperdegree of each node.
    pub fn degrees(&self) -> &[u32] {
        &self.degrees
    }

    /// Running count of hyperedges per size (indexed by size).
    pub fn sizes(&self) -> &[u32] {
        &self.sizes
    }

    pub fn edge_count(&self) -> usize {
        self.chosen.len()
    }

    fn is_chosen(&self, c: usize) -> bool {
        self.chosen_set[c / 64] >> (c % 64) & 1 == 1
    }
}

/// A projection and constraints compiled for searching.
#[derive(Clone, Debug)]
pub struct SearchProblem {
    fg: FactorGraph,
    constraints: TwinConstraints,
    words: usize,
    clique_edge_bits: Vec<u64>,
    clique_sizes: Vec<u32>,
    target_diag: Option<Vec<u32>>,
    target_sizes: Option<Vec<u32>>,
    target_m: Option<u32>,
}

impl SearchProblem {
    /// Builds the factor graph and resolves constraint targets. Fails with
    /// [`Error::EmptyCandidates`] when some edge-node cannot be covered.
    pub fn new(w: &ProjectionMatrix, constraints: &TwinConstraints) -> Result<Self> {
        let fg = build_factor_graph(w, constraints)?;
        if fg.weights().iter().any(|&x| x > u32::MAX as u64) {
            return Err(Error::TooLarge {
                what: "projection entry",
                count: *fg.weights().iter().max().unwrap() as u128,
                limit: u32::MAX as u128,
            });
        }
        let edges = fg.edge_nodes().len();
        let words = edges.div_ceil(64).max(1);
        let mut clique_edge_bits = vec![0u64; fg.clique_nodes().len() * words];
        for c in 0..fg.clique_nodes().len() {
            for &e in fg.clique_edges(c) {
                clique_edge_bits[c * words + e as usize / 64] |= 1 << (e % 64);
            }
        }
        let clique_sizes = fg.clique_nodes().iter().map(|c| c.len() as u32).collect();
        let target_diag = constraints
            .match_diagonal
            .then(|| w.diagonal().iter().map(|&d| d.min(u32::MAX as u64) as u32).collect());
        let target_sizes = constraints.size_dist.as_ref().map(|d| {
            (0..=constraints.k_max)
                .map(|k| d.get(k).min(u32::MAX as u64) as u32)
                .collect()
        });
        Ok(SearchProblem {
            fg,
            constraints: constraints.clone(),
            words,
            clique_edge_bits,
            clique_sizes,
            target_diag,
            target_sizes,
            target_m: constraints.edge_count.map(|m| m.min(u32::MAX as usize) as u32),
        })
    }

    pub fn factor_graph(&self) -> &FactorGraph {
        &self.fg
    }

    pub fn constraints(&self) -> &TwinConstraints {
        &self.constraints
    }

    /// Root of the search tree: nothing chosen, residual equal to `W`.
    pub fn root(&self) -> PartialHypergraph {
        let residual: Vec<u32> = self.fg.weights().iter().map(|&x| x as u32).collect();
        PartialHypergraph {
            chosen: Vec::new(),
            chosen_set: vec![0; self.fg.clique_nodes().len().div_ceil(64).max(1)],
            remaining: residual.iter().map(|&r| r as u64).sum(),
            residual,
            zero_edges: vec![0; self.words],
            degrees: vec![0; self.fg.n()],
            sizes: vec![0; self.constraints.k_max + 1],
        }
    }

    /// Whether clique `c` can still be added: not chosen, every pair has
    /// residual left, and no size, count or hyperdegree target would overshoot.
    #[inline]
    pub fn is_available(&self, p: &PartialHypergraph, c: usize) -> bool {
        if p.is_chosen(c) {
            return false;
        }
        let bits = &self.clique_edge_bits[c * self.words..(c + 1) * self.words];
        if bits.iter().zip(&p.zero_edges).any(|(a, z)| a & z != 0) {
            return false;
        }
        self.within_caps(p, c)
    }

    #[inline]
    fn within_caps(&self, p: &PartialHypergraph, c: usize) -> bool {
        if let Some(m) = self.target_m {
            if p.chosen.len() as u32 >= m {
                return false;
            }
        }
        if let Some(t) = &self.target_sizes {
            let s = self.clique_sizes[c] as usize;
            if p.sizes[s] >= t[s] {
                return false;
            }
        }
        if let Some(t) = &self.target_diag {
            let mut rest = self.fg.clique_mask(c);
            while rest != 0 {
                let u = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                if p.degrees[u] >= t[u] {
                    return false;
                }
            }
        }
        true
    }

    /// Adds clique `c` if that keeps every residual nonnegative and every
    /// target unexceeded; returns whether it was added.
    #[inline]
    fn apply(&self, p: &mut PartialHypergraph, c: usize) -> bool {
        if !self.is_available(p, c) {
            return false;
        }
        for &e in self.fg.clique_edges(c) {
            let e = e as usize;
            p.residual[e] -= 1;
            if p.residual[e] == 0 {
                p.zero_edges[e / 64] |= 1 << (e % 64);
            }
        }
        p.remaining -= self.fg.clique_edges(c).len() as u64;
        let mut rest = self.fg.clique_mask(c);
        while rest != 0 {
            p.degrees[rest.trailing_zeros() as usize] += 1;
            rest &= rest - 1;
        }
        p.sizes[self.clique_sizes[c] as usize] += 1;
        p.chosen.push(c as u32);
        p.chosen_set[c / 64] |= 1 << (c % 64);
        true
    }

    #[inline]
    fn undo(&self, p: &mut PartialHypergraph, c: usize) {
        debug_assert_eq!(p.chosen.last(), Some(&(c as u32)));
        p.chosen.pop();
        p.chosen_set[c / 64] &= !(1 << (c % 64));
        p.sizes[self.clique_sizes[c] as usize] -= 1;
        let mut rest = self.fg.clique_mask(c);
        while rest != 0 {
            p.degrees[rest.trailing_zeros() as usize] -= 1;
            rest &= rest - 1;
        }
        p.remaining += self.fg.clique_edges(c).len() as u64;
        for &e in self.fg.clique_edges(c) {
            let e = e as usize;
            p.residual[e] += 1;
            p.zero_edges[e / 64] &= !(1 << (e % 64));
        }
    }

    /// Final acceptance of a fully satisfied partial hypergraph: exact edge
    /// count, size distribution and hyperdegrees where requested.
    pub fn accepts(&self, p: &PartialHypergraph) -> bool {
        if p.remaining != 0 {
            return false;
        }
        if let Some(m) = self.target_m {
            if p.chosen.len() as u32 != m {
                return false;
            }
        }
        if let Some(t) = &self.target_sizes {
            if p.sizes != *t {
                return false;
            }
        }
        if let Some(t) = &self.target_diag {
            if p.degrees != *t {
                return false;
            }
        }
        true
    }

    /// The chosen clique-nodes as a hypergraph.
    pub fn to_hypergraph(&self, p: &PartialHypergraph) -> Hypergraph {
        let mut edges: Vec<Vec<usize>> = p
            .chosen
            .iter()
            .map(|&c| self.fg.clique_nodes()[c as usize].clone())
            .collect();
        edges.sort_unstable();
        Hypergraph::from_sorted_unchecked(self.fg.n(), edges)
    }

    /// Available clique-nodes around edge-node `e` (the residual `η'_e`).
    pub fn residual_eta(&self, p: &PartialHypergraph, e: usize) -> Vec<u32> {
        self.fg
            .eta(e)
            .iter()
            .copied()
            .filter(|&c| self.is_available(p, c as usize))
            .collect()
    }

    /// Picks the edge-node to satisfy next and returns it with its residual
    /// candidates; `None` when nothing is left to satisfy.
    fn select(&self, p: &PartialHypergraph, heuristic: Heuristic, avail: &mut Vec<bool>) -> Option<(usize, Vec<u32>)> {
        let unsatisfied = (0..self.fg.edge_nodes().len()).filter(|&e| p.residual[e] > 0);
        match heuristic {
            Heuristic::FirstUnsatisfied => {
                let e = unsatisfied.into_iter().next()?;
                Some((e, self.residual_eta(p, e)))
            }
            Heuristic::MinBranching => {
                avail.clear();
                avail.extend((0..self.fg.clique_nodes().len()).map(|c| self.is_available(p, c)));
                let mut best: Option<(u64, usize)> = None;
                for e in unsatisfied {
                    let count = self.fg.eta(e).iter().filter(|&&c| avail[c as usize]).count();
                    let width = binomial_saturating(count as u64, p.residual[e] as u64);
                    if best.is_none_or(|(b, _)| width < b) {
                        best = Some((width, e));
                        if width <= 1 {
                            break;
                        }
                    }
                }
                let (_, e) = best?;
                let cands = self.fg.eta(e).iter().copied().filter(|&c| avail[c as usize]).collect();
                Some((e, cands))
            }
        }
    }

    /// One child per way of choosing `R_e` clique-nodes from `η'_e`, with
    /// children that break a constraint discarded. Empty means a dead branch.
    pub fn expand(&self, p: &PartialHypergraph, e: usize) -> Vec<PartialHypergraph> {
        let cands = self.residual_eta(p, e);
        let mut out = Vec::new();
        let mut scratch = p.clone();
        self.expand_from(&mut scratch, &cands, p.residual[e], 0, &mut |child| {
            out.push(child.clone())
        });
        out
    }

    fn expand_from(
        &self,
        p: &mut PartialHypergraph,
        cands: &[u32],
        need: u32,
        start: usize,
        emit: &mut dyn FnMut(&mut PartialHypergraph),
    ) {
        if need == 0 {
            emit(p);
            return;
        }
        let need_us = need as usize;
        if cands.len() < start + need_us {
            return;
        }
        for i in start..=cands.len() - need_us {
            let c = cands[i] as usize;
            if self.apply(p, c) {
                self.expand_from(p, cands, need - 1, i + 1, emit);
                self.undo(p, c);
            }
        }
    }
}

/// Edge-node picked by `heuristic` at `p`, or `None` when `p` has no residual.
pub fn select_edge(p: &PartialHypergraph, problem: &SearchProblem, heuristic: Heuristic) -> Option<usize> {
    problem.select(p, heuristic, &mut Vec::new()).map(|(e, _)| e)
}

/// Children of `p` obtained by satisfying edge-node `e`.
pub fn expand(p: &PartialHypergraph, e: usize, problem: &SearchProblem) -> Vec<PartialHypergraph> {
    problem.expand(p, e)
}

/// Shared stop conditions.
pub(crate) struct Budget {
    node_budget: Option<u64>,
    deadline: Option<Instant>,
    nodes: AtomicU64,
    stopped: AtomicBool,
}

impl Budget {
    pub(crate) fn new(opts: &SearchOptions) -> Self {
        Budget {
            node_budget: opts.node_budget,
            deadline: opts.time_budget.map(|d| Instant::now() + d),
            nodes: AtomicU64::new(0),
            stopped: AtomicBool::new(false),
        }
    }

    /// Records `count` processed nodes; returns false once a budget is hit.
    pub(crate) fn charge(&self, count: u64) -> bool {
        let total = self.nodes.fetch_add(count, Ordering::Relaxed) + count;
        if self.node_budget.is_some_and(|b| total > b) || self.deadline.is_some_and(|d| Instant::now() >= d) {
            self.stopped.store(true, Ordering::Relaxed);
        }
        !self.stopped()
    }

    pub(crate) fn stopped(&self) -> bool {
        self.stopped.load(Ordering::Relaxed)
    }

    pub(crate) fn nodes(&self) -> u64 {
        self.nodes.load(Ordering::Relaxed)
    }
}

const CHARGE_EVERY: u64 = 1024;

/// In-place depth-first walk over one subtree.
pub(crate) struct Walker<'a, F: FnMut(&PartialHypergraph)> {
    problem: &'a SearchProblem,
    heuristic: Heuristic,
    budget: &'a Budget,
    pending: u64,
    avail: Vec<bool>,
    on_twin: F,
}

impl<'a, F: FnMut(&PartialHypergraph)> Walker<'a, F> {
    pub(crate) fn new(problem: &'a SearchProblem, heuristic: Heuristic, budget: &'a Budget, on_twin: F) -> Self {
        Walker {
            problem,
            heuristic,
            budget,
            pending: 0,
            avail: Vec::new(),
            on_twin,
        }
    }

    pub(crate) fn run(&mut self, p: &mut PartialHypergraph) {
        self.visit(p);
        self.flush();
    }

    fn flush(&mut self) {
        if self.pending > 0 {
            self.budget.charge(self.pending);
            self.pending = 0;
        }
    }

    fn visit(&mut self, p: &mut PartialHypergraph) {
        self.pending += 1;
        if self.pending >= CHARGE_EVERY {
            self.flush();
        }
        if self.budget.stopped() {
            return;
        }
        if p.remaining == 0 {
            if self.problem.accepts(p) {
                (self.on_twin)(p);
            }
            return;
        }
        let Some((e, cands)) = self.problem.select(p, self.heuristic, &mut self.avail) else {
            return;
        };
        self.combine(p, &cands, p.residual[e], 0);
    }

    fn combine(&mut self, p: &mut PartialHypergraph, cands: &[u32], need: u32, start: usize) {
        if need == 0 {
            self.visit(p);
            return;
        }
        let need_us = need as usize;
        if cands.len() < start + need_us {
            return;
        }
        for i in start..=cands.len() - need_us {
            if self.budget.stopped() {
                return;
            }
            let c = cands[i] as usize;
            if self.problem.apply(p, c) {
                self.combine(p, cands, need - 1, i + 1);
                self.problem.undo(p, c);
            }
        }
    }
}

/// Visits every twin of `w` under `c` without collecting them. When some
/// edge-node has no candidate clique the search is skipped and the reported
/// bound is 0.
pub fn for_each_twin<F>(
    w: &ProjectionMatrix,
    c: &TwinConstraints,
    opts: &SearchOptions,
    mut on_twin: F,
) -> Result<SearchStats>
where
    F: FnMut(&SearchProblem, &PartialHypergraph),
{
    let start = Instant::now();
    let problem = match SearchProblem::new(w, c) {
        Ok(p) => p,
        Err(Error::EmptyCandidates(..)) => {
            return Ok(SearchStats {
                nodes_expanded: 0,
                twins_found: 0,
                wall_time: start.elapsed(),
                worst_case_bound: BigCount::zero(),
                partial: false,
            })
        }
        Err(e) => return Err(e),
    };
    let bound = worst_case_tree_size(problem.factor_graph(), w).product;
    let budget = Budget::new(opts);
    let mut found = 0u64;
    match opts.traversal {
        Traversal::DepthFirst => {
            let mut root = problem.root();
            let mut walker = Walker::new(&problem, opts.heuristic, &budget, |p: &PartialHypergraph| {
                found += 1;
                on_twin(&problem, p);
            });
            walker.run(&mut root);
        }
        Traversal::BreadthFirst => {
            let mut queue = VecDeque::from([problem.root()]);
            while let Some(p) = queue.pop_front() {
                if !budget.charge(1) {
                    break;
                }
                if p.remaining == 0 {
                    if problem.accepts(&p) {
                        found += 1;
                        on_twin(&problem, &p);
                    }
                    continue;
                }
                if let Some(e) = select_edge(&p, &problem, opts.heuristic) {
                    queue.extend(problem.expand(&p, e));
                }
            }
        }
    }
    Ok(SearchStats {
        nodes_expanded: budget.nodes(),
        twins_found: found,
        wall_time: start.elapsed(),
        worst_case_bound: bound,
        partial: budget.stopped(),
    })
}

/// Enumerates every simple hypergraph whose projection matches `w` under `c`.
pub fn twin_search(w: &ProjectionMatrix, c: &TwinConstraints, heuristic: Heuristic) -> Result<TwinSet> {
    twin_search_with(w, c, &SearchOptions::with_heuristic(heuristic))
}

pub fn twin_search_with(w: &ProjectionMatrix, c: &TwinConstraints, opts: &SearchOptions) -> Result<TwinSet> {
    let mut twins = Vec::new();
    let stats = for_each_twin(w, c, opts, |problem, p| twins.push(problem.to_hypergraph(p)))?;
    twins.sort_unstable();
    Ok(TwinSet {
        twins,
        source: w.clone(),
        constraints: c.clone(),
        stats,
    })
}

/// Counts twins without materializing them.
pub fn count_twins(w: &ProjectionMatrix, c: &TwinConstraints, opts: &SearchOptions) -> Result<SearchStats> {
    for_each_twin(w, c, opts, |_, _| {})
}
