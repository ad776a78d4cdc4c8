//! Multi-worker twin search over a shared pool of partial hypergraphs.
//!
//! Workers take an item from the pool. While the pool is short of work they
//! expand the item by one level and hand the children back; otherwise they
//! walk the item's whole subtree locally. Each partial hypergraph is taken
//! from the pool exactly once, so no subtree is searched twice.

use std::sync::{Condvar, Mutex};
use std::thread;
use std::time::Instant;

use crate::bounds::{worst_case_tree_size, BigCount};
use crate::error::{Error, Result};
use crate::factorgraph::TwinConstraints;
use crate::hypergraph::{Hypergraph, ProjectionMatrix};

use super::{
    select_edge, Budget, Heuristic, PartialHypergraph, SearchOptions, SearchProblem, SearchStats, TwinSet, Walker,
};

struct Pool {
    items: Vec<PartialHypergraph>,
    active: usize,
}

pub fn twin_search_parallel(
    w: &ProjectionMatrix,
    c: &TwinConstraints,
    heuristic: Heuristic,
    workers: usize,
) -> Result<TwinSet> {
    twin_search_parallel_with(w, c, &SearchOptions::with_heuristic(heuristic), workers)
}

/// Traversal order in `opts` is ignored: the pool has no ordering guarantee.
pub fn twin_search_parallel_with(
    w: &ProjectionMatrix,
    c: &TwinConstraints,
    opts: &SearchOptions,
    workers: usize,
) -> Result<TwinSet> {
    if workers == 0 {
        return Err(Error::InvalidConstraints("worker count must be positive".into()));
    }
    let start = Instant::now();
    let problem = match SearchProblem::new(w, c) {
        Ok(p) => p,
        Err(Error::EmptyCandidates(..)) => {
            return Ok(TwinSet {
                twins: Vec::new(),
                source: w.clone(),
                constraints: c.clone(),
                stats: SearchStats {
                    nodes_expanded: 0,
                    twins_found: 0,
                    wall_time: start.elapsed(),
                    worst_case_bound: BigCount::zero(),
                    partial: false,
                },
            })
        }
        Err(e) => return Err(e),
    };
    let budget = Budget::new(opts);
    let pool = Mutex::new(Pool {
        items: vec![problem.root()],
        active: 0,
    });
    let ready = Condvar::new();
    let share_below = 4 * workers;

    let mut twins: Vec<Hypergraph> = thread::scope(|s| {
        let handles: Vec<_> = (0..workers)
            .map(|_| {
                s.spawn(|| {
                    let mut local = Vec::new();
                    loop {
                        let (mut item, shallow) = {
                            let mut guard = pool.lock().unwrap();
                            loop {
                                if budget.stopped() {
                                    guard.items.clear();
                                }
                                if let Some(it) = guard.items.pop() {
                                    guard.active += 1;
                                    let shallow = guard.items.len() < share_below;
                                    break (it, shallow);
                                }
                                if guard.active == 0 {
                                    ready.notify_all();
                                    return local;
                                }
                                guard = ready.wait(guard).unwrap();
                            }
                        };
                        let mut children = Vec::new();
                        if shallow {
                            budget.charge(1);
                            if item.remaining() == 0 {
                                if problem.accepts(&item) {
                                    local.push(problem.to_hypergraph(&item));
                                }
                            } else if let Some(e) = select_edge(&item, &problem, opts.heuristic) {
                                children = problem.expand(&item, e);
                            }
                        } else {
                            let mut walker = Walker::new(&problem, opts.heuristic, &budget, |p: &PartialHypergraph| {
                                local.push(problem.to_hypergraph(p))
                            });
                            walker.run(&mut item);
                        }
                        let mut guard = pool.lock().unwrap();
                        guard.items.extend(children);
                        guard.active -= 1;
                        ready.notify_all();
                    }
                })
            })
            .collect();
        handles
            .into_iter()
            .flat_map(|h| h.join().expect("search worker panicked"))
            .collect()
    });
    twins.sort_unstable();
    Ok(TwinSet {
        stats: SearchStats {
            nodes_expanded: budget.nodes(),
            twins_found: twins.len() as u64,
            wall_time: start.elapsed(),
            worst_case_bound: worst_case_tree_size(problem.factor_graph(), w).product,
            partial: budget.stopped(),
        },
        twins,
        source: w.clone(),
        constraints: c.clone(),
    })
}
