use std::collections::{BTreeMap, BTreeSet, HashSet};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bounds::{binomial, worst_case_tree_size_without_pairs, BigCount};
use crate::classify::{
    canonical_label_hypergraph, canonical_label_projection, partition_hypergraphs, CanonicalCode, MateCounter,
};
use crate::distance::{pairwise_distances, Measure};
use crate::error::{Error, Result};
use crate::factorgraph::{clique_census, CliqueCensus, Refinement, TwinConstraints};
use crate::hypergraph::{hyperdegrees, project, DiagonalMode, Hypergraph, ProjectionMatrix};
use crate::search::{for_each_twin, twin_search_with, SearchOptions};

use super::{enumerate_gknm, sample_gknm, EnsembleParams};

/// One projection kept after deduplication up to isomorphism.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct UniqueProjection {
    pub m: usize,
    /// Position among the unique projections for this `m`.
    pub index: usize,
    /// First hypergraph (in enumeration order) with this projection class.
    pub representative: Hypergraph,
    /// Projection of `representative`, diagonal included.
    pub projection: ProjectionMatrix,
    pub code: CanonicalCode,
}

/// Projections of all singleton-free `G_k(n, m)` hypergraphs, one per
/// isomorphism class of the off-diagonal weighted graph.
pub fn unique_projections(n: usize, k: usize, m: usize) -> Result<Vec<UniqueProjection>> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for h in enumerate_gknm(n, k, m)? {
        let w = project(&h, DiagonalMode::WithoutDiagonal);
        let code = canonical_label_projection(&w);
        if seen.insert(code.clone()) {
            out.push(UniqueProjection {
                m,
                index: out.len(),
                projection: project(&h, DiagonalMode::WithDiagonal),
                representative: h,
                code,
            });
        }
    }
    Ok(out)
}

#[derive(Clone, Debug)]
pub struct ExhaustiveConfig {
    pub n: usize,
    pub k: usize,
    pub m_values: Vec<usize>,
    /// Largest hyperedge size in the non-uniform searches.
    pub k_max: usize,
    pub search: SearchOptions,
    /// Count isomorphism classes among the non-uniform twins.
    pub classify: bool,
    /// Count exact and isomorphic Gram Mate pairs among the non-uniform twins.
    pub mates: bool,
    pub workers: usize,
}

impl ExhaustiveConfig {
    /// `n = 6`, `k = 3`, every `m` from 2 to 20, all statistics.
    pub fn new(n: usize, k: usize) -> Self {
        let slots = binomial(n as u64, k as u64).to_u64().unwrap_or(0) as usize;
        ExhaustiveConfig {
            n,
            k,
            m_values: (2..=slots).collect(),
            k_max: n,
            search: SearchOptions::default(),
            classify: true,
            mates: true,
            workers: 1,
        }
    }
}

impl Default for ExhaustiveConfig {
    fn default() -> Self {
        ExhaustiveConfig::new(6, 3)
    }
}

/// Per-projection results; one CSV row each.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProjectionStats {
    pub m: usize,
    pub index: usize,
    /// Upper triangle of the projection, row by row, space separated.
    pub upper_triangle: String,
    pub uniform_twins: u64,
    pub uniform_classes: u64,
    pub nonuniform_twins: u64,
    pub nonuniform_classes: Option<u64>,
    pub edge_count_twins: u64,
    pub diagonal_twins: u64,
    pub both_twins: u64,
    pub size_distributions: u64,
    /// Cliques of size 3 and up in the binarized projection.
    pub cliques: u64,
    pub worst_case_bound: BigCount,
    /// Worst-case tree size with 2-cliques left out of the factor graph.
    pub worst_case_bound_without_pairs: BigCount,
    /// Clique approximation summed over the distinct size distributions
    /// observed among the non-uniform twins.
    pub clique_approximation: BigCount,
    pub runtime_secs: f64,
    pub exact_mates: Option<u64>,
    pub isomorphic_mates: Option<u64>,
    pub partial: bool,
}

impl ProjectionStats {
    pub fn twins_at(&self, r: Refinement) -> u64 {
        match r {
            Refinement::None => self.nonuniform_twins,
            Refinement::EdgeCount => self.edge_count_twins,
            Refinement::Diagonal => self.diagonal_twins,
            Refinement::Both => self.both_twins,
        }
    }
}

fn upper_triangle(w: &ProjectionMatrix) -> String {
    let n = w.n();
    let mut parts = Vec::new();
    for u in 0..n {
        for v in (u + 1)..n {
            parts.push(w.get(u, v).to_string());
        }
    }
    parts.join(" ")
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ExhaustiveReport {
    pub rows: Vec<ProjectionStats>,
}

impl ExhaustiveReport {
    pub fn m_values(&self) -> Vec<usize> {
        self.rows
            .iter()
            .map(|r| r.m)
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect()
    }

    pub fn rows_for(&self, m: usize) -> impl Iterator<Item = &ProjectionStats> {
        self.rows.iter().filter(move |r| r.m == m)
    }

    /// Number of unique projections per `m`.
    pub fn projection_counts(&self) -> BTreeMap<usize, usize> {
        let mut out = BTreeMap::new();
        for r in &self.rows {
            *out.entry(r.m).or_default() += 1;
        }
        out
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        for r in &self.rows {
            w.serialize(r).map_err(csv_error)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Parse {
            line: 0,
            msg: e.to_string(),
        })?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let mut r = csv::Reader::from_reader(text.as_bytes());
        let rows = r
            .deserialize()
            .collect::<std::result::Result<Vec<ProjectionStats>, _>>()
            .map_err(csv_error)?;
        Ok(ExhaustiveReport { rows })
    }
}

fn csv_error(e: csv::Error) -> Error {
    let line = e.position().map_or(0, |p| p.line() as usize);
    Error::Parse {
        line,
        msg: e.to_string(),
    }
}

fn pool(workers: usize) -> Result<rayon::ThreadPool> {
    if workers == 0 {
        return Err(Error::InvalidConstraints("worker count must be positive".into()));
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::InvalidConstraints(e.to_string()))
}

/// Twin statistics for one projection.
pub fn projection_stats(p: &UniqueProjection, config: &ExhaustiveConfig) -> Result<ProjectionStats> {
    let w = &p.projection;
    let m = p.m;
    let diag = w.diagonal();

    let uniform = twin_search_with(w, &TwinConstraints::uniform(config.k), &config.search)?;
    let uniform_classes = partition_hypergraphs(&uniform.twins).class_count() as u64;

    let mut edge_count_twins = 0;
    let mut diagonal_twins = 0;
    let mut both_twins = 0;
    let mut dists: HashSet<Vec<u32>> = HashSet::new();
    let mut codes: HashSet<CanonicalCode> = HashSet::new();
    let mut mates = MateCounter::new();
    let stats = for_each_twin(
        w,
        &TwinConstraints::unrefined(config.k_max),
        &config.search,
        |problem, t| {
            let same_m = t.edge_count() == m;
            let same_diag = t.degrees().iter().zip(&diag).all(|(&a, &b)| a as u64 == b);
            edge_count_twins += same_m as u64;
            diagonal_twins += same_diag as u64;
            both_twins += (same_m && same_diag) as u64;
            if !dists.contains(t.sizes()) {
                dists.insert(t.sizes().to_vec());
            }
            if config.classify || config.mates {
                let h = problem.to_hypergraph(t);
                if config.classify {
                    codes.insert(canonical_label_hypergraph(&h));
                }
                if config.mates {
                    mates.add(&h);
                }
            }
        },
    )?;

    let census = clique_census(w, config.k_max);
    let clique_approximation = dists.iter().map(|sizes| summed_term(&census, sizes)).sum();
    let mate_counts = config.mates.then(|| mates.counts());
    Ok(ProjectionStats {
        m,
        index: p.index,
        upper_triangle: upper_triangle(w),
        uniform_twins: uniform.len() as u64,
        uniform_classes,
        nonuniform_twins: stats.twins_found,
        nonuniform_classes: config.classify.then_some(codes.len() as u64),
        edge_count_twins,
        diagonal_twins,
        both_twins,
        size_distributions: dists.len() as u64,
        cliques: census.total_between(3, config.k_max),
        worst_case_bound: stats.worst_case_bound,
        worst_case_bound_without_pairs: worst_case_tree_size_without_pairs(w, config.k_max)?.product,
        clique_approximation,
        runtime_secs: stats.wall_time.as_secs_f64(),
        exact_mates: mate_counts.map(|c| c.exact),
        isomorphic_mates: mate_counts.map(|c| c.isomorphic),
        partial: stats.partial || uniform.stats.partial,
    })
}

/// `∏_{k: M_k > 0} binom(C_k, M_k)` for a size-count vector indexed by size.
fn summed_term(census: &CliqueCensus, sizes: &[u32]) -> BigCount {
    sizes
        .iter()
        .enumerate()
        .filter(|(_, &c)| c > 0)
        .map(|(k, &c)| binomial(census.get(k), c as u64))
        .product()
}

/// Enumerates every `G_k(n, m)` hypergraph for each requested `m`, keeps one
/// projection per isomorphism class, and searches its twins. `progress`
/// receives one line per finished `m`.
pub fn exhaustive_study<F>(config: &ExhaustiveConfig, mut progress: F) -> Result<ExhaustiveReport>
where
    F: FnMut(&str),
{
    let pool = pool(config.workers)?;
    let mut rows = Vec::new();
    for &m in &config.m_values {
        let projections = unique_projections(config.n, config.k, m)?;
        let stats: Vec<ProjectionStats> = pool.install(|| {
            projections
                .par_iter()
                .map(|p| projection_stats(p, config))
                .collect::<Result<_>>()
        })?;
        let twins: u64 = stats.iter().map(|s| s.nonuniform_twins).sum();
        progress(&format!(
            "m={m}: {} projections, {twins} non-uniform twins",
            stats.len()
        ));
        rows.extend(stats);
    }
    Ok(ExhaustiveReport { rows })
}

/// Mean pairwise distance within one projection's refined twin set.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DistanceRow {
    pub m: usize,
    pub index: usize,
    pub refinement: Refinement,
    pub measure: Measure,
    pub twins: usize,
    pub mean: Option<f64>,
}

/// Searches each projection's twins under every refinement in `refinements`
/// and reports mean pairwise distances for each measure.
pub fn distance_study(
    projections: &[UniqueProjection],
    k_max: usize,
    refinements: &[Refinement],
    measures: &[Measure],
    search: &SearchOptions,
) -> Result<Vec<DistanceRow>> {
    let mut out = Vec::new();
    for p in projections {
        for &r in refinements {
            let c = r.apply(TwinConstraints::unrefined(k_max), p.m);
            let t = twin_search_with(&p.projection, &c, search)?;
            for &measure in measures {
                let d = pairwise_distances(&t.twins, measure)?;
                let mean = (!d.is_empty()).then(|| d.iter().map(|x| x.2).sum::<f64>() / d.len() as f64);
                out.push(DistanceRow {
                    m: p.m,
                    index: p.index,
                    refinement: r,
                    measure,
                    twins: t.len(),
                    mean,
                });
            }
        }
    }
    Ok(out)
}

#[derive(Clone, Debug)]
pub struct SampledConfig {
    pub n_values: Vec<usize>,
    pub m_values: Vec<usize>,
    pub k: usize,
    pub samples: usize,
    pub seed: u64,
    /// Per-sample budget; exhausted samples are counted in `partial_samples`.
    pub search: SearchOptions,
    pub workers: usize,
}

/// Results for one `(n, m)` heatmap cell. Infeasible cells have no samples.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SampledCell {
    pub n: usize,
    pub m: usize,
    pub k: usize,
    pub samples: usize,
    pub multi_class: usize,
    pub fraction: Option<f64>,
    pub mean_classes: Option<f64>,
    pub std_classes: Option<f64>,
    pub partial_samples: usize,
}

impl SampledCell {
    pub fn csv_header() -> &'static str {
        "n,m,k,samples,multi_class,fraction,mean_classes,std_classes,partial_samples"
    }

    pub fn csv_row(&self) -> String {
        let opt = |v: Option<f64>| v.map_or(String::new(), |x| format!("{x:.6}"));
        format!(
            "{},{},{},{},{},{},{},{},{}",
            self.n,
            self.m,
            self.k,
            self.samples,
            self.multi_class,
            opt(self.fraction),
            opt(self.mean_classes),
            opt(self.std_classes),
            self.partial_samples
        )
    }
}

/// Samples projections from `G_k(n, m)` for each cell and counts
/// isomorphism classes among their `k`-uniform twins. Projections are not
/// deduplicated, so repeated draws count repeatedly.
pub fn sampled_study<F>(config: &SampledConfig, mut progress: F) -> Result<Vec<SampledCell>>
where
    F: FnMut(&str),
{
    let pool = pool(config.workers)?;
    let mut cells = Vec::new();
    for &n in &config.n_values {
        for &m in &config.m_values {
            let params = EnsembleParams::new(n, m, config.k, config.seed);
            let cell = if params.validate().is_err() {
                SampledCell {
                    n,
                    m,
                    k: config.k,
                    samples: 0,
                    multi_class: 0,
                    fraction: None,
                    mean_classes: None,
                    std_classes: None,
                    partial_samples: 0,
                }
            } else {
                pool.install(|| sample_cell(&params, config))?
            };
            progress(&format!("n={n} m={m}: fraction {:?}", cell.fraction));
            cells.push(cell);
        }
    }
    Ok(cells)
}

fn sample_cell(params: &EnsembleParams, config: &SampledConfig) -> Result<SampledCell> {
    // one independent stream per cell so cells do not depend on each other
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    rng.set_stream(((params.n as u64) << 32) | params.m as u64);
    let draws: Vec<Hypergraph> = (0..config.samples)
        .map(|_| sample_gknm(params, &mut rng))
        .collect::<Result<_>>()?;
    let constraints = TwinConstraints::uniform(params.k);
    let results: Vec<(usize, bool)> = draws
        .par_iter()
        .map(|h| {
            let w = project(h, DiagonalMode::WithoutDiagonal);
            let t = twin_search_with(&w, &constraints, &config.search)?;
            Ok((partition_hypergraphs(&t.twins).class_count(), t.stats.partial))
        })
        .collect::<Result<_>>()?;
    let count = results.len() as f64;
    let classes: Vec<f64> = results.iter().map(|r| r.0 as f64).collect();
    let multi_class = results.iter().filter(|r| r.0 >= 2).count();
    let mean = classes.iter().sum::<f64>() / count;
    let var = classes.iter().map(|c| (c - mean).powi(2)).sum::<f64>() / count;
    let nonempty = !results.is_empty();
    Ok(SampledCell {
        n: params.n,
        m: params.m,
        k: params.k,
        samples: results.len(),
        multi_class,
        fraction: nonempty.then(|| multi_class as f64 / count),
        mean_classes: nonempty.then_some(mean),
        std_classes: nonempty.then(|| var.sqrt()),
        partial_samples: results.iter().filter(|r| r.1).count(),
    })
}

/// Hyperdegree check shared with callers that filter twin sets after the
/// fact rather than searching with a refinement.
pub fn satisfies_refinement(h: &Hypergraph, r: Refinement, m: usize, diagonal: &[u64]) -> bool {
    (!r.matches_edge_count() || h.edge_count() == m) && (!r.matches_diagonal() || hyperdegrees(h) == diagonal)
}
