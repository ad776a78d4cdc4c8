use std::ops::RangeInclusive;
use std::path::PathBuf;

use clap::{ArgAction, Args, Parser, Subcommand, ValueEnum};
use twinsearch::distance::Measure;
use twinsearch::factorgraph::Refinement;
use twinsearch::search::Heuristic;

#[derive(Debug, Parser)]
#[command(
    name = "twinsearch",
    version,
    about = "Enumerate the hypergraphs behind a node co-occurrence projection"
)]
pub struct Cli {
    /// Suppress progress messages on stderr.
    #[arg(long, short, global = true)]
    pub quiet: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Project a hypergraph file to its node co-occurrence matrix.
    #[command(after_help = "\
Input: one hyperedge per line, comma-separated node indices; `#` comments and
blank lines are ignored; `# n=<count>` fixes the node count.

Output (CSV): `# diagonal=with|without`, then one row per node of the full
symmetric matrix.")]
    Project {
        #[arg(long, short)]
        input: PathBuf,
        /// Keep hyperdegrees on the diagonal.
        #[arg(long)]
        diagonal: bool,
        #[arg(long, short)]
        out: Option<PathBuf>,
    },

    /// Count the cliques of each size in a projection.
    #[command(after_help = "Output (CSV): header `size,count`, one row per size 2..=k-max.")]
    Census {
        #[arg(long, short)]
        input: PathBuf,
        /// Largest clique size counted (default: number of nodes).
        #[arg(long)]
        k_max: Option<usize>,
        #[arg(long, short)]
        out: Option<PathBuf>,
    },

    /// Enumerate all twins of a projection.
    #[command(after_help = "\
Input: projection CSV as written by `project`.

Output (JSON): an object with
  n            node count
  projection   {n, w (row-major), diagonal_mode: \"with\"|\"without\"}
  constraints  the refinements applied
  twins        array of hypergraphs, each an array of sorted hyperedges, sorted
  stats        {nodes_expanded, twins_found, wall_time (s), worst_case_bound
               (decimal string), partial}

Exit status 2 when no hypergraph satisfies the constraints, 3 when the node
budget stopped the search (the partial result is still written).")]
    Twins(TwinsArgs),

    /// Partition a twin set into isomorphism classes and find Gram Mates.
    #[command(after_help = "\
Input: twins JSON as written by `twins`.

Output (JSON): {classes: [[twin index]], representatives: [twin index],
exact_mates: [[i, j]], isomorphic_mates: [[i, j]]}. Indices refer to the input
`twins` array; pairs have i < j.")]
    Classify {
        #[arg(long, short)]
        input: PathBuf,
        #[arg(long, short)]
        out: Option<PathBuf>,
    },

    /// Search-size bounds for a projection.
    #[command(after_help = "\
Output (CSV): header `quantity,size_distribution,value`. Rows:
  worst_case_tree_size, worst_case_max_width, worst_case_without_pairs,
  then clique_approximation and naive_upper_bound for each size distribution.
Values are exact decimal integers. Size distributions are written as
`2:3;3:1` (semicolons keep the CSV unquoted). Without --size-dist every size
distribution observed among the unrefined twins is reported.")]
    Bounds {
        #[arg(long, short)]
        input: PathBuf,
        /// Largest clique size considered (default: number of nodes).
        #[arg(long)]
        k_max: Option<usize>,
        /// Hyperedge count per size, e.g. "2:3,3:1".
        #[arg(long)]
        size_dist: Option<String>,
        #[arg(long)]
        node_budget: Option<u64>,
        #[arg(long, short)]
        out: Option<PathBuf>,
    },

    /// Pairwise distances within a twin set.
    #[command(after_help = "\
Input: twins JSON as written by `twins`.

Output (CSV): header `kind,refinement,measure,i,j,value`. `pair` rows hold
one distance between twins i and j (input indices) that survive the
refinement; one `mean` row per refinement follows, with i and j empty (value
empty when fewer than two twins survive).

Refinements: `edge-count` keeps twins with --m hyperedges; `diagonal` keeps
twins whose hyperdegrees equal the projection diagonal (the projection must
have one); `both` applies both.")]
    Distances {
        #[arg(long, short)]
        input: PathBuf,
        #[arg(long, value_parser = parse_measure)]
        measure: Measure,
        /// Comma-separated refinements.
        #[arg(long, value_delimiter = ',', default_value = "none", value_parser = parse_refinement)]
        refine: Vec<Refinement>,
        /// Hyperedge count for the edge-count refinement.
        #[arg(long)]
        m: Option<usize>,
        #[arg(long, short)]
        out: Option<PathBuf>,
    },

    /// Exhaustive study over every projection of G_k(n, m).
    #[command(after_help = "\
Output (CSV): one row per unique projection with columns
  m, index, upper_triangle, uniform_twins, uniform_classes, nonuniform_twins,
  nonuniform_classes, edge_count_twins, diagonal_twins, both_twins,
  size_distributions, cliques, worst_case_bound, worst_case_bound_without_pairs,
  clique_approximation, runtime_secs, exact_mates, isomorphic_mates, partial
Big counts are decimal strings; optional columns are empty when skipped.")]
    Exhaustive(ExhaustiveArgs),

    /// Sampled study over G_k(n, m) cells.
    #[command(after_help = "\
Output (CSV): header
  n,m,k,samples,multi_class,fraction,mean_classes,std_classes,partial_samples
one row per (n, m) cell; `fraction` is the share of samples whose k-uniform
twins fall into at least two isomorphism classes.

Exit status 2 when a requested cell is infeasible (m outside
1..=binom(n, k), or m*k < n).")]
    Sample(SampleArgs),

    /// Rank-correlation table from an exhaustive study CSV.
    #[command(after_help = "\
Input: CSV written by `exhaustive`.

Output (CSV): header `m,matrices,clique_tau,clique_p,worst_case_tau,worst_case_p`.
Twins are ranked against the clique approximation and the worst-case tree size
without 2-cliques; empty cells mean tau is undefined (a constant ranking).")]
    Report {
        #[arg(long, short)]
        input: PathBuf,
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
pub struct WorkerArgs {
    /// Worker threads.
    #[arg(long, env = "TWINSEARCH_WORKERS", default_value_t = 1)]
    pub workers: usize,
}

#[derive(Debug, Args)]
pub struct TwinsArgs {
    #[arg(long, short)]
    pub input: PathBuf,
    /// Only hyperedges of exactly this size.
    #[arg(long, conflicts_with = "size_dist")]
    pub k_uniform: Option<usize>,
    /// Exact hyperedge count per size, e.g. "2:3,3:1".
    #[arg(long)]
    pub size_dist: Option<String>,
    /// Exact number of hyperedges.
    #[arg(long)]
    pub edge_count: Option<usize>,
    /// Require hyperdegrees equal to the projection diagonal.
    #[arg(long)]
    pub match_diagonal: bool,
    /// Whether 2-node hyperedges are allowed.
    #[arg(long, default_value_t = true, action = ArgAction::Set)]
    pub allow_pairwise: bool,
    /// Largest hyperedge size (default: number of nodes).
    #[arg(long, conflicts_with = "k_uniform")]
    pub k_max: Option<usize>,
    #[arg(long, value_enum, default_value = "min-branching")]
    pub heuristic: HeuristicArg,
    /// Stop after this many search-tree nodes.
    #[arg(long)]
    pub node_budget: Option<u64>,
    #[command(flatten)]
    pub workers: WorkerArgs,
    #[arg(long, short)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ExhaustiveArgs {
    #[arg(long, default_value_t = 6)]
    pub n: usize,
    #[arg(long, default_value_t = 3)]
    pub k: usize,
    /// Hyperedge counts: a list "3,5,8" or a range "3..18" (default: all).
    #[arg(long, value_parser = parse_values)]
    pub m: Option<Values>,
    /// Largest hyperedge size in the non-uniform search (default: n).
    #[arg(long)]
    pub k_max: Option<usize>,
    /// Skip isomorphism classes of the non-uniform twins.
    #[arg(long)]
    pub no_classify: bool,
    /// Skip Gram Mate counting.
    #[arg(long)]
    pub no_mates: bool,
    /// Per-projection search-node budget.
    #[arg(long)]
    pub node_budget: Option<u64>,
    #[command(flatten)]
    pub workers: WorkerArgs,
    #[arg(long, short)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SampleArgs {
    /// Node counts: a list or a range.
    #[arg(long, value_parser = parse_values)]
    pub n: Values,
    /// Hyperedge counts: a list or a range.
    #[arg(long, value_parser = parse_values)]
    pub m: Values,
    #[arg(long, default_value_t = 3)]
    pub k: usize,
    #[arg(long, default_value_t = 1000)]
    pub samples: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Per-sample search-node budget.
    #[arg(long)]
    pub node_budget: Option<u64>,
    #[command(flatten)]
    pub workers: WorkerArgs,
    #[arg(long, short)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum HeuristicArg {
    First,
    MinBranching,
}

impl From<HeuristicArg> for Heuristic {
    fn from(h: HeuristicArg) -> Self {
        match h {
            HeuristicArg::First => Heuristic::FirstUnsatisfied,
            HeuristicArg::MinBranching => Heuristic::MinBranching,
        }
    }
}

/// A list of values given as "a,b,c" or an inclusive range "a..b".
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Values(pub Vec<usize>);

fn parse_values(s: &str) -> Result<Values, String> {
    if let Some((a, b)) = s.split_once("..") {
        let lo: usize = a.trim().parse().map_err(|e| format!("{a:?}: {e}"))?;
        let hi: usize = b
            .trim()
            .trim_start_matches('=')
            .parse()
            .map_err(|e| format!("{b:?}: {e}"))?;
        let range: RangeInclusive<usize> = lo..=hi;
        if range.is_empty() {
            return Err(format!("empty range {s:?}"));
        }
        return Ok(Values(range.collect()));
    }
    s.split(',')
        .map(|t| t.trim().parse().map_err(|e| format!("{t:?}: {e}")))
        .collect::<Result<_, _>>()
        .map(Values)
}

fn parse_measure(s: &str) -> Result<Measure, String> {
    s.parse().map_err(|e| format!("{e}"))
}

fn parse_refinement(s: &str) -> Result<Refinement, String> {
    s.parse().map_err(|e| format!("{e}"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn values_accept_lists_and_ranges() {
        assert_eq!(parse_values("3..5"), Ok(Values(vec![3, 4, 5])));
        assert_eq!(parse_values("3..=5"), Ok(Values(vec![3, 4, 5])));
        assert_eq!(parse_values("7, 2"), Ok(Values(vec![7, 2])));
        assert!(parse_values("5..3").is_err());
        assert!(parse_values("x").is_err());
    }

    #[test]
    fn conflicting_constraints_are_rejected() {
        let r = Cli::try_parse_from([
            "twinsearch",
            "twins",
            "-i",
            "w.csv",
            "--k-uniform",
            "3",
            "--size-dist",
            "3:2",
        ]);
        assert!(r.is_err());
    }

    #[test]
    fn cli_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
