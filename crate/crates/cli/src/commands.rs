use std::collections::BTreeSet;
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde::{Deserialize, Serialize};
use twinsearch::bounds::{
    clique_approximation, naive_upper_bound, worst_case_tree_size, worst_case_tree_size_without_pairs,
};
use twinsearch::classify::{gram_mates, partition_hypergraphs};
use twinsearch::distance::{pairwise_distances, Measure};
use twinsearch::ensemble::{
    exhaustive_study, rank_correlation_report, sampled_study, satisfies_refinement, EnsembleParams, ExhaustiveConfig,
    ExhaustiveReport, SampledCell, SampledConfig,
};
use twinsearch::factorgraph::{build_factor_graph, clique_census, Refinement, TwinConstraints};
use twinsearch::hypergraph::{
    project, size_distribution, DiagonalMode, Hypergraph, ProjectionMatrix, SizeDistribution,
};
use twinsearch::search::{
    for_each_twin, twin_search_parallel_with, twin_search_with, SearchOptions, SearchStats, TwinSet,
};

use crate::config::{Cli, Command, ExhaustiveArgs, SampleArgs, TwinsArgs};
use crate::status;

/// Bad flags or inputs detected after parsing.
#[derive(Debug)]
struct Usage(String);

impl fmt::Display for Usage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    Usage(msg.into()).into()
}

pub fn exit_code(e: &anyhow::Error) -> u8 {
    use twinsearch::Error as E;
    match e.downcast_ref::<E>() {
        Some(E::Infeasible(_) | E::EmptyCandidates(..) | E::NonDivisibleRowSum(_)) => status::EMPTY,
        Some(E::RejectionBudgetExceeded(_) | E::TooLarge { .. }) => status::BUDGET,
        _ => status::USAGE,
    }
}

/// Twin set file written by `twins` and read by `classify` and `distances`.
#[derive(Serialize, Deserialize)]
struct TwinsFile {
    n: usize,
    projection: ProjectionMatrix,
    constraints: TwinConstraints,
    twins: Vec<Vec<Vec<usize>>>,
    stats: SearchStats,
}

impl TwinsFile {
    fn from_set(t: &TwinSet) -> Self {
        TwinsFile {
            n: t.source.n(),
            projection: t.source.clone(),
            constraints: t.constraints.clone(),
            twins: t.twins.iter().map(|h| h.edges().to_vec()).collect(),
            stats: t.stats.clone(),
        }
    }

    fn read(path: &Path) -> Result<Self> {
        let text = read(path)?;
        serde_json::from_str(&text).with_context(|| format!("parsing twins file {}", path.display()))
    }

    fn hypergraphs(&self) -> Result<Vec<Hypergraph>> {
        self.twins
            .iter()
            .map(|edges| Ok(Hypergraph::new(self.n, edges.clone())?))
            .collect()
    }
}

#[derive(Serialize)]
struct ClassifyOutput {
    classes: Vec<Vec<usize>>,
    representatives: Vec<usize>,
    exact_mates: Vec<(usize, usize)>,
    isomorphic_mates: Vec<(usize, usize)>,
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn write(out: &Option<PathBuf>, text: &str) -> Result<()> {
    match out {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn read_projection(path: &Path) -> Result<ProjectionMatrix> {
    ProjectionMatrix::parse_csv(&read(path)?).with_context(|| format!("parsing projection {}", path.display()))
}

/// `2:3;3:1`
fn sizes_label(d: &SizeDistribution) -> String {
    let parts: Vec<String> = d.counts.iter().map(|(k, m)| format!("{k}:{m}")).collect();
    parts.join(";")
}

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

pub fn run(cli: Cli) -> Result<u8> {
    let quiet = cli.quiet;
    let progress = move |msg: &str| {
        if !quiet {
            eprintln!("{msg}");
        }
    };
    match cli.command {
        Command::Project { input, diagonal, out } => {
            let h = Hypergraph::parse(&read(&input)?).with_context(|| format!("parsing {}", input.display()))?;
            let mode = if diagonal {
                DiagonalMode::WithDiagonal
            } else {
                DiagonalMode::WithoutDiagonal
            };
            write(&out, &project(&h, mode).to_csv())?;
            Ok(status::OK)
        }
        Command::Census { input, k_max, out } => {
            let w = read_projection(&input)?;
            let k_max = k_max.unwrap_or(w.n()).max(2);
            let census = clique_census(&w, k_max);
            let mut text = String::from("size,count\n");
            for k in 2..=k_max {
                text.push_str(&format!("{k},{}\n", census.get(k)));
            }
            write(&out, &text)?;
            Ok(status::OK)
        }
        Command::Twins(args) => twins(args, progress),
        Command::Classify { input, out } => {
            let file = TwinsFile::read(&input)?;
            let set = TwinSet {
                twins: file.hypergraphs()?,
                source: file.projection,
                constraints: file.constraints,
                stats: file.stats,
            };
            let partition = partition_hypergraphs(&set.twins);
            let mates = gram_mates(&set);
            let output = ClassifyOutput {
                classes: partition.classes,
                representatives: partition.representatives,
                exact_mates: mates.exact,
                isomorphic_mates: mates.isomorphic,
            };
            write(&out, &(serde_json::to_string_pretty(&output)? + "\n"))?;
            Ok(status::OK)
        }
        Command::Bounds {
            input,
            k_max,
            size_dist,
            node_budget,
            out,
        } => bounds(&input, k_max, size_dist.as_deref(), node_budget, &out),
        Command::Distances {
            input,
            measure,
            refine,
            m,
            out,
        } => distances(&input, measure, &refine, m, &out),
        Command::Exhaustive(args) => exhaustive(args, progress),
        Command::Sample(args) => sample(args, progress),
        Command::Report { input, out } => {
            let report = ExhaustiveReport::from_csv(&read(&input)?)?;
            let mut text = String::from("m,matrices,clique_tau,clique_p,worst_case_tau,worst_case_p\n");
            for r in rank_correlation_report(&report) {
                text.push_str(&format!(
                    "{},{},{},{},{},{}\n",
                    r.m,
                    r.matrices,
                    opt(r.clique_tau),
                    opt(r.clique_p),
                    opt(r.worst_case_tau),
                    opt(r.worst_case_p)
                ));
            }
            write(&out, &text)?;
            Ok(status::OK)
        }
    }
}

fn twins(args: TwinsArgs, progress: impl Fn(&str)) -> Result<u8> {
    let w = read_projection(&args.input)?;
    let mut c = match args.k_uniform {
        Some(k) => TwinConstraints::uniform(k),
        None => TwinConstraints::unrefined(args.k_max.unwrap_or(w.n()).max(2)),
    };
    if let Some(s) = &args.size_dist {
        c = c.with_size_dist(SizeDistribution::parse(s).map_err(|e| usage(e.to_string()))?);
    }
    if let Some(m) = args.edge_count {
        c = c.with_edge_count(m);
    }
    if args.match_diagonal {
        c = c.matching_diagonal();
    }
    if !args.allow_pairwise {
        c = c.without_pairwise();
    }
    c.validate(&w).map_err(|e| usage(e.to_string()))?;
    if args.workers.workers == 0 {
        return Err(usage("--workers must be positive"));
    }
    let opts = SearchOptions {
        heuristic: args.heuristic.into(),
        node_budget: args.node_budget,
        ..Default::default()
    };
    let t = if args.workers.workers > 1 {
        twin_search_parallel_with(&w, &c, &opts, args.workers.workers)?
    } else {
        twin_search_with(&w, &c, &opts)?
    };
    progress(&format!(
        "{} twins, {} search nodes, {:.3}s",
        t.len(),
        t.stats.nodes_expanded,
        t.stats.wall_time.as_secs_f64()
    ));
    write(
        &args.out,
        &(serde_json::to_string_pretty(&TwinsFile::from_set(&t))? + "\n"),
    )?;
    if t.stats.partial {
        eprintln!("node budget exhausted; the twin set is incomplete");
        return Ok(status::BUDGET);
    }
    if t.is_empty() {
        eprintln!("no hypergraph realizes the projection under these constraints");
        return Ok(status::EMPTY);
    }
    Ok(status::OK)
}

fn bounds(
    input: &Path,
    k_max: Option<usize>,
    size_dist: Option<&str>,
    node_budget: Option<u64>,
    out: &Option<PathBuf>,
) -> Result<u8> {
    let w = read_projection(input)?.off_diagonal();
    let k_max = k_max.unwrap_or(w.n()).max(2);
    let unrefined = TwinConstraints::unrefined(k_max);
    let mut text = String::from("quantity,size_distribution,value\n");
    let (product, width) = match build_factor_graph(&w, &unrefined) {
        Ok(f) => {
            let b = worst_case_tree_size(&f, &w);
            (b.product.to_string(), b.max_width.to_string())
        }
        Err(twinsearch::Error::EmptyCandidates(..)) => ("0".into(), "0".into()),
        Err(e) => return Err(e.into()),
    };
    let pairless = worst_case_tree_size_without_pairs(&w, k_max)?;
    text.push_str(&format!("worst_case_tree_size,,{product}\n"));
    text.push_str(&format!("worst_case_max_width,,{width}\n"));
    text.push_str(&format!("worst_case_without_pairs,,{}\n", pairless.product));

    let mut partial = false;
    let sizes: Vec<SizeDistribution> = match size_dist {
        Some(s) => vec![SizeDistribution::parse(s).map_err(|e| usage(e.to_string()))?],
        None => {
            let mut seen = BTreeSet::new();
            let opts = SearchOptions {
                node_budget,
                ..Default::default()
            };
            let stats = for_each_twin(&w, &unrefined, &opts, |problem, p| {
                seen.insert(size_distribution(&problem.to_hypergraph(p)));
            })?;
            partial = stats.partial;
            seen.into_iter().collect()
        }
    };
    let census = clique_census(
        &w,
        sizes.iter().filter_map(|d| d.max_size()).max().unwrap_or(2).max(k_max),
    );
    for d in &sizes {
        let label = sizes_label(d);
        text.push_str(&format!(
            "clique_approximation,{label},{}\n",
            clique_approximation(&census, d)
        ));
        text.push_str(&format!("naive_upper_bound,{label},{}\n", naive_upper_bound(w.n(), d)));
    }
    write(out, &text)?;
    if partial {
        eprintln!("node budget exhausted; observed size distributions are incomplete");
        return Ok(status::BUDGET);
    }
    Ok(status::OK)
}

fn distances(
    input: &Path,
    measure: Measure,
    refine: &[Refinement],
    m: Option<usize>,
    out: &Option<PathBuf>,
) -> Result<u8> {
    let file = TwinsFile::read(input)?;
    let hs = file.hypergraphs()?;
    let diagonal = file.projection.diagonal();
    let mut text = String::from("kind,refinement,measure,i,j,value\n");
    for &r in refine {
        if r.matches_edge_count() && m.is_none() {
            return Err(usage(format!("--refine {r} needs --m")));
        }
        if r.matches_diagonal() && !file.projection.has_diagonal() {
            return Err(usage(format!("--refine {r} needs a projection with diagonal")));
        }
        let kept: Vec<usize> = (0..hs.len())
            .filter(|&i| satisfies_refinement(&hs[i], r, m.unwrap_or(0), &diagonal))
            .collect();
        let subset: Vec<Hypergraph> = kept.iter().map(|&i| hs[i].clone()).collect();
        let pairs = pairwise_distances(&subset, measure)?;
        for &(a, b, d) in &pairs {
            text.push_str(&format!("pair,{r},{measure},{},{},{d}\n", kept[a], kept[b]));
        }
        let mean = (!pairs.is_empty()).then(|| pairs.iter().map(|p| p.2).sum::<f64>() / pairs.len() as f64);
        text.push_str(&format!("mean,{r},{measure},,,{}\n", opt(mean)));
    }
    write(out, &text)?;
    Ok(status::OK)
}

fn exhaustive(args: ExhaustiveArgs, progress: impl Fn(&str)) -> Result<u8> {
    if args.workers.workers == 0 {
        return Err(usage("--workers must be positive"));
    }
    let mut config = ExhaustiveConfig::new(args.n, args.k);
    if let Some(m) = args.m {
        config.m_values = m.0;
    }
    if let Some(k) = args.k_max {
        config.k_max = k;
    }
    config.classify = !args.no_classify;
    config.mates = !args.no_mates;
    config.search.node_budget = args.node_budget;
    config.workers = args.workers.workers;
    let report = exhaustive_study(&config, progress)?;
    write(&args.out, &report.to_csv()?)?;
    if report.rows.iter().any(|r| r.partial) {
        eprintln!("node budget exhausted on some projections; their rows are marked partial");
        return Ok(status::BUDGET);
    }
    Ok(status::OK)
}

fn sample(args: SampleArgs, progress: impl Fn(&str)) -> Result<u8> {
    if args.workers.workers == 0 {
        return Err(usage("--workers must be positive"));
    }
    for &n in &args.n.0 {
        for &m in &args.m.0 {
            EnsembleParams::new(n, m, args.k, args.seed).validate()?;
        }
    }
    let config = SampledConfig {
        n_values: args.n.0,
        m_values: args.m.0,
        k: args.k,
        samples: args.samples,
        seed: args.seed,
        search: SearchOptions {
            node_budget: args.node_budget,
            ..Default::default()
        },
        workers: args.workers.workers,
    };
    let cells = sampled_study(&config, progress)?;
    let mut text = format!("{}\n", SampledCell::csv_header());
    for c in &cells {
        text.push_str(&c.csv_row());
        text.push('\n');
    }
    write(&args.out, &text)?;
    if cells.iter().any(|c| c.partial_samples > 0) {
        eprintln!("node budget exhausted on some samples");
        return Ok(status::BUDGET);
    }
    Ok(status::OK)
}
