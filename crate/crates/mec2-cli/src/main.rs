//! Command-line entry point: solving, deciding, deletion problems, witness
//! checking, instance generation and benchmarking, over the text formats of
//! the `mec2` crate.
//!
//! Exit codes: 0 success / yes, 1 "no" decision or invalid witness, 2 input
//! or engine error (reported as a single `error: ...` line on stderr).

use clap::{Args, Parser, Subcommand, ValueEnum};
use mec2::branchdp::solve_branchdp;
use mec2::cyclespace::{feedback_edge_set, solve_cyclespace, solve_cyclespace_parallel, solve_logedge};
use mec2::decomp::{heuristic_branch_decomposition, treedecomp_to_branchdecomp};
use mec2::deletion::{solve_edge_deletion, solve_vertex_deletion};
use mec2::dense::{decide_nu2_at_least, dispatch_with, solve_dense, DispatchConfig, DEFAULT_CYCLESPACE_THRESHOLD};
use mec2::formats;
use mec2::generators;
use mec2::graph::{coloring_violation, EdgeColoring, Graph};
use mec2::oracle::nu2_brute;
use serde::Serialize;
use std::io::Read;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

#[derive(Parser)]
#[command(name = "mec2", version, about = "Exact maximum 2-edge-colorable subgraph solvers")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum EngineChoice {
    Auto,
    Brute,
    Cyclespace,
    Branchdp,
    Dense,
    Logedge,
}

#[derive(Args)]
struct ThreadOpts {
    /// Worker threads for engine-internal parallelism (default 1, or the
    /// MEC2_THREADS environment variable).
    #[arg(long)]
    threads: Option<usize>,
}

impl ThreadOpts {
    fn resolve(&self) -> usize {
        self.threads
            .or_else(|| std::env::var("MEC2_THREADS").ok().and_then(|v| v.parse().ok()))
            .unwrap_or(1)
            .max(1)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Solve the maximum 2-edge-colorable subgraph problem.
    Solve {
        /// Graph file ('-' for stdin); task-assignment instances with a
        /// 'tasks' header are converted and also report social welfare.
        input: String,
        #[arg(long, value_enum, default_value = "auto")]
        engine: EngineChoice,
        /// Branch decomposition file for the branchdp engine.
        #[arg(long)]
        bd: Option<PathBuf>,
        /// Tree decomposition file, converted for the branchdp engine.
        #[arg(long)]
        td: Option<PathBuf>,
        /// Emit a JSON summary instead of plain text.
        #[arg(long)]
        json: bool,
        /// Write the witness coloring to this file instead of stdout.
        #[arg(long, short = 'o')]
        coloring_out: Option<PathBuf>,
        /// Feedback-set size up to which auto dispatch picks the
        /// cycle-space engine.
        #[arg(long, default_value_t = DEFAULT_CYCLESPACE_THRESHOLD)]
        cyclespace_threshold: usize,
        #[command(flatten)]
        threads: ThreadOpts,
    },
    /// Decide whether nu_2(G) >= t.
    Decide {
        input: String,
        #[arg(long)]
        t: usize,
    },
    /// Find at most k edges whose deletion leaves a 2-edge-colorable graph.
    DeleteEdges {
        input: String,
        #[arg(long)]
        k: usize,
    },
    /// Find at most k vertices whose deletion leaves a 2-edge-colorable graph.
    DeleteVertices {
        input: String,
        #[arg(long)]
        k: usize,
    },
    /// Validate a coloring against a graph.
    Check { graph: String, coloring: String },
    /// Generate an instance and print it in graph text format.
    Gen {
        /// petersen | k4 | k5 | k33 | cycle | path | star | complete |
        /// random | cubic
        name: String,
        /// Size parameter for cycle/path/star/complete/random/cubic.
        #[arg(long)]
        n: Option<usize>,
        /// Edge probability for random graphs.
        #[arg(long)]
        p: Option<f64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Run every engine over a corpus directory and emit CSV timings.
    Bench {
        corpus: PathBuf,
        /// Comma-separated engine list.
        #[arg(long, default_value = "auto,brute,cyclespace,branchdp")]
        engines: String,
        #[command(flatten)]
        threads: ThreadOpts,
    },
}

#[derive(Debug)]
struct CliError(String);

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl<E: std::error::Error> From<E> for CliError {
    fn from(e: E) -> Self {
        CliError(e.to_string())
    }
}

fn read_input(path: &str) -> Result<String, CliError> {
    if path == "-" {
        let mut buf = String::new();
        std::io::stdin().read_to_string(&mut buf).map_err(|e| CliError(e.to_string()))?;
        Ok(buf)
    } else {
        std::fs::read_to_string(path).map_err(|e| CliError(format!("{path}: {e}")))
    }
}

/// Graph input plus task-instance context when the file was a T2ATC one.
struct LoadedGraph {
    graph: Graph,
    is_t2atc: bool,
}

fn load_graph(path: &str) -> Result<LoadedGraph, CliError> {
    let text = read_input(path)?;
    let first_token = text
        .lines()
        .map(str::trim)
        .find(|l| !l.is_empty() && !l.starts_with('#'))
        .and_then(|l| l.split_whitespace().next())
        .unwrap_or("");
    if first_token == "tasks" {
        let inst = formats::parse_t2atc(&text)?;
        Ok(LoadedGraph { graph: formats::t2atc_to_graph(&inst)?, is_t2atc: true })
    } else {
        Ok(LoadedGraph { graph: formats::parse_graph(&text)?, is_t2atc: false })
    }
}

#[derive(Serialize)]
struct SolveSummary {
    value: usize,
    engine: String,
    millis: u128,
    #[serde(skip_serializing_if = "Option::is_none")]
    coloring_path: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    tasks_executed: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    social_welfare: Option<usize>,
}

#[allow(clippy::too_many_arguments)]
fn run_solve(
    input: &str,
    engine: EngineChoice,
    bd_path: Option<&Path>,
    td_path: Option<&Path>,
    json: bool,
    coloring_out: Option<&Path>,
    cyclespace_threshold: usize,
    threads: usize,
) -> Result<ExitCode, CliError> {
    let loaded = load_graph(input)?;
    let g = &loaded.graph;
    if engine != EngineChoice::Branchdp && (bd_path.is_some() || td_path.is_some()) {
        eprintln!("warning: --bd/--td only apply to the branchdp engine");
    }
    let start = Instant::now();
    let (value, coloring, tag) =
        solve_with_engine(g, engine, bd_path, td_path, cyclespace_threshold, threads)?;
    let millis = start.elapsed().as_millis();

    debug_assert!(mec2::validate_coloring(g, &coloring).unwrap());
    if let Some(path) = coloring_out {
        std::fs::write(path, formats::emit_coloring(&coloring))
            .map_err(|e| CliError(format!("{}: {e}", path.display())))?;
    }
    let report = loaded.is_t2atc.then(|| formats::sw_report(value));
    if json {
        let summary = SolveSummary {
            value,
            engine: tag.clone(),
            millis,
            coloring_path: coloring_out.map(|p| p.display().to_string()),
            tasks_executed: report.map(|r| r.tasks_executed),
            social_welfare: report.map(|r| r.social_welfare),
        };
        println!("{}", serde_json::to_string(&summary).expect("summary serializes"));
    } else {
        println!("value {value}");
        println!("engine {tag}");
        println!("millis {millis}");
        if let Some(r) = report {
            println!("tasks_executed {}", r.tasks_executed);
            println!("social_welfare {}", r.social_welfare);
        }
        if coloring_out.is_none() {
            print!("{}", formats::emit_coloring(&coloring));
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn solve_with_engine(
    g: &Graph,
    engine: EngineChoice,
    bd_path: Option<&Path>,
    td_path: Option<&Path>,
    cyclespace_threshold: usize,
    threads: usize,
) -> Result<(usize, EdgeColoring, String), CliError> {
    let parallel = threads > 1;
    let run = move || -> Result<(usize, EdgeColoring, String), CliError> {
        match engine {
            EngineChoice::Auto => {
                let config = DispatchConfig { parallel, cyclespace_threshold };
                let (value, coloring, tag) = dispatch_with(g, config)?;
                Ok((value, coloring, tag.to_string()))
            }
            EngineChoice::Brute => {
                let (value, coloring) = nu2_brute(g)?;
                Ok((value, coloring, "brute".into()))
            }
            EngineChoice::Cyclespace => {
                let dim = feedback_edge_set(g).dimension();
                if dim > cyclespace_threshold {
                    eprintln!(
                        "warning: feedback edge set has {dim} edges, beyond the dispatch threshold {cyclespace_threshold}; continuing as requested"
                    );
                }
                let (value, coloring) =
                    if parallel { solve_cyclespace_parallel(g)? } else { solve_cyclespace(g)? };
                Ok((value, coloring, "cyclespace".into()))
            }
            EngineChoice::Branchdp => {
                let bd = match (bd_path, td_path) {
                    (Some(path), _) => {
                        let text = std::fs::read_to_string(path)
                            .map_err(|e| CliError(format!("{}: {e}", path.display())))?;
                        formats::parse_branchdecomp(&text, g)?
                    }
                    (None, Some(path)) => {
                        let text = std::fs::read_to_string(path)
                            .map_err(|e| CliError(format!("{}: {e}", path.display())))?;
                        let td = formats::parse_treedecomp(&text, g)?;
                        treedecomp_to_branchdecomp(&td, g)?
                    }
                    (None, None) => heuristic_branch_decomposition(g)?,
                };
                let (value, coloring) = solve_branchdp(g, &bd)?;
                Ok((value, coloring, format!("branchdp(width {})", bd.width())))
            }
            EngineChoice::Dense => {
                let (value, coloring) = solve_dense(g)?;
                Ok((value, coloring, "dense".into()))
            }
            EngineChoice::Logedge => {
                let (value, coloring) = solve_logedge(g)?;
                Ok((value, coloring, "logedge".into()))
            }
        }
    };
    if parallel {
        let pool = rayon_pool(threads)?;
        pool.install(run)
    } else {
        run()
    }
}

fn rayon_pool(threads: usize) -> Result<rayon::ThreadPool, CliError> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| CliError(e.to_string()))
}

fn run_decide(input: &str, t: usize) -> Result<ExitCode, CliError> {
    let loaded = load_graph(input)?;
    if decide_nu2_at_least(&loaded.graph, t)? {
        println!("yes");
        Ok(ExitCode::SUCCESS)
    } else {
        println!("no");
        Ok(ExitCode::from(1))
    }
}

fn run_delete_edges(input: &str, k: usize) -> Result<ExitCode, CliError> {
    let loaded = load_graph(input)?;
    let g = &loaded.graph;
    match solve_edge_deletion(g, k)? {
        Some(cert) => {
            let indices: Vec<String> =
                cert.removed_edges.iter().map(|e| e.to_string()).collect();
            println!("X: {}", indices.join(" "));
            let (residual, map) = g.edge_subgraph(|e| !cert.removed_edges.contains(&e));
            let mut colors = vec![0u8; residual.edge_count()];
            for (i, &orig) in map.iter().enumerate() {
                colors[i] = cert.witness.color(orig);
            }
            let residual_coloring = EdgeColoring::new(colors).expect("witness colors in range");
            print!("{}", formats::emit_coloring(&residual_coloring));
            Ok(ExitCode::SUCCESS)
        }
        None => {
            println!("no");
            Ok(ExitCode::from(1))
        }
    }
}

fn run_delete_vertices(input: &str, k: usize) -> Result<ExitCode, CliError> {
    let loaded = load_graph(input)?;
    let g = &loaded.graph;
    match solve_vertex_deletion(g, k)? {
        Some(cert) => {
            let indices: Vec<String> =
                cert.removed_vertices.iter().map(|v| v.to_string()).collect();
            println!("X: {}", indices.join(" "));
            let mut removed = vec![false; g.vertex_count()];
            for &v in &cert.removed_vertices {
                removed[v] = true;
            }
            let (residual, map) = g.delete_vertices(&removed);
            let mut colors = vec![0u8; residual.edge_count()];
            for (i, &orig) in map.iter().enumerate() {
                colors[i] = cert.witness.color(orig);
            }
            let residual_coloring = EdgeColoring::new(colors).expect("witness colors in range");
            print!("{}", formats::emit_coloring(&residual_coloring));
            Ok(ExitCode::SUCCESS)
        }
        None => {
            println!("no");
            Ok(ExitCode::from(1))
        }
    }
}

fn run_check(graph_path: &str, coloring_path: &str) -> Result<ExitCode, CliError> {
    let loaded = load_graph(graph_path)?;
    let coloring = formats::parse_coloring(&read_input(coloring_path)?)?;
    match coloring_violation(&loaded.graph, &coloring)? {
        None => {
            println!("valid");
            Ok(ExitCode::SUCCESS)
        }
        Some(violation) => {
            println!("invalid: {violation}");
            Ok(ExitCode::from(1))
        }
    }
}

fn run_gen(name: &str, n: Option<usize>, p: Option<f64>, seed: u64) -> Result<ExitCode, CliError> {
    let graph = match name {
        "random" => {
            let n = n.ok_or_else(|| CliError("random requires --n".into()))?;
            let p = p.ok_or_else(|| CliError("random requires --p".into()))?;
            generators::random_graph(n, p, seed)?
        }
        "cubic" => {
            let n = n.ok_or_else(|| CliError("cubic requires --n".into()))?;
            generators::random_cubic(n, seed)?
        }
        other => generators::gen_named(&generators::NamedGraph::parse(other, n)?)?,
    };
    print!("{}", formats::emit_graph(&graph));
    Ok(ExitCode::SUCCESS)
}

fn run_bench(corpus: &Path, engines: &str, threads: usize) -> Result<ExitCode, CliError> {
    let mut files: Vec<PathBuf> = std::fs::read_dir(corpus)
        .map_err(|e| CliError(format!("{}: {e}", corpus.display())))?
        .filter_map(|entry| entry.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|ext| ext == "gr"))
        .collect();
    files.sort();
    let engine_list: Vec<EngineChoice> = engines
        .split(',')
        .map(|name| {
            EngineChoice::from_str(name.trim(), true)
                .map_err(|_| CliError(format!("unknown engine {name:?}")))
        })
        .collect::<Result<_, _>>()?;
    println!("instance,n,m,engine,value,millis");
    for file in &files {
        let text = std::fs::read_to_string(file)
            .map_err(|e| CliError(format!("{}: {e}", file.display())))?;
        let g = formats::parse_graph(&text)?;
        let name = file.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
        for &engine in &engine_list {
            let label = engine.to_possible_value().expect("no skipped variants").get_name().to_string();
            let start = Instant::now();
            match solve_with_engine(&g, engine, None, None, DEFAULT_CYCLESPACE_THRESHOLD, threads) {
                Ok((value, _, _)) => {
                    println!(
                        "{name},{},{},{label},{value},{}",
                        g.vertex_count(),
                        g.edge_count(),
                        start.elapsed().as_millis()
                    );
                }
                Err(e) => {
                    eprintln!("note: {name}: {label} skipped: {e}");
                }
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Solve { input, engine, bd, td, json, coloring_out, cyclespace_threshold, threads } => {
            run_solve(
                input,
                *engine,
                bd.as_deref(),
                td.as_deref(),
                *json,
                coloring_out.as_deref(),
                *cyclespace_threshold,
                threads.resolve(),
            )
        }
        Command::Decide { input, t } => run_decide(input, *t),
        Command::DeleteEdges { input, k } => run_delete_edges(input, *k),
        Command::DeleteVertices { input, k } => run_delete_vertices(input, *k),
        Command::Check { graph, coloring } => run_check(graph, coloring),
        Command::Gen { name, n, p, seed } => run_gen(name, *n, *p, *seed),
        Command::Bench { corpus, engines, threads } => run_bench(corpus, engines, threads.resolve()),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
