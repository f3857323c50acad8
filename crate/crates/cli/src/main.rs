use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use qprune::adversary::{cross_provider_merge, effort, extract_graph, ExtractionReport};
use qprune::harness::{overhead, run_experiment, ArmKind, ExperimentOutput, ExperimentSpec};
use qprune::{max_cut_bruteforce, BenchmarkId, Graph};
use serde_json::json;

#[derive(Parser)]
#[command(name = "qprune", version, about = "Edge-pruned split-iteration QAOA toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// First seed; replaces the spec's seed list with consecutive seeds.
    #[arg(long)]
    seed: Option<u64>,
    /// Output file or directory.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Benchmark graphs.
    #[command(subcommand)]
    Graph(GraphCmd),
    /// Run an experiment spec.
    Run {
        spec: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Run the split arm of a spec over several layer counts.
    Sweep {
        spec: PathBuf,
        /// Layer counts, comma separated; the spec's list when absent.
        #[arg(long, value_delimiter = ',')]
        p: Vec<usize>,
        #[command(flatten)]
        common: Common,
    },
    /// Inspect circuits as an untrusted provider would.
    #[command(subcommand)]
    Adversary(AdversaryCmd),
    /// Gate-count and evaluation-count cost of a spec.
    Overhead {
        spec: PathBuf,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Subcommand)]
enum GraphCmd {
    /// Write a benchmark graph in the text format.
    Gen {
        /// e.g. cycle4, graph6, cycle(10), complete(5)
        id: String,
        #[command(flatten)]
        common: Common,
    },
    /// Describe a graph file or benchmark id.
    Show {
        source: String,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Subcommand)]
enum AdversaryCmd {
    /// Recover the graph encoded in a circuit file.
    Extract {
        circuit: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Guessing effort for an n-node graph with some edges observed.
    Effort {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        observed: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Union of the graphs recovered from several circuit files.
    Merge {
        #[arg(required = true)]
        circuits: Vec<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
}

fn load_graph(source: &str) -> Result<Graph> {
    if let Ok(id) = source.parse::<BenchmarkId>() {
        return Ok(id.graph()?);
    }
    let text = std::fs::read_to_string(source).with_context(|| format!("reading {source}"))?;
    Ok(text.parse()?)
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn load_spec(path: &Path, seed: Option<u64>) -> Result<(ExperimentSpec, PathBuf)> {
    let mut spec = ExperimentSpec::from_file(path)?;
    if let Some(s) = seed {
        let n = spec.seeds.len() as u64;
        spec.seeds = (s..s + n).collect();
    }
    let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
    Ok((spec, base))
}

fn extraction_json(report: &ExtractionReport) -> Result<serde_json::Value> {
    let e = effort(report.n, report.edges.len())?;
    Ok(json!({
        "report": report,
        "effort": e,
        "summary": format!(
            "{} nodes, {} edges recovered, {} swaps undone, {} unmatched gates; {} unseen node pairs, 2^{} worst-case completions",
            report.n, report.edges.len(), report.swap_count, report.unmatched_gates,
            e.candidate_edges, e.candidate_edges
        ),
    }))
}

/// Runs a spec and reports; `false` when an invariant broke.
fn finish_experiment(out: ExperimentOutput, dir: Option<&Path>) -> Result<bool> {
    if let Some(d) = dir {
        std::fs::create_dir_all(d)?;
        out.write(d)?;
    }
    print!("{}", out.table.to_csv()?);
    for c in out.failed_cells() {
        eprintln!(
            "cell {} {} p={} seed={} failed: {}",
            c.sim,
            c.arm,
            c.p,
            c.seed,
            c.error.as_deref().unwrap_or("")
        );
    }
    for v in &out.violations {
        eprintln!("invariant violated: {v}");
    }
    Ok(out.violations.is_empty())
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Graph(GraphCmd::Gen { id, common }) => {
            let g = id.parse::<BenchmarkId>()?.graph()?;
            emit(common.out.as_deref(), &g.to_text())?;
        }
        Command::Graph(GraphCmd::Show { source, common }) => {
            let g = load_graph(&source)?;
            let (cmax, witness) = max_cut_bruteforce(&g)?;
            let v = json!({
                "n": g.n(),
                "edges": g.edges(),
                "cmax": cmax,
                "witness": witness.to_bitstring(),
                "bipartite": g.is_bipartite(),
            });
            emit(common.out.as_deref(), &format!("{}\n", serde_json::to_string_pretty(&v)?))?;
        }
        Command::Run { spec, common } => {
            let (spec, base) = load_spec(&spec, common.seed)?;
            return finish_experiment(run_experiment(&spec, &base)?, common.out.as_deref());
        }
        Command::Sweep { spec, p, common } => {
            let (mut spec, base) = load_spec(&spec, common.seed)?;
            spec.arms = vec![ArmKind::Split];
            if !p.is_empty() {
                spec.p_layers = p;
            }
            spec.validate()?;
            return finish_experiment(run_experiment(&spec, &base)?, common.out.as_deref());
        }
        Command::Overhead { spec, common } => {
            let (spec, base) = load_spec(&spec, common.seed)?;
            let report = overhead(&spec, &base)?;
            emit(common.out.as_deref(), &format!("{}\n", serde_json::to_string_pretty(&report)?))?;
        }
        Command::Adversary(AdversaryCmd::Extract { circuit, common }) => {
            let text = std::fs::read_to_string(&circuit)
                .with_context(|| format!("reading {}", circuit.display()))?;
            let report = extract_graph(&text)?;
            let v = extraction_json(&report)?;
            emit(common.out.as_deref(), &format!("{}\n", serde_json::to_string_pretty(&v)?))?;
        }
        Command::Adversary(AdversaryCmd::Effort { n, observed, common }) => {
            let e = effort(n, observed)?;
            emit(common.out.as_deref(), &format!("{}\n", serde_json::to_string_pretty(&e)?))?;
        }
        Command::Adversary(AdversaryCmd::Merge { circuits, common }) => {
            let reports = circuits
                .iter()
                .map(|p| {
                    let text = std::fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
                    Ok(extract_graph(&text)?)
                })
                .collect::<Result<Vec<_>>>()?;
            let merged = cross_provider_merge(&reports)?;
            emit(common.out.as_deref(), &merged.to_text())?;
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
