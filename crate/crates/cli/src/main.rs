mod catalog;
mod report;
mod verify;

use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use greechie::bounds::{max_edges_oa, max_edges_oml, max_edges_omp, oml_bound_satisfied};
use greechie::constructions::{
    add_diagonal_edges, ag23, bundled_grid_diagonals, fano, merge, oml67, omp21,
    search_diagonal_edges, SearchBudget,
};
use greechie::hypergraph::parse_edge_lines;
use greechie::{parse_diagram, serialize_diagram, DiagramKind, Hypergraph};

use crate::report::AnalysisReport;

#[derive(Parser)]
#[command(
    name = "greechie",
    version,
    about = "Analyze, bound, enumerate and build Greechie diagrams"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Classify a diagram and decide whether it admits states and group-valued measures.
    Analyze {
        /// Edge-list file, or `-` for standard input.
        file: PathBuf,
        #[arg(long)]
        json: bool,
        /// Primes for the nonconstant-measure profile, comma separated.
        #[arg(long, value_delimiter = ',')]
        primes: Option<Vec<u64>>,
    },
    /// Evaluate the maximal edge count for a class on n vertices.
    Bounds {
        class: DiagramKind,
        n: u64,
        /// Check a concrete edge count instead of printing only the bound.
        m: Option<u64>,
    },
    /// List every connected diagram of a class up to isomorphism.
    Enumerate {
        #[arg(long)]
        max_vertices: usize,
        #[arg(long)]
        class: DiagramKind,
        #[arg(long)]
        max_edges: Option<usize>,
        #[arg(long, default_value_t = 3)]
        min_edge_size: usize,
        #[arg(long)]
        max_edge_size: Option<usize>,
        /// Shorthand for equal minimum and maximum edge size.
        #[arg(long, conflicts_with_all = ["min_edge_size", "max_edge_size"])]
        uniform: Option<usize>,
        #[arg(long)]
        jsonl: bool,
        /// Wall-clock limit in seconds.
        #[arg(long)]
        budget: Option<u64>,
        /// Worker threads (0 = all cores).
        #[arg(long, default_value_t = 0)]
        workers: usize,
        /// Skip the per-diagram state check.
        #[arg(long)]
        no_states: bool,
    },
    /// Print one of the built-in diagrams.
    Construct {
        name: Construction,
        /// Diagonal edges (grid vertex ids, one edge per line) added to `merge`.
        #[arg(long, conflicts_with_all = ["bundled", "search"])]
        diagonals: Option<PathBuf>,
        /// Add the shipped diagonal set to `merge`.
        #[arg(long)]
        bundled: bool,
        /// Search for a measure-killing diagonal set for `merge`.
        #[arg(long, conflicts_with = "bundled")]
        search: bool,
        /// Search budget in seconds.
        #[arg(long, default_value_t = 600)]
        budget: u64,
    },
    /// Run the built-in acceptance checks and print a pass/fail table.
    VerifyPaper {
        /// Skip a stage (repeatable): fixtures, planes, enumerate, random, bounds, grid.
        #[arg(long)]
        skip: Vec<String>,
        /// Replace the 21-vertex fixture.
        #[arg(long)]
        omp21: Option<PathBuf>,
        /// Replace the 67-vertex fixture.
        #[arg(long)]
        oml67: Option<PathBuf>,
        /// Also run the exhaustive state check at nine vertices.
        #[arg(long)]
        extended: bool,
        /// Random diagrams per sampling check.
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long, default_value_t = 2024)]
        seed: u64,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Construction {
    Fano,
    Ag23,
    Merge,
    Oml67,
    Omp21,
}

/// Errors mapped to exit codes: 1 for a failed verification, 2 for bad input.
enum Failure {
    Verification(String),
    Input(anyhow::Error),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Input(e)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification(msg)) => {
            eprintln!("verification failed: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Input(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(command: Command) -> Result<(), Failure> {
    let mut out = io::stdout().lock();
    match command {
        Command::Analyze { file, json, primes } => {
            let h = read_diagram(&file)?;
            let report = AnalysisReport::build(&file.display().to_string(), &h, primes.as_deref())?;
            if json {
                let text = serde_json::to_string_pretty(&report).map_err(anyhow::Error::from)?;
                writeln!(out, "{text}").map_err(anyhow::Error::from)?;
            } else {
                write!(out, "{}", report.to_text()).map_err(anyhow::Error::from)?;
            }
        }
        Command::Bounds { class, n, m } => {
            let text = bounds(class, n, m)?;
            write!(out, "{text}").map_err(anyhow::Error::from)?;
        }
        Command::Enumerate {
            max_vertices,
            class,
            max_edges,
            min_edge_size,
            max_edge_size,
            uniform,
            jsonl,
            budget,
            workers,
            no_states,
        } => {
            let args = catalog::CatalogArgs {
                max_vertices,
                class,
                max_edges,
                min_edge_size: uniform.unwrap_or(min_edge_size),
                max_edge_size: uniform.or(max_edge_size),
                jsonl,
                budget: budget.map(Duration::from_secs),
                workers,
                states: !no_states,
            };
            catalog::run(&args, &mut out)?;
        }
        Command::Construct {
            name,
            diagonals,
            bundled,
            search,
            budget,
        } => {
            let text = construct(name, diagonals.as_deref(), bundled, search, budget)?;
            write!(out, "{text}").map_err(anyhow::Error::from)?;
        }
        Command::VerifyPaper {
            skip,
            omp21,
            oml67,
            extended,
            samples,
            seed,
            json,
        } => {
            let args = verify::VerifyArgs {
                skip,
                omp21,
                oml67,
                extended,
                samples,
                seed,
                json,
            };
            verify::run(&args, &mut out)?;
        }
    }
    Ok(())
}

fn read_text(path: &Path) -> Result<String> {
    if path == Path::new("-") {
        let mut s = String::new();
        io::stdin()
            .read_to_string(&mut s)
            .context("reading standard input")?;
        Ok(s)
    } else {
        fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
    }
}

pub(crate) fn read_diagram(path: &Path) -> Result<Hypergraph> {
    let text = read_text(path)?;
    parse_diagram(&text).with_context(|| format!("parsing {}", path.display()))
}

fn bounds(class: DiagramKind, n: u64, m: Option<u64>) -> Result<String> {
    if n < 3 {
        bail!("n must be at least 3, got {n}");
    }
    let bound = match class {
        DiagramKind::Oa => max_edges_oa(n)?,
        DiagramKind::Omp => max_edges_omp(n)?,
        DiagramKind::Oml => max_edges_oml(n)?,
        DiagramKind::NotGreechie => bail!("no bound for non-Greechie hypergraphs"),
    };
    let mut s = format!("{bound}\n");
    if let Some(m) = m {
        let ok = match class {
            DiagramKind::Oml => oml_bound_satisfied(n, m),
            _ => m <= bound,
        };
        s.push_str(&format!(
            "m = {m}: {}\n",
            if ok { "satisfied" } else { "violated" }
        ));
    }
    Ok(s)
}

fn construct(
    name: Construction,
    diagonals: Option<&Path>,
    bundled: bool,
    search: bool,
    budget: u64,
) -> Result<String> {
    let extras = diagonals.is_some() || bundled || search;
    if extras && !matches!(name, Construction::Merge) {
        bail!("diagonal options only apply to `merge`");
    }
    let (title, h) = match name {
        Construction::Fano => ("Fano plane", fano()),
        Construction::Ag23 => ("affine plane of order 3", ag23()),
        Construction::Oml67 => ("67-vertex OML without group-valued measures", oml67()),
        Construction::Omp21 => ("21-vertex OMP without group-valued measures", omp21()),
        Construction::Merge => {
            let g = merge(&fano(), &ag23())?;
            let diags = if let Some(path) = diagonals {
                let text = read_text(path)?;
                parse_edge_lines(&text)
                    .with_context(|| format!("parsing {}", path.display()))?
                    .into_iter()
                    .map(|(_, e)| e)
                    .collect()
            } else if bundled {
                bundled_grid_diagonals()
            } else if search {
                let budget = SearchBudget {
                    max_candidates: 0,
                    max_time: Some(Duration::from_secs(budget)),
                };
                search_diagonal_edges(&g, 4, budget)?
            } else {
                Vec::new()
            };
            let h = add_diagonal_edges(&g, &diags).map_err(|e| anyhow!(e))?;
            (
                "grid merge of the Fano plane (columns) and AG(2,3) (rows)",
                h,
            )
        }
    };
    Ok(format!(
        "# {title}: {} vertices, {} edges\n{}",
        h.vertex_count(),
        h.edge_count(),
        serialize_diagram(&h)
    ))
}
