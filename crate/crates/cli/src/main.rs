//! `kcover`: approximate and exact k-cycle / k-clique edge covers.
//!
//! Exit codes: 0 certified or feasible, 1 infeasible or uncertified,
//! 2 usage or input error, 3 resource cap (enumeration cap, node budget,
//! pivot limit).

mod report;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use kcover_core::cover::{self, Algorithm, CoverConfig, CoverError};
use kcover_core::exact::{exact_max_packing, exact_min_cover, ExactConfig, ExactError, DEFAULT_NODE_BUDGET};
use kcover_core::graph::{parse_edge_set, parse_graph, GraphError, WeightedGraph};
use kcover_core::lp::{to_lp_text, LpError};
use kcover_core::structures::{
    build_incidence, enumerate, verify_cover, EnumConfig, EnumError, StructureKind, DEFAULT_MAX_STRUCTURES,
};
use kcover_core::study::{fraction, ratio_study};
use kcover_core::Execution;

use report::{
    edge_list, structure_list, to_json, ExactReport, ImprovedDetail, PackReport, RunReport, StudyReport, StudyRow,
    VerifyReport,
};

#[derive(Parser)]
#[command(name = "kcover", version, about = "LP-rounding and exact k-cycle / k-clique edge covers")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Cycle,
    Clique,
}

impl From<Kind> for StructureKind {
    fn from(k: Kind) -> Self {
        match k {
            Kind::Cycle => StructureKind::Cycle,
            Kind::Clique => StructureKind::Clique,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum AlgorithmChoice {
    Basic,
    Improved,
}

#[derive(Clone, Copy, Default, ValueEnum)]
enum Format {
    #[default]
    Text,
    Structured,
}

#[derive(clap::Args)]
struct Budgets {
    /// Maximum number of enumerated structures.
    #[arg(long, env = "KCOVER_MAX_STRUCTURES", default_value_t = DEFAULT_MAX_STRUCTURES)]
    max_structures: usize,
    /// Branch-and-bound node budget for exact solves.
    #[arg(long, env = "KCOVER_NODE_BUDGET", default_value_t = DEFAULT_NODE_BUDGET)]
    node_budget: u64,
}

impl Budgets {
    fn enumeration(&self) -> EnumConfig {
        EnumConfig { max_structures: self.max_structures, ..EnumConfig::default() }
    }

    fn exact(&self) -> ExactConfig {
        ExactConfig { enumeration: self.enumeration(), node_budget: self.node_budget, ..ExactConfig::default() }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Approximate minimum-weight cover by LP rounding.
    Cover {
        file: PathBuf,
        #[arg(long)]
        k: usize,
        #[arg(long, value_enum)]
        kind: Kind,
        #[arg(long, value_enum, default_value = "basic")]
        algorithm: AlgorithmChoice,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        /// Append wall time to the report (breaks byte-identical output).
        #[arg(long)]
        timing: bool,
        /// Write the LP relaxation in CPLEX LP format to this path.
        #[arg(long)]
        dump_lp: Option<PathBuf>,
        #[command(flatten)]
        budgets: Budgets,
    },
    /// Exact minimum-weight cover by branch and bound.
    Exact {
        file: PathBuf,
        #[arg(long)]
        k: usize,
        #[arg(long, value_enum)]
        kind: Kind,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        #[command(flatten)]
        budgets: Budgets,
    },
    /// Maximum edge-disjoint k-clique packing.
    Pack {
        file: PathBuf,
        #[arg(long)]
        k: usize,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        #[command(flatten)]
        budgets: Budgets,
    },
    /// Covering and packing numbers of complete graphs K_n over a range of n.
    RatioStudy {
        #[arg(long)]
        n_min: usize,
        #[arg(long)]
        n_max: usize,
        #[arg(long)]
        k: usize,
        #[arg(long, value_enum, default_value = "clique")]
        kind: Kind,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        #[command(flatten)]
        budgets: Budgets,
    },
    /// Check that an edge set covers every k-structure.
    Verify {
        file: PathBuf,
        #[arg(long)]
        k: usize,
        #[arg(long, value_enum)]
        kind: Kind,
        /// Edge list without weights: vertex count, then "u v" lines.
        #[arg(long = "cover")]
        cover_file: PathBuf,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Resource(String),
    Internal(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 2,
            Failure::Resource(_) => 3,
            Failure::Internal(_) => 1,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Resource(m) | Failure::Internal(m) => m,
        }
    }
}

impl From<GraphError> for Failure {
    fn from(e: GraphError) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<EnumError> for Failure {
    fn from(e: EnumError) -> Self {
        match e {
            EnumError::CapExceeded { .. } => Failure::Resource(e.to_string()),
            EnumError::InvalidK(_) => Failure::Usage(e.to_string()),
            EnumError::Graph(g) => g.into(),
        }
    }
}

impl From<LpError> for Failure {
    fn from(e: LpError) -> Self {
        match e {
            LpError::PivotLimit(_) => Failure::Resource(e.to_string()),
            _ => Failure::Internal(e.to_string()),
        }
    }
}

impl From<CoverError> for Failure {
    fn from(e: CoverError) -> Self {
        match e {
            CoverError::EvenK(_) => Failure::Usage(e.to_string()),
            CoverError::Enumeration(e) => e.into(),
            CoverError::Lp(e) => e.into(),
            CoverError::Graph(e) => e.into(),
        }
    }
}

impl From<ExactError> for Failure {
    fn from(e: ExactError) -> Self {
        match e {
            ExactError::Unsolved { .. } => Failure::Resource(e.to_string()),
            ExactError::Enumeration(e) => e.into(),
            ExactError::Lp(e) => e.into(),
        }
    }
}

/// Rendered output plus whether the run counts as a success.
struct Outcome {
    text: String,
    ok: bool,
    resource_cap: bool,
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))
}

fn load_graph(path: &Path) -> Result<WeightedGraph, Failure> {
    parse_graph(&read(path)?).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn check_k(k: usize) -> Result<(), Failure> {
    if k < 3 {
        return Err(Failure::Usage(format!("--k must be at least 3, got {k}")));
    }
    Ok(())
}

fn render<T: serde::Serialize>(format: Format, report: &T, text: impl FnOnce(&T) -> String) -> String {
    match format {
        Format::Text => text(report),
        Format::Structured => to_json(report),
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_cover(
    file: &Path,
    k: usize,
    kind: Kind,
    algorithm: AlgorithmChoice,
    format: Format,
    timing: bool,
    dump_lp: Option<&Path>,
    budgets: &Budgets,
) -> Result<Outcome, Failure> {
    check_k(k)?;
    let algorithm = Algorithm::select(kind.into(), matches!(algorithm, AlgorithmChoice::Improved));
    if algorithm == Algorithm::CycleOdd && k.is_multiple_of(2) {
        return Err(CoverError::EvenK(k).into());
    }
    let g = load_graph(file)?;
    let start = Instant::now();
    let config = CoverConfig { enumeration: budgets.enumeration(), ..CoverConfig::default() };
    if let Some(path) = dump_lp {
        let m = build_incidence(&g, enumerate(&g, kind.into(), k, &config.enumeration)?)?;
        fs::write(path, to_lp_text(&m, &g))
            .map_err(|e| Failure::Usage(format!("cannot write {}: {e}", path.display())))?;
    }
    let result = cover::run(algorithm, &g, k, &config)?;
    let certified = result.is_certified(&g)?;
    let improved = result.parts.as_ref().map(|p| ImprovedDetail {
        rounded: edge_list(&p.rounded),
        residual: edge_list(&p.residual),
        bipartized: edge_list(&p.bipartized),
        residual_weight: p.bipartition.total_weight,
        cut_weight: p.bipartition.cut_weight,
    });
    let report = RunReport {
        input: file.display().to_string(),
        algorithm: algorithm.tag().into(),
        kind: StructureKind::from(kind).name().into(),
        k,
        cover: edge_list(&result.cover),
        cover_weight: result.cover_weight,
        lp_objective: result.lp_objective().to_string(),
        ratio_bound: result.ratio_bound.to_string(),
        certified,
        improved,
        wall_time_ms: timing.then(|| start.elapsed().as_millis()),
    };
    Ok(Outcome { text: render(format, &report, RunReport::to_text), ok: certified, resource_cap: false })
}

fn cmd_exact(file: &Path, k: usize, kind: Kind, format: Format, budgets: &Budgets) -> Result<Outcome, Failure> {
    check_k(k)?;
    let g = load_graph(file)?;
    let mut report = ExactReport {
        input: file.display().to_string(),
        kind: StructureKind::from(kind).name().into(),
        k,
        status: "solved".into(),
        weight: None,
        cover: None,
        lp_bound: None,
        nodes: None,
    };
    let unsolved = match exact_min_cover(&g, k, kind.into(), &budgets.exact()) {
        Ok(c) => {
            report.weight = Some(c.weight);
            report.cover = Some(edge_list(&c.cover));
            report.lp_bound = c.lp_bound.map(|r| r.to_string());
            report.nodes = Some(c.node_count);
            false
        }
        Err(ExactError::Unsolved { .. }) => {
            report.status = "unsolved".into();
            true
        }
        Err(e) => return Err(e.into()),
    };
    Ok(Outcome { text: render(format, &report, ExactReport::to_text), ok: !unsolved, resource_cap: unsolved })
}

fn cmd_pack(file: &Path, k: usize, format: Format, budgets: &Budgets) -> Result<Outcome, Failure> {
    check_k(k)?;
    let g = load_graph(file)?;
    let mut report = PackReport {
        input: file.display().to_string(),
        k,
        status: "solved".into(),
        count: None,
        cliques: None,
        perfect: None,
        nodes: None,
    };
    let unsolved = match exact_max_packing(&g, k, &budgets.exact()) {
        Ok(p) => {
            report.count = Some(p.count);
            report.perfect = Some(p.is_perfect(&g));
            report.cliques = Some(structure_list(&p.cliques));
            report.nodes = Some(p.node_count);
            false
        }
        Err(ExactError::Unsolved { .. }) => {
            report.status = "unsolved".into();
            true
        }
        Err(e) => return Err(e.into()),
    };
    Ok(Outcome { text: render(format, &report, PackReport::to_text), ok: !unsolved, resource_cap: unsolved })
}

fn cmd_ratio_study(
    n_min: usize,
    n_max: usize,
    k: usize,
    kind: Kind,
    format: Format,
    budgets: &Budgets,
) -> Result<Outcome, Failure> {
    check_k(k)?;
    if n_min > n_max {
        return Err(Failure::Usage(format!("empty range {n_min}..={n_max}")));
    }
    let rows = ratio_study(n_min..=n_max, k, kind.into(), &budgets.exact(), Execution::Parallel)?;
    let all_solved = rows.iter().all(|r| r.is_solved());
    let report = StudyReport {
        kind: StructureKind::from(kind).name().into(),
        k,
        rows: rows
            .iter()
            .map(|r| StudyRow {
                n: r.n,
                tau: r.tau,
                nu: r.nu,
                tau_over_nu: fraction(&r.tau_over_nu()),
                tau_over_edges: fraction(&r.tau_over_edges()),
            })
            .collect(),
    };
    Ok(Outcome { text: render(format, &report, StudyReport::to_text), ok: all_solved, resource_cap: !all_solved })
}

fn cmd_verify(file: &Path, k: usize, kind: Kind, cover_file: &Path, format: Format) -> Result<Outcome, Failure> {
    check_k(k)?;
    let g = load_graph(file)?;
    let cover =
        parse_edge_set(&read(cover_file)?).map_err(|e| Failure::Usage(format!("{}: {e}", cover_file.display())))?;
    let foreign: Vec<String> = cover.iter().filter(|e| g.edge_index(e).is_none()).map(|e| e.to_string()).collect();
    if !foreign.is_empty() {
        return Err(Failure::Usage(format!("cover edges not in the graph: {}", foreign.join(" "))));
    }
    let feasible = verify_cover(&g, k, kind.into(), &cover)?;
    let report = VerifyReport {
        input: file.display().to_string(),
        cover_file: cover_file.display().to_string(),
        kind: StructureKind::from(kind).name().into(),
        k,
        cover_size: cover.len(),
        cover_weight: g.total_weight(&cover)?,
        feasible,
    };
    Ok(Outcome { text: render(format, &report, VerifyReport::to_text), ok: feasible, resource_cap: false })
}

fn dispatch(cli: Cli) -> Result<Outcome, Failure> {
    match cli.command {
        Command::Cover { file, k, kind, algorithm, format, timing, dump_lp, budgets } => {
            cmd_cover(&file, k, kind, algorithm, format, timing, dump_lp.as_deref(), &budgets)
        }
        Command::Exact { file, k, kind, format, budgets } => cmd_exact(&file, k, kind, format, &budgets),
        Command::Pack { file, k, format, budgets } => cmd_pack(&file, k, format, &budgets),
        Command::RatioStudy { n_min, n_max, k, kind, format, budgets } => {
            cmd_ratio_study(n_min, n_max, k, kind, format, &budgets)
        }
        Command::Verify { file, k, kind, cover_file, format } => cmd_verify(&file, k, kind, &cover_file, format),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(outcome) => {
            print!("{}", outcome.text);
            ExitCode::from(match (outcome.ok, outcome.resource_cap) {
                (true, _) => 0,
                (false, true) => 3,
                (false, false) => 1,
            })
        }
        Err(failure) => {
            eprintln!("error: {}", failure.message());
            ExitCode::from(failure.code())
        }
    }
}
