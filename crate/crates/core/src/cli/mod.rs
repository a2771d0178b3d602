//! Command-line front end.
//!
//! Exit codes: 0 success, 1 other failure (including unwritable output),
//! 2 unreadable or invalid input, 3 infeasible problem (including a
//! disconnected graph), 4 solver stopped before reaching tolerance.

pub mod io;
pub mod report;

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::conditioners::{solve, Method, SolverOptions, SolverStatus};
use crate::error::Error;
use crate::frames::{frame_operator, is_scalable, summarize};
use crate::graphs::{
    conjecture_experiment, graph_condition, graph_gap, resistance_matrix, resistance_summary, GraphGenerator,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_OTHER: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_INFEASIBLE: i32 = 3;
pub const EXIT_MAX_ITER: i32 = 4;

/// Optimal rescaling of frames and graph edge weights.
#[derive(Debug, Parser)]
#[command(name = "framecond", version)]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Operations on a frame read from CSV.
    #[command(subcommand)]
    Frame(FrameCommand),
    /// Operations on a graph read from an edge list.
    #[command(subcommand)]
    Graph(GraphCommand),
    /// Randomized experiments.
    #[command(subcommand)]
    Experiment(ExperimentCommand),
}

#[derive(Debug, Args)]
pub struct SolverArgs {
    #[arg(long, default_value_t = 10_000)]
    pub max_iterations: usize,
    #[arg(long, default_value_t = 1e-6)]
    pub objective_tolerance: f64,
    #[arg(long, default_value_t = 1e-8)]
    pub feasibility_tolerance: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

impl SolverArgs {
    fn options(&self) -> SolverOptions {
        SolverOptions {
            max_iterations: self.max_iterations,
            objective_tolerance: self.objective_tolerance,
            feasibility_tolerance: self.feasibility_tolerance,
            seed: self.seed,
        }
    }
}

#[derive(Debug, Args)]
pub struct Output {
    /// Report destination (stdout when omitted).
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum FrameCommand {
    /// Spectral summary of the frame operator.
    Analyze {
        input: PathBuf,
        #[command(flatten)]
        output: Output,
    },
    /// Optimal rescaling by one of the four methods.
    Scale {
        input: PathBuf,
        #[arg(long)]
        method: Method,
        #[command(flatten)]
        solver: SolverArgs,
        #[command(flatten)]
        output: Output,
    },
    /// Whether some nonnegative rescaling is Parseval.
    Scalable {
        input: PathBuf,
        #[arg(long, default_value_t = 1e-6)]
        tolerance: f64,
        #[command(flatten)]
        output: Output,
    },
}

#[derive(Debug, Subcommand)]
pub enum GraphCommand {
    /// Edge weights minimizing the Laplacian condition number.
    Condition {
        input: PathBuf,
        #[command(flatten)]
        solver: SolverArgs,
        #[command(flatten)]
        output: Output,
        /// Graphviz output with trace-matched weights.
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Edge weights minimizing the Laplacian spectral gap.
    Gap {
        input: PathBuf,
        #[command(flatten)]
        solver: SolverArgs,
        #[command(flatten)]
        output: Output,
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Effective resistances.
    Resistance {
        input: PathBuf,
        #[command(flatten)]
        output: Output,
        #[arg(long)]
        dot: Option<PathBuf>,
    },
}

#[derive(Debug, Subcommand)]
pub enum ExperimentCommand {
    /// Average resistance before and after condition-number reweighting.
    Conjecture {
        /// `erdos-renyi:N:P`, `barbell:K` or `regular:N:D`.
        #[arg(long)]
        generator: GraphGenerator,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[command(flatten)]
        solver: SolverArgs,
        #[command(flatten)]
        output: Output,
    },
}

struct Failure {
    code: i32,
    error: Error,
}

fn input_error(error: Error) -> Failure {
    Failure { code: EXIT_PARSE, error }
}

fn solver_error(error: Error) -> Failure {
    let code = match error {
        Error::Disconnected | Error::NotAFrame { .. } => EXIT_INFEASIBLE,
        _ => EXIT_OTHER,
    };
    Failure { code, error }
}

fn status_code(status: SolverStatus) -> i32 {
    match status {
        SolverStatus::Optimal => EXIT_OK,
        SolverStatus::Infeasible => EXIT_INFEASIBLE,
        SolverStatus::MaxIter => EXIT_MAX_ITER,
    }
}

/// Writes `text` to `path`, or to stdout when `path` is `None`.
pub fn emit_report(text: &str, path: Option<&Path>) -> crate::Result<()> {
    match path {
        Some(p) => io::write_text(p, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn emit(text: &str, output: &Output) -> Result<(), Failure> {
    emit_report(text, output.report.as_deref()).map_err(|error| Failure { code: EXIT_OTHER, error })
}

fn emit_dot(graph: &crate::graphs::WeightedGraph, weights: &[f64], path: Option<&Path>) -> Result<(), Failure> {
    let Some(path) = path else { return Ok(()) };
    io::format_dot(graph, weights)
        .and_then(|text| io::write_text(path, &text))
        .map_err(|error| Failure { code: EXIT_OTHER, error })
}

fn execute(config: &RunConfig) -> Result<i32, Failure> {
    match &config.command {
        Command::Frame(FrameCommand::Analyze { input, output }) => {
            let frame = io::parse_frame_file(input).map_err(input_error)?;
            let summary = summarize(&frame_operator(&frame)).map_err(solver_error)?;
            emit(&report::render_analysis(frame.dim(), frame.count(), &summary), output)?;
            Ok(EXIT_OK)
        }
        Command::Frame(FrameCommand::Scale { input, method, solver, output }) => {
            let frame = io::parse_frame_file(input).map_err(input_error)?;
            let result = solve(&frame, *method, &solver.options()).map_err(solver_error)?;
            emit(&report::render_solver(&result), output)?;
            Ok(status_code(result.status))
        }
        Command::Frame(FrameCommand::Scalable { input, tolerance, output }) => {
            let frame = io::parse_frame_file(input).map_err(input_error)?;
            let verdict = is_scalable(&frame, *tolerance).map_err(solver_error)?;
            emit(&report::render_scalable(&verdict, *tolerance), output)?;
            Ok(EXIT_OK)
        }
        Command::Graph(GraphCommand::Condition { input, solver, output, dot })
        | Command::Graph(GraphCommand::Gap { input, solver, output, dot }) => {
            let graph = io::parse_graph_file(input).map_err(input_error)?;
            let (name, result) = match &config.command {
                Command::Graph(GraphCommand::Gap { .. }) => ("graph gap", graph_gap(&graph, &solver.options())),
                _ => ("graph condition", graph_condition(&graph, &solver.options())),
            };
            let result = result.map_err(solver_error)?;
            emit(&report::render_graph(name, &graph, &result), output)?;
            let conditioned = result.conditioned_graph(&graph).map_err(solver_error)?;
            emit_dot(&graph, &conditioned.weights(), dot.as_deref())?;
            Ok(status_code(result.status))
        }
        Command::Graph(GraphCommand::Resistance { input, output, dot }) => {
            let graph = io::parse_graph_file(input).map_err(input_error)?;
            let summary = resistance_summary(&graph).map_err(solver_error)?;
            let pairwise = resistance_matrix(&graph).map_err(solver_error)?;
            emit(&report::render_resistance(&graph, &summary, &pairwise), output)?;
            emit_dot(&graph, &graph.weights(), dot.as_deref())?;
            Ok(EXIT_OK)
        }
        Command::Experiment(ExperimentCommand::Conjecture { generator, trials, solver, output }) => {
            let opts = solver.options();
            let result = conjecture_experiment(*generator, *trials, solver.seed, &opts)
                .map_err(|error| Failure { code: EXIT_OTHER, error })?;
            emit(&report::render_experiment(&result, &opts), output)?;
            let worst = result.trials.iter().map(|t| status_code(t.status)).max().unwrap_or(EXIT_OK);
            Ok(worst)
        }
    }
}

/// Runs one command and returns the process exit code.
pub fn run(config: &RunConfig) -> i32 {
    match execute(config) {
        Ok(code) => code,
        Err(Failure { code, error }) => {
            eprintln!("error: {error}");
            code
        }
    }
}
