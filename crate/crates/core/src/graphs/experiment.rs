//! Does condition-number reweighting lower the average effective resistance?
//! Each trial draws a connected graph, conditions it with trace-matched
//! weights and compares average resistance before and after.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::{graph_condition, resistance_summary, WeightedGraph};
use crate::conditioners::{SolverOptions, SolverStatus};
use crate::error::{Error, Result};

/// Attempts per trial to draw a connected graph.
const MAX_DRAWS: usize = 1000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GraphGenerator {
    ErdosRenyi { n: usize, p: f64 },
    Barbell { clique: usize },
    RandomRegular { n: usize, degree: usize },
}

impl GraphGenerator {
    fn validate(&self) -> Result<()> {
        match *self {
            GraphGenerator::ErdosRenyi { n, p } => {
                if n < 2 || !(p > 0.0 && p <= 1.0) {
                    return Err(Error::OutOfRange(format!("erdos-renyi needs n >= 2 and 0 < p <= 1, got n={n} p={p}")));
                }
            }
            GraphGenerator::Barbell { clique } => {
                if clique < 1 {
                    return Err(Error::OutOfRange("barbell clique size must be >= 1".into()));
                }
            }
            GraphGenerator::RandomRegular { n, degree } => {
                if degree < 1 || degree >= n || (n * degree) % 2 != 0 {
                    return Err(Error::OutOfRange(format!(
                        "regular graph needs 1 <= d < n and n*d even, got n={n} d={degree}"
                    )));
                }
            }
        }
        Ok(())
    }

    /// One candidate graph (possibly disconnected); `None` if the draw failed.
    fn draw(&self, rng: &mut ChaCha8Rng) -> Option<WeightedGraph> {
        match *self {
            GraphGenerator::ErdosRenyi { n, p } => {
                let mut edges = Vec::new();
                for i in 0..n {
                    for j in (i + 1)..n {
                        if rng.random::<f64>() < p {
                            edges.push((i, j));
                        }
                    }
                }
                WeightedGraph::unweighted(n, &edges).ok()
            }
            GraphGenerator::Barbell { clique } => WeightedGraph::barbell(clique).ok(),
            GraphGenerator::RandomRegular { n, degree } => {
                // pairing model, rejecting loops and multi-edges
                let mut stubs: Vec<usize> = (0..n).flat_map(|v| std::iter::repeat_n(v, degree)).collect();
                for i in (1..stubs.len()).rev() {
                    let j = rng.random_range(0..=i);
                    stubs.swap(i, j);
                }
                let edges: Vec<(usize, usize)> = stubs.chunks(2).map(|c| (c[0], c[1])).collect();
                WeightedGraph::unweighted(n, &edges).ok()
            }
        }
    }

    fn draw_connected(&self, rng: &mut ChaCha8Rng) -> Result<WeightedGraph> {
        for _ in 0..MAX_DRAWS {
            if let Some(g) = self.draw(rng) {
                if g.is_connected() {
                    return Ok(g);
                }
            }
        }
        Err(Error::OutOfRange(format!("{self}: no connected graph in {MAX_DRAWS} draws")))
    }
}

impl fmt::Display for GraphGenerator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GraphGenerator::ErdosRenyi { n, p } => write!(f, "erdos-renyi:{n}:{p}"),
            GraphGenerator::Barbell { clique } => write!(f, "barbell:{clique}"),
            GraphGenerator::RandomRegular { n, degree } => write!(f, "regular:{n}:{degree}"),
        }
    }
}

impl FromStr for GraphGenerator {
    type Err = Error;

    /// `erdos-renyi:N:P`, `barbell:K` or `regular:N:D`.
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        let bad = || Error::OutOfRange(format!("unrecognized generator '{s}'"));
        let int = |t: &str| t.parse::<usize>().map_err(|_| bad());
        let generator = match parts.as_slice() {
            ["erdos-renyi", n, p] => GraphGenerator::ErdosRenyi { n: int(n)?, p: p.parse::<f64>().map_err(|_| bad())? },
            ["barbell", k] => GraphGenerator::Barbell { clique: int(k)? },
            ["regular", n, d] => GraphGenerator::RandomRegular { n: int(n)?, degree: int(d)? },
            _ => return Err(bad()),
        };
        generator.validate()?;
        Ok(generator)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrialOutcome {
    pub trial: usize,
    pub vertices: usize,
    pub edges: usize,
    pub average_before: f64,
    pub average_after: f64,
    pub kappa_before: f64,
    pub kappa_after: f64,
    pub status: SolverStatus,
}

impl TrialOutcome {
    pub fn decreased(&self) -> bool {
        self.average_after < self.average_before
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentReport {
    pub generator: GraphGenerator,
    pub seed: u64,
    pub trials: Vec<TrialOutcome>,
    pub decrease_fraction: f64,
    /// Mean of `after / before` average resistance.
    pub mean_ratio: f64,
    pub min_ratio: f64,
    pub max_ratio: f64,
}

fn run_trial(generator: &GraphGenerator, trial: usize, seed: u64, opts: &SolverOptions) -> Result<TrialOutcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial as u64);
    let graph = generator.draw_connected(&mut rng)?;
    let report = graph_condition(&graph, opts)?;
    let conditioned = report.conditioned_graph(&graph)?;
    Ok(TrialOutcome {
        trial,
        vertices: graph.vertex_count(),
        edges: graph.edge_count(),
        average_before: resistance_summary(&graph)?.average,
        average_after: resistance_summary(&conditioned)?.average,
        kappa_before: report.before.condition_number,
        kappa_after: report.after.condition_number,
        status: report.status,
    })
}

/// Runs `trials` independent trials; trial `t` uses the random stream
/// `(seed, t)`, so results do not depend on scheduling.
pub fn conjecture_experiment(
    generator: GraphGenerator,
    trials: usize,
    seed: u64,
    opts: &SolverOptions,
) -> Result<ExperimentReport> {
    if trials == 0 {
        return Err(Error::OutOfRange("trials must be >= 1".into()));
    }
    generator.validate()?;
    opts.validate()?;
    let outcomes: Vec<TrialOutcome> =
        (0..trials).into_par_iter().map(|t| run_trial(&generator, t, seed, opts)).collect::<Result<_>>()?;

    let ratios: Vec<f64> = outcomes.iter().map(|o| o.average_after / o.average_before).collect();
    let decreased = outcomes.iter().filter(|o| o.decreased()).count();
    Ok(ExperimentReport {
        generator,
        seed,
        decrease_fraction: decreased as f64 / trials as f64,
        mean_ratio: ratios.iter().sum::<f64>() / trials as f64,
        min_ratio: ratios.iter().copied().fold(f64::INFINITY, f64::min),
        max_ratio: ratios.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        trials: outcomes,
    })
}
