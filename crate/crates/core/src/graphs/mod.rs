//! Weighted graphs, Laplacians and edge reweighting.
//!
//! For a connected graph the Laplacian `L = B B^T` has a one-dimensional
//! kernel (the constants). Restricting to its orthogonal complement gives
//! the positive definite `L0 = F^T L F`, where the columns of `F` are the
//! eigenvectors of the nonzero eigenvalues. The projected incidence columns
//! `F^T b_e` then form a frame in `R^{N-1}` with frame operator `L0`, and
//! the frame conditioners reweight edges directly.

mod experiment;
mod resistance;

pub use experiment::{conjecture_experiment, ExperimentReport, GraphGenerator, TrialOutcome};
pub use resistance::{
    effective_resistance, effective_resistance_spectral, resistance_matrix, resistance_summary, ResistanceSummary,
};

use std::collections::{HashSet, VecDeque};

use nalgebra::DMatrix;

use crate::conditioners::{solve_sdp2, solve_sdp3, Method, SolverOptions, SolverReport, SolverStatus};
use crate::error::{Error, Result};
use crate::frames::{summarize, Frame, SpectralSummary};
use crate::spectral::{default_tolerance, sym_eig, SymMatrix};

/// Undirected edge with `u < v`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub weight: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct WeightedGraph {
    vertex_count: usize,
    edges: Vec<Edge>,
}

impl WeightedGraph {
    /// Validates and canonicalizes (`u < v`) an edge list. Edge order is kept.
    pub fn new(vertex_count: usize, edges: impl IntoIterator<Item = (usize, usize, f64)>) -> Result<Self> {
        if vertex_count < 2 {
            return Err(Error::InvalidGraph(format!("need at least 2 vertices, got {vertex_count}")));
        }
        let mut seen = HashSet::new();
        let mut out = Vec::new();
        for (a, b, w) in edges {
            if a >= vertex_count || b >= vertex_count {
                return Err(Error::InvalidGraph(format!("edge ({a}, {b}) outside 0..{vertex_count}")));
            }
            if a == b {
                return Err(Error::InvalidGraph(format!("self-loop at vertex {a}")));
            }
            if !(w > 0.0 && w.is_finite()) {
                return Err(Error::InvalidGraph(format!("edge ({a}, {b}) has nonpositive weight {w}")));
            }
            let (u, v) = if a < b { (a, b) } else { (b, a) };
            if !seen.insert((u, v)) {
                return Err(Error::InvalidGraph(format!("duplicate edge ({u}, {v})")));
            }
            out.push(Edge { u, v, weight: w });
        }
        Ok(Self { vertex_count, edges: out })
    }

    pub fn unweighted(vertex_count: usize, edges: &[(usize, usize)]) -> Result<Self> {
        Self::new(vertex_count, edges.iter().map(|&(u, v)| (u, v, 1.0)))
    }

    pub fn complete(n: usize) -> Result<Self> {
        let edges: Vec<_> = (0..n).flat_map(|i| ((i + 1)..n).map(move |j| (i, j))).collect();
        Self::unweighted(n, &edges)
    }

    pub fn path(n: usize) -> Result<Self> {
        let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        Self::unweighted(n, &edges)
    }

    /// Two copies of `K_k` joined by the single edge `(k - 1, k)`.
    pub fn barbell(k: usize) -> Result<Self> {
        let mut edges: Vec<_> = (0..k).flat_map(|i| ((i + 1)..k).map(move |j| (i, j))).collect();
        let second: Vec<_> = edges.iter().map(|&(i, j)| (i + k, j + k)).collect();
        edges.extend(second);
        edges.push((k - 1, k));
        Self::unweighted(2 * k, &edges)
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn weights(&self) -> Vec<f64> {
        self.edges.iter().map(|e| e.weight).collect()
    }

    /// Same topology with new weights.
    pub fn with_weights(&self, weights: &[f64]) -> Result<Self> {
        if weights.len() != self.edges.len() {
            return Err(Error::DimensionMismatch { expected: self.edges.len(), found: weights.len() });
        }
        Self::new(self.vertex_count, self.edges.iter().zip(weights).map(|(e, &w)| (e.u, e.v, w)))
    }

    pub fn is_connected(&self) -> bool {
        let mut adjacency = vec![Vec::new(); self.vertex_count];
        for e in &self.edges {
            adjacency[e.u].push(e.v);
            adjacency[e.v].push(e.u);
        }
        let mut seen = vec![false; self.vertex_count];
        let mut queue = VecDeque::from([0]);
        seen[0] = true;
        let mut count = 1;
        while let Some(x) = queue.pop_front() {
            for &y in &adjacency[x] {
                if !seen[y] {
                    seen[y] = true;
                    count += 1;
                    queue.push_back(y);
                }
            }
        }
        count == self.vertex_count
    }

    pub(crate) fn require_connected(&self) -> Result<()> {
        if self.is_connected() {
            Ok(())
        } else {
            Err(Error::Disconnected)
        }
    }
}

/// `N x m` incidence matrix; the column of edge `(u, v, w)` with `u < v` is
/// `sqrt(w) (e_u - e_v)`.
pub fn incidence_matrix(graph: &WeightedGraph) -> DMatrix<f64> {
    let mut b = DMatrix::zeros(graph.vertex_count, graph.edges.len());
    for (k, e) in graph.edges.iter().enumerate() {
        let s = e.weight.sqrt();
        b[(e.u, k)] = s;
        b[(e.v, k)] = -s;
    }
    b
}

/// Weighted degree matrix minus weighted adjacency.
pub fn laplacian(graph: &WeightedGraph) -> SymMatrix {
    let n = graph.vertex_count;
    let mut l = DMatrix::zeros(n, n);
    for e in &graph.edges {
        l[(e.u, e.u)] += e.weight;
        l[(e.v, e.v)] += e.weight;
        l[(e.u, e.v)] -= e.weight;
        l[(e.v, e.u)] -= e.weight;
    }
    SymMatrix::new(l).expect("finite weights")
}

/// `L0 = F^T L F` together with the `N x (N-1)` basis `F`.
#[derive(Debug, Clone)]
pub struct ProjectedLaplacian {
    pub reduced: SymMatrix,
    pub basis: DMatrix<f64>,
    /// Nonzero eigenvalues of `L`, ascending.
    pub eigenvalues: Vec<f64>,
}

/// Restricts a connected-graph Laplacian to the complement of the constants.
pub fn projected_laplacian(l: &SymMatrix) -> Result<ProjectedLaplacian> {
    let n = l.order();
    if n < 2 {
        return Err(Error::InvalidGraph("Laplacian of order < 2".into()));
    }
    let eig = sym_eig(l);
    if eig.eigenvalues[1] <= default_tolerance(l) {
        return Err(Error::Disconnected);
    }
    let basis = eig.eigenvectors.columns(1, n - 1).into_owned();
    let reduced = SymMatrix::new(basis.transpose() * l.as_matrix() * &basis)?;
    Ok(ProjectedLaplacian { reduced, basis, eigenvalues: eig.eigenvalues[1..].to_vec() })
}

/// Projected incidence columns `F^T b_e` as a frame in `R^{N-1}`.
pub fn projected_incidence_frame(graph: &WeightedGraph) -> Result<(Frame, ProjectedLaplacian)> {
    graph.require_connected()?;
    let projected = projected_laplacian(&laplacian(graph))?;
    let g = projected.basis.transpose() * incidence_matrix(graph);
    Ok((Frame::new(g)?, projected))
}

#[derive(Debug, Clone, PartialEq)]
pub struct GraphConditionReport {
    pub method: Method,
    /// Per-edge multipliers `u_e` from the solver; new weight is `w_e u_e`.
    pub edge_scalings: Vec<f64>,
    /// `edge_scalings` rescaled so that `trace` of the Laplacian is preserved.
    pub trace_matched_scalings: Vec<f64>,
    /// `B diag(u) B^T` for the raw scalings.
    pub conditioned_laplacian: SymMatrix,
    /// Spectral summary of the input `L0`.
    pub before: SpectralSummary,
    /// Spectral summary of the conditioned `L0` (raw normalization).
    pub after: SpectralSummary,
    /// Full Laplacian spectrum after trace matching (including the 0).
    pub trace_matched_spectrum: Vec<f64>,
    pub status: SolverStatus,
    pub iterations: usize,
    pub kkt_residual: f64,
    pub options: SolverOptions,
}

impl GraphConditionReport {
    /// The reweighted graph using trace-matched scalings.
    pub fn conditioned_graph(&self, graph: &WeightedGraph) -> Result<WeightedGraph> {
        let weights: Vec<f64> =
            graph.edges.iter().zip(&self.trace_matched_scalings).map(|(e, s)| e.weight * s).collect();
        graph.with_weights(&weights)
    }
}

fn build_report(graph: &WeightedGraph, solver: SolverReport) -> Result<GraphConditionReport> {
    let b = incidence_matrix(graph);
    let u = solver.scaling.weights().to_vec();
    let conditioned = crate::frames::weighted_gram(&b, &u);
    let r = laplacian(graph).trace() / conditioned.trace();
    let trace_matched_scalings: Vec<f64> = u.iter().map(|x| x * r).collect();
    let trace_matched_spectrum = sym_eig(&conditioned.scale(r)).eigenvalues;
    Ok(GraphConditionReport {
        method: solver.method,
        edge_scalings: u,
        trace_matched_scalings,
        conditioned_laplacian: conditioned,
        before: solver.before,
        after: solver.after,
        trace_matched_spectrum,
        status: solver.status,
        iterations: solver.iterations,
        kkt_residual: solver.kkt_residual,
        options: solver.options,
    })
}

/// Edge weights minimizing the condition number of `L0`: the projected
/// incidence frame is rescaled by the minimum-upper-bound problem, so the
/// raw result has `lambda_min(L0) = 1`.
pub fn graph_condition(graph: &WeightedGraph, opts: &SolverOptions) -> Result<GraphConditionReport> {
    let (frame, _) = projected_incidence_frame(graph)?;
    build_report(graph, solve_sdp2(&frame, opts)?)
}

/// Edge weights minimizing the spectral gap of `L0` at `trace(L0) = N - 1`.
pub fn graph_gap(graph: &WeightedGraph, opts: &SolverOptions) -> Result<GraphConditionReport> {
    let (frame, _) = projected_incidence_frame(graph)?;
    build_report(graph, solve_sdp3(&frame, opts)?)
}

/// Summary of the projected Laplacian of `graph`.
pub fn graph_summary(graph: &WeightedGraph) -> Result<SpectralSummary> {
    graph.require_connected()?;
    summarize(&projected_laplacian(&laplacian(graph))?.reduced)
}
