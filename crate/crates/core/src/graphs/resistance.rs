use nalgebra::{DMatrix, DVector};

use super::{laplacian, projected_laplacian, WeightedGraph};
use crate::error::{Error, Result};
use crate::spectral::SymMatrix;

/// `L^+ = (L + J/N)^{-1} - J/N`, valid when the constants span the kernel.
fn pseudoinverse(l: &SymMatrix) -> Result<DMatrix<f64>> {
    let n = l.order();
    let j = DMatrix::from_element(n, n, 1.0 / n as f64);
    let shifted = l.as_matrix() + &j;
    let inv = shifted.cholesky().ok_or(Error::Disconnected)?.inverse();
    Ok(inv - j)
}

fn check_vertex(graph: &WeightedGraph, i: usize) -> Result<()> {
    if i >= graph.vertex_count() {
        return Err(Error::OutOfRange(format!("vertex {i} outside 0..{}", graph.vertex_count())));
    }
    Ok(())
}

/// `(e_i - e_j)^T L^+ (e_i - e_j)`; zero when `i == j`.
pub fn effective_resistance(graph: &WeightedGraph, i: usize, j: usize) -> Result<f64> {
    check_vertex(graph, i)?;
    check_vertex(graph, j)?;
    graph.require_connected()?;
    if i == j {
        return Ok(0.0);
    }
    let p = pseudoinverse(&laplacian(graph))?;
    Ok(p[(i, i)] + p[(j, j)] - 2.0 * p[(i, j)])
}

/// `sum_k (f_k(i) - f_k(j))^2 / lambda_k` over the nonzero eigenpairs.
pub fn effective_resistance_spectral(graph: &WeightedGraph, i: usize, j: usize) -> Result<f64> {
    check_vertex(graph, i)?;
    check_vertex(graph, j)?;
    graph.require_connected()?;
    if i == j {
        return Ok(0.0);
    }
    let projected = projected_laplacian(&laplacian(graph))?;
    let diff: DVector<f64> = projected.basis.row(i).transpose() - projected.basis.row(j).transpose();
    Ok(diff.iter().zip(&projected.eigenvalues).map(|(d, l)| d * d / l).sum())
}

/// All pairwise resistances.
pub fn resistance_matrix(graph: &WeightedGraph) -> Result<DMatrix<f64>> {
    graph.require_connected()?;
    let p = pseudoinverse(&laplacian(graph))?;
    let n = graph.vertex_count();
    Ok(DMatrix::from_fn(n, n, |i, j| if i == j { 0.0 } else { p[(i, i)] + p[(j, j)] - 2.0 * p[(i, j)] }))
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResistanceSummary {
    /// Sum over ordered pairs `(i, j)`.
    pub total: f64,
    /// `total / (N (N - 1))`.
    pub average: f64,
}

pub fn resistance_summary(graph: &WeightedGraph) -> Result<ResistanceSummary> {
    let r = resistance_matrix(graph)?;
    let n = graph.vertex_count() as f64;
    let total = r.sum();
    Ok(ResistanceSummary { total, average: total / (n * (n - 1.0)) })
}
