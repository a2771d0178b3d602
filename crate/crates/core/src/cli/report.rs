//! `key = value` report documents. Spectral quantities are written with six
//! significant figures, objectives with six decimals; lists are
//! space-separated.

use std::fmt::Write as _;

use crate::conditioners::{SolverOptions, SolverReport};
use crate::frames::{ScalabilityVerdict, SpectralSummary};
use crate::graphs::{ExperimentReport, GraphConditionReport, ResistanceSummary, WeightedGraph};
use nalgebra::DMatrix;

/// Six significant figures.
pub fn sig6(x: f64) -> String {
    if x == 0.0 {
        return "0.00000e0".into();
    }
    format!("{x:.5e}")
}

/// Six decimals, with `-0` printed as `0`.
pub fn fixed6(x: f64) -> String {
    let s = format!("{x:.6}");
    if s.trim_start_matches('-').chars().all(|c| c == '0' || c == '.') {
        s.trim_start_matches('-').to_string()
    } else {
        s
    }
}

fn list(values: &[f64]) -> String {
    values.iter().map(|&v| sig6(v)).collect::<Vec<_>>().join(" ")
}

#[derive(Default)]
pub struct Report {
    text: String,
}

impl Report {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn field(&mut self, key: &str, value: impl std::fmt::Display) -> &mut Self {
        writeln!(self.text, "{key} = {value}").unwrap();
        self
    }

    pub fn finish(&self) -> String {
        self.text.clone()
    }

    fn summary(&mut self, prefix: &str, s: &SpectralSummary) -> &mut Self {
        self.field(&format!("{prefix}.eigenvalues"), list(&s.eigenvalues))
            .field(&format!("{prefix}.lambda_min"), sig6(s.lambda_min))
            .field(&format!("{prefix}.lambda_max"), sig6(s.lambda_max))
            .field(&format!("{prefix}.condition_number"), sig6(s.condition_number))
            .field(&format!("{prefix}.gap"), sig6(s.gap))
            .field(&format!("{prefix}.relative_gap"), sig6(s.relative_gap))
            .field(&format!("{prefix}.frobenius_distance"), sig6(s.frobenius_dist))
            .field(&format!("{prefix}.operator_distance"), sig6(s.opnorm_dist))
            .field(&format!("{prefix}.trace"), sig6(s.trace))
    }

    fn options(&mut self, o: &SolverOptions) -> &mut Self {
        self.field("options.max_iterations", o.max_iterations)
            .field("options.objective_tolerance", format!("{:e}", o.objective_tolerance))
            .field("options.feasibility_tolerance", format!("{:e}", o.feasibility_tolerance))
            .field("options.seed", o.seed)
    }
}

pub fn render_analysis(dim: usize, count: usize, summary: &SpectralSummary) -> String {
    let mut r = Report::new();
    r.field("command", "frame analyze").field("dimension", dim).field("vectors", count).summary("frame", summary);
    r.finish()
}

pub fn render_solver(report: &SolverReport) -> String {
    let mut r = Report::new();
    r.field("command", "frame scale")
        .field("method", report.method.name())
        .field("status", report.status.name())
        .field("objective", fixed6(report.objective))
        .field("iterations", report.iterations)
        .field("kkt_residual", sig6(report.kkt_residual))
        .summary("before", &report.before)
        .summary("after", &report.after)
        .field("scaling.u", list(report.scaling.weights()))
        .field("scaling.s", list(&report.scaling.scales()))
        .options(&report.options);
    r.finish()
}

pub fn render_scalable(verdict: &ScalabilityVerdict, tolerance: f64) -> String {
    let mut r = Report::new();
    r.field("command", "frame scalable")
        .field("scalable", verdict.scalable)
        .field("frobenius_distance", sig6(verdict.frobenius_distance))
        .field("tolerance", format!("{tolerance:e}"));
    if let Some(s) = &verdict.scaling {
        r.field("scaling.u", list(s.weights())).field("scaling.s", list(&s.scales()));
    }
    r.finish()
}

pub fn render_graph(command: &str, graph: &WeightedGraph, report: &GraphConditionReport) -> String {
    let objective = match command {
        "graph gap" => report.after.gap,
        _ => report.after.condition_number,
    };
    let edges: Vec<String> = graph.edges().iter().map(|e| format!("{}-{}", e.u, e.v)).collect();
    let s: Vec<f64> = report.edge_scalings.iter().map(|u| u.sqrt()).collect();
    let mut r = Report::new();
    r.field("command", command)
        .field("method", report.method.name())
        .field("status", report.status.name())
        .field("objective", fixed6(objective))
        .field("iterations", report.iterations)
        .field("kkt_residual", sig6(report.kkt_residual))
        .field("vertices", graph.vertex_count())
        .field("edges", edges.join(" "))
        .field("weights", list(&graph.weights()))
        .summary("before", &report.before)
        .summary("after", &report.after)
        .field("trace_matched.eigenvalues", list(&report.trace_matched_spectrum))
        .field("scaling.u", list(&report.edge_scalings))
        .field("scaling.s", list(&s))
        .field("scaling.trace_matched", list(&report.trace_matched_scalings))
        .options(&report.options);
    r.finish()
}

pub fn render_resistance(graph: &WeightedGraph, summary: &ResistanceSummary, pairwise: &DMatrix<f64>) -> String {
    let mut r = Report::new();
    r.field("command", "graph resistance")
        .field("vertices", graph.vertex_count())
        .field("total", sig6(summary.total))
        .field("average", sig6(summary.average));
    let n = graph.vertex_count();
    for i in 0..n {
        for j in (i + 1)..n {
            r.field(&format!("resistance.{i}.{j}"), sig6(pairwise[(i, j)]));
        }
    }
    r.finish()
}

pub fn render_experiment(report: &ExperimentReport, opts: &SolverOptions) -> String {
    let mut r = Report::new();
    r.field("command", "experiment conjecture")
        .field("generator", report.generator)
        .field("seed", report.seed)
        .field("trials", report.trials.len())
        .field("decrease_fraction", fixed6(report.decrease_fraction))
        .field("ratio.mean", sig6(report.mean_ratio))
        .field("ratio.min", sig6(report.min_ratio))
        .field("ratio.max", sig6(report.max_ratio))
        .field(
            "trial.columns",
            "vertices edges average_before average_after kappa_before kappa_after status decreased",
        );
    for t in &report.trials {
        r.field(
            &format!("trial.{}", t.trial),
            format!(
                "{} {} {} {} {} {} {} {}",
                t.vertices,
                t.edges,
                sig6(t.average_before),
                sig6(t.average_after),
                sig6(t.kappa_before),
                sig6(t.kappa_after),
                t.status.name(),
                t.decreased()
            ),
        );
    }
    r.options(opts);
    r.finish()
}
