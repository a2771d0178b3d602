//! Optimal frame rescaling.
//!
//! Four convex problems over the squared scales `u >= 0`:
//!
//! | solver        | problem                                                   |
//! |---------------|-----------------------------------------------------------|
//! | [`solve_sdp1`] | min t  s.t. (1 - t) I <= S_u <= (1 + t) I                |
//! | [`solve_sdp2`] | min t  s.t. I <= S_u <= t I                              |
//! | [`solve_sdp3`] | min t - v  s.t. v I <= S_u <= t I, sum u_i ‖f_i‖² = N     |
//! | [`solve_qp4`]  | min ‖I - S_u‖_F                                           |
//!
//! The first two share their minimizers with the condition-number problem
//! `min kappa(S_u)`; they differ only by a positive rescaling of `u`
//! ([`normalize_scaling`]). The three semidefinite problems run through the
//! barrier engine in [`barrier`]; the Frobenius problem is an exact
//! nonnegative least-squares problem and uses an active-set method.

mod barrier;
mod nnls;

use log::warn;
use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::frames::{frame_operator, scaled_frame_operator, summarize, Frame, ScalingVector, SpectralSummary};
use crate::spectral::{default_tolerance, sym_eig};
use barrier::{BarrierOutcome, BarrierStatus, LmiBlock, LmiProblem};

#[derive(Debug, Clone, PartialEq)]
pub struct SolverOptions {
    pub max_iterations: usize,
    pub objective_tolerance: f64,
    pub feasibility_tolerance: f64,
    /// Carried into reports; the solvers themselves are deterministic.
    pub seed: u64,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self { max_iterations: 10_000, objective_tolerance: 1e-6, feasibility_tolerance: 1e-8, seed: 0 }
    }
}

impl SolverOptions {
    pub fn validate(&self) -> Result<()> {
        if self.max_iterations == 0 {
            return Err(Error::OutOfRange("max_iterations must be at least 1".into()));
        }
        for (name, v) in
            [("objective_tolerance", self.objective_tolerance), ("feasibility_tolerance", self.feasibility_tolerance)]
        {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::OutOfRange(format!("{name} must be positive, got {v}")));
            }
        }
        Ok(())
    }

    fn gap_tolerance(&self, objective: f64) -> f64 {
        self.objective_tolerance.min(self.feasibility_tolerance) * objective.abs().max(1.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    /// Operator-norm distance to the identity.
    Sdp1,
    /// Minimum upper frame bound with unit lower bound.
    Sdp2,
    /// Spectral gap at unit mean eigenvalue.
    Sdp3,
    /// Frobenius distance to the identity.
    Qp4,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Sdp1 => "sdp1",
            Method::Sdp2 => "sdp2",
            Method::Sdp3 => "sdp3",
            Method::Qp4 => "qp4",
        }
    }
}

impl std::str::FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "sdp1" => Ok(Method::Sdp1),
            "sdp2" => Ok(Method::Sdp2),
            "sdp3" => Ok(Method::Sdp3),
            "qp4" => Ok(Method::Qp4),
            other => Err(Error::OutOfRange(format!("unknown method {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolverStatus {
    Optimal,
    MaxIter,
    Infeasible,
}

impl SolverStatus {
    pub fn name(self) -> &'static str {
        match self {
            SolverStatus::Optimal => "optimal",
            SolverStatus::MaxIter => "max_iter",
            SolverStatus::Infeasible => "infeasible",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverReport {
    pub method: Method,
    pub scaling: ScalingVector,
    pub objective: f64,
    pub before: SpectralSummary,
    pub after: SpectralSummary,
    pub status: SolverStatus,
    pub iterations: usize,
    pub kkt_residual: f64,
    pub options: SolverOptions,
}

/// Dispatches to the solver for `method`.
pub fn solve(frame: &Frame, method: Method, opts: &SolverOptions) -> Result<SolverReport> {
    match method {
        Method::Sdp1 => solve_sdp1(frame, opts),
        Method::Sdp2 => solve_sdp2(frame, opts),
        Method::Sdp3 => solve_sdp3(frame, opts),
        Method::Qp4 => solve_qp4(frame, opts),
    }
}

/// Target normalization for [`normalize_scaling`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScalingForm {
    /// `lambda_max - 1 == 1 - lambda_min` (factor `2 / (A + B)`).
    OperatorNorm,
    /// `lambda_min == 1` (factor `1 / A`).
    UnitLowerBound,
}

/// Rescales `u` by the positive factor that puts `S_u` in the requested form.
/// The condition number is unchanged.
pub fn normalize_scaling(u: &ScalingVector, frame: &Frame, form: ScalingForm) -> Result<ScalingVector> {
    let s = scaled_frame_operator(frame, u)?;
    let eig = sym_eig(&s);
    let (a, b) = (eig.min(), eig.max());
    if a <= default_tolerance(&s) {
        return Err(Error::Singular { eigenvalue: a });
    }
    let r = match form {
        ScalingForm::OperatorNorm => 2.0 / (a + b),
        ScalingForm::UnitLowerBound => 1.0 / a,
    };
    u.scaled(r)
}

/// `sum_ij u_i u_j <f_i, f_j>^2 - 2 sum_i u_i ‖f_i‖^2 + N`, the expanded
/// square of `||I - S_u||_F`.
pub fn frobenius_objective_expansion(frame: &Frame, u: &[f64]) -> f64 {
    let (q, c) = gram_system(frame);
    let u = DVector::from_column_slice(u);
    u.dot(&(&q * &u)) - 2.0 * c.dot(&u) + frame.dim() as f64
}

fn gram_system(frame: &Frame) -> (DMatrix<f64>, DVector<f64>) {
    let f = frame.vectors();
    let q = (f.transpose() * f).map(|x| x * x);
    let c = DVector::from_vec(frame.squared_norms());
    (q, c)
}

#[allow(clippy::too_many_arguments)]
fn finish_barrier(
    method: Method,
    frame: &Frame,
    before: SpectralSummary,
    scaling: ScalingVector,
    objective_of: impl Fn(&SpectralSummary) -> f64,
    outcome: &BarrierOutcome,
    extra_residual: f64,
    opts: &SolverOptions,
) -> Result<SolverReport> {
    let after = summarize(&scaled_frame_operator(frame, &scaling)?)?;
    let objective = objective_of(&after);
    let kkt_residual = extra_residual.max(outcome.gap / objective.abs().max(1.0));
    let status = match outcome.status {
        BarrierStatus::Converged if kkt_residual <= opts.feasibility_tolerance => SolverStatus::Optimal,
        other => {
            warn!(
                "{}: stopped with {:?} after {} Newton steps (kkt residual {:e})",
                method.name(),
                other,
                outcome.newton_steps,
                kkt_residual
            );
            SolverStatus::MaxIter
        }
    };
    Ok(SolverReport {
        method,
        scaling,
        objective,
        before,
        after,
        status,
        iterations: outcome.newton_steps,
        kkt_residual,
        options: opts.clone(),
    })
}

/// Minimizes `||I - S_u||_2`. The result is normalized so the extreme
/// eigenvalues of `S_u` sit symmetrically around 1, and also minimizes
/// the condition number.
pub fn solve_sdp1(frame: &Frame, opts: &SolverOptions) -> Result<SolverReport> {
    opts.validate()?;
    frame.warn_if_degenerate("sdp1");
    let before = summarize(&frame_operator(frame))?;
    let m = frame.count();
    let r = 2.0 / (before.lambda_min + before.lambda_max);
    let t0 = (r * before.lambda_max - 1.0).max(1.0 - r * before.lambda_min) + 0.5;
    let problem = LmiProblem {
        vectors: frame.vectors(),
        blocks: vec![
            LmiBlock { sign: 1.0, aux: vec![1.0], offset: -1.0 },
            LmiBlock { sign: -1.0, aux: vec![1.0], offset: 1.0 },
        ],
        cost: vec![1.0],
        equality: None,
    };
    let outcome = barrier::solve(&problem, vec![r; m], vec![t0], |obj| opts.gap_tolerance(obj), opts.max_iterations);
    let raw = ScalingVector::new(outcome.u.clone())?;
    let scaling = match normalize_scaling(&raw, frame, ScalingForm::OperatorNorm) {
        Ok(s) => s,
        // rank-deficient optimum: keep the raw barrier point
        Err(Error::Singular { .. }) => raw,
        Err(e) => return Err(e),
    };
    finish_barrier(Method::Sdp1, frame, before, scaling, |a| a.opnorm_dist, &outcome, 0.0, opts)
}

/// Minimizes `lambda_max(S_u)` subject to `S_u >= I`; the optimal value is
/// the smallest attainable condition number. Infeasible when the vectors
/// do not span.
pub fn solve_sdp2(frame: &Frame, opts: &SolverOptions) -> Result<SolverReport> {
    opts.validate()?;
    let before = summarize(&frame_operator(frame))?;
    let m = frame.count();
    if !frame.spans() {
        warn!("sdp2: vectors do not span R^{}; S_u >= I is infeasible", frame.dim());
        return Ok(SolverReport {
            method: Method::Sdp2,
            scaling: ScalingVector::ones(m),
            objective: f64::INFINITY,
            after: before.clone(),
            before,
            status: SolverStatus::Infeasible,
            iterations: 0,
            kkt_residual: f64::INFINITY,
            options: opts.clone(),
        });
    }
    let r = 2.0 / before.lambda_min;
    let t0 = 2.0 * r * before.lambda_max;
    let problem = LmiProblem {
        vectors: frame.vectors(),
        blocks: vec![
            LmiBlock { sign: 1.0, aux: vec![0.0], offset: -1.0 },
            LmiBlock { sign: -1.0, aux: vec![1.0], offset: 0.0 },
        ],
        cost: vec![1.0],
        equality: None,
    };
    let outcome = barrier::solve(&problem, vec![r; m], vec![t0], |obj| opts.gap_tolerance(obj), opts.max_iterations);
    let raw = ScalingVector::new(outcome.u.clone())?;
    let scaling = normalize_scaling(&raw, frame, ScalingForm::UnitLowerBound)?;
    finish_barrier(Method::Sdp2, frame, before, scaling, |a| a.lambda_max, &outcome, 0.0, opts)
}

/// Minimizes `lambda_max(S_u) - lambda_min(S_u)` subject to
/// `trace(S_u) = N`.
pub fn solve_sdp3(frame: &Frame, opts: &SolverOptions) -> Result<SolverReport> {
    opts.validate()?;
    frame.warn_if_degenerate("sdp3");
    let before = summarize(&frame_operator(frame))?;
    let m = frame.count();
    let n = frame.dim() as f64;
    let norms = frame.squared_norms();
    let r = n / norms.iter().sum::<f64>();
    let (lo, hi) = (r * before.lambda_min, r * before.lambda_max);
    let problem = LmiProblem {
        vectors: frame.vectors(),
        blocks: vec![
            // S_u - v I
            LmiBlock { sign: 1.0, aux: vec![0.0, -1.0], offset: 0.0 },
            // t I - S_u
            LmiBlock { sign: -1.0, aux: vec![1.0, 0.0], offset: 0.0 },
        ],
        cost: vec![1.0, -1.0],
        equality: Some((norms.clone(), n)),
    };
    let outcome = barrier::solve(
        &problem,
        vec![r; m],
        vec![hi + 1.0, lo - 1.0],
        |obj| opts.gap_tolerance(obj),
        opts.max_iterations,
    );
    let trace: f64 = outcome.u.iter().zip(&norms).map(|(u, c)| u * c).sum();
    let equality_residual = (trace - n).abs() / n;
    let scaling = ScalingVector::new(outcome.u.clone())?.scaled(n / trace)?;
    finish_barrier(Method::Sdp3, frame, before, scaling, |a| a.gap, &outcome, equality_residual, opts)
}

/// Minimizes `||I - S_u||_F` over `u >= 0` by nonnegative least squares on
/// `vec(I) ~ sum_i u_i vec(f_i f_i^T)`.
pub fn solve_qp4(frame: &Frame, opts: &SolverOptions) -> Result<SolverReport> {
    opts.validate()?;
    frame.warn_if_degenerate("qp4");
    let before = summarize(&frame_operator(frame))?;
    let (q, c) = gram_system(frame);
    let sol = nnls::nnls(&q, &c, opts.max_iterations);
    let scale = c.amax().max(1.0);
    let kkt_residual = sol
        .x
        .iter()
        .zip(sol.dual.iter())
        .map(|(&x, &w)| if x > 0.0 { w.abs() } else { w.max(0.0) })
        .fold(0.0, f64::max)
        / scale;
    let scaling = ScalingVector::new(sol.x.iter().copied().collect())?;
    let after = summarize(&scaled_frame_operator(frame, &scaling)?)?;
    let status = if sol.converged && kkt_residual <= opts.feasibility_tolerance {
        SolverStatus::Optimal
    } else {
        warn!("qp4: active set stopped after {} iterations (kkt residual {kkt_residual:e})", sol.iterations);
        SolverStatus::MaxIter
    };
    Ok(SolverReport {
        method: Method::Qp4,
        scaling,
        objective: after.frobenius_dist,
        before,
        after,
        status,
        iterations: sol.iterations,
        kkt_residual,
        options: opts.clone(),
    })
}

#[cfg(test)]
mod tests;
