//! Frames, scaled frame operators and spectral summaries.

use log::warn;
use nalgebra::{DMatrix, DVector};

use crate::conditioners::{solve_qp4, SolverOptions};
use crate::error::{Error, Result};
use crate::spectral::{condition_from_spectrum, default_tolerance, min_eigengap, sym_eig, MatrixNorm, SymMatrix};

/// Relative rank threshold: vectors span `R^N` when
/// `lambda_min(S) > 1e-9 * lambda_max(S)`.
pub const RANK_TOLERANCE: f64 = 1e-9;

/// Default orthogonality tolerance for [`find_perturbation_candidate`].
pub const ORTHOGONALITY_TOLERANCE: f64 = 1e-8;

/// A finite family of nonzero vectors in `R^N`, stored as the `N x M` matrix
/// whose column `i` is `f_i`.
///
/// Construction rejects zero or non-finite columns. Families that fail to
/// span `R^N` are still representable (see [`Frame::spans`]); solvers that
/// need a genuine frame check this themselves.
#[derive(Debug, Clone, PartialEq)]
pub struct Frame {
    vectors: DMatrix<f64>,
    spans: bool,
}

impl Frame {
    pub fn new(vectors: DMatrix<f64>) -> Result<Self> {
        if vectors.nrows() == 0 || vectors.ncols() == 0 {
            return Err(Error::Empty);
        }
        if vectors.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite);
        }
        if let Some(index) = (0..vectors.ncols()).find(|&i| vectors.column(i).norm() == 0.0) {
            return Err(Error::ZeroVector { index });
        }
        let s = SymMatrix::new(&vectors * vectors.transpose())?;
        let eig = sym_eig(&s);
        let spans = eig.min() > RANK_TOLERANCE * eig.max();
        Ok(Self { vectors, spans })
    }

    /// Like [`Frame::new`] but also rejects families that do not span.
    pub fn spanning(vectors: DMatrix<f64>) -> Result<Self> {
        let frame = Self::new(vectors)?;
        if !frame.spans {
            let eig = sym_eig(&frame_operator(&frame));
            return Err(Error::NotAFrame { lambda_min: eig.min(), lambda_max: eig.max() });
        }
        Ok(frame)
    }

    pub fn from_columns(columns: &[Vec<f64>]) -> Result<Self> {
        let m = columns.len();
        if m == 0 {
            return Err(Error::Empty);
        }
        let n = columns[0].len();
        if let Some(bad) = columns.iter().find(|c| c.len() != n) {
            return Err(Error::DimensionMismatch { expected: n, found: bad.len() });
        }
        Self::new(DMatrix::from_fn(n, m, |r, c| columns[c][r]))
    }

    /// Ambient dimension `N`.
    pub fn dim(&self) -> usize {
        self.vectors.nrows()
    }

    /// Number of vectors `M`.
    pub fn count(&self) -> usize {
        self.vectors.ncols()
    }

    pub fn vectors(&self) -> &DMatrix<f64> {
        &self.vectors
    }

    pub fn vector(&self, i: usize) -> DVector<f64> {
        self.vectors.column(i).into_owned()
    }

    /// Whether the vectors span `R^N`.
    pub fn spans(&self) -> bool {
        self.spans
    }

    pub fn squared_norms(&self) -> Vec<f64> {
        self.vectors.column_iter().map(|c| c.norm_squared()).collect()
    }

    pub(crate) fn warn_if_degenerate(&self, context: &str) {
        if !self.spans {
            warn!("{context}: the {} vectors do not span R^{}", self.count(), self.dim());
        }
    }
}

/// Nonnegative weights `u_i = s_i^2` applied to the rank-one terms `f_i f_i^T`.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalingVector {
    weights: Vec<f64>,
}

impl ScalingVector {
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        if weights.iter().any(|w| !w.is_finite() || *w < 0.0) {
            return Err(Error::InvalidScaling("weights must be finite and nonnegative".into()));
        }
        if !weights.iter().any(|w| *w > 0.0) {
            return Err(Error::InvalidScaling("at least one weight must be positive".into()));
        }
        Ok(Self { weights })
    }

    pub fn ones(m: usize) -> Self {
        Self { weights: vec![1.0; m] }
    }

    /// Weights `u_i` (squared scales).
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Scales `s_i = sqrt(u_i)`.
    pub fn scales(&self) -> Vec<f64> {
        self.weights.iter().map(|w| w.sqrt()).collect()
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// Multiplies every weight by `r > 0`.
    pub fn scaled(&self, r: f64) -> Result<Self> {
        Self::new(self.weights.iter().map(|w| w * r).collect())
    }
}

/// Spectral quantities of a (scaled) frame operator.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralSummary {
    /// Ascending eigenvalues.
    pub eigenvalues: Vec<f64>,
    /// Optimal lower frame bound.
    pub lambda_min: f64,
    /// Optimal upper frame bound.
    pub lambda_max: f64,
    pub condition_number: f64,
    pub gap: f64,
    /// Gap divided by the mean eigenvalue.
    pub relative_gap: f64,
    pub frobenius_dist: f64,
    pub opnorm_dist: f64,
    pub trace: f64,
}

pub fn frame_operator(frame: &Frame) -> SymMatrix {
    let f = frame.vectors();
    SymMatrix::new(f * f.transpose()).expect("finite Gram product")
}

pub fn scaled_frame_operator(frame: &Frame, scaling: &ScalingVector) -> Result<SymMatrix> {
    if scaling.len() != frame.count() {
        return Err(Error::DimensionMismatch { expected: frame.count(), found: scaling.len() });
    }
    Ok(weighted_gram(frame.vectors(), scaling.weights()))
}

/// `F diag(u) F^T` for any weights (no sign restriction).
pub(crate) fn weighted_gram(f: &DMatrix<f64>, u: &[f64]) -> SymMatrix {
    let mut scaled = f.clone();
    for (mut col, &w) in scaled.column_iter_mut().zip(u) {
        col *= w;
    }
    SymMatrix::new(scaled * f.transpose()).expect("finite weighted Gram product")
}

pub fn summarize(s: &SymMatrix) -> Result<SpectralSummary> {
    let eig = sym_eig(s);
    let tol = default_tolerance(s);
    let condition_number = condition_from_spectrum(&eig.eigenvalues, tol)?;
    let n = s.order() as f64;
    let lambda_min = eig.min();
    let lambda_max = eig.max();
    let gap = lambda_max - lambda_min;
    let trace = s.trace();
    let relative_gap = if gap == 0.0 {
        0.0
    } else if trace > 0.0 {
        gap / (trace / n)
    } else {
        f64::INFINITY
    };
    let opnorm_dist = eig.eigenvalues.iter().fold(0.0_f64, |acc, l| acc.max((1.0 - l).abs()));
    Ok(SpectralSummary {
        lambda_min,
        lambda_max,
        condition_number,
        gap,
        relative_gap,
        frobenius_dist: crate::spectral::distance_to_identity(s, MatrixNorm::Frobenius),
        opnorm_dist,
        trace,
        eigenvalues: eig.eigenvalues,
    })
}

/// Outcome of [`is_scalable`].
#[derive(Debug, Clone, PartialEq)]
pub struct ScalabilityVerdict {
    pub scalable: bool,
    /// The Parseval-producing weights when `scalable`.
    pub scaling: Option<ScalingVector>,
    /// Optimal `||I - S_u||_F` over `u >= 0`.
    pub frobenius_distance: f64,
}

/// A frame is scalable exactly when the Frobenius problem has optimal value 0.
pub fn is_scalable(frame: &Frame, tol: f64) -> Result<ScalabilityVerdict> {
    let report = solve_qp4(frame, &SolverOptions::default())?;
    let scalable = report.objective <= tol;
    Ok(ScalabilityVerdict {
        scalable,
        scaling: scalable.then(|| report.scaling.clone()),
        frobenius_distance: report.objective,
    })
}

/// Closed-form quantities for a unit-norm frame with
/// `(1 - eps) I <= S <= (1 + eps) I`.
#[derive(Debug, Clone, PartialEq)]
pub struct EpsilonTightDiagnostics {
    pub epsilon: f64,
    /// `1 + 2 eps / (1 - eps)`.
    pub kappa_formula: f64,
    /// `2 eps`.
    pub gap_formula: f64,
    /// `eps * sqrt(N)`, an upper bound on `||I - S||_F`.
    pub frob_bound: f64,
    pub kappa_measured: f64,
    pub gap_measured: f64,
    pub frob_measured: f64,
    /// Whether `lambda_max - 1 == 1 - lambda_min` (to 1e-9).
    pub symmetric_spectrum: bool,
    /// Measured kappa and gap agree with the formulas (only checked for a
    /// symmetric spectrum; vacuously true otherwise).
    pub formulas_hold: bool,
}

pub fn epsilon_tight_diagnostics(frame: &Frame) -> Result<EpsilonTightDiagnostics> {
    for (index, norm) in frame.squared_norms().into_iter().map(f64::sqrt).enumerate() {
        if (norm - 1.0).abs() > 1e-9 {
            return Err(Error::NotUnitNorm { index, norm });
        }
    }
    let summary = summarize(&frame_operator(frame))?;
    let lo = 1.0 - summary.lambda_min;
    let hi = summary.lambda_max - 1.0;
    let epsilon = lo.max(hi);
    let kappa_formula = if epsilon < 1.0 { 1.0 + 2.0 * epsilon / (1.0 - epsilon) } else { f64::INFINITY };
    let gap_formula = 2.0 * epsilon;
    let symmetric_spectrum = (hi - lo).abs() <= 1e-9;
    let formulas_hold = !symmetric_spectrum
        || ((summary.condition_number - kappa_formula).abs() <= 1e-9 * kappa_formula.max(1.0)
            && (summary.gap - gap_formula).abs() <= 1e-9);
    Ok(EpsilonTightDiagnostics {
        epsilon,
        kappa_formula,
        gap_formula,
        frob_bound: epsilon * (frame.dim() as f64).sqrt(),
        kappa_measured: summary.condition_number,
        gap_measured: summary.gap,
        frob_measured: summary.frobenius_dist,
        symmetric_spectrum,
        formulas_hold,
    })
}

/// Finds a vector orthogonal to the top eigenvector of the frame operator
/// but not to the bottom one. Requires a simple spectrum.
pub fn find_perturbation_candidate(frame: &Frame, tol: f64) -> Result<Option<usize>> {
    let s = frame_operator(frame);
    let eig = sym_eig(&s);
    let gap = min_eigengap(&s);
    if gap <= tol * eig.max().max(1.0) {
        return Err(Error::DegenerateSpectrum { gap });
    }
    let vmin = eig.eigenvector(0);
    let vmax = eig.eigenvector(frame.dim() - 1);
    Ok((0..frame.count()).find(|&k| satisfies_hypothesis(frame, k, &vmin, &vmax, tol)))
}

fn satisfies_hypothesis(frame: &Frame, k: usize, vmin: &DVector<f64>, vmax: &DVector<f64>, tol: f64) -> bool {
    let f = frame.vectors().column(k);
    let norm = f.norm();
    f.dot(vmax).abs() <= tol * norm && f.dot(vmin).abs() > tol * norm
}

/// Rescaling that boosts `f_k` by `sqrt(1 + gamma)` and renormalizes so the
/// scales sum to `M`. Returns the squared scales.
///
/// Requires `0 < gamma < delta / ||f_k||^2` (with `delta` the minimum
/// eigengap of the frame operator) and that `f_k` is orthogonal to the top
/// eigenvector but not to the bottom one. Under these conditions the largest
/// eigenvalue is untouched while the smallest strictly increases.
pub fn perturbation_rescale(frame: &Frame, k: usize, gamma: f64) -> Result<ScalingVector> {
    let m = frame.count();
    if k >= m {
        return Err(Error::OutOfRange(format!("index {k} out of {m} vectors")));
    }
    let s = frame_operator(frame);
    let eig = sym_eig(&s);
    let delta = min_eigengap(&s);
    if delta <= ORTHOGONALITY_TOLERANCE * eig.max().max(1.0) {
        return Err(Error::DegenerateSpectrum { gap: delta });
    }
    let fk_sq = frame.vectors().column(k).norm_squared();
    let bound = delta / fk_sq;
    if !(gamma > 0.0 && gamma < bound) {
        return Err(Error::OutOfRange(format!("gamma {gamma} outside (0, {bound})")));
    }
    let vmin = eig.eigenvector(0);
    let vmax = eig.eigenvector(frame.dim() - 1);
    if !satisfies_hypothesis(frame, k, &vmin, &vmax, ORTHOGONALITY_TOLERANCE) {
        return Err(Error::Hypothesis(format!(
            "vector {k} must be orthogonal to the top eigenvector and not to the bottom one"
        )));
    }
    let mf = m as f64;
    let boost = (1.0 + gamma).sqrt();
    let denom = mf - 1.0 + boost;
    let weights = (0..m)
        .map(|i| {
            let s = if i == k { mf * boost / denom } else { mf / denom };
            s * s
        })
        .collect();
    ScalingVector::new(weights)
}
