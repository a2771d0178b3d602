//! Dense symmetric eigenvalue primitives.
//!
//! Everything downstream consumes spectra through [`sym_eig`], a cyclic
//! Jacobi solver. Jacobi is slow for large orders but delivers eigenvalues
//! with small relative error and a numerically orthonormal basis, which is
//! what the conditioning problems here (orders below ~100) need.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

const MAX_SWEEPS: usize = 64;

/// Real symmetric matrix. Symmetry is exact: the input is replaced by
/// `(A + A^T) / 2` on construction.
#[derive(Debug, Clone, PartialEq)]
pub struct SymMatrix(DMatrix<f64>);

impl SymMatrix {
    pub fn new(m: DMatrix<f64>) -> Result<Self> {
        let (rows, cols) = m.shape();
        if rows == 0 || cols == 0 {
            return Err(Error::Empty);
        }
        if rows != cols {
            return Err(Error::NotSquare { rows, cols });
        }
        if m.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite);
        }
        let sym = (&m + m.transpose()) * 0.5;
        Ok(Self(sym))
    }

    pub fn from_row_slice(order: usize, entries: &[f64]) -> Result<Self> {
        if entries.len() != order * order {
            return Err(Error::DimensionMismatch { expected: order * order, found: entries.len() });
        }
        Self::new(DMatrix::from_row_slice(order, order, entries))
    }

    pub fn identity(order: usize) -> Self {
        assert!(order >= 1, "order must be positive");
        Self(DMatrix::identity(order, order))
    }

    pub fn zeros(order: usize) -> Self {
        assert!(order >= 1, "order must be positive");
        Self(DMatrix::zeros(order, order))
    }

    pub fn diagonal(values: &[f64]) -> Result<Self> {
        Self::new(DMatrix::from_diagonal(&DVector::from_column_slice(values)))
    }

    pub fn order(&self) -> usize {
        self.0.nrows()
    }

    pub fn as_matrix(&self) -> &DMatrix<f64> {
        &self.0
    }

    pub fn into_matrix(self) -> DMatrix<f64> {
        self.0
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.0[(i, j)]
    }

    pub fn trace(&self) -> f64 {
        self.0.trace()
    }

    pub fn scale(&self, c: f64) -> Self {
        Self(&self.0 * c)
    }

    pub fn add(&self, other: &SymMatrix) -> Result<Self> {
        if self.order() != other.order() {
            return Err(Error::DimensionMismatch { expected: self.order(), found: other.order() });
        }
        Ok(Self(&self.0 + &other.0))
    }

    /// Largest absolute eigenvalue.
    pub fn spectral_norm(&self) -> f64 {
        let eig = sym_eig(self);
        eig.eigenvalues.iter().fold(0.0_f64, |acc, l| acc.max(l.abs()))
    }
}

/// Eigenvalues in ascending order, with the matching orthonormal
/// eigenvectors stored as columns.
#[derive(Debug, Clone)]
pub struct EigenDecomposition {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: DMatrix<f64>,
}

impl EigenDecomposition {
    pub fn min(&self) -> f64 {
        self.eigenvalues[0]
    }

    pub fn max(&self) -> f64 {
        *self.eigenvalues.last().expect("non-empty spectrum")
    }

    pub fn eigenvector(&self, k: usize) -> DVector<f64> {
        self.eigenvectors.column(k).into_owned()
    }
}

/// Full eigendecomposition by cyclic Jacobi rotations.
pub fn sym_eig(a: &SymMatrix) -> EigenDecomposition {
    let n = a.order();
    let mut m = a.0.clone();
    let mut v = DMatrix::<f64>::identity(n, n);
    let norm = m.norm();

    for _ in 0..MAX_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| m[(i, j)] * m[(i, j)])
            .sum();
        if off.sqrt() <= f64::EPSILON * norm || off == 0.0 {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = m[(p, q)];
                if apq == 0.0 {
                    continue;
                }
                let theta = (m[(q, q)] - m[(p, p)]) / (2.0 * apq);
                let t = if theta.abs() > 1e150 {
                    0.5 / theta
                } else {
                    let sign = if theta >= 0.0 { 1.0 } else { -1.0 };
                    sign / (theta.abs() + (theta * theta + 1.0).sqrt())
                };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let mkp = m[(k, p)];
                    let mkq = m[(k, q)];
                    m[(k, p)] = c * mkp - s * mkq;
                    m[(k, q)] = s * mkp + c * mkq;
                }
                for k in 0..n {
                    let mpk = m[(p, k)];
                    let mqk = m[(q, k)];
                    m[(p, k)] = c * mpk - s * mqk;
                    m[(q, k)] = s * mpk + c * mqk;
                }
                m[(p, q)] = 0.0;
                m[(q, p)] = 0.0;
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = c * vkp - s * vkq;
                    v[(k, q)] = s * vkp + c * vkq;
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m[(i, i)].total_cmp(&m[(j, j)]).then(i.cmp(&j)));
    let eigenvalues = order.iter().map(|&i| m[(i, i)]).collect();
    let eigenvectors = DMatrix::from_fn(n, n, |r, c| v[(r, order[c])]);
    EigenDecomposition { eigenvalues, eigenvectors }
}

/// Scale-relative PSD tolerance `1e-9 * max(1, ||A||_2)`.
pub fn default_tolerance(a: &SymMatrix) -> f64 {
    1e-9 * a.spectral_norm().max(1.0)
}

/// Condition number extended to semidefinite matrices: `lambda_max / lambda_min`
/// when `lambda_min > tol`, `+inf` when only `lambda_min` vanishes, and `0`
/// for the zero matrix.
pub fn extended_condition_number(a: &SymMatrix, tol: f64) -> Result<f64> {
    let eig = sym_eig(a);
    condition_from_spectrum(&eig.eigenvalues, tol)
}

pub(crate) fn condition_from_spectrum(eigenvalues: &[f64], tol: f64) -> Result<f64> {
    let lmin = eigenvalues[0];
    let lmax = eigenvalues[eigenvalues.len() - 1];
    if lmin < -tol {
        return Err(Error::NotPsd { eigenvalue: lmin, tolerance: tol });
    }
    if lmax.abs().max(lmin.abs()) <= tol {
        Ok(0.0)
    } else if lmin <= tol {
        Ok(f64::INFINITY)
    } else {
        Ok(lmax / lmin)
    }
}

/// Norm used to measure `||I - A||`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MatrixNorm {
    Operator,
    Frobenius,
}

pub fn distance_to_identity(a: &SymMatrix, norm: MatrixNorm) -> f64 {
    match norm {
        MatrixNorm::Operator => sym_eig(a).eigenvalues.iter().fold(0.0_f64, |acc, l| acc.max((1.0 - l).abs())),
        MatrixNorm::Frobenius => {
            let n = a.order();
            (DMatrix::<f64>::identity(n, n) - &a.0).norm()
        }
    }
}

/// Smallest distance between two eigenvalues; `+inf` for a 1x1 matrix,
/// which has no pair to compare.
pub fn min_eigengap(a: &SymMatrix) -> f64 {
    let eig = sym_eig(a);
    eig.eigenvalues.windows(2).map(|w| (w[1] - w[0]).abs()).fold(f64::INFINITY, f64::min)
}
