//! Active-set nonnegative least squares on the normal equations
//! (Lawson-Hanson, in the Bro-de Jong form that never forms the tall
//! design matrix).
//!
//! Minimizes `1/2 u^T Q u - c^T u` over `u >= 0` for a symmetric positive
//! semidefinite `Q`, which is `min ||G u - b||^2 / 2` with `Q = G^T G` and
//! `c = G^T b`.

use nalgebra::{Cholesky, DMatrix, DVector};

#[derive(Debug, Clone)]
pub(crate) struct NnlsSolution {
    pub x: DVector<f64>,
    /// Negative gradient `c - Q x` at the solution.
    pub dual: DVector<f64>,
    pub iterations: usize,
    pub converged: bool,
}

fn solve_passive(q: &DMatrix<f64>, c: &DVector<f64>, passive: &[usize]) -> DVector<f64> {
    let k = passive.len();
    let sub = DMatrix::from_fn(k, k, |i, j| q[(passive[i], passive[j])]);
    let rhs = DVector::from_fn(k, |i, _| c[passive[i]]);
    match Cholesky::new(sub.clone()) {
        Some(chol) => chol.solve(&rhs),
        // rank-deficient passive block: minimum-norm solution
        None => {
            let eps = 1e-13 * sub.amax().max(f64::MIN_POSITIVE);
            sub.svd(true, true).solve(&rhs, eps).expect("svd with both factors")
        }
    }
}

pub(crate) fn nnls(q: &DMatrix<f64>, c: &DVector<f64>, max_iterations: usize) -> NnlsSolution {
    let n = c.len();
    let scale = c.amax().max(q.amax().sqrt()).max(f64::MIN_POSITIVE);
    let tol = 1e-12 * scale * n as f64;

    let mut x = DVector::zeros(n);
    let mut passive = vec![false; n];
    let mut w = c - q * &x;
    let mut iterations = 0;
    let mut converged = false;

    while iterations < max_iterations {
        let candidate = (0..n).filter(|&j| !passive[j]).max_by(|&a, &b| w[a].total_cmp(&w[b]).then(b.cmp(&a)));
        match candidate {
            Some(j) if w[j] > tol => passive[j] = true,
            _ => {
                converged = true;
                break;
            }
        }

        loop {
            iterations += 1;
            let idx: Vec<usize> = (0..n).filter(|&j| passive[j]).collect();
            let z_p = solve_passive(q, c, &idx);
            let mut z = DVector::zeros(n);
            for (k, &j) in idx.iter().enumerate() {
                z[j] = z_p[k];
            }
            if idx.iter().all(|&j| z[j] > 0.0) {
                x = z;
                break;
            }
            let alpha =
                idx.iter().filter(|&&j| z[j] <= 0.0).map(|&j| x[j] / (x[j] - z[j])).fold(f64::INFINITY, f64::min);
            x += (&z - &x) * alpha;
            for &j in &idx {
                if x[j] <= tol * 1e-3 || (z[j] <= 0.0 && x[j] <= f64::EPSILON * scale) {
                    x[j] = 0.0;
                    passive[j] = false;
                }
            }
            if iterations >= max_iterations {
                break;
            }
        }
        w = c - q * &x;
    }

    NnlsSolution { dual: w, x, iterations, converged }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unconstrained_optimum_inside_orthant() {
        let q = DMatrix::from_row_slice(2, 2, &[2.0, 0.5, 0.5, 1.0]);
        let c = DVector::from_row_slice(&[1.0, 1.0]);
        let sol = nnls(&q, &c, 100);
        let exact = q.clone().lu().solve(&c).unwrap();
        assert!(sol.converged);
        assert!((sol.x - exact).norm() < 1e-14);
    }

    #[test]
    fn clamps_negative_directions() {
        // unconstrained optimum (2, -1) -> constrained (c0/q00, 0)
        let q = DMatrix::from_row_slice(2, 2, &[1.0, 1.0, 1.0, 2.0]);
        let c = DVector::from_row_slice(&[1.0, 0.0]);
        let sol = nnls(&q, &c, 100);
        assert_eq!(sol.x[1], 0.0);
        assert!((sol.x[0] - 1.0).abs() < 1e-14);
        assert!(sol.dual[1] <= 1e-14);
    }

    #[test]
    fn all_directions_ascending() {
        let q = DMatrix::identity(3, 3);
        let c = DVector::from_row_slice(&[-1.0, -2.0, -0.5]);
        let sol = nnls(&q, &c, 100);
        assert!(sol.converged);
        assert_eq!(sol.x, DVector::zeros(3));
    }
}
