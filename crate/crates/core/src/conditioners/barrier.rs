//! Log-barrier interior-point method for the small linear matrix inequality
//! problems behind the eigenvalue conditioners.
//!
//! Variables are the weights `u in R^M` (one per vector `g_i`) plus a few
//! auxiliary scalars `y` (the eigenvalue bounds). Each constraint block is
//!
//! ```text
//! F_k(u, y) = sign_k * sum_i u_i g_i g_i^T + (sum_j aux_kj y_j + offset_k) I  >= 0
//! ```
//!
//! together with `u > 0` and an optional equality `a^T u = b`. The objective
//! is linear in `y`. Each outer iteration minimizes `s * c^T y + phi(u, y)`
//! by damped Newton steps, where `phi` is the logarithmic barrier; `s` grows
//! geometrically until the duality-gap bound (about `m / s`) is below
//! tolerance. The
//! iterates follow the central path, so for problems with a face of optimal
//! solutions the limit is that face's analytic center.

use nalgebra::{Cholesky, DMatrix, DVector, Dyn};

/// Centering precision on the squared Newton decrement.
const CENTERING_TOLERANCE: f64 = 1e-12;
const BARRIER_GROWTH: f64 = 10.0;

#[derive(Debug, Clone)]
pub(crate) struct LmiBlock {
    pub sign: f64,
    pub aux: Vec<f64>,
    pub offset: f64,
}

#[derive(Debug, Clone)]
pub(crate) struct LmiProblem<'a> {
    /// `n x M`, column `i` is `g_i`.
    pub vectors: &'a DMatrix<f64>,
    pub blocks: Vec<LmiBlock>,
    /// Objective coefficients of the auxiliary variables.
    pub cost: Vec<f64>,
    pub equality: Option<(Vec<f64>, f64)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum BarrierStatus {
    Converged,
    IterationLimit,
    /// Newton steps can no longer make progress (numerical floor).
    Stalled,
}

#[derive(Debug, Clone)]
pub(crate) struct BarrierOutcome {
    pub u: Vec<f64>,
    pub status: BarrierStatus,
    pub newton_steps: usize,
    /// Duality-gap bound `(m + lambda sqrt(m)) / s` at the returned point,
    /// where `lambda` is the last Newton decrement.
    pub gap: f64,
}

struct Evaluation {
    gradient: DVector<f64>,
    hessian: DMatrix<f64>,
}

impl<'a> LmiProblem<'a> {
    fn weights(&self) -> usize {
        self.vectors.ncols()
    }

    fn dim(&self) -> usize {
        self.vectors.nrows()
    }

    /// Total barrier degree (sum of cone orders).
    fn degree(&self) -> f64 {
        (self.blocks.len() * self.dim() + self.weights()) as f64
    }

    fn block_matrix(&self, block: &LmiBlock, u: &[f64], y: &[f64]) -> DMatrix<f64> {
        let g = self.vectors;
        let mut scaled = g.clone();
        for (mut col, &w) in scaled.column_iter_mut().zip(u) {
            col *= w * block.sign;
        }
        let mut f = scaled * g.transpose();
        let shift: f64 = block.aux.iter().zip(y).map(|(a, v)| a * v).sum::<f64>() + block.offset;
        for i in 0..self.dim() {
            f[(i, i)] += shift;
        }
        f
    }

    /// Strict feasibility test; returns the Cholesky factors of every block.
    fn factor(&self, u: &[f64], y: &[f64]) -> Option<Vec<Cholesky<f64, Dyn>>> {
        if u.iter().any(|&w| w <= 0.0) {
            return None;
        }
        self.blocks
            .iter()
            .map(|b| {
                let f = self.block_matrix(b, u, y);
                let chol = Cholesky::new(f)?;
                let l = chol.l_dirty();
                (0..self.dim()).all(|i| l[(i, i)] > 0.0 && l[(i, i)].is_finite()).then_some(chol)
            })
            .collect()
    }

    /// Gradient and Hessian of the barrier `phi` (without the linear term).
    fn evaluate(&self, u: &[f64], factors: &[Cholesky<f64, Dyn>]) -> Evaluation {
        let m = self.weights();
        let p = self.cost.len();
        let nvar = m + p;
        let g = self.vectors;
        let mut gradient = DVector::zeros(nvar);
        let mut hessian = DMatrix::zeros(nvar, nvar);

        for (block, chol) in self.blocks.iter().zip(factors) {
            let w = chol.inverse();
            let wg = &w * g;
            let k = g.transpose() * &wg;
            let tr_w = w.trace();
            let tr_w2 = w.norm_squared();
            for i in 0..m {
                gradient[i] -= block.sign * k[(i, i)];
                for l in 0..m {
                    hessian[(i, l)] += k[(i, l)] * k[(i, l)];
                }
                let wg_sq = wg.column(i).norm_squared();
                for (j, a) in block.aux.iter().enumerate() {
                    if *a != 0.0 {
                        let v = block.sign * a * wg_sq;
                        hessian[(i, m + j)] += v;
                        hessian[(m + j, i)] += v;
                    }
                }
            }
            for (j, aj) in block.aux.iter().enumerate() {
                gradient[m + j] -= aj * tr_w;
                for (l, al) in block.aux.iter().enumerate() {
                    hessian[(m + j, m + l)] += aj * al * tr_w2;
                }
            }
        }
        for i in 0..m {
            gradient[i] -= 1.0 / u[i];
            hessian[(i, i)] += 1.0 / (u[i] * u[i]);
        }
        Evaluation { gradient, hessian }
    }
}

/// Solves `H x = r` through a Jacobi-equilibrated Cholesky factorization,
/// adding a small ridge if the scaled matrix is numerically indefinite.
fn solve_spd(h: &DMatrix<f64>, rhs: &DMatrix<f64>) -> Option<DMatrix<f64>> {
    let n = h.nrows();
    let d: Vec<f64> = (0..n).map(|i| 1.0 / h[(i, i)].abs().max(f64::MIN_POSITIVE).sqrt()).collect();
    let mut scaled = DMatrix::from_fn(n, n, |i, j| h[(i, j)] * d[i] * d[j]);
    let scaled_rhs = DMatrix::from_fn(rhs.nrows(), rhs.ncols(), |i, j| rhs[(i, j)] * d[i]);
    let mut ridge = 0.0;
    for _ in 0..8 {
        if let Some(chol) = Cholesky::new(scaled.clone()) {
            let z = chol.solve(&scaled_rhs);
            return Some(DMatrix::from_fn(z.nrows(), z.ncols(), |i, j| z[(i, j)] * d[i]));
        }
        ridge = if ridge == 0.0 { 1e-14 } else { ridge * 100.0 };
        for i in 0..n {
            scaled[(i, i)] = 1.0 + ridge;
        }
    }
    None
}

/// Runs the barrier method from a strictly feasible `(u0, y0)`.
pub(crate) fn solve(
    problem: &LmiProblem<'_>,
    u0: Vec<f64>,
    y0: Vec<f64>,
    gap_tolerance: impl Fn(f64) -> f64,
    max_newton_steps: usize,
) -> BarrierOutcome {
    let m = problem.weights();
    let p = problem.cost.len();
    let degree = problem.degree();
    let mut u = u0;
    let mut y = y0;
    assert!(problem.factor(&u, &y).is_some(), "starting point must be strictly feasible");

    let cost = DVector::from_iterator(m + p, std::iter::repeat_n(0.0, m).chain(problem.cost.iter().copied()));
    let eq = problem
        .equality
        .as_ref()
        .map(|(a, _)| DVector::from_iterator(m + p, a.iter().copied().chain(std::iter::repeat_n(0.0, p))));

    let mut s = 1.0;
    let mut steps = 0;
    let mut decrement = f64::INFINITY;
    let gap_bound = |s: f64, decrement: f64| (degree + decrement * degree.sqrt()) / s;
    let objective = |y: &[f64]| problem.cost.iter().zip(y).map(|(c, v)| c * v).sum::<f64>();

    loop {
        // centering
        let mut stalled = false;
        loop {
            if steps >= max_newton_steps {
                return BarrierOutcome {
                    u,
                    status: BarrierStatus::IterationLimit,
                    newton_steps: steps,
                    gap: gap_bound(s, decrement),
                };
            }
            let factors = problem.factor(&u, &y).expect("iterates stay strictly feasible");
            let Evaluation { gradient, hessian } = problem.evaluate(&u, &factors);
            let grad = &cost * s + gradient;

            let mut rhs = DMatrix::zeros(m + p, if eq.is_some() { 2 } else { 1 });
            rhs.set_column(0, &(-&grad));
            if let Some(a) = &eq {
                rhs.set_column(1, a);
            }
            let Some(sol) = solve_spd(&hessian, &rhs) else {
                stalled = true;
                break;
            };
            let mut dx: DVector<f64> = sol.column(0).into_owned();
            if let (Some(a), Some((_, b))) = (&eq, &problem.equality) {
                // the step also removes any drift in a^T u = b
                let residual = b - a.rows(0, m).dot(&DVector::from_column_slice(&u));
                let h_inv_a = sol.column(1);
                let nu = (a.dot(&dx) - residual) / a.dot(&h_inv_a);
                dx -= h_inv_a * nu;
            }
            // roundoff can push an already-centered decrement slightly negative
            let decrement_sq = (-grad.dot(&dx)).max(0.0);
            steps += 1;

            if !decrement_sq.is_finite() {
                stalled = true;
                break;
            }
            decrement = decrement_sq.sqrt();
            if decrement_sq / 2.0 <= CENTERING_TOLERANCE {
                break;
            }
            let mut alpha = if decrement < 0.25 { 1.0 } else { 1.0 / (1.0 + decrement) };
            let mut moved = false;
            for _ in 0..60 {
                let nu: Vec<f64> = (0..m).map(|i| u[i] + alpha * dx[i]).collect();
                let ny: Vec<f64> = (0..p).map(|j| y[j] + alpha * dx[m + j]).collect();
                if problem.factor(&nu, &ny).is_some() {
                    if nu == u && ny == y {
                        break;
                    }
                    u = nu;
                    y = ny;
                    moved = true;
                    break;
                }
                alpha *= 0.5;
            }
            if !moved {
                stalled = true;
                break;
            }
        }

        let gap = gap_bound(s, decrement);
        let obj = objective(&y);
        if gap <= gap_tolerance(obj) {
            return BarrierOutcome { u, status: BarrierStatus::Converged, newton_steps: steps, gap };
        }
        if stalled {
            return BarrierOutcome { u, status: BarrierStatus::Stalled, newton_steps: steps, gap };
        }
        s *= BARRIER_GROWTH;
    }
}
