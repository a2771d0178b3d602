use super::*;
use crate::frames::Frame;
use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn example_x() -> Frame {
    Frame::new(DMatrix::from_row_slice(
        3,
        5,
        &[
            2., 4., 1., 4., 4., //
            3., 1., 2., 0., 2., //
            1., 4., 3., 5., 2.,
        ],
    ))
    .unwrap()
}

fn diagonal_pair() -> Frame {
    Frame::from_columns(&[vec![1.0, 0.0], vec![0.0, 2.0]]).unwrap()
}

fn random_scalable(rng: &mut ChaCha8Rng, n: usize, m: usize) -> Frame {
    let a = DMatrix::from_fn(m, n, |_, _| rng.random_range(-1.0..1.0));
    let q = a.qr().q();
    let parseval = q.transpose();
    let mut f = parseval.clone();
    for mut col in f.column_iter_mut() {
        col /= rng.random_range(0.3..3.0);
    }
    Frame::new(f).unwrap()
}

fn assert_weights(report: &SolverReport, expected: &[f64], tol: f64) {
    for (got, want) in report.scaling.weights().iter().zip(expected) {
        assert!((got - want).abs() < tol, "{:?} vs {expected:?}", report.scaling.weights());
    }
}

#[test]
fn orthonormal_basis_is_fixed_point() {
    let basis = Frame::new(DMatrix::identity(3, 3)).unwrap();
    let opts = SolverOptions::default();
    let r1 = solve_sdp1(&basis, &opts).unwrap();
    assert_eq!(r1.status, SolverStatus::Optimal);
    assert!(r1.objective < 1e-8);
    assert_weights(&r1, &[1.0; 3], 1e-7);

    let r2 = solve_sdp2(&basis, &opts).unwrap();
    assert!((r2.objective - 1.0).abs() < 1e-8);
    assert_weights(&r2, &[1.0; 3], 1e-7);

    let r3 = solve_sdp3(&basis, &opts).unwrap();
    assert!(r3.objective < 1e-8);
    assert_weights(&r3, &[1.0; 3], 1e-7);

    let r4 = solve_qp4(&basis, &opts).unwrap();
    assert!(r4.objective < 1e-12);
    assert_weights(&r4, &[1.0; 3], 1e-12);
}

#[test]
fn diagonal_pair_has_exact_tight_scaling() {
    let f = diagonal_pair();
    let opts = SolverOptions::default();
    for report in [solve_sdp1(&f, &opts), solve_sdp2(&f, &opts), solve_sdp3(&f, &opts), solve_qp4(&f, &opts)] {
        let report = report.unwrap();
        assert_eq!(report.status, SolverStatus::Optimal, "{:?}", report.method);
        assert_weights(&report, &[1.0, 0.25], 1e-6);
        assert!((report.after.condition_number - 1.0).abs() < 1e-7);
    }
}

#[test]
fn example_frame_matches_published_optima() {
    let x = example_x();
    let opts = SolverOptions::default();

    let r1 = solve_sdp1(&x, &opts).unwrap();
    assert_eq!(r1.status, SolverStatus::Optimal);
    assert!((r1.objective - 0.8284).abs() < 1e-2, "{}", r1.objective);
    assert!((r1.after.condition_number - 10.655).abs() < 0.05);
    let lo = 1.0 - r1.after.lambda_min;
    let hi = r1.after.lambda_max - 1.0;
    assert!((hi - lo).abs() <= 10.0 * opts.objective_tolerance);

    let r2 = solve_sdp2(&x, &opts).unwrap();
    assert!((r2.objective - 10.655).abs() < 0.05);
    assert!(r2.after.lambda_min >= 1.0 - opts.feasibility_tolerance);

    let r3 = solve_sdp3(&x, &opts).unwrap();
    assert!((r3.after.relative_gap - 2.2701).abs() < 1e-2);
    assert!((r3.after.lambda_min - 0.0856).abs() < 1e-2);
    assert!((r3.after.lambda_max - 2.3558).abs() < 1e-2);
    assert!((r3.after.trace - 3.0).abs() < 1e-8);

    let r4 = solve_qp4(&x, &opts).unwrap();
    assert!((r4.objective - 1.2048).abs() < 1e-2);
    assert_eq!(r4.scaling.weights()[1], 0.0);
    assert_eq!(r4.scaling.weights()[4], 0.0);
}

#[test]
fn normalization_forms() {
    let f = Frame::from_columns(&[vec![2f64.sqrt(), 0.0], vec![0.0, 6f64.sqrt()]]).unwrap();
    let u = ScalingVector::ones(2);
    let op = normalize_scaling(&u, &f, ScalingForm::OperatorNorm).unwrap();
    let s = summarize(&scaled_frame_operator(&f, &op).unwrap()).unwrap();
    assert!((s.lambda_min - 0.5).abs() < 1e-12 && (s.lambda_max - 1.5).abs() < 1e-12);
    let lb = normalize_scaling(&u, &f, ScalingForm::UnitLowerBound).unwrap();
    let s = summarize(&scaled_frame_operator(&f, &lb).unwrap()).unwrap();
    assert!((s.lambda_min - 1.0).abs() < 1e-12 && (s.lambda_max - 3.0).abs() < 1e-12);

    let basis = Frame::new(DMatrix::identity(2, 2)).unwrap();
    assert_eq!(normalize_scaling(&u, &basis, ScalingForm::OperatorNorm).unwrap(), u);
    assert_eq!(normalize_scaling(&u, &basis, ScalingForm::UnitLowerBound).unwrap(), u);

    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let f = Frame::new(DMatrix::from_fn(3, 6, |_, _| rng.random_range(-1.0..1.0))).unwrap();
    let u = ScalingVector::new((0..6).map(|_| rng.random_range(0.1..2.0)).collect()).unwrap();
    let k0 = summarize(&scaled_frame_operator(&f, &u).unwrap()).unwrap().condition_number;
    for form in [ScalingForm::OperatorNorm, ScalingForm::UnitLowerBound] {
        let v = normalize_scaling(&u, &f, form).unwrap();
        let k = summarize(&scaled_frame_operator(&f, &v).unwrap()).unwrap().condition_number;
        assert!((k - k0).abs() <= 1e-10 * k0);
    }

    let line = Frame::from_columns(&[vec![1.0, 1.0], vec![2.0, 2.0]]).unwrap();
    assert!(matches!(
        normalize_scaling(&ScalingVector::ones(2), &line, ScalingForm::UnitLowerBound),
        Err(Error::Singular { .. })
    ));
}

#[test]
fn frobenius_expansion_matches_direct_norm() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..50 {
        let n = rng.random_range(2..6);
        let m = rng.random_range(n..3 * n);
        let f = Frame::new(DMatrix::from_fn(n, m, |_, _| rng.random_range(-2.0..2.0))).unwrap();
        let u: Vec<f64> = (0..m).map(|_| rng.random_range(0.0..2.0)).collect();
        let direct = crate::frames::weighted_gram(f.vectors(), &u);
        let direct = (DMatrix::<f64>::identity(n, n) - direct.as_matrix()).norm_squared();
        let expanded = frobenius_objective_expansion(&f, &u);
        assert!((direct - expanded).abs() <= 1e-8 * direct.max(1.0));
    }
}

/// Exact minimum of `||I - S_u||_F` over the grid `{0, h, ..., 2}^3`.
///
/// For fixed `(u1, u2)` the squared objective is a quadratic in `u3`, so the
/// best grid value of `u3` is one of the two grid points bracketing the
/// clamped vertex.
fn qp_grid_oracle(f: &Frame, h: f64) -> f64 {
    let steps = (2.0 / h).round() as usize;
    let (q, c) = gram_system(f);
    let n = f.dim() as f64;
    let obj = |u: [f64; 3]| {
        let mut v = n;
        for i in 0..3 {
            v -= 2.0 * c[i] * u[i];
            for j in 0..3 {
                v += q[(i, j)] * u[i] * u[j];
            }
        }
        v
    };
    let mut best = f64::INFINITY;
    for a in 0..=steps {
        for b in 0..=steps {
            let (u1, u2) = (a as f64 * h, b as f64 * h);
            // d/du3 = 2 q33 u3 + 2 (q13 u1 + q23 u2 - c3)
            let vertex = (c[2] - q[(0, 2)] * u1 - q[(1, 2)] * u2) / q[(2, 2)];
            let k = (vertex / h).floor().clamp(0.0, steps as f64) as usize;
            for kk in [k, (k + 1).min(steps)] {
                best = best.min(obj([u1, u2, kk as f64 * h]));
            }
        }
    }
    best.max(0.0).sqrt()
}

#[test]
fn qp4_matches_grid_search() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for _ in 0..3 {
        let cols: Vec<Vec<f64>> = (0..3)
            .map(|_| {
                let angle: f64 = rng.random_range(0.0..std::f64::consts::PI);
                let r = rng.random_range(1.1..1.5);
                vec![r * angle.cos(), r * angle.sin()]
            })
            .collect();
        let f = Frame::from_columns(&cols).unwrap();
        let report = solve_qp4(&f, &SolverOptions::default()).unwrap();
        let oracle = qp_grid_oracle(&f, 1e-3);
        assert!(report.objective <= oracle + 1e-12);
        assert!((report.objective - oracle).abs() < 2e-3, "{} vs {oracle}", report.objective);
    }
}

#[test]
fn scalable_frames_reach_ideal_objectives() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    let opts = SolverOptions::default();
    for _ in 0..5 {
        let n = rng.random_range(3..5);
        let m = rng.random_range(n..=2 * n);
        let f = random_scalable(&mut rng, n, m);
        assert!(solve_sdp1(&f, &opts).unwrap().objective <= 1e-4);
        let r2 = solve_sdp2(&f, &opts).unwrap().objective;
        assert!((1.0..=1.0 + 1e-4).contains(&r2), "{r2}");
        assert!(solve_sdp3(&f, &opts).unwrap().objective <= 1e-4);
        assert!(solve_qp4(&f, &opts).unwrap().objective <= 1e-4);
    }
}

#[test]
fn sdp1_and_sdp2_agree_on_condition_number() {
    let mut rng = ChaCha8Rng::seed_from_u64(29);
    let opts = SolverOptions::default();
    for _ in 0..8 {
        let n = rng.random_range(3..7);
        let m = rng.random_range(n..=3 * n);
        let f = Frame::new(DMatrix::from_fn(n, m, |_, _| rng.random_range(-1.0..1.0))).unwrap();
        let r1 = solve_sdp1(&f, &opts).unwrap();
        let r2 = solve_sdp2(&f, &opts).unwrap();
        assert_eq!(r1.status, SolverStatus::Optimal);
        assert_eq!(r2.status, SolverStatus::Optimal);
        let k1 = r1.after.condition_number;
        assert!((k1 - r2.objective).abs() <= 10.0 * opts.objective_tolerance * k1, "{k1} vs {}", r2.objective);
        assert!(k1 <= r1.before.condition_number + 10.0 * opts.objective_tolerance);
    }
}

#[test]
fn rank_deficient_inputs() {
    let line = Frame::from_columns(&[vec![1.0, 1.0], vec![2.0, 2.0]]).unwrap();
    let opts = SolverOptions::default();
    let r2 = solve_sdp2(&line, &opts).unwrap();
    assert_eq!(r2.status, SolverStatus::Infeasible);
    let r4 = solve_qp4(&line, &opts).unwrap();
    assert_eq!(r4.status, SolverStatus::Optimal);
    // best is to make S_u = diag-free rank one with eigenvalue 1
    assert!((r4.objective - 1.0).abs() < 1e-10);
    let r1 = solve_sdp1(&line, &opts).unwrap();
    assert!((r1.objective - 1.0).abs() < 1e-6);
}

#[test]
fn solvers_are_deterministic() {
    let x = example_x();
    let opts = SolverOptions::default();
    for method in [Method::Sdp1, Method::Sdp2, Method::Sdp3, Method::Qp4] {
        assert_eq!(solve(&x, method, &opts).unwrap(), solve(&x, method, &opts).unwrap());
    }
}

#[test]
fn option_validation() {
    let x = example_x();
    let bad = SolverOptions { max_iterations: 0, ..Default::default() };
    assert!(solve_sdp1(&x, &bad).is_err());
    let bad = SolverOptions { objective_tolerance: 0.0, ..Default::default() };
    assert!(solve_qp4(&x, &bad).is_err());
    assert_eq!("SDP3".parse::<Method>().unwrap(), Method::Sdp3);
    assert!("sdp5".parse::<Method>().is_err());
}

#[test]
fn iteration_limit_is_reported() {
    let x = example_x();
    let opts = SolverOptions { max_iterations: 3, ..Default::default() };
    let r = solve_sdp2(&x, &opts).unwrap();
    assert_eq!(r.status, SolverStatus::MaxIter);
    assert!(r.iterations <= 3);
}
