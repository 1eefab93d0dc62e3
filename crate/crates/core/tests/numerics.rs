//! Least squares, t/F statistics and the Student distribution checked
//! against independent implementations.

mod oracle;

use nalgebra::DMatrix;
use posthoc::model::student::{cdf, two_sided_tail, upper_tail};
use posthoc::model::{f_statistics, fit, p_values, t_statistics};
use posthoc::rng::child_rng;
use posthoc::{Dataset, Sidedness};
use rand::Rng;
use rand_distr::StandardNormal;

use oracle::student_table::{STUDENT_CDF_TABLE, STUDENT_UPPER_TAIL_TABLE};

fn random_matrix(rows: usize, cols: usize, seed: u64) -> DMatrix<f64> {
    let mut rng = child_rng(seed, 0);
    DMatrix::from_fn(rows, cols, |_, _| rng.sample::<f64, _>(StandardNormal))
}

fn with_intercept(rows: usize, cols: usize, seed: u64) -> DMatrix<f64> {
    let mut x = random_matrix(rows, cols, seed);
    x.column_mut(0).fill(1.0);
    x
}

#[test]
fn ols_matches_normal_equations() {
    for seed in 0..20 {
        let (n, p, v) = (30 + seed as usize, 4, 7);
        let x = with_intercept(n, p, seed);
        let y = random_matrix(n, v, 1000 + seed);
        let c = DMatrix::from_row_slice(2, p, &[0.0, 1.0, -1.0, 0.0, 0.0, 0.0, 1.0, 2.0]);
        let ds = Dataset::new(x.clone(), y.clone(), c).unwrap();
        let model = fit(&ds).unwrap();

        let beta = oracle::normal_equations(&x, &y);
        for (a, b) in model.beta_hat.iter().zip(beta.iter()) {
            assert!((a - b).abs() <= 1e-10, "seed {seed}: {a} vs {b}");
        }
        let dof = (n - p) as f64;
        for col in 0..v {
            let rss: f64 = (0..n)
                .map(|i| {
                    let fitted: f64 = (0..p).map(|j| x[(i, j)] * beta[(j, col)]).sum();
                    (y[(i, col)] - fitted).powi(2)
                })
                .sum();
            assert!((model.sigma_hat[col] - (rss / dof).sqrt()).abs() <= 1e-10);
        }
    }
}

#[test]
fn two_sample_t_matches_pooled_formula() {
    let (n1, n2) = (9, 14);
    let n = n1 + n2;
    let y = random_matrix(n, 5, 77);
    let x = DMatrix::from_fn(n, 2, |i, j| if j == 0 { 1.0 } else { (i >= n1) as u8 as f64 });
    let c = DMatrix::from_row_slice(1, 2, &[0.0, 1.0]);
    let ds = Dataset::new(x, y.clone(), c).unwrap();
    let model = fit(&ds).unwrap();
    let t = t_statistics(&model, &ds, None).unwrap();
    let p = p_values(&t, Sidedness::TwoSided).unwrap();
    for v in 0..5 {
        let g1: Vec<f64> = (0..n1).map(|i| y[(i, v)]).collect();
        let g2: Vec<f64> = (n1..n).map(|i| y[(i, v)]).collect();
        let expected = oracle::pooled_two_sample_t(&g1, &g2);
        assert!((t.get(0, v) - expected).abs() < 1e-10);
        let expected_p = 2.0 * oracle::student_upper_tail_series(expected.abs(), (n - 2) as u32);
        assert!((p.get(0, v) - expected_p).abs() < 1e-12);
    }
}

#[test]
fn f_matches_quadratic_form() {
    let (n, p) = (40, 4);
    let x = with_intercept(n, p, 5);
    let y = random_matrix(n, 6, 6);
    let c = DMatrix::from_row_slice(2, p, &[0.0, 1.0, 0.0, 0.0, 0.0, 1.0, -1.0, 0.5]);
    let ds = Dataset::new(x.clone(), y.clone(), c.clone()).unwrap();
    let model = fit(&ds).unwrap();
    let f = f_statistics(&model, &ds).unwrap();

    let beta = oracle::normal_equations(&x, &y);
    let gram_inv = oracle::invert(&(x.transpose() * &x));
    let middle = oracle::invert(&(&c * &gram_inv * c.transpose()));
    for (v, &fv) in f.iter().enumerate() {
        let cb = &c * beta.column(v);
        let fitted = &x * beta.column(v);
        let rss = (y.column(v) - fitted).norm_squared();
        let sigma2 = rss / (n - p) as f64;
        let expected = (cb.transpose() * &middle * &cb)[(0, 0)] / (2.0 * sigma2);
        assert!((fv - expected).abs() < 1e-9 * expected.max(1.0), "{fv} vs {expected}");
    }
}

#[test]
fn statistics_invariant_to_response_scale_and_contrast_scale() {
    let x = with_intercept(25, 3, 8);
    let y = random_matrix(25, 4, 9);
    let c = DMatrix::from_row_slice(1, 3, &[0.0, 1.0, -1.0]);
    let base = {
        let ds = Dataset::new(x.clone(), y.clone(), c.clone()).unwrap();
        t_statistics(&fit(&ds).unwrap(), &ds, None).unwrap()
    };
    for &(ys, cs) in &[(3.5, 1.0), (1.0, 7.0), (0.01, -2.0)] {
        let ds = Dataset::new(x.clone(), &y * ys, &c * cs).unwrap();
        let t = t_statistics(&fit(&ds).unwrap(), &ds, None).unwrap();
        let sign = if cs < 0.0 { -1.0 } else { 1.0 };
        for (a, b) in t.values().iter().zip(base.values()) {
            assert!((a - sign * b).abs() < 1e-10 * b.abs().max(1.0));
        }
    }
}

#[test]
fn student_cdf_matches_integer_dof_series() {
    for &d in &[1u32, 2, 3, 5, 8, 30, 200] {
        for i in 0..60 {
            let t = -9.0 + 18.0 * i as f64 / 59.0;
            let expected = oracle::student_cdf_series(t, d);
            let got = cdf(t, d as f64);
            assert!((got - expected).abs() <= 1e-12, "dof {d}, t {t}: {got} vs {expected}");
        }
    }
}

#[test]
fn student_cdf_matches_high_precision_table() {
    assert_eq!(STUDENT_CDF_TABLE.len(), 200);
    for &(d, t, expected) in STUDENT_CDF_TABLE {
        assert!((cdf(t, d) - expected).abs() <= 1e-10, "dof {d}, t {t}");
    }
    for &(d, t, expected) in STUDENT_UPPER_TAIL_TABLE {
        let got = upper_tail(t, d);
        assert!((got / expected - 1.0).abs() < 1e-9, "dof {d}, t {t}: {got} vs {expected}");
    }
}

fn normal_cdf(x: f64) -> f64 {
    0.5 * libm::erfc(-x / std::f64::consts::SQRT_2)
}

#[test]
fn student_reference_points() {
    assert!((cdf(1.0, 1.0) - 0.75).abs() <= 1e-12);
    assert!((two_sided_tail(2.228139, 10.0) - 0.05).abs() <= 1e-6);
    for &x in &[0.0, 1.0, 2.0] {
        assert!((cdf(x, 1e6) - normal_cdf(x)).abs() <= 1e-4, "x = {x}");
    }
}
