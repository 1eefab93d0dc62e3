//! Independent reference implementations used by the integration tests.
#![allow(dead_code)]

pub mod student_table;

use nalgebra::DMatrix;

/// Gauss-Jordan inverse with partial pivoting.
pub fn invert(a: &DMatrix<f64>) -> DMatrix<f64> {
    let n = a.nrows();
    let mut aug = DMatrix::zeros(n, 2 * n);
    for i in 0..n {
        for j in 0..n {
            aug[(i, j)] = a[(i, j)];
        }
        aug[(i, n + i)] = 1.0;
    }
    for col in 0..n {
        let pivot = (col..n).max_by(|&r, &s| aug[(r, col)].abs().total_cmp(&aug[(s, col)].abs())).unwrap();
        aug.swap_rows(col, pivot);
        let d = aug[(col, col)];
        for j in 0..2 * n {
            aug[(col, j)] /= d;
        }
        for r in 0..n {
            if r != col {
                let f = aug[(r, col)];
                for j in 0..2 * n {
                    aug[(r, j)] -= f * aug[(col, j)];
                }
            }
        }
    }
    aug.columns(n, n).into_owned()
}

/// `(X^T X)^{-1} X^T Y`.
pub fn normal_equations(x: &DMatrix<f64>, y: &DMatrix<f64>) -> DMatrix<f64> {
    invert(&(x.transpose() * x)) * (x.transpose() * y)
}

pub fn pooled_two_sample_t(g1: &[f64], g2: &[f64]) -> f64 {
    let mean = |g: &[f64]| g.iter().sum::<f64>() / g.len() as f64;
    let ss = |g: &[f64], m: f64| g.iter().map(|v| (v - m).powi(2)).sum::<f64>();
    let (m1, m2) = (mean(g1), mean(g2));
    let (n1, n2) = (g1.len() as f64, g2.len() as f64);
    let s2 = (ss(g1, m1) + ss(g2, m2)) / (n1 + n2 - 2.0);
    (m2 - m1) / (s2 * (1.0 / n1 + 1.0 / n2)).sqrt()
}

/// `P(|T| <= t)` for integer dof by the classical finite trigonometric
/// series in `theta = atan(t / sqrt(d))`.
fn central_probability(t: f64, d: u32) -> f64 {
    let theta = (t / (d as f64).sqrt()).atan();
    let (s, c) = theta.sin_cos();
    if d % 2 == 1 {
        let mut sum = 0.0;
        if d > 1 {
            let mut term = c;
            sum = term;
            let mut k = 3;
            while k <= d - 2 {
                term *= (k - 1) as f64 / k as f64 * c * c;
                sum += term;
                k += 2;
            }
        }
        2.0 / std::f64::consts::PI * (theta + s * sum)
    } else {
        let mut term = 1.0;
        let mut sum = 1.0;
        let mut k = 2;
        while k <= d - 2 {
            term *= (k - 1) as f64 / k as f64 * c * c;
            sum += term;
            k += 2;
        }
        s * sum
    }
}

pub fn student_cdf_series(t: f64, d: u32) -> f64 {
    let a = central_probability(t.abs(), d);
    if t >= 0.0 {
        0.5 + 0.5 * a
    } else {
        0.5 - 0.5 * a
    }
}

pub fn student_upper_tail_series(t: f64, d: u32) -> f64 {
    1.0 - student_cdf_series(t, d)
}
