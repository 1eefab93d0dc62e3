//! Fixtures shared by the benchmarks.

use nalgebra::DMatrix;
use posthoc::rng::child_rng;
use posthoc::Dataset;
use rand::Rng;

/// Two-group design with one group-difference contrast and uniform noise.
pub fn two_group_dataset(n: usize, n_points: usize, seed: u64) -> Dataset {
    let mut rng = child_rng(seed, 0);
    let design = DMatrix::from_fn(n, 2, |i, j| if j == 0 { 1.0 } else { (2 * i >= n) as u8 as f64 });
    let response = DMatrix::from_fn(n, n_points, |_, _| rng.random::<f64>() - 0.5);
    let contrasts = DMatrix::from_row_slice(1, 2, &[0.0, 1.0]);
    Dataset::new(design, response, contrasts).expect("valid fixture")
}

/// `m` p-values, a tenth of them small.
pub fn p_values(m: usize, seed: u64) -> Vec<f64> {
    let mut rng = child_rng(seed, 1);
    (0..m)
        .map(|i| if i % 10 == 0 { rng.random::<f64>() * 1e-3 } else { rng.random() })
        .collect()
}
