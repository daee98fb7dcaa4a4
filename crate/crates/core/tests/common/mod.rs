#![allow(dead_code)]

use indicator_core::{gram_matrix_bruteforce, ProcessSeries};
use ndarray::Array2;
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

pub struct TestRng(ChaCha8Rng);

impl TestRng {
    pub fn new(seed: u64) -> Self {
        Self(ChaCha8Rng::seed_from_u64(seed))
    }

    pub fn unit(&mut self) -> f64 {
        (self.0.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }

    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.unit()
    }

    /// Uniform in `lo..=hi`.
    pub fn int(&mut self, lo: usize, hi: usize) -> usize {
        lo + (self.0.next_u64() % (hi - lo + 1) as u64) as usize
    }

    pub fn matrix(&mut self, rows: usize, cols: usize, lo: f64, hi: f64) -> Array2<f64> {
        Array2::from_shape_simple_fn((rows, cols), || self.uniform(lo, hi))
    }

    pub fn series(&mut self, n: usize, t_max: usize) -> ProcessSeries {
        ProcessSeries::with_default_labels(self.matrix(n, t_max, -10.0, 10.0)).unwrap()
    }

    pub fn permutation(&mut self, n: usize) -> Vec<usize> {
        let mut p: Vec<usize> = (0..n).collect();
        for i in (1..n).rev() {
            p.swap(i, self.int(0, i));
        }
        p
    }
}

pub fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    if a == b {
        return true;
    }
    (a - b).abs() <= tol * a.abs().max(b.abs())
}

/// `sum_t sum_i sum_j |r_ij(t)|` over full windows, straight from the
/// triple-loop Gram oracle and the raw series values.
pub fn bruteforce_total(series: &ProcessSeries, k: usize) -> f64 {
    let values = series.values();
    let (n, t_max) = values.dim();
    let mut total = 0.0;
    for t in (k + 1)..=t_max {
        let window = Array2::from_shape_fn((k, n), |(l, i)| values[[i, t - 1 - (l + 1)]]);
        let g = gram_matrix_bruteforce(window.view(), k).unwrap();
        total += g.iter().map(|r| r.abs()).sum::<f64>();
    }
    total
}

pub fn min_eigenvalue(entries: &Array2<f64>) -> f64 {
    let n = entries.nrows();
    let m = nalgebra::DMatrix::from_fn(n, n, |i, j| entries[[i, j]]);
    m.symmetric_eigen()
        .eigenvalues
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min)
}
