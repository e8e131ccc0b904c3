//! Reference computations for the integration tests. Everything here goes
//! through nalgebra or plain loops, never through the library's centering or
//! eigen code.

#![allow(dead_code)]

use kcenter::{DataMatrix, KernelSpec, SymmetricMatrix};
use nalgebra::{DMatrix, DVector, SymmetricEigen};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `n` samples in `d` dimensions: a random offset per coordinate plus
/// uniform noise, so the mean is well away from zero.
pub fn random_data(rng: &mut ChaCha8Rng, d: usize, n: usize) -> DataMatrix {
    let offset: Vec<f64> = (0..d).map(|_| rng.gen_range(-2.0..2.0)).collect();
    let samples: Vec<Vec<f64>> = (0..n)
        .map(|_| offset.iter().map(|o| o + rng.gen_range(-1.0..1.0)).collect())
        .collect();
    DataMatrix::from_samples(&samples).unwrap()
}

/// Weights summing to one, some of them possibly negative.
pub fn random_weights(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    let raw: Vec<f64> = (0..n).map(|_| rng.gen_range(-0.3..1.0)).collect();
    let s: f64 = raw.iter().sum();
    let mut w: Vec<f64> = raw.iter().map(|v| v / s).collect();
    let rest: f64 = w[1..].iter().sum();
    w[0] = 1.0 - rest;
    w
}

#[derive(Debug, Clone, Copy)]
pub enum OracleKernel {
    Linear,
    Poly(f64, i32),
    Gaussian(f64),
}

impl OracleKernel {
    pub fn all() -> [OracleKernel; 3] {
        [OracleKernel::Linear, OracleKernel::Poly(1.0, 2), OracleKernel::Gaussian(1.0)]
    }

    pub fn spec(self) -> KernelSpec {
        match self {
            OracleKernel::Linear => KernelSpec::Linear,
            OracleKernel::Poly(c, p) => KernelSpec::polynomial(c, p as u32).unwrap(),
            OracleKernel::Gaussian(s) => KernelSpec::gaussian(s).unwrap(),
        }
    }

    pub fn eval(self, x: &[f64], y: &[f64]) -> f64 {
        let mut ip = 0.0;
        let mut sq = 0.0;
        for (a, b) in x.iter().zip(y) {
            ip += a * b;
            sq += (a - b) * (a - b);
        }
        match self {
            OracleKernel::Linear => ip,
            OracleKernel::Poly(c, p) => (c + ip).powi(p),
            OracleKernel::Gaussian(s) => (-sq / (2.0 * s * s)).exp(),
        }
    }
}

pub fn oracle_gram(x: &DataMatrix, k: OracleKernel) -> DMatrix<f64> {
    DMatrix::from_fn(x.n(), x.n(), |i, j| k.eval(x.sample(i), x.sample(j)))
}

pub fn to_na(m: &SymmetricMatrix) -> DMatrix<f64> {
    DMatrix::from_fn(m.n(), m.n(), |i, j| m.get(i, j))
}

/// `(I − ω1ᵀ)ᵀ K (I − ω1ᵀ)` by explicit matrix products.
pub fn weighted_center(k: &DMatrix<f64>, omega: &[f64]) -> DMatrix<f64> {
    let n = k.nrows();
    let p = DMatrix::identity(n, n) - DVector::from_column_slice(omega) * DMatrix::from_element(1, n, 1.0);
    p.transpose() * k * p
}

/// `(I − 11ᵀ/n) K (I − 11ᵀ/n)` by explicit matrix products.
pub fn mean_center(k: &DMatrix<f64>) -> DMatrix<f64> {
    let n = k.nrows();
    weighted_center(k, &vec![1.0 / n as f64; n])
}

/// Eigenvalues and unit eigenvectors, largest eigenvalue first.
pub fn eigh_desc(m: &DMatrix<f64>) -> (Vec<f64>, Vec<DVector<f64>>) {
    let e = SymmetricEigen::new(m.clone());
    let mut idx: Vec<usize> = (0..m.nrows()).collect();
    idx.sort_by(|&a, &b| e.eigenvalues[b].total_cmp(&e.eigenvalues[a]));
    (
        idx.iter().map(|&i| e.eigenvalues[i]).collect(),
        idx.iter().map(|&i| e.eigenvectors.column(i).into_owned()).collect(),
    )
}

pub fn eigvals_desc(m: &DMatrix<f64>) -> Vec<f64> {
    eigh_desc(m).0
}

/// Data as a `d × n` nalgebra matrix, one column per sample.
pub fn data_na(x: &DataMatrix) -> DMatrix<f64> {
    DMatrix::from_fn(x.dim(), x.n(), |i, j| x.sample(j)[i])
}

/// Worst violation of `λⱼ₊₁ ≤ λcⱼ ≤ λⱼ` and `|λcₙ| ≈ 0`
/// as a multiple of `λ₁`.
pub fn interlacing_violation(l: &[f64], lc: &[f64]) -> f64 {
    let l1 = l[0].abs().max(f64::MIN_POSITIVE);
    let n = l.len();
    let mut worst = 0.0_f64;
    for j in 0..n {
        worst = worst.max((lc[j] - l[j]) / l1);
        if j + 1 < n {
            worst = worst.max((l[j + 1] - lc[j]) / l1);
        }
    }
    worst.max(lc[n - 1].abs() / l1)
}

pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).fold(0.0_f64, |m, (x, y)| m.max((x - y).abs()))
}
