use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::Matrix;

/// A `d × n` data matrix whose columns are the samples.
///
/// Samples are stored contiguously (sample-major), which is what kernel
/// evaluation wants; [`DataMatrix::to_matrix`] gives the `d × n` view.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DataMatrix {
    dim: usize,
    n: usize,
    samples: Vec<f64>,
}

impl DataMatrix {
    pub fn from_samples(samples: &[Vec<f64>]) -> Result<Self> {
        let dim = samples.first().map_or(0, Vec::len);
        let mut flat = Vec::with_capacity(samples.len() * dim);
        for (j, s) in samples.iter().enumerate() {
            if s.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: s.len(),
                });
            }
            if let Some(i) = s.iter().position(|v| !v.is_finite()) {
                return Err(Error::NonFinite { row: i, col: j });
            }
            flat.extend_from_slice(s);
        }
        Ok(Self {
            dim,
            n: samples.len(),
            samples: flat,
        })
    }

    /// Interprets `m` as `d × n` with samples in columns.
    pub fn from_matrix(m: &Matrix) -> Self {
        Self {
            dim: m.rows(),
            n: m.cols(),
            samples: m.transpose().as_slice().to_vec(),
        }
    }

    pub(crate) fn from_flat(dim: usize, n: usize, samples: Vec<f64>) -> Self {
        debug_assert_eq!(samples.len(), dim * n);
        Self { dim, n, samples }
    }

    /// Feature dimension `d`.
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of samples `n`.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn sample(&self, j: usize) -> &[f64] {
        &self.samples[j * self.dim..(j + 1) * self.dim]
    }

    pub fn samples(&self) -> impl Iterator<Item = &[f64]> {
        (0..self.n).map(move |j| self.sample(j))
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.samples[j * self.dim + i]
    }

    pub fn to_matrix(&self) -> Matrix {
        Matrix::from_fn(self.dim, self.n, |i, j| self.get(i, j))
    }

    /// `ξ X`.
    pub fn scaled(&self, factor: f64) -> DataMatrix {
        Self::from_flat(
            self.dim,
            self.n,
            self.samples.iter().map(|v| v * factor).collect(),
        )
    }

    /// `X v` for a length-`n` coefficient vector.
    pub fn combine(&self, coeffs: &[f64]) -> Result<Vec<f64>> {
        if coeffs.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: coeffs.len(),
            });
        }
        let mut out = vec![0.0; self.dim];
        for (s, c) in self.samples().zip(coeffs) {
            for (o, x) in out.iter_mut().zip(s) {
                *o += c * x;
            }
        }
        Ok(out)
    }

    /// `Xᵀ w` for a length-`d` vector: one score per sample.
    pub fn scores(&self, w: &[f64]) -> Result<Vec<f64>> {
        if w.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: w.len(),
            });
        }
        Ok(self.samples().map(|s| crate::linalg::dot(s, w)).collect())
    }

    /// Per-feature `(min, max)` over the samples.
    pub fn bounds(&self) -> Vec<(f64, f64)> {
        (0..self.dim)
            .map(|i| {
                self.samples().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), s| {
                    (lo.min(s[i]), hi.max(s[i]))
                })
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn layout_round_trip() {
        let m = Matrix::from_rows(&[vec![1.0, 3.0], vec![2.0, 4.0]]).unwrap();
        let x = DataMatrix::from_matrix(&m);
        assert_eq!(x.sample(0), &[1.0, 2.0]);
        assert_eq!(x.sample(1), &[3.0, 4.0]);
        assert_eq!(x.to_matrix(), m);
    }

    #[test]
    fn combine_and_scores() {
        let x = DataMatrix::from_samples(&[vec![1.0, 0.0], vec![0.0, 1.0], vec![2.0, 2.0]]).unwrap();
        assert_eq!(x.combine(&[1.0, 1.0, 1.0]).unwrap(), vec![3.0, 3.0]);
        assert_eq!(x.scores(&[1.0, -1.0]).unwrap(), vec![1.0, -1.0, 0.0]);
        assert!(x.combine(&[1.0]).is_err());
    }

    #[test]
    fn rejects_ragged_samples() {
        assert!(DataMatrix::from_samples(&[vec![1.0], vec![1.0, 2.0]]).is_err());
        assert!(DataMatrix::from_samples(&[vec![f64::NAN]]).is_err());
    }
}
