use serde::{Deserialize, Serialize};

use crate::centering::{double_center, CenteringScheme};
use crate::data::DataMatrix;
use crate::error::{Error, Result};
use crate::kernels::{gram_matrix, kernel_column, GramMatrix, KernelSpec};
use crate::linalg::{dot, sym_eigen, Matrix};
use crate::tolerances::ZERO_EIGENVALUE;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Normalization {
    /// `aⱼ = αⱼ/√λⱼ`: scores have variance `λⱼ/n`.
    VariancePreserving,
    /// `aⱼ = αⱼ/λⱼ`: training scores equal `αⱼ`.
    UnitVariance,
}

/// Training statistics needed to center a new kernel column.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CenteringStats {
    pub omega: Vec<f64>,
    /// `Kω`, the training row means for `ω = 1/n`.
    pub k_omega: Vec<f64>,
    /// `ωᵀKω`, the grand mean for `ω = 1/n`.
    pub omega_k_omega: f64,
}

impl CenteringStats {
    /// `k̃ᵢ = kᵢ − ωᵀk − (Kω)ᵢ + ωᵀKω`: the inner products of the new point
    /// and the training points after both are shifted by the weighted
    /// feature-space mean.
    pub fn center_column(&self, column: &[f64]) -> Vec<f64> {
        let wk = dot(&self.omega, column);
        column
            .iter()
            .zip(&self.k_omega)
            .map(|(k, s)| ((k - wk) - s) + self.omega_k_omega)
            .collect()
    }
}

/// A fitted kernel PCA model. Column `j` of `coefficients` is the scaled
/// eigenvector `aⱼ`; the score of a point is `aⱼᵀk̃`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ComponentSet {
    pub coefficients: Matrix,
    pub eigenvalues: Vec<f64>,
    pub normalization: Normalization,
    pub centering: CenteringScheme,
    pub stats: Option<CenteringStats>,
}

impl ComponentSet {
    pub fn n(&self) -> usize {
        self.coefficients.rows()
    }

    pub fn m(&self) -> usize {
        self.coefficients.cols()
    }

    /// Scores of a point given its kernel values against the training set.
    pub fn project(&self, kernel_column: &[f64]) -> Result<Vec<f64>> {
        if kernel_column.len() != self.n() {
            return Err(Error::DimensionMismatch {
                expected: self.n(),
                found: kernel_column.len(),
            });
        }
        let centered;
        let k = match &self.stats {
            Some(s) => {
                centered = s.center_column(kernel_column);
                &centered
            }
            None => kernel_column,
        };
        self.coefficients.transpose().matvec(k)
    }
}

/// Top-`m` eigenpairs of `K` (or of its centered version), scaled per
/// `normalization`.
pub fn kpca_fit(k: &GramMatrix, scheme: &CenteringScheme, m: usize, normalization: Normalization) -> Result<ComponentSet> {
    if m == 0 {
        return Err(Error::InvalidParameter("component count must be at least 1".into()));
    }
    let target = double_center(k, scheme)?;
    let eig = sym_eigen(&target.matrix)?;
    let l1 = eig.eigenvalues.first().copied().unwrap_or(0.0);
    let rank = eig
        .eigenvalues
        .iter()
        .filter(|&&l| l > ZERO_EIGENVALUE * l1.abs())
        .count();
    if m > rank {
        return Err(Error::RankExceeded { requested: m, rank });
    }
    let n = k.n();
    let eigenvalues = eig.eigenvalues[..m].to_vec();
    let coefficients = Matrix::from_fn(n, m, |i, j| {
        let l = eigenvalues[j];
        let s = match normalization {
            Normalization::VariancePreserving => l.sqrt(),
            Normalization::UnitVariance => l,
        };
        eig.eigenvectors.get(i, j) / s
    });
    let stats = match scheme.weights(n) {
        Some(w) => {
            let k_omega = k.matrix.matvec(w.as_slice())?;
            Some(CenteringStats {
                omega_k_omega: dot(w.as_slice(), &k_omega),
                omega: w.as_slice().to_vec(),
                k_omega,
            })
        }
        None => None,
    };
    Ok(ComponentSet {
        coefficients,
        eigenvalues,
        normalization,
        centering: scheme.clone(),
        stats,
    })
}

/// A kernel PCA model bundled with its training data and kernel, so raw
/// points can be projected.
#[derive(Debug, Clone, Serialize)]
pub struct KernelPca {
    pub kernel: KernelSpec,
    pub training: DataMatrix,
    pub model: ComponentSet,
}

impl KernelPca {
    pub fn fit(
        x: &DataMatrix,
        kernel: &KernelSpec,
        scheme: &CenteringScheme,
        m: usize,
        normalization: Normalization,
    ) -> Result<Self> {
        let k = gram_matrix(x, kernel)?;
        Ok(Self {
            kernel: kernel.clone(),
            training: x.clone(),
            model: kpca_fit(&k, scheme, m, normalization)?,
        })
    }

    pub fn project_point(&self, point: &[f64]) -> Result<Vec<f64>> {
        self.model.project(&kernel_column(&self.training, &self.kernel, point)?)
    }
}
