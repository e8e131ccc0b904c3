//! Verification of the eigenvalue and eigenvector relations between a Gram
//! (or moment) matrix and its centered counterpart.
//!
//! Every relation is evaluated numerically and recorded as a [`Check`]; the
//! [`full_report`] entry point runs all of them in a fixed order.

mod check;
mod covariance;
mod gram;
mod report;

pub use check::{Check, CheckStatus};
pub use covariance::{
    check_covariance_bounds, check_covariance_trace_law, check_lemma_coupling,
    check_mean_score_identity, check_weighted_covariance_bound, covariance_dprime_entries,
    mean_score, CovarianceBounds,
};
pub use gram::{
    bound_entries, check_box_constraint, check_courant_fischer, check_cumulative_bounds,
    check_dprime_diagonal, check_eigvec_sum_zero, check_interlacing, check_lemma_same_eigs,
    check_mean_norm_formulas, check_ones_completeness, check_proportion_interlacing,
    check_schur_horn, check_trace_lemma, check_weighted_bounds, check_weighted_eigvec_constraint,
    check_weighted_trace_law, constraint_threshold, dprime_values, mean_norm_sq_spectral, proportions,
    schur_horn_dprime_gram, weighted_dprime_values, Proportions,
};
pub use report::{full_report, GramAnalysis, SpectralReport, CHECK_NAMES};

use serde::Serialize;

use crate::centering::moment_matrix;
use crate::data::DataMatrix;
use crate::error::Result;
use crate::kernels::GramMatrix;
use crate::linalg::{dot, sym_eigen, EigenDecomposition, SymmetricMatrix};
use crate::tolerances::ZERO_EIGENVALUE;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EigenSource {
    GramRaw,
    GramCentered,
    MomentRaw,
    MomentCentered,
}

impl EigenSource {
    pub fn is_moment(self) -> bool {
        matches!(self, Self::MomentRaw | Self::MomentCentered)
    }
}

/// An eigendecomposition tagged with its origin, plus `αᵢᵀ1` for each pair.
///
/// For moment matrices `C = XXᵀ/n` the decomposition stores the eigenvalues
/// of `C` itself (`source_scale = 1/n`); [`EigenPairSet::lambda`] returns the
/// Gram-scale value `n · eig(C)`, which is what the relations are stated in.
/// The overlaps of a moment set are those of the Gram eigenvectors matched
/// through `αᵢ = Xᵀwᵢ / √λᵢ`, and zero for null directions.
#[derive(Debug, Clone, Serialize)]
pub struct EigenPairSet {
    pub decomposition: EigenDecomposition,
    pub source: EigenSource,
    pub ones_overlaps: Vec<f64>,
}

impl EigenPairSet {
    pub fn from_gram(k: &GramMatrix, source: EigenSource) -> Result<Self> {
        Self::from_symmetric(&k.matrix, source)
    }

    pub fn from_symmetric(m: &SymmetricMatrix, source: EigenSource) -> Result<Self> {
        let decomposition = sym_eigen(m)?;
        let ones_overlaps = decomposition
            .vectors()
            .iter()
            .map(|v| v.iter().sum())
            .collect();
        Ok(Self {
            decomposition,
            source,
            ones_overlaps,
        })
    }

    /// Eigenpairs of `XXᵀ/n` (raw) or of the moment matrix of `x` after it
    /// has already been centered by the caller (centered).
    pub fn from_data_moment(x: &DataMatrix, source: EigenSource) -> Result<Self> {
        let c = moment_matrix(x)?;
        let n = x.n();
        let decomposition = sym_eigen(&c)?.with_source_scale(1.0 / n as f64);
        let set = Self {
            decomposition,
            source,
            ones_overlaps: Vec::new(),
        };
        let col_sum = x.combine(&vec![1.0; n])?;
        let zero = set.zero_threshold();
        let ones_overlaps = (0..set.len())
            .map(|i| {
                let l = set.lambda(i);
                if l > zero {
                    dot(&set.vector(i), &col_sum) / l.sqrt()
                } else {
                    0.0
                }
            })
            .collect();
        Ok(Self {
            ones_overlaps,
            ..set
        })
    }

    pub fn len(&self) -> usize {
        self.decomposition.len()
    }

    pub fn is_empty(&self) -> bool {
        self.decomposition.is_empty()
    }

    /// Gram-scale eigenvalue `λᵢ`.
    pub fn lambda(&self, i: usize) -> f64 {
        self.decomposition.gram_scale_eigenvalue(i)
    }

    pub fn lambdas(&self) -> Vec<f64> {
        (0..self.len()).map(|i| self.lambda(i)).collect()
    }

    pub fn vector(&self, i: usize) -> Vec<f64> {
        self.decomposition.eigenvector(i)
    }

    /// Largest Gram-scale eigenvalue, or 0 when empty.
    pub fn lambda_max(&self) -> f64 {
        if self.is_empty() {
            0.0
        } else {
            self.lambda(0)
        }
    }

    /// `ZERO_EIGENVALUE · λ₁`: eigenvalues at or below it count as zero.
    pub fn zero_threshold(&self) -> f64 {
        ZERO_EIGENVALUE * self.lambda_max().abs()
    }

    /// Number of eigenvalues above the zero threshold.
    pub fn numerical_rank(&self) -> usize {
        let z = self.zero_threshold();
        self.lambdas().iter().filter(|&&l| l > z).count()
    }
}

/// One row of the partial-sum comparison between `d′` values and centered
/// eigenvalues.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundEntry {
    /// 1-based index of the eigenpair the `d′` value came from.
    pub index: usize,
    pub d_prime: f64,
    pub lambda_c: f64,
    pub cumulative_d: f64,
    pub cumulative_lambda_c: f64,
}
