//! Means, weighted means, and the centering projections applied to data,
//! Gram and moment matrices.
//!
//! Conventional centering is the orthogonal projection `I − P₁` with
//! `P₁ = 11ᵀ/n`. Weighted centering uses the oblique projection
//! `Pω = ω1ᵀ` for a weight vector with `ωᵀ1 = 1`; Gram matrices are then
//! centered as `(I − Pω)ᵀ K (I − Pω)`, which stays symmetric.

use serde::{Deserialize, Serialize};

use crate::data::DataMatrix;
use crate::error::{Error, Result};
use crate::kernels::{GramKind, GramMatrix};
use crate::linalg::{dot, SymmetricMatrix};

/// Tolerance on `|ωᵀ1 − 1|`.
pub const WEIGHT_SUM_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MeanInfo {
    /// Input-space mean; absent when only a Gram matrix was available.
    pub mu: Option<Vec<f64>>,
    pub mu_norm_sq: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct WeightVector {
    omega: Vec<f64>,
}

impl WeightVector {
    pub fn new(omega: Vec<f64>) -> Result<Self> {
        if omega.is_empty() || omega.iter().any(|w| !w.is_finite()) {
            return Err(Error::InvalidParameter(
                "weights must be a non-empty vector of finite values".into(),
            ));
        }
        let sum: f64 = omega.iter().sum();
        if (sum - 1.0).abs() > WEIGHT_SUM_TOLERANCE {
            return Err(Error::InvalidWeights { sum });
        }
        Ok(Self { omega })
    }

    /// `ω = 1/n`, which recovers conventional centering.
    pub fn uniform(n: usize) -> Self {
        Self {
            omega: vec![1.0 / n as f64; n],
        }
    }

    /// Rescales non-negative, not-all-zero values to sum to one.
    pub fn normalized(raw: &[f64]) -> Result<Self> {
        let s: f64 = raw.iter().sum();
        if !(s > 0.0) || raw.iter().any(|w| *w < 0.0) {
            return Err(Error::InvalidParameter(
                "weights to normalize must be non-negative with positive sum".into(),
            ));
        }
        let mut omega: Vec<f64> = raw.iter().map(|w| w / s).collect();
        // Fold the rounding residue into the largest weight.
        let residue = 1.0 - omega.iter().sum::<f64>();
        if let Some(k) = (0..omega.len()).max_by(|&a, &b| omega[a].total_cmp(&omega[b])) {
            omega[k] += residue;
        }
        Self::new(omega)
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.omega
    }

    pub fn len(&self) -> usize {
        self.omega.len()
    }

    pub fn is_empty(&self) -> bool {
        self.omega.is_empty()
    }

    /// `μω = X ω`.
    pub fn weighted_mean(&self, x: &DataMatrix) -> Result<Vec<f64>> {
        x.combine(&self.omega)
    }
}

impl TryFrom<Vec<f64>> for WeightVector {
    type Error = Error;

    fn try_from(v: Vec<f64>) -> Result<Self> {
        Self::new(v)
    }
}

impl From<WeightVector> for Vec<f64> {
    fn from(w: WeightVector) -> Vec<f64> {
        w.omega
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "variant", content = "weights", rename_all = "snake_case")]
pub enum CenteringScheme {
    None,
    Mean,
    Weighted(WeightVector),
}

impl CenteringScheme {
    /// The weight vector this scheme centers with, `1/n` for the mean.
    pub fn weights(&self, n: usize) -> Option<WeightVector> {
        match self {
            Self::None => None,
            Self::Mean => Some(WeightVector::uniform(n)),
            Self::Weighted(w) => Some(w.clone()),
        }
    }

    fn check_len(&self, n: usize) -> Result<()> {
        match self {
            Self::Weighted(w) if w.len() != n => Err(Error::DimensionMismatch {
                expected: n,
                found: w.len(),
            }),
            _ => Ok(()),
        }
    }
}

/// `μ = X1/n` and `‖μ‖²`.
pub fn mean_vector(x: &DataMatrix) -> Result<MeanInfo> {
    if x.n() == 0 {
        return Err(Error::Empty);
    }
    let mut mu = x.combine(&vec![1.0; x.n()])?;
    let n = x.n() as f64;
    mu.iter_mut().for_each(|v| *v /= n);
    let mu_norm_sq = dot(&mu, &mu);
    Ok(MeanInfo {
        mu: Some(mu),
        mu_norm_sq,
    })
}

/// `‖μ‖² = 1ᵀK1 / n²`; for a kernel matrix this is the squared norm of the
/// feature-space mean.
pub fn mean_norm_sq_from_gram(k: &GramMatrix) -> f64 {
    let n = k.n() as f64;
    k.matrix.grand_sum() / (n * n)
}

pub fn mean_info_from_gram(k: &GramMatrix) -> MeanInfo {
    MeanInfo {
        mu: None,
        mu_norm_sq: mean_norm_sq_from_gram(k),
    }
}

/// `X − μ1ᵀ` (mean), `X − μω1ᵀ` (weighted) or `X` (none).
pub fn center_data(x: &DataMatrix, scheme: &CenteringScheme) -> Result<DataMatrix> {
    scheme.check_len(x.n())?;
    let Some(w) = scheme.weights(x.n()) else {
        return Ok(x.clone());
    };
    let center = w.weighted_mean(x)?;
    let mut flat = Vec::with_capacity(x.dim() * x.n());
    for s in x.samples() {
        flat.extend(s.iter().zip(&center).map(|(a, m)| a - m));
    }
    Ok(DataMatrix::from_flat(x.dim(), x.n(), flat))
}

/// Double centering.
///
/// With `s = Kω` and `g = ωᵀKω` (`ω = 1/n` for the mean scheme), each upper
/// triangle entry is computed as `((K_ij − s_i) − s_j) + g` and mirrored.
/// This is the expansion of `(I − Pω)ᵀ K (I − Pω)`; for `ω = 1/n` it is
/// `K − P₁K − KP₁ + (1ᵀK1/n) P₁`.
///
/// The result is positive semidefinite whenever the input is, and also when
/// the input is only conditionally positive definite, since `(I − Pω)β`
/// always sums to zero.
pub fn double_center(k: &GramMatrix, scheme: &CenteringScheme) -> Result<GramMatrix> {
    let n = k.n();
    scheme.check_len(n)?;
    let Some(w) = scheme.weights(n) else {
        return Ok(k.clone());
    };
    let s = match scheme {
        CenteringScheme::Mean => {
            let nf = n as f64;
            k.matrix.row_sums().into_iter().map(|r| r / nf).collect()
        }
        _ => k.matrix.matvec(w.as_slice())?,
    };
    let g = dot(w.as_slice(), &s);
    let matrix = SymmetricMatrix::from_upper_fn(n, |i, j| ((k.matrix.get(i, j) - s[i]) - s[j]) + g)?;
    Ok(GramMatrix::new(matrix, GramKind::Psd))
}

/// `C = XXᵀ / n`, the second-order non-central moment matrix.
pub fn moment_matrix(x: &DataMatrix) -> Result<SymmetricMatrix> {
    if x.n() == 0 {
        return Err(Error::Empty);
    }
    let n = x.n() as f64;
    SymmetricMatrix::from_upper_fn(x.dim(), |a, b| {
        x.samples().map(|s| s[a] * s[b]).sum::<f64>() / n
    })
}

/// `Cc = C − μμᵀ`.
pub fn center_covariance(c: &SymmetricMatrix, mean: &MeanInfo) -> Result<SymmetricMatrix> {
    let mu = mean
        .mu
        .as_deref()
        .ok_or_else(|| Error::InvalidParameter("covariance centering needs an input-space mean".into()))?;
    if mu.len() != c.n() {
        return Err(Error::DimensionMismatch {
            expected: c.n(),
            found: mu.len(),
        });
    }
    SymmetricMatrix::from_upper_fn(c.n(), |a, b| c.get(a, b) - mu[a] * mu[b])
}

/// `Cc = C − μωμᵀ − μμωᵀ + μωμωᵀ`, the moment matrix of `X(I − Pω)`.
pub fn center_covariance_weighted(
    c: &SymmetricMatrix,
    mean: &MeanInfo,
    weighted_mean: &[f64],
) -> Result<SymmetricMatrix> {
    let mu = mean
        .mu
        .as_deref()
        .ok_or_else(|| Error::InvalidParameter("covariance centering needs an input-space mean".into()))?;
    for len in [mu.len(), weighted_mean.len()] {
        if len != c.n() {
            return Err(Error::DimensionMismatch {
                expected: c.n(),
                found: len,
            });
        }
    }
    let m = weighted_mean;
    SymmetricMatrix::from_upper_fn(c.n(), |a, b| {
        c.get(a, b) - m[a] * mu[b] - mu[a] * m[b] + m[a] * m[b]
    })
}
