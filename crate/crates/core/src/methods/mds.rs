use serde::Serialize;

use super::kpca::{kpca_fit, Normalization};
use crate::centering::{double_center, CenteringScheme};
use crate::data::DataMatrix;
use crate::error::{Error, Result};
use crate::kernels::{distance_matrix_to_delta, gram_matrix, GramMatrix, KernelSpec};
use crate::linalg::{projector_distance, sym_eigen, EigenDecomposition, Matrix, SymmetricMatrix};
use crate::spectral::{Check, EigenPairSet};
use crate::tolerances::{INTERLACING, ZERO_EIGENVALUE};

/// Classical MDS output. Column `j` of `points` is sample `j`.
#[derive(Debug, Clone, Serialize)]
pub struct Embedding {
    pub points: Matrix,
    pub retained_eigenvalues: Vec<f64>,
    /// `Σ|λ|` over the eigenvalues of the centered matrix below `−tol`.
    pub discarded_negative_mass: f64,
    /// Set when fewer than the requested number of positive eigenvalues
    /// existed.
    pub clamped: bool,
}

impl Embedding {
    pub fn dim(&self) -> usize {
        self.points.rows()
    }

    pub fn n(&self) -> usize {
        self.points.cols()
    }

    /// Pairwise Euclidean distances between the embedded points.
    pub fn distances(&self) -> SymmetricMatrix {
        let p = &self.points;
        SymmetricMatrix::from_upper_fn(self.n(), |i, j| {
            (0..self.dim())
                .map(|k| (p.get(k, i) - p.get(k, j)).powi(2))
                .sum::<f64>()
                .sqrt()
        })
        .expect("distances of finite points are finite")
    }

    /// `max |d̂ᵢⱼ − dᵢⱼ| / max dᵢⱼ` against the input distances.
    pub fn round_trip_error(&self, d: &SymmetricMatrix) -> Result<f64> {
        if d.n() != self.n() {
            return Err(Error::DimensionMismatch {
                expected: self.n(),
                found: d.n(),
            });
        }
        let e = self.distances();
        let max_d = d.as_slice().iter().fold(0.0_f64, |m, v| m.max(*v));
        let max_err = e
            .as_slice()
            .iter()
            .zip(d.as_slice())
            .fold(0.0_f64, |m, (a, b)| m.max((a - b).abs()));
        Ok(if max_d > 0.0 { max_err / max_d } else { max_err })
    }
}

/// Embeds `m` dimensions from a distance matrix by eigendecomposing the
/// double-centered `Δ = −½D²` and keeping the largest positive eigenvalues.
pub fn mds_embed(distances: &SymmetricMatrix, m: usize) -> Result<Embedding> {
    if m == 0 {
        return Err(Error::InvalidParameter("embedding dimension must be at least 1".into()));
    }
    let delta = distance_matrix_to_delta(distances, None)?;
    let kc = double_center(&delta, &CenteringScheme::Mean)?;
    let eig = sym_eigen(&kc.matrix)?;
    let scale = eig.eigenvalues.iter().fold(0.0_f64, |s, l| s.max(l.abs()));
    let tol = ZERO_EIGENVALUE * scale;
    let positive = eig.eigenvalues.iter().filter(|&&l| l > tol).count();
    let kept = m.min(positive);
    let discarded_negative_mass = eig
        .eigenvalues
        .iter()
        .filter(|&&l| l < -tol)
        .map(|l| l.abs())
        .sum();
    let retained_eigenvalues = eig.eigenvalues[..kept].to_vec();
    let points = Matrix::from_fn(kept, distances.n(), |k, j| {
        retained_eigenvalues[k].sqrt() * eig.eigenvectors.get(j, k)
    });
    Ok(Embedding {
        points,
        retained_eigenvalues,
        discarded_negative_mass,
        clamped: m > positive,
    })
}

fn abs_sorted(values: &[f64]) -> Vec<f64> {
    let mut s: Vec<f64> = values.iter().map(|v| v.abs()).collect();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

/// `σⱼ₊₂(Δ) ≤ σⱼ(Kc) ≤ σⱼ(Δ)`: double centering subtracts a rank-two
/// matrix and is a contraction.
pub fn mds_separation_check(delta: &GramMatrix, kc: &GramMatrix) -> Result<Check> {
    let s = abs_sorted(&sym_eigen(&delta.matrix)?.eigenvalues);
    let sc = abs_sorted(&sym_eigen(&kc.matrix)?.eigenvalues);
    let scale = s.first().copied().unwrap_or(0.0);
    let mut c = Check::new("mds_separation", INTERLACING);
    for j in 0..s.len().min(sc.len()) {
        c.at_least(s[j] - sc[j], scale);
        if j + 2 < s.len() {
            c.at_least(sc[j] - s[j + 2], scale);
        }
    }
    Ok(c.done())
}

/// `maxᵢ λᵢ + (1ᵀΔ1/n² − 2λᵢ/n)(αᵢᵀ1)² ≤ λc₁` on the eigenpairs of `Δ`.
/// When the distances are supplied, also checks `1ᵀΔ1 = −½ΣΣdᵢⱼ²`, which
/// holds for the unbiased `Δ`.
pub fn mds_bound_check(
    delta: &GramMatrix,
    raw: &EigenPairSet,
    centered: &EigenPairSet,
    distances: Option<&SymmetricMatrix>,
) -> Check {
    let n = delta.n() as f64;
    let grand = delta.matrix.grand_sum();
    let m = grand / (n * n);
    let max = (0..raw.len())
        .map(|i| {
            let l = raw.lambda(i);
            let o = raw.ones_overlaps[i];
            l + (m - 2.0 * l / n) * o * o
        })
        .fold(f64::NEG_INFINITY, f64::max);
    let mut c = Check::new("mds_bound", INTERLACING);
    if max.is_finite() {
        c.at_least(centered.lambda_max() - max, raw.lambda_max().abs());
    }
    if let Some(d) = distances {
        let half_sq: f64 = 0.5 * d.as_slice().iter().map(|v| v * v).sum::<f64>();
        c.equal(grand + half_sq, half_sq.max(1.0));
    }
    c.done()
}

/// Largest deviation between the eigenvectors of two decompositions with
/// proportional spectra. Vectors are compared up to sign; groups of
/// eigenvalues closer than `ZERO_EIGENVALUE · max|λ|` are compared as
/// subspaces (projector distance). Only eigenvalues above that threshold in
/// magnitude take part.
pub fn eigenvector_agreement(a: &EigenDecomposition, b: &EigenDecomposition) -> f64 {
    let scale = a.eigenvalues.iter().fold(0.0_f64, |s, l| s.max(l.abs()));
    let tol = ZERO_EIGENVALUE * scale;
    let idx: Vec<usize> = (0..a.len().min(b.len()))
        .filter(|&i| a.eigenvalues[i].abs() > tol)
        .collect();
    let mut worst = 0.0_f64;
    let mut start = 0;
    while start < idx.len() {
        let mut end = start + 1;
        while end < idx.len()
            && idx[end] == idx[end - 1] + 1
            && (a.eigenvalues[idx[end - 1]] - a.eigenvalues[idx[end]]).abs() <= tol
        {
            end += 1;
        }
        let group = &idx[start..end];
        let dev = if group.len() == 1 {
            let u = a.eigenvector(group[0]);
            let v = b.eigenvector(group[0]);
            let same = u.iter().zip(&v).fold(0.0_f64, |m, (x, y)| m.max((x - y).abs()));
            let flip = u.iter().zip(&v).fold(0.0_f64, |m, (x, y)| m.max((x + y).abs()));
            same.min(flip)
        } else {
            let u: Vec<Vec<f64>> = group.iter().map(|&i| a.eigenvector(i)).collect();
            let v: Vec<Vec<f64>> = group.iter().map(|&i| b.eigenvector(i)).collect();
            projector_distance(&u, &v)
        };
        worst = worst.max(dev);
        start = end;
    }
    worst
}

#[derive(Debug, Clone, Serialize)]
pub struct ScalingInvariance {
    /// Eigenvalues of `Δξ` equal `ξ²` times those of `Δ` (relative `1e-8`).
    pub eigenvalues: Check,
    /// Unit-variance scores and eigenvectors agree up to sign (`1e-7`).
    pub scores: Check,
}

impl ScalingInvariance {
    pub fn passed(&self) -> bool {
        self.eigenvalues.passed() && self.scores.passed()
    }
}

/// Scaling the data by `ξ` scales `Δ` by `ξ²` and leaves its eigenvectors,
/// and hence the unit-variance scores, unchanged.
pub fn mds_scaling_invariance(x: &DataMatrix, xi: f64) -> Result<ScalingInvariance> {
    if !(xi > 0.0 && xi.is_finite()) {
        return Err(Error::InvalidParameter(format!("scale factor must be positive, got {xi}")));
    }
    let delta = gram_matrix(x, &KernelSpec::NegativeHalfSqDist)?;
    let delta_xi = gram_matrix(&x.scaled(xi), &KernelSpec::NegativeHalfSqDist)?;
    let e = sym_eigen(&delta.matrix)?;
    let e_xi = sym_eigen(&delta_xi.matrix)?;
    let xi2 = xi * xi;
    let scale = xi2 * e.eigenvalues.iter().fold(0.0_f64, |s, l| s.max(l.abs()));
    let mut eigenvalues = Check::new("mds_scaling_eigenvalues", ZERO_EIGENVALUE);
    for (a, b) in e.eigenvalues.iter().zip(&e_xi.eigenvalues) {
        eigenvalues.equal(b - xi2 * a, scale);
    }

    let mut scores = Check::new("mds_scaling_scores", 1e-7);
    scores.equal(eigenvector_agreement(&e, &e_xi), 1.0);
    let kc = double_center(&delta, &CenteringScheme::Mean)?;
    let rank = EigenPairSet::from_gram(&kc, crate::spectral::EigenSource::GramCentered)?.numerical_rank();
    if rank > 0 {
        let model = kpca_fit(&delta, &CenteringScheme::Mean, rank, Normalization::UnitVariance)?;
        let model_xi = kpca_fit(&delta_xi, &CenteringScheme::Mean, rank, Normalization::UnitVariance)?;
        // Training scores, one row per sample; columns are components.
        let score_matrix = |g: &GramMatrix, mdl: &super::ComponentSet| -> Result<Vec<Vec<f64>>> {
            (0..g.n()).map(|i| mdl.project(g.matrix.row(i))).collect()
        };
        let s = score_matrix(&delta, &model)?;
        let s_xi = score_matrix(&delta_xi, &model_xi)?;
        // Package the score columns as decompositions so degenerate
        // components are compared as subspaces.
        let as_decomp = |rows: &[Vec<f64>], vals: &[f64]| EigenDecomposition {
            eigenvalues: vals.to_vec(),
            eigenvectors: Matrix::from_fn(rows.len(), vals.len(), |i, j| rows[i][j]),
            source_scale: 1.0,
        };
        scores.equal(
            eigenvector_agreement(&as_decomp(&s, &model.eigenvalues), &as_decomp(&s_xi, &model_xi.eigenvalues)),
            1.0,
        );
    }
    Ok(ScalingInvariance {
        eigenvalues: eigenvalues.done(),
        scores: scores.done(),
    })
}
