//! Relations between the moment matrix `C = XXᵀ/n` and the covariance
//! `Cc = C − μμᵀ`. Only meaningful for the linear kernel, where both are
//! explicit `d × d` matrices. Eigenvalues are compared on the Gram scale
//! (`C wᵢ = (λᵢ/n) wᵢ`).

use serde::Serialize;

use super::{bound_entries, check_cumulative_bounds, BoundEntry, Check, EigenPairSet};
use crate::data::DataMatrix;
use crate::error::{Error, Result};
use crate::linalg::{dot, norm};
use crate::tolerances as tol;

fn unit_floor(x: f64) -> f64 {
    x.abs().max(1.0)
}

fn sample_count(set: &EigenPairSet) -> f64 {
    (1.0 / set.decomposition.source_scale).round()
}

fn check_dim(set: &EigenPairSet, v: &[f64]) -> Result<()> {
    if set.len() != v.len() {
        return Err(Error::DimensionMismatch {
            expected: set.len(),
            found: v.len(),
        });
    }
    Ok(())
}

/// Both sides of `wᵢᵀμ = (√λᵢ/n)·αᵢᵀ1`, returned as `(lhs, rhs)`.
pub fn mean_score(w: &[f64], mu: &[f64], lambda: f64, alpha_ones: f64, n: usize) -> Result<(f64, f64)> {
    if !(lambda > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "mean score needs a positive eigenvalue, got {lambda}"
        )));
    }
    if w.len() != mu.len() {
        return Err(Error::DimensionMismatch {
            expected: mu.len(),
            found: w.len(),
        });
    }
    Ok((dot(w, mu), lambda.sqrt() / n as f64 * alpha_ones))
}

/// For each Gram eigenpair with `λᵢ` above the zero threshold, builds
/// `wᵢ = Xαᵢ/√λᵢ` and compares `wᵢᵀμ` with `(√λᵢ/n)·αᵢᵀ1`.
pub fn check_mean_score_identity(x: &DataMatrix, mu: &[f64], raw_gram: &EigenPairSet) -> Result<Check> {
    let zero = raw_gram.zero_threshold();
    let mut c = Check::new("mean_score_identity", tol::MEAN_SCORE);
    for i in 0..raw_gram.len() {
        let l = raw_gram.lambda(i);
        if l <= zero {
            continue;
        }
        let mut w = x.combine(&raw_gram.vector(i))?;
        let s = l.sqrt();
        w.iter_mut().for_each(|v| *v /= s);
        let (lhs, rhs) = mean_score(&w, mu, l, raw_gram.ones_overlaps[i], x.n())?;
        c.equal(lhs - rhs, unit_floor(rhs));
    }
    Ok(c.done())
}

/// `Σλc = Σλ − n‖μ‖²` on the moment side.
pub fn check_covariance_trace_law(raw: &EigenPairSet, centered: &EigenPairSet, mu: &[f64]) -> Check {
    let n = sample_count(raw);
    let sl: f64 = raw.lambdas().iter().sum();
    let slc: f64 = centered.lambdas().iter().sum();
    Check::new("covariance_trace_law", tol::TRACE_LAW)
        .equal(slc - (sl - n * dot(mu, mu)), unit_floor(sl))
        .done()
}

/// `(λᵢ − λcⱼ)·wᵢᵀwcⱼ = n·wᵢᵀμ·wcⱼᵀμ` for every pair `(i, j)`.
pub fn check_lemma_coupling(raw: &EigenPairSet, centered: &EigenPairSet, mu: &[f64]) -> Result<Check> {
    check_dim(raw, mu)?;
    let n = sample_count(raw);
    let scale = unit_floor(raw.lambda_max());
    let w = raw.decomposition.vectors();
    let wc = centered.decomposition.vectors();
    let mut c = Check::new("lemma_coupling", tol::COVARIANCE);
    for (i, wi) in w.iter().enumerate() {
        let wi_mu = dot(wi, mu);
        for (j, wcj) in wc.iter().enumerate() {
            let lhs = (raw.lambda(i) - centered.lambda(j)) * dot(wi, wcj);
            let rhs = n * wi_mu * dot(wcj, mu);
            c.equal(lhs - rhs, scale);
        }
    }
    Ok(c.done())
}

/// `d′ᵢ = λᵢ − n(wᵢᵀμ)²`, sorted non-increasing against `λc`.
pub fn covariance_dprime_entries(raw: &EigenPairSet, centered: &EigenPairSet, mu: &[f64]) -> Result<Vec<BoundEntry>> {
    check_dim(raw, mu)?;
    let n = sample_count(raw);
    let d: Vec<f64> = (0..raw.len())
        .map(|i| {
            let s = dot(&raw.vector(i), mu);
            raw.lambda(i) - n * s * s
        })
        .collect();
    Ok(bound_entries(&d, &centered.lambdas()))
}

#[derive(Debug, Clone, Serialize)]
pub struct CovarianceBounds {
    /// Partial sums of `λᵢ − n(wᵢᵀμ)²` below those of `λc`.
    pub cumulative: Check,
    /// `λ₁ − λc₁ ≤ n(w₁ᵀμ)²`.
    pub first_eigvec_mean: Check,
    /// `(wc₁ᵀμ)²/‖μ‖² ≤ (w₁ᵀwc₁)²`.
    pub inner_product: Check,
    /// `cos(wc₁, μ)² ≤ cos(wc₁, w₁)²`.
    pub cosine: Check,
}

pub fn check_covariance_bounds(raw: &EigenPairSet, centered: &EigenPairSet, mu: &[f64]) -> Result<CovarianceBounds> {
    let entries = covariance_dprime_entries(raw, centered, mu)?;
    let l1 = raw.lambda_max();
    let scale = unit_floor(l1);
    let n = sample_count(raw);
    let cumulative = check_cumulative_bounds("covariance_cumulative_bounds", &entries, l1);

    let mut first_eigvec_mean = Check::new("first_eigvec_mean_bound", tol::COVARIANCE);
    if !raw.is_empty() {
        let s = dot(&raw.vector(0), mu);
        first_eigvec_mean.at_least(n * s * s - (l1 - centered.lambda_max()), scale);
    }

    let mu_norm = norm(mu);
    let simple = |set: &EigenPairSet| {
        set.len() < 2 || set.lambda(0) - set.lambda(1) > tol::SIMPLE_GAP * set.lambda(0).abs()
    };
    let reason = if raw.is_empty() {
        Some("no eigenpairs")
    } else if mu_norm <= tol::DEGENERATE_MEAN {
        Some("mean vector is numerically zero")
    } else if !simple(raw) || !simple(centered) {
        Some("leading eigenvalue is not simple")
    } else {
        None
    };
    let (inner_product, cosine) = match reason {
        Some(r) => (
            Check::degenerate("eigvec_inner_product_bound", r),
            Check::degenerate("cosine_bound", r),
        ),
        None => {
            let w1 = raw.vector(0);
            let wc1 = centered.vector(0);
            let w1_wc1 = dot(&w1, &wc1);
            let wc1_mu = dot(&wc1, mu);
            let inner = Check::new("eigvec_inner_product_bound", tol::COVARIANCE)
                .at_least(w1_wc1 * w1_wc1 - wc1_mu * wc1_mu / (mu_norm * mu_norm), scale)
                .done();
            let cos_mu = wc1_mu / (norm(&wc1) * mu_norm);
            let cos_w = w1_wc1 / (norm(&wc1) * norm(&w1));
            let cosine = Check::new("cosine_bound", tol::COVARIANCE)
                .at_least(cos_w * cos_w - cos_mu * cos_mu, scale)
                .done();
            (inner, cosine)
        }
    };
    Ok(CovarianceBounds {
        cumulative,
        first_eigvec_mean,
        inner_product,
        cosine,
    })
}

/// `maxᵢ λᵢ − 2n·wᵢᵀμω·wᵢᵀμ + n(wᵢᵀμω)² ≤ λc₁`, where `λc` are the
/// eigenvalues of the weighted covariance `C − μωμᵀ − μμωᵀ + μωμωᵀ`.
pub fn check_weighted_covariance_bound(
    raw: &EigenPairSet,
    centered_weighted: &EigenPairSet,
    mu: &[f64],
    mu_omega: &[f64],
) -> Result<Check> {
    check_dim(raw, mu)?;
    check_dim(raw, mu_omega)?;
    let n = sample_count(raw);
    let max = (0..raw.len())
        .map(|i| {
            let w = raw.vector(i);
            let a = dot(&w, mu_omega);
            raw.lambda(i) - 2.0 * n * a * dot(&w, mu) + n * a * a
        })
        .fold(f64::NEG_INFINITY, f64::max);
    let mut c = Check::new("weighted_covariance_bound", tol::COVARIANCE);
    if max.is_finite() {
        c.at_least(centered_weighted.lambda_max() - max, unit_floor(raw.lambda_max()));
    }
    Ok(c.done())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::centering::{center_data, mean_vector, CenteringScheme, WeightVector};
    use crate::kernels::{gram_matrix, KernelSpec};
    use crate::spectral::EigenSource;
    use approx::assert_abs_diff_eq;

    fn three_columns() -> DataMatrix {
        DataMatrix::from_samples(&[vec![1.0, 0.0], vec![0.0, 1.0], vec![2.0, 2.0]]).unwrap()
    }

    fn sets(x: &DataMatrix) -> (Vec<f64>, EigenPairSet, EigenPairSet) {
        let mu = mean_vector(x).unwrap().mu.unwrap();
        let raw = EigenPairSet::from_data_moment(x, EigenSource::MomentRaw).unwrap();
        let xc = center_data(x, &CenteringScheme::Mean).unwrap();
        let cen = EigenPairSet::from_data_moment(&xc, EigenSource::MomentCentered).unwrap();
        (mu, raw, cen)
    }

    #[test]
    fn mean_score_on_three_columns() {
        let x = three_columns();
        let mu = mean_vector(&x).unwrap().mu.unwrap();
        let k = gram_matrix(&x, &KernelSpec::Linear).unwrap();
        let raw = EigenPairSet::from_gram(&k, EigenSource::GramRaw).unwrap();
        let c = check_mean_score_identity(&x, &mu, &raw).unwrap();
        assert!(c.passed());
        assert_eq!(c.len(), 2);
        assert!(mean_score(&[1.0, 0.0], &mu, 0.0, 1.0, 3).is_err());
    }

    #[test]
    fn zero_mean_scores_vanish() {
        let x = DataMatrix::from_samples(&[vec![1.0, 2.0], vec![-1.0, -2.0]]).unwrap();
        let mu = mean_vector(&x).unwrap().mu.unwrap();
        let (lhs, rhs) = mean_score(&[0.6, 0.8], &mu, 10.0, 0.0, 2).unwrap();
        assert_eq!((lhs, rhs), (0.0, 0.0));
    }

    #[test]
    fn coupling_and_bounds_on_three_columns() {
        let x = three_columns();
        let (mu, raw, cen) = sets(&x);
        assert!(check_covariance_trace_law(&raw, &cen, &mu).passed());
        let c = check_lemma_coupling(&raw, &cen, &mu).unwrap();
        assert!(c.passed());
        assert_eq!(c.len(), 4);
        let b = check_covariance_bounds(&raw, &cen, &mu).unwrap();
        for chk in [&b.cumulative, &b.first_eigvec_mean, &b.inner_product, &b.cosine] {
            assert!(chk.passed(), "{chk:?}");
        }
    }

    #[test]
    fn zero_mean_is_degenerate_for_direction_bounds() {
        let x = DataMatrix::from_samples(&[vec![3.0, 1.0], vec![-3.0, -1.0], vec![0.5, -2.0], vec![-0.5, 2.0]]).unwrap();
        let (mu, raw, cen) = sets(&x);
        let b = check_covariance_bounds(&raw, &cen, &mu).unwrap();
        assert_eq!(b.inner_product.status(), crate::spectral::CheckStatus::Degenerate);
        assert_eq!(b.cosine.status(), crate::spectral::CheckStatus::Degenerate);
        // λ₁ − λc₁ ≤ 0 with equality.
        assert_abs_diff_eq!(raw.lambda(0), cen.lambda(0), epsilon = 1e-12);
        assert!(b.first_eigvec_mean.passed());
    }

    #[test]
    fn weighted_covariance_reduces_to_mean_case() {
        let x = three_columns();
        let (mu, raw, cen) = sets(&x);
        let c = check_weighted_covariance_bound(&raw, &cen, &mu, &mu).unwrap();
        assert!(c.passed());
        let w = WeightVector::new(vec![0.5, 0.5, 0.0]).unwrap();
        let mw = w.weighted_mean(&x).unwrap();
        let xw = center_data(&x, &CenteringScheme::Weighted(w)).unwrap();
        let cw = EigenPairSet::from_data_moment(&xw, EigenSource::MomentCentered).unwrap();
        assert!(check_weighted_covariance_bound(&raw, &cw, &mu, &mw).unwrap().passed());
    }
}
