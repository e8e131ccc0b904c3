use serde::Serialize;

use crate::data::DataMatrix;
use crate::error::{Error, Result};
use crate::kernels::{kernel_column, GramMatrix, KernelSpec};
use crate::linalg::dot;
use crate::spectral::{EigenPairSet, EigenSource};

/// Threshold below which the entropy total is reported as a null density,
/// relative to `max(1, tr(K)/n)`.
pub const NULL_DENSITY: f64 = 1e-10;

/// Split of the quadratic Rényi entropy estimate `(1/n²)1ᵀK1` over the
/// eigenpairs of `K`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EntropyDecomposition {
    /// `λᵢ(αᵢᵀ1)²/n²`, in eigenvalue order.
    pub terms: Vec<f64>,
    pub total: f64,
    /// Indices (0-based) of the largest terms, largest first; ties go to the
    /// smaller index.
    pub selected: Vec<usize>,
    /// Set when the total is numerically zero, as happens for a centered
    /// Gram matrix. The density estimate is then useless.
    pub null_density: bool,
}

pub fn keca_from_pairs(raw: &EigenPairSet, m: usize) -> Result<EntropyDecomposition> {
    let n = raw.len();
    if m > n {
        return Err(Error::RankExceeded { requested: m, rank: n });
    }
    let nn = (n * n) as f64;
    let terms: Vec<f64> = (0..n)
        .map(|i| raw.lambda(i) * raw.ones_overlaps[i] * raw.ones_overlaps[i] / nn)
        .collect();
    let total = terms.iter().sum::<f64>();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| terms[b].total_cmp(&terms[a]));
    order.truncate(m);
    let scale = (raw.lambdas().iter().sum::<f64>() / n.max(1) as f64).max(1.0);
    Ok(EntropyDecomposition {
        null_density: total.abs() <= NULL_DENSITY * scale,
        terms,
        total,
        selected: order,
    })
}

/// Entropy terms of a non-centered Gram matrix and the `m` eigenpairs that
/// contribute most to them.
pub fn keca_decompose(k: &GramMatrix, m: usize) -> Result<EntropyDecomposition> {
    keca_from_pairs(&EigenPairSet::from_gram(k, EigenSource::GramRaw)?, m)
}

/// Parzen window estimate `p̂(x) = (1/n)1ᵀκ(x)`, up to the kernel's
/// normalizing constant.
pub fn parzen_density(x: &DataMatrix, spec: &KernelSpec, point: &[f64]) -> Result<f64> {
    let col = kernel_column(x, spec, point)?;
    Ok(col.iter().sum::<f64>() / x.n() as f64)
}

/// `|αᵢ₊₁ᵀαcᵢ|` for `i < count`: how closely each centered eigenvector
/// resembles the non-centered one a rank below it.
pub fn shifted_pair_similarity(raw: &EigenPairSet, centered: &EigenPairSet, count: usize) -> Vec<f64> {
    (0..count.min(raw.len().saturating_sub(1)).min(centered.len()))
        .map(|i| dot(&raw.vector(i + 1), &centered.vector(i)).abs())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::centering::{double_center, mean_norm_sq_from_gram, CenteringScheme};
    use crate::kernels::{gram_matrix, GramKind};
    use crate::linalg::SymmetricMatrix;
    use approx::assert_abs_diff_eq;

    #[test]
    fn identity_gram() {
        let k = GramMatrix::new(SymmetricMatrix::identity(4), GramKind::Psd);
        let e = keca_decompose(&k, 2).unwrap();
        for t in &e.terms {
            assert_abs_diff_eq!(*t, 1.0 / 16.0, epsilon = 1e-15);
        }
        assert_abs_diff_eq!(e.total, 0.25, epsilon = 1e-15);
        assert_eq!(e.selected, vec![0, 1]);
        assert!(!e.null_density);
    }

    #[test]
    fn ones_gram_has_single_term() {
        let k = GramMatrix::new(SymmetricMatrix::outer(&[1.0; 5]), GramKind::Psd);
        let e = keca_decompose(&k, 1).unwrap();
        assert_abs_diff_eq!(e.terms[0], 1.0, epsilon = 1e-12);
        assert!(e.terms[1..].iter().all(|t| t.abs() <= 1e-12));
        assert_abs_diff_eq!(e.total, 1.0, epsilon = 1e-12);
        assert_eq!(e.selected, vec![0]);
    }

    #[test]
    fn total_matches_grand_sum_and_centering_nulls_it() {
        let x = DataMatrix::from_samples(&[vec![0.0, 1.0], vec![1.0, 0.5], vec![2.0, -1.0], vec![0.3, 0.3]]).unwrap();
        let k = gram_matrix(&x, &KernelSpec::gaussian(0.7).unwrap()).unwrap();
        let e = keca_decompose(&k, 4).unwrap();
        let grand = mean_norm_sq_from_gram(&k);
        assert!((e.total - grand).abs() <= 1e-10 * grand);
        assert_eq!(e.selected.len(), 4);
        let kc = double_center(&k, &CenteringScheme::Mean).unwrap();
        let ec = keca_decompose(&kc, 1).unwrap();
        assert!(ec.total.abs() <= 1e-10);
        assert!(ec.null_density);
    }

    #[test]
    fn selection_ties_prefer_smaller_index() {
        let raw = EigenPairSet::from_gram(
            &GramMatrix::new(SymmetricMatrix::identity(3), GramKind::Psd),
            EigenSource::GramRaw,
        )
        .unwrap();
        assert_eq!(keca_from_pairs(&raw, 3).unwrap().selected, vec![0, 1, 2]);
        assert!(keca_from_pairs(&raw, 4).is_err());
    }

    #[test]
    fn parzen_is_mean_kernel_value() {
        let x = DataMatrix::from_samples(&[vec![0.0], vec![2.0]]).unwrap();
        let p = parzen_density(&x, &KernelSpec::Linear, &[3.0]).unwrap();
        assert_abs_diff_eq!(p, 3.0, epsilon = 1e-15);
    }
}
