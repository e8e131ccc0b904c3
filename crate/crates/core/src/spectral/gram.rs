use serde::Serialize;

use super::{BoundEntry, Check, EigenPairSet};
use crate::centering::WeightVector;
use crate::error::{Error, Result};
use crate::kernels::GramMatrix;
use crate::linalg::{dot, sym_eigen, SymmetricMatrix};
use crate::tolerances as tol;

fn nonzero(x: f64) -> f64 {
    if x != 0.0 && x.is_finite() {
        x.abs()
    } else {
        1.0
    }
}

fn unit_floor(x: f64) -> f64 {
    x.abs().max(1.0)
}

fn n_of(set: &EigenPairSet) -> f64 {
    set.len() as f64
}

/// `(1/n²) Σ λᵢ (αᵢᵀ1)²`, the spectral form of `‖μ‖²`.
pub fn mean_norm_sq_spectral(raw: &EigenPairSet) -> f64 {
    let n = n_of(raw);
    (0..raw.len())
        .map(|i| raw.lambda(i) * raw.ones_overlaps[i] * raw.ones_overlaps[i])
        .sum::<f64>()
        / (n * n)
}

/// `1ᵀK1/n²` against `Σλᵢ(αᵢᵀ1)²/n²`.
pub fn check_mean_norm_formulas(k: &GramMatrix, raw: &EigenPairSet) -> Check {
    let n = k.n() as f64;
    let grand = k.matrix.grand_sum() / (n * n);
    let spectral = mean_norm_sq_spectral(raw);
    Check::new("mean_norm_two_formulas", tol::MEAN_NORM)
        .equal(grand - spectral, unit_floor(grand))
        .done()
}

/// `Σᵢ(αᵢᵀ1)² = n`, and each `(αᵢᵀ1)² ≤ n`.
pub fn check_ones_completeness(raw: &EigenPairSet) -> Check {
    let n = n_of(raw);
    let mut c = Check::new("ones_overlap_completeness", tol::MEAN_NORM);
    let total: f64 = raw.ones_overlaps.iter().map(|o| o * o).sum();
    c.equal(total - n, unit_floor(n));
    for o in &raw.ones_overlaps {
        c.at_least(n - o * o, unit_floor(n));
    }
    c.done()
}

/// `λ₁ ≥ 1ᵀK1/n`, the Rayleigh quotient at `1/√n`.
pub fn check_courant_fischer(k: &GramMatrix, raw: &EigenPairSet) -> Check {
    let n = k.n() as f64;
    let l1 = raw.lambda_max();
    Check::new("courant_fischer", tol::TRACE_LAW)
        .at_least(l1 - k.matrix.grand_sum() / n, nonzero(l1))
        .done()
}

/// Partial sums of the sorted diagonal of `m` are dominated by partial sums
/// of its eigenvalues, with equality for the full sum.
pub fn check_schur_horn(name: &str, m: &SymmetricMatrix, eigenvalues: &[f64]) -> Check {
    let mut diag = m.diag();
    diag.sort_by(|a, b| b.total_cmp(a));
    let scale = eigenvalues.iter().fold(1.0_f64, |s, l| s.max(l.abs()));
    let mut c = Check::new(name, tol::CUMULATIVE);
    let (mut sd, mut sl) = (0.0, 0.0);
    let n = diag.len();
    for t in 0..n {
        sd += diag[t];
        sl += eigenvalues[t];
        if t + 1 < n {
            c.at_least(sl - sd, scale);
        } else {
            c.equal(sl - sd, unit_floor(sl).max(scale));
        }
    }
    c.done()
}

/// `tr(Kc) = tr(K) − n‖μ‖²`, and the equivalent ratio form
/// `tr(Kc)/tr(K) = 1 − 1ᵀK1/(n·tr K)` when `tr K ≠ 0`.
pub fn check_trace_lemma(k: &GramMatrix, kc: &GramMatrix, mu_norm_sq: f64) -> Check {
    let n = k.n() as f64;
    let tk = k.matrix.trace();
    let tkc = kc.matrix.trace();
    let scale = unit_floor(tk);
    let mut c = Check::new("trace_law", tol::TRACE_LAW);
    c.equal(tkc - tk + n * mu_norm_sq, scale);
    if tk != 0.0 {
        let ratio = tkc / tk - (1.0 - k.matrix.grand_sum() / (n * tk));
        c.equal(ratio * tk.abs(), scale);
    }
    c.done()
}

/// `tr(Kc) = tr(K) − 2·1ᵀKω + n·ωᵀKω`. For the linear kernel this is
/// `tr(K) − 2n·μωᵀμ + n‖μω‖²`.
pub fn check_weighted_trace_law(k: &GramMatrix, kc: &GramMatrix, omega: &WeightVector) -> Result<Check> {
    let n = k.n() as f64;
    let kw = k.matrix.matvec(omega.as_slice())?;
    let ones_k_omega: f64 = kw.iter().sum();
    let wkw = dot(omega.as_slice(), &kw);
    let tk = k.matrix.trace();
    let expected = tk - 2.0 * ones_k_omega + n * wkw;
    Ok(Check::new("weighted_trace_law", tol::TRACE_LAW)
        .equal(kc.matrix.trace() - expected, unit_floor(tk))
        .done())
}

/// `λⱼ₊₁ ≤ λcⱼ ≤ λⱼ` for `j < n`, and `λcₙ = 0`.
pub fn check_interlacing(raw: &EigenPairSet, centered: &EigenPairSet) -> Check {
    let l = raw.lambdas();
    let lc = centered.lambdas();
    let scale = nonzero(raw.lambda_max());
    let mut c = Check::new("interlacing", tol::INTERLACING);
    let n = l.len().min(lc.len());
    for j in 0..n.saturating_sub(1) {
        c.at_least(l[j] - lc[j], scale);
        c.at_least(lc[j] - l[j + 1], scale);
    }
    if let Some(last) = lc.last() {
        c.equal(*last, scale);
    }
    c.done()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Proportions {
    pub pi: Vec<f64>,
    pub pi_c: Vec<f64>,
    pub gamma: f64,
}

/// `πⱼ = λⱼ/Σλᵢ`, `πcⱼ = λcⱼ/Σλcᵢ` and `γ = tr(Kc)/tr(K)`.
pub fn proportions(raw: &EigenPairSet, centered: &EigenPairSet, k: &GramMatrix, kc: &GramMatrix) -> Result<Proportions> {
    let sl: f64 = raw.lambdas().iter().sum();
    let slc: f64 = centered.lambdas().iter().sum();
    let tk = k.matrix.trace();
    if !(sl > 0.0 && slc > 0.0 && tk > 0.0) {
        return Err(Error::InvalidParameter(
            "proportions need positive traces for both matrices".into(),
        ));
    }
    Ok(Proportions {
        pi: raw.lambdas().iter().map(|l| l / sl).collect(),
        pi_c: centered.lambdas().iter().map(|l| l / slc).collect(),
        gamma: kc.matrix.trace() / tk,
    })
}

/// `πⱼ₊₁ ≤ γπcⱼ ≤ πⱼ`.
pub fn check_proportion_interlacing(p: &Proportions) -> Check {
    let mut c = Check::new("proportion_interlacing", tol::PROPORTION);
    let n = p.pi.len().min(p.pi_c.len());
    for j in 0..n.saturating_sub(1) {
        let mid = p.gamma * p.pi_c[j];
        c.at_least(p.pi[j] - mid, 1.0);
        c.at_least(mid - p.pi[j + 1], 1.0);
    }
    c.done()
}

/// `d′ᵢ = λᵢ + (‖μ‖² − 2λᵢ/n)(αᵢᵀ1)²`, in eigenpair order.
pub fn dprime_values(raw: &EigenPairSet, mu_norm_sq: f64) -> Vec<f64> {
    let n = n_of(raw);
    (0..raw.len())
        .map(|i| {
            let l = raw.lambda(i);
            let o = raw.ones_overlaps[i];
            l + (mu_norm_sq - 2.0 * l / n) * o * o
        })
        .collect()
}

/// `d′ᵢ = λᵢ + (ωᵀKω·αᵢᵀ1 − 2λᵢ·αᵢᵀω)·αᵢᵀ1`, the diagonal of `AᵀKcA`
/// under weighted centering. With `ω = 1/n` it equals [`dprime_values`].
pub fn weighted_dprime_values(raw: &EigenPairSet, omega: &WeightVector, omega_k_omega: f64) -> Result<Vec<f64>> {
    if omega.len() != raw.len() {
        return Err(Error::DimensionMismatch {
            expected: raw.len(),
            found: omega.len(),
        });
    }
    Ok((0..raw.len())
        .map(|i| {
            let l = raw.lambda(i);
            let o = raw.ones_overlaps[i];
            let aw = dot(&raw.vector(i), omega.as_slice());
            l + (omega_k_omega * o - 2.0 * l * aw) * o
        })
        .collect())
}

/// Sorts `d′` non-increasing (stable, so ties keep eigenpair order) and pairs
/// each with the centered eigenvalue of the same rank.
pub fn bound_entries(dprime: &[f64], lambda_c: &[f64]) -> Vec<BoundEntry> {
    let mut order: Vec<usize> = (0..dprime.len()).collect();
    order.sort_by(|&a, &b| dprime[b].total_cmp(&dprime[a]));
    let (mut cd, mut cl) = (0.0, 0.0);
    order
        .into_iter()
        .zip(lambda_c)
        .map(|(i, &lc)| {
            cd += dprime[i];
            cl += lc;
            BoundEntry {
                index: i + 1,
                d_prime: dprime[i],
                lambda_c: lc,
                cumulative_d: cd,
                cumulative_lambda_c: cl,
            }
        })
        .collect()
}

pub fn schur_horn_dprime_gram(raw: &EigenPairSet, centered: &EigenPairSet, mu_norm_sq: f64) -> Vec<BoundEntry> {
    bound_entries(&dprime_values(raw, mu_norm_sq), &centered.lambdas())
}

/// Each `d′ᵢ` equals `αᵢᵀKcαᵢ` evaluated directly.
pub fn check_dprime_diagonal(raw: &EigenPairSet, kc: &GramMatrix, dprime: &[f64]) -> Result<Check> {
    let scale = unit_floor(raw.lambda_max());
    let mut c = Check::new("dprime_diagonal_identity", tol::DPRIME_IDENTITY);
    for (i, d) in dprime.iter().enumerate() {
        let direct = kc.matrix.quadratic_form(&raw.vector(i))?;
        c.equal(d - direct, scale);
    }
    Ok(c.done())
}

/// `Σᵗ d′ ≤ Σᵗ λc` for every `t < n` (slack relative to `max(1, λ₁)`), with
/// equality at `t = n` (relative to `max(1, Σλc)`).
pub fn check_cumulative_bounds(name: &str, entries: &[BoundEntry], lambda_1: f64) -> Check {
    let scale = unit_floor(lambda_1);
    let mut c = Check::new(name, tol::CUMULATIVE);
    for (t, e) in entries.iter().enumerate() {
        if t + 1 < entries.len() {
            c.at_least(e.cumulative_lambda_c - e.cumulative_d, scale);
        } else {
            c.equal(e.cumulative_lambda_c - e.cumulative_d, unit_floor(e.cumulative_lambda_c).max(scale));
        }
    }
    c.done()
}

/// Centered eigenvalues at or below this are treated as zero by the
/// eigenvector constraints. `Kc` carries absolute rounding error of order
/// `ε·k_norm` from its formation, where `k_norm` is the larger of `‖K‖_F`
/// and `‖Kc‖_F`, so an eigenvector whose eigenvalue is within
/// `ZERO_EIGENVALUE · k_norm` of zero is not determined finely enough to
/// test, even when that eigenvalue is large relative to `λc₁`.
pub fn constraint_threshold(centered: &EigenPairSet, k_norm: f64) -> f64 {
    centered.zero_threshold().max(tol::ZERO_EIGENVALUE * k_norm)
}

/// `αcⱼᵀ1 = 0` whenever `λcⱼ` is above [`constraint_threshold`].
pub fn check_eigvec_sum_zero(centered: &EigenPairSet, k_norm: f64) -> Check {
    let root_n = n_of(centered).sqrt();
    let zero = constraint_threshold(centered, k_norm);
    let mut c = Check::new("eigvec_sum_zero", tol::EIGVEC_SUM);
    for j in 0..centered.len() {
        if centered.lambda(j) > zero {
            c.equal(centered.ones_overlaps[j], root_n);
        }
    }
    c.done()
}

/// `αcⱼᵀω = 0` whenever `λcⱼ` is above [`constraint_threshold`]. The
/// residual is measured against `max(1, ‖ω‖)`; weights with large entries
/// of both signs magnify the rounding in `αcⱼᵀω` by `‖ω‖`.
pub fn check_weighted_eigvec_constraint(centered: &EigenPairSet, omega: &WeightVector, k_norm: f64) -> Result<Check> {
    if omega.len() != centered.len() {
        return Err(Error::DimensionMismatch {
            expected: centered.len(),
            found: omega.len(),
        });
    }
    let zero = constraint_threshold(centered, k_norm);
    let scale = dot(omega.as_slice(), omega.as_slice()).sqrt().max(1.0);
    let mut c = Check::new("weighted_eigvec_constraint", tol::WEIGHTED_EIGVEC);
    for j in 0..centered.len() {
        if centered.lambda(j) > zero {
            c.equal(dot(&centered.vector(j), omega.as_slice()), scale);
        }
    }
    Ok(c.done())
}

/// Every eigenvector entry lies in `[−1, 1]`.
pub fn check_box_constraint(set: &EigenPairSet) -> Check {
    let max = set
        .decomposition
        .eigenvectors
        .as_slice()
        .iter()
        .fold(0.0_f64, |m, v| m.max(v.abs()));
    Check::new("box_constraint", tol::BOX)
        .at_least(1.0 - max, 1.0)
        .done()
}

/// `AᵀKcA` has the spectrum of `Kc`, with `A` the eigenvectors of `K`.
pub fn check_lemma_same_eigs(raw: &EigenPairSet, kc: &GramMatrix, centered: &EigenPairSet) -> Result<Check> {
    let rotated = kc.matrix.congruence(&raw.decomposition.eigenvectors)?;
    let eig = sym_eigen(&rotated)?;
    let scale = unit_floor(centered.lambda_max());
    let mut c = Check::new("lemma_same_eigenvalues", tol::SAME_EIGENVALUES);
    for (a, b) in eig.eigenvalues.iter().zip(centered.lambdas()) {
        c.equal(a - b, scale);
    }
    Ok(c.done())
}

/// `maxᵢ d′ᵢ ≤ λc₁` for the weighted `d′` values.
pub fn check_weighted_bounds(dprime: &[f64], centered: &EigenPairSet, lambda_1: f64) -> Check {
    let max = dprime.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mut c = Check::new("weighted_bound", tol::INTERLACING);
    if max.is_finite() {
        c.at_least(centered.lambda_max() - max, nonzero(lambda_1));
    }
    c.done()
}
