//! The affine-plus-rank-one update `C' = (1 − ν)C + ν vvᵀ` and the
//! eigenvalue relations it satisfies.
//!
//! The relations are homogeneous in the sample count that converts moment
//! eigenvalues to Gram-scale ones, so they are evaluated directly on the
//! eigenvalues of `C` (sample count 1).

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{dot, sym_eigen, EigenDecomposition, SymmetricMatrix};
use crate::spectral::Check;
use crate::tolerances::INTERLACING;

/// Minimum `|wᵢᵀv|` for the cosine bound of eigenvector `i` to be evaluated.
pub const COSINE_GUARD: f64 = 1e-10;

fn check_nu(nu: f64) -> Result<()> {
    if nu > 0.0 && nu < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("step size must lie strictly inside (0, 1), got {nu}")))
    }
}

pub fn rank_one_step(c: &SymmetricMatrix, v: &[f64], nu: f64) -> Result<SymmetricMatrix> {
    check_nu(nu)?;
    if v.len() != c.n() {
        return Err(Error::DimensionMismatch {
            expected: c.n(),
            found: v.len(),
        });
    }
    SymmetricMatrix::from_upper_fn(c.n(), |i, j| (1.0 - nu) * c.get(i, j) + nu * v[i] * v[j])
}

#[derive(Debug, Clone, Serialize)]
pub struct RankOneStep {
    pub nu: f64,
    pub v: Vec<f64>,
    pub eigen_before: EigenDecomposition,
    pub eigen_after: EigenDecomposition,
    /// `Σλ' = (1 − ν)Σλ + ν‖v‖²`.
    pub trace_law: Check,
    /// `maxᵢ (1 − ν)λᵢ + ν(wᵢᵀv)² ≤ λ'₁`.
    pub lower_bound: Check,
    /// `(λ'ⱼ − (1 − ν)λᵢ)·wᵢᵀw'ⱼ = ν·wᵢᵀv·w'ⱼᵀv` for all `(i, j)`.
    pub coupling: Check,
    /// `cos(wᵢ, w'₁)² ≤ cos(w'₁, v)² / cos(wᵢ, v)²`.
    pub cosine_bound: Check,
    /// Margin of the cosine bound per eigenvector `i`; `None` where
    /// `|wᵢᵀv|` is below [`COSINE_GUARD`].
    pub cosine_margins: Vec<Option<f64>>,
    pub next: SymmetricMatrix,
}

impl RankOneStep {
    pub fn passed(&self) -> bool {
        [&self.trace_law, &self.lower_bound, &self.coupling, &self.cosine_bound]
            .iter()
            .all(|c| c.passed())
    }
}

pub fn rank_one_analyze(c: &SymmetricMatrix, v: &[f64], nu: f64) -> Result<RankOneStep> {
    let next = rank_one_step(c, v, nu)?;
    let before = sym_eigen(c)?;
    let after = sym_eigen(&next)?;
    let l1 = before.eigenvalues.first().copied().unwrap_or(0.0);
    let l1_next = after.eigenvalues.first().copied().unwrap_or(0.0);
    let scale = l1.abs().max(l1_next.abs()).max(1.0);
    let vv = dot(v, v);

    let trace_law = Check::new("rank_one_trace_law", INTERLACING)
        .equal(
            after.eigenvalues.iter().sum::<f64>() - (1.0 - nu) * before.eigenvalues.iter().sum::<f64>() - nu * vv,
            scale,
        )
        .done();

    let w = before.vectors();
    let w_next = after.vectors();
    let wv: Vec<f64> = w.iter().map(|wi| dot(wi, v)).collect();
    let wv_next: Vec<f64> = w_next.iter().map(|wj| dot(wj, v)).collect();

    let max_lower = w
        .iter()
        .enumerate()
        .map(|(i, _)| (1.0 - nu) * before.eigenvalues[i] + nu * wv[i] * wv[i])
        .fold(f64::NEG_INFINITY, f64::max);
    let mut lower_bound = Check::new("rank_one_lower_bound", INTERLACING);
    if max_lower.is_finite() {
        lower_bound.at_least(l1_next - max_lower, scale);
    }

    let mut coupling = Check::new("rank_one_coupling", INTERLACING);
    for (i, wi) in w.iter().enumerate() {
        for (j, wj) in w_next.iter().enumerate() {
            let lhs = (after.eigenvalues[j] - (1.0 - nu) * before.eigenvalues[i]) * dot(wi, wj);
            coupling.equal(lhs - nu * wv[i] * wv_next[j], scale);
        }
    }

    let mut cosine_bound = Check::new("rank_one_cosine_bound", INTERLACING);
    let mut cosine_margins = Vec::with_capacity(w.len());
    match w_next.first() {
        Some(w1) if vv > 0.0 => {
            let cos_w1_v_sq = wv_next[0] * wv_next[0] / vv;
            for (i, wi) in w.iter().enumerate() {
                if wv[i].abs() <= COSINE_GUARD {
                    cosine_margins.push(None);
                    continue;
                }
                let rhs = cos_w1_v_sq / (wv[i] * wv[i] / vv);
                let cos = dot(wi, w1);
                let margin = rhs - cos * cos;
                cosine_bound.at_least(margin, rhs.max(1.0));
                cosine_margins.push(Some(margin));
            }
        }
        _ => cosine_margins.resize(w.len(), None),
    }

    Ok(RankOneStep {
        nu,
        v: v.to_vec(),
        eigen_before: before,
        eigen_after: after,
        trace_law,
        lower_bound: lower_bound.done(),
        coupling: coupling.done(),
        cosine_bound: cosine_bound.done(),
        cosine_margins,
        next,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct RankOneTrace {
    pub steps: Vec<RankOneStep>,
}

impl RankOneTrace {
    pub fn passed(&self) -> bool {
        self.steps.iter().all(RankOneStep::passed)
    }
}

/// Applies the updates in order, analyzing each step.
pub fn rank_one_trace(c0: &SymmetricMatrix, updates: &[(Vec<f64>, f64)]) -> Result<RankOneTrace> {
    let mut c = c0.clone();
    let mut steps = Vec::with_capacity(updates.len());
    for (v, nu) in updates {
        let step = rank_one_analyze(&c, v, *nu)?;
        c = step.next.clone();
        steps.push(step);
    }
    Ok(RankOneTrace { steps })
}
