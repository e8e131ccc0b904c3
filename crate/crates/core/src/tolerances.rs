//! Default tolerances used by the verification checks.
//!
//! Relative tolerances are multiplied by the scale named next to them
//! (usually `λ₁` or `max(1, λ₁)`) when a check is evaluated.

/// `λ ≤ ZERO_EIGENVALUE · λ₁` is treated as zero.
pub const ZERO_EIGENVALUE: f64 = 1e-8;

/// Identities between two formulas for `‖μ‖²`; times `max(1, value)`.
pub const MEAN_NORM: f64 = 1e-10;

/// Trace laws; times `max(1, tr K)`.
pub const TRACE_LAW: f64 = 1e-9;

/// Interlacing and eigenvalue bounds; times `λ₁`.
pub const INTERLACING: f64 = 1e-8;

/// Proportion interlacing, absolute on proportions in `[0, 1]`.
pub const PROPORTION: f64 = 1e-10;

/// Diagonal identity for the `d′` values; times `max(1, λ₁)`.
pub const DPRIME_IDENTITY: f64 = 1e-9;

/// Partial-sum bounds; times `max(1, λ₁)` (or `max(1, tr)` at `t = n`).
pub const CUMULATIVE: f64 = 1e-8;

/// Eigenvalue agreement after a change of basis; times `max(1, λc₁)`.
pub const SAME_EIGENVALUES: f64 = 1e-7;

/// `|αcᵀ1|`; times `√n`.
pub const EIGVEC_SUM: f64 = 1e-7;

/// `|αcᵀω|`, absolute.
pub const WEIGHTED_EIGVEC: f64 = 1e-7;

/// Entry-wise box `[−1, 1]`, absolute.
pub const BOX: f64 = 1e-12;

/// Mean-score identity; times `max(1, |value|)`.
pub const MEAN_SCORE: f64 = 1e-9;

/// Covariance-side identities and inequalities; times `max(1, λ₁)`.
pub const COVARIANCE: f64 = 1e-8;

/// Eigenvector inequalities need a gap of at least this times `λ₁`.
pub const SIMPLE_GAP: f64 = 1e-8;

/// `‖μ‖` at or below this makes the direction-of-mean checks degenerate.
pub const DEGENERATE_MEAN: f64 = 1e-12;

/// Relative Frobenius residual for two-path equalities.
pub const TWO_PATH: f64 = 1e-9;
