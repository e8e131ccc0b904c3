//! Kernel functions and Gram-matrix construction.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::data::DataMatrix;
use crate::error::{Error, Result};
use crate::linalg::{dot, Matrix, SymmetricMatrix};

/// A kernel function. Parses from and prints as the `name[:param[:param]]`
/// grammar used on the command line: `linear`, `poly:c:p`, `gaussian:sigma`,
/// `neg-half-sqdist`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub enum KernelSpec {
    Linear,
    /// `(c + xᵀy)^p`
    Polynomial { c: f64, p: u32 },
    /// `exp(−‖x − y‖² / 2σ²)`
    Gaussian { sigma: f64 },
    /// `−½‖x − y‖²`, conditionally positive definite.
    NegativeHalfSqDist,
}

impl KernelSpec {
    pub fn polynomial(c: f64, p: u32) -> Result<Self> {
        if p < 1 || !c.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "polynomial kernel needs finite c and p >= 1 (got c={c}, p={p})"
            )));
        }
        Ok(Self::Polynomial { c, p })
    }

    pub fn gaussian(sigma: f64) -> Result<Self> {
        if !(sigma > 0.0 && sigma.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "gaussian bandwidth must be positive (got {sigma})"
            )));
        }
        Ok(Self::Gaussian { sigma })
    }

    pub fn is_linear(&self) -> bool {
        matches!(self, Self::Linear)
    }

    pub fn gram_kind(&self) -> GramKind {
        match self {
            Self::NegativeHalfSqDist => GramKind::ConditionallyPd,
            _ => GramKind::Psd,
        }
    }
}

impl fmt::Display for KernelSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Linear => write!(f, "linear"),
            Self::Polynomial { c, p } => write!(f, "poly:{c}:{p}"),
            Self::Gaussian { sigma } => write!(f, "gaussian:{sigma}"),
            Self::NegativeHalfSqDist => write!(f, "neg-half-sqdist"),
        }
    }
}

impl FromStr for KernelSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.trim().split(':').collect();
        let num = |t: &str| -> Result<f64> {
            t.trim()
                .parse::<f64>()
                .map_err(|_| Error::InvalidParameter(format!("bad kernel parameter {t:?} in {s:?}")))
        };
        match parts.as_slice() {
            ["linear"] => Ok(Self::Linear),
            ["gaussian" | "rbf", sigma] => Self::gaussian(num(sigma)?),
            ["poly" | "polynomial", c, p] => {
                let p = p.trim().parse::<u32>().map_err(|_| {
                    Error::InvalidParameter(format!("polynomial degree must be a positive integer in {s:?}"))
                })?;
                Self::polynomial(num(c)?, p)
            }
            ["neg-half-sqdist" | "nhsd"] => Ok(Self::NegativeHalfSqDist),
            _ => Err(Error::InvalidParameter(format!(
                "unknown kernel {s:?}; expected linear, poly:c:p, gaussian:sigma or neg-half-sqdist"
            ))),
        }
    }
}

impl From<KernelSpec> for String {
    fn from(k: KernelSpec) -> String {
        k.to_string()
    }
}

impl TryFrom<String> for KernelSpec {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

/// Whether a Gram matrix is guaranteed positive semidefinite, or only
/// nonnegative on zero-sum coefficient vectors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GramKind {
    Psd,
    ConditionallyPd,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GramMatrix {
    pub matrix: SymmetricMatrix,
    pub kind: GramKind,
}

impl GramMatrix {
    pub fn new(matrix: SymmetricMatrix, kind: GramKind) -> Self {
        Self { matrix, kind }
    }

    pub fn n(&self) -> usize {
        self.matrix.n()
    }

    /// Smallest normalized quadratic form `βᵀKβ / (‖β‖²‖K‖_F)` over `probes`.
    /// For conditionally-PD matrices each probe is first projected onto the
    /// complement of `1`. Non-negative up to round-off for valid matrices.
    pub fn min_probe_margin(&self, probes: &[Vec<f64>]) -> Result<f64> {
        let scale = self.matrix.frobenius_norm().max(f64::MIN_POSITIVE);
        let mut worst = f64::INFINITY;
        for beta in probes {
            let mut b = beta.clone();
            if self.kind == GramKind::ConditionallyPd {
                let mean = b.iter().sum::<f64>() / b.len().max(1) as f64;
                b.iter_mut().for_each(|v| *v -= mean);
            }
            let nb = dot(&b, &b);
            if nb == 0.0 {
                continue;
            }
            worst = worst.min(self.matrix.quadratic_form(&b)? / (nb * scale));
        }
        Ok(worst)
    }
}

pub fn kernel_eval(spec: &KernelSpec, x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::DimensionMismatch {
            expected: x.len(),
            found: y.len(),
        });
    }
    Ok(eval_unchecked(spec, x, y))
}

fn sq_dist(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).map(|(a, b)| (a - b) * (a - b)).sum()
}

fn eval_unchecked(spec: &KernelSpec, x: &[f64], y: &[f64]) -> f64 {
    match *spec {
        KernelSpec::Linear => dot(x, y),
        KernelSpec::Polynomial { c, p } => (c + dot(x, y)).powi(p as i32),
        KernelSpec::Gaussian { sigma } => (-sq_dist(x, y) / (2.0 * sigma * sigma)).exp(),
        KernelSpec::NegativeHalfSqDist => -0.5 * sq_dist(x, y),
    }
}

/// `K_ij = κ(x_i, x_j)`, evaluated on the upper triangle and mirrored.
pub fn gram_matrix(x: &DataMatrix, spec: &KernelSpec) -> Result<GramMatrix> {
    if x.n() == 0 {
        return Err(Error::Empty);
    }
    let matrix = SymmetricMatrix::from_upper_fn(x.n(), |i, j| {
        if i == j && *spec == KernelSpec::NegativeHalfSqDist {
            0.0
        } else {
            eval_unchecked(spec, x.sample(i), x.sample(j))
        }
    })?;
    Ok(GramMatrix::new(matrix, spec.gram_kind()))
}

/// Kernel column `κ(x, x_i)` for a new point against the training samples.
pub fn kernel_column(x: &DataMatrix, spec: &KernelSpec, point: &[f64]) -> Result<Vec<f64>> {
    x.samples().map(|s| kernel_eval(spec, point, s)).collect()
}

/// Validates a square matrix of pairwise distances: symmetric (to a relative
/// `1e-12`), exactly zero diagonal, non-negative entries.
pub fn distances_from_matrix(m: &Matrix) -> Result<SymmetricMatrix> {
    if m.rows() != m.cols() {
        return Err(Error::InvalidDistances(format!(
            "matrix is {}x{}, expected square",
            m.rows(),
            m.cols()
        )));
    }
    let scale = m.as_slice().iter().fold(0.0_f64, |a, v| a.max(v.abs()));
    for i in 0..m.rows() {
        for j in (i + 1)..m.cols() {
            if (m.get(i, j) - m.get(j, i)).abs() > 1e-12 * scale {
                return Err(Error::InvalidDistances(format!(
                    "entries ({i},{j}) and ({j},{i}) differ"
                )));
            }
        }
    }
    let d = SymmetricMatrix::from_matrix(m)?;
    validate_distances(&d)?;
    Ok(d)
}

fn validate_distances(d: &SymmetricMatrix) -> Result<()> {
    for i in 0..d.n() {
        if d.get(i, i) != 0.0 {
            return Err(Error::InvalidDistances(format!(
                "diagonal entry {i} is {}, expected 0",
                d.get(i, i)
            )));
        }
        for j in 0..d.n() {
            if d.get(i, j) < 0.0 {
                return Err(Error::InvalidDistances(format!(
                    "entry ({i},{j}) is negative"
                )));
            }
        }
    }
    Ok(())
}

/// `Δ_ij = −½ d_ij²`, optionally shifted by a constant `bias` on every entry.
///
/// Without a bias the diagonal is exactly zero. A bias leaves the quadratic
/// form on zero-sum vectors, and hence the double-centered matrix, unchanged.
pub fn distance_matrix_to_delta(d: &SymmetricMatrix, bias: Option<f64>) -> Result<GramMatrix> {
    validate_distances(d)?;
    let b = bias.unwrap_or(0.0);
    if !b.is_finite() {
        return Err(Error::InvalidParameter(format!("bias must be finite (got {b})")));
    }
    let matrix = SymmetricMatrix::from_upper_fn(d.n(), |i, j| {
        let v = if i == j { 0.0 } else { -0.5 * d.get(i, j) * d.get(i, j) };
        v + b
    })?;
    Ok(GramMatrix::new(matrix, GramKind::ConditionallyPd))
}

/// Euclidean distance matrix of the samples.
pub fn euclidean_distances(x: &DataMatrix) -> SymmetricMatrix {
    SymmetricMatrix::from_upper_fn(x.n(), |i, j| {
        if i == j {
            0.0
        } else {
            sq_dist(x.sample(i), x.sample(j)).sqrt()
        }
    })
    .expect("distances of finite samples are finite")
}
