//! Dense matrix primitives and the symmetric eigensolver.
//!
//! Everything downstream (Gram matrices, centering, the spectral checks) is
//! built on [`SymmetricMatrix`] and [`sym_eigen`]. The eigensolver is a cyclic
//! Jacobi method: slow for large `n` but accurate to a few ulps relative to
//! `‖M‖_F`, which the verification code relies on.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Maximum number of full Jacobi sweeps before giving up.
pub const MAX_SWEEPS: usize = 100;

/// Convergence target for the off-diagonal norm, relative to `‖M‖_F`.
pub const OFF_DIAGONAL_TOLERANCE: f64 = 1e-12;

/// Dense real matrix stored row-major. All entries are finite.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawMatrix")]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

#[derive(Deserialize)]
struct RawMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl TryFrom<RawMatrix> for Matrix {
    type Error = Error;

    fn try_from(r: RawMatrix) -> Result<Self> {
        Matrix::new(r.rows, r.cols, r.data)
    }
}

impl Matrix {
    pub fn new(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                expected: rows * cols,
                found: data.len(),
            });
        }
        if let Some(k) = data.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite {
                row: k / cols.max(1),
                col: k % cols.max(1),
            });
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(rows.len() * cols);
        for row in rows {
            if row.len() != cols {
                return Err(Error::DimensionMismatch {
                    expected: cols,
                    found: row.len(),
                });
            }
            data.extend_from_slice(row);
        }
        Self::new(rows.len(), cols, data)
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = 1.0;
        }
        m
    }

    /// Builds a matrix from a generator; the caller guarantees finiteness.
    pub(crate) fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub(crate) fn set(&mut self, i: usize, j: usize, value: f64) {
        self.data[i * self.cols + j] = value;
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i))
    }

    pub fn matmul(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: other.rows,
            });
        }
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            let out_row = &mut out.data[i * other.cols..(i + 1) * other.cols];
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a == 0.0 {
                    continue;
                }
                for (o, b) in out_row.iter_mut().zip(other.row(k)) {
                    *o += a * b;
                }
            }
        }
        Ok(out)
    }

    pub fn matvec(&self, v: &[f64]) -> Result<Vec<f64>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: v.len(),
            });
        }
        Ok((0..self.rows).map(|i| dot(self.row(i), v)).collect())
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|v| v * v).sum::<f64>().sqrt()
    }
}

/// Symmetric `n × n` matrix in full storage. Every constructor symmetrizes,
/// so `get(i, j) == get(j, i)` holds bit-for-bit.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SymmetricMatrix {
    n: usize,
    data: Vec<f64>,
}

impl SymmetricMatrix {
    /// Evaluates `f` on the upper triangle (`i <= j`) and mirrors it.
    pub fn from_upper_fn(n: usize, mut f: impl FnMut(usize, usize) -> f64) -> Result<Self> {
        let mut data = vec![0.0; n * n];
        for i in 0..n {
            for j in i..n {
                let v = f(i, j);
                if !v.is_finite() {
                    return Err(Error::NonFinite { row: i, col: j });
                }
                data[i * n + j] = v;
                data[j * n + i] = v;
            }
        }
        Ok(Self { n, data })
    }

    /// Symmetrizes a square matrix as `(M + Mᵀ) / 2`.
    pub fn from_matrix(m: &Matrix) -> Result<Self> {
        if m.rows() != m.cols() {
            return Err(Error::DimensionMismatch {
                expected: m.rows(),
                found: m.cols(),
            });
        }
        Self::from_upper_fn(m.rows(), |i, j| {
            if i == j {
                m.get(i, i)
            } else {
                0.5 * (m.get(i, j) + m.get(j, i))
            }
        })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        Self::from_matrix(&Matrix::from_rows(rows)?)
    }

    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![0.0; n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::diagonal(&vec![1.0; n])
    }

    pub fn diagonal(values: &[f64]) -> Self {
        let n = values.len();
        let mut m = Self::zeros(n);
        for (i, v) in values.iter().enumerate() {
            m.data[i * n + i] = *v;
        }
        m
    }

    /// `v vᵀ`.
    pub fn outer(v: &[f64]) -> Self {
        let n = v.len();
        let mut m = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                m.data[i * n + j] = v[i] * v[j];
            }
        }
        m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn to_matrix(&self) -> Matrix {
        Matrix {
            rows: self.n,
            cols: self.n,
            data: self.data.clone(),
        }
    }

    pub fn diag(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.get(i, i)).collect()
    }

    pub fn trace(&self) -> f64 {
        trace(self)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    pub fn row_sums(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.row(i).iter().sum()).collect()
    }

    /// `1ᵀ M 1`.
    pub fn grand_sum(&self) -> f64 {
        self.row_sums().iter().sum()
    }

    pub fn matvec(&self, v: &[f64]) -> Result<Vec<f64>> {
        check_len(self.n, v.len())?;
        Ok((0..self.n).map(|i| dot(self.row(i), v)).collect())
    }

    /// `uᵀ M v`.
    pub fn bilinear(&self, u: &[f64], v: &[f64]) -> Result<f64> {
        check_len(self.n, u.len())?;
        Ok(dot(u, &self.matvec(v)?))
    }

    pub fn quadratic_form(&self, v: &[f64]) -> Result<f64> {
        self.bilinear(v, v)
    }

    pub fn scale(&self, factor: f64) -> SymmetricMatrix {
        SymmetricMatrix {
            n: self.n,
            data: self.data.iter().map(|v| v * factor).collect(),
        }
    }

    /// `Bᵀ M B` for a square `B` of matching size.
    pub fn congruence(&self, b: &Matrix) -> Result<SymmetricMatrix> {
        check_len(self.n, b.rows())?;
        let mb = self.to_matrix().matmul(b)?;
        let product = b.transpose().matmul(&mb)?;
        SymmetricMatrix::from_matrix(&product)
    }
}

fn check_len(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}

#[inline]
pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Sum of the diagonal entries.
pub fn trace(m: &SymmetricMatrix) -> f64 {
    (0..m.n()).map(|i| m.get(i, i)).sum()
}

/// `‖A − B‖_F`.
pub fn frobenius_distance(a: &SymmetricMatrix, b: &SymmetricMatrix) -> Result<f64> {
    check_len(a.n(), b.n())?;
    Ok(a.as_slice()
        .iter()
        .zip(b.as_slice())
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt())
}

/// Eigenvalues in non-increasing order and the matching orthonormal
/// eigenvectors (columns of `eigenvectors`).
///
/// `source_scale` records how the eigenvalues relate to the Gram-scale
/// spectrum: `1` for Gram matrices, `1/n` for moment matrices `XXᵀ/n`.
#[derive(Debug, Clone, Serialize)]
pub struct EigenDecomposition {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: Matrix,
    pub source_scale: f64,
}

impl EigenDecomposition {
    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    pub fn eigenvector(&self, k: usize) -> Vec<f64> {
        self.eigenvectors.column(k)
    }

    /// All eigenvectors as owned vectors, in eigenvalue order.
    pub fn vectors(&self) -> Vec<Vec<f64>> {
        (0..self.len()).map(|k| self.eigenvector(k)).collect()
    }

    /// Eigenvalue `k` expressed on the Gram scale (`λ / source_scale`).
    pub fn gram_scale_eigenvalue(&self, k: usize) -> f64 {
        self.eigenvalues[k] / self.source_scale
    }

    pub fn with_source_scale(mut self, scale: f64) -> Self {
        self.source_scale = scale;
        self
    }

    /// `V Λ Vᵀ`.
    pub fn reconstruct(&self) -> SymmetricMatrix {
        let n = self.len();
        let v = &self.eigenvectors;
        let mut data = vec![0.0; n * n];
        for i in 0..n {
            for j in i..n {
                let s: f64 = (0..n)
                    .map(|k| v.get(i, k) * self.eigenvalues[k] * v.get(j, k))
                    .sum();
                data[i * n + j] = s;
                data[j * n + i] = s;
            }
        }
        SymmetricMatrix { n, data }
    }
}

/// Symmetric eigendecomposition by cyclic Jacobi rotations.
///
/// Sweeps run over pairs `(p, q)` with `p < q` in row order, so the result is
/// deterministic for a fixed input. Each eigenvector is signed so that its
/// largest-magnitude entry (first one, on ties) is positive. Eigenvalues are
/// sorted non-increasing with a stable sort.
pub fn sym_eigen(m: &SymmetricMatrix) -> Result<EigenDecomposition> {
    let n = m.n();
    let mut a = m.data.clone();
    // Rows of `vt` are the eigenvectors being accumulated.
    let mut vt = Matrix::identity(n).data;

    let target = OFF_DIAGONAL_TOLERANCE * m.frobenius_norm();
    let off_norm = |a: &[f64]| -> f64 {
        let mut s = 0.0;
        for i in 0..n {
            for j in (i + 1)..n {
                s += a[i * n + j] * a[i * n + j];
            }
        }
        (2.0 * s).sqrt()
    };

    let mut sweeps = 0;
    let mut off = off_norm(&a);
    while off > target {
        if sweeps == MAX_SWEEPS {
            return Err(Error::NotConverged {
                sweeps,
                off_norm: off,
                target,
            });
        }
        sweep(&mut a, &mut vt, n, sweeps);
        sweeps += 1;
        off = off_norm(&a);
    }
    // Past the target, keep sweeping down to rounding level while it still
    // helps. Eigenvectors of eigenvalues near zero are only as accurate as
    // the off-diagonal residue relative to their eigenvalue.
    let floor = f64::EPSILON * m.frobenius_norm();
    while off > floor && sweeps < MAX_SWEEPS {
        sweep(&mut a, &mut vt, n, sweeps);
        sweeps += 1;
        let next = off_norm(&a);
        if next > 0.5 * off {
            break;
        }
        off = next;
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[j * n + j].total_cmp(&a[i * n + i]));

    let eigenvalues: Vec<f64> = order.iter().map(|&k| a[k * n + k]).collect();
    let mut eigenvectors = Matrix::zeros(n, n);
    for (col, &k) in order.iter().enumerate() {
        let v = &mut vt[k * n..(k + 1) * n];
        canonicalize_sign(v);
        for (i, x) in v.iter().enumerate() {
            eigenvectors.set(i, col, *x);
        }
    }

    Ok(EigenDecomposition {
        eigenvalues,
        eigenvectors,
        source_scale: 1.0,
    })
}

fn sweep(a: &mut [f64], vt: &mut [f64], n: usize, index: usize) {
    for p in 0..n {
        for q in (p + 1)..n {
            rotate(a, vt, n, p, q, index);
        }
    }
}

/// One Jacobi rotation zeroing `a[p][q]`.
fn rotate(a: &mut [f64], vt: &mut [f64], n: usize, p: usize, q: usize, sweep: usize) {
    let apq = a[p * n + q];
    if apq == 0.0 {
        return;
    }
    let app = a[p * n + p];
    let aqq = a[q * n + q];
    // Below rounding level of both diagonal entries: drop it.
    let g = 100.0 * apq.abs();
    if sweep > 3 && app.abs() + g == app.abs() && aqq.abs() + g == aqq.abs() {
        a[p * n + q] = 0.0;
        a[q * n + p] = 0.0;
        return;
    }

    let theta = (aqq - app) / (2.0 * apq);
    let t = if theta.abs() > 1e150 {
        0.5 / theta
    } else {
        theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
    };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;

    a[p * n + p] = app - t * apq;
    a[q * n + q] = aqq + t * apq;
    a[p * n + q] = 0.0;
    a[q * n + p] = 0.0;

    for r in 0..n {
        if r == p || r == q {
            continue;
        }
        let arp = a[r * n + p];
        let arq = a[r * n + q];
        let new_rp = c * arp - s * arq;
        let new_rq = s * arp + c * arq;
        a[r * n + p] = new_rp;
        a[p * n + r] = new_rp;
        a[r * n + q] = new_rq;
        a[q * n + r] = new_rq;
    }

    let (head, tail) = vt.split_at_mut(q * n);
    let vp = &mut head[p * n..(p + 1) * n];
    let vq = &mut tail[..n];
    for (x, y) in vp.iter_mut().zip(vq.iter_mut()) {
        let (g, h) = (*x, *y);
        *x = c * g - s * h;
        *y = s * g + c * h;
    }
}

/// Flips `v` so that its largest-magnitude entry is positive. Entries within
/// a relative `1e-9` of the maximum count as tied; the first of them decides.
pub(crate) fn canonicalize_sign(v: &mut [f64]) {
    let max = v.iter().fold(0.0_f64, |m, x| m.max(x.abs()));
    if max == 0.0 {
        return;
    }
    let pivot = v
        .iter()
        .position(|x| x.abs() >= max * (1.0 - 1e-9))
        .unwrap_or(0);
    if v[pivot] < 0.0 {
        v.iter_mut().for_each(|x| *x = -*x);
    }
}

/// Distance between the orthogonal projectors onto two subspaces spanned by
/// orthonormal vector sets, `‖U Uᵀ − W Wᵀ‖_F`. Used to compare eigenspaces
/// when eigenvalues are (nearly) repeated.
pub fn projector_distance(u: &[Vec<f64>], w: &[Vec<f64>]) -> f64 {
    let n = u.first().or_else(|| w.first()).map_or(0, Vec::len);
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            let pu: f64 = u.iter().map(|x| x[i] * x[j]).sum();
            let pw: f64 = w.iter().map(|x| x[i] * x[j]).sum();
            s += (pu - pw) * (pu - pw);
        }
    }
    s.sqrt()
}
