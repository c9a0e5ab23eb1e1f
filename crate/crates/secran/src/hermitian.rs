//! Complex Hermitian matrix utilities.
//!
//! Covariance matrices, channel Gram forms and their log-determinant
//! functionals all live here: `log2_det`, the rate increment
//! [`logdet_rate`] (log₂det(A+B) − log₂det(B)), its first-order tangent
//! majorizer [`log2_det_tangent`], principal-submatrix selection on
//! per-RU antenna blocks, and a complex Jacobi eigensolver used for
//! positive-definiteness gating and rank reduction.
//!
//! All matrices are small (dim ≤ ~16); dense O(n³) routines are the
//! right tool.

use num_complex::Complex64;
use rand::Rng;

use crate::cmatrix::ComplexMatrix;
use crate::error::{Error, Result};

pub const LN_2: f64 = std::f64::consts::LN_2;

/// Relative eigenvalue floor below which a matrix is treated as singular:
/// positive definite means `lambda_min > PD_RATIO * lambda_max`.
pub const PD_RATIO: f64 = 1e-12;

/// Hermitianity tolerance accepted by the checked constructor.
pub const HERMITIAN_TOL: f64 = 1e-10;

/// Dense complex Hermitian matrix, row-major.
///
/// The storage is kept exactly Hermitian: constructors validate the input
/// to `HERMITIAN_TOL` and then symmetrize, so `get(i, j)` is always the
/// conjugate of `get(j, i)` and diagonals are exactly real.
#[derive(Clone, Debug, PartialEq)]
pub struct HermitianMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl HermitianMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: vec![Complex64::ZERO; dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        Self::from_diag(&vec![1.0; dim])
    }

    pub fn from_diag(diag: &[f64]) -> Self {
        let n = diag.len();
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.data[i * n + i] = Complex64::new(diag[i], 0.0);
        }
        m
    }

    /// Checked constructor from row-major entries.
    pub fn new(dim: usize, entries: Vec<Complex64>) -> Result<Self> {
        if entries.len() != dim * dim {
            return Err(Error::DimensionMismatch(format!(
                "expected {} entries for a {dim}x{dim} Hermitian matrix, got {}",
                dim * dim,
                entries.len()
            )));
        }
        for i in 0..dim {
            let d = entries[i * dim + i];
            if d.im.abs() > HERMITIAN_TOL {
                return Err(Error::DimensionMismatch(format!(
                    "diagonal entry ({i},{i}) has imaginary part {:.3e}",
                    d.im
                )));
            }
            for j in (i + 1)..dim {
                let delta = (entries[i * dim + j] - entries[j * dim + i].conj()).norm();
                if delta > HERMITIAN_TOL {
                    return Err(Error::DimensionMismatch(format!(
                        "entries ({i},{j}) and ({j},{i}) are not conjugates (|delta| = {delta:.3e})"
                    )));
                }
            }
        }
        let mut m = Self { dim, data: entries };
        m.symmetrize();
        Ok(m)
    }

    /// Builds from a generator that is only consulted for `i <= j`; the
    /// lower triangle is filled by conjugation.
    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            for j in i..dim {
                let v = f(i, j);
                if i == j {
                    m.data[i * dim + i] = Complex64::new(v.re, 0.0);
                } else {
                    m.data[i * dim + j] = v;
                    m.data[j * dim + i] = v.conj();
                }
            }
        }
        m
    }

    /// Internal constructor for data already known to be Hermitian.
    pub(crate) fn from_raw_unchecked(dim: usize, data: Vec<Complex64>) -> Self {
        debug_assert_eq!(data.len(), dim * dim);
        Self { dim, data }
    }

    fn symmetrize(&mut self) {
        let n = self.dim;
        for i in 0..n {
            self.data[i * n + i] = Complex64::new(self.data[i * n + i].re, 0.0);
            for j in (i + 1)..n {
                let avg = 0.5 * (self.data[i * n + j] + self.data[j * n + i].conj());
                self.data[i * n + j] = avg;
                self.data[j * n + i] = avg.conj();
            }
        }
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.dim + j]
    }

    /// Sets entry (i, j) and its conjugate mirror.
    pub fn set(&mut self, i: usize, j: usize, v: Complex64) {
        let n = self.dim;
        if i == j {
            self.data[i * n + i] = Complex64::new(v.re, 0.0);
        } else {
            self.data[i * n + j] = v;
            self.data[j * n + i] = v.conj();
        }
    }

    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    pub fn add(&self, other: &HermitianMatrix) -> HermitianMatrix {
        assert_eq!(self.dim, other.dim, "Hermitian add dimension mismatch");
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a + b)
            .collect();
        HermitianMatrix {
            dim: self.dim,
            data,
        }
    }

    pub fn sub(&self, other: &HermitianMatrix) -> HermitianMatrix {
        assert_eq!(self.dim, other.dim, "Hermitian sub dimension mismatch");
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a - b)
            .collect();
        HermitianMatrix {
            dim: self.dim,
            data,
        }
    }

    pub fn scale(&self, s: f64) -> HermitianMatrix {
        HermitianMatrix {
            dim: self.dim,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    /// `self + eps * I`.
    pub fn add_scaled_identity(&self, eps: f64) -> HermitianMatrix {
        let mut out = self.clone();
        for i in 0..self.dim {
            out.data[i * self.dim + i] += Complex64::new(eps, 0.0);
        }
        out
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim).map(|i| self.data[i * self.dim + i].re).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Principal submatrix on an explicit index list (order preserved).
    pub fn principal(&self, indices: &[usize]) -> Result<HermitianMatrix> {
        for &i in indices {
            if i >= self.dim {
                return Err(Error::IndexOutOfRange(format!(
                    "row/column {i} of a {0}x{0} matrix",
                    self.dim
                )));
            }
        }
        let k = indices.len();
        let mut data = Vec::with_capacity(k * k);
        for &i in indices {
            for &j in indices {
                data.push(self.get(i, j));
            }
        }
        Ok(HermitianMatrix { dim: k, data })
    }

    /// Embeds a small Hermitian matrix back onto `indices` of a zero
    /// `dim x dim` matrix (adjoint of `principal`).
    pub fn embed(small: &HermitianMatrix, dim: usize, indices: &[usize]) -> HermitianMatrix {
        assert_eq!(small.dim, indices.len());
        let mut out = HermitianMatrix::zeros(dim);
        for (a, &i) in indices.iter().enumerate() {
            for (b, &j) in indices.iter().enumerate() {
                out.data[i * dim + j] = small.get(a, b);
            }
        }
        out
    }

    /// Random Hermitian matrix with Gaussian entries (test/init helper).
    pub fn random(dim: usize, rng: &mut impl Rng) -> HermitianMatrix {
        let g = random_complex_gaussian_matrix(dim, dim, rng);
        let mut m = HermitianMatrix::zeros(dim);
        for i in 0..dim {
            for j in i..dim {
                let v = 0.5 * (g.get(i, j) + g.get(j, i).conj());
                m.set(i, j, if i == j { Complex64::new(v.re, 0.0) } else { v });
            }
        }
        m
    }

    /// Random positive semidefinite matrix `G G† / dim` (strictly PD with
    /// probability one).
    pub fn random_psd(dim: usize, rng: &mut impl Rng) -> HermitianMatrix {
        let g = random_complex_gaussian_matrix(dim, dim, rng);
        g.gram().scale(1.0 / dim as f64)
    }
}

/// Standard circularly-symmetric complex Gaussian with unit variance:
/// real and imaginary parts are i.i.d. N(0, 1/2).
pub fn complex_gaussian(rng: &mut impl Rng) -> Complex64 {
    // Box-Muller in polar form; 1 - u keeps the log argument in (0, 1].
    let u: f64 = 1.0 - rng.random::<f64>();
    let v: f64 = rng.random();
    let r = (-u.ln()).sqrt();
    Complex64::from_polar(r, 2.0 * std::f64::consts::PI * v)
}

pub fn random_complex_gaussian_matrix(rows: usize, cols: usize, rng: &mut impl Rng) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| complex_gaussian(rng))
}

/// Real part of tr(A B) for Hermitian A, B (the trace is real).
pub fn trace_product(a: &HermitianMatrix, b: &HermitianMatrix) -> f64 {
    assert_eq!(a.dim(), b.dim());
    let n = a.dim();
    let mut acc = 0.0;
    for i in 0..n {
        for j in 0..n {
            acc += (a.get(i, j) * b.get(j, i)).re;
        }
    }
    acc
}

// ---------------------------------------------------------------------------
// Antenna blocks
// ---------------------------------------------------------------------------

/// Partition of the stacked RU antenna index range into per-RU blocks.
///
/// RU selection matrices are never materialized; all selections are index
/// ranges over this partition.
#[derive(Clone, Debug, PartialEq)]
pub struct AntennaBlocks {
    sizes: Vec<usize>,
    offsets: Vec<usize>,
}

impl AntennaBlocks {
    pub fn new(sizes: Vec<usize>) -> Result<Self> {
        if sizes.is_empty() || sizes.iter().any(|&s| s == 0) {
            return Err(Error::config(
                "ru_antennas",
                "block sizes must be positive and non-empty",
            ));
        }
        let mut offsets = Vec::with_capacity(sizes.len() + 1);
        let mut acc = 0;
        offsets.push(0);
        for &s in &sizes {
            acc += s;
            offsets.push(acc);
        }
        Ok(Self { sizes, offsets })
    }

    pub fn num_blocks(&self) -> usize {
        self.sizes.len()
    }

    pub fn total(&self) -> usize {
        *self.offsets.last().unwrap()
    }

    pub fn size(&self, block: usize) -> usize {
        self.sizes[block]
    }

    pub fn range(&self, block: usize) -> std::ops::Range<usize> {
        self.offsets[block]..self.offsets[block + 1]
    }

    /// Antenna indices of the RUs in `subset`, in subset order.
    pub fn subset_indices(&self, subset: &[usize]) -> Result<Vec<usize>> {
        if subset.is_empty() {
            return Err(Error::EmptySubset);
        }
        let mut out = Vec::new();
        for &b in subset {
            if b >= self.sizes.len() {
                return Err(Error::IndexOutOfRange(format!(
                    "RU {b} of {}",
                    self.sizes.len()
                )));
            }
            out.extend(self.range(b));
        }
        Ok(out)
    }
}

/// All non-empty subsets of {0, .., n-1}, ordered by bitmask value.
pub fn non_empty_subsets(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::with_capacity((1usize << n) - 1);
    for mask in 1..(1usize << n) {
        let subset: Vec<usize> = (0..n).filter(|i| mask & (1 << i) != 0).collect();
        out.push(subset);
    }
    out
}

// ---------------------------------------------------------------------------
// Cholesky factorization (internal fast path)
// ---------------------------------------------------------------------------

/// Lower-triangular Cholesky factor of a Hermitian positive definite matrix.
pub(crate) struct Cholesky {
    n: usize,
    l: Vec<Complex64>,
}

impl Cholesky {
    /// Returns `None` when the matrix is not (numerically) positive definite.
    pub(crate) fn factor(m: &HermitianMatrix) -> Option<Cholesky> {
        let n = m.dim();
        let mut l = vec![Complex64::ZERO; n * n];
        for j in 0..n {
            let mut d = m.get(j, j).re;
            for k in 0..j {
                d -= l[j * n + k].norm_sqr();
            }
            if !(d > 0.0) || !d.is_finite() {
                return None;
            }
            let djj = d.sqrt();
            l[j * n + j] = Complex64::new(djj, 0.0);
            for i in (j + 1)..n {
                let mut s = m.get(i, j);
                for k in 0..j {
                    s -= l[i * n + k] * l[j * n + k].conj();
                }
                l[i * n + j] = s / djj;
            }
        }
        Some(Cholesky { n, l })
    }

    pub(crate) fn ln_det(&self) -> f64 {
        (0..self.n)
            .map(|i| self.l[i * self.n + i].re.ln())
            .sum::<f64>()
            * 2.0
    }

    /// Solves `M x = b` in place.
    pub(crate) fn solve_in_place(&self, b: &mut [Complex64]) {
        let n = self.n;
        // forward: L y = b
        for i in 0..n {
            let mut s = b[i];
            for k in 0..i {
                s -= self.l[i * n + k] * b[k];
            }
            b[i] = s / self.l[i * n + i].re;
        }
        // backward: L† x = y
        for i in (0..n).rev() {
            let mut s = b[i];
            for k in (i + 1)..n {
                s -= self.l[k * n + i].conj() * b[k];
            }
            b[i] = s / self.l[i * n + i].re;
        }
    }

    /// Full inverse as a Hermitian matrix.
    pub(crate) fn inverse(&self) -> HermitianMatrix {
        let n = self.n;
        let mut inv = vec![Complex64::ZERO; n * n];
        let mut col = vec![Complex64::ZERO; n];
        for j in 0..n {
            col.iter_mut().for_each(|z| *z = Complex64::ZERO);
            col[j] = Complex64::ONE;
            self.solve_in_place(&mut col);
            for i in 0..n {
                inv[i * n + j] = col[i];
            }
        }
        // enforce exact Hermitian symmetry against round-off
        let mut m = HermitianMatrix::from_raw_unchecked(n, inv);
        m.symmetrize();
        m
    }
}

// ---------------------------------------------------------------------------
// Eigendecomposition (complex Jacobi)
// ---------------------------------------------------------------------------

/// Full eigendecomposition of a Hermitian matrix.
///
/// Returns eigenvalues in non-increasing order and the matching orthonormal
/// eigenvectors as the columns of a unitary matrix. Deterministic: each
/// eigenvector's global phase makes its first non-negligible component real
/// positive, and ties between equal eigenvalues are broken by lexicographic
/// comparison of the (re, im) component sequences.
pub fn eigen_hermitian(m: &HermitianMatrix) -> (Vec<f64>, ComplexMatrix) {
    let n = m.dim();
    let mut a: Vec<Complex64> = m.data().to_vec();
    let mut v = ComplexMatrix::identity(n);
    let scale = m.max_abs();
    if scale > 0.0 && n > 1 {
        let tol = 1e-15 * scale;
        let max_rot = 60 * n * n;
        for _ in 0..max_rot {
            // classical Jacobi: pivot on the largest off-diagonal element
            let (mut p, mut q, mut big) = (0, 1, 0.0);
            for i in 0..n {
                for j in (i + 1)..n {
                    let mag = a[i * n + j].norm();
                    if mag > big {
                        big = mag;
                        p = i;
                        q = j;
                    }
                }
            }
            if big <= tol {
                break;
            }
            let app = a[p * n + p].re;
            let aqq = a[q * n + q].re;
            let apq = a[p * n + q];
            let mag = apq.norm();
            // phase that makes the pivot real, then a real Jacobi rotation
            let phase = apq / mag; // e^{i theta}
            let tau = (aqq - app) / (2.0 * mag);
            let t = if tau >= 0.0 {
                1.0 / (tau + (1.0 + tau * tau).sqrt())
            } else {
                -1.0 / (-tau + (1.0 + tau * tau).sqrt())
            };
            let c = 1.0 / (1.0 + t * t).sqrt();
            let s = t * c;
            // U columns: U e_p = c e_p - s conj(phase) e_q ; U e_q = s e_p + c conj(phase) e_q
            let w = phase.conj();
            // right multiply: A <- A U, V <- V U
            for r in 0..n {
                let x = a[r * n + p];
                let y = a[r * n + q];
                a[r * n + p] = c * x - s * (w * y);
                a[r * n + q] = s * x + c * (w * y);
                let vx = v.get(r, p);
                let vy = v.get(r, q);
                v.set(r, p, c * vx - s * (w * vy));
                v.set(r, q, s * vx + c * (w * vy));
            }
            // left multiply: A <- U† A
            for cidx in 0..n {
                let x = a[p * n + cidx];
                let y = a[q * n + cidx];
                a[p * n + cidx] = c * x - s * (w.conj() * y);
                a[q * n + cidx] = s * x + c * (w.conj() * y);
            }
            a[p * n + q] = Complex64::ZERO;
            a[q * n + p] = Complex64::ZERO;
            a[p * n + p] = Complex64::new(a[p * n + p].re, 0.0);
            a[q * n + q] = Complex64::new(a[q * n + q].re, 0.0);
        }
    }
    let mut eigvals: Vec<f64> = (0..n).map(|i| a[i * n + i].re).collect();

    // sort by eigenvalue, descending
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eigvals[j].partial_cmp(&eigvals[i]).unwrap());
    eigvals = order.iter().map(|&i| a[i * n + i].re).collect();
    let mut vecs = ComplexMatrix::from_fn(n, n, |i, j| v.get(i, order[j]));

    // deterministic phase: first non-negligible component real positive
    for j in 0..n {
        let mut phase = Complex64::ONE;
        for i in 0..n {
            let z = vecs.get(i, j);
            if z.norm() > 1e-9 {
                phase = z.conj() / z.norm();
                break;
            }
        }
        for i in 0..n {
            let z = vecs.get(i, j) * phase;
            vecs.set(i, j, z);
        }
    }

    // lexicographic tie-break within groups of (numerically) equal eigenvalues
    let group_tol = 1e-9 * eigvals.first().map(|v| v.abs().max(1.0)).unwrap_or(1.0);
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && (eigvals[start] - eigvals[end]).abs() <= group_tol {
            end += 1;
        }
        if end - start > 1 {
            let mut cols: Vec<Vec<Complex64>> = (start..end)
                .map(|j| (0..n).map(|i| vecs.get(i, j)).collect())
                .collect();
            cols.sort_by(|a, b| {
                for (x, y) in a.iter().zip(b.iter()) {
                    match x.re.partial_cmp(&y.re).unwrap() {
                        std::cmp::Ordering::Equal => {}
                        ord => return ord,
                    }
                    match x.im.partial_cmp(&y.im).unwrap() {
                        std::cmp::Ordering::Equal => {}
                        ord => return ord,
                    }
                }
                std::cmp::Ordering::Equal
            });
            for (off, col) in cols.into_iter().enumerate() {
                for i in 0..n {
                    vecs.set(i, start + off, col[i]);
                }
            }
        }
        start = end;
    }
    (eigvals, vecs)
}

/// Eigenvalues only, non-increasing.
pub fn eigenvalues(m: &HermitianMatrix) -> Vec<f64> {
    eigen_hermitian(m).0
}

// ---------------------------------------------------------------------------
// Log-determinant functionals
// ---------------------------------------------------------------------------

fn pd_gate(m: &HermitianMatrix, context: &str) -> Result<Vec<f64>> {
    let ev = eigenvalues(m);
    let largest = ev.first().copied().unwrap_or(0.0);
    let smallest = ev.last().copied().unwrap_or(0.0);
    if largest <= 0.0 || smallest <= PD_RATIO * largest {
        return Err(Error::NotPositiveDefinite(format!(
            "{context}: eigenvalue range [{smallest:.3e}, {largest:.3e}]"
        )));
    }
    Ok(ev)
}

/// Base-2 log-determinant of a Hermitian positive definite matrix.
pub fn log2_det(m: &HermitianMatrix) -> Result<f64> {
    let ev = pd_gate(m, "log2_det argument")?;
    Ok(ev.iter().map(|l| l.log2()).sum())
}

/// Rate increment in bits: log₂det(signal + noise) − log₂det(noise).
///
/// `noise` must be positive definite, `signal` positive semidefinite of the
/// same dimension; the result is nonnegative.
pub fn logdet_rate(signal: &HermitianMatrix, noise: &HermitianMatrix) -> Result<f64> {
    if signal.dim() != noise.dim() {
        return Err(Error::DimensionMismatch(format!(
            "signal {}x{0} vs noise {}x{1}",
            signal.dim(),
            noise.dim()
        )));
    }
    let total = log2_det(&signal.add(noise))?;
    let floor = log2_det(noise).map_err(|_| {
        Error::NotPositiveDefinite("noise covariance in rate increment".to_string())
    })?;
    Ok(total - floor)
}

/// First-order tangent of log₂det at `anchor`, evaluated at `x`:
/// log₂det(anchor) + tr(anchor⁻¹ (x − anchor)) / ln 2.
///
/// Majorizes log₂det(x) over positive definite `x`, with equality at
/// `x = anchor`; this is the linearization used by the convex-concave
/// iterations.
pub fn log2_det_tangent(x: &HermitianMatrix, anchor: &HermitianMatrix) -> Result<f64> {
    if x.dim() != anchor.dim() {
        return Err(Error::DimensionMismatch(format!(
            "point {}x{0} vs anchor {}x{1}",
            x.dim(),
            anchor.dim()
        )));
    }
    let base = log2_det(anchor)
        .map_err(|_| Error::NotPositiveDefinite("tangent anchor".to_string()))?;
    let chol = Cholesky::factor(anchor)
        .ok_or_else(|| Error::NotPositiveDefinite("tangent anchor".to_string()))?;
    let inv = chol.inverse();
    Ok(base + trace_product(&inv, &x.sub(anchor)) / LN_2)
}

/// Principal submatrix of `m` on the antenna ranges of the RUs in `subset`
/// (subset order preserved).
pub fn block_submatrix(
    m: &HermitianMatrix,
    blocks: &AntennaBlocks,
    subset: &[usize],
) -> Result<HermitianMatrix> {
    if m.dim() != blocks.total() {
        return Err(Error::DimensionMismatch(format!(
            "matrix dim {} vs total antennas {}",
            m.dim(),
            blocks.total()
        )));
    }
    let idx = blocks.subset_indices(subset)?;
    m.principal(&idx)
}

/// The `count` largest eigenvalues (clamped at zero from below) with their
/// orthonormal eigenvectors.
pub fn leading_eigenpairs(
    m: &HermitianMatrix,
    count: usize,
) -> Result<(Vec<f64>, Vec<Vec<Complex64>>)> {
    if count > m.dim() {
        return Err(Error::DimensionMismatch(format!(
            "asked for {count} eigenpairs of a {0}x{0} matrix",
            m.dim()
        )));
    }
    let (vals, vecs) = eigen_hermitian(m);
    let n = m.dim();
    let lead_vals: Vec<f64> = vals[..count].iter().map(|&l| l.max(0.0)).collect();
    let lead_vecs: Vec<Vec<Complex64>> = (0..count)
        .map(|j| (0..n).map(|i| vecs.get(i, j)).collect())
        .collect();
    Ok((lead_vals, lead_vecs))
}
