//! Dense complex matrices (row-major), sized for per-link channel blocks.
//!
//! Everything in this crate works on matrices of at most ~16 rows/columns,
//! so the implementations favour clarity over blocking or SIMD.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::hermitian::HermitianMatrix;

/// General rectangular complex matrix, row-major storage.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Complex64::ZERO; rows * cols],
        }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn from_rows(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "expected {} entries for a {}x{} matrix, got {}",
                rows * cols,
                rows,
                cols,
                data.len()
            )));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| {
            if i == j {
                Complex64::ONE
            } else {
                Complex64::ZERO
            }
        })
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Complex64) {
        self.data[i * self.cols + j] = v;
    }

    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    pub fn adjoint(&self) -> ComplexMatrix {
        ComplexMatrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i).conj())
    }

    pub fn mul(&self, other: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(
            self.cols, other.rows,
            "matrix product shape mismatch: {}x{} * {}x{}",
            self.rows, self.cols, other.rows, other.cols
        );
        let mut out = ComplexMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == Complex64::ZERO {
                    continue;
                }
                for j in 0..other.cols {
                    let v = out.get(i, j) + a * other.get(k, j);
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn scale(&self, s: f64) -> ComplexMatrix {
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    /// Stack `mats` vertically (all must share the column count).
    pub fn vstack(mats: &[&ComplexMatrix]) -> ComplexMatrix {
        assert!(!mats.is_empty());
        let cols = mats[0].cols;
        let rows: usize = mats.iter().map(|m| m.rows).sum();
        let mut data = Vec::with_capacity(rows * cols);
        for m in mats {
            assert_eq!(m.cols, cols, "vstack column mismatch");
            data.extend_from_slice(&m.data);
        }
        ComplexMatrix { rows, cols, data }
    }

    /// Stack `mats` horizontally (all must share the row count).
    pub fn hstack(mats: &[&ComplexMatrix]) -> ComplexMatrix {
        assert!(!mats.is_empty());
        let rows = mats[0].rows;
        let cols: usize = mats.iter().map(|m| m.cols).sum();
        let mut out = ComplexMatrix::zeros(rows, cols);
        let mut off = 0;
        for m in mats {
            assert_eq!(m.rows, rows, "hstack row mismatch");
            for i in 0..rows {
                for j in 0..m.cols {
                    out.set(i, off + j, m.get(i, j));
                }
            }
            off += m.cols;
        }
        out
    }

    /// Congruence `self * x * self†`, symmetrized into a Hermitian result.
    pub fn congruence(&self, x: &HermitianMatrix) -> HermitianMatrix {
        assert_eq!(self.cols, x.dim(), "congruence dimension mismatch");
        let r = self.rows;
        let n = self.cols;
        // t = self * x
        let mut t = ComplexMatrix::zeros(r, n);
        for i in 0..r {
            for k in 0..n {
                let a = self.get(i, k);
                if a == Complex64::ZERO {
                    continue;
                }
                for j in 0..n {
                    let v = t.get(i, j) + a * x.get(k, j);
                    t.set(i, j, v);
                }
            }
        }
        // g = t * self†
        let mut g = vec![Complex64::ZERO; r * r];
        for i in 0..r {
            for j in 0..=i {
                let mut acc = Complex64::ZERO;
                for k in 0..n {
                    acc += t.get(i, k) * self.get(j, k).conj();
                }
                g[i * r + j] = acc;
                g[j * r + i] = acc.conj();
            }
        }
        for i in 0..r {
            g[i * r + i] = Complex64::new(g[i * r + i].re, 0.0);
        }
        HermitianMatrix::from_raw_unchecked(r, g)
    }

    /// Rank-one Gram matrix `v v†` of a column vector.
    pub fn outer(v: &[Complex64]) -> HermitianMatrix {
        let n = v.len();
        let mut g = vec![Complex64::ZERO; n * n];
        for i in 0..n {
            for j in 0..n {
                g[i * n + j] = v[i] * v[j].conj();
            }
        }
        HermitianMatrix::from_raw_unchecked(n, g)
    }

    /// Gram matrix `self * self†` (Hermitian PSD of size `rows`).
    pub fn gram(&self) -> HermitianMatrix {
        let r = self.rows;
        let mut g = vec![Complex64::ZERO; r * r];
        for i in 0..r {
            for j in 0..=i {
                let mut acc = Complex64::ZERO;
                for k in 0..self.cols {
                    acc += self.get(i, k) * self.get(j, k).conj();
                }
                g[i * r + j] = acc;
                g[j * r + i] = acc.conj();
            }
        }
        for i in 0..r {
            g[i * r + i] = Complex64::new(g[i * r + i].re, 0.0);
        }
        HermitianMatrix::from_raw_unchecked(r, g)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }
}
