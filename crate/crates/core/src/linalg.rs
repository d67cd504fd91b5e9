//! Small dense real matrices: multiplication operators `L_a`, `R_a`, rank and nullspace.

use crate::element::Element;
use crate::error::{AlgebraError, Result};

/// Default relative tolerance for rank decisions.
pub const DEFAULT_RANK_TOL: f64 = 1e-10;

/// Row-major dense matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<f64>,
}

impl DenseMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<f64>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(AlgebraError::LengthMismatch {
                expected: rows * cols,
                got: entries.len(),
            });
        }
        if let Some(index) = entries.iter().position(|e| !e.is_finite()) {
            return Err(AlgebraError::NonFinite { index });
        }
        Ok(Self {
            rows,
            cols,
            entries,
        })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            entries: vec![0.0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, 1.0);
        }
        m
    }

    /// Builds a matrix whose `j`-th column is `columns[j]`.
    pub fn from_columns(rows: usize, columns: &[Vec<f64>]) -> Self {
        let mut m = Self::zeros(rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows, "column {j} has the wrong length");
            for (i, &v) in col.iter().enumerate() {
                m.set(i, j, v);
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.entries[i * self.cols + j] = v;
    }

    pub fn mul_vec(&self, v: &[f64]) -> Vec<f64> {
        assert_eq!(v.len(), self.cols);
        self.entries
            .chunks(self.cols.max(1))
            .take(self.rows)
            .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn sub(&self, other: &DenseMatrix) -> DenseMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        DenseMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    /// Keeps only the listed columns, in order.
    pub fn select_columns(&self, columns: &[usize]) -> DenseMatrix {
        let mut m = Self::zeros(self.rows, columns.len());
        for i in 0..self.rows {
            for (jj, &j) in columns.iter().enumerate() {
                m.set(i, jj, self.get(i, j));
            }
        }
        m
    }

    /// Frobenius norm.
    pub fn norm(&self) -> f64 {
        self.entries.iter().map(|e| e * e).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.entries.iter().fold(0.0, |m, e| m.max(e.abs()))
    }
}

fn operator_matrix(a: &Element, f: impl Fn(&Element, &Element) -> Element) -> DenseMatrix {
    let n = a.dim();
    let columns: Vec<Vec<f64>> = (0..n)
        .map(|j| f(a, &Element::basis(a.level(), j)).into_coeffs())
        .collect();
    DenseMatrix::from_columns(n, &columns)
}

/// Matrix of `y -> a y`; column `j` is `a e_j`.
pub fn left_mul_matrix(a: &Element) -> DenseMatrix {
    operator_matrix(a, |a, e| a * e)
}

/// Matrix of `y -> y a`; column `j` is `e_j a`.
pub fn right_mul_matrix(a: &Element) -> DenseMatrix {
    operator_matrix(a, |a, e| e * a)
}

/// Reduced row echelon form by Gaussian elimination with partial pivoting.
/// Returns the reduced matrix and the pivot column of each nonzero row.
fn row_reduce(m: &DenseMatrix, tol: f64) -> (DenseMatrix, Vec<usize>) {
    let mut r = m.clone();
    let threshold = tol * m.max_abs();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..r.cols {
        if row == r.rows {
            break;
        }
        let (best, best_abs) =
            (row..r.rows)
                .map(|i| (i, r.get(i, col).abs()))
                .fold(
                    (row, -1.0),
                    |acc, cur| if cur.1 > acc.1 { cur } else { acc },
                );
        if best_abs <= threshold {
            for i in row..r.rows {
                r.set(i, col, 0.0);
            }
            continue;
        }
        if best != row {
            for j in 0..r.cols {
                let tmp = r.get(row, j);
                r.set(row, j, r.get(best, j));
                r.set(best, j, tmp);
            }
        }
        let p = r.get(row, col);
        for j in col..r.cols {
            r.set(row, j, r.get(row, j) / p);
        }
        for i in 0..r.rows {
            if i == row {
                continue;
            }
            let f = r.get(i, col);
            if f != 0.0 {
                for j in col..r.cols {
                    r.set(i, j, r.get(i, j) - f * r.get(row, j));
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    (r, pivots)
}

/// Orthonormal basis of the right nullspace of `m`. Pivots below `tol` times the
/// largest entry magnitude count as zero.
pub fn nullspace(m: &DenseMatrix, tol: f64) -> Vec<Vec<f64>> {
    let (r, pivots) = row_reduce(m, tol);
    let free: Vec<usize> = (0..m.cols).filter(|c| !pivots.contains(c)).collect();
    let raw: Vec<Vec<f64>> = free
        .iter()
        .map(|&f| {
            let mut v = vec![0.0; m.cols];
            v[f] = 1.0;
            for (row, &p) in pivots.iter().enumerate() {
                v[p] = -r.get(row, f);
            }
            v
        })
        .collect();
    orthonormalize(raw)
}

pub fn rank(m: &DenseMatrix, tol: f64) -> usize {
    m.cols - nullspace(m, tol).len()
}

// Modified Gram-Schmidt with one reorthogonalization pass.
fn orthonormalize(vectors: Vec<Vec<f64>>) -> Vec<Vec<f64>> {
    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(vectors.len());
    for mut v in vectors {
        for _ in 0..2 {
            for b in &basis {
                let d: f64 = v.iter().zip(b).map(|(x, y)| x * y).sum();
                v.iter_mut().zip(b).for_each(|(x, y)| *x -= d * y);
            }
        }
        let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if n > 0.0 {
            v.iter_mut().for_each(|x| *x /= n);
            basis.push(v);
        }
    }
    basis
}
