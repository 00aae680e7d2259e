//! Just enough dense linear algebra for the network containers and the
//! harmonic-polynomial machinery. Matrices here are tiny (dozens of rows at
//! most), so plain row-major storage and textbook elimination are the right
//! tools.

use crate::error::{Error, Result};
use crate::field::{dot, Scalar, ZERO};

/// Dense matrix over the tagged scalar type, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Mat {
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl Mat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat { rows, cols, data: vec![ZERO; rows * cols] }
    }

    pub fn from_rows(rows: Vec<Vec<Scalar>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::precondition("matrix rows have unequal lengths"));
        }
        Ok(Mat { rows: r, cols: c, data: rows.into_iter().flatten().collect() })
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Mat::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Scalar::new(1.0, 0.0);
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_mut(&mut self, i: usize) -> &mut [Scalar] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn iter(&self) -> impl Iterator<Item = &Scalar> {
        self.data.iter()
    }

    pub fn entry_count(&self) -> usize {
        self.data.len()
    }

    /// y = A x by plain (non-conjugating) multiplication.
    pub fn matvec(&self, x: &[Scalar]) -> Result<Vec<Scalar>> {
        if x.len() != self.cols {
            return Err(Error::DimMismatch { expected: self.cols, found: x.len() });
        }
        Ok((0..self.rows).map(|i| dot(self.row(i), x)).collect())
    }

    /// C = A B, plain multiplication.
    pub fn matmul(&self, other: &Mat) -> Result<Mat> {
        if self.cols != other.rows {
            return Err(Error::DimMismatch { expected: self.cols, found: other.rows });
        }
        let mut out = Mat::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let aik = self[(i, k)];
                if aik.norm() == 0.0 {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += aik * other[(k, j)];
                }
            }
        }
        Ok(out)
    }
}

impl std::ops::Index<(usize, usize)> for Mat {
    type Output = Scalar;

    fn index(&self, (i, j): (usize, usize)) -> &Scalar {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Mat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Scalar {
        &mut self.data[i * self.cols + j]
    }
}

// ---------------------------------------------------------------------------
// Real dense helpers (f64), used by the harmonic-polynomial code.
// ---------------------------------------------------------------------------

/// Determinant via LU with partial pivoting. Consumes its argument.
pub fn det(mut a: Vec<Vec<f64>>) -> Result<f64> {
    let n = a.len();
    if a.iter().any(|row| row.len() != n) {
        return Err(Error::precondition("determinant needs a square matrix"));
    }
    let mut sign = 1.0;
    let mut result = 1.0;
    for col in 0..n {
        let pivot_row = (col..n)
            .max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))
            .expect("non-empty range");
        if a[pivot_row][col] == 0.0 {
            return Ok(0.0);
        }
        if pivot_row != col {
            a.swap(pivot_row, col);
            sign = -sign;
        }
        let pivot = a[col][col];
        result *= pivot;
        for row in col + 1..n {
            let factor = a[row][col] / pivot;
            for k in col..n {
                a[row][k] -= factor * a[col][k];
            }
        }
    }
    Ok(sign * result)
}

/// Solves A x = b for square A via Gaussian elimination with partial
/// pivoting. Returns `None` when A is numerically singular.
pub fn solve(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = a.len();
    if b.len() != n || a.iter().any(|row| row.len() != n) {
        return None;
    }
    for col in 0..n {
        let pivot_row = (col..n).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[pivot_row][col].abs() < 1e-14 {
            return None;
        }
        a.swap(pivot_row, col);
        b.swap(pivot_row, col);
        for row in col + 1..n {
            let factor = a[row][col] / a[col][col];
            for k in col..n {
                a[row][k] -= factor * a[col][k];
            }
            b[row] -= factor * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let mut acc = b[row];
        for k in row + 1..n {
            acc -= a[row][k] * x[k];
        }
        x[row] = acc / a[row][row];
    }
    Some(x)
}

/// Basis of the null space of a (rows x cols) matrix, via reduced row
/// echelon form with the given pivot tolerance relative to the largest
/// entry. Deterministic: free columns are scanned left to right.
pub fn kernel_basis(mut a: Vec<Vec<f64>>, cols: usize, tol: f64) -> Vec<Vec<f64>> {
    let rows = a.len();
    let scale = a
        .iter()
        .flat_map(|r| r.iter())
        .fold(0.0_f64, |m, &v| m.max(v.abs()))
        .max(1.0);
    let threshold = tol * scale;
    let mut pivot_cols = Vec::new();
    let mut row = 0;
    for col in 0..cols {
        let pivot_row = (row..rows).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()));
        let Some(pr) = pivot_row else { break };
        if a[pr][col].abs() <= threshold {
            continue;
        }
        a.swap(row, pr);
        let pivot = a[row][col];
        for k in 0..cols {
            a[row][k] /= pivot;
        }
        for r in 0..rows {
            if r != row && a[r][col] != 0.0 {
                let factor = a[r][col];
                for k in 0..cols {
                    a[r][k] -= factor * a[row][k];
                }
            }
        }
        pivot_cols.push(col);
        row += 1;
        if row == rows {
            break;
        }
    }
    let free_cols: Vec<usize> = (0..cols).filter(|c| !pivot_cols.contains(c)).collect();
    let mut basis = Vec::with_capacity(free_cols.len());
    for &fc in &free_cols {
        let mut v = vec![0.0; cols];
        v[fc] = 1.0;
        for (r, &pc) in pivot_cols.iter().enumerate() {
            v[pc] = -a[r][fc];
        }
        basis.push(v);
    }
    basis
}

/// Numerical rank of a set of vectors through the Gram matrix: pivoted
/// symmetric elimination, counting pivots above `rel_tol` times the largest
/// initial diagonal entry.
pub fn gram_rank(vectors: &[Vec<f64>], rel_tol: f64) -> usize {
    let n = vectors.len();
    if n == 0 {
        return 0;
    }
    let mut g = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in 0..n {
            g[i][j] = vectors[i].iter().zip(&vectors[j]).map(|(a, b)| a * b).sum();
        }
    }
    let scale = (0..n).fold(0.0_f64, |m, i| m.max(g[i][i]));
    if scale == 0.0 {
        return 0;
    }
    let threshold = rel_tol * scale;
    let mut active: Vec<usize> = (0..n).collect();
    let mut rank = 0;
    while !active.is_empty() {
        let &pivot = active
            .iter()
            .max_by(|&&i, &&j| g[i][i].total_cmp(&g[j][j]))
            .expect("non-empty");
        if g[pivot][pivot] <= threshold {
            break;
        }
        rank += 1;
        active.retain(|&i| i != pivot);
        let d = g[pivot][pivot];
        for &i in &active {
            for &j in &active.clone() {
                g[i][j] -= g[i][pivot] * g[pivot][j] / d;
            }
        }
    }
    rank
}
