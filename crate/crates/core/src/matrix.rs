//! Row-major dense matrices and an LU factorization with partial pivoting.

use std::fmt::Write as _;
use std::ops::{Index, IndexMut};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl DenseMatrix {
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
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn from_row_major(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "{} entries supplied for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::Dimension("ragged rows".into()));
        }
        Ok(Self {
            rows: rows.len(),
            cols,
            data: rows.concat(),
        })
    }

    /// Block-diagonal matrix made of `count` copies of `block`.
    pub fn block_diagonal(block: &DenseMatrix, count: usize) -> Self {
        Self::block_diagonal_from((0..count).map(|_| block.clone()).collect::<Vec<_>>().as_slice())
    }

    pub fn block_diagonal_from(blocks: &[DenseMatrix]) -> Self {
        let n: usize = blocks.iter().map(|b| b.rows).sum();
        let c: usize = blocks.iter().map(|b| b.cols).sum();
        let mut out = Self::zeros(n, c);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            for i in 0..b.rows {
                for j in 0..b.cols {
                    out[(r0 + i, c0 + j)] = b[(i, j)];
                }
            }
            r0 += b.rows;
            c0 += b.cols;
        }
        out
    }

    /// Copy of the `size`x`size` block starting at (`start`, `start`).
    pub fn diagonal_block(&self, start: usize, size: usize) -> Self {
        let mut out = Self::zeros(size, size);
        for i in 0..size {
            for j in 0..size {
                out[(i, j)] = self[(start + i, start + j)];
            }
        }
        out
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.data
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_mut(&mut self, i: usize) -> &mut [f64] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(j, i)] = self[(i, j)];
            }
        }
        out
    }

    pub fn scale(&self, s: f64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|v| v * s).collect(),
        }
    }

    pub fn matmul(&self, rhs: &DenseMatrix) -> Result<Self> {
        if self.cols != rhs.rows {
            return Err(Error::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for l in 0..self.cols {
                let a = self[(i, l)];
                if a == 0.0 {
                    continue;
                }
                let src = rhs.row(l);
                for (o, b) in out.row_mut(i).iter_mut().zip(src) {
                    *o += a * b;
                }
            }
        }
        Ok(out)
    }

    pub fn matvec(&self, v: &[f64]) -> Result<Vec<f64>> {
        if v.len() != self.cols {
            return Err(Error::Dimension(format!(
                "vector of length {} against {} columns",
                v.len(),
                self.cols
            )));
        }
        Ok((0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect())
    }

    /// `self^r` for square matrices; `r = 0` gives the identity.
    pub fn pow(&self, r: u32) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::Dimension("power of a non-square matrix".into()));
        }
        let mut out = Self::identity(self.rows);
        for _ in 0..r {
            out = out.matmul(self)?;
        }
        Ok(out)
    }

    /// Maximum absolute row sum.
    pub fn norm_inf(&self) -> f64 {
        (0..self.rows)
            .map(|i| self.row(i).iter().map(|v| v.abs()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &DenseMatrix) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0.0)
    }

    /// True when every entry outside the diagonal `block`x`block` blocks is exactly zero.
    pub fn is_block_diagonal(&self, block: usize) -> bool {
        (0..self.rows).all(|i| (0..self.cols).all(|j| i / block == j / block || self[(i, j)] == 0.0))
    }

    /// CSV dump: one row per line, 17 significant digits.
    pub fn to_csv(&self) -> String {
        let mut s = String::new();
        for i in 0..self.rows {
            let line: Vec<String> = self.row(i).iter().map(|v| format_sig17(*v)).collect();
            let _ = writeln!(s, "{}", line.join(","));
        }
        s
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let rows = text
            .lines()
            .filter(|l| !l.trim().is_empty())
            .map(|l| {
                l.split(',')
                    .map(|v| {
                        v.trim()
                            .parse::<f64>()
                            .map_err(|e| Error::InvalidConfig(format!("bad matrix entry {v:?}: {e}")))
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_rows(&rows)
    }
}

/// Formats with 17 significant digits in scientific notation.
pub fn format_sig17(v: f64) -> String {
    format!("{v:.16e}")
}

impl Index<(usize, usize)> for DenseMatrix {
    type Output = f64;

    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for DenseMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

/// LU factors `PA = LU` with unit lower triangular `L`, stored packed.
#[derive(Debug, Clone)]
pub struct LuFactorization {
    lu: DenseMatrix,
    perm: Vec<usize>,
    norm_inf: f64,
}

impl LuFactorization {
    /// Factors `a`, failing when a pivot falls below `pivot_rel_tol * ||a||_inf`.
    pub fn new(a: &DenseMatrix, pivot_rel_tol: f64) -> Result<Self> {
        if !a.is_square() {
            return Err(Error::Dimension(format!("LU of a {}x{} matrix", a.rows, a.cols)));
        }
        let n = a.rows;
        let norm_inf = a.norm_inf();
        let threshold = pivot_rel_tol * norm_inf;
        let mut lu = a.clone();
        let mut perm: Vec<usize> = (0..n).collect();

        for k in 0..n {
            let (p, magnitude) =
                (k..n)
                    .map(|i| (i, lu[(i, k)].abs()))
                    .fold((k, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best });
            if !(magnitude > threshold) {
                return Err(Error::SingularSystem {
                    pivot: k,
                    magnitude,
                    threshold,
                });
            }
            if p != k {
                perm.swap(p, k);
                for j in 0..n {
                    lu.data.swap(p * n + j, k * n + j);
                }
            }
            let pivot = lu[(k, k)];
            for i in k + 1..n {
                let f = lu[(i, k)] / pivot;
                lu[(i, k)] = f;
                if f == 0.0 {
                    continue;
                }
                let (upper, lower) = lu.data.split_at_mut(i * n);
                let src = &upper[k * n + k + 1..k * n + n];
                for (dst, s) in lower[k + 1..n].iter_mut().zip(src) {
                    *dst -= f * s;
                }
            }
        }
        Ok(Self { lu, perm, norm_inf })
    }

    pub fn dim(&self) -> usize {
        self.lu.rows
    }

    /// Solves `A x = b`.
    pub fn solve(&self, b: &[f64]) -> Result<Vec<f64>> {
        let n = self.dim();
        if b.len() != n {
            return Err(Error::Dimension(format!("rhs length {} for order {n}", b.len())));
        }
        let mut x: Vec<f64> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            let row = self.lu.row(i);
            let s: f64 = row[..i].iter().zip(&x[..i]).map(|(l, v)| l * v).sum();
            x[i] -= s;
        }
        for i in (0..n).rev() {
            let row = self.lu.row(i);
            let s: f64 = row[i + 1..].iter().zip(&x[i + 1..]).map(|(u, v)| u * v).sum();
            x[i] = (x[i] - s) / row[i];
        }
        Ok(x)
    }

    /// Solves `A^T x = b`.
    pub fn solve_transpose(&self, b: &[f64]) -> Result<Vec<f64>> {
        let n = self.dim();
        if b.len() != n {
            return Err(Error::Dimension(format!("rhs length {} for order {n}", b.len())));
        }
        // A^T = U^T L^T P, so solve U^T y = b, L^T z = y, then x = P^T z.
        let mut y = b.to_vec();
        for i in 0..n {
            let s: f64 = (0..i).map(|j| self.lu[(j, i)] * y[j]).sum();
            y[i] = (y[i] - s) / self.lu[(i, i)];
        }
        for i in (0..n).rev() {
            let s: f64 = (i + 1..n).map(|j| self.lu[(j, i)] * y[j]).sum();
            y[i] -= s;
        }
        let mut x = vec![0.0; n];
        for (k, &p) in self.perm.iter().enumerate() {
            x[p] = y[k];
        }
        Ok(x)
    }

    /// `A^{-1} B`, column by column.
    pub fn solve_matrix(&self, b: &DenseMatrix) -> Result<DenseMatrix> {
        let n = self.dim();
        if b.rows != n {
            return Err(Error::Dimension("right-hand side row count".into()));
        }
        let mut out = DenseMatrix::zeros(n, b.cols);
        let mut col = vec![0.0; n];
        for j in 0..b.cols {
            for i in 0..n {
                col[i] = b[(i, j)];
            }
            let x = self.solve(&col)?;
            for i in 0..n {
                out[(i, j)] = x[i];
            }
        }
        Ok(out)
    }

    pub fn inverse(&self) -> Result<DenseMatrix> {
        self.solve_matrix(&DenseMatrix::identity(self.dim()))
    }

    /// Estimate of `||A||_inf * ||A^{-1}||_inf` using Hager's 1-norm estimator on `A^{-T}`.
    pub fn condition_estimate_inf(&self) -> Result<f64> {
        let n = self.dim();
        if n == 0 {
            return Ok(0.0);
        }
        // ||A^{-1}||_inf = ||A^{-T}||_1; B = A^{-T}, B x = solve_transpose, B^T x = solve.
        let mut x = vec![1.0 / n as f64; n];
        let mut estimate = 0.0;
        for _ in 0..5 {
            let y = self.solve_transpose(&x)?;
            let norm_y: f64 = y.iter().map(|v| v.abs()).sum();
            if norm_y <= estimate {
                break;
            }
            estimate = norm_y;
            let xi: Vec<f64> = y.iter().map(|v| if *v >= 0.0 { 1.0 } else { -1.0 }).collect();
            let z = self.solve(&xi)?;
            let (jmax, zmax) = z
                .iter()
                .enumerate()
                .fold((0, -1.0), |b, (j, v)| if v.abs() > b.1 { (j, v.abs()) } else { b });
            let ztx: f64 = z.iter().zip(&x).map(|(a, b)| a * b).sum();
            if zmax <= ztx {
                break;
            }
            x = vec![0.0; n];
            x[jmax] = 1.0;
        }
        Ok(self.norm_inf * estimate)
    }
}
