//! Dense complex matrices and the handful of factorizations the torsion
//! computations need: pivoted elimination for ranks and determinants, and a
//! one-sided Jacobi SVD for minimum-norm least squares.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use num_complex::Complex64;

use super::tolerance::ToleranceContext;
use crate::error::{Error, Result};

pub type C64 = Complex64;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);

/// Row-major dense complex matrix.
///
/// Zero-sized matrices are allowed so that complexes with empty pieces need
/// no special casing.
#[derive(Clone, PartialEq)]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl fmt::Debug for CMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "CMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for j in 0..self.cols {
                let z = self[(i, j)];
                write!(f, "{:>10.4}{:+.4}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl CMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = ONE;
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    /// Builds a matrix from row-major entries; fails if the count is wrong.
    pub fn from_row_major(rows: usize, cols: usize, data: Vec<C64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Shape(format!(
                "expected {} entries for a {rows}x{cols} matrix, got {}",
                rows * cols,
                data.len()
            )));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_rows(rows: &[Vec<C64>]) -> Result<Self> {
        let n = rows.len();
        let m = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != m) {
            return Err(Error::Shape("ragged rows".into()));
        }
        Ok(Self {
            rows: n,
            cols: m,
            data: rows.iter().flatten().copied().collect(),
        })
    }

    /// Convenience constructor from real rows.
    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        let rows: Vec<Vec<C64>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| C64::new(x, 0.0)).collect())
            .collect();
        Self::from_rows(&rows)
    }

    /// Matrix whose columns are the given vectors, all of length `rows`.
    pub fn from_columns(rows: usize, columns: &[Vec<C64>]) -> Result<Self> {
        if columns.iter().any(|c| c.len() != rows) {
            return Err(Error::Shape(format!("every column must have length {rows}")));
        }
        Ok(Self::from_fn(rows, columns.len(), |i, j| columns[j][i]))
    }

    pub fn diagonal(entries: &[C64]) -> Self {
        let n = entries.len();
        let mut m = Self::zeros(n, n);
        for (i, &d) in entries.iter().enumerate() {
            m[(i, i)] = d;
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[C64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> Vec<C64> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn column(&self, j: usize) -> Vec<C64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn select_columns(&self, cols: &[usize]) -> Self {
        Self::from_fn(self.rows, cols.len(), |i, j| self[(i, cols[j])])
    }

    pub fn submatrix(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Self {
        Self::from_fn(rows, cols, |i, j| self[(r0 + i, c0 + j)])
    }

    /// Writes `block` into `self` with its top-left corner at `(r0, c0)`.
    pub fn set_block(&mut self, r0: usize, c0: usize, block: &CMatrix) {
        for i in 0..block.rows {
            for j in 0..block.cols {
                self[(r0 + i, c0 + j)] = block[(i, j)];
            }
        }
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn scale(&self, s: C64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&z| z * s).collect(),
        }
    }

    pub fn hstack(blocks: &[&CMatrix]) -> Result<Self> {
        let rows = blocks.first().map_or(0, |b| b.rows);
        if blocks.iter().any(|b| b.rows != rows) {
            return Err(Error::Shape("hstack: row counts differ".into()));
        }
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut out = Self::zeros(rows, cols);
        let mut c0 = 0;
        for b in blocks {
            out.set_block(0, c0, b);
            c0 += b.cols;
        }
        Ok(out)
    }

    pub fn vstack(blocks: &[&CMatrix]) -> Result<Self> {
        let cols = blocks.first().map_or(0, |b| b.cols);
        if blocks.iter().any(|b| b.cols != cols) {
            return Err(Error::Shape("vstack: column counts differ".into()));
        }
        let rows = blocks.iter().map(|b| b.rows).sum();
        let mut out = Self::zeros(rows, cols);
        let mut r0 = 0;
        for b in blocks {
            out.set_block(r0, 0, b);
            r0 += b.rows;
        }
        Ok(out)
    }

    /// Largest entry modulus (0 for empty matrices).
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn mul_vec(&self, v: &[C64]) -> Result<Vec<C64>> {
        if v.len() != self.cols {
            return Err(Error::Shape(format!(
                "matrix has {} columns, vector has length {}",
                self.cols,
                v.len()
            )));
        }
        Ok((0..self.rows)
            .map(|i| {
                self.data[i * self.cols..(i + 1) * self.cols]
                    .iter()
                    .zip(v)
                    .map(|(a, b)| a * b)
                    .sum()
            })
            .collect())
    }

    pub fn try_mul(&self, rhs: &CMatrix) -> Result<CMatrix> {
        if self.cols != rhs.rows {
            return Err(Error::Shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = CMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == ZERO {
                    continue;
                }
                for j in 0..rhs.cols {
                    out.data[i * rhs.cols + j] += a * rhs.data[k * rhs.cols + j];
                }
            }
        }
        Ok(out)
    }

    /// Max-norm of `self - other`; matrices must have the same shape.
    pub fn max_diff(&self, other: &CMatrix) -> f64 {
        assert_eq!(self.shape(), other.shape(), "max_diff: shape mismatch");
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn is_real(&self, tol: f64) -> bool {
        self.data.iter().all(|z| z.im.abs() <= tol)
    }
}

impl Index<(usize, usize)> for CMatrix {
    type Output = C64;

    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl Mul for &CMatrix {
    type Output = CMatrix;

    fn mul(self, rhs: &CMatrix) -> CMatrix {
        self.try_mul(rhs).expect("matrix product shape mismatch")
    }
}

impl Add for &CMatrix {
    type Output = CMatrix;

    fn add(self, rhs: &CMatrix) -> CMatrix {
        assert_eq!(self.shape(), rhs.shape(), "matrix sum shape mismatch");
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &CMatrix {
    type Output = CMatrix;

    fn sub(self, rhs: &CMatrix) -> CMatrix {
        assert_eq!(self.shape(), rhs.shape(), "matrix difference shape mismatch");
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Neg for &CMatrix {
    type Output = CMatrix;

    fn neg(self) -> CMatrix {
        self.scale(-ONE)
    }
}

/// Result of [`rank_factorize`].
#[derive(Debug, Clone)]
pub struct RankFactorization {
    pub rank: usize,
    /// Ascending column indices of the pivots.
    pub pivot_columns: Vec<usize>,
    /// The pivot columns of the input, spanning its column space.
    pub column_basis: CMatrix,
}

/// Gaussian elimination with complete pivoting.
///
/// Each step takes the largest remaining entry, preferring the lowest column
/// and then the lowest row on ties, and stops once that entry is at most
/// `rank_tol` times the largest entry of `a`. Choosing the pivot column by
/// size rather than by position keeps a barely nonzero column from being
/// promoted ahead of a well-separated one.
pub fn rank_factorize(a: &CMatrix, tol: &ToleranceContext) -> RankFactorization {
    let scale = a.max_abs();
    let mut pivots = Vec::new();
    if scale == 0.0 {
        return RankFactorization {
            rank: 0,
            pivot_columns: pivots,
            column_basis: CMatrix::zeros(a.rows, 0),
        };
    }
    let threshold = tol.rank_tol * scale;
    let mut work = a.clone();
    let mut rows: Vec<usize> = (0..a.rows).collect();
    let mut cols: Vec<usize> = (0..a.cols).collect();
    while !rows.is_empty() && !cols.is_empty() {
        let mut best = (0, 0, -1.0);
        for (cj, &j) in cols.iter().enumerate() {
            for (ri, &i) in rows.iter().enumerate() {
                let v = work[(i, j)].norm();
                if v > best.2 {
                    best = (ri, cj, v);
                }
            }
        }
        let (ri, cj, size) = best;
        if size <= threshold {
            break;
        }
        let (pr, pc) = (rows.remove(ri), cols.remove(cj));
        let pivot = work[(pr, pc)];
        for &i in &rows {
            let factor = work[(i, pc)] / pivot;
            if factor == ZERO {
                continue;
            }
            for &j in &cols {
                let v = work[(pr, j)];
                work[(i, j)] -= factor * v;
            }
            work[(i, pc)] = ZERO;
        }
        pivots.push(pc);
    }
    pivots.sort_unstable();
    RankFactorization {
        rank: pivots.len(),
        column_basis: a.select_columns(&pivots),
        pivot_columns: pivots,
    }
}

/// Determinant by LU with partial pivoting.
pub fn det(a: &CMatrix) -> Result<C64> {
    if !a.is_square() {
        return Err(Error::Shape(format!(
            "determinant of a non-square {}x{} matrix",
            a.rows, a.cols
        )));
    }
    let n = a.rows;
    let mut w = a.clone();
    let mut d = ONE;
    for k in 0..n {
        let (p, pabs) = (k..n)
            .map(|i| (i, w[(i, k)].norm()))
            .fold((k, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
        if pabs == 0.0 {
            return Ok(ZERO);
        }
        if p != k {
            for j in 0..n {
                w.data.swap(p * n + j, k * n + j);
            }
            d = -d;
        }
        let pivot = w[(k, k)];
        d *= pivot;
        for i in k + 1..n {
            let f = w[(i, k)] / pivot;
            if f == ZERO {
                continue;
            }
            for j in k + 1..n {
                let v = w[(k, j)];
                w[(i, j)] -= f * v;
            }
        }
    }
    Ok(d)
}

/// Outcome of [`solve_linear`]: the minimum-norm least-squares solution and
/// the max-norm residual `|a x - b|`.
#[derive(Debug, Clone)]
pub struct LinearSolution {
    pub solution: CMatrix,
    pub residual: f64,
}

/// Minimum-norm least-squares solve of `a x = b` via the SVD of `a`.
///
/// Singular values below `rank_tol` times the largest are treated as zero.
/// Inconsistent systems are not an error; callers judge `residual`.
pub fn solve_linear(a: &CMatrix, b: &CMatrix, tol: &ToleranceContext) -> Result<LinearSolution> {
    if a.rows != b.rows {
        return Err(Error::Shape(format!(
            "solve_linear: a has {} rows, b has {}",
            a.rows, b.rows
        )));
    }
    let svd = Svd::new(a);
    let smax = svd.singular.iter().copied().fold(0.0, f64::max);
    let cutoff = tol.rank_tol * smax;
    // x = V diag(1/s) U^H b
    let uh_b = svd.u.adjoint().try_mul(b)?;
    let mut scaled = uh_b;
    for (k, &s) in svd.singular.iter().enumerate() {
        let inv = if s > cutoff && s > 0.0 { 1.0 / s } else { 0.0 };
        for j in 0..scaled.cols {
            scaled[(k, j)] *= inv;
        }
    }
    let solution = svd.v.try_mul(&scaled)?;
    let residual = if a.cols == 0 {
        b.max_abs()
    } else {
        a.try_mul(&solution)?.max_diff(b)
    };
    Ok(LinearSolution { solution, residual })
}

/// Singular values of `a` in no particular order.
pub fn singular_values(a: &CMatrix) -> Vec<f64> {
    Svd::new(a).singular
}

/// Thin SVD `a = u diag(s) v^H` computed by one-sided Jacobi rotations.
pub(crate) struct Svd {
    pub u: CMatrix,
    pub singular: Vec<f64>,
    pub v: CMatrix,
}

impl Svd {
    pub fn new(a: &CMatrix) -> Self {
        if a.rows < a.cols {
            let t = Svd::new(&a.adjoint());
            return Svd {
                u: t.v,
                singular: t.singular,
                v: t.u,
            };
        }
        let (m, n) = a.shape();
        let mut w = a.clone();
        let mut v = CMatrix::identity(n);
        for _sweep in 0..80 {
            let mut off = 0.0f64;
            for p in 0..n {
                for q in p + 1..n {
                    let mut alpha = 0.0;
                    let mut beta = 0.0;
                    let mut gamma = ZERO;
                    for i in 0..m {
                        let x = w[(i, p)];
                        let y = w[(i, q)];
                        alpha += x.norm_sqr();
                        beta += y.norm_sqr();
                        gamma += x.conj() * y;
                    }
                    let g = gamma.norm();
                    if g == 0.0 || g <= 1e-15 * (alpha * beta).sqrt() {
                        continue;
                    }
                    off = off.max(g / (alpha * beta).sqrt());
                    let phase = gamma / g;
                    let zeta = (beta - alpha) / (2.0 * g);
                    let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                    let t = if zeta == 0.0 { 1.0 } else { t };
                    let c = 1.0 / (1.0 + t * t).sqrt();
                    let s = c * t;
                    let ph_conj = phase.conj();
                    for i in 0..m {
                        let x = w[(i, p)];
                        let y = w[(i, q)] * ph_conj;
                        w[(i, p)] = x * c - y * s;
                        w[(i, q)] = x * s + y * c;
                    }
                    for i in 0..n {
                        let x = v[(i, p)];
                        let y = v[(i, q)] * ph_conj;
                        v[(i, p)] = x * c - y * s;
                        v[(i, q)] = x * s + y * c;
                    }
                }
            }
            if off <= 1e-15 {
                break;
            }
        }
        let mut singular = Vec::with_capacity(n);
        let mut u = CMatrix::zeros(m, n);
        for j in 0..n {
            let s = (0..m).map(|i| w[(i, j)].norm_sqr()).sum::<f64>().sqrt();
            singular.push(s);
            if s > 0.0 {
                for i in 0..m {
                    u[(i, j)] = w[(i, j)] / s;
                }
            }
        }
        Svd { u, singular, v }
    }
}
