//! Dense exact matrices over the rationals.
//!
//! Ranks and determinants go through fraction-free (Bareiss) elimination on
//! integer rows obtained by clearing denominators; kernels, inverses and
//! subspace manipulations use rational Gauss-Jordan elimination. A modular
//! rank over a large prime field is available as a fast alternative.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Scalar = BigRational;

pub fn int(v: i64) -> Scalar {
    BigRational::from_integer(BigInt::from(v))
}

/// Row-major dense matrix with rational entries.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            if r > 0 {
                write!(f, "; ")?;
            }
            for c in 0..self.cols {
                if c > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", self.get(r, c))?;
            }
        }
        write!(f, "]")
    }
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![Scalar::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Scalar::one());
        }
        m
    }

    /// Builds a matrix from rows; every row must have length `cols`.
    pub fn from_rows(rows: usize, cols: usize, entries: Vec<Vec<Scalar>>) -> Result<Self> {
        if entries.len() != rows || entries.iter().any(|r| r.len() != cols) {
            return Err(Error::input(format!("expected a {rows}x{cols} matrix")));
        }
        Ok(Matrix { rows, cols, data: entries.into_iter().flatten().collect() })
    }

    pub fn from_i64(rows: usize, cols: usize, entries: &[i64]) -> Self {
        assert_eq!(entries.len(), rows * cols, "entry count does not match shape");
        Matrix { rows, cols, data: entries.iter().map(|&v| int(v)).collect() }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Scalar) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Matrix { rows, cols, data }
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

    pub fn get(&self, r: usize, c: usize) -> &Scalar {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Scalar) {
        self.data[r * self.cols + c] = v;
    }

    pub fn entries(&self) -> &[Scalar] {
        &self.data
    }

    pub fn row(&self, r: usize) -> &[Scalar] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// True when all entries are integers.
    pub fn is_integral(&self) -> bool {
        self.data.iter().all(|v| v.is_integer())
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.cols, self.rows, |r, c| self.get(c, r).clone())
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "inner dimensions differ");
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let idx = i * other.cols + j;
                    out.data[idx] += a * b;
                }
            }
        }
        out
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.shape(), other.shape());
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.shape(), other.shape());
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn scale(&self, s: &Scalar) -> Matrix {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|a| a * s).collect() }
    }

    /// Horizontal concatenation `[self | other]`.
    pub fn hstack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.rows, other.rows);
        Matrix::from_fn(self.rows, self.cols + other.cols, |r, c| {
            if c < self.cols {
                self.get(r, c).clone()
            } else {
                other.get(r, c - self.cols).clone()
            }
        })
    }

    pub fn vstack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        Matrix { rows: self.rows + other.rows, cols: self.cols, data }
    }

    /// Copies `block` into `self` with its top-left corner at `(r0, c0)`.
    pub fn paste(&mut self, r0: usize, c0: usize, block: &Matrix) {
        for r in 0..block.rows {
            for c in 0..block.cols {
                self.set(r0 + r, c0 + c, block.get(r, c).clone());
            }
        }
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Matrix {
        Matrix::from_fn(rows.len(), cols.len(), |r, c| self.get(rows[r], cols[c]).clone())
    }

    pub fn columns(&self, cols: &[usize]) -> Matrix {
        let all: Vec<usize> = (0..self.rows).collect();
        self.submatrix(&all, cols)
    }

    /// Integer rows obtained by multiplying each row by the lcm of its denominators,
    /// together with the multipliers used.
    fn integer_rows(&self) -> (Vec<Vec<BigInt>>, Vec<BigInt>) {
        let mut rows = Vec::with_capacity(self.rows);
        let mut scales = Vec::with_capacity(self.rows);
        for r in 0..self.rows {
            let row = self.row(r);
            let l = row.iter().fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
            rows.push(row.iter().map(|v| v.numer() * (&l / v.denom())).collect());
            scales.push(l);
        }
        (rows, scales)
    }

    /// Exact rank by fraction-free elimination.
    pub fn rank(&self) -> usize {
        let (mut a, _) = self.integer_rows();
        bareiss_in_place(&mut a, self.cols).0
    }

    /// Exact determinant by fraction-free elimination.
    pub fn determinant(&self) -> Scalar {
        assert!(self.is_square(), "determinant of a non-square matrix");
        if self.rows == 0 {
            return Scalar::one();
        }
        let (mut a, scales) = self.integer_rows();
        let (rank, det) = bareiss_in_place(&mut a, self.cols);
        if rank < self.rows {
            return Scalar::zero();
        }
        let denom = scales.iter().fold(BigInt::one(), |acc, s| acc * s);
        BigRational::new(det, denom)
    }

    /// Rank over the prime field `F_p`. Fails when a denominator vanishes mod `p`.
    pub fn rank_mod_prime(&self, p: u64) -> Result<usize> {
        let mut a = Vec::with_capacity(self.rows);
        for r in 0..self.rows {
            let mut row = Vec::with_capacity(self.cols);
            for v in self.row(r) {
                row.push(reduce_mod(v, p)?);
            }
            a.push(row);
        }
        Ok(rank_mod(&mut a, p))
    }

    /// Reduced row echelon form; returns the pivot columns.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut pr = 0;
        for c in 0..m.cols {
            if pr == m.rows {
                break;
            }
            let Some(p) = (pr..m.rows).find(|&r| !m.get(r, c).is_zero()) else {
                continue;
            };
            m.swap_rows(pr, p);
            let inv = m.get(pr, c).recip();
            for j in c..m.cols {
                let v = m.get(pr, j) * &inv;
                m.set(pr, j, v);
            }
            for r in 0..m.rows {
                if r == pr {
                    continue;
                }
                let f = m.get(r, c).clone();
                if f.is_zero() {
                    continue;
                }
                for j in c..m.cols {
                    let v = m.get(pr, j) * &f;
                    if !v.is_zero() {
                        let idx = r * m.cols + j;
                        m.data[idx] -= v;
                    }
                }
            }
            pivots.push(c);
            pr += 1;
        }
        (m, pivots)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    /// Basis of the right kernel, as the columns of a `cols x k` matrix.
    pub fn kernel(&self) -> Matrix {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut basis = Matrix::zeros(self.cols, free.len());
        for (k, &f) in free.iter().enumerate() {
            basis.set(f, k, Scalar::one());
            for (i, &p) in pivots.iter().enumerate() {
                basis.set(p, k, -r.get(i, f).clone());
            }
        }
        basis
    }

    /// Basis of the column space, as a subset of the original columns.
    pub fn column_basis(&self) -> Matrix {
        let (_, pivots) = self.rref();
        self.columns(&pivots)
    }

    pub fn inverse(&self) -> Result<Matrix> {
        if !self.is_square() {
            return Err(Error::input("inverse of a non-square matrix"));
        }
        let n = self.rows;
        let aug = self.hstack(&Matrix::identity(n));
        let (r, pivots) = aug.rref();
        if pivots.len() < n || (n > 0 && pivots[n - 1] != n - 1) {
            return Err(Error::input("matrix is not invertible"));
        }
        let cols: Vec<usize> = (n..2 * n).collect();
        let rows: Vec<usize> = (0..n).collect();
        Ok(r.submatrix(&rows, &cols))
    }

    /// Solves `self * X = rhs` for `X`, where `self` has full column rank and the
    /// columns of `rhs` lie in its column space.
    pub fn solve_in_column_space(&self, rhs: &Matrix) -> Result<Matrix> {
        assert_eq!(self.rows, rhs.rows);
        let aug = self.hstack(rhs);
        let (r, pivots) = aug.rref();
        if pivots.len() != self.cols || pivots.iter().enumerate().any(|(i, &p)| p != i) {
            return Err(Error::consistency("right-hand side outside the column space"));
        }
        let rows: Vec<usize> = (0..self.cols).collect();
        let cols: Vec<usize> = (self.cols..self.cols + rhs.cols).collect();
        Ok(r.submatrix(&rows, &cols))
    }
}

/// Basis (as columns) of `{ v : map * v ∈ span(target) }`.
pub fn preimage(map: &Matrix, target: &Matrix) -> Matrix {
    assert_eq!(map.rows(), target.rows());
    let combined = map.hstack(&target.scale(&int(-1)));
    let ker = combined.kernel();
    let rows: Vec<usize> = (0..map.cols()).collect();
    let all: Vec<usize> = (0..ker.cols()).collect();
    ker.submatrix(&rows, &all).column_basis()
}

/// Basis (as columns) of the image `map(span(source))`.
pub fn image(map: &Matrix, source: &Matrix) -> Matrix {
    map.mul(source).column_basis()
}

/// Fraction-free elimination on integer rows. Returns `(rank, last pivot)`;
/// for a nonsingular square input the last pivot, up to the sign of the row
/// swaps, is the determinant.
fn bareiss_in_place(a: &mut [Vec<BigInt>], cols: usize) -> (usize, BigInt) {
    let rows = a.len();
    let mut prev = BigInt::one();
    let mut k = 0;
    let mut sign = 1i32;
    for c in 0..cols {
        if k == rows {
            break;
        }
        let Some(p) = (k..rows).find(|&r| !a[r][c].is_zero()) else {
            continue;
        };
        if p != k {
            a.swap(p, k);
            sign = -sign;
        }
        let (top, rest) = a.split_at_mut(k + 1);
        let pivot_row = &top[k];
        let pivot = pivot_row[c].clone();
        for row in rest.iter_mut() {
            let f = std::mem::take(&mut row[c]);
            for j in c + 1..cols {
                let mut v = &pivot * &row[j];
                if !f.is_zero() && !pivot_row[j].is_zero() {
                    v -= &f * &pivot_row[j];
                }
                if !prev.is_one() {
                    v /= &prev;
                }
                row[j] = v;
            }
        }
        prev = pivot;
        k += 1;
    }
    let det = if sign < 0 { -prev } else { prev };
    (k, det)
}

fn reduce_mod(v: &Scalar, p: u64) -> Result<u64> {
    let pb = BigInt::from(p);
    let n = v.numer().mod_floor(&pb).to_u64().unwrap_or(0);
    let d = v.denom().mod_floor(&pb).to_u64().unwrap_or(0);
    if d == 0 {
        return Err(Error::input(format!("denominator divisible by the prime {p}")));
    }
    Ok(mul_mod(n, pow_mod(d, p - 2, p), p))
}

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1u64;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, b, p);
        }
        b = mul_mod(b, b, p);
        e >>= 1;
    }
    r
}

fn rank_mod(a: &mut [Vec<u64>], p: u64) -> usize {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut k = 0;
    for c in 0..cols {
        if k == rows {
            break;
        }
        let Some(piv) = (k..rows).find(|&r| a[r][c] != 0) else {
            continue;
        };
        a.swap(piv, k);
        let inv = pow_mod(a[k][c], p - 2, p);
        let (top, rest) = a.split_at_mut(k + 1);
        let prow = &top[k];
        for row in rest.iter_mut() {
            if row[c] == 0 {
                continue;
            }
            let f = mul_mod(row[c], inv, p);
            for j in c..cols {
                if prow[j] != 0 {
                    row[j] = (row[j] + p - mul_mod(f, prow[j], p)) % p;
                }
            }
        }
        k += 1;
    }
    k
}

/// Largest absolute value of a numerator, for reporting.
pub fn max_abs(values: &[Scalar]) -> Scalar {
    values.iter().map(|v| v.abs()).max().unwrap_or_else(Scalar::zero)
}
