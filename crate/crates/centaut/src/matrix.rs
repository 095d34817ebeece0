//! Dense exact matrices over GF(p).
//!
//! Row-vector convention throughout: vectors are rows, maps apply on the
//! right, so the kernel of `M` is the left kernel `{v : vM = 0}`.

use crate::field::PrimeField;
use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};

/// A rows x cols matrix with entries in canonical range `[0, p)`,
/// stored row-major. Degenerate shapes (0 rows or 0 columns) are legal.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    field: PrimeField,
    rows: usize,
    cols: usize,
    entries: Vec<u64>,
}

impl Matrix {
    pub fn new(field: PrimeField, rows: usize, cols: usize, entries: Vec<u64>) -> Self {
        assert_eq!(entries.len(), rows * cols, "entry count must be rows*cols");
        let p = field.modulus();
        let entries = entries.into_iter().map(|e| e % p).collect();
        Self { field, rows, cols, entries }
    }

    /// Builds a matrix from rows of (possibly negative) integers, reducing
    /// each entry mod p.
    pub fn from_rows(field: PrimeField, rows: &[Vec<i64>]) -> Self {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        let mut entries = Vec::with_capacity(nrows * ncols);
        for r in rows {
            assert_eq!(r.len(), ncols, "ragged rows");
            entries.extend(r.iter().map(|&e| field.reduce(e)));
        }
        Self { field, rows: nrows, cols: ncols, entries }
    }

    pub fn zeros(field: PrimeField, rows: usize, cols: usize) -> Self {
        Self { field, rows, cols, entries: vec![0; rows * cols] }
    }

    pub fn identity(field: PrimeField, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: u64) {
        self.entries[i * self.cols + j] = v % self.field.modulus();
    }

    pub fn row(&self, i: usize) -> &[u64] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn entries(&self) -> &[u64] {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|&e| e == 0)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// Exact product mod p. Panics on shape or field mismatch.
    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.field, other.field, "field mismatch");
        assert_eq!(self.cols, other.rows, "shape mismatch in matrix product");
        let mut out = Matrix::zeros(self.field, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let v = self.field.add(out.get(i, j), self.field.mul(a, other.get(k, j)));
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.field, other.field, "field mismatch");
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "shape mismatch");
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(&a, &b)| self.field.add(a, b))
            .collect();
        Matrix { field: self.field, rows: self.rows, cols: self.cols, entries }
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.field, other.field, "field mismatch");
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "shape mismatch");
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(&a, &b)| self.field.sub(a, b))
            .collect();
        Matrix { field: self.field, rows: self.rows, cols: self.cols, entries }
    }

    pub fn scale(&self, s: u64) -> Matrix {
        let entries = self.entries.iter().map(|&a| self.field.mul(a, s)).collect();
        Matrix { field: self.field, rows: self.rows, cols: self.cols, entries }
    }

    pub fn transpose(&self) -> Matrix {
        let mut out = Matrix::zeros(self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j));
            }
        }
        out
    }

    /// Applies this matrix to a row vector on the left: `v * self`.
    pub fn apply_row(&self, v: &[u64]) -> Vec<u64> {
        assert_eq!(v.len(), self.rows, "vector length must equal row count");
        let mut out = vec![0u64; self.cols];
        for (k, &a) in v.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (o, &e) in out.iter_mut().zip(self.row(k)) {
                *o = self.field.add(*o, self.field.mul(a, e));
            }
        }
        out
    }

    /// Stacks `other` below `self`.
    pub fn vstack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.field, other.field, "field mismatch");
        assert_eq!(self.cols, other.cols, "column mismatch");
        let mut entries = self.entries.clone();
        entries.extend_from_slice(&other.entries);
        Matrix { field: self.field, rows: self.rows + other.rows, cols: self.cols, entries }
    }

    pub fn power(&self, mut e: u64) -> Matrix {
        assert!(self.is_square(), "power of non-square matrix");
        let mut base = self.clone();
        let mut acc = Matrix::identity(self.field, self.rows);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    /// Gauss-Jordan inverse; `None` signals a singular matrix, which callers
    /// use as an invertibility test.
    pub fn inverse(&self) -> Option<Matrix> {
        assert!(self.is_square(), "inverse of non-square matrix");
        let n = self.rows;
        let f = self.field;
        let mut work = self.clone();
        let mut inv = Matrix::identity(f, n);
        for col in 0..n {
            let pivot = (col..n).find(|&r| work.get(r, col) != 0)?;
            if pivot != col {
                work.swap_rows(pivot, col);
                inv.swap_rows(pivot, col);
            }
            let scale = f.inv(work.get(col, col)).expect("nonzero pivot");
            work.scale_row(col, scale);
            inv.scale_row(col, scale);
            for r in 0..n {
                if r != col {
                    let factor = work.get(r, col);
                    if factor != 0 {
                        work.subtract_scaled_row(r, col, factor);
                        inv.subtract_scaled_row(r, col, factor);
                    }
                }
            }
        }
        Some(inv)
    }

    pub fn is_invertible(&self) -> bool {
        self.is_square() && self.rank() == self.rows
    }

    pub fn determinant(&self) -> u64 {
        assert!(self.is_square(), "determinant of non-square matrix");
        let n = self.rows;
        let f = self.field;
        let mut work = self.clone();
        let mut det = 1u64;
        for col in 0..n {
            let Some(pivot) = (col..n).find(|&r| work.get(r, col) != 0) else {
                return 0;
            };
            if pivot != col {
                work.swap_rows(pivot, col);
                det = f.neg(det);
            }
            let p = work.get(col, col);
            det = f.mul(det, p);
            let scale = f.inv(p).expect("nonzero pivot");
            work.scale_row(col, scale);
            for r in col + 1..n {
                let factor = work.get(r, col);
                if factor != 0 {
                    work.subtract_scaled_row(r, col, factor);
                }
            }
        }
        det
    }

    pub fn rank(&self) -> usize {
        let (rank, _) = self.clone().row_reduce();
        rank
    }

    /// Row rank together with a basis (in RREF) of the left kernel
    /// `{v : vM = 0}`; rank + kernel dimension = number of rows.
    pub fn rank_and_kernel(&self) -> (usize, Matrix) {
        // Row-reduce [M | I]; rows whose M-part vanishes carry kernel
        // vectors in the I-part.
        let f = self.field;
        let m = self.rows;
        let mut aug = Matrix::zeros(f, m, self.cols + m);
        for i in 0..m {
            for j in 0..self.cols {
                aug.set(i, j, self.get(i, j));
            }
            aug.set(i, self.cols + i, 1);
        }
        let rank = aug.row_reduce_leading(self.cols);
        let mut kernel_rows = Vec::new();
        for i in 0..m {
            if aug.row(i)[..self.cols].iter().all(|&e| e == 0) {
                kernel_rows.push(aug.row(i)[self.cols..].to_vec());
            }
        }
        let mut kernel = Matrix {
            field: f,
            rows: kernel_rows.len(),
            cols: m,
            entries: kernel_rows.concat(),
        };
        kernel.row_reduce();
        (rank, kernel)
    }

    /// In-place reduction to reduced row echelon form. Returns the rank and
    /// the pivot column of each nonzero row.
    pub fn row_reduce(&mut self) -> (usize, Vec<usize>) {
        let rank = self.row_reduce_leading(self.cols);
        let mut pivots = Vec::with_capacity(rank);
        for i in 0..rank {
            let col = self.row(i).iter().position(|&e| e != 0).expect("nonzero row");
            pivots.push(col);
        }
        (rank, pivots)
    }

    // RREF on the leading `lead` columns only (the remaining columns ride
    // along, as in the [M | I] kernel computation). Pivot rows are moved to
    // the top. Returns the rank of the leading block.
    fn row_reduce_leading(&mut self, lead: usize) -> usize {
        let f = self.field;
        let mut pivot_row = 0;
        for col in 0..lead {
            let Some(r) = (pivot_row..self.rows).find(|&r| self.get(r, col) != 0) else {
                continue;
            };
            self.swap_rows(r, pivot_row);
            let scale = f.inv(self.get(pivot_row, col)).expect("nonzero pivot");
            self.scale_row(pivot_row, scale);
            for other in 0..self.rows {
                if other != pivot_row {
                    let factor = self.get(other, col);
                    if factor != 0 {
                        self.subtract_scaled_row(other, pivot_row, factor);
                    }
                }
            }
            pivot_row += 1;
        }
        pivot_row
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.entries.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn scale_row(&mut self, r: usize, s: u64) {
        for j in 0..self.cols {
            let v = self.field.mul(self.get(r, j), s);
            self.set(r, j, v);
        }
    }

    fn subtract_scaled_row(&mut self, target: usize, source: usize, factor: u64) {
        for j in 0..self.cols {
            let v = self.field.sub(self.get(target, j), self.field.mul(factor, self.get(source, j)));
            self.set(target, j, v);
        }
    }

    /// Row-major base-p encoding, first entry most significant. Inverse of
    /// [`Matrix::from_code`]; the enumeration order of searches.
    pub fn code(&self) -> u64 {
        let p = self.field.modulus();
        self.entries.iter().fold(0u64, |acc, &e| acc * p + e)
    }

    pub fn from_code(field: PrimeField, rows: usize, cols: usize, code: u64) -> Matrix {
        let mut m = Matrix::zeros(field, rows, cols);
        m.assign_code(code);
        m
    }

    /// Decodes `code` into this matrix in place (scratch-buffer form of
    /// [`Matrix::from_code`] for hot enumeration loops).
    pub fn assign_code(&mut self, mut code: u64) {
        let p = self.field.modulus();
        for e in self.entries.iter_mut().rev() {
            *e = code % p;
            code /= p;
        }
        debug_assert_eq!(code, 0, "code out of range for shape");
    }
}

// Matrices serialize as arrays of row arrays of integers.
impl Serialize for Matrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.rows))?;
        for i in 0..self.rows {
            seq.serialize_element(self.row(i))?;
        }
        seq.end()
    }
}

impl std::fmt::Display for Matrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(u64::to_string).collect();
            writeln!(f, "[{}]", row.join(" "))?;
        }
        Ok(())
    }
}
