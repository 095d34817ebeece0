//! Row-space subspaces of GF(p)^d, kept in reduced row echelon form so
//! that equal subspaces compare equal.

use crate::field::PrimeField;
use crate::matrix::Matrix;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subspace {
    field: PrimeField,
    ambient_dim: usize,
    basis: Matrix,
}

impl Subspace {
    /// The span of the rows of `m`, inside GF(p)^cols.
    pub fn from_rows(m: &Matrix) -> Self {
        let mut basis = m.clone();
        let (rank, _) = basis.row_reduce();
        let reduced = Matrix::new(
            m.field(),
            rank,
            m.cols(),
            basis.entries()[..rank * m.cols()].to_vec(),
        );
        Self { field: m.field(), ambient_dim: m.cols(), basis: reduced }
    }

    pub fn zero(field: PrimeField, ambient_dim: usize) -> Self {
        Self::from_rows(&Matrix::zeros(field, 0, ambient_dim))
    }

    pub fn full(field: PrimeField, ambient_dim: usize) -> Self {
        Self::from_rows(&Matrix::identity(field, ambient_dim))
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    /// Number of vectors, p^dim.
    pub fn size(&self) -> u64 {
        self.field.modulus().pow(self.dim() as u32)
    }

    /// The RREF basis matrix, dim x ambient_dim.
    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    pub fn contains_vector(&self, v: &[u64]) -> bool {
        assert_eq!(v.len(), self.ambient_dim, "ambient dimension mismatch");
        // Reduce v against the RREF basis; membership means it vanishes.
        let f = self.field;
        let mut v = v.to_vec();
        for i in 0..self.basis.rows() {
            let pivot = self.basis.row(i).iter().position(|&e| e != 0).expect("nonzero basis row");
            let factor = v[pivot];
            if factor != 0 {
                for (e, &b) in v.iter_mut().zip(self.basis.row(i)) {
                    *e = f.sub(*e, f.mul(factor, b));
                }
            }
        }
        v.iter().all(|&e| e == 0)
    }

    pub fn contains(&self, other: &Subspace) -> bool {
        assert_eq!(self.ambient_dim, other.ambient_dim, "ambient dimension mismatch");
        (0..other.basis.rows()).all(|i| self.contains_vector(other.basis.row(i)))
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        Subspace::from_rows(&self.basis.vstack(&other.basis))
    }

    /// Intersection via the left kernel of the stacked basis [S; T]: a
    /// kernel row (a | b) with aS + bT = 0 yields the common vector aS.
    pub fn intersect(&self, other: &Subspace) -> Subspace {
        assert_eq!(self.field, other.field, "field mismatch");
        assert_eq!(self.ambient_dim, other.ambient_dim, "ambient dimension mismatch");
        let stacked = self.basis.vstack(&other.basis);
        let (_, kernel) = stacked.rank_and_kernel();
        let s_rows = self.basis.rows();
        let mut rows = Matrix::zeros(self.field, kernel.rows(), self.ambient_dim);
        for i in 0..kernel.rows() {
            let v = Matrix::new(self.field, 1, s_rows, kernel.row(i)[..s_rows].to_vec());
            let combo = v.mul(&self.basis);
            for j in 0..self.ambient_dim {
                rows.set(i, j, combo.get(0, j));
            }
        }
        Subspace::from_rows(&rows)
    }

    /// The image of this subspace under a linear map applied on the right.
    pub fn apply(&self, m: &Matrix) -> Subspace {
        Subspace::from_rows(&self.basis.mul(m))
    }

    /// All p^dim vectors of the subspace, in lexicographic order of the
    /// coefficient tuple on the RREF basis.
    pub fn vectors(&self) -> Vec<Vec<u64>> {
        let p = self.field.modulus();
        let dim = self.dim();
        let count = p.pow(dim as u32);
        let mut out = Vec::with_capacity(count as usize);
        for code in 0..count {
            let mut coeffs = vec![0u64; dim];
            let mut c = code;
            for i in (0..dim).rev() {
                coeffs[i] = c % p;
                c /= p;
            }
            out.push(self.basis.apply_row(&coeffs));
        }
        out
    }
}
