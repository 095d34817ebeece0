//! Exhaustive enumeration of GL(k, p) by filtering every k x k matrix,
//! in the deterministic order of the row-major base-p code.

use crate::field::PrimeField;
use crate::matrix::Matrix;

/// |GL(k, p)| = prod_{i=0}^{k-1} (p^k - p^i).
pub fn gl_order(p: u64, k: u32) -> u64 {
    let pk = p.pow(k);
    (0..k).fold(1u64, |acc, i| acc * (pk - p.pow(i)))
}

/// Iterates the invertible k x k matrices over GF(p) by decoding each code
/// in `0..p^(k*k)` and skipping the singular ones. Candidate ranges can be
/// split by code for parallel scans; the full scan visits matrices in
/// strictly increasing code order.
#[derive(Debug, Clone, Copy)]
pub struct GlEnumerator {
    field: PrimeField,
    dim: usize,
    total_codes: u64,
}

impl GlEnumerator {
    pub fn new(field: PrimeField, dim: usize) -> Self {
        let bits = (dim * dim) as f64 * (field.modulus() as f64).log2();
        assert!(bits < 63.0, "code space for {dim}x{dim} over GF({}) overflows u64", field.modulus());
        let total_codes = field.modulus().pow((dim * dim) as u32);
        Self { field, dim, total_codes }
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Size of the ambient candidate space, p^(k*k).
    pub fn total_codes(&self) -> u64 {
        self.total_codes
    }

    /// |GL(k, p)|, the number of matrices the full scan yields.
    pub fn order(&self) -> u64 {
        gl_order(self.field.modulus(), self.dim as u32)
    }

    pub fn iter(&self) -> impl Iterator<Item = Matrix> + '_ {
        self.iter_range(0, self.total_codes)
    }

    pub fn iter_range(&self, start: u64, end: u64) -> impl Iterator<Item = Matrix> + '_ {
        assert!(start <= end && end <= self.total_codes, "code range out of bounds");
        let field = self.field;
        let dim = self.dim;
        (start..end).filter_map(move |code| {
            let m = Matrix::from_code(field, dim, dim, code);
            m.is_invertible().then_some(m)
        })
    }
}
