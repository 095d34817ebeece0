//! The exterior square of V = GF(p)^d and the map it induces from a
//! linear map on V.
//!
//! W has basis e_j ^ e_k for 0 <= j < k < d, ordered lexicographically by
//! (j, k), so for d = 4 the coordinates are (0,1), (0,2), (0,3), (1,2),
//! (1,3), (2,3).

use crate::field::PrimeField;
use crate::matrix::Matrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExtBasis {
    dim_v: usize,
}

impl ExtBasis {
    pub fn new(dim_v: usize) -> Self {
        assert!(dim_v >= 2, "exterior square needs dimension at least 2");
        Self { dim_v }
    }

    pub fn dim_v(&self) -> usize {
        self.dim_v
    }

    /// dim W = d(d-1)/2.
    pub fn dim_w(&self) -> usize {
        self.dim_v * (self.dim_v - 1) / 2
    }

    /// Position of e_j ^ e_k in the lexicographic basis; requires j < k.
    pub fn pair_index(&self, j: usize, k: usize) -> usize {
        assert!(j < k && k < self.dim_v, "pair ({j}, {k}) out of order or range");
        let skipped: usize = (0..j).map(|t| self.dim_v - 1 - t).sum();
        skipped + (k - j - 1)
    }

    /// Basis pairs in coordinate order.
    pub fn pairs(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.dim_w());
        for j in 0..self.dim_v {
            for k in j + 1..self.dim_v {
                out.push((j, k));
            }
        }
        out
    }

    /// Coordinates of u ^ v: the (j, k) entry is u_j v_k - u_k v_j.
    pub fn wedge(&self, field: PrimeField, u: &[u64], v: &[u64]) -> Vec<u64> {
        assert_eq!(u.len(), self.dim_v, "left factor has wrong length");
        assert_eq!(v.len(), self.dim_v, "right factor has wrong length");
        let mut out = Vec::with_capacity(self.dim_w());
        for j in 0..self.dim_v {
            for k in j + 1..self.dim_v {
                out.push(field.sub(field.mul(u[j], v[k]), field.mul(u[k], v[j])));
            }
        }
        out
    }

    /// The map W -> W induced by g: V -> V, sending e_j ^ e_k to
    /// (row j of g) ^ (row k of g). Functorial in g and defined for
    /// singular g as well.
    pub fn induced_map(&self, g: &Matrix) -> Matrix {
        assert_eq!(g.rows(), self.dim_v, "map must act on V");
        assert!(g.is_square(), "induced map needs a square input");
        let dw = self.dim_w();
        let mut out = Matrix::zeros(g.field(), dw, dw);
        let mut r = 0;
        for j in 0..self.dim_v {
            for k in j + 1..self.dim_v {
                let row = self.wedge(g.field(), g.row(j), g.row(k));
                for (c, &e) in row.iter().enumerate() {
                    out.set(r, c, e);
                }
                r += 1;
            }
        }
        out
    }
}
