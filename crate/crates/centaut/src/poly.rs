//! Univariate polynomials over GF(p), used to pick the primitive
//! polynomial whose companion matrix seeds the construction.

use crate::field::PrimeField;
use crate::matrix::Matrix;
use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PolyError {
    #[error("polynomial must be monic, leading coefficient is {0}")]
    NotMonic(u64),
    #[error("polynomial is not irreducible")]
    NotIrreducible,
    #[error("no primitive polynomial of degree {degree} found over GF({p})")]
    NoneFound { p: u64, degree: usize },
}

/// Polynomial with coefficients in constant-first order; the coefficient
/// list is empty exactly for the zero polynomial and otherwise ends in a
/// nonzero leading coefficient.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyOverF {
    field: PrimeField,
    coeffs: Vec<u64>,
}

impl PolyOverF {
    pub fn new(field: PrimeField, coeffs: Vec<u64>) -> Self {
        let p = field.modulus();
        let mut coeffs: Vec<u64> = coeffs.into_iter().map(|c| c % p).collect();
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        Self { field, coeffs }
    }

    pub fn from_coeffs_i64(field: PrimeField, coeffs: &[i64]) -> Self {
        Self::new(field, coeffs.iter().map(|&c| field.reduce(c)).collect())
    }

    pub fn zero(field: PrimeField) -> Self {
        Self { field, coeffs: Vec::new() }
    }

    pub fn constant(field: PrimeField, c: u64) -> Self {
        Self::new(field, vec![c])
    }

    pub fn one(field: PrimeField) -> Self {
        Self::constant(field, 1)
    }

    /// The monomial x.
    pub fn x(field: PrimeField) -> Self {
        Self::new(field, vec![0, 1])
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    /// Constant-first coefficients; empty for the zero polynomial.
    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs == [1]
    }

    pub fn degree(&self) -> usize {
        assert!(!self.is_zero(), "degree of zero polynomial");
        self.coeffs.len() - 1
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last() == Some(&1)
    }

    pub fn coeff(&self, i: usize) -> u64 {
        self.coeffs.get(i).copied().unwrap_or(0)
    }

    pub fn add(&self, other: &PolyOverF) -> PolyOverF {
        assert_eq!(self.field, other.field, "field mismatch");
        let len = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..len)
            .map(|i| self.field.add(self.coeff(i), other.coeff(i)))
            .collect();
        PolyOverF::new(self.field, coeffs)
    }

    pub fn sub(&self, other: &PolyOverF) -> PolyOverF {
        assert_eq!(self.field, other.field, "field mismatch");
        let len = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..len)
            .map(|i| self.field.sub(self.coeff(i), other.coeff(i)))
            .collect();
        PolyOverF::new(self.field, coeffs)
    }

    pub fn mul(&self, other: &PolyOverF) -> PolyOverF {
        assert_eq!(self.field, other.field, "field mismatch");
        if self.is_zero() || other.is_zero() {
            return PolyOverF::zero(self.field);
        }
        let mut coeffs = vec![0u64; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] = self.field.add(coeffs[i + j], self.field.mul(a, b));
            }
        }
        PolyOverF::new(self.field, coeffs)
    }

    pub fn scale(&self, s: u64) -> PolyOverF {
        PolyOverF::new(self.field, self.coeffs.iter().map(|&c| self.field.mul(c, s)).collect())
    }

    /// Euclidean division: returns (quotient, remainder) with
    /// `self = q*divisor + r` and `deg r < deg divisor`.
    pub fn divmod(&self, divisor: &PolyOverF) -> (PolyOverF, PolyOverF) {
        assert_eq!(self.field, divisor.field, "field mismatch");
        assert!(!divisor.is_zero(), "division by zero polynomial");
        let f = self.field;
        let d = divisor.degree();
        let lead_inv = f.inv(*divisor.coeffs.last().unwrap()).expect("nonzero lead");
        let mut rem = self.coeffs.clone();
        let mut quot = vec![0u64; self.coeffs.len().saturating_sub(d)];
        while rem.len() > d {
            let k = rem.len() - 1 - d;
            let factor = f.mul(*rem.last().unwrap(), lead_inv);
            if factor != 0 {
                quot[k] = factor;
                for (i, &c) in divisor.coeffs.iter().enumerate() {
                    rem[k + i] = f.sub(rem[k + i], f.mul(factor, c));
                }
            }
            rem.pop();
        }
        (PolyOverF::new(f, quot), PolyOverF::new(f, rem))
    }

    pub fn rem(&self, divisor: &PolyOverF) -> PolyOverF {
        self.divmod(divisor).1
    }

    pub fn eval(&self, x: u64) -> u64 {
        let f = self.field;
        self.coeffs.iter().rev().fold(0u64, |acc, &c| f.add(f.mul(acc, x), c))
    }

    /// Evaluates the polynomial at a square matrix.
    pub fn eval_matrix(&self, m: &Matrix) -> Matrix {
        assert!(m.is_square(), "matrix argument must be square");
        let f = m.field();
        let mut acc = Matrix::zeros(f, m.rows(), m.cols());
        for &c in self.coeffs.iter().rev() {
            acc = acc.mul(m);
            acc = acc.add(&Matrix::identity(f, m.rows()).scale(c));
        }
        acc
    }

    /// Base-p integer encoding of the coefficients below the leading term,
    /// constant term least significant. This is the enumeration order of
    /// [`find_primitive_polynomial`].
    pub fn tail_code(&self) -> u64 {
        let p = self.field.modulus();
        let deg = self.degree();
        self.coeffs[..deg].iter().rev().fold(0u64, |acc, &c| acc * p + c)
    }
}

impl Serialize for PolyOverF {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        if self.is_zero() {
            let mut seq = serializer.serialize_seq(Some(1))?;
            seq.serialize_element(&0u64)?;
            return seq.end();
        }
        let mut seq = serializer.serialize_seq(Some(self.coeffs.len()))?;
        for c in &self.coeffs {
            seq.serialize_element(c)?;
        }
        seq.end()
    }
}

impl std::fmt::Display for PolyOverF {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut terms = Vec::new();
        for (i, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let term = match (i, c) {
                (0, _) => format!("{c}"),
                (1, 1) => "x".to_string(),
                (1, _) => format!("{c}x"),
                (_, 1) => format!("x^{i}"),
                (_, _) => format!("{c}x^{i}"),
            };
            terms.push(term);
        }
        write!(f, "{}", terms.join(" + "))
    }
}

/// All monic polynomials of the given degree, in ascending order of the
/// base-p encoding of their non-leading coefficients.
fn monic_polys(field: PrimeField, degree: usize) -> impl Iterator<Item = PolyOverF> {
    let p = field.modulus();
    let count = p.pow(degree as u32);
    (0..count).map(move |mut code| {
        let mut coeffs = Vec::with_capacity(degree + 1);
        for _ in 0..degree {
            coeffs.push(code % p);
            code /= p;
        }
        coeffs.push(1);
        PolyOverF::new(field, coeffs)
    })
}

/// Irreducibility by trial division against every monic polynomial of
/// degree at most half the input's. Requires a monic input of degree >= 1.
pub fn poly_is_irreducible(m: &PolyOverF) -> Result<bool, PolyError> {
    if m.is_zero() {
        return Err(PolyError::NotMonic(0));
    }
    if !m.is_monic() {
        return Err(PolyError::NotMonic(*m.coeffs.last().unwrap()));
    }
    let deg = m.degree();
    if deg == 0 {
        return Ok(false);
    }
    for d in 1..=deg / 2 {
        for divisor in monic_polys(m.field, d) {
            if m.rem(&divisor).is_zero() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Primitivity test: the residue of x must have multiplicative order
/// exactly p^deg - 1 in GF(p)[x]/(m). Errors on reducible input.
pub fn poly_is_primitive(m: &PolyOverF) -> Result<bool, PolyError> {
    if !poly_is_irreducible(m)? {
        return Err(PolyError::NotIrreducible);
    }
    let deg = m.degree() as u32;
    if deg == 0 {
        return Err(PolyError::NotIrreducible);
    }
    let group_order = m.field.modulus().pow(deg) - 1;
    let x = PolyOverF::x(m.field);
    let mut power = x.clone().rem(m);
    for step in 1..=group_order {
        if power.is_one() {
            return Ok(step == group_order);
        }
        power = power.mul(&x).rem(m);
    }
    // x is a unit mod an irreducible m, so some power is 1.
    unreachable!("order of x exceeded the group order");
}

/// The first primitive monic polynomial of the given degree, where "first"
/// means smallest base-p encoding of the non-leading coefficients with the
/// constant term least significant.
pub fn find_primitive_polynomial(field: PrimeField, degree: usize) -> Result<PolyOverF, PolyError> {
    monic_polys(field, degree)
        .find(|m| poly_is_primitive(m) == Ok(true))
        .ok_or(PolyError::NoneFound { p: field.modulus(), degree })
}

/// Companion matrix in the row-vector convention: row i of C is e_{i+1}
/// for i < n-1 and the last row is the negated coefficient vector, so that
/// e_0 C^k = e_k and m(C) = 0.
pub fn companion_matrix(m: &PolyOverF) -> Result<Matrix, PolyError> {
    if m.is_zero() {
        return Err(PolyError::NotMonic(0));
    }
    if !m.is_monic() {
        return Err(PolyError::NotMonic(*m.coeffs.last().unwrap()));
    }
    let n = m.degree();
    let f = m.field();
    let mut c = Matrix::zeros(f, n, n);
    for i in 0..n.saturating_sub(1) {
        c.set(i, i + 1, 1);
    }
    for j in 0..n {
        c.set(n - 1, j, f.neg(m.coeff(j)));
    }
    Ok(c)
}

/// Characteristic polynomial det(xI - M), by cofactor expansion over
/// polynomial entries. Intended for the small matrices used here.
pub fn char_poly(m: &Matrix) -> PolyOverF {
    assert!(m.is_square(), "characteristic polynomial of non-square matrix");
    let f = m.field();
    let n = m.rows();
    let mut entries = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            let mut e = PolyOverF::constant(f, f.neg(m.get(i, j)));
            if i == j {
                e = e.add(&PolyOverF::x(f));
            }
            entries.push(e);
        }
    }
    poly_det(&entries, n)
}

fn poly_det(entries: &[PolyOverF], n: usize) -> PolyOverF {
    let f = entries[0].field();
    if n == 1 {
        return entries[0].clone();
    }
    let mut det = PolyOverF::zero(f);
    for j in 0..n {
        if entries[j].is_zero() {
            continue;
        }
        let mut minor = Vec::with_capacity((n - 1) * (n - 1));
        for r in 1..n {
            for c in 0..n {
                if c != j {
                    minor.push(entries[r * n + c].clone());
                }
            }
        }
        let cofactor = entries[j].mul(&poly_det(&minor, n - 1));
        det = if j % 2 == 0 { det.add(&cofactor) } else { det.sub(&cofactor) };
    }
    det
}
