//! Assembly of the map f: V -> W that drives the whole construction.
//!
//! V = GF(p)^(n+1) with basis v_0, ..., v_n and U = <v_1, ..., v_n>.
//! W is the exterior square of V in the lexicographic pair basis, so its
//! first n coordinates are v_0 ^ v_k and the remaining ones are pairs
//! inside U. The map f sends v_0 to (b | c) and v_i (i >= 1) to row i-1
//! of A padded with zeros, where A is the companion matrix of a primitive
//! polynomial of degree n:
//!
//! ```text
//!         ( b  c )        b : 1 x n,        nonzero
//!     f = ( A  0 )        c : 1 x n(n-1)/2, nonzero
//!                         A : n x n,        companion of a primitive m
//! ```

use crate::exterior::ExtBasis;
use crate::field::PrimeField;
use crate::matrix::Matrix;
use crate::poly::{companion_matrix, find_primitive_polynomial, poly_is_primitive, PolyError, PolyOverF};
use crate::report::{CheckItem, CheckReport};
use crate::subspace::Subspace;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ConstructionError {
    #[error("construction requires n + 1 >= 4, got n = {0}")]
    DimensionTooSmall(usize),
    #[error("assumption violated: block {0} must be nonzero")]
    ZeroBlock(&'static str),
    #[error("block {which} must have length {expected}, got {got}")]
    BlockShape { which: &'static str, expected: usize, got: usize },
    #[error("polynomial must be primitive of degree {expected}, got degree {got}")]
    WrongDegree { expected: usize, got: usize },
    #[error("components use different fields")]
    FieldMismatch,
    #[error("polynomial {0} is not primitive")]
    NotPrimitive(String),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// The assembled map f together with its blocks. Built either through
/// [`FMatrix::build`], which enforces every assumption the searches rely on,
/// or through [`FMatrix::assemble`], which only checks shapes and exists so
/// tests can probe what happens when an assumption is dropped.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FMatrix {
    field: PrimeField,
    n: usize,
    b: Vec<u64>,
    c: Vec<u64>,
    a: Matrix,
    full: Matrix,
    poly: Option<PolyOverF>,
}

fn pairs_within(n: usize) -> usize {
    n * (n - 1) / 2
}

impl FMatrix {
    pub fn build(
        field: PrimeField,
        n: usize,
        b: Vec<u64>,
        c: Vec<u64>,
        poly: &PolyOverF,
    ) -> Result<Self, ConstructionError> {
        if n < 3 {
            return Err(ConstructionError::DimensionTooSmall(n));
        }
        if poly.field() != field {
            return Err(ConstructionError::FieldMismatch);
        }
        if poly.is_zero() || poly.degree() != n {
            let got = if poly.is_zero() { 0 } else { poly.degree() };
            return Err(ConstructionError::WrongDegree { expected: n, got });
        }
        if !poly_is_primitive(poly)? {
            return Err(ConstructionError::NotPrimitive(poly.to_string()));
        }
        let a = companion_matrix(poly).expect("primitive implies monic");
        let mut fm = Self::assemble(field, n, b, c, a)?;
        if fm.b.iter().all(|&e| e == 0) {
            return Err(ConstructionError::ZeroBlock("b"));
        }
        if fm.c.iter().all(|&e| e == 0) {
            return Err(ConstructionError::ZeroBlock("c"));
        }
        fm.poly = Some(poly.clone());
        Ok(fm)
    }

    /// The canonical instance for a given field and n: the first primitive
    /// polynomial in coefficient-encoding order, with b and c both the
    /// first unit vector.
    pub fn default_for(field: PrimeField, n: usize) -> Result<Self, ConstructionError> {
        if n < 3 {
            return Err(ConstructionError::DimensionTooSmall(n));
        }
        let poly = find_primitive_polynomial(field, n)?;
        let mut b = vec![0u64; n];
        b[0] = 1;
        let mut c = vec![0u64; pairs_within(n)];
        c[0] = 1;
        Self::build(field, n, b, c, &poly)
    }

    /// Shape-checked assembly with no mathematical validation. The blocks
    /// may violate the construction's assumptions; verification reports
    /// and searches will then show which conclusions break.
    pub fn assemble(
        field: PrimeField,
        n: usize,
        b: Vec<u64>,
        c: Vec<u64>,
        a: Matrix,
    ) -> Result<Self, ConstructionError> {
        if n < 2 {
            return Err(ConstructionError::DimensionTooSmall(n));
        }
        if b.len() != n {
            return Err(ConstructionError::BlockShape { which: "b", expected: n, got: b.len() });
        }
        if c.len() != pairs_within(n) {
            return Err(ConstructionError::BlockShape {
                which: "c",
                expected: pairs_within(n),
                got: c.len(),
            });
        }
        if a.rows() != n || a.cols() != n {
            return Err(ConstructionError::BlockShape { which: "A", expected: n * n, got: a.rows() * a.cols() });
        }
        if a.field() != field {
            return Err(ConstructionError::FieldMismatch);
        }
        let p = field.modulus();
        let b: Vec<u64> = b.into_iter().map(|e| e % p).collect();
        let c: Vec<u64> = c.into_iter().map(|e| e % p).collect();
        let dim_w = ExtBasis::new(n + 1).dim_w();
        let mut full = Matrix::zeros(field, n + 1, dim_w);
        for (j, &e) in b.iter().chain(c.iter()).enumerate() {
            full.set(0, j, e);
        }
        for i in 0..n {
            for j in 0..n {
                full.set(i + 1, j, a.get(i, j));
            }
        }
        Ok(Self { field, n, b, c, a, full, poly: None })
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim_v(&self) -> usize {
        self.n + 1
    }

    pub fn ext(&self) -> ExtBasis {
        ExtBasis::new(self.n + 1)
    }

    pub fn b(&self) -> &[u64] {
        &self.b
    }

    pub fn c(&self) -> &[u64] {
        &self.c
    }

    pub fn a(&self) -> &Matrix {
        &self.a
    }

    /// The (n+1) x (n+1)n/2 matrix of f in the pair basis.
    pub fn full(&self) -> &Matrix {
        &self.full
    }

    pub fn poly(&self) -> Option<&PolyOverF> {
        self.poly.as_ref()
    }

    /// U = <v_1, ..., v_n>.
    pub fn u_subspace(&self) -> Subspace {
        let mut rows = Matrix::zeros(self.field, self.n, self.n + 1);
        for i in 0..self.n {
            rows.set(i, i + 1, 1);
        }
        Subspace::from_rows(&rows)
    }

    /// The image Vf as a subspace of W.
    pub fn image(&self) -> Subspace {
        Subspace::from_rows(&self.full)
    }

    /// Multiplicative order of A, by iterating powers up to the group
    /// order of GL(n, p).
    pub fn order_of_a(&self) -> Option<u64> {
        let bound = crate::gl::gl_order(self.field.modulus(), self.n as u32);
        let identity = Matrix::identity(self.field, self.n);
        let mut power = self.a.clone();
        for k in 1..=bound {
            if power == identity {
                return Some(k);
            }
            power = power.mul(&self.a);
        }
        None
    }

    /// Checks that A generates a field of order p^n inside the matrix
    /// algebra and is centralized by nothing else:
    ///
    /// - A has multiplicative order p^n - 1;
    /// - the span of I, A, ..., A^(n-1) has p^n distinct elements, is
    ///   closed under multiplication, and every nonzero element is
    ///   invertible;
    /// - the centralizer of A in the full matrix algebra is exactly that
    ///   span;
    /// - the characteristic polynomial of A is the defining polynomial.
    pub fn check_companion_properties(&self) -> CheckReport {
        let mut report = CheckReport::new("companion matrix properties");
        let p = self.field.modulus();
        let n = self.n as u32;
        let expected_order = p.pow(n) - 1;
        let order = self.order_of_a();
        report.push(
            CheckItem::new(
                "order",
                &format!("A has multiplicative order p^n - 1 = {expected_order}"),
                order == Some(expected_order),
            )
            .with_witness(serde_json::json!({ "computed": order })),
        );

        let span = self.polynomials_in_a();
        let span_size = span.len();
        let distinct = span_size == p.pow(n) as usize;
        report.push(CheckItem::new(
            "span-size",
            &format!("I, A, ..., A^(n-1) span {} distinct matrices", p.pow(n)),
            distinct,
        ));
        let mut closed = true;
        let mut units = true;
        for x in &span {
            if !x.is_zero() && !x.is_invertible() {
                units = false;
            }
            for y in &span {
                if !span.contains(&x.mul(y)) {
                    closed = false;
                }
            }
        }
        report.push(CheckItem::new(
            "span-field",
            "the span is closed under products and its nonzero elements are invertible",
            closed && units,
        ));

        let (centralizer_dim, centralizer) = self.centralizer_of_a();
        let span_space = matrices_to_subspace(&span_basis(self));
        let centralizer_matches = centralizer_dim == self.n && span_space.contains(&centralizer);
        report.push(
            CheckItem::new(
                "centralizer",
                &format!("matrices commuting with A form exactly the {}-dimensional span of its powers", self.n),
                centralizer_matches,
            )
            .with_witness(serde_json::json!({ "dimension": centralizer_dim })),
        );

        if let Some(poly) = &self.poly {
            let cp = crate::poly::char_poly(&self.a);
            report.push(CheckItem::new(
                "char-poly",
                &format!("characteristic polynomial of A is {poly}"),
                cp == *poly,
            ));
        }
        report
    }

    /// All p^n linear combinations of I, A, ..., A^(n-1).
    fn polynomials_in_a(&self) -> Vec<Matrix> {
        let p = self.field.modulus();
        let basis = span_basis(self);
        let count = p.pow(self.n as u32);
        let mut out = Vec::with_capacity(count as usize);
        for code in 0..count {
            let mut acc = Matrix::zeros(self.field, self.n, self.n);
            let mut rem = code;
            for b in &basis {
                let coeff = rem % p;
                rem /= p;
                if coeff != 0 {
                    acc = acc.add(&b.scale(coeff));
                }
            }
            out.push(acc);
        }
        out.sort_by_key(Matrix::code);
        out.dedup();
        out
    }

    /// Dimension and basis of {X : XA = AX} inside the n^2-dimensional
    /// matrix space, via the kernel of X -> XA - AX.
    pub fn centralizer_of_a(&self) -> (usize, Subspace) {
        let n = self.n;
        let mut commutator_map = Matrix::zeros(self.field, n * n, n * n);
        for i in 0..n {
            for j in 0..n {
                let mut e = Matrix::zeros(self.field, n, n);
                e.set(i, j, 1);
                let image = e.mul(&self.a).sub(&self.a.mul(&e));
                for r in 0..n {
                    for c in 0..n {
                        commutator_map.set(i * n + j, r * n + c, image.get(r, c));
                    }
                }
            }
        }
        let (_, kernel) = commutator_map.rank_and_kernel();
        (kernel.rows(), Subspace::from_rows(&kernel))
    }

    /// Checks the linear-algebra facts about f itself:
    ///
    /// - f is injective;
    /// - U maps onto v_0 ^ U, an n-dimensional space;
    /// - the only vectors x with x ^ V lying inside the image of f are
    ///   the multiples of v_0;
    /// - U is exactly the preimage of v_0 ^ V.
    pub fn check_f_properties(&self) -> CheckReport {
        let mut report = CheckReport::new("properties of the map f");
        let f = self.field;
        let n = self.n;
        let dim_v = n + 1;
        let ext = self.ext();
        let dim_w = ext.dim_w();

        let (rank, kernel) = self.full.rank_and_kernel();
        report.push(
            CheckItem::new("injective", "f has trivial kernel", kernel.rows() == 0 && rank == dim_v)
                .with_witness(serde_json::json!({ "rank": rank })),
        );

        let u = self.u_subspace();
        let uf = u.apply(&self.full);
        let head = head_coordinate_space(f, n);
        let uf_ok = uf.dim() == n && head.contains(&uf) && uf == head;
        report.push(
            CheckItem::new("image-of-u", "U maps onto the n-dimensional space v_0 ^ U", uf_ok)
                .with_witness(serde_json::json!({ "dimension": uf.dim() })),
        );

        // {x : x ^ V <= Vf}, by testing every vector of V against every
        // basis vector of V.
        let image = self.image();
        let p = f.modulus();
        let total = p.pow(dim_v as u32);
        let mut annihilator_ok = true;
        for code in 0..total {
            let mut x = vec![0u64; dim_v];
            let mut rem = code;
            for e in x.iter_mut().rev() {
                *e = rem % p;
                rem /= p;
            }
            let mut wedges_into_image = true;
            for i in 0..dim_v {
                let mut v = vec![0u64; dim_v];
                v[i] = 1;
                if !image.contains_vector(&ext.wedge(f, &x, &v)) {
                    wedges_into_image = false;
                    break;
                }
            }
            let is_multiple_of_v0 = x[1..].iter().all(|&e| e == 0);
            if wedges_into_image != is_multiple_of_v0 {
                annihilator_ok = false;
                break;
            }
        }
        report.push(CheckItem::new(
            "annihilator",
            "x ^ V lies in the image of f exactly when x is a multiple of v_0",
            annihilator_ok,
        ));

        // {x : xf in v_0 ^ V} = U, read off the tail columns of f.
        let tail = Matrix::new(
            f,
            dim_v,
            dim_w - n,
            (0..dim_v)
                .flat_map(|i| self.full.row(i)[n..].to_vec())
                .collect(),
        );
        let (_, tail_kernel) = tail.rank_and_kernel();
        let preimage = Subspace::from_rows(&tail_kernel);
        report.push(
            CheckItem::new("preimage-of-head", "the preimage of v_0 ^ V is exactly U", preimage == u)
                .with_witness(serde_json::json!({ "dimension": preimage.dim() })),
        );
        report
    }
}

fn span_basis(fm: &FMatrix) -> Vec<Matrix> {
    let mut basis = Vec::with_capacity(fm.n);
    let mut power = Matrix::identity(fm.field, fm.n);
    for _ in 0..fm.n {
        basis.push(power.clone());
        power = power.mul(&fm.a);
    }
    basis
}

fn matrices_to_subspace(mats: &[Matrix]) -> Subspace {
    let n = mats[0].rows();
    let field = mats[0].field();
    let entries: Vec<u64> = mats.iter().flat_map(|m| m.entries().to_vec()).collect();
    Subspace::from_rows(&Matrix::new(field, mats.len(), n * n, entries))
}

/// The subspace of W spanned by the first n coordinates, i.e. v_0 ^ U.
fn head_coordinate_space(field: PrimeField, n: usize) -> Subspace {
    let dim_w = ExtBasis::new(n + 1).dim_w();
    let mut rows = Matrix::zeros(field, n, dim_w);
    for i in 0..n {
        rows.set(i, i, 1);
    }
    Subspace::from_rows(&rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::PolyOverF;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn gf(p: u64) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    #[test]
    fn default_instance_for_gf2() {
        let fm = FMatrix::default_for(gf(2), 3).unwrap();
        assert_eq!(fm.full().rows(), 4);
        assert_eq!(fm.full().cols(), 6);
        assert_eq!(fm.full().row(0), &[1, 0, 0, 1, 0, 0]);
        assert_eq!(fm.full().row(1), &[0, 1, 0, 0, 0, 0]);
        assert_eq!(fm.full().row(2), &[0, 0, 1, 0, 0, 0]);
        assert_eq!(fm.full().row(3), &[1, 1, 0, 0, 0, 0]);
        assert_eq!(fm.poly().unwrap().to_string(), "x^3 + x + 1");
    }

    #[test]
    fn build_rejects_broken_assumptions() {
        let f = gf(2);
        let m = PolyOverF::from_coeffs_i64(f, &[1, 1, 0, 1]);
        assert_eq!(
            FMatrix::build(f, 2, vec![1, 0], vec![1], &m).unwrap_err(),
            ConstructionError::DimensionTooSmall(2)
        );
        assert_eq!(
            FMatrix::build(f, 3, vec![0, 0, 0], vec![1, 0, 0], &m).unwrap_err(),
            ConstructionError::ZeroBlock("b")
        );
        assert_eq!(
            FMatrix::build(f, 3, vec![1, 0, 0], vec![0, 0, 0], &m).unwrap_err(),
            ConstructionError::ZeroBlock("c")
        );
        assert_eq!(
            FMatrix::build(f, 3, vec![1, 0], vec![1, 0, 0], &m).unwrap_err(),
            ConstructionError::BlockShape { which: "b", expected: 3, got: 2 }
        );
        let quartic = PolyOverF::from_coeffs_i64(f, &[1, 1, 0, 0, 1]);
        assert_eq!(
            FMatrix::build(f, 3, vec![1, 0, 0], vec![1, 0, 0], &quartic).unwrap_err(),
            ConstructionError::WrongDegree { expected: 3, got: 4 }
        );
        let imprimitive = PolyOverF::from_coeffs_i64(f, &[1, 1, 1, 1, 1]);
        assert!(matches!(
            FMatrix::build(f, 4, vec![1, 0, 0, 0], vec![1, 0, 0, 0, 0, 0], &imprimitive),
            Err(ConstructionError::NotPrimitive(_))
        ));
        let reducible = PolyOverF::from_coeffs_i64(f, &[1, 0, 1]);
        assert_eq!(
            FMatrix::build(f, 2, vec![1, 0], vec![1], &reducible).unwrap_err(),
            ConstructionError::DimensionTooSmall(2)
        );
    }

    #[test]
    fn field_mismatch_is_detected() {
        let m = PolyOverF::from_coeffs_i64(gf(2), &[1, 1, 0, 1]);
        assert_eq!(
            FMatrix::build(gf(3), 3, vec![1, 0, 0], vec![1, 0, 0], &m).unwrap_err(),
            ConstructionError::FieldMismatch
        );
    }

    #[test]
    fn companion_checks_pass_for_defaults() {
        for p in [2u64, 3] {
            let fm = FMatrix::default_for(gf(p), 3).unwrap();
            let report = fm.check_companion_properties();
            assert!(report.pass(), "{}", report.render_text());
            let expected = p.pow(3) - 1;
            assert_eq!(fm.order_of_a(), Some(expected));
        }
    }

    #[test]
    fn centralizer_matches_exhaustive_scan_over_gf2() {
        let fm = FMatrix::default_for(gf(2), 3).unwrap();
        let (dim, space) = fm.centralizer_of_a();
        let mut commuting = Vec::new();
        for code in 0..512u64 {
            let x = Matrix::from_code(gf(2), 3, 3, code);
            if x.mul(fm.a()) == fm.a().mul(&x) {
                commuting.push(x);
            }
        }
        assert_eq!(commuting.len(), 8);
        assert_eq!(dim, 3);
        for x in &commuting {
            assert!(space.contains_vector(x.entries()));
        }
    }

    #[test]
    fn f_checks_pass_for_random_blocks() {
        let mut rng = StdRng::seed_from_u64(5);
        for p in [2u64, 3] {
            let f = gf(p);
            let poly = find_primitive_polynomial(f, 3).unwrap();
            for _ in 0..5 {
                let b = random_nonzero(&mut rng, p, 3);
                let c = random_nonzero(&mut rng, p, 3);
                let fm = FMatrix::build(f, 3, b, c, &poly).unwrap();
                let report = fm.check_f_properties();
                assert!(report.pass(), "{}", report.render_text());
            }
        }
    }

    fn random_nonzero(rng: &mut StdRng, p: u64, len: usize) -> Vec<u64> {
        loop {
            let v: Vec<u64> = (0..len).map(|_| rng.random_range(0..p)).collect();
            if v.iter().any(|&e| e != 0) {
                return v;
            }
        }
    }

    #[test]
    fn zero_a_block_breaks_injectivity() {
        let f = gf(2);
        let fm = FMatrix::assemble(f, 3, vec![1, 0, 0], vec![1, 0, 0], Matrix::zeros(f, 3, 3)).unwrap();
        let report = fm.check_f_properties();
        assert!(!report.pass());
        let injective = report.checks.iter().find(|c| c.item == "injective").unwrap();
        assert!(!injective.pass);
    }

    #[test]
    fn identity_a_block_fails_companion_checks() {
        let f = gf(2);
        let fm = FMatrix::assemble(f, 3, vec![1, 0, 0], vec![1, 0, 0], Matrix::identity(f, 3)).unwrap();
        let report = fm.check_companion_properties();
        assert!(!report.pass());
    }

    #[test]
    fn image_mixes_head_and_tail_only_through_row_zero() {
        let fm = FMatrix::default_for(gf(3), 3).unwrap();
        let image = fm.image();
        assert_eq!(image.dim(), 4);
        // Tail coordinates of image vectors are always multiples of c.
        for v in image.vectors() {
            let tail = &v[3..];
            let is_multiple = (0..fm.field().modulus())
                .any(|t| tail.iter().zip(fm.c()).all(|(&x, &ci)| x == fm.field().mul(t, ci)));
            assert!(is_multiple, "tail {tail:?} is not a multiple of c");
        }
    }
}
