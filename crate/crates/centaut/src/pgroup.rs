//! The finite p-group P realized from the map f.
//!
//! P has generators x_0, ..., x_n subject to the class-2 relations
//!
//! ```text
//!   [[x_i, x_j], x_k] = 1
//!   [x_i, x_j]^p     = 1
//!   x_i^q            = prod_{j<k} [x_j, x_k]^(T[i][(j,k)])
//! ```
//!
//! where T is the matrix of f in the pair basis, q = p for odd p and
//! q = 4 for p = 2. Every element has the normal form
//! x_0^(u_0) ... x_n^(u_n) * prod [x_j, x_k]^(s_jk) with the u_i mod q and
//! the s_jk mod p, and multiplication collects a product back into this
//! form. Group facts below (orders, center, Frattini subgroup) are
//! computed by honest enumeration of the normal forms, not read off the
//! intended formulas.

use crate::construction::FMatrix;
use crate::exterior::ExtBasis;
use crate::field::PrimeField;
use crate::matrix::Matrix;
use crate::report::CheckItem;
use rand::Rng;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};
use std::collections::{HashSet, VecDeque};
use thiserror::Error;

/// Largest group order the enumeration-based computations accept.
pub const ENUMERATION_LIMIT: u128 = 1 << 20;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PGroupError {
    #[error("group order {order} exceeds the enumeration guard of {limit}")]
    GroupTooLarge { order: u128, limit: u128 },
    #[error("the squaring obstruction applies only to odd p")]
    EvenPrime,
    #[error("power table must be {expected_rows} x {expected_cols}, got {rows} x {cols}")]
    TableShape { expected_rows: usize, expected_cols: usize, rows: usize, cols: usize },
}

/// Element in normal form: generator exponents mod q, then commutator
/// exponents mod p in the lexicographic pair order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GroupElement {
    pub gen_exp: Vec<u64>,
    pub comm_exp: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Presentation {
    field: PrimeField,
    q: u64,
    n_plus_1: usize,
    power_table: Matrix,
    ext: ExtBasis,
}

impl Presentation {
    /// Realizes the group attached to a validated map f.
    pub fn from_f(fm: &FMatrix) -> Self {
        let field = fm.field();
        let q = if field.modulus() == 2 { 4 } else { field.modulus() };
        Self {
            field,
            q,
            n_plus_1: fm.dim_v(),
            power_table: fm.full().clone(),
            ext: fm.ext(),
        }
    }

    /// Builds a presentation from an arbitrary power table, so degenerate
    /// groups (for example the Heisenberg group, from a zero table) can be
    /// exercised by the same machinery.
    pub fn from_power_table(field: PrimeField, table: Matrix) -> Result<Self, PGroupError> {
        let n_plus_1 = table.rows();
        let ext = ExtBasis::new(n_plus_1);
        if table.cols() != ext.dim_w() {
            return Err(PGroupError::TableShape {
                expected_rows: n_plus_1,
                expected_cols: ext.dim_w(),
                rows: table.rows(),
                cols: table.cols(),
            });
        }
        let q = if field.modulus() == 2 { 4 } else { field.modulus() };
        Ok(Self { field, q, n_plus_1, power_table: table, ext })
    }

    pub fn p(&self) -> u64 {
        self.field.modulus()
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn generators_count(&self) -> usize {
        self.n_plus_1
    }

    pub fn pair_count(&self) -> usize {
        self.ext.dim_w()
    }

    pub fn power_table(&self) -> &Matrix {
        &self.power_table
    }

    /// |P| = q^(n+1) * p^(pair count).
    pub fn order(&self) -> u128 {
        let d = self.n_plus_1 as u32;
        let c = self.pair_count() as u32;
        (self.q as u128).pow(d) * (self.p() as u128).pow(c)
    }

    pub fn identity(&self) -> GroupElement {
        GroupElement {
            gen_exp: vec![0; self.n_plus_1],
            comm_exp: vec![0; self.pair_count()],
        }
    }

    pub fn generator(&self, i: usize) -> GroupElement {
        assert!(i < self.n_plus_1, "generator index out of range");
        let mut g = self.identity();
        g.gen_exp[i] = 1;
        g
    }

    /// The central element [x_j, x_k] for j < k.
    pub fn central_generator(&self, j: usize, k: usize) -> GroupElement {
        let mut g = self.identity();
        g.comm_exp[self.ext.pair_index(j, k)] = 1;
        g
    }

    pub fn element(&self, gen_exp: Vec<i64>, comm_exp: Vec<i64>) -> GroupElement {
        assert_eq!(gen_exp.len(), self.n_plus_1, "generator exponent count");
        assert_eq!(comm_exp.len(), self.pair_count(), "commutator exponent count");
        let q = self.q as i64;
        GroupElement {
            gen_exp: gen_exp.into_iter().map(|e| e.rem_euclid(q) as u64).collect(),
            comm_exp: comm_exp.into_iter().map(|e| self.field.reduce(e)).collect(),
        }
    }

    pub fn random_element<R: Rng + ?Sized>(&self, rng: &mut R) -> GroupElement {
        GroupElement {
            gen_exp: (0..self.n_plus_1).map(|_| rng.random_range(0..self.q)).collect(),
            comm_exp: (0..self.pair_count()).map(|_| rng.random_range(0..self.p())).collect(),
        }
    }

    /// Collects the product of two normal forms back into normal form:
    /// commutator parts add, moving the right factor's generators past the
    /// left factor's contributes -u_k v_j to the (j, k) exponent, and each
    /// generator exponent overflowing q contributes that generator's power
    /// relation.
    pub fn multiply(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        let d = self.n_plus_1;
        assert_eq!(a.gen_exp.len(), d, "left element does not fit this presentation");
        assert_eq!(b.gen_exp.len(), d, "right element does not fit this presentation");
        let f = self.field;
        let p = self.p();
        let mut comm: Vec<u64> = a
            .comm_exp
            .iter()
            .zip(&b.comm_exp)
            .map(|(&x, &y)| f.add(x, y))
            .collect();
        let mut idx = 0;
        for j in 0..d {
            for k in j + 1..d {
                let cross = (a.gen_exp[k] * b.gen_exp[j]) % p;
                comm[idx] = f.sub(comm[idx], cross);
                idx += 1;
            }
        }
        let mut gen = vec![0u64; d];
        for (i, (g, (&x, &y))) in gen.iter_mut().zip(a.gen_exp.iter().zip(&b.gen_exp)).enumerate() {
            let total = x + y;
            *g = total % self.q;
            if total >= self.q {
                for (c, &t) in comm.iter_mut().zip(self.power_table.row(i)) {
                    *c = f.add(*c, t);
                }
            }
        }
        GroupElement { gen_exp: gen, comm_exp: comm }
    }

    pub fn inverse(&self, g: &GroupElement) -> GroupElement {
        let gen: Vec<u64> = g.gen_exp.iter().map(|&u| (self.q - u) % self.q).collect();
        let bare = GroupElement { gen_exp: gen, comm_exp: vec![0; self.pair_count()] };
        // g * bare is central; cancel it.
        let residue = self.multiply(g, &bare).comm_exp;
        GroupElement {
            gen_exp: bare.gen_exp,
            comm_exp: residue.iter().map(|&w| self.field.neg(w)).collect(),
        }
    }

    pub fn power(&self, g: &GroupElement, mut e: u64) -> GroupElement {
        let mut base = g.clone();
        let mut acc = self.identity();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.multiply(&acc, &base);
            }
            base = self.multiply(&base, &base);
            e >>= 1;
        }
        acc
    }

    /// [a, b] = a^-1 b^-1 a b.
    pub fn commutator(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        let left = self.multiply(&self.inverse(a), &self.inverse(b));
        let right = self.multiply(a, b);
        self.multiply(&left, &right)
    }

    pub fn is_central(&self, g: &GroupElement) -> bool {
        (0..self.n_plus_1).all(|i| self.commutator(g, &self.generator(i)) == self.identity())
    }

    pub fn element_order(&self, g: &GroupElement) -> u64 {
        let id = self.identity();
        let mut acc = g.clone();
        let mut k = 1;
        while acc != id {
            acc = self.multiply(&acc, g);
            k += 1;
        }
        k
    }

    /// Mixed-radix index of the normal form; the enumeration order of
    /// [`Presentation::elements`].
    pub fn encode(&self, g: &GroupElement) -> u64 {
        let mut code = 0u64;
        for &u in &g.gen_exp {
            code = code * self.q + u;
        }
        for &s in &g.comm_exp {
            code = code * self.p() + s;
        }
        code
    }

    fn guard(&self) -> Result<(), PGroupError> {
        let order = self.order();
        if order > ENUMERATION_LIMIT {
            return Err(PGroupError::GroupTooLarge { order, limit: ENUMERATION_LIMIT });
        }
        Ok(())
    }

    /// All normal forms, in encoding order.
    pub fn elements(&self) -> Result<Vec<GroupElement>, PGroupError> {
        self.guard()?;
        let order = self.order() as u64;
        let mut out = Vec::with_capacity(order as usize);
        let d = self.n_plus_1;
        let c = self.pair_count();
        for code in 0..order {
            let mut rem = code;
            let mut comm = vec![0u64; c];
            for s in comm.iter_mut().rev() {
                *s = rem % self.p();
                rem /= self.p();
            }
            let mut gen = vec![0u64; d];
            for u in gen.iter_mut().rev() {
                *u = rem % self.q;
                rem /= self.q;
            }
            out.push(GroupElement { gen_exp: gen, comm_exp: comm });
        }
        Ok(out)
    }

    /// Verifies every defining relation by direct computation.
    pub fn relations_hold(&self) -> bool {
        let id = self.identity();
        for i in 0..self.n_plus_1 {
            let xi = self.generator(i);
            let lhs = self.power(&xi, self.q);
            let rhs = GroupElement {
                gen_exp: vec![0; self.n_plus_1],
                comm_exp: self.power_table.row(i).to_vec(),
            };
            if lhs != rhs {
                return false;
            }
            for j in i + 1..self.n_plus_1 {
                let z = self.commutator(&xi, &self.generator(j));
                if self.power(&z, self.p()) != id {
                    return false;
                }
                // class 2: commutators are central
                for k in 0..self.n_plus_1 {
                    if self.commutator(&z, &self.generator(k)) != id {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// The matrix whose row i is the central part of x_i^q. For a
    /// presentation built from f this recovers exactly the matrix of f,
    /// which is the bridge between the linear search and the group.
    pub fn power_map_matrix(&self) -> Matrix {
        let d = self.n_plus_1;
        let mut rows = Vec::with_capacity(d * self.pair_count());
        for i in 0..d {
            let g = self.power(&self.generator(i), self.q);
            assert!(g.gen_exp.iter().all(|&u| u == 0), "x_i^q must be central");
            rows.extend(g.comm_exp);
        }
        Matrix::new(self.field, d, self.pair_count(), rows)
    }

    /// Smallest subgroup containing `gens`, by breadth-first closure
    /// under right multiplication. Sorted by encoding.
    pub fn subgroup_generated(&self, gens: &[GroupElement]) -> Vec<GroupElement> {
        let mut seen = HashSet::new();
        let mut queue = VecDeque::new();
        let mut members = Vec::new();
        let id = self.identity();
        seen.insert(self.encode(&id));
        queue.push_back(id.clone());
        members.push(id);
        while let Some(g) = queue.pop_front() {
            for h in gens {
                let next = self.multiply(&g, h);
                if seen.insert(self.encode(&next)) {
                    queue.push_back(next.clone());
                    members.push(next);
                }
            }
        }
        members.sort_by_key(|g| self.encode(g));
        members
    }

    /// Z(P), by testing every element against every generator.
    pub fn center(&self) -> Result<Vec<GroupElement>, PGroupError> {
        Ok(self.elements()?.into_iter().filter(|g| self.is_central(g)).collect())
    }

    /// Order, exponent, and elementary-abelian flag of a set of central
    /// elements.
    pub fn summarize_central_set(&self, elems: &[GroupElement]) -> CentralSetInfo {
        let exponent = elems.iter().map(|g| self.element_order(g)).fold(1u64, lcm);
        CentralSetInfo {
            order: elems.len() as u64,
            exponent,
            elementary_abelian: exponent == self.p() || elems.len() == 1,
        }
    }

    /// Checks every expected subgroup order against honest enumeration:
    /// the group itself, the derived subgroup, the center, the Frattini
    /// subgroup, the subgroup of q-th powers, and the central quotient,
    /// plus the containments that hold between them.
    pub fn structure_report(&self) -> Result<StructureReport, PGroupError> {
        let p = self.p();
        let d = self.n_plus_1 as u32;
        let c = self.pair_count() as u32;
        let elements = self.elements()?;

        let mut checks = Vec::new();
        let expected_order = if p == 2 { 2u64.pow(2 * d + c) } else { p.pow(d + c) };
        checks.push(QuantityCheck::new("order", elements.len() as u64, expected_order));

        let mut commutator_gens = Vec::new();
        for i in 0..self.n_plus_1 {
            for j in i + 1..self.n_plus_1 {
                commutator_gens.push(self.commutator(&self.generator(i), &self.generator(j)));
            }
        }
        let derived = self.subgroup_generated(&commutator_gens);
        checks.push(QuantityCheck::new("derived-subgroup", derived.len() as u64, p.pow(c)));

        let center = self.center()?;
        let expected_center = if p == 2 { 2u64.pow(d + c) } else { p.pow(c) };
        checks.push(QuantityCheck::new("center", center.len() as u64, expected_center));
        let center_info = self.summarize_central_set(&center);

        // Frattini subgroup of a p-group: generated by p-th powers and
        // commutators. For p = 2 the generating powers are squares even
        // though the power relations use q = 4.
        let mut frattini_gens = commutator_gens.clone();
        for i in 0..self.n_plus_1 {
            frattini_gens.push(self.power(&self.generator(i), p));
        }
        let frattini = self.subgroup_generated(&frattini_gens);
        let expected_frattini = if p == 2 { 2u64.pow(d + c) } else { p.pow(c) };
        checks.push(QuantityCheck::new("frattini", frattini.len() as u64, expected_frattini));

        // q-th powers of every element, with an explicit closure check
        // rather than an appeal to the power map being a homomorphism.
        let mut agemo: Vec<GroupElement> = elements.iter().map(|g| self.power(g, self.q)).collect();
        agemo.sort_by_key(|g| self.encode(g));
        agemo.dedup();
        let agemo_codes: HashSet<u64> = agemo.iter().map(|g| self.encode(g)).collect();
        let agemo_closed = agemo
            .iter()
            .all(|a| agemo.iter().all(|b| agemo_codes.contains(&self.encode(&self.multiply(a, b)))));
        checks.push(QuantityCheck::new("qth-powers", agemo.len() as u64, p.pow(d)));

        let quotient = (elements.len() / derived.len()) as u64;
        let expected_quotient = if p == 2 { 2u64.pow(2 * d) } else { p.pow(d) };
        checks.push(QuantityCheck::new("central-quotient", quotient, expected_quotient));

        let mut identities = Vec::new();
        let center_codes: HashSet<u64> = center.iter().map(|g| self.encode(g)).collect();
        let derived_codes: HashSet<u64> = derived.iter().map(|g| self.encode(g)).collect();
        identities.push(CheckItem::new(
            "qth-powers-form-subgroup",
            "the set of q-th powers is closed under multiplication",
            agemo_closed,
        ));
        identities.push(CheckItem::new(
            "derived-inside-center",
            "the derived subgroup is central",
            derived.iter().all(|g| center_codes.contains(&self.encode(g))),
        ));
        identities.push(CheckItem::new(
            "qth-powers-inside-derived",
            "every q-th power lies in the derived subgroup",
            agemo.iter().all(|g| derived_codes.contains(&self.encode(g))),
        ));
        let frattini_codes: Vec<u64> = frattini.iter().map(|g| self.encode(g)).collect();
        if p == 2 {
            let mut center_sorted: Vec<u64> = center_codes.iter().copied().collect();
            center_sorted.sort_unstable();
            identities.push(CheckItem::new(
                "frattini-equals-center",
                "the Frattini subgroup coincides with the center",
                frattini_codes == center_sorted,
            ));
        } else {
            let mut derived_sorted: Vec<u64> = derived_codes.iter().copied().collect();
            derived_sorted.sort_unstable();
            identities.push(CheckItem::new(
                "frattini-equals-derived",
                "the Frattini subgroup coincides with the derived subgroup",
                frattini_codes == derived_sorted,
            ));
        }

        Ok(StructureReport {
            p,
            q: self.q,
            generators: self.n_plus_1,
            checks,
            identities,
            center_exponent: center_info.exponent,
            center_elementary_abelian: center_info.elementary_abelian,
        })
    }

    /// For odd p, non-central elements square to non-central elements, so
    /// no automorphism can send a central value to a non-central root.
    /// Samples random non-central elements and reports any violations;
    /// for p = 2 the premise fails and the call is an error.
    pub fn inverse_image_obstruction<R: Rng + ?Sized>(
        &self,
        rng: &mut R,
        samples: u64,
    ) -> Result<ObstructionOutcome, PGroupError> {
        if self.p() == 2 {
            return Err(PGroupError::EvenPrime);
        }
        let mut tested = 0u64;
        let mut violations = Vec::new();
        while tested < samples {
            let g = self.random_element(rng);
            if self.is_central(&g) {
                continue;
            }
            tested += 1;
            let square = self.multiply(&g, &g);
            if self.is_central(&square) {
                violations.push(g);
            }
        }
        Ok(ObstructionOutcome { tested, violations })
    }

    pub fn format_element(&self, g: &GroupElement) -> String {
        let mut parts = Vec::new();
        for (i, &u) in g.gen_exp.iter().enumerate() {
            match u {
                0 => {}
                1 => parts.push(format!("x{i}")),
                _ => parts.push(format!("x{i}^{u}")),
            }
        }
        for ((j, k), &s) in self.ext.pairs().into_iter().zip(&g.comm_exp) {
            match s {
                0 => {}
                1 => parts.push(format!("[x{j},x{k}]")),
                _ => parts.push(format!("[x{j},x{k}]^{s}")),
            }
        }
        if parts.is_empty() {
            "1".to_string()
        } else {
            parts.join("*")
        }
    }

    /// One line per power relation, e.g. `x0^3 = [x0,x1]*[x1,x2]`.
    pub fn relation_strings(&self) -> Vec<String> {
        (0..self.n_plus_1)
            .map(|i| {
                let rhs = GroupElement {
                    gen_exp: vec![0; self.n_plus_1],
                    comm_exp: self.power_table.row(i).to_vec(),
                };
                format!("x{i}^{} = {}", self.q, self.format_element(&rhs))
            })
            .collect()
    }

    /// Plain-text export: a `p q n+1` header, then the power table row of
    /// each generator.
    pub fn to_text(&self) -> String {
        let mut out = format!("{} {} {}\n", self.p(), self.q, self.n_plus_1);
        for i in 0..self.n_plus_1 {
            let row: Vec<String> = self.power_table.row(i).iter().map(u64::to_string).collect();
            out.push_str(&format!("{i}: {}\n", row.join(" ")));
        }
        out
    }
}

impl Serialize for Presentation {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("Presentation", 4)?;
        s.serialize_field("p", &self.p())?;
        s.serialize_field("q", &self.q)?;
        s.serialize_field("generators", &self.n_plus_1)?;
        s.serialize_field("power_table", &self.power_table)?;
        s.end()
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CentralSetInfo {
    pub order: u64,
    pub exponent: u64,
    pub elementary_abelian: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct QuantityCheck {
    pub name: String,
    pub computed: u64,
    pub expected: u64,
    pub matches: bool,
}

impl QuantityCheck {
    fn new(name: &str, computed: u64, expected: u64) -> Self {
        Self { name: name.to_string(), computed, expected, matches: computed == expected }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct StructureReport {
    pub p: u64,
    pub q: u64,
    pub generators: usize,
    pub checks: Vec<QuantityCheck>,
    pub identities: Vec<CheckItem>,
    pub center_exponent: u64,
    pub center_elementary_abelian: bool,
}

impl StructureReport {
    pub fn all_match(&self) -> bool {
        self.checks.iter().all(|c| c.matches) && self.identities.iter().all(|c| c.pass)
    }

    pub fn render_text(&self) -> String {
        let mut out = format!(
            "group structure for p = {}, q = {}, {} generators\n",
            self.p, self.q, self.generators
        );
        for c in &self.checks {
            let status = if c.matches { "ok" } else { "FAIL" };
            out.push_str(&format!(
                "  [{status}] {}: computed {} expected {}\n",
                c.name, c.computed, c.expected
            ));
        }
        for c in &self.identities {
            let status = if c.pass { "ok" } else { "FAIL" };
            out.push_str(&format!("  [{status}] {}: {}\n", c.item, c.description));
        }
        out.push_str(&format!(
            "  center exponent {}, elementary abelian: {}\n",
            self.center_exponent, self.center_elementary_abelian
        ));
        let overall = if self.all_match() { "PASS" } else { "FAIL" };
        out.push_str(&format!("overall: {overall}\n"));
        out
    }
}

#[derive(Debug, Clone)]
pub struct ObstructionOutcome {
    pub tested: u64,
    pub violations: Vec<GroupElement>,
}

fn lcm(a: u64, b: u64) -> u64 {
    fn gcd(a: u64, b: u64) -> u64 {
        if b == 0 {
            a
        } else {
            gcd(b, a % b)
        }
    }
    a / gcd(a, b) * b
}
