//! Exact arithmetic in the prime field GF(p).
//!
//! Scalars are plain `u64` values kept in canonical range `[0, p)`; the
//! field itself is a small `Copy` context passed alongside them.

use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FieldError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("not invertible: 0 has no inverse mod {0}")]
    NotInvertible(u64),
}

/// The field GF(p) for a prime modulus p.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    /// Builds GF(p), rejecting composite moduli. Primality is checked by
    /// trial division; moduli here are desk-scale.
    pub fn new(p: u64) -> Result<Self, FieldError> {
        if !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        Ok(Self { p })
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    /// Canonical representative of an arbitrary integer.
    pub fn reduce(&self, a: i64) -> u64 {
        let p = self.p as i64;
        (a.rem_euclid(p)) as u64
    }

    pub fn add(&self, a: u64, b: u64) -> u64 {
        (a + b) % self.p
    }

    pub fn sub(&self, a: u64, b: u64) -> u64 {
        (a + self.p - b % self.p) % self.p
    }

    pub fn neg(&self, a: u64) -> u64 {
        (self.p - a % self.p) % self.p
    }

    pub fn mul(&self, a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % self.p as u128) as u64
    }

    pub fn pow(&self, a: u64, mut e: u64) -> u64 {
        let mut base = a % self.p;
        let mut acc = 1 % self.p;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Multiplicative inverse of a nonzero scalar, via Fermat's little
    /// theorem.
    pub fn inv(&self, a: u64) -> Result<u64, FieldError> {
        if a.is_multiple_of(self.p) {
            return Err(FieldError::NotInvertible(self.p));
        }
        Ok(self.pow(a, self.p - 2))
    }

    /// All canonical scalars, 0 through p-1.
    pub fn scalars(&self) -> impl Iterator<Item = u64> {
        0..self.p
    }

    /// The nonzero scalars F*.
    pub fn units(&self) -> impl Iterator<Item = u64> {
        1..self.p
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_composites() {
        for bad in [0, 1, 4, 6, 9, 15, 91] {
            assert_eq!(PrimeField::new(bad), Err(FieldError::NotPrime(bad)));
        }
        for good in [2, 3, 5, 7, 11, 13, 97] {
            assert!(PrimeField::new(good).is_ok());
        }
    }

    #[test]
    fn inverse_identity_cases() {
        let f7 = PrimeField::new(7).unwrap();
        assert_eq!(f7.inv(1), Ok(1));
        let f3 = PrimeField::new(3).unwrap();
        assert_eq!(f3.inv(2), Ok(2)); // 2*2 = 4 = 1 mod 3
    }

    #[test]
    fn inverse_of_five_mod_thirteen() {
        // Oracle: scan b = 1..12 for 5b = 1 mod 13.
        let f = PrimeField::new(13).unwrap();
        let expected = (1..13).find(|&b| (5 * b) % 13 == 1).unwrap();
        assert_eq!(expected, 8);
        assert_eq!(f.inv(5), Ok(8));
    }

    #[test]
    fn zero_is_not_invertible() {
        let f = PrimeField::new(5).unwrap();
        assert_eq!(f.inv(0), Err(FieldError::NotInvertible(5)));
    }

    #[test]
    fn field_axioms_exhaustive_small_p() {
        // Associativity, distributivity, and a * a^-1 = 1 over every scalar
        // for p in {2, 3, 5, 7}; the scalar sets are small enough to check
        // in full rather than by sampling.
        for p in [2u64, 3, 5, 7] {
            let f = PrimeField::new(p).unwrap();
            for a in f.scalars() {
                for b in f.scalars() {
                    for c in f.scalars() {
                        assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
                        assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
                        assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                    }
                }
                if a != 0 {
                    assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
                }
                assert_eq!(f.add(a, f.neg(a)), 0);
                assert_eq!(f.sub(a, a), 0);
            }
        }
    }

    #[test]
    fn reduce_handles_negatives() {
        let f = PrimeField::new(7).unwrap();
        assert_eq!(f.reduce(-1), 6);
        assert_eq!(f.reduce(-7), 0);
        assert_eq!(f.reduce(15), 1);
    }
}
