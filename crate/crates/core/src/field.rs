//! Arithmetic in GF(p) and GF(p^2) = GF(p)[x]/(x^2 - r).
//!
//! The context is canonical: `r` is the smallest positive quadratic
//! non-residue mod p, and the primitive element `g` is the first element of
//! full order when candidates `c0 + c1 x` are enumerated with `c1 >= 1`
//! ascending, then `c0` ascending. Two contexts built from the same prime are
//! identical, so anything derived from `g` (Bose sets in particular) is a
//! reproducible constant.

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::prime::{factorize, is_prime_u64, pow_mod};

/// Primes must stay below this bound so that every intermediate product of
/// two residues, plus one more such product, fits in a `u64`.
pub const MAX_FIELD_PRIME: u64 = 1 << 31;

/// `c0 + c1 x` with both coefficients reduced mod p.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FieldElement {
    pub c0: u64,
    pub c1: u64,
}

impl FieldElement {
    pub const ONE: FieldElement = FieldElement { c0: 1, c1: 0 };

    pub const fn new(c0: u64, c1: u64) -> Self {
        Self { c0, c1 }
    }

    pub fn is_zero(&self) -> bool {
        self.c0 == 0 && self.c1 == 0
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldContext {
    p: u64,
    r: u64,
    g: FieldElement,
    /// Prime factorisation of `p^2 - 1`.
    factorization: Vec<(u64, u32)>,
}

/// Builds the canonical context for an odd prime `p`.
pub fn make_context(p: u64) -> Result<FieldContext> {
    FieldContext::new(p)
}

impl FieldContext {
    pub fn new(p: u64) -> Result<Self> {
        if !is_prime_u64(p) {
            return Err(Error::NotPrime(BigInt::from(p)));
        }
        if p == 2 {
            return Err(Error::UnsupportedPrime(BigInt::from(p), "characteristic 2 is not supported"));
        }
        if p >= MAX_FIELD_PRIME {
            return Err(Error::UnsupportedPrime(BigInt::from(p), "prime too large for word-sized field arithmetic"));
        }
        let r = (2..p)
            .find(|&r| pow_mod(r, (p - 1) / 2, p) == p - 1)
            .expect("every odd prime has a non-residue");
        let mut ctx = Self {
            p,
            r,
            g: FieldElement::ONE,
            factorization: factorize(p * p - 1),
        };
        ctx.g = ctx.find_primitive();
        Ok(ctx)
    }

    fn find_primitive(&self) -> FieldElement {
        for c1 in 1..self.p {
            for c0 in 0..self.p {
                let cand = FieldElement::new(c0, c1);
                if self.element_order_is_full(cand).unwrap_or(false) {
                    return cand;
                }
            }
        }
        unreachable!("GF(p^2)* is cyclic, so a primitive element exists")
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    /// The non-residue `r` with `x^2 = r`.
    pub fn nonresidue(&self) -> u64 {
        self.r
    }

    /// Canonical primitive element of GF(p^2)*.
    pub fn generator(&self) -> FieldElement {
        self.g
    }

    /// `p^2 - 1`, the order of the multiplicative group.
    pub fn group_order(&self) -> u64 {
        self.p * self.p - 1
    }

    pub fn factorization(&self) -> &[(u64, u32)] {
        &self.factorization
    }

    pub fn element(&self, c0: u64, c1: u64) -> FieldElement {
        FieldElement::new(c0 % self.p, c1 % self.p)
    }

    /// The adjoined root `x`.
    pub fn x(&self) -> FieldElement {
        FieldElement::new(0, 1)
    }

    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        FieldElement::new((a.c0 + b.c0) % self.p, (a.c1 + b.c1) % self.p)
    }

    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        let p = self.p;
        let high = a.c1 * b.c1 % p;
        FieldElement::new(
            (a.c0 * b.c0 + self.r * high) % p,
            (a.c0 * b.c1 + a.c1 * b.c0) % p,
        )
    }

    pub fn pow(&self, mut base: FieldElement, mut exp: u64) -> FieldElement {
        let mut acc = FieldElement::ONE;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    /// `a^{-1}` for `a != 0`, as `a^(p^2 - 2)`.
    pub fn inv(&self, a: FieldElement) -> Result<FieldElement> {
        if a.is_zero() {
            return Err(Error::ZeroElement);
        }
        Ok(self.pow(a, self.group_order() - 1))
    }

    /// Whether `a` generates GF(p^2)*: `a^((p^2-1)/q) != 1` for every prime
    /// `q` dividing `p^2 - 1`.
    pub fn element_order_is_full(&self, a: FieldElement) -> Result<bool> {
        if a.is_zero() {
            return Err(Error::ZeroElement);
        }
        let n = self.group_order();
        Ok(self
            .factorization
            .iter()
            .all(|&(q, _)| self.pow(a, n / q) != FieldElement::ONE))
    }

    /// `a^{-1} mod p` in the prime field.
    pub(crate) fn inv_scalar(&self, a: u64) -> u64 {
        pow_mod(a, self.p - 2, self.p)
    }
}
