//! Sidon sets: predicates, Bose's modular construction over GF(p^2), and
//! small-N searches for the maximum Sidon subset of `{1, ..., N}`.

mod search;

use num_bigint::BigInt;
use serde::Serialize;

use crate::error::Result;
use crate::field::{make_context, FieldContext, FieldElement};
use crate::intset::{assert_unique_sums, IntegerSet, SumBudget, SumVerdict};

pub use search::{greedy_sidon, max_sidon_exact, max_sidon_exact_with_limit, ExactSidon, DEFAULT_EXACT_LIMIT};

/// `p` residues in `[1, p^2 - 1]` whose pairwise sums (doubles included) are
/// distinct modulo `p^2 - 1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ModularSidonSet {
    pub p: u64,
    pub modulus: u64,
    pub elements: Vec<u64>,
}

impl ModularSidonSet {
    pub fn to_integer_set(&self) -> IntegerSet {
        self.elements.iter().map(|&e| BigInt::from(e)).collect()
    }
}

/// Bose's construction: the discrete logarithms, base the canonical primitive
/// element `g`, of the `p` elements `x + b` (`b` in GF(p)).
///
/// Works coset by coset rather than enumerating all of GF(p^2)*: the powers
/// `g^0, ..., g^p` meet every coset of GF(p)* exactly once, each coset other
/// than GF(p)* itself contains exactly one monic `x + b`, and the scalar that
/// normalises `g^j` is a power of `w = g^(p+1)`, which generates GF(p)*.
/// Cost is O(p) field operations.
pub fn bose_construction(p: u64) -> Result<ModularSidonSet> {
    let ctx = make_context(p)?;
    Ok(bose_with_context(&ctx))
}

pub fn bose_with_context(ctx: &FieldContext) -> ModularSidonSet {
    let p = ctx.p();
    let modulus = ctx.group_order();
    let g = ctx.generator();

    // Discrete logs in GF(p)* base w.
    let w = ctx.pow(g, p + 1);
    debug_assert_eq!(w.c1, 0);
    let mut log_w = vec![0u64; p as usize];
    let mut cur = 1u64;
    for k in 0..p - 1 {
        log_w[cur as usize] = k;
        cur = cur * w.c0 % p;
    }

    let mut elements = Vec::with_capacity(p as usize);
    let mut power = FieldElement::ONE;
    for j in 1..=p {
        power = ctx.mul(power, g);
        // g^j = u0 + u1 x, so u1^{-1} g^j = x + u0/u1 and u1^{-1} = w^k.
        let k = log_w[ctx.inv_scalar(power.c1) as usize];
        elements.push((j + (p + 1) * k) % modulus);
    }
    elements.sort_unstable();
    ModularSidonSet { p, modulus, elements }
}

/// Reference construction: one pass over `a = 1, ..., p^2 - 1` keeping
/// `g^a` and collecting every `a` whose power has `c1 = 1`. O(p^2) time.
pub fn bose_by_enumeration(p: u64) -> Result<ModularSidonSet> {
    let ctx = make_context(p)?;
    let g = ctx.generator();
    let modulus = ctx.group_order();
    let mut elements = Vec::with_capacity(p as usize);
    let mut cur = FieldElement::ONE;
    for a in 1..=modulus {
        cur = ctx.mul(cur, g);
        if cur.c1 == 1 {
            elements.push(a);
        }
    }
    Ok(ModularSidonSet { p, modulus, elements })
}

/// Sidon test on an integer set; collisions carry the canonical witness.
pub fn is_sidon(set: &IntegerSet, budget: &SumBudget) -> Result<SumVerdict> {
    assert_unique_sums(set, budget)
}

/// Collision among sums taken modulo some `M`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ModularCollision {
    pub residue: u64,
    pub first: (u64, u64),
    pub second: (u64, u64),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ModularVerdict {
    Sidon,
    Collision(ModularCollision),
}

impl ModularVerdict {
    pub fn is_sidon(&self) -> bool {
        matches!(self, ModularVerdict::Sidon)
    }
}

/// Moduli up to this size are checked with a residue bitmap; larger ones sort
/// the pair sums.
const BITMAP_MODULUS_LIMIT: u64 = 1 << 33;

/// Whether all `e_i + e_j` (`i <= j`) are distinct mod `modulus`. Elements are
/// expected reduced mod `modulus`. The witness is the smallest colliding
/// residue with its two representations of smallest first component.
pub fn is_modular_sidon(elements: &[u64], modulus: u64) -> ModularVerdict {
    assert!(modulus >= 1, "modulus must be positive");
    let mut e = elements.to_vec();
    e.sort_unstable();
    let m = modulus as u128;
    let sum = |i: usize, j: usize| ((e[i] as u128 + e[j] as u128) % m) as u64;

    let residue = if modulus <= BITMAP_MODULUS_LIMIT {
        let words = (modulus as usize).div_ceil(64);
        let mut seen = vec![0u64; words];
        let mut dup = vec![0u64; words];
        let mut any = false;
        for i in 0..e.len() {
            for j in i..e.len() {
                let s = sum(i, j) as usize;
                let (w, b) = (s / 64, 1u64 << (s % 64));
                if seen[w] & b != 0 {
                    dup[w] |= b;
                    any = true;
                } else {
                    seen[w] |= b;
                }
            }
        }
        if !any {
            return ModularVerdict::Sidon;
        }
        let w = dup.iter().position(|&x| x != 0).expect("a duplicate was recorded");
        (w * 64 + dup[w].trailing_zeros() as usize) as u64
    } else {
        let mut all: Vec<u64> = (0..e.len()).flat_map(|i| (i..e.len()).map(move |j| (i, j))).map(|(i, j)| sum(i, j)).collect();
        all.sort_unstable();
        match all.windows(2).find(|w| w[0] == w[1]) {
            None => return ModularVerdict::Sidon,
            Some(w) => w[0],
        }
    };

    let mut reps = (0..e.len()).flat_map(|i| (i..e.len()).map(move |j| (i, j))).filter(|&(i, j)| sum(i, j) == residue);
    let first = reps.next().expect("collision residue has representations");
    let second = reps.next().expect("collision residue has two representations");
    ModularVerdict::Collision(ModularCollision {
        residue,
        first: (e[first.0], e[first.1]),
        second: (e[second.0], e[second.1]),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bose_for_3() {
        let s = bose_construction(3).unwrap();
        assert_eq!(s.modulus, 8);
        assert_eq!(s.elements, vec![1, 6, 7]);
        let sums: Vec<u64> = [(1, 1), (1, 6), (1, 7), (6, 6), (6, 7), (7, 7)]
            .iter()
            .map(|&(a, b)| (a + b) % 8)
            .collect();
        assert_eq!(sums, vec![2, 7, 0, 4, 5, 6]);
    }

    #[test]
    fn bose_for_5() {
        let s = bose_construction(5).unwrap();
        assert_eq!(s.elements.len(), 5);
        assert_eq!(s.modulus, 24);
        assert!(is_modular_sidon(&s.elements, 24).is_sidon());
    }

    #[test]
    fn coset_method_matches_enumeration() {
        for p in [3u64, 5, 7, 11, 13, 17, 19, 23, 29, 31, 101, 211, 997] {
            assert_eq!(bose_construction(p).unwrap(), bose_by_enumeration(p).unwrap(), "p = {p}");
        }
    }

    #[test]
    fn bose_propagates_errors() {
        assert!(bose_construction(9).is_err());
        assert!(bose_construction(2).is_err());
    }

    #[test]
    fn modular_checks() {
        assert!(is_modular_sidon(&[1, 6, 7], 8).is_sidon());
        assert!(is_modular_sidon(&[0], 5).is_sidon());
        assert!(is_modular_sidon(&[], 5).is_sidon());
        match is_modular_sidon(&[1, 2, 3], 100) {
            ModularVerdict::Collision(c) => {
                assert_eq!(c.residue, 4);
                assert_eq!((c.first, c.second), ((1, 3), (2, 2)));
            }
            v => panic!("{v:?}"),
        }
        // Wrap-around: 1 + 5 = 3 + 3 = 0 (mod 6).
        match is_modular_sidon(&[1, 3, 5], 6) {
            ModularVerdict::Collision(c) => assert_eq!(c.residue, 0),
            v => panic!("{v:?}"),
        }
    }

    #[test]
    fn integer_sidon_checks() {
        let b = SumBudget::default();
        let set = |xs: &[i64]| xs.iter().copied().collect::<IntegerSet>();
        assert!(is_sidon(&set(&[1, 2, 5, 7]), &b).unwrap().is_unique());
        let v = is_sidon(&set(&[1, 2, 3]), &b).unwrap();
        assert_eq!(v.collision().unwrap().to_quad(), [1, 3, 2, 2].map(BigInt::from));
        assert!(is_sidon(&IntegerSet::new(), &b).unwrap().is_unique());
    }
}
