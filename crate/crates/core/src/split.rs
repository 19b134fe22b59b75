//! Turning a modular Sidon set into an integer Sidon set on two outer blocks.
//!
//! With `s_1 < ... < s_p` the Bose residues and thresholds
//! `low = (1/2 - eps^2/8) p^2`, `high = (1/2 + eps^2/8) p^2`, let
//! `l = #{s_i <= low}` and `y = #{s_i < high}`. The output is
//! `{s_i - (p^2 - 1) : i < l} ∪ {s_i : i > y}`: the lower residues move to
//! the negative block, the middle band is dropped (along with `s_l`), and the
//! upper residues stay. Shifting by the modulus keeps all pair sums distinct
//! mod `p^2 - 1`, so the result is an integer Sidon set.

use num_bigint::BigInt;
use serde::Serialize;

use crate::intset::{assert_unique_sums, Collision, IntegerSet, SumBudget, SumVerdict};
use crate::rational::Epsilon;
use crate::sidon::ModularSidonSet;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplitResult {
    pub script_s: IntegerSet,
    pub p: u64,
    pub epsilon: Epsilon,
    pub l_index: usize,
    pub y_index: usize,
    pub dropped_middle_count: usize,
}

/// Exact description of the band thresholds, all scaled by `8 den^2`.
#[derive(Clone, Debug)]
pub struct Bands {
    /// `8 den^2`
    pub scale: BigInt,
    /// `p^2 (4 den^2 - num^2)`, i.e. `low * scale`
    pub low_scaled: BigInt,
    /// `p^2 (4 den^2 + num^2)`, i.e. `high * scale`
    pub high_scaled: BigInt,
    pub p_squared: BigInt,
}

impl Bands {
    pub fn new(p: u64, epsilon: Epsilon) -> Self {
        let p2 = BigInt::from(p) * BigInt::from(p);
        let n2 = epsilon.num_big() * epsilon.num_big();
        let d2 = epsilon.den_big() * epsilon.den_big();
        let four_d2: BigInt = &d2 * 4;
        Self {
            scale: &d2 * 8,
            low_scaled: &p2 * (&four_d2 - &n2),
            high_scaled: &p2 * (&four_d2 + &n2),
            p_squared: p2,
        }
    }

    pub fn at_most_low(&self, s: &BigInt) -> bool {
        s * &self.scale <= self.low_scaled
    }

    pub fn below_high(&self, s: &BigInt) -> bool {
        s * &self.scale < self.high_scaled
    }

    /// In `[-p^2, -high + 1]`, the negative block widened by the +1 that the
    /// shift by `p^2 - 1` can introduce.
    pub fn in_negative_block(&self, v: &BigInt) -> bool {
        let neg_p2 = -&self.p_squared;
        *v >= neg_p2 && (v - 1) * &self.scale <= -&self.high_scaled
    }

    /// In `[high, p^2]`.
    pub fn in_positive_block(&self, v: &BigInt) -> bool {
        v * &self.scale >= self.high_scaled && *v <= self.p_squared
    }
}

/// Builds the two-block Sidon set from a modular Sidon set.
pub fn split_construction(mod_set: &ModularSidonSet, epsilon: Epsilon) -> SplitResult {
    let bands = Bands::new(mod_set.p, epsilon);
    let mut sorted = mod_set.elements.clone();
    sorted.sort_unstable();
    let residues: Vec<BigInt> = sorted.into_iter().map(BigInt::from).collect();

    let l = residues.iter().take_while(|s| bands.at_most_low(s)).count();
    let y = residues.iter().take_while(|s| bands.below_high(s)).count();
    let shift = &bands.p_squared - 1;

    let lower = residues[..l.saturating_sub(1)].iter().map(|s| s - &shift);
    let upper = residues[y..].iter().cloned();
    SplitResult {
        script_s: lower.chain(upper).collect(),
        p: mod_set.p,
        epsilon,
        l_index: l,
        y_index: y,
        dropped_middle_count: y - l,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum SidonStatus {
    Sidon,
    Collision(Collision),
    /// The check did not run (pair budget); carries the reason.
    Skipped(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SplitVerdict {
    /// First element outside both blocks, if any.
    pub outside_blocks: Option<String>,
    pub sidon: SidonStatus,
    /// `|S| = (l - 1)^+ + (p - y)`, which is `p - (y - l) - 1` whenever `l >= 1`.
    pub cardinality_ok: bool,
    pub dropped_count_ok: bool,
    /// `|S| >= (1 - 3 eps / 4) p`. Not an invariant: only promised for large p.
    pub size_bound_holds: bool,
    /// `y - l <= (5/8) eps p`. Also only promised for large p.
    pub middle_band_bound_holds: bool,
}

impl SplitVerdict {
    pub fn invariants_ok(&self) -> bool {
        self.outside_blocks.is_none()
            && matches!(self.sidon, SidonStatus::Sidon)
            && self.cardinality_ok
            && self.dropped_count_ok
    }
}

/// Re-checks a split result from scratch.
pub fn verify_split(result: &SplitResult, budget: &SumBudget) -> SplitVerdict {
    let bands = Bands::new(result.p, result.epsilon);
    let outside_blocks = result
        .script_s
        .iter()
        .find(|v| !bands.in_negative_block(v) && !bands.in_positive_block(v))
        .map(|v| v.to_string());
    let sidon = match assert_unique_sums(&result.script_s, budget) {
        Ok(SumVerdict::Unique) => SidonStatus::Sidon,
        Ok(SumVerdict::Collision(c)) => SidonStatus::Collision(c),
        Err(e) => SidonStatus::Skipped(e.to_string()),
    };
    let p = result.p as usize;
    let (l, y) = (result.l_index, result.y_index);
    let expected_len = (l.saturating_sub(1) + p).checked_sub(y);
    let size = result.script_s.len() as u128;
    let (num, den) = (result.epsilon.num() as u128, result.epsilon.den() as u128);
    let p = result.p as u128;
    SplitVerdict {
        outside_blocks,
        sidon,
        cardinality_ok: expected_len == Some(result.script_s.len()),
        dropped_count_ok: y >= l && result.dropped_middle_count == y - l,
        size_bound_holds: 4 * den * size >= (4 * den - 3 * num) * p,
        middle_band_bound_holds: 8 * den * (y.saturating_sub(l) as u128) <= 5 * num * p,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sidon::bose_construction;

    fn half() -> Epsilon {
        Epsilon::new(1, 2).unwrap()
    }

    #[test]
    fn split_for_3() {
        let r = split_construction(&bose_construction(3).unwrap(), half());
        assert_eq!((r.l_index, r.y_index, r.dropped_middle_count), (1, 1, 0));
        assert_eq!(r.script_s, [6i64, 7].into_iter().collect());
        let v = verify_split(&r, &SumBudget::default());
        assert!(v.invariants_ok(), "{v:?}");
        // 2 >= (5/8) * 3 = 1.875
        assert!(v.size_bound_holds);
    }

    #[test]
    fn split_for_101() {
        let r = split_construction(&bose_construction(101).unwrap(), half());
        let v = verify_split(&r, &SumBudget::default());
        assert!(v.invariants_ok(), "{v:?}");
        assert!(v.size_bound_holds);
        assert!(r.script_s.len() >= 64);
        assert_eq!(r.script_s.len(), 101 - r.dropped_middle_count - 1);
    }

    #[test]
    fn thresholds_are_exact() {
        // p = 3, eps = 1/2: low = 4.21875, high = 4.78125.
        let b = Bands::new(3, half());
        assert!(b.at_most_low(&BigInt::from(4)));
        assert!(!b.at_most_low(&BigInt::from(5)));
        assert!(b.below_high(&BigInt::from(4)));
        assert!(!b.below_high(&BigInt::from(5)));
        // eps = 2/3 and p = 3: low = (1/2 - 1/18) * 9 = 4 exactly, high = 5 exactly.
        let b = Bands::new(3, Epsilon::new(2, 3).unwrap());
        assert!(b.at_most_low(&BigInt::from(4)));
        assert!(!b.below_high(&BigInt::from(5)));
        assert!(b.in_positive_block(&BigInt::from(5)));
        assert!(b.in_negative_block(&BigInt::from(-4)));
        assert!(!b.in_negative_block(&BigInt::from(-3)));
        assert!(b.in_negative_block(&BigInt::from(-9)));
        assert!(!b.in_negative_block(&BigInt::from(-10)));
    }

    #[test]
    fn tampered_result_fails_membership() {
        let mut r = split_construction(&bose_construction(101).unwrap(), half());
        let middle = BigInt::from(101 * 101 / 2);
        r.script_s = r.script_s.union(&[middle].into_iter().collect());
        let v = verify_split(&r, &SumBudget::default());
        assert_eq!(v.outside_blocks.as_deref(), Some("5100"));
        assert!(!v.cardinality_ok);
        assert!(!v.invariants_ok());
    }

    #[test]
    fn degenerate_lower_block_is_legal() {
        // l = 0: no residue below the lower threshold.
        let m = ModularSidonSet {
            p: 3,
            modulus: 8,
            elements: vec![5, 6, 7],
        };
        let r = split_construction(&m, half());
        assert_eq!((r.l_index, r.y_index), (0, 0));
        assert_eq!(r.script_s.len(), 3);
        assert!(verify_split(&r, &SumBudget::default()).cardinality_ok);
    }

    #[test]
    fn epsilon_zero_is_rejected() {
        assert!(matches!(Epsilon::new(0, 1), Err(crate::Error::EpsilonOutOfRange(_))));
    }
}
