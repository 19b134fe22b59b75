//! Finite sets of arbitrary-precision integers and the counting functions
//! defined on them: the window count `A(-x, x)`, the unordered and ordered
//! representation functions, difference sets, sumsets and translates.
//!
//! Sets are immutable values. Every operation that "changes" a set returns a
//! new one, so a construction history can keep each intermediate set.

mod unique;

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::de::{self, Deserializer, SeqAccess, Visitor};
use serde::ser::{SerializeSeq, Serializer};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use unique::{
    assert_unique_sums, assert_unique_sums_in_range, sampled_unique_sums, Collision, SampledVerdict,
    SumBudget, SumVerdict,
};

/// Largest magnitude for which the `i64` fast paths are used. Pair sums and
/// differences of such elements stay well inside `i64`.
pub(crate) const FAST_LIMIT: i64 = 1 << 61;

/// A sorted, duplicate-free set of integers.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct IntegerSet {
    elements: Vec<BigInt>,
}

impl IntegerSet {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds a set from a strictly increasing sequence, rejecting anything else.
    pub fn from_sorted(elements: Vec<BigInt>) -> Result<Self> {
        if let Some(w) = elements.windows(2).find(|w| w[0] >= w[1]) {
            return Err(Error::MalformedSet(format!(
                "elements not strictly increasing at {} followed by {}",
                w[0], w[1]
            )));
        }
        Ok(Self { elements })
    }

    /// Sorts and deduplicates without validation errors.
    pub fn from_unsorted(mut elements: Vec<BigInt>) -> Self {
        elements.sort_unstable();
        elements.dedup();
        Self { elements }
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn as_slice(&self) -> &[BigInt] {
        &self.elements
    }

    pub fn iter(&self) -> std::slice::Iter<'_, BigInt> {
        self.elements.iter()
    }

    pub fn into_vec(self) -> Vec<BigInt> {
        self.elements
    }

    pub fn contains(&self, value: &BigInt) -> bool {
        self.elements.binary_search(value).is_ok()
    }

    pub fn min(&self) -> Option<&BigInt> {
        self.elements.first()
    }

    pub fn max(&self) -> Option<&BigInt> {
        self.elements.last()
    }

    /// `max |a|` over the set, or zero for the empty set.
    pub fn max_abs(&self) -> BigInt {
        match (self.min(), self.max()) {
            (Some(lo), Some(hi)) => lo.abs().max(hi.abs()),
            _ => BigInt::zero(),
        }
    }

    /// Number of elements in `[-x, x]`. A negative `x` gives an empty window.
    pub fn count_window(&self, x: &BigInt) -> usize {
        if x.is_negative() {
            return 0;
        }
        let lo = -x;
        let start = self.elements.partition_point(|a| *a < lo);
        let end = self.elements.partition_point(|a| a <= x);
        end - start
    }

    /// `r_A(n)`: unordered pairs `a <= a'` from the set with `a + a' = n`.
    pub fn rep_count_unordered(&self, n: &BigInt) -> u64 {
        if let (Some(fast), Some(n)) = (self.to_fast(), fast_scalar(n)) {
            return rep_count_fast(&fast, n);
        }
        let a = &self.elements;
        if a.is_empty() {
            return 0;
        }
        let (mut i, mut j) = (0usize, a.len() - 1);
        let mut count = 0;
        while i <= j {
            let s = &a[i] + &a[j];
            match s.cmp(n) {
                Ordering::Less => i += 1,
                Ordering::Greater => {
                    if j == 0 {
                        break;
                    }
                    j -= 1;
                }
                Ordering::Equal => {
                    count += 1;
                    i += 1;
                    if j == 0 {
                        break;
                    }
                    j -= 1;
                }
            }
        }
        count
    }

    /// `R_A(n)`: ordered pairs `(a, a')` with `a + a' = n`.
    pub fn rep_count_ordered(&self, n: &BigInt) -> u64 {
        let unordered = self.rep_count_unordered(n);
        let two = BigInt::from(2);
        let half_is_member = (n % &two).is_zero() && self.contains(&(n / &two));
        2 * unordered - u64::from(half_is_member)
    }

    /// `A - A = { a - a' }`.
    pub fn difference_set(&self) -> IntegerSet {
        let a = &self.elements;
        let mut out = Vec::with_capacity(a.len() * a.len());
        for x in a {
            for y in a {
                out.push(x - y);
            }
        }
        Self::from_unsorted(out)
    }

    /// `2A = { a + a' }`, doubles included.
    pub fn double_sumset(&self) -> IntegerSet {
        let a = &self.elements;
        let mut out = Vec::with_capacity(a.len() * (a.len() + 1) / 2);
        for (i, x) in a.iter().enumerate() {
            for y in &a[i..] {
                out.push(x + y);
            }
        }
        Self::from_unsorted(out)
    }

    /// `A + s`.
    pub fn translate(&self, shift: &BigInt) -> IntegerSet {
        Self {
            elements: self.elements.iter().map(|a| a + shift).collect(),
        }
    }

    /// Set union by merging.
    pub fn union(&self, other: &IntegerSet) -> IntegerSet {
        let (a, b) = (&self.elements, &other.elements);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                Ordering::Less => {
                    out.push(a[i].clone());
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(b[j].clone());
                    j += 1;
                }
                Ordering::Equal => {
                    out.push(a[i].clone());
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Self { elements: out }
    }

    /// Elements of `self` not in `other`.
    pub fn without(&self, other: &IntegerSet) -> IntegerSet {
        Self {
            elements: self
                .elements
                .iter()
                .filter(|a| !other.contains(a))
                .cloned()
                .collect(),
        }
    }

    pub fn is_subset(&self, other: &IntegerSet) -> bool {
        self.len() <= other.len() && self.elements.iter().all(|a| other.contains(a))
    }

    pub fn is_disjoint(&self, other: &IntegerSet) -> bool {
        let (small, large) = if self.len() <= other.len() {
            (self, other)
        } else {
            (other, self)
        };
        small.elements.iter().all(|a| !large.contains(a))
    }

    /// `i64` copy of the elements when every magnitude is below [`FAST_LIMIT`].
    pub(crate) fn to_fast(&self) -> Option<Vec<i64>> {
        self.elements.iter().map(fast_scalar).collect()
    }
}

pub(crate) fn fast_scalar(v: &BigInt) -> Option<i64> {
    i64::try_from(v).ok().filter(|x| x.abs() < FAST_LIMIT)
}

/// Two-pointer count of unordered representations on a sorted `i64` slice
/// whose magnitudes are below [`FAST_LIMIT`].
pub(crate) fn rep_count_fast(a: &[i64], n: i64) -> u64 {
    if a.is_empty() {
        return 0;
    }
    let (mut i, mut j) = (0usize, a.len() - 1);
    let mut count = 0;
    while i <= j {
        let s = a[i] + a[j];
        if s < n {
            i += 1;
        } else {
            if s == n {
                count += 1;
                i += 1;
            }
            if j == 0 {
                break;
            }
            j -= 1;
        }
    }
    count
}

impl FromIterator<BigInt> for IntegerSet {
    fn from_iter<I: IntoIterator<Item = BigInt>>(iter: I) -> Self {
        Self::from_unsorted(iter.into_iter().collect())
    }
}

impl FromIterator<i64> for IntegerSet {
    fn from_iter<I: IntoIterator<Item = i64>>(iter: I) -> Self {
        iter.into_iter().map(BigInt::from).collect()
    }
}

impl<'a> IntoIterator for &'a IntegerSet {
    type Item = &'a BigInt;
    type IntoIter = std::slice::Iter<'a, BigInt>;

    fn into_iter(self) -> Self::IntoIter {
        self.elements.iter()
    }
}

impl fmt::Display for IntegerSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, a) in self.elements.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{a}")?;
        }
        write!(f, "}}")
    }
}

// Serialized as a JSON array of decimal strings: stage values overflow f64.
impl Serialize for IntegerSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.elements.len()))?;
        for a in &self.elements {
            seq.serialize_element(&a.to_string())?;
        }
        seq.end()
    }
}

impl<'de> Deserialize<'de> for IntegerSet {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        struct SetVisitor;

        impl<'de> Visitor<'de> for SetVisitor {
            type Value = IntegerSet;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("an ascending array of decimal integer strings")
            }

            fn visit_seq<A: SeqAccess<'de>>(self, mut seq: A) -> std::result::Result<IntegerSet, A::Error> {
                let mut out = Vec::with_capacity(seq.size_hint().unwrap_or(0));
                while let Some(s) = seq.next_element::<String>()? {
                    let v: BigInt = s
                        .parse()
                        .map_err(|_| de::Error::custom(format!("not a decimal integer: {s:?}")))?;
                    out.push(v);
                }
                IntegerSet::from_sorted(out).map_err(de::Error::custom)
            }
        }

        deserializer.deserialize_seq(SetVisitor)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(xs: &[i64]) -> IntegerSet {
        xs.iter().copied().collect()
    }

    fn big(x: i64) -> BigInt {
        BigInt::from(x)
    }

    #[test]
    fn window_counts() {
        let a = set(&[-1, 1]);
        assert_eq!(a.count_window(&big(1)), 2);
        assert_eq!(a.count_window(&big(0)), 0);
        assert_eq!(set(&[-25, -5, -1, 1, 6, 24]).count_window(&big(6)), 4);
        assert_eq!(a.count_window(&big(-3)), 0);
    }

    #[test]
    fn unordered_representations() {
        let a = set(&[-1, 1]);
        assert_eq!(a.rep_count_unordered(&big(0)), 1);
        assert_eq!(a.rep_count_unordered(&big(1)), 0);
        assert_eq!(a.rep_count_unordered(&big(2)), 1);
        assert_eq!(IntegerSet::new().rep_count_unordered(&big(0)), 0);
    }

    #[test]
    fn ordered_representations() {
        let a = set(&[-1, 1]);
        assert_eq!(a.rep_count_ordered(&big(0)), 2);
        assert_eq!(a.rep_count_ordered(&big(2)), 1);
        assert_eq!(set(&[1, 2, 3]).rep_count_ordered(&big(4)), 3);
    }

    #[test]
    fn representation_beyond_fast_range() {
        let huge: BigInt = BigInt::from(1u8) << 200;
        let a: IntegerSet = vec![-huge.clone(), big(-3), big(5), huge.clone()].into_iter().collect();
        assert_eq!(a.rep_count_unordered(&big(0)), 1);
        assert_eq!(a.rep_count_unordered(&(&huge + 5)), 1);
        assert_eq!(a.rep_count_unordered(&(&huge * 2)), 1);
        assert_eq!(a.rep_count_unordered(&big(1)), 0);
        assert_eq!(a.rep_count_ordered(&big(2)), 2);
    }

    #[test]
    fn difference_sets() {
        assert_eq!(set(&[-1, 1]).difference_set(), set(&[-2, 0, 2]));
        assert_eq!(IntegerSet::new().difference_set(), IntegerSet::new());
        assert_eq!(set(&[1, 2, 5]).difference_set(), set(&[-4, -3, -1, 0, 1, 3, 4]));
    }

    #[test]
    fn double_sumsets() {
        assert_eq!(set(&[-1, 1]).double_sumset(), set(&[-2, 0, 2]));
        assert_eq!(set(&[1, 2, 5]).double_sumset(), set(&[2, 3, 4, 6, 7, 10]));
        assert_eq!(set(&[0]).double_sumset(), set(&[0]));
    }

    #[test]
    fn translates() {
        assert_eq!(set(&[-1, 1]).translate(&big(2)), set(&[1, 3]));
        assert_eq!(set(&[1, 6, 7]).translate(&big(-8)), set(&[-7, -2, -1]));
        assert_eq!(IntegerSet::new().translate(&big(5)), IntegerSet::new());
    }

    #[test]
    fn union_subset_without() {
        let a = set(&[-3, 1, 4]);
        let b = set(&[1, 2, 9]);
        assert_eq!(a.union(&b), set(&[-3, 1, 2, 4, 9]));
        assert!(a.is_subset(&a.union(&b)));
        assert!(!a.is_subset(&b));
        assert_eq!(a.without(&b), set(&[-3, 4]));
        assert!(!a.is_disjoint(&b));
        assert!(set(&[5]).is_disjoint(&b));
    }

    #[test]
    fn serde_uses_decimal_strings() {
        let huge = BigInt::from(1u8) << 80;
        let a: IntegerSet = vec![big(-7), huge].into_iter().collect();
        let json = serde_json::to_string(&a).unwrap();
        assert_eq!(json, r#"["-7","1208925819614629174706176"]"#);
        let back: IntegerSet = serde_json::from_str(&json).unwrap();
        assert_eq!(back, a);
    }

    #[test]
    fn deserialize_rejects_unsorted_and_garbage() {
        assert!(serde_json::from_str::<IntegerSet>(r#"["3","1"]"#).is_err());
        assert!(serde_json::from_str::<IntegerSet>(r#"["1","1"]"#).is_err());
        assert!(serde_json::from_str::<IntegerSet>(r#"["1.5"]"#).is_err());
        assert!(serde_json::from_str::<IntegerSet>(r#"[1]"#).is_err());
    }
}
