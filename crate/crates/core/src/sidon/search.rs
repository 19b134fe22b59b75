//! Largest Sidon subsets of `{1, ..., N}` for small N.
//!
//! A Sidon set of size k in `{1, ..., N}` is the same thing as a Golomb ruler
//! with k marks and length at most `N - 1`. The exact search works on rulers
//! anchored at 0, with marks and used differences held in `u128` bitmasks.

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::intset::IntegerSet;

/// Largest N accepted by [`max_sidon_exact`].
pub const DEFAULT_EXACT_LIMIT: u64 = 120;

/// Hard ceiling imposed by the 128-bit masks.
const MASK_LIMIT: u64 = 128;

/// Greedy (Mian–Chowla) Sidon set: scan `1..=n` and keep `k` whenever the set
/// stays Sidon.
pub fn greedy_sidon(n: u64) -> IntegerSet {
    let mut chosen: Vec<u64> = Vec::new();
    let mut used = vec![false; n as usize + 1];
    for k in 1..=n {
        if chosen.iter().all(|&s| !used[(k - s) as usize]) {
            for &s in &chosen {
                used[(k - s) as usize] = true;
            }
            chosen.push(k);
        }
    }
    chosen.into_iter().map(BigInt::from).collect()
}

/// `f_2(N)` together with the lexicographically first maximum Sidon subset.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactSidon {
    pub size: usize,
    pub witness: IntegerSet,
}

pub fn max_sidon_exact(n: u64) -> Result<ExactSidon> {
    max_sidon_exact_with_limit(n, DEFAULT_EXACT_LIMIT)
}

/// Exact branch-and-bound for `f_2(n)`.
///
/// `f_2` is computed for every length up to `n`: a size-`t` set in
/// `{1, ..., len + 1}` either fits in a shorter interval or uses both
/// endpoints, so each step only asks whether a ruler with `f + 1` marks and
/// length exactly `len` exists. Every answer also yields the minimum ruler
/// length for that mark count, and those lengths bound the remaining search
/// from both ends.
pub fn max_sidon_exact_with_limit(n: u64, limit: u64) -> Result<ExactSidon> {
    let limit = limit.min(MASK_LIMIT);
    if n == 0 || n > limit {
        return Err(Error::BudgetExceeded { n, limit });
    }
    // min_len[q]: shortest ruler with q marks, known for q <= best.
    let mut min_len: Vec<u32> = vec![0, 0];
    let mut best = 1usize;
    for len in 1..n as u32 {
        let target = best + 1;
        if FixedLength::new(target, len, &min_len).exists() {
            best = target;
            min_len.push(len);
        }
    }
    let marks = FreeEnd::new(best, (n - 1) as u32, &min_len).first();
    Ok(ExactSidon {
        size: best,
        witness: marks.into_iter().map(|m| BigInt::from(m as u64 + 1)).collect(),
    })
}

/// Does a ruler with `marks` marks, first mark 0 and last mark `len` exist?
struct FixedLength<'a> {
    marks: usize,
    len: u32,
    min_len: &'a [u32],
}

impl<'a> FixedLength<'a> {
    fn new(marks: usize, len: u32, min_len: &'a [u32]) -> Self {
        Self { marks, len, min_len }
    }

    fn exists(&self) -> bool {
        let mut pos = vec![0u32; self.marks];
        self.extend(&mut pos, 1, 1, 0)
    }

    /// `rel` has bit j set when a mark sits j below the last one placed;
    /// `dist` holds the differences used so far.
    fn extend(&self, pos: &mut [u32], placed: usize, rel: u128, dist: u128) -> bool {
        let last = pos[placed - 1];
        let remaining = self.marks - placed;
        if remaining == 1 {
            return rel << (self.len - last) & dist == 0;
        }
        let lo = (last + 1).max(self.min_len[placed + 1]);
        let hi = self.len.saturating_sub(self.min_len[remaining]);
        for c in lo..=hi.min(self.len - 1) {
            let add = rel << (c - last);
            if add & dist != 0 || !segments_ok(pos, placed, c, self.min_len) || !self.left_leaning(pos, placed, c) {
                continue;
            }
            let dist = dist | add;
            // The remaining - 1 gaps after c are distinct unused differences.
            if smallest_unused_sum(dist, remaining - 1) > self.len - c {
                continue;
            }
            pos[placed] = c;
            if self.extend(pos, placed + 1, add | 1, dist) {
                return true;
            }
        }
        false
    }

    /// Mirror images are equivalent, so keep only rulers whose middle mark
    /// (or pair of middle marks) sits at or left of the centre.
    fn left_leaning(&self, pos: &[u32], placed: usize, c: u32) -> bool {
        let k = self.marks;
        if k % 2 == 1 && placed == k / 2 {
            2 * c <= self.len
        } else if k % 2 == 0 && placed == k / 2 {
            pos[placed - 1] + c <= self.len
        } else {
            true
        }
    }
}

/// Every run of consecutive marks ending at a new mark `c` must be at least as
/// long as the shortest ruler with that many marks.
fn segments_ok(pos: &[u32], placed: usize, c: u32, min_len: &[u32]) -> bool {
    (1..placed)
        .take_while(|&j| j + 1 < min_len.len())
        .all(|j| c - pos[placed - j] >= min_len[j + 1])
}

/// Sum of the `k` smallest positive values not in `dist`.
fn smallest_unused_sum(dist: u128, k: usize) -> u32 {
    let mut free = !dist & !1;
    let mut sum = 0;
    for _ in 0..k {
        if free == 0 {
            return u32::MAX;
        }
        sum += free.trailing_zeros();
        free &= free - 1;
    }
    sum
}

/// Lexicographically first ruler with `marks` marks inside `[0, span]`.
struct FreeEnd<'a> {
    marks: usize,
    span: u32,
    min_len: &'a [u32],
}

impl<'a> FreeEnd<'a> {
    fn new(marks: usize, span: u32, min_len: &'a [u32]) -> Self {
        Self { marks, span, min_len }
    }

    fn first(&self) -> Vec<u32> {
        let mut out = vec![0];
        let found = self.extend(&mut out, 1, 0);
        assert!(found, "a ruler of the optimal size must exist");
        out
    }

    fn extend(&self, out: &mut Vec<u32>, rel: u128, dist: u128) -> bool {
        let placed = out.len();
        if placed == self.marks {
            return true;
        }
        let last = *out.last().expect("anchored at 0");
        let remaining = self.marks - placed;
        let lo = (last + 1).max(self.min_len[placed + 1]);
        let Some(hi) = self.span.checked_sub(self.min_len[remaining]) else {
            return false;
        };
        for c in lo..=hi {
            let add = rel << (c - last);
            if add & dist != 0 || !segments_ok(out, placed, c, self.min_len) {
                continue;
            }
            if smallest_unused_sum(dist | add, remaining - 1) > self.span - c {
                continue;
            }
            out.push(c);
            if self.extend(out, add | 1, dist | add) {
                return true;
            }
            out.pop();
        }
        false
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(xs: &[i64]) -> IntegerSet {
        xs.iter().copied().collect()
    }

    #[test]
    fn greedy_examples() {
        assert_eq!(greedy_sidon(25), set(&[1, 2, 4, 8, 13, 21]));
        assert_eq!(greedy_sidon(2), set(&[1, 2]));
        assert_eq!(greedy_sidon(1), set(&[1]));
        // Mian–Chowla sequence prefix.
        assert_eq!(greedy_sidon(100), set(&[1, 2, 4, 8, 13, 21, 31, 45, 66, 81, 97]));
    }

    #[test]
    fn exact_examples() {
        let e = max_sidon_exact(4).unwrap();
        assert_eq!((e.size, e.witness), (3, set(&[1, 2, 4])));
        let e = max_sidon_exact(7).unwrap();
        assert_eq!((e.size, e.witness), (4, set(&[1, 2, 5, 7])));
        let e = max_sidon_exact(1).unwrap();
        assert_eq!((e.size, e.witness), (1, set(&[1])));
    }

    #[test]
    fn unused_sums() {
        assert_eq!(smallest_unused_sum(0, 3), 6);
        assert_eq!(smallest_unused_sum(0b1010, 2), 2 + 4);
        assert_eq!(smallest_unused_sum(!0, 1), u32::MAX);
    }

    #[test]
    fn known_rulers() {
        // Shortest Golomb rulers with 10 and 11 marks have lengths 55 and 72.
        assert_eq!(max_sidon_exact(56).unwrap().size, 10);
        assert_eq!(max_sidon_exact(72).unwrap().size, 10);
        assert_eq!(max_sidon_exact(73).unwrap().size, 11);
    }

    #[test]
    fn budget() {
        assert!(matches!(max_sidon_exact(121), Err(Error::BudgetExceeded { n: 121, limit: 120 })));
        assert!(matches!(max_sidon_exact(0), Err(Error::BudgetExceeded { .. })));
        assert!(max_sidon_exact_with_limit(10, 8).is_err());
        assert!(matches!(max_sidon_exact_with_limit(200, 500), Err(Error::BudgetExceeded { limit: 128, .. })));
    }
}
