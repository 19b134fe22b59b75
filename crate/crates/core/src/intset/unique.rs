//! Unique-sums verification: is every integer represented at most once as an
//! unordered pair sum?
//!
//! The exhaustive check partitions the range of pair sums into windows that
//! each hold at most `chunk` pairs, materialises one window at a time, sorts it
//! and looks for adjacent equal sums. Windows are scanned in ascending order so
//! the reported witness is the collision with the smallest sum, and within that
//! sum the two representations with the smallest first components. The result
//! does not depend on how many rayon workers take part.

use std::fmt;

use num_bigint::{BigInt, RandBigInt};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{fast_scalar, rep_count_fast, IntegerSet};
use crate::error::{Error, Result};

/// Limits for the exhaustive check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SumBudget {
    /// Maximum number of unordered pairs an exhaustive check may enumerate.
    pub max_pairs: u64,
    /// Pairs materialised per window.
    pub chunk: usize,
}

impl SumBudget {
    pub const DEFAULT_MAX_PAIRS: u64 = 500_000_000;

    pub fn unlimited() -> Self {
        Self {
            max_pairs: u64::MAX,
            ..Self::default()
        }
    }

    pub fn with_max_pairs(max_pairs: u64) -> Self {
        Self {
            max_pairs,
            ..Self::default()
        }
    }

    fn check(&self, needed: u128) -> Result<()> {
        if needed > u128::from(self.max_pairs) {
            return Err(Error::ResourceLimit {
                what: "pair enumeration",
                needed,
                budget: u128::from(self.max_pairs),
            });
        }
        Ok(())
    }
}

impl Default for SumBudget {
    fn default() -> Self {
        Self {
            max_pairs: Self::DEFAULT_MAX_PAIRS,
            chunk: 1 << 22,
        }
    }
}

/// Two distinct unordered representations of the same integer.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Collision {
    pub first: (BigInt, BigInt),
    pub second: (BigInt, BigInt),
}

impl Collision {
    pub fn sum(&self) -> BigInt {
        &self.first.0 + &self.first.1
    }

    /// The witness as `(a, a', c, c')`.
    pub fn to_quad(&self) -> [BigInt; 4] {
        [
            self.first.0.clone(),
            self.first.1.clone(),
            self.second.0.clone(),
            self.second.1.clone(),
        ]
    }
}

impl Serialize for Collision {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let pair = |p: &(BigInt, BigInt)| [p.0.to_string(), p.1.to_string()];
        let mut st = s.serialize_struct("Collision", 3)?;
        st.serialize_field("sum", &self.sum().to_string())?;
        st.serialize_field("first", &pair(&self.first))?;
        st.serialize_field("second", &pair(&self.second))?;
        st.end()
    }
}

impl fmt::Display for Collision {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} + {} = {} + {} = {}",
            self.first.0,
            self.first.1,
            self.second.0,
            self.second.1,
            self.sum()
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SumVerdict {
    Unique,
    Collision(Collision),
}

impl SumVerdict {
    pub fn is_unique(&self) -> bool {
        matches!(self, SumVerdict::Unique)
    }

    pub fn collision(&self) -> Option<&Collision> {
        match self {
            SumVerdict::Unique => None,
            SumVerdict::Collision(c) => Some(c),
        }
    }
}

/// Exhaustively checks that all unordered pair sums are distinct, i.e.
/// `r_A(n) <= 1` for every integer `n`.
pub fn assert_unique_sums(set: &IntegerSet, budget: &SumBudget) -> Result<SumVerdict> {
    let n = set.len() as u128;
    budget.check(n * (n + 1) / 2)?;
    if set.len() < 2 {
        return Ok(SumVerdict::Unique);
    }
    match set.to_fast() {
        Some(a) => {
            let start = 2 * a[0] as i128;
            let end = 2 * a[a.len() - 1] as i128 + 1;
            Ok(fast_verdict(&a, start, end, budget.chunk))
        }
        None => Ok(big_verdict(set.as_slice(), None)),
    }
}

/// Exhaustive check restricted to sums in `[lo, hi]`: only pairs whose sum
/// lands in the range are enumerated, and only those count against the budget.
pub fn assert_unique_sums_in_range(
    set: &IntegerSet,
    lo: &BigInt,
    hi: &BigInt,
    budget: &SumBudget,
) -> Result<SumVerdict> {
    if set.len() < 2 || lo > hi {
        return Ok(SumVerdict::Unique);
    }
    match (set.to_fast(), fast_scalar(lo), fast_scalar(hi)) {
        (Some(a), Some(lo), Some(hi)) => {
            let start = (lo as i128).max(2 * a[0] as i128);
            let end = (hi as i128 + 1).min(2 * a[a.len() - 1] as i128 + 1);
            if start >= end {
                return Ok(SumVerdict::Unique);
            }
            let needed = count_below(&a, end) - count_below(&a, start);
            budget.check(u128::from(needed))?;
            Ok(fast_verdict(&a, start, end, budget.chunk))
        }
        _ => {
            let n = set.len() as u128;
            budget.check(n * (n + 1) / 2)?;
            Ok(big_verdict(set.as_slice(), Some((lo, hi))))
        }
    }
}

/// Outcome of a sampled check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SampledVerdict {
    pub targets: u64,
    /// First sampled target (in generation order) with two or more
    /// representations, expanded to its canonical witness.
    pub collision: Option<Collision>,
}

/// Evaluates `r_A(n)` on `targets` integers drawn from the sum range.
///
/// Half of the targets are uniform over `[2 min A, 2 max A]`. The rest are
/// three contiguous runs: centred on 0, starting at `2 min A`, and ending at
/// `2 max A`.
pub fn sampled_unique_sums(set: &IntegerSet, targets: u64, seed: u64) -> SampledVerdict {
    if set.len() < 2 || targets == 0 {
        return SampledVerdict {
            targets: 0,
            collision: None,
        };
    }
    let lo = set.min().expect("nonempty") * 2;
    let hi = set.max().expect("nonempty") * 2;
    let uniform = targets / 2;
    let run = (targets - uniform) / 3;
    let uniform = targets - 3 * run;

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut points: Vec<BigInt> = Vec::with_capacity(targets as usize);
    match (fast_scalar(&lo), fast_scalar(&hi)) {
        (Some(l), Some(h)) => points.extend((0..uniform).map(|_| BigInt::from(rng.gen_range(l..=h)))),
        _ => {
            let h1 = &hi + 1;
            points.extend((0..uniform).map(|_| rng.gen_bigint_range(&lo, &h1)));
        }
    }
    let run = run as i64;
    points.extend((-(run / 2)..run - run / 2).map(BigInt::from));
    points.extend((0..run).map(|k| &lo + k));
    points.extend((0..run).map(|k| &hi - k));

    let hit = match set.to_fast() {
        Some(a) => {
            let fast_points: Option<Vec<i64>> = points.iter().map(fast_scalar).collect();
            match fast_points {
                Some(fp) => fp.par_iter().position_first(|&n| rep_count_fast(&a, n) >= 2),
                None => points.par_iter().position_first(|n| set.rep_count_unordered(n) >= 2),
            }
        }
        None => points.par_iter().position_first(|n| set.rep_count_unordered(n) >= 2),
    };
    let collision = hit.map(|k| {
        let n = &points[k];
        match assert_unique_sums_in_range(set, n, n, &SumBudget::unlimited()) {
            Ok(SumVerdict::Collision(c)) => c,
            _ => unreachable!("r({n}) >= 2 but no collision found in its window"),
        }
    });
    SampledVerdict {
        targets: points.len() as u64,
        collision,
    }
}

/// Pairs `i <= j` with `a[i] + a[j] < t`.
fn count_below(a: &[i64], t: i128) -> u64 {
    let mut k = a.len();
    let mut count = 0u64;
    for (i, &x) in a.iter().enumerate() {
        let bound = t - x as i128;
        while k > 0 && a[k - 1] as i128 >= bound {
            k -= 1;
        }
        if k <= i {
            break;
        }
        count += (k - i) as u64;
    }
    count
}

/// Splits `[start, end)` into half-open windows holding at most `chunk` pairs
/// each (a single sum value may exceed it; such a window is kept anyway).
fn plan_windows(a: &[i64], start: i128, end: i128, chunk: u64) -> Vec<(i128, i128)> {
    let mut out = Vec::new();
    let mut lo = start;
    let mut below_lo = count_below(a, lo);
    let below_end = count_below(a, end);
    while lo < end {
        if below_end - below_lo <= chunk {
            out.push((lo, end));
            break;
        }
        let (mut good, mut bad) = (lo + 1, end);
        while bad - good > 1 {
            let mid = good + (bad - good) / 2;
            if count_below(a, mid) - below_lo <= chunk {
                good = mid;
            } else {
                bad = mid;
            }
        }
        out.push((lo, good));
        below_lo = count_below(a, good);
        lo = good;
    }
    out
}

#[derive(Clone, Copy)]
struct Hit {
    i1: usize,
    j1: usize,
    i2: usize,
    j2: usize,
}

fn scan_window(a: &[i64], lo: i128, hi: i128) -> Option<Hit> {
    let mut entries: Vec<(i64, u32, u32)> = Vec::new();
    for (i, &x) in a.iter().enumerate() {
        let tail = &a[i..];
        let from = tail.partition_point(|&y| (y as i128) < lo - x as i128);
        let to = tail.partition_point(|&y| (y as i128) < hi - x as i128);
        for (off, &y) in tail[from..to].iter().enumerate() {
            entries.push((x + y, i as u32, (i + from + off) as u32));
        }
    }
    entries.sort_unstable_by_key(|&(s, i, _)| (s, i));
    entries.windows(2).find(|w| w[0].0 == w[1].0).map(|w| Hit {
        i1: w[0].1 as usize,
        j1: w[0].2 as usize,
        i2: w[1].1 as usize,
        j2: w[1].2 as usize,
    })
}

fn fast_verdict(a: &[i64], start: i128, end: i128, chunk: usize) -> SumVerdict {
    let windows = plan_windows(a, start, end, chunk.max(1) as u64);
    let hit = windows
        .par_iter()
        .find_map_first(|&(lo, hi)| scan_window(a, lo, hi));
    match hit {
        None => SumVerdict::Unique,
        Some(h) => SumVerdict::Collision(Collision {
            first: (BigInt::from(a[h.i1]), BigInt::from(a[h.j1])),
            second: (BigInt::from(a[h.i2]), BigInt::from(a[h.j2])),
        }),
    }
}

/// Arbitrary-precision fallback: materialise every (range-filtered) pair sum.
fn big_verdict(a: &[BigInt], range: Option<(&BigInt, &BigInt)>) -> SumVerdict {
    let mut entries: Vec<(BigInt, usize, usize)> = Vec::new();
    for i in 0..a.len() {
        for j in i..a.len() {
            let s = &a[i] + &a[j];
            if range.is_none_or(|(lo, hi)| *lo <= s && s <= *hi) {
                entries.push((s, i, j));
            }
        }
    }
    entries.sort_unstable_by(|x, y| (&x.0, x.1).cmp(&(&y.0, y.1)));
    match entries.windows(2).find(|w| w[0].0 == w[1].0) {
        None => SumVerdict::Unique,
        Some(w) => SumVerdict::Collision(Collision {
            first: (a[w[0].1].clone(), a[w[0].2].clone()),
            second: (a[w[1].1].clone(), a[w[1].2].clone()),
        }),
    }
}
