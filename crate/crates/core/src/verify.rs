//! Independent replay of build transcripts and growth reporting.

use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::builder::{
    check_unique_sums, choose_prime, field_prime, find_min_unrepresented, first_gap_in_window, four_sets_disjoint,
    injection_candidate, pair_fill_candidate, toy_prime, BuilderTranscript, CheckMode, Mode, VerifyPolicy,
};
use crate::error::{Error, Result, Stage};
use crate::intset::IntegerSet;
use crate::prime::is_prime_u64;
use crate::rational::Epsilon;

/// Digits after the point in [`Checkpoint::ratio_decimal`].
pub const RATIO_DIGITS: u32 = 6;

/// `A(-x, x)` at a checkpoint, compared against `(1 - eps) sqrt(x)`.
///
/// The ratio is `count / sqrt(x)`, carried exactly as the pair
/// (`ratio_num`, `ratio_den_sq`) = (`count`, `x`).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Checkpoint {
    pub h: u64,
    #[serde(with = "crate::decimal")]
    pub x: BigInt,
    pub count: u64,
    pub ratio_num: u64,
    #[serde(with = "crate::decimal")]
    pub ratio_den_sq: BigInt,
    pub ratio_decimal: String,
    /// `count^2 den^2 >= (den - num)^2 x`
    pub pass: bool,
    /// Whether the construction promises `pass` here.
    pub bound_claimed: bool,
}

impl Checkpoint {
    pub fn measure(h: u64, set: &IntegerSet, x: &BigInt, epsilon: Epsilon, bound_claimed: bool) -> Self {
        let count = set.count_window(x) as u64;
        Self {
            h,
            x: x.clone(),
            count,
            ratio_num: count,
            ratio_den_sq: x.clone(),
            ratio_decimal: ratio_decimal(count, x, RATIO_DIGITS),
            pass: bound_holds(count, x, epsilon),
            bound_claimed,
        }
    }
}

/// `count >= (1 - eps) sqrt(x)`, in integers.
pub fn bound_holds(count: u64, x: &BigInt, epsilon: Epsilon) -> bool {
    let (gap, den) = epsilon.complement();
    let c = BigInt::from(count);
    &c * &c * &den * &den >= &gap * &gap * x
}

/// `count / sqrt(x)` truncated to `digits` decimals.
pub fn ratio_decimal(count: u64, x: &BigInt, digits: u32) -> String {
    if x.is_zero() {
        return "inf".into();
    }
    let scale = BigInt::from(10u32).pow(digits);
    let c = BigInt::from(count);
    // floor(sqrt(floor(q))) = floor(sqrt(q)) for real q >= 0.
    let k = (&c * &c * &scale * &scale / x).sqrt();
    if digits == 0 {
        return k.to_string();
    }
    let int = &k / &scale;
    let frac = (&k % &scale).to_string();
    format!("{int}.{frac:0>width$}", width = digits as usize)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GrowthReport {
    pub epsilon: Epsilon,
    pub checkpoints: Vec<Checkpoint>,
    /// Index into `checkpoints` of the largest ratio (first on ties).
    pub best: Option<usize>,
}

impl GrowthReport {
    pub fn best_checkpoint(&self) -> Option<&Checkpoint> {
        self.best.map(|i| &self.checkpoints[i])
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("x,count,ratio_decimal,pass\n");
        for c in &self.checkpoints {
            out.push_str(&format!("{},{},{},{}\n", c.x, c.count, c.ratio_decimal, c.pass));
        }
        out
    }
}

pub fn growth_report(t: &BuilderTranscript) -> GrowthReport {
    let mut best: Option<usize> = None;
    for (i, c) in t.checkpoints.iter().enumerate() {
        let better = match best {
            None => true,
            // c1^2 / x1 > c0^2 / x0
            Some(j) => {
                let b = &t.checkpoints[j];
                let (c1, c0) = (BigInt::from(c.count), BigInt::from(b.count));
                &c1 * &c1 * &b.x > &c0 * &c0 * &c.x
            }
        };
        if better {
            best = Some(i);
        }
    }
    GrowthReport {
        epsilon: t.config.epsilon,
        checkpoints: t.checkpoints.clone(),
        best,
    }
}

/// A disagreement between a transcript and its replay. Stage 0 is the
/// initial state and the final set.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Issue {
    pub stage: u64,
    pub field: String,
    pub expected: String,
    pub found: String,
}

impl fmt::Display for Issue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "stage {}: {}: expected {}, found {}", self.stage, self.field, self.expected, self.found)
    }
}

/// Which sets were checked for unique sums, and how.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SumCheck {
    pub stage: u64,
    pub set: String,
    pub mode: CheckMode,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub stages: u64,
    pub sum_checks: Vec<SumCheck>,
    pub issues: Vec<Issue>,
}

impl VerifyReport {
    pub fn ok(&self) -> bool {
        self.issues.is_empty()
    }
}

struct Replay<'a> {
    policy: &'a VerifyPolicy,
    issues: Vec<Issue>,
    sum_checks: Vec<SumCheck>,
}

impl Replay<'_> {
    fn issue(&mut self, stage: u64, field: &str, expected: impl ToString, found: impl ToString) {
        self.issues.push(Issue {
            stage,
            field: field.into(),
            expected: expected.to_string(),
            found: found.to_string(),
        });
    }

    fn expect_eq<T: PartialEq + fmt::Display>(&mut self, stage: u64, field: &str, expected: &T, found: &T) {
        if expected != found {
            self.issue(stage, field, expected, found);
        }
    }

    fn expect_set(&mut self, stage: u64, field: &str, expected: &IntegerSet, found: &IntegerSet) {
        if expected != found {
            self.issue(stage, field, describe_diff(found, expected), format!("{} elements", found.len()));
        }
    }

    /// Hypotheses I and IV.
    fn basis_checks(&mut self, stage: u64, name: &str, set: &IntegerSet, window: Option<(BigInt, BigInt)>) -> Result<()> {
        if set.contains(&BigInt::zero()) {
            self.issue(stage, &format!("{name}: zero"), "0 absent", "0 present");
        }
        match check_unique_sums(set, self.policy, window, Stage::Standalone) {
            Ok(mode) => self.sum_checks.push(SumCheck {
                stage,
                set: name.into(),
                mode,
            }),
            Err(Error::InvariantViolation { detail, .. }) => {
                self.issue(stage, &format!("{name}: unique sums"), "r(n) <= 1 for all n", detail)
            }
            Err(e) => return Err(e),
        }
        Ok(())
    }
}

fn describe_diff(found: &IntegerSet, expected: &IntegerSet) -> String {
    let missing = expected.without(found);
    let extra = found.without(expected);
    let first = |s: &IntegerSet| s.min().map(|v| v.to_string()).unwrap_or_else(|| "-".into());
    format!(
        "{} elements ({} missing, first {}; {} extra, first {})",
        expected.len(),
        missing.len(),
        first(&missing),
        extra.len(),
        first(&extra)
    )
}

/// Replays the transcript from `A_1`, recomputing every pair-fill, every
/// Bose set and every pruning from the recorded choices, and re-checks the
/// basis windows, monotonicity and the checkpoint bounds.
///
/// Mismatches are collected as issues. An `Err` means the replay itself could
/// not run, e.g. an over-budget check with no sampling seed.
pub fn verify_transcript(t: &BuilderTranscript, policy: &VerifyPolicy) -> Result<VerifyReport> {
    let cfg = &t.config;
    let eps = cfg.epsilon;
    let paper = cfg.mode == Mode::Paper;
    let mut r = Replay {
        policy,
        issues: Vec::new(),
        sum_checks: Vec::new(),
    };

    let initial: IntegerSet = [-1i64, 1].into_iter().collect();
    r.expect_set(0, "initial", &initial, &t.initial);
    r.expect_eq(0, "x1", &BigInt::from(1), &t.x1);
    if cfg.rounds != t.stages.len() as u64 {
        r.issue(0, "stage count", cfg.rounds, t.stages.len());
    }
    if let Err(e) = cfg.validate() {
        r.issue(0, "config", "valid configuration", e);
    }

    let mut expected_odd = t.initial.clone();
    let mut expected_x = t.x1.clone();
    let mut prev_even: Option<&IntegerSet> = None;
    let mut checkpoint_sets: Vec<(u64, IntegerSet, BigInt)> = vec![(1, t.initial.clone(), t.x1.clone())];

    for (i, s) in t.stages.iter().enumerate() {
        let h = s.h;
        r.expect_eq(h, "h", &(i as u64 + 1), &h);
        r.expect_set(h, "A_odd", &expected_odd, &s.a_odd);
        r.expect_eq(h, "x", &expected_x, &s.x);
        if let Some(prev) = prev_even {
            if !prev.is_subset(&s.a_odd) {
                let lost = prev.without(&s.a_odd);
                r.issue(h, "monotonicity A_even(h-1) in A_odd(h)", "subset", format!("{} elements lost, first {}", lost.len(), lost.min().expect("nonempty")));
            }
        }
        if h > 1 {
            r.basis_checks(h, "A_odd", &s.a_odd, None)?;
        } else if s.a_odd.contains(&BigInt::zero()) {
            r.issue(h, "A_odd: zero", "0 absent", "0 present");
        }

        // Pair-fill replay from the recorded A_odd.
        if s.a_odd.is_empty() {
            r.issue(h, "A_odd", "nonempty", "empty");
            break;
        }
        let fill = pair_fill_candidate(&s.a_odd);
        r.expect_eq(h, "m", &fill.m, &s.m);
        r.expect_eq(h, "m (least unrepresented)", &find_min_unrepresented(&s.a_odd), &s.m);
        r.expect_eq(h, "a_star_odd", &fill.a_star, &s.a_star_odd);
        r.expect_eq(h, "b", &fill.b, &s.b);
        let opt = |v: &Option<BigInt>| v.as_ref().map_or("absent".to_string(), |b| b.to_string());
        if fill.b_tilde != s.b_tilde {
            r.issue(h, "b_tilde", opt(&fill.b_tilde), opt(&s.b_tilde));
        }
        r.expect_set(h, "A_even", &fill.result, &s.a_even);
        if !s.a_odd.is_subset(&s.a_even) {
            r.issue(h, "monotonicity A_odd in A_even", "subset", "not a subset");
        }
        if let Err(e) = four_sets_disjoint(&s.a_odd, &-&s.b, &(&s.b + &s.m)) {
            r.issue(h, "pair-fill disjointness (b)", "pairwise disjoint", e);
        }
        if let Some(bt) = &s.b_tilde {
            let with_b = s.a_odd.union(&[-&s.b, &s.b + &s.m].into_iter().collect());
            if let Err(e) = four_sets_disjoint(&with_b, &-bt, &(bt - &s.m)) {
                r.issue(h, "pair-fill disjointness (b_tilde)", "pairwise disjoint", e);
            }
        }
        for target in [s.m.clone(), -&s.m] {
            let count = s.a_even.rep_count_unordered(&target);
            if count != 1 {
                r.issue(h, &format!("r_A_even({target})"), 1, count);
            }
        }
        if let Some((n, count)) = first_gap_in_window(&s.a_even, h) {
            r.issue(h, &format!("window: r_A_even({n})"), 1, count);
        }
        let window = (&s.a_star_odd * &s.a_star_odd) * 4;
        r.basis_checks(h, "A_even", &s.a_even, Some((-&window, window)))?;
        r.expect_eq(h, "a_star", &s.a_even.max_abs(), &s.a_star);

        // Injection replay.
        let recorded_next = s.a_even.union(&s.injected);
        let p_big = BigInt::from(s.p);
        if !is_prime_u64(s.p) {
            r.issue(h, "p", "a prime", s.p);
        } else {
            let wanted = match (cfg.mode, cfg.forced_p) {
                (Mode::Toy, Some(fp)) => Some(toy_prime(fp, &s.x)),
                (Mode::Paper, _) => Some(choose_prime(&s.a_star, eps, &s.x)),
                _ => None,
            };
            if let Some(w) = wanted {
                r.expect_eq(h, "p (selection rule)", &w, &p_big);
            }
        }
        if p_big <= s.x {
            r.issue(h, "p > x_h", format!("above {}", s.x), s.p);
        }
        r.expect_eq(h, "x_next", &(&p_big * &p_big), &s.x_next);
        if s.x_next <= s.x {
            r.issue(h, "x monotonicity", format!("above {}", s.x), &s.x_next);
        }
        if !s.injected.is_disjoint(&s.a_even) {
            r.issue(h, "injected", "disjoint from A_even", "overlaps");
        }
        let next = match (is_prime_u64(s.p), field_prime(&p_big)) {
            (true, Ok(p)) => {
                let inj = injection_candidate(&s.a_even, eps, p)?;
                r.expect_eq(h, "l_index", &inj.split.l_index, &s.l_index);
                r.expect_eq(h, "y_index", &inj.split.y_index, &s.y_index);
                r.expect_eq(h, "split_size", &inj.split.script_s.len(), &s.split_size);
                r.expect_set(h, "injected", &inj.pruned_set, &s.injected);
                if inj.removals != s.pruned {
                    r.issue(h, "pruned", format!("{} removals", inj.removals.len()), format!("{} removals", s.pruned.len()));
                }
                inj.result
            }
            (true, Err(e)) => {
                r.issue(h, "p", "a prime in field range", e);
                recorded_next.clone()
            }
            (false, _) => recorded_next.clone(),
        };
        if paper {
            let (gap, den) = eps.complement();
            if BigInt::from(s.injected.len()) * &den < &gap * &p_big {
                r.issue(h, "|S~| >= (1 - eps) p", format!("at least {}", &gap * &p_big / &den), s.injected.len());
            }
        }

        prev_even = Some(&s.a_even);
        expected_odd = next;
        expected_x = s.x_next.clone();
        let after = t.stages.get(i + 1).map_or(&t.final_set, |n| &n.a_odd);
        checkpoint_sets.push((h + 1, after.clone(), s.x_next.clone()));
    }

    r.expect_set(0, "final", &expected_odd, &t.final_set);
    if let Some(last) = t.stages.last() {
        if !last.a_even.is_subset(&t.final_set) {
            r.issue(0, "monotonicity A_even in final", "subset", "not a subset");
        }
        r.basis_checks(0, "final", &t.final_set, {
            let w = (&last.a_star * &last.a_star) * 4;
            Some((-&w, w))
        })?;
    }

    if t.checkpoints.len() != checkpoint_sets.len() {
        r.issue(0, "checkpoint count", checkpoint_sets.len(), t.checkpoints.len());
    }
    for ((h, set, x), recorded) in checkpoint_sets.iter().zip(&t.checkpoints) {
        let fresh = Checkpoint::measure(*h, set, x, eps, paper);
        if &fresh != recorded {
            r.issue(*h, "checkpoint", format!("{fresh:?}"), format!("{recorded:?}"));
        }
        if paper && !fresh.pass {
            r.issue(*h, "growth bound", "A(-x, x) >= (1 - eps) sqrt(x)", format!("{} at x = {}", fresh.count, x));
        }
    }

    Ok(VerifyReport {
        stages: t.stages.len() as u64,
        sum_checks: r.sum_checks,
        issues: r.issues,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builder::{build, BuilderConfig};

    fn eps(n: u64, d: u64) -> Epsilon {
        Epsilon::new(n, d).unwrap()
    }

    #[test]
    fn first_checkpoint() {
        let a: IntegerSet = [-1i64, 1].into_iter().collect();
        let c = Checkpoint::measure(1, &a, &BigInt::from(1), eps(1, 2), true);
        assert_eq!((c.count, c.pass), (2, true));
        assert_eq!(c.ratio_decimal, "2.000000");
    }

    #[test]
    fn bound_is_exact_at_the_edge() {
        // (1 - 1/2) * sqrt(16) = 2
        assert!(bound_holds(2, &BigInt::from(16), eps(1, 2)));
        assert!(!bound_holds(1, &BigInt::from(16), eps(1, 2)));
        assert!(!bound_holds(2, &BigInt::from(17), eps(1, 2)));
    }

    #[test]
    fn decimal_rendering() {
        assert_eq!(ratio_decimal(1, &BigInt::from(2), 6), "0.707106");
        assert_eq!(ratio_decimal(3, &BigInt::from(4), 3), "1.500");
        assert_eq!(ratio_decimal(3, &BigInt::from(4), 0), "1");
        assert_eq!(ratio_decimal(35000, &BigInt::from(44449u64 * 44449), 4), "0.7874");
    }

    #[test]
    fn csv_header() {
        let t = build(&BuilderConfig::paper(eps(1, 2), 0)).unwrap();
        let g = growth_report(&t);
        assert_eq!(g.to_csv(), "x,count,ratio_decimal,pass\n1,2,2.000000,true\n");
        assert_eq!(g.best, Some(0));
    }

    #[test]
    fn clean_toy_transcript_verifies() {
        let t = build(&BuilderConfig::toy(eps(1, 2), 1, 101)).unwrap();
        let report = verify_transcript(&t, &VerifyPolicy::default()).unwrap();
        assert!(report.ok(), "{:?}", report.issues);
        assert!(report.sum_checks.iter().all(|c| c.mode.is_exhaustive()));
    }

    #[test]
    fn tampered_m_is_caught() {
        let mut t = build(&BuilderConfig::toy(eps(1, 2), 1, 101)).unwrap();
        t.stages[0].m = BigInt::from(-1);
        let report = verify_transcript(&t, &VerifyPolicy::default()).unwrap();
        assert!(report.issues.iter().any(|i| i.stage == 1 && i.field == "m"), "{:?}", report.issues);
    }
}
