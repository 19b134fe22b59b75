//! The inductive construction of a unique representation basis.
//!
//! Round `h` takes `A_{2h-1}` and the checkpoint `x_h`, repairs the least
//! unrepresented integer (pair-fill, giving `A_{2h}`), then adjoins a pruned
//! two-block Sidon set built from a prime `p` (injection, giving `A_{2h+1}`
//! and `x_{h+1} = p^2`). Every move is checked as it is made and recorded in a
//! [`BuilderTranscript`].

mod check;
mod steps;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result, Stage};
use crate::intset::IntegerSet;
use crate::prime::is_prime_u64;
use crate::rational::Epsilon;
use crate::verify::Checkpoint;

pub use check::{CheckMode, VerifyPolicy};
pub use steps::{
    choose_prime, find_min_unrepresented, first_gap_in_window, four_sets_disjoint, initial_state, injection_candidate,
    injection_step, pair_fill_candidate, pair_fill_step, prune_sidon, toy_prime, CaseGaps, Injection, InjectionChecks,
    PairFill, Removal, RemovalKind,
};
pub(crate) use check::check_unique_sums;
pub(crate) use steps::field_prime;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// Primes chosen by the growth threshold; every quantitative bound asserted.
    Paper,
    /// A small forced prime; structural invariants only.
    Toy,
}

impl std::str::FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "paper" => Ok(Mode::Paper),
            "toy" => Ok(Mode::Toy),
            _ => Err(Error::Config(format!("unknown mode {s:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BuilderConfig {
    pub epsilon: Epsilon,
    pub rounds: u64,
    pub mode: Mode,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub forced_p: Option<u64>,
    pub verification: VerifyPolicy,
}

impl BuilderConfig {
    pub fn paper(epsilon: Epsilon, rounds: u64) -> Self {
        Self {
            epsilon,
            rounds,
            mode: Mode::Paper,
            forced_p: None,
            verification: VerifyPolicy::default(),
        }
    }

    pub fn toy(epsilon: Epsilon, rounds: u64, forced_p: u64) -> Self {
        Self {
            epsilon,
            rounds,
            mode: Mode::Toy,
            forced_p: Some(forced_p),
            verification: VerifyPolicy::default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        match (self.mode, self.forced_p) {
            (Mode::Toy, None) => Err(Error::Config("toy mode needs a forced prime".into())),
            (Mode::Paper, Some(_)) => Err(Error::Config("paper mode chooses its own primes".into())),
            (_, Some(p)) if !is_prime_u64(p) => Err(Error::NotPrime(BigInt::from(p))),
            (_, Some(p)) if p == 2 || p >= crate::field::MAX_FIELD_PRIME => {
                Err(Error::UnsupportedPrime(BigInt::from(p), "forced prime must be odd and below 2^31"))
            }
            _ => Ok(()),
        }
    }
}

/// One round: the pair-fill `A_{2h-1} -> A_{2h}` and the injection
/// `A_{2h} -> A_{2h+1}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StageRecord {
    pub h: u64,
    /// `x_h`
    #[serde(with = "crate::decimal")]
    pub x: BigInt,
    #[serde(rename = "A_odd")]
    pub a_odd: IntegerSet,
    /// `|a*_{2h-1}|`
    #[serde(with = "crate::decimal")]
    pub a_star_odd: BigInt,
    #[serde(with = "crate::decimal")]
    pub m: BigInt,
    #[serde(with = "crate::decimal")]
    pub b: BigInt,
    #[serde(default, skip_serializing_if = "Option::is_none", with = "crate::decimal::opt")]
    pub b_tilde: Option<BigInt>,
    #[serde(rename = "A_even")]
    pub a_even: IntegerSet,
    pub pair_fill_check: CheckMode,
    /// `|a*_{2h}|`
    #[serde(with = "crate::decimal")]
    pub a_star: BigInt,
    pub p: u64,
    /// `x_{h+1} = p^2`
    #[serde(with = "crate::decimal")]
    pub x_next: BigInt,
    pub l_index: usize,
    pub y_index: usize,
    pub split_size: usize,
    pub injected: IntegerSet,
    pub pruned: Vec<Removal>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gaps: Option<CaseGaps>,
    pub injection_check: CheckMode,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BuilderTranscript {
    pub config: BuilderConfig,
    pub initial: IntegerSet,
    #[serde(with = "crate::decimal")]
    pub x1: BigInt,
    pub stages: Vec<StageRecord>,
    #[serde(rename = "final")]
    pub final_set: IntegerSet,
    pub checkpoints: Vec<Checkpoint>,
}

impl BuilderTranscript {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("transcripts always serialize")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Config(format!("unreadable transcript: {e}")))
    }
}

/// Runs the construction for `config.rounds` rounds.
pub fn build(config: &BuilderConfig) -> Result<BuilderTranscript> {
    config.validate()?;
    let eps = config.epsilon;
    let policy = &config.verification;
    let (initial, x1) = initial_state();
    let first = Checkpoint::measure(1, &initial, &x1, eps, config.mode == Mode::Paper);
    if !first.pass {
        return Err(Error::violation(Stage::Initial, "A_1(-x_1, x_1) below (1 - eps) sqrt(x_1)"));
    }
    let mut checkpoints = vec![first];
    let mut stages = Vec::new();
    let mut current = initial.clone();
    let mut x = x1.clone();

    for h in 1..=config.rounds {
        let (fill, pair_fill_check) = pair_fill_step(&current, policy, h)?;
        if let Some((n, r)) = first_gap_in_window(&fill.result, h) {
            return Err(Error::violation(Stage::PairFill { h }, format!("r({n}) = {r} inside |n| <= {h}")));
        }
        let a_even = fill.result;
        let a_star = a_even.max_abs();
        let p = match (config.mode, config.forced_p) {
            (Mode::Toy, Some(fp)) => toy_prime(fp, &x),
            _ => choose_prime(&a_star, eps, &x),
        };
        let p = field_prime(&p)?;
        let (inj, checks) = injection_step(&a_even, eps, p, config.mode, policy, h)?;
        if inj.x_next <= x {
            return Err(Error::violation(Stage::Injection { h }, "x did not increase"));
        }
        let cp = Checkpoint::measure(h + 1, &inj.result, &inj.x_next, eps, config.mode == Mode::Paper);
        if cp.bound_claimed && !cp.pass {
            return Err(Error::violation(
                Stage::Injection { h },
                format!("A(-x, x) = {} below (1 - eps) sqrt(x) at x = {}", cp.count, cp.x),
            ));
        }
        checkpoints.push(cp);
        stages.push(StageRecord {
            h,
            x: x.clone(),
            a_odd: current,
            a_star_odd: fill.a_star,
            m: fill.m,
            b: fill.b,
            b_tilde: fill.b_tilde,
            a_even,
            pair_fill_check,
            a_star,
            p,
            x_next: inj.x_next.clone(),
            l_index: inj.split.l_index,
            y_index: inj.split.y_index,
            split_size: inj.split.script_s.len(),
            injected: inj.pruned_set,
            pruned: inj.removals,
            gaps: checks.gaps,
            injection_check: checks.mode,
        });
        current = inj.result;
        x = inj.x_next;
    }

    Ok(BuilderTranscript {
        config: config.clone(),
        initial,
        x1,
        stages,
        final_set: current,
        checkpoints,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn eps(n: u64, d: u64) -> Epsilon {
        Epsilon::new(n, d).unwrap()
    }

    #[test]
    fn zero_rounds() {
        let t = build(&BuilderConfig::paper(eps(1, 2), 0)).unwrap();
        assert!(t.stages.is_empty());
        assert_eq!(t.final_set, t.initial);
        assert_eq!(t.checkpoints.len(), 1);
        assert_eq!(t.checkpoints[0].count, 2);
    }

    #[test]
    fn config_rules() {
        let mut c = BuilderConfig::toy(eps(1, 2), 1, 101);
        assert!(c.validate().is_ok());
        c.forced_p = None;
        assert!(matches!(c.validate(), Err(Error::Config(_))));
        let mut c = BuilderConfig::paper(eps(1, 2), 1);
        c.forced_p = Some(101);
        assert!(matches!(c.validate(), Err(Error::Config(_))));
        assert!(matches!(BuilderConfig::toy(eps(1, 2), 1, 100).validate(), Err(Error::NotPrime(_))));
        assert!(matches!(BuilderConfig::toy(eps(1, 2), 1, 2).validate(), Err(Error::UnsupportedPrime(..))));
    }

    #[test]
    fn toy_one_round() {
        let t = build(&BuilderConfig::toy(eps(1, 2), 1, 101)).unwrap();
        let s = &t.stages[0];
        assert_eq!((s.m.clone(), s.b.clone()), (BigInt::from(1), BigInt::from(5)));
        assert_eq!(s.b_tilde, Some(BigInt::from(25)));
        assert_eq!(s.p, 101);
        assert_eq!(s.x_next, BigInt::from(10201));
        assert!(s.a_even.is_subset(&t.final_set));
        assert!(!t.final_set.contains(&BigInt::from(0)));
    }

    #[test]
    fn transcript_json_round_trip() {
        let t = build(&BuilderConfig::toy(eps(1, 2), 1, 101)).unwrap();
        let json = t.to_json();
        let back = BuilderTranscript::from_json(&json).unwrap();
        assert_eq!(back, t);
        assert_eq!(back.to_json(), json);
        assert!(json.contains(r#""A_odd":["-1","1"]"#));
    }

    #[test]
    fn second_paper_prime_is_out_of_range() {
        // a* after the first paper round is about p^2 ~ 2 * 10^9.
        let p = choose_prime(&BigInt::from(2_000_000_000u64), eps(1, 2), &BigInt::from(1));
        assert!(matches!(field_prime(&p), Err(Error::UnsupportedPrime(..))));
    }
}
