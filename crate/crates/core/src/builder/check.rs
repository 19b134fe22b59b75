use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result, Stage};
use crate::intset::{assert_unique_sums, assert_unique_sums_in_range, sampled_unique_sums, IntegerSet, SumBudget, SumVerdict};

/// How unique-sums checks are run during a build or a replay.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyPolicy {
    pub budget: SumBudget,
    /// Targets drawn when the exhaustive check is over budget.
    pub sample_targets: u64,
    /// Seed for sampled checks. Without one, an over-budget check is an error.
    pub sample_seed: Option<u64>,
}

impl Default for VerifyPolicy {
    fn default() -> Self {
        Self {
            budget: SumBudget::default(),
            sample_targets: 1_000_000,
            sample_seed: None,
        }
    }
}

impl VerifyPolicy {
    pub fn sampled(targets: u64, seed: u64) -> Self {
        Self {
            sample_targets: targets,
            sample_seed: Some(seed),
            ..Self::default()
        }
    }
}

/// Which kind of unique-sums check backed a stage.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum CheckMode {
    Exhaustive,
    Sampled {
        targets: u64,
        seed: u64,
        /// Inclusive range of sums that was also checked exhaustively, if the
        /// range fit the budget.
        #[serde(with = "crate::decimal::opt_pair")]
        window: Option<(BigInt, BigInt)>,
    },
}

impl CheckMode {
    pub fn is_exhaustive(&self) -> bool {
        matches!(self, CheckMode::Exhaustive)
    }
}

fn collision_error(stage: Stage, verdict: SumVerdict) -> Result<()> {
    match verdict {
        SumVerdict::Unique => Ok(()),
        SumVerdict::Collision(c) => Err(Error::violation(stage, format!("repeated sum: {c}"))),
    }
}

/// Exhaustive when the pair count fits the budget. Otherwise sampled, plus an
/// exhaustive pass over `window` when that range alone fits the budget.
pub(crate) fn check_unique_sums(
    set: &IntegerSet,
    policy: &VerifyPolicy,
    window: Option<(BigInt, BigInt)>,
    stage: Stage,
) -> Result<CheckMode> {
    match assert_unique_sums(set, &policy.budget) {
        Ok(v) => {
            collision_error(stage, v)?;
            return Ok(CheckMode::Exhaustive);
        }
        Err(Error::ResourceLimit { .. }) if policy.sample_seed.is_some() => {}
        Err(e) => return Err(e),
    }
    let seed = policy.sample_seed.expect("checked above");
    let sampled = sampled_unique_sums(set, policy.sample_targets, seed);
    if let Some(c) = sampled.collision {
        return Err(Error::violation(stage, format!("repeated sum (sampled): {c}")));
    }
    let window = match window {
        Some((lo, hi)) => match assert_unique_sums_in_range(set, &lo, &hi, &policy.budget) {
            Ok(v) => {
                collision_error(stage, v)?;
                Some((lo, hi))
            }
            Err(Error::ResourceLimit { .. }) => None,
            Err(e) => return Err(e),
        },
        None => None,
    };
    Ok(CheckMode::Sampled {
        targets: sampled.targets,
        seed,
        window,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(xs: &[i64]) -> IntegerSet {
        xs.iter().copied().collect()
    }

    #[test]
    fn exhaustive_within_budget() {
        let mode = check_unique_sums(&set(&[1, 2, 5, 7]), &VerifyPolicy::default(), None, Stage::Standalone).unwrap();
        assert!(mode.is_exhaustive());
        let err = check_unique_sums(&set(&[1, 2, 3]), &VerifyPolicy::default(), None, Stage::Standalone).unwrap_err();
        assert!(matches!(err, Error::InvariantViolation { .. }));
    }

    #[test]
    fn over_budget_needs_a_seed() {
        let mut policy = VerifyPolicy {
            budget: SumBudget::with_max_pairs(3),
            ..VerifyPolicy::default()
        };
        let s = set(&[1, 2, 5, 7]);
        assert!(matches!(
            check_unique_sums(&s, &policy, None, Stage::Standalone),
            Err(Error::ResourceLimit { .. })
        ));
        policy.sample_seed = Some(7);
        policy.sample_targets = 100;
        let window = Some((BigInt::from(3), BigInt::from(4)));
        match check_unique_sums(&s, &policy, window.clone(), Stage::Standalone).unwrap() {
            CheckMode::Sampled { targets, seed, window: w } => {
                assert_eq!((targets, seed), (100, 7));
                assert_eq!(w, window);
            }
            m => panic!("{m:?}"),
        }
    }

    #[test]
    fn mode_serializes() {
        let m = CheckMode::Sampled {
            targets: 10,
            seed: 1,
            window: Some((BigInt::from(-5), BigInt::from(5))),
        };
        let json = serde_json::to_string(&m).unwrap();
        assert_eq!(json, r#"{"kind":"sampled","targets":10,"seed":1,"window":["-5","5"]}"#);
        assert_eq!(serde_json::from_str::<CheckMode>(&json).unwrap(), m);
        assert_eq!(serde_json::to_string(&CheckMode::Exhaustive).unwrap(), r#"{"kind":"exhaustive"}"#);
    }
}
