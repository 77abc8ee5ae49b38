use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

/// Split-selection policy.
///
/// * `Rel7`: thresholds chosen by gain ratio, no penalty.
/// * `SevenG`: thresholds chosen by gain, no penalty.
/// * `SevenGS`: as `SevenG`, but a continuous test whose gain does not exceed
///   the threshold-coding penalty is excluded.
/// * `Rel8`: as `SevenGS`, and the penalized gain is also used when ranking tests.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Policy {
    Rel7,
    SevenG,
    SevenGS,
    Rel8,
}

/// What a threshold search maximizes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ThresholdCriterion {
    Gain,
    GainRatio,
}

impl Policy {
    pub const ALL: [Policy; 4] = [Policy::Rel7, Policy::SevenG, Policy::SevenGS, Policy::Rel8];

    pub fn threshold_criterion(self) -> ThresholdCriterion {
        match self {
            Policy::Rel7 => ThresholdCriterion::GainRatio,
            _ => ThresholdCriterion::Gain,
        }
    }

    /// Whether continuous tests that cannot pay for their threshold are dropped.
    pub fn filters_by_penalty(self) -> bool {
        matches!(self, Policy::SevenGS | Policy::Rel8)
    }

    /// Whether ranking uses the penalized gain.
    pub fn ranks_by_adjusted_gain(self) -> bool {
        matches!(self, Policy::Rel8)
    }

    pub fn label(self) -> &'static str {
        match self {
            Policy::Rel7 => "Rel7",
            Policy::SevenG => "7G",
            Policy::SevenGS => "7GS",
            Policy::Rel8 => "Rel8",
        }
    }
}

impl fmt::Display for Policy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown policy {0:?} (expected rel7, 7g, 7gs or rel8)")]
pub struct UnknownPolicy(pub String);

impl FromStr for Policy {
    type Err = UnknownPolicy;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "rel7" | "r7" => Ok(Policy::Rel7),
            "7g" | "seveng" => Ok(Policy::SevenG),
            "7gs" | "sevengs" => Ok(Policy::SevenGS),
            "rel8" | "r8" => Ok(Policy::Rel8),
            _ => Err(UnknownPolicy(s.to_string())),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_round_trips_labels() {
        for p in Policy::ALL {
            assert_eq!(p.label().parse::<Policy>().unwrap(), p);
        }
        assert!("bogus".parse::<Policy>().is_err());
    }
}
