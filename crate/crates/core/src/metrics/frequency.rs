use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::MetricsError;
use crate::augment::AugmentedDialogue;
use crate::scalar::Field;

/// Share of system turns that carry an add-on.
pub fn injection_frequency<T: Field>(dialogue: &AugmentedDialogue) -> Result<T, MetricsError> {
    dialogue
        .injection_frequency()
        .ok_or_else(|| MetricsError::NoSystemTurns(dialogue.dialogue.id.clone()))
}

/// Half-open injection-frequency buckets `(lo, hi]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FrequencyInterval {
    /// (0.1, 0.2]
    Low,
    /// (0.2, 0.3]
    Mid,
    /// (0.3, 0.4]
    High,
    /// (0.4, 1]
    Full,
}

impl FrequencyInterval {
    pub const ALL: [FrequencyInterval; 4] =
        [FrequencyInterval::Low, FrequencyInterval::Mid, FrequencyInterval::High, FrequencyInterval::Full];

    /// Bounds in tenths.
    fn tenths(self) -> (usize, usize) {
        match self {
            FrequencyInterval::Low => (1, 2),
            FrequencyInterval::Mid => (2, 3),
            FrequencyInterval::High => (3, 4),
            FrequencyInterval::Full => (4, 10),
        }
    }

    /// Whether `num / den` lies in the interval, compared exactly.
    pub fn contains_ratio(self, num: usize, den: usize) -> bool {
        let (lo, hi) = self.tenths();
        den > 0 && lo * den < 10 * num && 10 * num <= hi * den
    }

    pub fn contains(self, value: f64) -> bool {
        let (lo, hi) = self.tenths();
        lo as f64 / 10.0 < value && value <= hi as f64 / 10.0
    }

    pub fn of_ratio(num: usize, den: usize) -> Option<Self> {
        Self::ALL.into_iter().find(|i| i.contains_ratio(num, den))
    }

    pub fn of_value(value: f64) -> Option<Self> {
        Self::ALL.into_iter().find(|i| i.contains(value))
    }
}

impl fmt::Display for FrequencyInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (lo, hi) = self.tenths();
        if hi == 10 {
            write!(f, "(0.{lo}, 1]")
        } else {
            write!(f, "(0.{lo}, 0.{hi}]")
        }
    }
}

impl FromStr for FrequencyInterval {
    type Err = String;

    /// Accepts `(0.2, 0.3]`, `0.2-0.3` or the variant name (`mid`).
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || format!("unknown frequency interval {s:?}");
        let lower = s.trim().to_lowercase();
        if let Ok(named) = serde_json::from_value(serde_json::Value::String(lower.clone())) {
            return Ok(named);
        }
        let bare: String = lower.chars().filter(|c| !c.is_whitespace() && !matches!(c, '(' | ']')).collect();
        let (lo, hi) = bare.split_once([',', '-']).ok_or_else(err)?;
        let lo: f64 = lo.parse().map_err(|_| err())?;
        let hi: f64 = hi.parse().map_err(|_| err())?;
        Self::ALL
            .into_iter()
            .find(|i| {
                let (a, b) = i.tenths();
                (lo * 10.0 - a as f64).abs() < 1e-9 && (hi * 10.0 - b as f64).abs() < 1e-9
            })
            .ok_or_else(err)
    }
}
