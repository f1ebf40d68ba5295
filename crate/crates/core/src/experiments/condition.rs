use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::Pcg32;

pub const EXPLICIT_PREFIX: &str = "Please complete the following text:";
pub const NOISY_WORD_COUNT: usize = 5;

const NOISE_WORDS: &str = include_str!("../../data/noise_words.txt");

/// Bundled English word list used for noisy prefixes.
pub fn noise_words() -> Vec<&'static str> {
    NOISE_WORDS.lines().map(str::trim).filter(|w| !w.is_empty()).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ConditionId {
    None,
    Explicit,
    Noisy,
}

impl ConditionId {
    pub const ALL: [ConditionId; 3] = [ConditionId::None, ConditionId::Explicit, ConditionId::Noisy];

    pub fn as_str(self) -> &'static str {
        match self {
            ConditionId::None => "none",
            ConditionId::Explicit => "explicit",
            ConditionId::Noisy => "noisy",
        }
    }
}

impl fmt::Display for ConditionId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ConditionId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "none" => Ok(ConditionId::None),
            "explicit" => Ok(ConditionId::Explicit),
            "noisy" => Ok(ConditionId::Noisy),
            other => Err(Error::Configuration(format!(
                "unknown condition {other:?}; expected none, explicit or noisy"
            ))),
        }
    }
}

/// Text prepended to every stimulus before a model embeds it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConditionSpec {
    pub condition_id: ConditionId,
    pub prefix_text: String,
}

impl ConditionSpec {
    pub fn none() -> Self {
        ConditionSpec {
            condition_id: ConditionId::None,
            prefix_text: String::new(),
        }
    }

    pub fn explicit() -> Self {
        ConditionSpec {
            condition_id: ConditionId::Explicit,
            prefix_text: EXPLICIT_PREFIX.to_owned(),
        }
    }

    /// Noisy prefix from a frozen word string (see [`noisy_prefix`]).
    pub fn noisy(prefix_text: impl Into<String>) -> Result<Self> {
        let spec = ConditionSpec {
            condition_id: ConditionId::Noisy,
            prefix_text: prefix_text.into(),
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        match self.condition_id {
            ConditionId::None if !self.prefix_text.is_empty() => Err(Error::Configuration(
                "condition none must have an empty prefix".into(),
            )),
            ConditionId::Explicit if self.prefix_text != EXPLICIT_PREFIX => Err(Error::Configuration(format!(
                "explicit prefix must be {EXPLICIT_PREFIX:?}, got {:?}",
                self.prefix_text
            ))),
            ConditionId::Noisy => {
                let n = self.prefix_text.split_whitespace().count();
                if n != NOISY_WORD_COUNT {
                    return Err(Error::Configuration(format!(
                        "noisy prefix must have {NOISY_WORD_COUNT} words, got {n}: {:?}",
                        self.prefix_text
                    )));
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }

    /// Model input for one stimulus: prefix and text joined by one space.
    pub fn apply(&self, text: &str) -> String {
        if self.prefix_text.is_empty() {
            text.to_owned()
        } else {
            format!("{} {text}", self.prefix_text)
        }
    }
}

/// Draw [`NOISY_WORD_COUNT`] distinct words from the bundled list, capitalize
/// the first and end with a period, e.g. `"Harmony illuminate umbrella freedom river."`.
pub fn noisy_prefix(seed: u64) -> String {
    let mut words = noise_words();
    Pcg32::from_seed(seed).partial_shuffle(&mut words, NOISY_WORD_COUNT);
    let mut text = words[..NOISY_WORD_COUNT].join(" ");
    if let Some(first) = text.get(0..1) {
        let upper = first.to_uppercase();
        text.replace_range(0..1, &upper);
    }
    text.push('.');
    text
}
