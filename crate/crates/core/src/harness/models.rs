//! Things that answer prompts: offline mock policies and chat endpoints.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::dataset::DatasetRecord;
use crate::logic::{decide, Assignment, Formula, SatResult};
use crate::rng::rng_from_seed;
use crate::verbalize::{ChatClient, ChatError, ChatReply, ChatRequest, Verbalization};

pub trait Responder: Send + Sync {
    fn name(&self) -> &str;

    fn respond(&self, record: &DatasetRecord, v: &Verbalization, seed: u64) -> Result<ChatReply, ChatError>;

    /// Wall-clock latency is worth recording (it breaks byte-identical reruns).
    fn timed(&self) -> bool {
        true
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "policy", rename_all = "snake_case")]
pub enum MockPolicy {
    /// Decides with the solver and returns its model.
    Oracle,
    /// The opposite decision of the oracle.
    AntiOracle,
    AlwaysYes,
    AlwaysNo,
    /// Yes with probability `p`.
    Coin {
        p: f64,
    },
}

impl fmt::Display for MockPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MockPolicy::Oracle => f.write_str("oracle"),
            MockPolicy::AntiOracle => f.write_str("anti_oracle"),
            MockPolicy::AlwaysYes => f.write_str("always_yes"),
            MockPolicy::AlwaysNo => f.write_str("always_no"),
            MockPolicy::Coin { p } => write!(f, "coin({p})"),
        }
    }
}

impl FromStr for MockPolicy {
    type Err = String;

    /// `oracle`, `anti_oracle`, `always_yes`, `always_no`, `coin(p)` or `coin:p`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        match s {
            "oracle" => return Ok(MockPolicy::Oracle),
            "anti_oracle" => return Ok(MockPolicy::AntiOracle),
            "always_yes" => return Ok(MockPolicy::AlwaysYes),
            "always_no" => return Ok(MockPolicy::AlwaysNo),
            _ => {}
        }
        let p = s
            .strip_prefix("coin(")
            .and_then(|r| r.strip_suffix(')'))
            .or_else(|| s.strip_prefix("coin:"))
            .ok_or_else(|| format!("unknown mock policy `{s}`"))?;
        let p: f64 = p.parse().map_err(|_| format!("bad coin probability `{p}`"))?;
        if !(0.0..=1.0).contains(&p) {
            return Err(format!("coin probability {p} outside [0, 1]"));
        }
        Ok(MockPolicy::Coin { p })
    }
}

/// Offline model with a fixed answering policy. Replies are prefixed with
/// `padding_words` filler words and cut at `budget` words, flagged truncated.
#[derive(Debug, Clone, PartialEq)]
pub struct MockModel {
    pub name: String,
    pub policy: MockPolicy,
    pub padding_words: usize,
    pub budget: Option<u32>,
}

impl MockModel {
    pub fn new(policy: MockPolicy) -> Self {
        MockModel { name: format!("mock-{policy}"), policy, padding_words: 0, budget: None }
    }

    pub fn with_padding(mut self, words: usize) -> Self {
        self.padding_words = words;
        self
    }

    pub fn with_budget(mut self, budget: Option<u32>) -> Self {
        self.budget = budget;
        self
    }
}

fn answer_json(v: &Verbalization, f: &Formula, a: &Assignment) -> String {
    let object: serde_json::Map<String, serde_json::Value> = f
        .occurring_vars()
        .into_iter()
        .map(|var| {
            let (t, fl) = v.labels.for_var(var);
            (v.entities.name(var).to_string(), (if a.get(var) { t } else { fl }).into())
        })
        .collect();
    serde_json::to_string_pretty(&object).expect("map serializes")
}

impl Responder for MockModel {
    fn name(&self) -> &str {
        &self.name
    }

    fn respond(&self, record: &DatasetRecord, v: &Verbalization, seed: u64) -> Result<ChatReply, ChatError> {
        let f = record.formula().map_err(|e| ChatError::Malformed(e.to_string()))?;
        let model = match decide(&f) {
            SatResult::Sat(a) => Some(a),
            SatResult::Unsat(_) => None,
        };
        let yes = match self.policy {
            MockPolicy::Oracle => model.is_some(),
            MockPolicy::AntiOracle => model.is_none(),
            MockPolicy::AlwaysYes => true,
            MockPolicy::AlwaysNo => false,
            MockPolicy::Coin { p } => rng_from_seed(seed).random_bool(p),
        };
        let mut text = String::new();
        if self.padding_words > 0 {
            text.push_str(&vec!["hmm"; self.padding_words].join(" "));
            text.push_str("\n\n");
        }
        if yes {
            let a = model.unwrap_or_else(|| Assignment::all(f.num_vars(), true));
            text.push_str(&answer_json(v, &f, &a));
            text.push_str("\n\nThe answer is: Yes");
        } else {
            text.push_str("The answer is: No");
        }
        Ok(match self.budget {
            Some(b) if text.split_whitespace().count() > b as usize => ChatReply {
                text: text.split_whitespace().take(b as usize).collect::<Vec<_>>().join(" "),
                truncated: true,
            },
            _ => ChatReply::complete(text),
        })
    }

    fn timed(&self) -> bool {
        false
    }
}

/// A chat endpoint answering the verbalization's prompt.
pub struct ChatResponder {
    pub name: String,
    pub client: Arc<dyn ChatClient>,
    pub max_tokens: Option<u32>,
}

impl Responder for ChatResponder {
    fn name(&self) -> &str {
        &self.name
    }

    fn respond(&self, _record: &DatasetRecord, v: &Verbalization, seed: u64) -> Result<ChatReply, ChatError> {
        let request = ChatRequest::single(v.prompt.clone()).with_seed(seed).with_max_tokens(self.max_tokens);
        self.client.send(&request)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn policy_parsing() {
        assert_eq!("oracle".parse::<MockPolicy>(), Ok(MockPolicy::Oracle));
        assert_eq!("coin(0.25)".parse::<MockPolicy>(), Ok(MockPolicy::Coin { p: 0.25 }));
        assert_eq!("coin:1".parse::<MockPolicy>(), Ok(MockPolicy::Coin { p: 1.0 }));
        assert!("coin(2)".parse::<MockPolicy>().is_err());
        assert!("sometimes".parse::<MockPolicy>().is_err());
        for p in [MockPolicy::AntiOracle, MockPolicy::AlwaysNo, MockPolicy::Coin { p: 0.5 }] {
            assert_eq!(p.to_string().parse::<MockPolicy>(), Ok(p));
        }
    }
}
