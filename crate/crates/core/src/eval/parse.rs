//! Extracting the decision and assignment from a free-form reply.

use std::collections::BTreeMap;
use std::sync::LazyLock;

use regex::Regex;
use serde::{Deserialize, Serialize};

use crate::logic::Var;
use crate::verbalize::Verbalization;

static TERMINAL: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"The answer is:\s*(Yes|No)\b").expect("valid regex"));

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Decision {
    Yes,
    No,
    Unparsable,
}

impl Decision {
    pub fn as_str(self) -> &'static str {
        match self {
            Decision::Yes => "Yes",
            Decision::No => "No",
            Decision::Unparsable => "Unparsable",
        }
    }
}

/// A model's reply to one prompt.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelResponse {
    pub instance_id: String,
    pub verbalization_id: String,
    pub model: String,
    pub text: String,
    #[serde(default)]
    pub truncated: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub latency_ms: Option<u64>,
    /// Set when the request never got a reply.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParsedAnswer {
    pub decision: Decision,
    pub assignment: Option<BTreeMap<Var, bool>>,
}

/// Last occurrence of the terminal answer string.
pub fn parse_decision(text: &str) -> Decision {
    match TERMINAL.captures_iter(text).last() {
        Some(c) if &c[1] == "Yes" => Decision::Yes,
        Some(_) => Decision::No,
        None => Decision::Unparsable,
    }
}

/// End of the balanced object starting at `start` (which holds `{`),
/// skipping braces inside JSON strings.
fn matching_brace(bytes: &[u8], start: usize) -> Option<usize> {
    let mut depth = 0usize;
    let mut in_string = false;
    let mut escaped = false;
    for (i, &b) in bytes.iter().enumerate().skip(start) {
        if in_string {
            match b {
                _ if escaped => escaped = false,
                b'\\' => escaped = true,
                b'"' => in_string = false,
                _ => {}
            }
            continue;
        }
        match b {
            b'"' => in_string = true,
            b'{' => depth += 1,
            b'}' => {
                depth -= 1;
                if depth == 0 {
                    return Some(i);
                }
            }
            _ => {}
        }
    }
    None
}

/// The last brace-delimited object that decodes against the verbalization's
/// entities and labels.
pub fn extract_assignment(text: &str, v: &Verbalization) -> Option<BTreeMap<Var, bool>> {
    let bytes = text.as_bytes();
    let starts: Vec<usize> = bytes.iter().enumerate().filter(|(_, &b)| b == b'{').map(|(i, _)| i).collect();
    for &start in starts.iter().rev() {
        let Some(end) = matching_brace(bytes, start) else { continue };
        let Ok(object) = serde_json::from_str::<serde_json::Map<String, serde_json::Value>>(&text[start..=end]) else {
            continue;
        };
        if object.is_empty() {
            continue;
        }
        if let Some(a) = v.decode_assignment(&object) {
            return Some(a);
        }
    }
    None
}

/// Never fails: truncated or transport-failed replies are `Unparsable`.
pub fn parse_response(r: &ModelResponse, v: &Verbalization) -> ParsedAnswer {
    if r.truncated || r.error.is_some() {
        return ParsedAnswer { decision: Decision::Unparsable, assignment: None };
    }
    ParsedAnswer { decision: parse_decision(&r.text), assignment: extract_assignment(&r.text, v) }
}
