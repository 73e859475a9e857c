//! Natural-language renderings of formulas: fixed templates and
//! LLM-written stories, plus what evaluation needs to decode answers.

pub mod chat;
pub mod llm;
pub mod mock;
mod names;
pub mod template;

pub use chat::{ChatClient, ChatError, ChatMessage, ChatReply, ChatRequest, Role};
pub use llm::{
    build_llm_prompt, generate_story, validate_clue, ClueRecord, ClueStatus, Story, StoryError, StoryOptions, Theme,
    Validation,
};
pub use names::PERSON_NAMES;
pub use template::{build_prompt, parse_body, parse_sentence, render_body, render_clause, verbalize, Scheme};

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::logic::Var;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum VerbalizeError {
    #[error("line does not match the scheme's pattern: {line:?}")]
    Unmatched { line: String },
    #[error("entity name {0:?} is used twice")]
    DuplicateEntity(String),
}

/// How a scheme names variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EntityNaming {
    /// A..Z, AA, AB, …
    Letters,
    PersonNames,
    /// `"{prefix} {i}"` with 1-based `i`.
    Numbered(String),
}

/// `A, …, Z, AA, AB, …` (bijective base 26).
pub fn letter_name(index: usize) -> String {
    let mut n = index + 1;
    let mut out = Vec::new();
    while n > 0 {
        n -= 1;
        out.push(b'A' + (n % 26) as u8);
        n /= 26;
    }
    out.reverse();
    String::from_utf8(out).expect("ascii")
}

/// Names from the fixed pool; past its end a numeric suffix keeps them distinct.
pub fn person_name(index: usize) -> String {
    let pool = PERSON_NAMES.len();
    let base = PERSON_NAMES[index % pool];
    match index / pool {
        0 => base.to_string(),
        k => format!("{base} {}", k + 1),
    }
}

/// Bijection between variables `0..n` and entity names.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<String>", into = "Vec<String>")]
pub struct EntityMap {
    names: Vec<String>,
    index: HashMap<String, Var>,
}

impl EntityMap {
    pub fn new(naming: &EntityNaming, num_vars: u32) -> Self {
        let names = (0..num_vars as usize)
            .map(|i| match naming {
                EntityNaming::Letters => letter_name(i),
                EntityNaming::PersonNames => person_name(i),
                EntityNaming::Numbered(prefix) => format!("{prefix} {}", i + 1),
            })
            .collect();
        Self::from_names(names).expect("generated names are distinct")
    }

    pub fn from_names(names: Vec<String>) -> Result<Self, VerbalizeError> {
        let mut index = HashMap::with_capacity(names.len());
        for (i, name) in names.iter().enumerate() {
            if index.insert(name.clone(), Var(i as u32)).is_some() {
                return Err(VerbalizeError::DuplicateEntity(name.clone()));
            }
        }
        Ok(EntityMap { names, index })
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, v: Var) -> &str {
        &self.names[v.index()]
    }

    pub fn lookup(&self, name: &str) -> Option<Var> {
        self.index.get(name).copied()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }
}

impl TryFrom<Vec<String>> for EntityMap {
    type Error = VerbalizeError;

    fn try_from(names: Vec<String>) -> Result<Self, Self::Error> {
        Self::from_names(names)
    }
}

impl From<EntityMap> for Vec<String> {
    fn from(m: EntityMap) -> Self {
        m.names
    }
}

/// Answer values a model may use for each entity.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ValueLabels {
    Uniform {
        true_label: String,
        false_label: String,
    },
    /// `(true_desc, false_desc)` per variable.
    PerEntity {
        labels: Vec<(String, String)>,
    },
}

impl ValueLabels {
    pub fn for_var(&self, v: Var) -> (&str, &str) {
        match self {
            ValueLabels::Uniform { true_label, false_label } => (true_label, false_label),
            ValueLabels::PerEntity { labels } => {
                let (t, f) = &labels[v.index()];
                (t, f)
            }
        }
    }

    /// Maps an answer value to a truth value, ignoring ASCII case and
    /// surrounding whitespace.
    pub fn decode(&self, v: Var, value: &str) -> Option<bool> {
        let (t, f) = self.for_var(v);
        let value = value.trim();
        if value.eq_ignore_ascii_case(t) {
            Some(true)
        } else if value.eq_ignore_ascii_case(f) {
            Some(false)
        } else {
            None
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "style", rename_all = "snake_case")]
pub enum Style {
    Template { scheme: Scheme },
    Story { theme: Theme },
}

/// One rendering of one formula, self-contained for scoring.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verbalization {
    /// Scheme or theme name; unique within a dataset record.
    pub id: String,
    #[serde(flatten)]
    pub style: Style,
    pub entities: EntityMap,
    pub labels: ValueLabels,
    pub body: String,
    pub prompt: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub clues: Vec<ClueRecord>,
}

impl Verbalization {
    /// Decodes a JSON object of `entity → value`; any unknown key or value
    /// rejects the whole object.
    pub fn decode_assignment(
        &self,
        object: &serde_json::Map<String, serde_json::Value>,
    ) -> Option<BTreeMap<Var, bool>> {
        let mut out = BTreeMap::new();
        for (key, value) in object {
            let v = self.entities.lookup(key.trim())?;
            let b = self.labels.decode(v, value.as_str()?)?;
            out.insert(v, b);
        }
        Some(out)
    }
}

/// Closing instructions shared by every prompt.
pub(crate) fn answer_block() -> &'static str {
    "End your response with exactly one of:\n\
     - \"The answer is: Yes\" (if a valid assignment exists)\n\
     - \"The answer is: No\" (if no valid assignment exists)"
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn letters() {
        let got: Vec<String> = [0, 1, 25, 26, 27, 51, 52, 701, 702].iter().map(|&i| letter_name(i)).collect();
        assert_eq!(got, ["A", "B", "Z", "AA", "AB", "AZ", "BA", "ZZ", "AAA"]);
    }

    #[test]
    fn person_pool_is_large_and_distinct() {
        assert!(PERSON_NAMES.len() >= 200);
        let map = EntityMap::new(&EntityNaming::PersonNames, 3 * PERSON_NAMES.len() as u32);
        assert_eq!(map.len(), 3 * PERSON_NAMES.len());
        assert_eq!(map.name(Var(PERSON_NAMES.len() as u32)), format!("{} 2", PERSON_NAMES[0]));
        assert!(map.names().iter().all(|n| !n.contains(" or ")));
    }

    #[test]
    fn entity_map_serde_roundtrip() {
        let map = EntityMap::new(&EntityNaming::Numbered("door".into()), 3);
        let json = serde_json::to_string(&map).unwrap();
        assert_eq!(json, r#"["door 1","door 2","door 3"]"#);
        assert_eq!(serde_json::from_str::<EntityMap>(&json).unwrap(), map);
        assert!(serde_json::from_str::<EntityMap>(r#"["a","a"]"#).is_err());
    }

    #[test]
    fn decode_rejects_unknown() {
        let v = verbalize(&crate::Formula::empty(2), Scheme::Logic);
        let obj = |s: &str| serde_json::from_str::<serde_json::Map<_, _>>(s).unwrap();
        assert_eq!(
            v.decode_assignment(&obj(r#"{"A":"true","B":"False"}"#)),
            Some(BTreeMap::from([(Var(0), true), (Var(1), false)]))
        );
        assert_eq!(v.decode_assignment(&obj(r#"{"A":"true","Q":"false"}"#)), None);
        assert_eq!(v.decode_assignment(&obj(r#"{"A":"yes"}"#)), None);
        assert_eq!(v.decode_assignment(&obj(r#"{"A":1}"#)), None);
    }
}
