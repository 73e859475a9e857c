//! The six fixed clause-to-sentence schemes and their inverse parser.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{answer_block, EntityMap, EntityNaming, Style, ValueLabels, Verbalization, VerbalizeError};
use crate::logic::{Clause, Formula, Lit, Var};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scheme {
    Logic,
    Letter,
    Team,
    Social,
    Room,
    Door,
}

struct Pattern {
    prefix: &'static str,
    positive: &'static str,
    negative: &'static str,
    suffix: &'static str,
}

impl Scheme {
    pub const ALL: [Scheme; 6] =
        [Scheme::Logic, Scheme::Letter, Scheme::Team, Scheme::Social, Scheme::Room, Scheme::Door];

    pub fn name(self) -> &'static str {
        match self {
            Scheme::Logic => "logic",
            Scheme::Letter => "letter",
            Scheme::Team => "team",
            Scheme::Social => "social",
            Scheme::Room => "room",
            Scheme::Door => "door",
        }
    }

    pub fn true_label(self) -> &'static str {
        match self {
            Scheme::Logic => "true",
            Scheme::Letter => "has",
            Scheme::Team => "Red",
            Scheme::Social => "attends",
            Scheme::Room => "lit",
            Scheme::Door => "open",
        }
    }

    pub fn false_label(self) -> &'static str {
        match self {
            Scheme::Logic => "false",
            Scheme::Letter => "doesn't have",
            Scheme::Team => "Blue",
            Scheme::Social => "doesn't attend",
            Scheme::Room => "dark",
            Scheme::Door => "closed",
        }
    }

    pub fn preamble(self) -> &'static str {
        match self {
            Scheme::Logic => "Consider these logical relationships:",
            Scheme::Letter => "Consider these rules about who has the letter:",
            Scheme::Team => "We have team assignment rules:",
            Scheme::Social => "You're planning a party with these attendance conditions:",
            Scheme::Room => "A building has lighting rules:",
            Scheme::Door => "A facility has door coupling rules:",
        }
    }

    pub fn final_question(self) -> &'static str {
        match self {
            Scheme::Logic => "Can you assign truth values to all statements without creating a contradiction?",
            Scheme::Letter => "Is there a consistent way for people to hold or not hold the letter?",
            Scheme::Team => "Is there a valid team assignment that satisfies all constraints?",
            Scheme::Social => "Can you create a guest list that respects everyone's conditions?",
            Scheme::Room => "Can all the lighting rules be satisfied simultaneously?",
            Scheme::Door => "Is there a configuration of doors that satisfies all the rules?",
        }
    }

    pub fn naming(self) -> EntityNaming {
        match self {
            Scheme::Logic => EntityNaming::Letters,
            Scheme::Letter | Scheme::Team | Scheme::Social => EntityNaming::PersonNames,
            Scheme::Room => EntityNaming::Numbered("room".into()),
            Scheme::Door => EntityNaming::Numbered("door".into()),
        }
    }

    pub fn labels(self) -> ValueLabels {
        ValueLabels::Uniform { true_label: self.true_label().to_string(), false_label: self.false_label().to_string() }
    }

    fn pattern(self) -> Pattern {
        let (prefix, positive, negative, suffix) = match self {
            Scheme::Logic => ("Either ", "is true", "is false", " (or both)."),
            Scheme::Letter => ("Either ", "has the letter", "doesn't have the letter", " (or both)."),
            Scheme::Team => ("Either ", "is on the Red team", "is on the Blue team", "."),
            Scheme::Social => ("", "attends", "doesn't attend", " (or both)."),
            Scheme::Room => ("", "is lit", "is dark", " (or both)."),
            Scheme::Door => ("", "is open", "is closed", " (or both)."),
        };
        Pattern { prefix, positive, negative, suffix }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Scheme {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Scheme::ALL.into_iter().find(|k| k.name() == s).ok_or_else(|| format!("unknown scheme `{s}`"))
    }
}

pub fn render_clause(clause: &Clause, scheme: Scheme, entities: &EntityMap) -> String {
    let p = scheme.pattern();
    let part = |l: Lit| {
        let phrase = if l.is_positive() { p.positive } else { p.negative };
        format!("{} {}", entities.name(l.var()), phrase)
    };
    format!("{}{} or {}{}", p.prefix, part(clause.first), part(clause.second), p.suffix)
}

pub fn render_body(f: &Formula, scheme: Scheme, entities: &EntityMap) -> String {
    let mut out = String::from(scheme.preamble());
    for c in f.clauses() {
        out.push('\n');
        out.push_str(&render_clause(c, scheme, entities));
    }
    out.push_str("\n\n");
    out.push_str(scheme.final_question());
    out
}

pub fn verbalize(f: &Formula, scheme: Scheme) -> Verbalization {
    let entities = EntityMap::new(&scheme.naming(), f.num_vars());
    let body = render_body(f, scheme, &entities);
    let prompt = build_prompt(&body, scheme, &entities, &f.occurring_vars());
    Verbalization {
        id: scheme.name().to_string(),
        style: Style::Template { scheme },
        entities,
        labels: scheme.labels(),
        body,
        prompt,
        clues: Vec::new(),
    }
}

/// Body followed by the answer-format instructions; the JSON example uses
/// the first three of `shown` (normally the occurring variables).
pub fn build_prompt(body: &str, scheme: Scheme, entities: &EntityMap, shown: &[Var]) -> String {
    let (t, f) = (scheme.true_label(), scheme.false_label());
    let example: Vec<String> = shown
        .iter()
        .take(3)
        .enumerate()
        .map(|(i, &v)| format!("  \"{}\": \"{}\"", entities.name(v), if i % 2 == 0 { t } else { f }))
        .collect();
    let example = if example.is_empty() { "{}".to_string() } else { format!("{{\n{}\n}}", example.join(",\n")) };
    format!(
        "{body}\n\nThink step by step.\n\n\
         If a valid assignment exists, provide it as JSON using \"{t}\" or \"{f}\" as values.\n\
         Example format:\n{example}\n\n{}",
        answer_block()
    )
}

fn parse_literal(part: &str, pat: &Pattern, entities: &EntityMap) -> Option<Lit> {
    for (phrase, positive) in [(pat.negative, false), (pat.positive, true)] {
        if let Some(name) = part.strip_suffix(phrase).and_then(|s| s.strip_suffix(' ')) {
            if let Some(v) = entities.lookup(name) {
                return Some(Lit::new(v, positive));
            }
        }
    }
    None
}

pub fn parse_sentence(line: &str, scheme: Scheme, entities: &EntityMap) -> Result<Clause, VerbalizeError> {
    let pat = scheme.pattern();
    let unmatched = || VerbalizeError::Unmatched { line: line.to_string() };
    let inner = line.strip_prefix(pat.prefix).and_then(|s| s.strip_suffix(pat.suffix)).ok_or_else(unmatched)?;
    // entity names never contain " or ", but try every split point anyway
    for (i, _) in inner.match_indices(" or ") {
        let (a, b) = (&inner[..i], &inner[i + 4..]);
        if let (Some(x), Some(y)) = (parse_literal(a, &pat, entities), parse_literal(b, &pat, entities)) {
            return Ok(Clause::new(x, y));
        }
    }
    Err(unmatched())
}

/// Inverse of [`render_body`].
pub fn parse_body(body: &str, scheme: Scheme, entities: &EntityMap) -> Result<Vec<Clause>, VerbalizeError> {
    let mut lines = body.split('\n');
    let head = lines.next().unwrap_or_default();
    if head != scheme.preamble() {
        return Err(VerbalizeError::Unmatched { line: head.to_string() });
    }
    let mut clauses = Vec::new();
    for line in lines.by_ref() {
        if line.is_empty() {
            break;
        }
        clauses.push(parse_sentence(line, scheme, entities)?);
    }
    let rest: Vec<&str> = lines.collect();
    if rest != [scheme.final_question()] {
        return Err(VerbalizeError::Unmatched { line: rest.join("\n") });
    }
    Ok(clauses)
}
