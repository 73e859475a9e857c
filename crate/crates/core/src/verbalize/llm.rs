//! Narrative verbalization: an LLM writes one clue paragraph per clause,
//! each validated by asking the model to read the clause back.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::chat::{ChatClient, ChatError, ChatMessage, ChatRequest};
use super::{answer_block, EntityMap, Style, ValueLabels, Verbalization};
use crate::logic::{Clause, Formula, Lit, Var};
use crate::rng::child_seed;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Theme {
    Spy,
    Heist,
    Detective,
}

const SPY_ROLES: [&str; 16] = [
    "the courier",
    "the attaché",
    "the cipher clerk",
    "the handler",
    "the defector",
    "the ambassador",
    "the photographer",
    "the radio operator",
    "the diplomat",
    "the chess champion",
    "the translator",
    "the journalist",
    "the pilot",
    "the mole hunter",
    "the archivist",
    "the night porter",
];

const SPY_STATES: [(&str, &str); 6] = [
    ("is a double agent", "is loyal"),
    ("carries the microfilm", "carries nothing"),
    ("was followed", "was not followed"),
    ("knows the codeword", "does not know the codeword"),
    ("crossed the border", "stayed in the city"),
    ("is compromised", "is still trusted"),
];

const HEIST_ROLES: [&str; 16] = [
    "the safecracker",
    "the driver",
    "the hacker",
    "the lookout",
    "the forger",
    "the inside man",
    "the pickpocket",
    "the demolitions expert",
    "the con artist",
    "the fence",
    "the guard",
    "the curator",
    "the locksmith",
    "the acrobat",
    "the mastermind",
    "the getaway pilot",
];

const HEIST_STATES: [(&str, &str); 6] = [
    ("cracked the vault", "never touched the vault"),
    ("has the keycard", "lacks the keycard"),
    ("tripped the alarm", "stayed silent"),
    ("took the diamonds", "left empty-handed"),
    ("is working for the police", "is loyal to the crew"),
    ("was on the roof", "was in the van"),
];

const DETECTIVE_ROLES: [&str; 16] = [
    "the butler",
    "the maid",
    "the gardener",
    "the cook",
    "the chauffeur",
    "the heiress",
    "the colonel",
    "the professor",
    "the doctor",
    "the vicar",
    "the widow",
    "the nephew",
    "the banker",
    "the actress",
    "the nurse",
    "the secretary",
];

const DETECTIVE_STATES: [(&str, &str); 6] = [
    ("is the murderer", "is innocent"),
    ("was in the library", "was not in the library"),
    ("is lying", "is telling the truth"),
    ("has an alibi", "has no alibi"),
    ("owns the revolver", "does not own the revolver"),
    ("wrote the letter", "did not write the letter"),
];

impl Theme {
    pub const ALL: [Theme; 3] = [Theme::Spy, Theme::Heist, Theme::Detective];

    pub fn name(self) -> &'static str {
        match self {
            Theme::Spy => "spy",
            Theme::Heist => "heist",
            Theme::Detective => "detective",
        }
    }

    fn roles(self) -> &'static [&'static str] {
        match self {
            Theme::Spy => &SPY_ROLES,
            Theme::Heist => &HEIST_ROLES,
            Theme::Detective => &DETECTIVE_ROLES,
        }
    }

    fn states(self) -> &'static [(&'static str, &'static str)] {
        match self {
            Theme::Spy => &SPY_STATES,
            Theme::Heist => &HEIST_STATES,
            Theme::Detective => &DETECTIVE_STATES,
        }
    }

    /// Role for variable `v`; roles repeat with a `#k` suffix past the table.
    pub fn entity_name(self, v: Var) -> String {
        let roles = self.roles();
        let i = v.index();
        match i / roles.len() {
            0 => roles[i].to_string(),
            k => format!("{} #{}", roles[i % roles.len()], k + 1),
        }
    }

    /// `(true_desc, false_desc)` for variable `v`.
    pub fn descriptions(self, v: Var) -> (&'static str, &'static str) {
        let states = self.states();
        states[v.index() % states.len()]
    }

    pub fn statement(self, lit: Lit) -> String {
        let (t, f) = self.descriptions(lit.var());
        format!("{} {}", self.entity_name(lit.var()), if lit.is_positive() { t } else { f })
    }

    pub fn entity_map(self, num_vars: u32) -> EntityMap {
        EntityMap::from_names((0..num_vars).map(|i| self.entity_name(Var(i))).collect())
            .expect("theme names are distinct")
    }

    pub fn labels(self, num_vars: u32) -> ValueLabels {
        ValueLabels::PerEntity {
            labels: (0..num_vars)
                .map(|i| {
                    let (t, f) = self.descriptions(Var(i));
                    (t.to_string(), f.to_string())
                })
                .collect(),
        }
    }
}

impl fmt::Display for Theme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Theme {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Theme::ALL.into_iter().find(|t| t.name() == s).ok_or_else(|| format!("unknown theme `{s}`"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum ClueStatus {
    FirstPass,
    /// Accepted after `failures` rejected attempts.
    Retried {
        failures: u32,
    },
    Fallback,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClueRecord {
    pub clause_index: usize,
    pub paragraph: String,
    #[serde(flatten)]
    pub status: ClueStatus,
    /// Entities and stated polarities read back from the accepted paragraph.
    #[serde(default)]
    pub extracted: Vec<(String, bool)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Story {
    pub intro: String,
    pub clues: Vec<ClueRecord>,
}

impl Story {
    pub fn text(&self) -> String {
        let mut parts = vec![self.intro.as_str()];
        parts.extend(self.clues.iter().map(|c| c.paragraph.as_str()));
        parts.join("\n\n")
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StoryOptions {
    /// Generation attempts per clue before falling back.
    pub attempts: u32,
    /// Say "spy story"/"heist story" instead of always "detective story".
    pub substitute_theme: bool,
    pub max_tokens: Option<u32>,
}

impl Default for StoryOptions {
    fn default() -> Self {
        StoryOptions { attempts: 3, substitute_theme: true, max_tokens: None }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum StoryError {
    #[error("chat client failed while writing the introduction: {0}")]
    Intro(ChatError),
    #[error("chat client failed on clause {clause}: {source}")]
    Clue { clause: usize, source: ChatError },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Validation {
    pub ok: bool,
    /// `None` when the extraction replies were malformed.
    pub recovered: Option<Clause>,
    pub extracted: Vec<(String, bool)>,
}

fn bullet_list(names: &[String]) -> String {
    names.iter().map(|n| format!("- {n}")).collect::<Vec<_>>().join("\n")
}

fn json_array(names: &[String]) -> String {
    let quoted: Vec<String> = names.iter().map(|n| serde_json::to_string(n).expect("string serializes")).collect();
    format!("[{}]", quoted.join(", "))
}

pub fn intro_prompt(story_word: &str, names: &[String]) -> String {
    format!(
        "You are a mystery story writer. Create a short introduction for a {story_word} story.\n\n\
         CHARACTERS/OBJECTS in this story:\n{}\n\n\
         Requirements:\n\
         - Set the scene for a mystery with clues to discover\n\
         - Briefly introduce each character/object naturally in the narrative\n\
         - Do NOT mention any specific rules or relationships yet\n\
         - Keep it brief and atmospheric\n\n\
         Write only the introduction paragraph.",
        bullet_list(names)
    )
}

pub fn clue_prompt(index: usize, total: usize, statement_a: &str, statement_b: &str) -> String {
    format!(
        "Write clue {index}/{total} for our mystery story.\n\n\
         This clue must express that AT LEAST ONE of these statements is true:\n\
         - Statement A: {statement_a}\n\
         - Statement B: {statement_b}\n\n\
         (It's possible both are true, but at least one MUST be true.)\n\n\
         Write 2-3 sentences that naturally convey this logical rule through detective reasoning, \
         witness testimony, or evidence analysis. Be creative but ensure the logic is clear.\n\n\
         Write ONLY the clue paragraph:"
    )
}

pub fn entity_prompt(paragraph: &str, available: &[String]) -> String {
    format!(
        "From this clue, identify the TWO main entities being discussed.\n\n\
         CLUE: \"{paragraph}\"\n\n\
         AVAILABLE ENTITIES:\n{}\n\n\
         Which two entities does this clue primarily discuss?\n\
         Respond with ONLY a JSON array of exactly 2 entity names: [\"entity1\", \"entity2\"]",
        json_array(available)
    )
}

pub fn state_prompt(entity: &str, paragraph: &str, true_desc: &str, false_desc: &str) -> String {
    format!(
        "In this clue, what is stated about {entity}?\n\n\
         CLUE: \"{paragraph}\"\n\n\
         The clue says that {entity}:\n\
         A) {true_desc}\n\
         B) {false_desc}\n\n\
         Which state does the clue indicate?\n\
         Answer with ONLY \"A\" or \"B\"."
    )
}

pub fn fallback_sentence(theme: Theme, clause: &Clause) -> String {
    format!("Either {}, or {} (or both).", theme.statement(clause.first), theme.statement(clause.second))
}

fn parse_entity_reply(reply: &str, entities: &EntityMap, available: &[Var]) -> Option<[Var; 2]> {
    let start = reply.find('[')?;
    let end = reply.rfind(']')?;
    let names: Vec<String> = serde_json::from_str(reply.get(start..=end)?).ok()?;
    let [a, b] = names.as_slice() else {
        return None;
    };
    let resolve = |n: &str| entities.lookup(n.trim()).filter(|v| available.contains(v));
    Some([resolve(a)?, resolve(b)?])
}

fn parse_state_reply(reply: &str) -> Option<bool> {
    let trimmed =
        reply.trim().trim_matches(|c: char| c == '"' || c == '\'' || c == '.' || c == ')' || c.is_whitespace());
    match trimmed {
        "A" => Some(true),
        "B" => Some(false),
        _ => None,
    }
}

struct Seeds {
    base: u64,
    next: u64,
}

impl Seeds {
    fn take(&mut self) -> u64 {
        self.next += 1;
        child_seed(self.base, self.next - 1)
    }
}

#[allow(clippy::too_many_arguments)]
fn validate_with(
    paragraph: &str,
    clause: &Clause,
    theme: Theme,
    entities: &EntityMap,
    available: &[Var],
    client: &dyn ChatClient,
    seeds: &mut Seeds,
    max_tokens: Option<u32>,
) -> Result<Validation, ChatError> {
    let failed = |extracted| Validation { ok: false, recovered: None, extracted };
    let names: Vec<String> = available.iter().map(|&v| entities.name(v).to_string()).collect();
    let request =
        ChatRequest::single(entity_prompt(paragraph, &names)).with_seed(seeds.take()).with_max_tokens(max_tokens);
    let reply = client.send(&request)?;
    if reply.truncated {
        return Ok(failed(Vec::new()));
    }
    let Some(pair) = parse_entity_reply(&reply.text, entities, available) else {
        return Ok(failed(Vec::new()));
    };
    let mut lits = Vec::with_capacity(2);
    let mut extracted = Vec::with_capacity(2);
    for v in pair {
        let (t, f) = theme.descriptions(v);
        let request = ChatRequest::single(state_prompt(entities.name(v), paragraph, t, f))
            .with_seed(seeds.take())
            .with_max_tokens(max_tokens);
        let reply = client.send(&request)?;
        let state = if reply.truncated { None } else { parse_state_reply(&reply.text) };
        let Some(positive) = state else {
            return Ok(failed(extracted));
        };
        extracted.push((entities.name(v).to_string(), positive));
        lits.push(Lit::new(v, positive));
    }
    let recovered = Clause::new(lits[0], lits[1]);
    Ok(Validation { ok: recovered.canonical() == clause.canonical(), recovered: Some(recovered), extracted })
}

/// Reads a clause back from `paragraph` via the two extraction prompts.
pub fn validate_clue(
    paragraph: &str,
    clause: &Clause,
    theme: Theme,
    entities: &EntityMap,
    available: &[Var],
    client: &dyn ChatClient,
    seed: u64,
) -> Result<Validation, ChatError> {
    let mut seeds = Seeds { base: seed, next: 0 };
    validate_with(paragraph, clause, theme, entities, available, client, &mut seeds, None)
}

pub fn generate_story(
    f: &Formula,
    theme: Theme,
    client: &dyn ChatClient,
    seed: u64,
    opts: &StoryOptions,
) -> Result<Story, StoryError> {
    let entities = theme.entity_map(f.num_vars());
    let available = f.occurring_vars();
    let names: Vec<String> = available.iter().map(|&v| entities.name(v).to_string()).collect();
    let story_word = if opts.substitute_theme { theme.name() } else { "detective" };
    let mut seeds = Seeds { base: seed, next: 0 };

    let mut conversation = vec![ChatMessage::user(intro_prompt(story_word, &names))];
    let request = |conv: &[ChatMessage], seeds: &mut Seeds| {
        ChatRequest::new(conv.to_vec()).with_seed(seeds.take()).with_max_tokens(opts.max_tokens)
    };
    let intro = client.send(&request(&conversation, &mut seeds)).map_err(StoryError::Intro)?.text;
    let intro = intro.trim().to_string();
    conversation.push(ChatMessage::assistant(intro.clone()));

    let total = f.num_clauses();
    let mut clues = Vec::with_capacity(total);
    for (i, clause) in f.clauses().iter().enumerate() {
        let err = |source| StoryError::Clue { clause: i, source };
        let prompt = clue_prompt(i + 1, total, &theme.statement(clause.first), &theme.statement(clause.second));
        conversation.push(ChatMessage::user(prompt));
        let mut accepted = None;
        for attempt in 0..opts.attempts {
            let reply = client.send(&request(&conversation, &mut seeds)).map_err(err)?;
            let paragraph = reply.text.trim().to_string();
            if paragraph.is_empty() || reply.truncated {
                continue;
            }
            let v =
                validate_with(&paragraph, clause, theme, &entities, &available, client, &mut seeds, opts.max_tokens)
                    .map_err(err)?;
            if v.ok {
                let status =
                    if attempt == 0 { ClueStatus::FirstPass } else { ClueStatus::Retried { failures: attempt } };
                accepted = Some(ClueRecord { clause_index: i, paragraph, status, extracted: v.extracted });
                break;
            }
            log::debug!("clue {} attempt {} rejected", i + 1, attempt + 1);
        }
        let record = accepted.unwrap_or_else(|| ClueRecord {
            clause_index: i,
            paragraph: fallback_sentence(theme, clause),
            status: ClueStatus::Fallback,
            extracted: Vec::new(),
        });
        conversation.push(ChatMessage::assistant(record.paragraph.clone()));
        clues.push(record);
    }
    Ok(Story { intro, clues })
}

pub fn build_llm_prompt(story: &str, theme: Theme, f: &Formula) -> String {
    let legend: Vec<String> = f
        .occurring_vars()
        .into_iter()
        .map(|v| {
            let (t, fd) = theme.descriptions(v);
            format!("  - \"{}\": \"{t}\" or \"{fd}\"", theme.entity_name(v))
        })
        .collect();
    format!(
        "{story}\n\nThink step by step.\n\n\
         If a valid assignment exists, provide it as JSON with one of the allowed values for each entity.\n\n\
         Entities and their possible values:\n{}\n\n\
         Example JSON format:\n{{\n  \"entity_name\": \"value\"\n}}\n\n{}",
        legend.join("\n"),
        answer_block()
    )
}

/// Story generation plus prompt assembly.
pub fn verbalize_story(
    f: &Formula,
    theme: Theme,
    client: &dyn ChatClient,
    seed: u64,
    opts: &StoryOptions,
) -> Result<Verbalization, StoryError> {
    let story = generate_story(f, theme, client, seed, opts)?;
    let body = story.text();
    let prompt = build_llm_prompt(&body, theme, f);
    Ok(Verbalization {
        id: theme.name().to_string(),
        style: Style::Story { theme },
        entities: theme.entity_map(f.num_vars()),
        labels: theme.labels(f.num_vars()),
        body,
        prompt,
        clues: story.clues,
    })
}
