//! Offline stand-in for a story-writing LLM.

use std::collections::HashMap;
use std::sync::Mutex;

use super::chat::{ChatClient, ChatError, ChatReply, ChatRequest};

#[derive(Default)]
struct WriterState {
    /// paragraph → (statement A, statement B)
    written: HashMap<String, (String, String)>,
    /// 1-based clue number → remaining garbage replies
    failures: HashMap<usize, u32>,
}

/// Answers the story prompts faithfully: each clue restates its two
/// statements, and the extraction prompts are answered from what was written.
#[derive(Default)]
pub struct StoryWriter {
    state: Mutex<WriterState>,
    swap_states: bool,
}

fn between<'a>(text: &'a str, start: &str, end: &str) -> Option<&'a str> {
    let from = text.find(start)? + start.len();
    let len = text[from..].find(end)?;
    Some(&text[from..from + len])
}

fn line_after<'a>(text: &'a str, marker: &str) -> Option<&'a str> {
    text.lines().find_map(|l| l.strip_prefix(marker))
}

impl StoryWriter {
    pub fn new() -> Self {
        Self::default()
    }

    /// The first `times` attempts at clue `clue` (1-based) come back as
    /// paragraphs that mention nobody.
    pub fn failing_clue(self, clue: usize, times: u32) -> Self {
        self.state.lock().unwrap().failures.insert(clue, times);
        self
    }

    /// State extraction answers the opposite option.
    pub fn swapping_states(mut self) -> Self {
        self.swap_states = true;
        self
    }

    fn write_clue(&self, prompt: &str) -> Option<String> {
        let number: usize = between(prompt, "Write clue ", "/")?.parse().ok()?;
        let a = line_after(prompt, "- Statement A: ")?.to_string();
        let b = line_after(prompt, "- Statement B: ")?.to_string();
        let mut state = self.state.lock().unwrap();
        if let Some(left) = state.failures.get_mut(&number).filter(|n| **n > 0) {
            *left -= 1;
            return Some("The rain kept falling and nobody said a word.".to_string());
        }
        let paragraph = format!(
            "Clue {number}: one witness swears that {a}. Another insists that {b}. \
             At least one of them must be right."
        );
        state.written.insert(paragraph.clone(), (a, b));
        Some(paragraph)
    }

    fn name_entities(&self, prompt: &str) -> Option<String> {
        let clue = between(prompt, "CLUE: \"", "\"\n\nAVAILABLE ENTITIES:")?;
        let available: Vec<String> = serde_json::from_str(between(prompt, "AVAILABLE ENTITIES:\n", "\n\n")?).ok()?;
        let (a, b) = self.state.lock().unwrap().written.get(clue)?.clone();
        let subject = |statement: &str| {
            available.iter().filter(|n| statement.starts_with(&format!("{n} "))).max_by_key(|n| n.len()).cloned()
        };
        serde_json::to_string(&[subject(&a)?, subject(&b)?]).ok()
    }

    fn pick_state(&self, prompt: &str) -> Option<String> {
        let entity = between(prompt, "In this clue, what is stated about ", "?\n\nCLUE")?;
        let clue = between(prompt, "CLUE: \"", "\"\n\nThe clue says")?;
        let option_a = line_after(prompt, "A) ")?;
        let option_b = line_after(prompt, "B) ")?;
        let (a, b) = self.state.lock().unwrap().written.get(clue)?.clone();
        let prefix = format!("{entity} ");
        for statement in [a, b] {
            let Some(rest) = statement.strip_prefix(&prefix) else { continue };
            let positive = if rest == option_a {
                true
            } else if rest == option_b {
                false
            } else {
                continue;
            };
            return Some(if positive != self.swap_states { "A" } else { "B" }.to_string());
        }
        None
    }
}

impl ChatClient for StoryWriter {
    fn send(&self, request: &ChatRequest) -> Result<ChatReply, ChatError> {
        let prompt = request.last_user();
        let text = if prompt.starts_with("You are a mystery story writer") {
            "Fog pressed against the windows while everyone waited for the first clue.".to_string()
        } else if prompt.starts_with("Write clue ") {
            self.write_clue(prompt).unwrap_or_default()
        } else if prompt.starts_with("From this clue") {
            self.name_entities(prompt).unwrap_or_else(|| "[]".to_string())
        } else if prompt.starts_with("In this clue") {
            self.pick_state(prompt).unwrap_or_else(|| "I cannot tell.".to_string())
        } else {
            return Err(ChatError::Malformed(format!("unexpected prompt: {prompt:.40}")));
        };
        Ok(ChatReply::complete(text))
    }
}
