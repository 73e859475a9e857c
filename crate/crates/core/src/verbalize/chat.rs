//! Chat-completion abstraction shared by the story generator and the
//! evaluation runner.

use std::io::Write;
use std::sync::Mutex;
use std::thread;
use std::time::Duration;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Role {
    System,
    User,
    Assistant,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChatMessage {
    pub role: Role,
    pub content: String,
}

impl ChatMessage {
    pub fn user(content: impl Into<String>) -> Self {
        ChatMessage { role: Role::User, content: content.into() }
    }

    pub fn assistant(content: impl Into<String>) -> Self {
        ChatMessage { role: Role::Assistant, content: content.into() }
    }

    pub fn system(content: impl Into<String>) -> Self {
        ChatMessage { role: Role::System, content: content.into() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChatRequest {
    pub messages: Vec<ChatMessage>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_tokens: Option<u32>,
}

impl ChatRequest {
    pub fn new(messages: Vec<ChatMessage>) -> Self {
        ChatRequest { messages, seed: None, max_tokens: None }
    }

    pub fn single(prompt: impl Into<String>) -> Self {
        Self::new(vec![ChatMessage::user(prompt)])
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }

    pub fn with_max_tokens(mut self, max_tokens: Option<u32>) -> Self {
        self.max_tokens = max_tokens;
        self
    }

    pub fn last_user(&self) -> &str {
        self.messages.iter().rev().find(|m| m.role == Role::User).map(|m| m.content.as_str()).unwrap_or("")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChatReply {
    pub text: String,
    /// The reply stopped at the output-token budget.
    #[serde(default)]
    pub truncated: bool,
}

impl ChatReply {
    pub fn complete(text: impl Into<String>) -> Self {
        ChatReply { text: text.into(), truncated: false }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ChatError {
    #[error("transport error: {0}")]
    Transport(String),
    #[error("endpoint returned HTTP {status}: {body}")]
    Http { status: u16, body: String },
    #[error("malformed reply: {0}")]
    Malformed(String),
}

impl ChatError {
    /// Worth another attempt at the transport level.
    pub fn is_transient(&self) -> bool {
        match self {
            ChatError::Transport(_) => true,
            ChatError::Http { status, .. } => *status == 429 || *status >= 500,
            ChatError::Malformed(_) => false,
        }
    }
}

pub trait ChatClient: Send + Sync {
    fn send(&self, request: &ChatRequest) -> Result<ChatReply, ChatError>;
}

impl<C: ChatClient + ?Sized> ChatClient for &C {
    fn send(&self, request: &ChatRequest) -> Result<ChatReply, ChatError> {
        (**self).send(request)
    }
}

impl<C: ChatClient + ?Sized> ChatClient for Box<C> {
    fn send(&self, request: &ChatRequest) -> Result<ChatReply, ChatError> {
        (**self).send(request)
    }
}

impl<C: ChatClient + ?Sized> ChatClient for std::sync::Arc<C> {
    fn send(&self, request: &ChatRequest) -> Result<ChatReply, ChatError> {
        (**self).send(request)
    }
}

/// Client backed by a closure.
pub struct FnClient<F>(pub F);

impl<F> ChatClient for FnClient<F>
where
    F: Fn(&ChatRequest) -> Result<ChatReply, ChatError> + Send + Sync,
{
    fn send(&self, request: &ChatRequest) -> Result<ChatReply, ChatError> {
        (self.0)(request)
    }
}

/// Retries transient transport failures with exponential backoff.
pub struct RetryingClient<C> {
    inner: C,
    attempts: u32,
    backoff: Duration,
}

impl<C: ChatClient> RetryingClient<C> {
    pub fn new(inner: C, attempts: u32, backoff: Duration) -> Self {
        RetryingClient { inner, attempts: attempts.max(1), backoff }
    }
}

impl<C: ChatClient> ChatClient for RetryingClient<C> {
    fn send(&self, request: &ChatRequest) -> Result<ChatReply, ChatError> {
        let mut delay = self.backoff;
        let mut attempt = 1;
        loop {
            match self.inner.send(request) {
                Err(e) if e.is_transient() && attempt < self.attempts => {
                    log::warn!("chat attempt {attempt}/{} failed: {e}", self.attempts);
                    thread::sleep(delay);
                    delay *= 2;
                    attempt += 1;
                }
                other => return other,
            }
        }
    }
}

#[derive(Serialize)]
struct LogLine<'a> {
    request: &'a ChatRequest,
    #[serde(skip_serializing_if = "Option::is_none")]
    reply: Option<&'a ChatReply>,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<String>,
}

/// Appends every exchange as one JSON line to `sink`.
pub struct LoggingClient<C> {
    inner: C,
    sink: Mutex<Box<dyn Write + Send>>,
}

impl<C: ChatClient> LoggingClient<C> {
    pub fn new(inner: C, sink: Box<dyn Write + Send>) -> Self {
        LoggingClient { inner, sink: Mutex::new(sink) }
    }
}

impl<C: ChatClient> ChatClient for LoggingClient<C> {
    fn send(&self, request: &ChatRequest) -> Result<ChatReply, ChatError> {
        let result = self.inner.send(request);
        let line =
            LogLine { request, reply: result.as_ref().ok(), error: result.as_ref().err().map(ToString::to_string) };
        let mut sink = self.sink.lock().unwrap_or_else(|e| e.into_inner());
        let written = serde_json::to_writer(&mut *sink, &line)
            .map_err(std::io::Error::from)
            .and_then(|_| sink.write_all(b"\n"))
            .and_then(|_| sink.flush());
        if let Err(e) = written {
            log::error!("could not write chat log: {e}");
        }
        result
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::sync::atomic::{AtomicU32, Ordering};
    use std::sync::Arc;

    #[derive(Clone, Default)]
    struct Shared(Arc<Mutex<Vec<u8>>>);

    impl Write for Shared {
        fn write(&mut self, buf: &[u8]) -> std::io::Result<usize> {
            self.0.lock().unwrap().extend_from_slice(buf);
            Ok(buf.len())
        }

        fn flush(&mut self) -> std::io::Result<()> {
            Ok(())
        }
    }

    #[test]
    fn retries_only_transient_errors() {
        let calls = AtomicU32::new(0);
        let flaky = FnClient(|_: &ChatRequest| {
            if calls.fetch_add(1, Ordering::SeqCst) < 2 {
                Err(ChatError::Http { status: 503, body: String::new() })
            } else {
                Ok(ChatReply::complete("ok"))
            }
        });
        let client = RetryingClient::new(&flaky, 3, Duration::ZERO);
        assert_eq!(client.send(&ChatRequest::single("hi")).unwrap().text, "ok");
        assert_eq!(calls.load(Ordering::SeqCst), 3);

        let bad = FnClient(|_: &ChatRequest| Err(ChatError::Http { status: 400, body: "no".into() }));
        let calls_before = calls.load(Ordering::SeqCst);
        assert!(RetryingClient::new(&bad, 5, Duration::ZERO).send(&ChatRequest::single("x")).is_err());
        assert_eq!(calls.load(Ordering::SeqCst), calls_before);
    }

    #[test]
    fn logging_writes_jsonl() {
        let buf = Shared::default();
        let client = LoggingClient::new(
            FnClient(|r: &ChatRequest| Ok(ChatReply::complete(r.last_user().to_uppercase()))),
            Box::new(buf.clone()),
        );
        client.send(&ChatRequest::single("a")).unwrap();
        client.send(&ChatRequest::single("b").with_seed(4)).unwrap();
        let text = String::from_utf8(buf.0.lock().unwrap().clone()).unwrap();
        let lines: Vec<serde_json::Value> = text.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
        assert_eq!(lines.len(), 2);
        assert_eq!(lines[1]["reply"]["text"], "B");
        assert_eq!(lines[1]["request"]["seed"], 4);
    }
}
