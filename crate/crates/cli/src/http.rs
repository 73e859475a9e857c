//! OpenAI-compatible chat-completions client.

use std::time::Duration;

use sat2probe::verbalize::{ChatClient, ChatError, ChatReply, ChatRequest};
use serde_json::{json, Value};

pub struct HttpClient {
    agent: ureq::Agent,
    url: String,
    api_key: Option<String>,
    model: String,
}

impl HttpClient {
    pub fn new(base_url: &str, api_key: Option<String>, model: &str, timeout: Duration) -> Self {
        let agent =
            ureq::Agent::config_builder().timeout_global(Some(timeout)).http_status_as_error(false).build().into();
        HttpClient {
            agent,
            url: format!("{}/chat/completions", base_url.trim_end_matches('/')),
            api_key,
            model: model.to_string(),
        }
    }
}

pub fn request_body(model: &str, request: &ChatRequest) -> Value {
    let mut body = json!({ "model": model, "messages": request.messages });
    if let Some(seed) = request.seed {
        body["seed"] = json!(seed);
    }
    if let Some(max) = request.max_tokens {
        body["max_tokens"] = json!(max);
    }
    body
}

pub fn parse_reply(body: &str) -> Result<ChatReply, ChatError> {
    let v: Value = serde_json::from_str(body).map_err(|e| ChatError::Malformed(e.to_string()))?;
    let choice = v["choices"].get(0).ok_or_else(|| ChatError::Malformed("no choices".into()))?;
    let text = choice["message"]["content"].as_str().unwrap_or_default().to_string();
    Ok(ChatReply { text, truncated: choice["finish_reason"] == "length" })
}

impl ChatClient for HttpClient {
    fn send(&self, request: &ChatRequest) -> Result<ChatReply, ChatError> {
        let body = request_body(&self.model, request).to_string();
        let mut req = self.agent.post(&self.url).header("Content-Type", "application/json");
        if let Some(key) = &self.api_key {
            req = req.header("Authorization", format!("Bearer {key}"));
        }
        let mut resp = req.send(body.as_str()).map_err(|e| ChatError::Transport(e.to_string()))?;
        let status = resp.status().as_u16();
        let text = resp.body_mut().read_to_string().map_err(|e| ChatError::Transport(e.to_string()))?;
        if !(200..300).contains(&status) {
            return Err(ChatError::Http { status, body: text });
        }
        parse_reply(&text)
    }
}
