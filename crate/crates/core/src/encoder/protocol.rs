//! Newline-delimited JSON wire protocol spoken by encoder backends.
//!
//! ```text
//! request:   {"id": "<string>", "op": "encode", "texts": ["...", ...]}
//! response:  {"id": "<string>", "dim": <int>, "vectors": [[...], ...]}
//!            {"id": "<string>", "error": "<msg>"}
//! handshake: {"op": "info"} -> {"name": "<encoder_id>", "dim": <int>}
//! ```
//!
//! Over HTTP the same objects travel as POST bodies and response bodies.

use std::io::{self, BufRead, Write};

use serde::Serialize;
use serde_json::{json, Value};

use super::EncoderError;

#[derive(Serialize)]
pub struct EncodeRequest<'a> {
    pub id: &'a str,
    pub op: &'static str,
    pub texts: &'a [String],
}

impl<'a> EncodeRequest<'a> {
    pub fn new(id: &'a str, texts: &'a [String]) -> Self {
        EncodeRequest { id, op: "encode", texts }
    }
}

/// Encoding callback behind a served backend.
pub type EncodeFn<'a> = dyn FnMut(&[String]) -> Result<Vec<Vec<f64>>, String> + 'a;

pub fn info_request() -> Value {
    json!({"op": "info"})
}

fn error_reply(id: &str, msg: impl Into<String>) -> Value {
    json!({"id": id, "error": msg.into()})
}

/// Answers one request line. Never fails: malformed input yields an error object.
pub fn handle_line(
    line: &str,
    name: &str,
    dim: usize,
    encode: &mut EncodeFn,
) -> Value {
    let request: Value = match serde_json::from_str(line) {
        Ok(v) => v,
        Err(e) => return error_reply("", format!("malformed request: {e}")),
    };
    let id = request.get("id").and_then(Value::as_str).unwrap_or("");
    match request.get("op").and_then(Value::as_str) {
        Some("info") => json!({"name": name, "dim": dim}),
        Some("encode") => {
            let texts: Option<Vec<String>> = request
                .get("texts")
                .and_then(Value::as_array)
                .and_then(|a| a.iter().map(|t| t.as_str().map(str::to_string)).collect());
            let Some(texts) = texts else {
                return error_reply(id, "encode request needs a \"texts\" array of strings");
            };
            match encode(&texts) {
                Ok(vectors) => json!({"id": id, "dim": dim, "vectors": vectors}),
                Err(msg) => error_reply(id, msg),
            }
        }
        Some(other) => error_reply(id, format!("unknown op {other:?}")),
        None => error_reply(id, "request has no \"op\""),
    }
}

/// Serves requests line by line until EOF.
pub fn serve<R: BufRead, W: Write>(
    reader: R,
    mut writer: W,
    name: &str,
    dim: usize,
    mut encode: impl FnMut(&[String]) -> Result<Vec<Vec<f64>>, String>,
) -> io::Result<()> {
    for line in reader.lines() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let reply = handle_line(&line, name, dim, &mut encode);
        serde_json::to_writer(&mut writer, &reply)?;
        writer.write_all(b"\n")?;
        writer.flush()?;
    }
    Ok(())
}

/// Extracts `(name, dim)` from a handshake reply.
pub fn parse_info_response(reply: &Value) -> Result<(String, usize), EncoderError> {
    if let Some(msg) = reply.get("error").and_then(Value::as_str) {
        return Err(EncoderError::BackendUnavailable(msg.to_string()));
    }
    let name = reply.get("name").and_then(Value::as_str);
    let dim = reply.get("dim").and_then(Value::as_u64);
    match (name, dim) {
        (Some(name), Some(dim)) if dim > 0 => Ok((name.to_string(), dim as usize)),
        _ => Err(EncoderError::ProtocolError(format!("bad handshake reply {reply}"))),
    }
}

/// Validates an encode reply against the request it answers.
pub fn parse_encode_response(
    reply: &Value,
    expected_id: &str,
    n_texts: usize,
) -> Result<Vec<Vec<f64>>, EncoderError> {
    let perr = |m: String| EncoderError::ProtocolError(m);
    let id = reply.get("id").and_then(Value::as_str);
    if let Some(msg) = reply.get("error") {
        let msg = msg.as_str().map(str::to_string).unwrap_or_else(|| msg.to_string());
        return Err(EncoderError::BackendUnavailable(msg));
    }
    if id != Some(expected_id) {
        return Err(perr(format!("reply id {id:?} does not match request {expected_id:?}")));
    }
    let dim = reply
        .get("dim")
        .and_then(Value::as_u64)
        .ok_or_else(|| perr("reply has no integer \"dim\"".into()))? as usize;
    let vectors = reply
        .get("vectors")
        .and_then(Value::as_array)
        .ok_or_else(|| perr("reply has no \"vectors\" array".into()))?;
    if vectors.len() != n_texts {
        return Err(perr(format!("expected {n_texts} vectors, got {}", vectors.len())));
    }
    vectors
        .iter()
        .enumerate()
        .map(|(i, v)| {
            let values: Option<Vec<f64>> =
                v.as_array().and_then(|a| a.iter().map(Value::as_f64).collect());
            match values {
                Some(values) if values.len() == dim => Ok(values),
                Some(values) => Err(perr(format!(
                    "vector {i} has {} components, reply declares dim {dim}",
                    values.len()
                ))),
                None => Err(perr(format!("vector {i} is not an array of numbers"))),
            }
        })
        .collect()
}
