use std::io::{BufRead, BufReader, Write};
use std::process::{Child, ChildStdin, ChildStdout, Command, Stdio};
use std::time::Duration;

use serde_json::Value;

use super::protocol::{self, EncodeRequest};
use super::{cache_key, mock_encode, BackendKind, BackendSpec, EmbeddingCache, EncoderError};

/// A source of raw vectors. The gateway handles caching and validation.
pub trait Backend: Send {
    fn encode(&mut self, texts: &[String]) -> Result<Vec<Vec<f64>>, EncoderError>;
}

pub(super) fn connect(spec: &BackendSpec) -> Result<Box<dyn Backend>, EncoderError> {
    Ok(match &spec.kind {
        BackendKind::CacheFile { path } => Box::new(CacheFile {
            encoder_id: spec.encoder_id.clone(),
            store: EmbeddingCache::load(path)?,
        }),
        BackendKind::Subprocess { command } => Box::new(Subprocess::spawn(command)?),
        BackendKind::Http { url } => Box::new(Http::new(url)),
        BackendKind::Mock { dim, seed } => Box::new(Mock { dim: *dim, seed: *seed }),
    })
}

struct CacheFile {
    encoder_id: String,
    store: EmbeddingCache,
}

impl Backend for CacheFile {
    fn encode(&mut self, texts: &[String]) -> Result<Vec<Vec<f64>>, EncoderError> {
        texts
            .iter()
            .map(|t| {
                self.store
                    .get(&cache_key(&self.encoder_id, t))
                    .map(<[f64]>::to_vec)
                    .ok_or_else(|| EncoderError::CacheMiss { text: t.clone() })
            })
            .collect()
    }
}

struct Mock {
    dim: usize,
    seed: u64,
}

impl Backend for Mock {
    fn encode(&mut self, texts: &[String]) -> Result<Vec<Vec<f64>>, EncoderError> {
        Ok(mock_encode(texts, self.dim, self.seed))
    }
}

struct Subprocess {
    child: Child,
    stdin: ChildStdin,
    stdout: BufReader<ChildStdout>,
    next_id: u64,
}

impl Subprocess {
    fn spawn(command: &[String]) -> Result<Self, EncoderError> {
        let mut child = Command::new(&command[0])
            .args(&command[1..])
            .stdin(Stdio::piped())
            .stdout(Stdio::piped())
            .stderr(Stdio::inherit())
            .spawn()
            .map_err(|e| EncoderError::BackendUnavailable(format!("{}: {e}", command[0])))?;
        let stdin = child.stdin.take().expect("piped stdin");
        let stdout = BufReader::new(child.stdout.take().expect("piped stdout"));
        let mut p = Subprocess {
            child,
            stdin,
            stdout,
            next_id: 0,
        };
        let reply = p.exchange(&protocol::info_request())?;
        protocol::parse_info_response(&reply)?;
        Ok(p)
    }

    fn exchange(&mut self, request: &impl serde::Serialize) -> Result<Value, EncoderError> {
        let gone = |e: std::io::Error| EncoderError::BackendUnavailable(format!("backend process: {e}"));
        let mut line = serde_json::to_vec(request).expect("request serializes");
        line.push(b'\n');
        self.stdin.write_all(&line).map_err(gone)?;
        self.stdin.flush().map_err(gone)?;
        let mut reply = String::new();
        if self.stdout.read_line(&mut reply).map_err(gone)? == 0 {
            return Err(EncoderError::BackendUnavailable("backend process closed its output".into()));
        }
        serde_json::from_str(&reply)
            .map_err(|e| EncoderError::ProtocolError(format!("unparseable reply {:?}: {e}", reply.trim_end())))
    }
}

impl Backend for Subprocess {
    fn encode(&mut self, texts: &[String]) -> Result<Vec<Vec<f64>>, EncoderError> {
        let id = self.next_id.to_string();
        self.next_id += 1;
        let reply = self.exchange(&EncodeRequest::new(&id, texts))?;
        protocol::parse_encode_response(&reply, &id, texts.len())
    }
}

impl Drop for Subprocess {
    fn drop(&mut self) {
        let _ = self.child.kill();
        let _ = self.child.wait();
    }
}

struct Http {
    agent: ureq::Agent,
    url: String,
    next_id: u64,
}

impl Http {
    fn new(url: &str) -> Self {
        let agent = ureq::Agent::config_builder()
            .http_status_as_error(false)
            .timeout_global(Some(Duration::from_secs(600)))
            .build()
            .into();
        Http {
            agent,
            url: url.to_string(),
            next_id: 0,
        }
    }
}

impl Backend for Http {
    fn encode(&mut self, texts: &[String]) -> Result<Vec<Vec<f64>>, EncoderError> {
        let id = self.next_id.to_string();
        self.next_id += 1;
        let mut resp = self
            .agent
            .post(&self.url)
            .send_json(EncodeRequest::new(&id, texts))
            .map_err(|e| EncoderError::BackendUnavailable(e.to_string()))?;
        let status = resp.status();
        let reply: Value = resp.body_mut().read_json().map_err(|e| {
            if status.is_success() {
                EncoderError::ProtocolError(format!("unparseable reply body: {e}"))
            } else {
                EncoderError::BackendUnavailable(format!("HTTP {status}"))
            }
        })?;
        protocol::parse_encode_response(&reply, &id, texts.len())
    }
}
