//! Uniform embedding interface over external encoder backends.
//!
//! A [`Gateway`] sends texts to one backend in batches, checks the replies,
//! and stores every vector in a content-addressed [`EmbeddingCache`] shared
//! across gateways. Similarity is plain cosine in `f64`.

mod backend;
mod cache;
mod mock;
pub mod protocol;

use std::collections::{HashMap, HashSet};
use std::path::PathBuf;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::{Arc, Mutex};

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use backend::Backend;
pub use cache::{cache_key, EmbeddingCache};
pub use mock::mock_encode;

#[derive(Debug, Error)]
pub enum EncoderError {
    #[error("backend unavailable: {0}")]
    BackendUnavailable(String),
    #[error("protocol error: {0}")]
    ProtocolError(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimMismatch { expected: usize, got: usize },
    #[error("no cached vector for {text:?}")]
    CacheMiss { text: String },
    #[error("zero vector has no direction")]
    ZeroVector,
    #[error("encode called with no texts")]
    EmptyInput,
    #[error("invalid backend spec: {0}")]
    InvalidSpec(String),
    #[error("cache file {path}: {reason}")]
    Cache { path: PathBuf, reason: String },
}

/// A dense sentence embedding tagged with the encoder that produced it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EmbeddingVector {
    pub encoder_id: String,
    pub values: Vec<f64>,
}

impl EmbeddingVector {
    pub fn new(encoder_id: impl Into<String>, values: Vec<f64>) -> Result<Self, EncoderError> {
        if values.is_empty() {
            return Err(EncoderError::ProtocolError("empty vector".into()));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(EncoderError::ProtocolError("non-finite vector component".into()));
        }
        Ok(EmbeddingVector {
            encoder_id: encoder_id.into(),
            values,
        })
    }

    pub fn dim(&self) -> usize {
        self.values.len()
    }
}

/// Cosine similarity, clamped to `[-1, 1]`.
pub fn cosine(a: &EmbeddingVector, b: &EmbeddingVector) -> Result<f64, EncoderError> {
    cosine_slices(&a.values, &b.values)
}

pub fn cosine_slices(a: &[f64], b: &[f64]) -> Result<f64, EncoderError> {
    if a.len() != b.len() {
        return Err(EncoderError::DimMismatch {
            expected: a.len(),
            got: b.len(),
        });
    }
    let (mut dot, mut na, mut nb) = (0.0, 0.0, 0.0);
    for (x, y) in a.iter().zip(b) {
        dot += x * y;
        na += x * x;
        nb += y * y;
    }
    if na == 0.0 || nb == 0.0 {
        return Err(EncoderError::ZeroVector);
    }
    // sqrt(na * nb) rather than sqrt(na) * sqrt(nb): for a == b this is
    // exactly dot, so identical vectors score exactly 1.
    Ok((dot / (na * nb).sqrt()).clamp(-1.0, 1.0))
}

fn default_batch_size() -> usize {
    32
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum BackendKind {
    /// Read-only JSON-lines cache file; unknown texts are an error.
    CacheFile { path: PathBuf },
    /// Long-running child process speaking the JSON-lines protocol on stdio.
    Subprocess { command: Vec<String> },
    /// Server accepting protocol requests as HTTP POST bodies.
    Http { url: String },
    /// In-process bag-of-tokens encoder for tests and dry runs.
    Mock { dim: usize, seed: u64 },
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BackendSpec {
    pub encoder_id: String,
    pub kind: BackendKind,
    #[serde(default = "default_batch_size")]
    pub batch_size: usize,
}

impl BackendSpec {
    pub fn mock(encoder_id: impl Into<String>, dim: usize, seed: u64) -> Self {
        BackendSpec {
            encoder_id: encoder_id.into(),
            kind: BackendKind::Mock { dim, seed },
            batch_size: default_batch_size(),
        }
    }

    pub fn validate(&self) -> Result<(), EncoderError> {
        if self.batch_size == 0 {
            return Err(EncoderError::InvalidSpec("batch_size must be at least 1".into()));
        }
        if self.encoder_id.is_empty() {
            return Err(EncoderError::InvalidSpec("encoder_id is empty".into()));
        }
        match &self.kind {
            BackendKind::Subprocess { command } if command.is_empty() => {
                Err(EncoderError::InvalidSpec("subprocess command is empty".into()))
            }
            BackendKind::Mock { dim, .. } if *dim < 8 => {
                Err(EncoderError::InvalidSpec(format!("mock dim {dim} is below 8")))
            }
            _ => Ok(()),
        }
    }
}

/// Batching, caching front end for one backend.
///
/// The gateway is `Sync`: concurrent callers may race on the same key, in
/// which case the backend can be asked twice and the last write wins.
pub struct Gateway {
    spec: BackendSpec,
    cache: Arc<Mutex<EmbeddingCache>>,
    backend: Mutex<Option<Box<dyn Backend>>>,
    calls: AtomicUsize,
    dim: Mutex<Option<usize>>,
}

impl Gateway {
    pub fn new(spec: BackendSpec, cache: Arc<Mutex<EmbeddingCache>>) -> Result<Self, EncoderError> {
        spec.validate()?;
        Ok(Gateway {
            spec,
            cache,
            backend: Mutex::new(None),
            calls: AtomicUsize::new(0),
            dim: Mutex::new(None),
        })
    }

    /// Gateway with a private, empty cache.
    pub fn uncached(spec: BackendSpec) -> Result<Self, EncoderError> {
        Self::new(spec, Arc::new(Mutex::new(EmbeddingCache::default())))
    }

    pub fn spec(&self) -> &BackendSpec {
        &self.spec
    }

    pub fn encoder_id(&self) -> &str {
        &self.spec.encoder_id
    }

    /// Number of requests sent to the backend so far.
    pub fn backend_calls(&self) -> usize {
        self.calls.load(Ordering::SeqCst)
    }

    pub fn cache(&self) -> &Arc<Mutex<EmbeddingCache>> {
        &self.cache
    }

    fn check_dim(&self, got: usize) -> Result<(), EncoderError> {
        let mut dim = self.dim.lock().unwrap();
        match *dim {
            Some(expected) if expected != got => Err(EncoderError::DimMismatch { expected, got }),
            Some(_) => Ok(()),
            None => {
                *dim = Some(got);
                Ok(())
            }
        }
    }

    fn call_backend(&self, texts: &[String]) -> Result<Vec<Vec<f64>>, EncoderError> {
        let mut guard = self.backend.lock().unwrap();
        if guard.is_none() {
            *guard = Some(backend::connect(&self.spec)?);
        }
        self.calls.fetch_add(1, Ordering::SeqCst);
        let vectors = guard.as_mut().unwrap().encode(texts)?;
        if vectors.len() != texts.len() {
            return Err(EncoderError::ProtocolError(format!(
                "sent {} texts, received {} vectors",
                texts.len(),
                vectors.len()
            )));
        }
        Ok(vectors)
    }

    /// One vector per text, in input order.
    pub fn encode_batch(&self, texts: &[String]) -> Result<Vec<EmbeddingVector>, EncoderError> {
        if texts.is_empty() {
            return Err(EncoderError::EmptyInput);
        }
        let keys: Vec<String> = texts
            .iter()
            .map(|t| cache_key(&self.spec.encoder_id, t))
            .collect();
        let mut found: HashMap<&str, Vec<f64>> = HashMap::new();
        let mut missing: Vec<(&str, &String)> = Vec::new();
        let mut seen = HashSet::new();
        {
            let cache = self.cache.lock().unwrap();
            for (key, text) in keys.iter().zip(texts) {
                if !seen.insert(key.as_str()) {
                    continue;
                }
                match cache.get(key) {
                    Some(v) => {
                        found.insert(key, v.to_vec());
                    }
                    None => missing.push((key, text)),
                }
            }
        }
        for v in found.values() {
            self.check_dim(v.len())?;
        }
        for chunk in missing.chunks(self.spec.batch_size) {
            let batch: Vec<String> = chunk.iter().map(|(_, t)| (*t).clone()).collect();
            let vectors = self.call_backend(&batch)?;
            let mut fresh = Vec::with_capacity(chunk.len());
            for (&(key, _), values) in chunk.iter().zip(vectors) {
                let v = EmbeddingVector::new(&self.spec.encoder_id, values)?;
                self.check_dim(v.dim())?;
                fresh.push((key, v.values));
            }
            let mut cache = self.cache.lock().unwrap();
            for (key, values) in fresh {
                cache.insert(key.to_string(), values.clone());
                found.insert(key, values);
            }
        }
        Ok(keys
            .iter()
            .map(|k| EmbeddingVector {
                encoder_id: self.spec.encoder_id.clone(),
                values: found[k.as_str()].clone(),
            })
            .collect())
    }

    pub fn encode_one(&self, text: &str) -> Result<EmbeddingVector, EncoderError> {
        Ok(self.encode_batch(&[text.to_string()])?.remove(0))
    }
}
