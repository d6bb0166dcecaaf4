use std::collections::{BTreeMap, HashMap};
use std::fs;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::EncoderError;

/// Hex sha256 of `encoder_id ∥ 0x00 ∥ text`.
pub fn cache_key(encoder_id: &str, text: &str) -> String {
    let mut h = Sha256::new();
    h.update(encoder_id.as_bytes());
    h.update([0u8]);
    h.update(text.as_bytes());
    hex::encode(h.finalize())
}

#[derive(Serialize, Deserialize)]
struct CacheLine {
    key: String,
    dim: usize,
    vector: Vec<f64>,
}

/// In-memory embedding store backed by a JSON-lines file.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct EmbeddingCache {
    entries: HashMap<String, Vec<f64>>,
}

impl EmbeddingCache {
    /// Loads a cache file; a missing file yields an empty cache.
    pub fn load(path: &Path) -> Result<Self, EncoderError> {
        let err = |reason: String| EncoderError::Cache {
            path: path.to_path_buf(),
            reason,
        };
        let text = match fs::read_to_string(path) {
            Ok(t) => t,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(Self::default()),
            Err(e) => return Err(err(e.to_string())),
        };
        let mut entries = HashMap::new();
        for (i, line) in text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty()) {
            let parsed: CacheLine =
                serde_json::from_str(line).map_err(|e| err(format!("line {}: {e}", i + 1)))?;
            if parsed.vector.len() != parsed.dim {
                return Err(err(format!(
                    "line {}: dim {} but {} values",
                    i + 1,
                    parsed.dim,
                    parsed.vector.len()
                )));
            }
            entries.insert(parsed.key, parsed.vector);
        }
        Ok(EmbeddingCache { entries })
    }

    /// Writes all entries sorted by key, via a temporary file and rename.
    pub fn save(&self, path: &Path) -> Result<(), EncoderError> {
        let err = |e: std::io::Error| EncoderError::Cache {
            path: path.to_path_buf(),
            reason: e.to_string(),
        };
        if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
            fs::create_dir_all(parent).map_err(err)?;
        }
        let sorted: BTreeMap<&String, &Vec<f64>> = self.entries.iter().collect();
        let mut body = Vec::new();
        for (key, vector) in sorted {
            let line = CacheLine {
                key: key.clone(),
                dim: vector.len(),
                vector: vector.clone(),
            };
            serde_json::to_writer(&mut body, &line).expect("cache line serializes");
            body.push(b'\n');
        }
        let tmp = path.with_extension("tmp");
        let mut f = fs::File::create(&tmp).map_err(err)?;
        f.write_all(&body).map_err(err)?;
        f.sync_all().map_err(err)?;
        fs::rename(&tmp, path).map_err(err)
    }

    pub fn get(&self, key: &str) -> Option<&[f64]> {
        self.entries.get(key).map(Vec::as_slice)
    }

    pub fn insert(&mut self, key: String, vector: Vec<f64>) {
        self.entries.insert(key, vector);
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}
