use std::collections::HashSet;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

use super::RunError;
use crate::corpus::{DatasetFormat, DatasetSpec};
use crate::criteria::{default_epsilon_grid, is_ascending, VerdictConfig, MAX_SYNONYM_N};
use crate::encoder::BackendSpec;
use crate::probe::default_lambdas;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RunCriterion {
    C1,
    C1Alt,
    C2,
    C3,
    C4,
    Probe,
}

fn default_n_values() -> Vec<usize> {
    vec![1, 2, 3]
}

fn default_jumble_n() -> usize {
    3
}

/// Experiment description. Relative paths resolve against the directory of
/// the config file.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub datasets: Vec<DatasetSpec>,
    pub encoders: Vec<BackendSpec>,
    pub criteria: Vec<RunCriterion>,
    #[serde(default = "default_n_values")]
    pub n_values: Vec<usize>,
    /// Pairs of positions swapped for criterion 4.
    #[serde(default = "default_jumble_n")]
    pub jumble_n: usize,
    #[serde(default = "default_epsilon_grid")]
    pub epsilon_grid: Vec<f64>,
    #[serde(default)]
    pub thresholds: VerdictConfig,
    #[serde(default = "default_lambdas")]
    pub lambdas: Vec<f64>,
    #[serde(default)]
    pub master_seed: u64,
    /// WordNet database directory; needed for criteria 2 and 3.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wordnet_dir: Option<PathBuf>,
    /// Stop-word list, one word per line; the bundled English list otherwise.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stopwords: Option<PathBuf>,
    pub output_dir: PathBuf,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cache_path: Option<PathBuf>,
}

/// Sets `key` (dot-separated, array indices allowed) to `raw`, read as JSON
/// when it parses and as a string otherwise.
pub fn apply_override(doc: &mut Value, key: &str, raw: &str) -> Result<(), RunError> {
    let value = serde_json::from_str(raw).unwrap_or_else(|_| Value::String(raw.to_string()));
    let parts: Vec<&str> = key.split('.').collect();
    let mut cur = doc;
    for (i, part) in parts.iter().enumerate() {
        let last = i + 1 == parts.len();
        cur = match cur {
            Value::Object(map) => {
                if last {
                    map.insert(part.to_string(), value);
                    return Ok(());
                }
                map.entry(part.to_string()).or_insert_with(|| Value::Object(Default::default()))
            }
            Value::Array(items) => {
                let idx: usize = part
                    .parse()
                    .map_err(|_| RunError::Config(format!("--set {key}: {part:?} is not an array index")))?;
                let len = items.len();
                let slot = items
                    .get_mut(idx)
                    .ok_or_else(|| RunError::Config(format!("--set {key}: index {idx} out of range ({len})")))?;
                if last {
                    *slot = value;
                    return Ok(());
                }
                slot
            }
            _ => return Err(RunError::Config(format!("--set {key}: {part:?} is inside a scalar"))),
        };
    }
    Err(RunError::Config("--set needs a non-empty key".into()))
}

impl RunConfig {
    pub fn from_json(text: &str, overrides: &[(String, String)]) -> Result<Self, RunError> {
        let mut doc: Value = serde_json::from_str(text).map_err(|e| RunError::Config(format!("config: {e}")))?;
        for (k, v) in overrides {
            apply_override(&mut doc, k, v)?;
        }
        serde_json::from_value(doc).map_err(|e| RunError::Config(format!("config: {e}")))
    }

    /// Reads a config file and resolves its relative paths.
    pub fn load(path: &Path, overrides: &[(String, String)]) -> Result<Self, RunError> {
        let text = fs::read_to_string(path).map_err(|e| RunError::Config(format!("{}: {e}", path.display())))?;
        let mut cfg = Self::from_json(&text, overrides)?;
        cfg.resolve_paths(path.parent().unwrap_or(Path::new("")));
        Ok(cfg)
    }

    pub fn resolve_paths(&mut self, base: &Path) {
        let fix = |p: &mut PathBuf| {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        };
        for d in &mut self.datasets {
            fix(&mut d.path);
        }
        for e in &mut self.encoders {
            if let crate::encoder::BackendKind::CacheFile { path } = &mut e.kind {
                fix(path);
            }
        }
        self.wordnet_dir.iter_mut().for_each(fix);
        self.stopwords.iter_mut().for_each(fix);
        fix(&mut self.output_dir);
        self.cache_path.iter_mut().for_each(fix);
    }

    /// Canonical JSON (sorted keys) of the experiment-defining fields. The
    /// output directory and cache location are left out: they say where
    /// results go, not what they are.
    pub fn canonical_json(&self) -> String {
        let mut v = serde_json::to_value(self).expect("config serializes");
        if let Value::Object(map) = &mut v {
            map.remove("output_dir");
            map.remove("cache_path");
            for d in map.get_mut("datasets").and_then(Value::as_array_mut).into_iter().flatten() {
                // Dataset content is pinned by the manifest's file hashes.
                if let Some(p) = d.get_mut("path") {
                    let name = Path::new(p.as_str().unwrap_or_default())
                        .file_name()
                        .map(|n| n.to_string_lossy().into_owned())
                        .unwrap_or_default();
                    *p = Value::String(name);
                }
            }
        }
        v.to_string()
    }

    pub fn config_hash(&self) -> String {
        hex::encode(Sha256::digest(self.canonical_json().as_bytes()))
    }

    pub fn wants(&self, c: RunCriterion) -> bool {
        self.criteria.contains(&c)
    }

    pub fn paraphrase_datasets(&self) -> impl Iterator<Item = &DatasetSpec> {
        self.datasets.iter().filter(|d| !is_probe_format(d.format))
    }

    pub fn probe_datasets(&self) -> impl Iterator<Item = &DatasetSpec> {
        self.datasets.iter().filter(|d| is_probe_format(d.format))
    }

    pub fn validate(&self) -> Result<(), RunError> {
        let bad = |m: String| Err(RunError::Config(m));
        if self.criteria.is_empty() {
            return bad("criteria is empty".into());
        }
        if self.encoders.is_empty() {
            return bad("encoders is empty".into());
        }
        let mut ids = HashSet::new();
        for e in &self.encoders {
            e.validate().map_err(|err| RunError::Config(format!("encoder {}: {err}", e.encoder_id)))?;
            if !ids.insert(&e.encoder_id) {
                return bad(format!("duplicate encoder_id {}", e.encoder_id));
            }
        }
        let mut seen = HashSet::new();
        for d in &self.datasets {
            if !seen.insert((d.id, is_probe_format(d.format))) {
                return bad(format!("dataset {} listed twice", d.id));
            }
            if is_probe_format(d.format) && probe_task_for(d).is_none() {
                return bad(format!("dataset {} has no probe task for format {:?}", d.id, d.format));
            }
        }
        if self.epsilon_grid.is_empty() || !is_ascending(&self.epsilon_grid) {
            return bad("epsilon_grid must be non-empty and strictly ascending".into());
        }
        if let Some(&n) = self.n_values.iter().find(|&&n| n == 0 || n > MAX_SYNONYM_N) {
            return bad(format!("n_values entry {n} outside 1..={MAX_SYNONYM_N}"));
        }
        if self.jumble_n == 0 {
            return bad("jumble_n must be at least 1".into());
        }
        if self.lambdas.is_empty() || self.lambdas.iter().any(|&l| !(l > 0.0 && l.is_finite())) {
            return bad("lambdas must be non-empty and positive".into());
        }
        let paraphrase = self.paraphrase_datasets().count();
        let needs_pairs = [RunCriterion::C1, RunCriterion::C2, RunCriterion::C3, RunCriterion::C4];
        if needs_pairs.iter().any(|&c| self.wants(c)) && paraphrase == 0 {
            return bad("criteria c1-c4 need at least one paraphrase dataset".into());
        }
        if self.wants(RunCriterion::C1Alt) && paraphrase < 2 {
            return bad("c1_alt needs at least two paraphrase datasets".into());
        }
        if self.wants(RunCriterion::Probe) && self.probe_datasets().count() == 0 {
            return bad("probe needs at least one probe dataset".into());
        }
        if (self.wants(RunCriterion::C2) || self.wants(RunCriterion::C3)) && self.wordnet_dir.is_none() {
            return bad("c2 and c3 need wordnet_dir".into());
        }
        Ok(())
    }
}

pub fn is_probe_format(f: DatasetFormat) -> bool {
    matches!(f, DatasetFormat::ProbeSingle | DatasetFormat::ProbePair)
}

/// Probe task for a probe-format dataset.
pub fn probe_task_for(d: &DatasetSpec) -> Option<crate::probe::ProbeTask> {
    use crate::corpus::DatasetId as D;
    use crate::probe::{ProbeTask, ProbeTaskName as T};
    let name = match (d.id, d.format) {
        (D::Mr, DatasetFormat::ProbeSingle) => T::MR,
        (D::Cr, DatasetFormat::ProbeSingle) => T::CR,
        (D::Subj, DatasetFormat::ProbeSingle) => T::SUBJ,
        (D::Mpqa, DatasetFormat::ProbeSingle) => T::MPQA,
        (D::Sstb, DatasetFormat::ProbeSingle) => T::SSTb,
        (D::Trec, DatasetFormat::ProbeSingle) => T::TREC,
        (D::Mrpc, DatasetFormat::ProbePair) => T::MRPC,
        _ => return None,
    };
    Some(ProbeTask::new(name))
}
