//! Loading, validation, and seeded sampling of paraphrase and probe datasets.

use std::collections::HashSet;
use std::fmt;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use rand::seq::index;
use serde::{Deserialize, Serialize};
use thiserror::Error;
use unicode_normalization::UnicodeNormalization;

use crate::criteria::{Label, SentencePair};
use crate::probe::{ProbeSample, ProbeTask};
use crate::seed;
use crate::textperturb::Sentence;

/// Rows rejected above this fraction abort the load.
pub const MAX_SKIP_FRACTION: f64 = 0.01;
/// Leading lines whose label field is not numeric are read as headers.
const MAX_HEADER_LINES: usize = 4;

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{path}:{line}: {reason}")]
    FormatError { path: PathBuf, line: usize, reason: String },
    #[error("{path}: {skipped} of {total} rows malformed (limit 1%)")]
    ExcessiveSkips { path: PathBuf, skipped: usize, total: usize },
    #[error("need {want} {label} pairs, have {have}")]
    InsufficientPairs { label: Label, have: usize, want: usize },
    #[error("need {want} distinct sentences, have {have}")]
    InsufficientSentences { have: usize, want: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DatasetId {
    Qqp,
    PawsWiki,
    Mrpc,
    Mr,
    Cr,
    Subj,
    Mpqa,
    Sstb,
    Trec,
}

impl DatasetId {
    pub fn name(self) -> &'static str {
        match self {
            DatasetId::Qqp => "qqp",
            DatasetId::PawsWiki => "paws_wiki",
            DatasetId::Mrpc => "mrpc",
            DatasetId::Mr => "mr",
            DatasetId::Cr => "cr",
            DatasetId::Subj => "subj",
            DatasetId::Mpqa => "mpqa",
            DatasetId::Sstb => "sstb",
            DatasetId::Trec => "trec",
        }
    }

    pub fn is_paraphrase_corpus(self) -> bool {
        matches!(self, DatasetId::Qqp | DatasetId::PawsWiki | DatasetId::Mrpc)
    }
}

impl fmt::Display for DatasetId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DatasetFormat {
    /// id, qid1, qid2, question1, question2, is_duplicate
    QqpTsv,
    /// id, sentence1, sentence2, label
    PawsTsv,
    /// Quality, #1 ID, #2 ID, #1 String, #2 String
    MrpcTsv,
    /// Canonical `{id, s1, s2, label}` JSON lines.
    Jsonl,
    /// `<label>\t<sentence>`
    ProbeSingle,
    /// `<label>\t<s1>\t<s2>`
    ProbePair,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SampleSpec {
    /// Pairs drawn per label; all pairs when absent.
    pub pairs_per_label: Option<usize>,
    /// Distinct first sentences drawn for the synonym criterion; all when absent.
    pub singles: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DatasetSpec {
    pub id: DatasetId,
    pub path: PathBuf,
    pub format: DatasetFormat,
    #[serde(default)]
    pub sample: SampleSpec,
    /// Sampling seed; derived from the run's master seed when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

/// Parsed pairs plus the bookkeeping of what was dropped.
#[derive(Clone, Debug, PartialEq)]
pub struct LoadedPairs {
    pub pairs: Vec<SentencePair>,
    pub skipped: usize,
    pub duplicates: usize,
}

fn read(path: &Path) -> Result<String, CorpusError> {
    let bytes = fs::read(path).map_err(|source| CorpusError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    String::from_utf8(bytes).map_err(|e| CorpusError::FormatError {
        path: path.to_path_buf(),
        line: 0,
        reason: format!("not UTF-8: {e}"),
    })
}

fn nfc(s: &str) -> String {
    s.trim().nfc().collect()
}

/// Column layout: (column count, label column, first sentence, second sentence).
fn layout(format: DatasetFormat) -> (usize, usize, usize, usize) {
    match format {
        DatasetFormat::QqpTsv => (6, 5, 3, 4),
        DatasetFormat::PawsTsv => (4, 3, 1, 2),
        DatasetFormat::MrpcTsv => (5, 0, 3, 4),
        DatasetFormat::ProbePair => (3, 0, 1, 2),
        DatasetFormat::ProbeSingle => (2, 0, 1, 1),
        DatasetFormat::Jsonl => unreachable!("JSON lines have no columns"),
    }
}

/// Data rows as (1-based line number, fields), with blank lines and up to
/// four leading header lines removed. A header line has a non-numeric label
/// field, or no tab at all.
fn tsv_rows(text: &str, label_col: usize) -> Vec<(usize, Vec<&str>)> {
    let mut rows: Vec<(usize, Vec<&str>)> = text
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| (i + 1, l.trim_end_matches('\r').split('\t').collect()))
        .collect();
    let headers = rows
        .iter()
        .take(MAX_HEADER_LINES)
        .take_while(|(_, f)| match f.get(label_col) {
            Some(v) => v.trim().parse::<u64>().is_err(),
            None => f.len() == 1,
        })
        .count();
    rows.drain(..headers);
    rows
}

fn check_skips(path: &Path, skipped: usize, total: usize) -> Result<(), CorpusError> {
    if total > 0 && skipped as f64 > MAX_SKIP_FRACTION * total as f64 {
        return Err(CorpusError::ExcessiveSkips {
            path: path.to_path_buf(),
            skipped,
            total,
        });
    }
    Ok(())
}

fn make_pair(pair_id: String, s1: &str, s2: &str, label: Label) -> SentencePair {
    SentencePair {
        s1: Sentence::new(format!("{pair_id}/1"), nfc(s1)),
        s2: Sentence::new(format!("{pair_id}/2"), nfc(s2)),
        id: pair_id,
        label,
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CanonicalPair {
    id: String,
    s1: String,
    s2: String,
    label: Label,
}

/// Loads a paraphrase dataset: malformed rows are counted and skipped
/// (aborting above 1%), texts are NFC-normalized, and repeated
/// `(s1, s2)` texts are dropped. Pair ids are `<dataset>-<line:07>`.
pub fn load_pairs(spec: &DatasetSpec) -> Result<LoadedPairs, CorpusError> {
    let text = read(&spec.path)?;
    let mut pairs = Vec::new();
    let mut skipped = 0;
    let mut total = 0;
    match spec.format {
        DatasetFormat::Jsonl => {
            for (i, line) in text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty()) {
                let c: CanonicalPair = serde_json::from_str(line).map_err(|e| CorpusError::FormatError {
                    path: spec.path.clone(),
                    line: i + 1,
                    reason: e.to_string(),
                })?;
                total += 1;
                pairs.push(make_pair(c.id, &c.s1, &c.s2, c.label));
            }
        }
        DatasetFormat::ProbeSingle | DatasetFormat::ProbePair => {
            return Err(CorpusError::FormatError {
                path: spec.path.clone(),
                line: 0,
                reason: "probe task files hold no sentence pairs".into(),
            });
        }
        format => {
            let (cols, label_col, a, b) = layout(format);
            for (line, fields) in tsv_rows(&text, label_col) {
                total += 1;
                let label = fields
                    .get(label_col)
                    .and_then(|v| v.trim().parse::<u8>().ok())
                    .and_then(Label::from_binary);
                match label {
                    Some(label)
                        if fields.len() == cols && !fields[a].trim().is_empty() && !fields[b].trim().is_empty() =>
                    {
                        pairs.push(make_pair(format!("{}-{line:07}", spec.id), fields[a], fields[b], label));
                    }
                    _ => skipped += 1,
                }
            }
        }
    }
    check_skips(&spec.path, skipped, total)?;
    let mut seen = HashSet::new();
    let before = pairs.len();
    pairs.retain(|p| seen.insert((p.s1.text.clone(), p.s2.text.clone())));
    Ok(LoadedPairs {
        duplicates: before - pairs.len(),
        pairs,
        skipped,
    })
}

/// Canonical JSON-lines form of `pairs`.
pub fn to_canonical_jsonl(pairs: &[SentencePair]) -> String {
    let mut out = String::new();
    for p in pairs {
        let line = CanonicalPair {
            id: p.id.clone(),
            s1: p.s1.text.clone(),
            s2: p.s2.text.clone(),
            label: p.label,
        };
        out.push_str(&serde_json::to_string(&line).expect("pair serializes"));
        out.push('\n');
    }
    out
}

pub fn write_canonical(pairs: &[SentencePair], path: &Path) -> Result<(), CorpusError> {
    let io = |source| CorpusError::Io {
        path: path.to_path_buf(),
        source,
    };
    let mut f = fs::File::create(path).map_err(io)?;
    f.write_all(to_canonical_jsonl(pairs).as_bytes()).map_err(io)
}

/// Exactly `per_label` pairs of each label, drawn uniformly without
/// replacement and returned sorted by pair id.
pub fn balanced_sample(pairs: &[SentencePair], per_label: usize, seed: u64) -> Result<Vec<SentencePair>, CorpusError> {
    let mut rng = seed::rng(seed);
    let mut out = Vec::with_capacity(2 * per_label);
    for label in [Label::Paraphrase, Label::NonParaphrase] {
        let pool: Vec<&SentencePair> = pairs.iter().filter(|p| p.label == label).collect();
        if pool.len() < per_label {
            return Err(CorpusError::InsufficientPairs {
                label,
                have: pool.len(),
                want: per_label,
            });
        }
        out.extend(index::sample(&mut rng, pool.len(), per_label).into_iter().map(|i| pool[i].clone()));
    }
    out.sort_by(|a, b| a.id.cmp(&b.id));
    Ok(out)
}

/// Distinct first sentences (first occurrence wins), in input order.
pub fn distinct_first_sentences(pairs: &[SentencePair]) -> Vec<Sentence> {
    let mut seen = HashSet::new();
    pairs
        .iter()
        .filter(|p| seen.insert(p.s1.text.as_str()))
        .map(|p| p.s1.clone())
        .collect()
}

/// `count` distinct first sentences, drawn uniformly and sorted by id.
pub fn sample_singles(pairs: &[SentencePair], count: usize, seed: u64) -> Result<Vec<Sentence>, CorpusError> {
    let pool = distinct_first_sentences(pairs);
    if count > pool.len() {
        return Err(CorpusError::InsufficientSentences {
            have: pool.len(),
            want: count,
        });
    }
    let mut rng = seed::rng(seed);
    let mut out: Vec<Sentence> = index::sample(&mut rng, pool.len(), count)
        .into_iter()
        .map(|i| pool[i].clone())
        .collect();
    out.sort_by(|a, b| a.id.cmp(&b.id));
    Ok(out)
}

/// Loads a probe task file (`<label>\t<sentence>` or `<label>\t<s1>\t<s2>`).
pub fn load_probe_samples(path: &Path, task: &ProbeTask) -> Result<Vec<ProbeSample>, CorpusError> {
    let format = match task.arity {
        crate::probe::Arity::SingleSentence => DatasetFormat::ProbeSingle,
        crate::probe::Arity::SentencePair => DatasetFormat::ProbePair,
    };
    let (cols, label_col, a, b) = layout(format);
    let text = read(path)?;
    let rows = tsv_rows(&text, label_col);
    let total = rows.len();
    let mut skipped = 0;
    let mut out = Vec::with_capacity(total);
    for (_, fields) in rows {
        let label = fields[0].trim().parse::<usize>().ok().filter(|&l| l < task.num_classes);
        match label {
            Some(label) if fields.len() == cols && fields[1..].iter().all(|f| !f.trim().is_empty()) => {
                out.push(ProbeSample {
                    label,
                    s1: nfc(fields[a]),
                    s2: (cols == 3).then(|| nfc(fields[b])),
                });
            }
            _ => skipped += 1,
        }
    }
    check_skips(path, skipped, total)?;
    Ok(out)
}
