//! Tokenization and seeded sentence perturbations.
//!
//! Three perturbations are supported: replacing `n` verbs/adjectives with
//! synonyms, replacing one verb/adjective with an antonym, and swapping `n`
//! pairs of token positions. Each is a pure function of its inputs and a
//! seed.

mod inflect;
mod stopwords;
mod tokenize;

use std::collections::{BTreeSet, HashMap};

use rand::seq::index;
use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::lexdb::{Lemmatized, LexicalDatabase, PartOfSpeech};
use crate::seed;

pub use inflect::{apply_casing, reinflect};
pub use stopwords::StopWords;
pub use tokenize::{detokenize, normalize_whitespace, tokenize};

/// Upper bound on resampling rounds when searching for a valid jumble.
pub const MAX_JUMBLE_ATTEMPTS: usize = 1000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PerturbError {
    #[error("perturbation count must be at least 1 (got {0})")]
    InvalidCount(usize),
    #[error("only {available} replaceable candidates available")]
    InsufficientCandidates { available: usize },
    #[error("no verb or adjective in the sentence has an antonym")]
    NoAntonymCandidate,
    #[error("sentence cannot be jumbled with {n} swapped pairs")]
    UnjumblableSentence { n: usize },
}

/// A sentence with its cached tokenization.
///
/// `joined[i]` records that token `i` was attached to the previous one
/// without whitespace in the source text. The flag travels with the token
/// when tokens are swapped, so moved punctuation keeps its attachment.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(from = "SentenceRepr", into = "SentenceRepr")]
pub struct Sentence {
    pub id: String,
    pub text: String,
    tokens: Vec<String>,
    joined: Vec<bool>,
}

#[derive(Serialize, Deserialize)]
struct SentenceRepr {
    id: String,
    text: String,
}

impl From<SentenceRepr> for Sentence {
    fn from(r: SentenceRepr) -> Self {
        Sentence::new(r.id, r.text)
    }
}

impl From<Sentence> for SentenceRepr {
    fn from(s: Sentence) -> Self {
        SentenceRepr { id: s.id, text: s.text }
    }
}

impl Sentence {
    pub fn new(id: impl Into<String>, text: impl Into<String>) -> Self {
        let text = text.into();
        let (tokens, joined) = tokenize::tokenize_with_spacing(&text);
        Sentence {
            id: id.into(),
            text,
            tokens,
            joined,
        }
    }

    fn from_parts(id: String, tokens: Vec<String>, joined: Vec<bool>) -> Self {
        let text = tokenize::render(&tokens, &joined);
        Sentence {
            id,
            text,
            tokens,
            joined,
        }
    }

    pub fn tokens(&self) -> &[String] {
        &self.tokens
    }

    /// Text rebuilt from tokens; equals the whitespace-normalized source.
    pub fn render(&self) -> String {
        tokenize::render(&self.tokens, &self.joined)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PerturbationKind {
    Synonym { n: usize },
    Antonym,
    Jumble { n: usize },
}

impl PerturbationKind {
    pub fn name(self) -> &'static str {
        match self {
            PerturbationKind::Synonym { .. } => "synonym",
            PerturbationKind::Antonym => "antonym",
            PerturbationKind::Jumble { .. } => "jumble",
        }
    }

    pub fn count(self) -> usize {
        match self {
            PerturbationKind::Synonym { n } | PerturbationKind::Jumble { n } => n,
            PerturbationKind::Antonym => 1,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceEntry {
    pub pos: usize,
    pub before: String,
    pub after: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PerturbationRecord {
    pub original: Sentence,
    pub perturbed: Sentence,
    pub kind: PerturbationKind,
    pub trace: Vec<TraceEntry>,
    pub seed: u64,
}

#[derive(Serialize)]
struct RecordLine<'a> {
    id: &'a str,
    kind: &'static str,
    n: usize,
    seed: u64,
    original: &'a str,
    perturbed: &'a str,
    trace: &'a [TraceEntry],
}

impl PerturbationRecord {
    /// One JSON-lines record (no trailing newline).
    pub fn to_json_line(&self) -> String {
        let line = RecordLine {
            id: &self.original.id,
            kind: self.kind.name(),
            n: self.kind.count(),
            seed: self.seed,
            original: &self.original.text,
            perturbed: &self.perturbed.text,
            trace: &self.trace,
        };
        serde_json::to_string(&line).expect("record serializes")
    }
}

/// Seed for one sentence under a run-level master seed.
pub fn sentence_seed(master: u64, sentence: &Sentence) -> u64 {
    seed::substream(master, &sentence.id)
}

/// Verb and adjective readings of a token.
fn readings(token: &str, db: &LexicalDatabase, stop: &StopWords) -> Vec<(PartOfSpeech, Lemmatized)> {
    let lower = token.to_lowercase();
    if lower.is_empty() || stop.contains(&lower) || !lower.chars().all(char::is_alphabetic) {
        return Vec::new();
    }
    [PartOfSpeech::Verb, PartOfSpeech::Adjective]
        .into_iter()
        .filter_map(|pos| db.lemmatize_detailed(&lower, pos).map(|l| (pos, l)))
        .collect()
}

/// Token indices eligible for replacement: non-stop-word alphabetic tokens
/// that lemmatize as a verb or adjective.
pub fn content_candidates(s: &Sentence, db: &LexicalDatabase, stop: &StopWords) -> Vec<usize> {
    s.tokens
        .iter()
        .enumerate()
        .filter(|(_, t)| !readings(t, db, stop).is_empty())
        .map(|(i, _)| i)
        .collect()
}

#[derive(Clone, Copy)]
enum Relation {
    Synonym,
    Antonym,
}

/// Replacement surfaces for the token at `index`, pooled over senses and
/// parts of speech, already re-inflected and cased like the original.
fn replacement_options(
    token: &str,
    db: &LexicalDatabase,
    stop: &StopWords,
    relation: Relation,
) -> Vec<String> {
    let lower = token.to_lowercase();
    let mut out = BTreeSet::new();
    for (pos, lemmatized) in readings(token, db, stop) {
        let related = match relation {
            Relation::Synonym => db.synonyms(&lemmatized.lemma, pos),
            Relation::Antonym => db.antonyms(&lemmatized.lemma, pos),
        };
        for word in related {
            let surface = reinflect(db, &word, pos, lemmatized.inflection);
            let cased = apply_casing(token, &surface);
            if cased.to_lowercase() != lower {
                out.insert(cased);
            }
        }
    }
    out.into_iter().collect()
}

fn eligible(
    s: &Sentence,
    db: &LexicalDatabase,
    stop: &StopWords,
    relation: Relation,
) -> Vec<(usize, Vec<String>)> {
    content_candidates(s, db, stop)
        .into_iter()
        .map(|i| (i, replacement_options(&s.tokens[i], db, stop, relation)))
        .filter(|(_, options)| !options.is_empty())
        .collect()
}

fn replace_at(
    s: &Sentence,
    picks: Vec<(usize, String)>,
    kind: PerturbationKind,
    seed: u64,
) -> PerturbationRecord {
    let mut tokens = s.tokens.clone();
    let mut trace = Vec::with_capacity(picks.len());
    for (pos, after) in picks {
        trace.push(TraceEntry {
            pos,
            before: tokens[pos].clone(),
            after: after.clone(),
        });
        tokens[pos] = after;
    }
    let perturbed = Sentence::from_parts(perturbed_id(s, kind), tokens, s.joined.clone());
    PerturbationRecord {
        original: s.clone(),
        perturbed,
        kind,
        trace,
        seed,
    }
}

fn perturbed_id(s: &Sentence, kind: PerturbationKind) -> String {
    match kind {
        PerturbationKind::Antonym => format!("{}~antonym", s.id),
        other => format!("{}~{}{}", s.id, other.name(), other.count()),
    }
}

/// Replaces `n` distinct verbs/adjectives with uniformly drawn synonyms.
pub fn synonym_replace(
    s: &Sentence,
    n: usize,
    db: &LexicalDatabase,
    stop: &StopWords,
    seed: u64,
) -> Result<PerturbationRecord, PerturbError> {
    if n == 0 {
        return Err(PerturbError::InvalidCount(n));
    }
    let pool = eligible(s, db, stop, Relation::Synonym);
    if pool.len() < n {
        return Err(PerturbError::InsufficientCandidates { available: pool.len() });
    }
    let mut rng = seed::rng(seed);
    let mut chosen = index::sample(&mut rng, pool.len(), n).into_vec();
    chosen.sort_unstable();
    let picks = chosen
        .into_iter()
        .map(|c| {
            let (pos, options) = &pool[c];
            (*pos, options[rng.gen_range(0..options.len())].clone())
        })
        .collect();
    Ok(replace_at(s, picks, PerturbationKind::Synonym { n }, seed))
}

/// Replaces exactly one verb/adjective with a uniformly drawn antonym.
pub fn antonym_replace(
    s: &Sentence,
    db: &LexicalDatabase,
    stop: &StopWords,
    seed: u64,
) -> Result<PerturbationRecord, PerturbError> {
    let pool = eligible(s, db, stop, Relation::Antonym);
    if pool.is_empty() {
        return Err(PerturbError::NoAntonymCandidate);
    }
    let mut rng = seed::rng(seed);
    let (pos, options) = &pool[rng.gen_range(0..pool.len())];
    let after = options[rng.gen_range(0..options.len())].clone();
    Ok(replace_at(s, vec![(*pos, after)], PerturbationKind::Antonym, seed))
}

/// Largest number of disjoint position pairs whose tokens differ.
fn max_unequal_pairs(tokens: &[String]) -> usize {
    let mut counts: HashMap<&str, usize> = HashMap::new();
    for t in tokens {
        *counts.entry(t.as_str()).or_default() += 1;
    }
    let most = counts.values().copied().max().unwrap_or(0);
    (tokens.len() / 2).min(tokens.len() - most)
}

/// Swaps `n` random pairs of token positions (punctuation included); every
/// swapped pair holds two different token strings.
pub fn jumble(s: &Sentence, n: usize, seed: u64) -> Result<PerturbationRecord, PerturbError> {
    if n == 0 {
        return Err(PerturbError::InvalidCount(n));
    }
    let len = s.tokens.len();
    if len < 2 * n || max_unequal_pairs(&s.tokens) < n {
        return Err(PerturbError::UnjumblableSentence { n });
    }
    let mut rng = seed::rng(seed);
    let mut positions: Vec<usize> = (0..len).collect();
    for _ in 0..MAX_JUMBLE_ATTEMPTS {
        let (sampled, _) = positions.partial_shuffle(&mut rng, 2 * n);
        let pairs: Vec<(usize, usize)> = sampled.chunks_exact(2).map(|p| (p[0], p[1])).collect();
        if pairs.iter().any(|&(a, b)| s.tokens[a] == s.tokens[b]) {
            continue;
        }
        let mut tokens = s.tokens.clone();
        let mut joined = s.joined.clone();
        for &(a, b) in &pairs {
            tokens.swap(a, b);
            joined.swap(a, b);
        }
        let mut changed: Vec<usize> = pairs.iter().flat_map(|&(a, b)| [a, b]).collect();
        changed.sort_unstable();
        let trace = changed
            .into_iter()
            .map(|pos| TraceEntry {
                pos,
                before: s.tokens[pos].clone(),
                after: tokens[pos].clone(),
            })
            .collect();
        let kind = PerturbationKind::Jumble { n };
        let perturbed = Sentence::from_parts(perturbed_id(s, kind), tokens, joined);
        return Ok(PerturbationRecord {
            original: s.clone(),
            perturbed,
            kind,
            trace,
            seed,
        });
    }
    Err(PerturbError::UnjumblableSentence { n })
}

/// Applies a perturbation by kind.
pub fn perturb(
    s: &Sentence,
    kind: PerturbationKind,
    db: &LexicalDatabase,
    stop: &StopWords,
    seed: u64,
) -> Result<PerturbationRecord, PerturbError> {
    match kind {
        PerturbationKind::Synonym { n } => synonym_replace(s, n, db, stop, seed),
        PerturbationKind::Antonym => antonym_replace(s, db, stop, seed),
        PerturbationKind::Jumble { n } => jumble(s, n, seed),
    }
}

#[cfg(test)]
mod tests;
