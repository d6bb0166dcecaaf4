//! The four perturbation criteria, their aggregates, and advisory verdicts.
//!
//! - C1: mean cosine of paraphrase pairs minus mean cosine of non-paraphrase
//!   pairs (C1-alt draws the negatives from different corpora).
//! - C2: mean cosine between a sentence and its `n`-synonym replacement.
//! - C3/C4: margin `cos(S, S'_P) - cos(S, S'_X)` where `S'_X` is an antonym
//!   replacement or an `n`-pair jumble of `S`, binned cumulatively over ε.

mod histogram;

use std::collections::{BTreeMap, HashMap, HashSet};

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::encoder::{cosine, EncoderError, Gateway};
use crate::lexdb::LexicalDatabase;
use crate::seed;
use crate::stats;
use crate::textperturb::{self, PerturbError, PerturbationKind, Sentence, StopWords};

pub use histogram::{default_epsilon_grid, is_ascending, MarginHistogram};

/// Largest synonym-replacement count accepted by [`eval_c2`].
pub const MAX_SYNONYM_N: usize = 5;

#[derive(Debug, Error)]
pub enum CriteriaError {
    #[error("no {0} pairs to evaluate")]
    EmptyClass(Label),
    #[error("cross-topic negatives need at least two non-empty corpora")]
    InsufficientCorpora,
    #[error("requested {want} cross-topic pairs but only {have} distinct pairs exist")]
    InsufficientSentences { have: u128, want: usize },
    #[error("no pair could be perturbed")]
    AllSkipped,
    #[error("epsilon grid must be non-empty and strictly ascending")]
    InvalidGrid,
    #[error("synonym count {0} outside 1..={MAX_SYNONYM_N}")]
    InvalidN(usize),
    #[error("pair {0} is not labeled paraphrase")]
    NotParaphrase(String),
    #[error("pair {0} uses the same sentence id on both sides")]
    SameSentence(String),
    #[error(transparent)]
    Encoder(#[from] EncoderError),
    #[error(transparent)]
    Perturb(#[from] PerturbError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Label {
    Paraphrase,
    NonParaphrase,
}

impl Label {
    pub fn from_binary(v: u8) -> Option<Label> {
        match v {
            1 => Some(Label::Paraphrase),
            0 => Some(Label::NonParaphrase),
            _ => None,
        }
    }

    pub fn as_binary(self) -> u8 {
        match self {
            Label::Paraphrase => 1,
            Label::NonParaphrase => 0,
        }
    }
}

impl std::fmt::Display for Label {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Label::Paraphrase => "paraphrase",
            Label::NonParaphrase => "non_paraphrase",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SentencePair {
    pub id: String,
    pub s1: Sentence,
    pub s2: Sentence,
    pub label: Label,
}

impl SentencePair {
    pub fn new(id: impl Into<String>, s1: Sentence, s2: Sentence, label: Label) -> Result<Self, CriteriaError> {
        let id = id.into();
        if s1.id == s2.id {
            return Err(CriteriaError::SameSentence(id));
        }
        Ok(SentencePair { id, s1, s2, label })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Criterion {
    C1,
    C1Alt,
    C2,
    C3,
    C4,
}

impl Criterion {
    pub fn name(self) -> &'static str {
        match self {
            Criterion::C1 => "c1",
            Criterion::C1Alt => "c1_alt",
            Criterion::C2 => "c2",
            Criterion::C3 => "c3",
            Criterion::C4 => "c4",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
    AdvisoryOnly,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct VerdictConfig {
    pub c1_min_diff: f64,
    pub c2_min_mean_at_n1: f64,
    pub margin_epsilon: f64,
    pub margin_min_pass_fraction: f64,
}

impl Default for VerdictConfig {
    fn default() -> Self {
        VerdictConfig {
            c1_min_diff: 0.10,
            c2_min_mean_at_n1: 0.85,
            margin_epsilon: 0.10,
            margin_min_pass_fraction: 0.50,
        }
    }
}

/// Run-level fields stamped on every report.
#[derive(Clone, Debug, PartialEq)]
pub struct ReportMeta {
    pub dataset_id: String,
    pub config_hash: String,
    pub stopword_hash: String,
    pub seed: u64,
    pub thresholds: VerdictConfig,
}

impl ReportMeta {
    pub fn for_dataset(dataset_id: impl Into<String>) -> Self {
        ReportMeta {
            dataset_id: dataset_id.into(),
            config_hash: String::new(),
            stopword_hash: StopWords::english().hash(),
            seed: 0,
            thresholds: VerdictConfig::default(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CriterionReport {
    pub criterion: Criterion,
    pub encoder_id: String,
    pub dataset_id: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pos_mean: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub neg_mean: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub diff: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pos_count: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub neg_count: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub per_n_means: Option<BTreeMap<usize, f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub per_n_counts: Option<BTreeMap<usize, usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub per_n_skipped: Option<BTreeMap<usize, usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub histogram: Option<MarginHistogram>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fractions: Option<Vec<f64>>,
    pub skipped: usize,
    pub verdict: Verdict,
    /// Thresholds are this tool's defaults rather than published values.
    pub advisory: bool,
    pub thresholds: VerdictConfig,
    pub config_hash: String,
    pub stopword_hash: String,
    pub seed: u64,
    /// Encoders receive the raw corpus text, untokenized.
    pub encoder_input: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub jumble_scope: Option<String>,
}

impl CriterionReport {
    /// A report with no results yet; the verdict starts as `AdvisoryOnly`.
    pub fn new(criterion: Criterion, encoder_id: &str, meta: &ReportMeta) -> Self {
        CriterionReport {
            criterion,
            encoder_id: encoder_id.to_string(),
            dataset_id: meta.dataset_id.clone(),
            n: None,
            pos_mean: None,
            neg_mean: None,
            diff: None,
            pos_count: None,
            neg_count: None,
            per_n_means: None,
            per_n_counts: None,
            per_n_skipped: None,
            histogram: None,
            fractions: None,
            skipped: 0,
            verdict: Verdict::AdvisoryOnly,
            advisory: true,
            thresholds: meta.thresholds.clone(),
            config_hash: meta.config_hash.clone(),
            stopword_hash: meta.stopword_hash.clone(),
            seed: meta.seed,
            encoder_input: "raw".into(),
            jumble_scope: None,
        }
    }

    pub fn pass_fraction_at(&self, eps: f64) -> Option<f64> {
        self.histogram.as_ref()?.pass_fraction_at(eps)
    }

    fn finish(mut self) -> Self {
        self.verdict = verdict(&self, &self.thresholds);
        self
    }
}

/// Cosine similarity for each `(a, b)` text pair, encoding every distinct
/// text once.
pub fn similarities(gateway: &Gateway, pairs: &[(&str, &str)]) -> Result<Vec<f64>, CriteriaError> {
    if pairs.is_empty() {
        return Ok(Vec::new());
    }
    let mut order: Vec<String> = Vec::new();
    let mut slot: HashMap<&str, usize> = HashMap::new();
    for &(a, b) in pairs {
        for t in [a, b] {
            slot.entry(t).or_insert_with(|| {
                order.push(t.to_string());
                order.len() - 1
            });
        }
    }
    let vectors = gateway.encode_batch(&order)?;
    pairs
        .iter()
        .map(|(a, b)| Ok(cosine(&vectors[slot[a]], &vectors[slot[b]])?))
        .collect()
}

/// `(pos_mean, neg_mean, diff)` from per-pair similarities.
pub fn c1_aggregate(pos: &[f64], neg: &[f64]) -> Result<(f64, f64, f64), CriteriaError> {
    let p = stats::mean(pos).ok_or(CriteriaError::EmptyClass(Label::Paraphrase))?;
    let n = stats::mean(neg).ok_or(CriteriaError::EmptyClass(Label::NonParaphrase))?;
    Ok((p, n, p - n))
}

fn sorted_by_id(pairs: &[SentencePair]) -> Vec<&SentencePair> {
    let mut v: Vec<&SentencePair> = pairs.iter().collect();
    v.sort_by(|a, b| a.id.cmp(&b.id));
    v
}

/// Criterion 1 (or its cross-topic variant, per `criterion`).
pub fn eval_c1(
    pairs: &[SentencePair],
    gateway: &Gateway,
    criterion: Criterion,
    meta: &ReportMeta,
) -> Result<CriterionReport, CriteriaError> {
    let sorted = sorted_by_id(pairs);
    for label in [Label::Paraphrase, Label::NonParaphrase] {
        if !sorted.iter().any(|p| p.label == label) {
            return Err(CriteriaError::EmptyClass(label));
        }
    }
    let texts: Vec<(&str, &str)> = sorted.iter().map(|p| (p.s1.text.as_str(), p.s2.text.as_str())).collect();
    let sims = similarities(gateway, &texts)?;
    let mut pos = Vec::new();
    let mut neg = Vec::new();
    for (p, s) in sorted.iter().zip(sims) {
        match p.label {
            Label::Paraphrase => pos.push(s),
            Label::NonParaphrase => neg.push(s),
        }
    }
    let (pos_mean, neg_mean, diff) = c1_aggregate(&pos, &neg)?;
    let mut r = CriterionReport::new(criterion, gateway.encoder_id(), meta);
    r.pos_mean = Some(pos_mean);
    r.neg_mean = Some(neg_mean);
    r.diff = Some(diff);
    r.pos_count = Some(pos.len());
    r.neg_count = Some(neg.len());
    Ok(r.finish())
}

/// Samples `k` distinct non-paraphrase pairs whose sentences come from two
/// different corpora. Each pair picks an unordered corpus pair `i < j`
/// uniformly, then `s1` from corpus `i` and `s2` from corpus `j`.
pub fn make_cross_topic_negatives(
    corpora: &[(String, Vec<Sentence>)],
    k: usize,
    seed: u64,
) -> Result<Vec<SentencePair>, CriteriaError> {
    let live: Vec<&(String, Vec<Sentence>)> = corpora.iter().filter(|(_, s)| !s.is_empty()).collect();
    if live.len() < 2 {
        return Err(CriteriaError::InsufficientCorpora);
    }
    let mut combos = Vec::new();
    for i in 0..live.len() {
        for j in i + 1..live.len() {
            combos.push((i, j));
        }
    }
    let capacity: u128 = combos
        .iter()
        .map(|&(i, j)| live[i].1.len() as u128 * live[j].1.len() as u128)
        .sum();
    if (k as u128) > capacity {
        return Err(CriteriaError::InsufficientSentences { have: capacity, want: k });
    }
    let mut rng = seed::rng(seed);
    let mut seen = HashSet::new();
    let mut out = Vec::with_capacity(k);
    while out.len() < k {
        let (i, j) = combos[rng.gen_range(0..combos.len())];
        let a = &live[i].1[rng.gen_range(0..live[i].1.len())];
        let b = &live[j].1[rng.gen_range(0..live[j].1.len())];
        if !seen.insert((a.id.clone(), b.id.clone())) {
            continue;
        }
        out.push(SentencePair {
            id: format!("xtopic-{:06}", out.len()),
            s1: a.clone(),
            s2: b.clone(),
            label: Label::NonParaphrase,
        });
    }
    Ok(out)
}

fn item_seed(master: u64, id: &str, kind: PerturbationKind) -> u64 {
    seed::substream(master, &format!("{id}#{}{}", kind.name(), kind.count()))
}

fn is_skippable(e: &PerturbError) -> bool {
    !matches!(e, PerturbError::InvalidCount(_))
}

/// Criterion 2: mean similarity between each sentence and its `n`-synonym
/// replacement, for every `n` in `n_values`. Sentences with too few
/// candidates for a given `n` are left out of that mean and counted.
#[allow(clippy::too_many_arguments)]
pub fn eval_c2(
    sentences: &[Sentence],
    gateway: &Gateway,
    db: &LexicalDatabase,
    stop: &StopWords,
    n_values: &[usize],
    seed: u64,
    meta: &ReportMeta,
) -> Result<CriterionReport, CriteriaError> {
    if let Some(&bad) = n_values.iter().find(|&&n| n == 0 || n > MAX_SYNONYM_N) {
        return Err(CriteriaError::InvalidN(bad));
    }
    let mut sorted: Vec<&Sentence> = sentences.iter().collect();
    sorted.sort_by(|a, b| a.id.cmp(&b.id));
    let mut means = BTreeMap::new();
    let mut counts = BTreeMap::new();
    let mut skipped = BTreeMap::new();
    for &n in n_values {
        let kind = PerturbationKind::Synonym { n };
        let mut records = Vec::new();
        let mut skips = 0;
        for s in &sorted {
            match textperturb::perturb(s, kind, db, stop, item_seed(seed, &s.id, kind)) {
                Ok(r) => records.push(r),
                Err(e) if is_skippable(&e) => skips += 1,
                Err(e) => return Err(e.into()),
            }
        }
        let texts: Vec<(&str, &str)> = records
            .iter()
            .map(|r| (r.original.text.as_str(), r.perturbed.text.as_str()))
            .collect();
        let sims = similarities(gateway, &texts)?;
        if let Some(m) = stats::mean(&sims) {
            means.insert(n, m);
        }
        counts.insert(n, sims.len());
        skipped.insert(n, skips);
    }
    let mut r = CriterionReport::new(Criterion::C2, gateway.encoder_id(), meta);
    r.skipped = skipped.values().sum();
    r.per_n_means = Some(means);
    r.per_n_counts = Some(counts);
    r.per_n_skipped = Some(skipped);
    Ok(r.finish())
}

/// The perturbation compared against the paraphrase in criteria 3 and 4.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum MarginKind {
    Antonym,
    Jumble { n: usize },
}

impl MarginKind {
    pub fn criterion(self) -> Criterion {
        match self {
            MarginKind::Antonym => Criterion::C3,
            MarginKind::Jumble { .. } => Criterion::C4,
        }
    }

    fn perturbation(self) -> PerturbationKind {
        match self {
            MarginKind::Antonym => PerturbationKind::Antonym,
            MarginKind::Jumble { n } => PerturbationKind::Jumble { n },
        }
    }
}

/// Per-pair margins `cos(S, S'_P) - cos(S, S'_X)` in pair-id order, plus the
/// number of pairs whose perturbation failed.
pub fn margins(
    pairs_pos: &[SentencePair],
    gateway: &Gateway,
    kind: MarginKind,
    db: &LexicalDatabase,
    stop: &StopWords,
    seed: u64,
) -> Result<(Vec<f64>, usize), CriteriaError> {
    let pk = kind.perturbation();
    let mut texts: Vec<(String, String, String)> = Vec::new();
    let mut skipped = 0;
    for p in sorted_by_id(pairs_pos) {
        if p.label != Label::Paraphrase {
            return Err(CriteriaError::NotParaphrase(p.id.clone()));
        }
        match textperturb::perturb(&p.s1, pk, db, stop, item_seed(seed, &p.id, pk)) {
            Ok(r) => texts.push((p.s1.text.clone(), p.s2.text.clone(), r.perturbed.text)),
            Err(e) if is_skippable(&e) => skipped += 1,
            Err(e) => return Err(e.into()),
        }
    }
    let mut flat: Vec<(&str, &str)> = Vec::with_capacity(2 * texts.len());
    for (s, para, pert) in &texts {
        flat.push((s, para));
        flat.push((s, pert));
    }
    let sims = similarities(gateway, &flat)?;
    Ok((sims.chunks_exact(2).map(|c| c[0] - c[1]).collect(), skipped))
}

/// Criteria 3 (antonym) and 4 (jumble) as cumulative margin histograms.
#[allow(clippy::too_many_arguments)]
pub fn eval_margin(
    pairs_pos: &[SentencePair],
    gateway: &Gateway,
    kind: MarginKind,
    db: &LexicalDatabase,
    stop: &StopWords,
    seed: u64,
    epsilon_grid: &[f64],
    meta: &ReportMeta,
) -> Result<CriterionReport, CriteriaError> {
    if epsilon_grid.is_empty() || !is_ascending(epsilon_grid) {
        return Err(CriteriaError::InvalidGrid);
    }
    let (m, skipped) = margins(pairs_pos, gateway, kind, db, stop, seed)?;
    if m.is_empty() {
        return Err(CriteriaError::AllSkipped);
    }
    let histogram = MarginHistogram::from_margins(&m, epsilon_grid);
    let mut r = CriterionReport::new(kind.criterion(), gateway.encoder_id(), meta);
    if let MarginKind::Jumble { n } = kind {
        r.n = Some(n);
        r.jumble_scope = Some("all_tokens_including_punctuation".into());
    }
    r.fractions = Some(histogram.fractions());
    r.histogram = Some(histogram);
    r.skipped = skipped;
    Ok(r.finish())
}

/// Threshold verdict; thresholds are inclusive. Reports lacking the
/// quantity a criterion is judged on get `AdvisoryOnly`.
pub fn verdict(report: &CriterionReport, t: &VerdictConfig) -> Verdict {
    let judge = |ok: bool| if ok { Verdict::Pass } else { Verdict::Fail };
    match report.criterion {
        Criterion::C1 | Criterion::C1Alt => report
            .diff
            .map_or(Verdict::AdvisoryOnly, |d| judge(d >= t.c1_min_diff)),
        Criterion::C2 => report
            .per_n_means
            .as_ref()
            .and_then(|m| m.get(&1))
            .map_or(Verdict::AdvisoryOnly, |&m| judge(m >= t.c2_min_mean_at_n1)),
        Criterion::C3 | Criterion::C4 => report
            .pass_fraction_at(t.margin_epsilon)
            .map_or(Verdict::AdvisoryOnly, |f| judge(f >= t.margin_min_pass_fraction)),
    }
}

#[cfg(test)]
mod tests;
