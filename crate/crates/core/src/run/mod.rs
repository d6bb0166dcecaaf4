//! Runs a full experiment grid from a [`RunConfig`] and writes the artifact
//! tree (per-cell JSON reports, CSV tables, SVG figures, `MANIFEST.json`).

mod config;
#[cfg(test)]
mod tests;

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::{Arc, Mutex};

use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::corpus::{self, CorpusError, DatasetSpec};
use crate::criteria::{
    self, Criterion, CriteriaError, CriterionReport, Label, MarginKind, ReportMeta, SentencePair,
};
use crate::encoder::{EmbeddingCache, EncoderError, Gateway};
use crate::lexdb::LexicalDatabase;
use crate::probe::{self, ClassifierResult, ProbeError, ProbeSample, ProbeTask};
use crate::report;
use crate::seed;
use crate::textperturb::{Sentence, StopWords};

pub use config::{apply_override, is_probe_format, probe_task_for, RunConfig, RunCriterion};

pub const MANIFEST: &str = "MANIFEST.json";

#[derive(Debug, Error)]
pub enum RunError {
    #[error("config error: {0}")]
    Config(String),
    #[error("data error: {0}")]
    Data(String),
    #[error("backend error: {0}")]
    Backend(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

impl RunError {
    /// Process exit status for this error class.
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Config(_) => 2,
            RunError::Data(_) => 3,
            RunError::Backend(_) => 4,
            RunError::Io { .. } => 1,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            RunError::Config(_) => "config",
            RunError::Data(_) => "data",
            RunError::Backend(_) => "backend",
            RunError::Io { .. } => "io",
        }
    }
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> RunError + '_ {
    move |source| RunError::Io {
        path: path.to_path_buf(),
        source,
    }
}

impl From<CorpusError> for RunError {
    fn from(e: CorpusError) -> Self {
        RunError::Data(e.to_string())
    }
}

impl From<EncoderError> for RunError {
    fn from(e: EncoderError) -> Self {
        match e {
            EncoderError::InvalidSpec(m) => RunError::Config(m),
            other => RunError::Backend(other.to_string()),
        }
    }
}

impl From<CriteriaError> for RunError {
    fn from(e: CriteriaError) -> Self {
        match e {
            CriteriaError::Encoder(e) => e.into(),
            other => RunError::Data(other.to_string()),
        }
    }
}

impl From<ProbeError> for RunError {
    fn from(e: ProbeError) -> Self {
        match e {
            ProbeError::Encoder(e) => e.into(),
            other => RunError::Data(other.to_string()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DatasetStats {
    pub id: String,
    pub format: String,
    pub file: String,
    pub file_sha256: String,
    pub seed: u64,
    pub loaded: usize,
    pub skipped_lines: usize,
    pub duplicates: usize,
    pub used: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArtifactEntry {
    pub path: String,
    pub sha256: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub tool_version: String,
    pub config_hash: String,
    pub master_seed: u64,
    pub stopword_hash: String,
    pub config: Value,
    pub encoders: Vec<String>,
    pub datasets: Vec<DatasetStats>,
    pub artifacts: Vec<ArtifactEntry>,
}

#[derive(Clone, Debug)]
pub struct RunSummary {
    pub output_dir: PathBuf,
    pub reports: Vec<CriterionReport>,
    pub probes: Vec<ClassifierResult>,
    pub manifest: Manifest,
}

fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

fn sanitize(name: &str) -> String {
    name.chars()
        .map(|c| if c.is_ascii_alphanumeric() || matches!(c, '-' | '_' | '.') { c } else { '_' })
        .collect()
}

pub fn report_file_name(r: &CriterionReport) -> String {
    let mut name = format!(
        "{}__{}__{}",
        r.criterion.name(),
        sanitize(&r.encoder_id),
        sanitize(&r.dataset_id)
    );
    if let Some(n) = r.n {
        name.push_str(&format!("__n{n}"));
    }
    name + ".json"
}

pub fn probe_file_name(r: &ClassifierResult) -> String {
    format!("probe__{}__{}.json", sanitize(&r.encoder_id), r.task.name)
}

fn pretty<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("serializable") + "\n"
}

fn write_file(path: &Path, body: &str) -> Result<(), RunError> {
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent).map_err(io_err(parent))?;
    }
    fs::write(path, body).map_err(io_err(path))
}

/// Sentences and pairs one paraphrase dataset contributes to the run.
struct PairData {
    spec: DatasetSpec,
    seed: u64,
    pairs: Vec<SentencePair>,
    singles: Vec<Sentence>,
}

struct ProbeData {
    task: ProbeTask,
    seed: u64,
    samples: Vec<ProbeSample>,
}

fn dataset_seed(cfg: &RunConfig, d: &DatasetSpec) -> u64 {
    let tag = if is_probe_format(d.format) { "probe" } else { "pairs" };
    d.seed
        .unwrap_or_else(|| seed::substream(cfg.master_seed, &format!("dataset:{}:{tag}", d.id)))
}

fn file_stats(d: &DatasetSpec) -> Result<(String, String), RunError> {
    let bytes = fs::read(&d.path).map_err(|e| RunError::Data(format!("{}: {e}", d.path.display())))?;
    let file = d
        .path
        .file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_default();
    Ok((file, sha256_hex(&bytes)))
}

fn format_name(d: &DatasetSpec) -> String {
    serde_json::to_value(d.format)
        .ok()
        .and_then(|v| v.as_str().map(str::to_string))
        .unwrap_or_default()
}

fn load_pair_data(cfg: &RunConfig, d: &DatasetSpec) -> Result<(PairData, DatasetStats), RunError> {
    let ds_seed = dataset_seed(cfg, d);
    let loaded = corpus::load_pairs(d)?;
    let pairs = match d.sample.pairs_per_label {
        Some(k) => corpus::balanced_sample(&loaded.pairs, k, seed::substream(ds_seed, "pairs"))?,
        None => loaded.pairs.clone(),
    };
    let singles = match d.sample.singles {
        Some(k) => corpus::sample_singles(&pairs, k, seed::substream(ds_seed, "singles"))?,
        None => corpus::distinct_first_sentences(&pairs),
    };
    let (file, file_sha256) = file_stats(d)?;
    let stats = DatasetStats {
        id: d.id.to_string(),
        format: format_name(d),
        file,
        file_sha256,
        seed: ds_seed,
        loaded: loaded.pairs.len(),
        skipped_lines: loaded.skipped,
        duplicates: loaded.duplicates,
        used: pairs.len(),
    };
    Ok((
        PairData {
            spec: d.clone(),
            seed: ds_seed,
            pairs,
            singles,
        },
        stats,
    ))
}

fn load_probe_data(cfg: &RunConfig, d: &DatasetSpec) -> Result<(ProbeData, DatasetStats), RunError> {
    let task = probe_task_for(d).ok_or_else(|| RunError::Config(format!("no probe task for {}", d.id)))?;
    let samples = corpus::load_probe_samples(&d.path, &task)?;
    let (file, file_sha256) = file_stats(d)?;
    let ds_seed = dataset_seed(cfg, d);
    let stats = DatasetStats {
        id: d.id.to_string(),
        format: format_name(d),
        file,
        file_sha256,
        seed: ds_seed,
        loaded: samples.len(),
        skipped_lines: 0,
        duplicates: 0,
        used: samples.len(),
    };
    Ok((
        ProbeData {
            task,
            seed: ds_seed,
            samples,
        },
        stats,
    ))
}

struct Shared<'a> {
    cfg: &'a RunConfig,
    config_hash: String,
    stop: StopWords,
    db: Option<LexicalDatabase>,
    pair_data: Vec<PairData>,
    probe_data: Vec<ProbeData>,
}

impl Shared<'_> {
    fn meta(&self, d: &PairData) -> ReportMeta {
        ReportMeta {
            dataset_id: d.spec.id.to_string(),
            config_hash: self.config_hash.clone(),
            stopword_hash: self.stop.hash(),
            seed: d.seed,
            thresholds: self.cfg.thresholds.clone(),
        }
    }

    fn db(&self) -> Result<&LexicalDatabase, RunError> {
        self.db
            .as_ref()
            .ok_or_else(|| RunError::Config("wordnet_dir is required for c2 and c3".into()))
    }

    /// Cross-topic negatives for `d`: one sentence from `d`, one from the
    /// union of the other paraphrase datasets.
    fn cross_topic(&self, d: &PairData, k: usize) -> Result<Vec<SentencePair>, RunError> {
        let others: Vec<Sentence> = self
            .pair_data
            .iter()
            .filter(|o| o.spec.id != d.spec.id)
            .flat_map(|o| o.singles.iter().cloned())
            .collect();
        let corpora = vec![(d.spec.id.to_string(), d.singles.clone()), ("others".to_string(), others)];
        Ok(criteria::make_cross_topic_negatives(
            &corpora,
            k,
            seed::substream(d.seed, "cross_topic"),
        )?)
    }

    fn run_encoder(&self, gateway: &Gateway) -> Result<(Vec<CriterionReport>, Vec<ClassifierResult>), RunError> {
        let cfg = self.cfg;
        let mut reports = Vec::new();
        for d in &self.pair_data {
            let meta = self.meta(d);
            let positives: Vec<SentencePair> =
                d.pairs.iter().filter(|p| p.label == Label::Paraphrase).cloned().collect();
            if cfg.wants(RunCriterion::C1) {
                reports.push(criteria::eval_c1(&d.pairs, gateway, Criterion::C1, &meta)?);
            }
            if cfg.wants(RunCriterion::C1Alt) {
                let mut pairs = positives.clone();
                pairs.extend(self.cross_topic(d, positives.len())?);
                reports.push(criteria::eval_c1(&pairs, gateway, Criterion::C1Alt, &meta)?);
            }
            if cfg.wants(RunCriterion::C2) {
                let s = seed::substream(d.seed, "c2");
                reports.push(criteria::eval_c2(&d.singles, gateway, self.db()?, &self.stop, &cfg.n_values, s, &meta)?);
            }
            if cfg.wants(RunCriterion::C3) {
                let s = seed::substream(d.seed, "c3");
                reports.push(criteria::eval_margin(
                    &positives,
                    gateway,
                    MarginKind::Antonym,
                    self.db()?,
                    &self.stop,
                    s,
                    &cfg.epsilon_grid,
                    &meta,
                )?);
            }
            if cfg.wants(RunCriterion::C4) {
                let s = seed::substream(d.seed, "c4");
                // Jumbling never consults the lexicon.
                let empty = LexicalDatabase::default();
                reports.push(criteria::eval_margin(
                    &positives,
                    gateway,
                    MarginKind::Jumble { n: cfg.jumble_n },
                    self.db.as_ref().unwrap_or(&empty),
                    &self.stop,
                    s,
                    &cfg.epsilon_grid,
                    &meta,
                )?);
            }
        }
        let mut probes = Vec::new();
        if cfg.wants(RunCriterion::Probe) {
            for p in &self.probe_data {
                probes.push(probe::cross_validate(&p.task, &p.samples, gateway, &cfg.lambdas, p.seed)?);
            }
        }
        Ok((reports, probes))
    }
}

/// Output directory state that `run` may replace.
fn check_replaceable(dir: &Path) -> Result<(), RunError> {
    if !dir.exists() {
        return Ok(());
    }
    if !dir.is_dir() {
        return Err(RunError::Config(format!("{} exists and is not a directory", dir.display())));
    }
    let empty = fs::read_dir(dir).map_err(io_err(dir))?.next().is_none();
    if empty || dir.join(MANIFEST).is_file() {
        Ok(())
    } else {
        Err(RunError::Config(format!(
            "{} is not empty and holds no {MANIFEST}; refusing to overwrite",
            dir.display()
        )))
    }
}

fn staging_dir(out: &Path) -> PathBuf {
    let name = out.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
    out.with_file_name(format!(".{name}.staging-{}", std::process::id()))
}

/// Runs every configured criterion for every encoder and dataset, writing the
/// artifact tree to `cfg.output_dir`. Output is assembled in a sibling
/// staging directory and moved into place at the end, so a failed run leaves
/// any previous results untouched.
pub fn run(cfg: &RunConfig) -> Result<RunSummary, RunError> {
    cfg.validate()?;
    check_replaceable(&cfg.output_dir)?;

    let stop = match &cfg.stopwords {
        Some(p) => StopWords::from_file(p).map_err(|e| RunError::Data(format!("{}: {e}", p.display())))?,
        None => StopWords::english(),
    };
    let db = match &cfg.wordnet_dir {
        Some(dir) => Some(LexicalDatabase::load(dir).map_err(|e| RunError::Data(e.to_string()))?),
        None => None,
    };

    let mut stats = Vec::new();
    let mut pair_data = Vec::new();
    for d in cfg.paraphrase_datasets() {
        let (data, st) = load_pair_data(cfg, d)?;
        pair_data.push(data);
        stats.push(st);
    }
    let mut probe_data = Vec::new();
    if cfg.wants(RunCriterion::Probe) {
        for d in cfg.probe_datasets() {
            let (data, st) = load_probe_data(cfg, d)?;
            probe_data.push(data);
            stats.push(st);
        }
    }

    let cache = match &cfg.cache_path {
        Some(p) => EmbeddingCache::load(p)?,
        None => EmbeddingCache::default(),
    };
    let cache = Arc::new(Mutex::new(cache));
    let gateways = cfg
        .encoders
        .iter()
        .map(|spec| Gateway::new(spec.clone(), Arc::clone(&cache)))
        .collect::<Result<Vec<_>, _>>()?;

    let shared = Shared {
        cfg,
        config_hash: cfg.config_hash(),
        stop,
        db,
        pair_data,
        probe_data,
    };
    let results: Vec<Result<_, RunError>> = std::thread::scope(|scope| {
        let handles: Vec<_> = gateways
            .iter()
            .map(|g| {
                let shared = &shared;
                scope.spawn(move || shared.run_encoder(g))
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("encoder worker panicked")).collect()
    });
    // Vectors computed before a failure are still worth keeping.
    if let Some(p) = &cfg.cache_path {
        cache.lock().expect("cache lock").save(p)?;
    }
    let mut reports = Vec::new();
    let mut probes = Vec::new();
    for r in results {
        let (rep, pr) = r?;
        reports.extend(rep);
        probes.extend(pr);
    }

    let mut manifest = Manifest {
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        config_hash: shared.config_hash.clone(),
        master_seed: cfg.master_seed,
        stopword_hash: shared.stop.hash(),
        config: serde_json::from_str(&cfg.canonical_json()).expect("canonical config is JSON"),
        encoders: cfg.encoders.iter().map(|e| e.encoder_id.clone()).collect(),
        datasets: stats,
        artifacts: Vec::new(),
    };

    let out = &cfg.output_dir;
    let staging = staging_dir(out);
    if staging.exists() {
        fs::remove_dir_all(&staging).map_err(io_err(&staging))?;
    }
    let written = write_tree(&staging, &reports, &probes, &mut manifest);
    if let Err(e) = written {
        let _ = fs::remove_dir_all(&staging);
        return Err(e);
    }
    if out.exists() {
        fs::remove_dir_all(out).map_err(io_err(out))?;
    }
    fs::rename(&staging, out).map_err(io_err(out))?;
    Ok(RunSummary {
        output_dir: out.clone(),
        reports,
        probes,
        manifest,
    })
}

fn write_tree(
    dir: &Path,
    reports: &[CriterionReport],
    probes: &[ClassifierResult],
    manifest: &mut Manifest,
) -> Result<(), RunError> {
    fs::create_dir_all(dir.join("reports")).map_err(io_err(dir))?;
    for r in reports {
        write_file(&dir.join("reports").join(report_file_name(r)), &pretty(r))?;
    }
    for p in probes {
        write_file(&dir.join("reports").join(probe_file_name(p)), &pretty(p))?;
    }
    render_outputs(dir, reports, probes)?;
    manifest.artifacts = list_artifacts(dir)?;
    write_file(&dir.join(MANIFEST), &pretty(manifest))
}

/// CSV tables for the criteria present plus one SVG per histogram report.
fn render_outputs(dir: &Path, reports: &[CriterionReport], probes: &[ClassifierResult]) -> Result<(), RunError> {
    let has = |c: Criterion| reports.iter().any(|r| r.criterion == c);
    if has(Criterion::C1) {
        write_file(&dir.join("table_c1.csv"), &report::table_c1(reports, Criterion::C1))?;
    }
    if has(Criterion::C1Alt) {
        write_file(&dir.join("table_c1_alt.csv"), &report::table_c1(reports, Criterion::C1Alt))?;
    }
    if has(Criterion::C2) {
        write_file(&dir.join("table_c2.csv"), &report::table_c2(reports))?;
    }
    if !probes.is_empty() {
        write_file(&dir.join("table_probe.csv"), &report::table_probe(probes))?;
    }
    for r in reports.iter().filter(|r| matches!(r.criterion, Criterion::C3 | Criterion::C4)) {
        let svg = report::render_histogram_svg(r).map_err(|e| RunError::Data(e.to_string()))?;
        let name = report_file_name(r).replace(".json", ".svg");
        write_file(&dir.join("figures").join(name), &svg)?;
    }
    Ok(())
}

fn walk(root: &Path, dir: &Path, out: &mut Vec<ArtifactEntry>) -> Result<(), RunError> {
    for entry in fs::read_dir(dir).map_err(io_err(dir))? {
        let path = entry.map_err(io_err(dir))?.path();
        if path.is_dir() {
            walk(root, &path, out)?;
            continue;
        }
        let rel = path.strip_prefix(root).expect("under root");
        let rel = rel.components().map(|c| c.as_os_str().to_string_lossy()).collect::<Vec<_>>().join("/");
        if rel == MANIFEST {
            continue;
        }
        let bytes = fs::read(&path).map_err(io_err(&path))?;
        out.push(ArtifactEntry {
            path: rel,
            sha256: sha256_hex(&bytes),
        });
    }
    Ok(())
}

/// Every file under `dir` except the manifest, sorted by relative path.
pub fn list_artifacts(dir: &Path) -> Result<Vec<ArtifactEntry>, RunError> {
    let mut out = Vec::new();
    walk(dir, dir, &mut out)?;
    out.sort_by(|a, b| a.path.cmp(&b.path));
    Ok(out)
}

pub fn read_manifest(dir: &Path) -> Result<Manifest, RunError> {
    let path = dir.join(MANIFEST);
    let text = fs::read_to_string(&path).map_err(io_err(&path))?;
    serde_json::from_str(&text).map_err(|e| RunError::Data(format!("{}: {e}", path.display())))
}

fn csv_rows(dir: &Path, name: &str) -> Result<Option<Vec<Vec<String>>>, RunError> {
    let path = dir.join(name);
    if !path.is_file() {
        return Ok(None);
    }
    let text = fs::read_to_string(&path).map_err(io_err(&path))?;
    Ok(Some(
        text.lines().map(|l| l.split(',').map(str::to_string).collect()).collect(),
    ))
}

/// Non-empty CSV cells whose backing report JSON is absent.
pub fn closure_problems(dir: &Path) -> Result<Vec<String>, RunError> {
    let mut problems = Vec::new();
    let mut need = |table: &str, file: String| {
        let msg = format!("{table} cites missing reports/{file}");
        if !dir.join("reports").join(&file).is_file() && !problems.contains(&msg) {
            problems.push(msg);
        }
    };
    for (table, crit) in [("table_c1.csv", "c1"), ("table_c1_alt.csv", "c1_alt"), ("table_c2.csv", "c2")] {
        let Some(rows) = csv_rows(dir, table)? else { continue };
        let Some((header, body)) = rows.split_first() else { continue };
        for row in body {
            for (enc, cell) in header.iter().zip(row).skip(2) {
                if !cell.is_empty() {
                    need(table, format!("{crit}__{}__{}.json", sanitize(enc), sanitize(&row[0])));
                }
            }
        }
    }
    if let Some(rows) = csv_rows(dir, "table_probe.csv")? {
        if let Some((header, body)) = rows.split_first() {
            for row in body {
                let tasks = header.iter().zip(row).skip(1).filter(|(t, _)| *t != "Avg");
                for (task, cell) in tasks {
                    if !cell.is_empty() {
                        need("table_probe.csv", format!("probe__{}__{task}.json", sanitize(&row[0])));
                    }
                }
            }
        }
    }
    Ok(problems)
}

/// Files that differ from the manifest (missing, unlisted, or with a changed
/// hash) followed by CSV cells without a report. Empty when the tree is intact.
pub fn verify_manifest(dir: &Path) -> Result<Vec<String>, RunError> {
    let listed: BTreeMap<String, String> =
        read_manifest(dir)?.artifacts.into_iter().map(|a| (a.path, a.sha256)).collect();
    let actual: BTreeMap<String, String> =
        list_artifacts(dir)?.into_iter().map(|a| (a.path, a.sha256)).collect();
    let mut problems = Vec::new();
    for (path, hash) in &listed {
        match actual.get(path) {
            None => problems.push(format!("missing {path}")),
            Some(h) if h != hash => problems.push(format!("changed {path}")),
            _ => {}
        }
    }
    for path in actual.keys().filter(|p| !listed.contains_key(*p)) {
        problems.push(format!("unlisted {path}"));
    }
    problems.extend(closure_problems(dir)?);
    Ok(problems)
}

/// Re-renders tables and figures from the JSON reports in `dir/reports`,
/// ordered as in the manifest's config when one is present.
pub fn report_from_dir(dir: &Path) -> Result<(), RunError> {
    let reports_dir = dir.join("reports");
    let mut names: Vec<PathBuf> = fs::read_dir(&reports_dir)
        .map_err(io_err(&reports_dir))?
        .map(|e| e.map(|e| e.path()).map_err(io_err(&reports_dir)))
        .collect::<Result<_, _>>()?;
    names.retain(|p| p.extension().is_some_and(|e| e == "json"));
    names.sort();
    let mut reports: Vec<CriterionReport> = Vec::new();
    let mut probes: Vec<ClassifierResult> = Vec::new();
    for path in names {
        let text = fs::read_to_string(&path).map_err(io_err(&path))?;
        let bad = |e: serde_json::Error| RunError::Data(format!("{}: {e}", path.display()));
        let is_probe = path.file_name().is_some_and(|n| n.to_string_lossy().starts_with("probe__"));
        if is_probe {
            probes.push(serde_json::from_str(&text).map_err(bad)?);
        } else {
            reports.push(serde_json::from_str(&text).map_err(bad)?);
        }
    }
    let manifest = read_manifest(dir).ok();
    if let Some(m) = &manifest {
        let rank = |list: &[String], key: &str| list.iter().position(|x| x == key).unwrap_or(usize::MAX);
        let datasets: Vec<String> = m.datasets.iter().map(|d| d.id.clone()).collect();
        reports.sort_by_key(|r| (rank(&m.encoders, &r.encoder_id), rank(&datasets, &r.dataset_id)));
        probes.sort_by_key(|p| rank(&m.encoders, &p.encoder_id));
    }
    render_outputs(dir, &reports, &probes)?;
    if let Some(mut m) = manifest {
        m.artifacts = list_artifacts(dir)?;
        write_file(&dir.join(MANIFEST), &pretty(&m))?;
    }
    Ok(())
}
