//! SentEval-style probing: 10-fold cross-validated logistic regression over
//! frozen sentence embeddings.

mod logreg;

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::thread;

use ndarray::{Array2, ArrayView2, Axis};
use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::encoder::{EmbeddingVector, EncoderError, Gateway};
use crate::seed;
use crate::stats;

pub use logreg::{loss_and_gradient, train_logreg, LogReg, MAX_ITERATIONS, MIN_IMPROVEMENT};

pub const DEFAULT_FOLDS: usize = 10;

pub fn default_lambdas() -> Vec<f64> {
    vec![1e-4, 1e-3, 1e-2, 1e-1, 1.0]
}

#[derive(Debug, Error)]
pub enum ProbeError {
    #[error("dimension mismatch: {0} vs {1}")]
    DimMismatch(usize, usize),
    #[error("task {task} expects {expected} sentence(s) per sample")]
    ArityMismatch { task: ProbeTaskName, expected: usize },
    #[error("training loss is not finite")]
    NonFiniteLoss,
    #[error("label {label} outside 0..{num_classes}")]
    LabelOutOfRange { label: usize, num_classes: usize },
    #[error("{rows} feature rows but {labels} labels")]
    ShapeMismatch { rows: usize, labels: usize },
    #[error("class {class} has {have} samples; at least {need} are needed")]
    InsufficientSamples { class: usize, have: usize, need: usize },
    #[error("lambda grid is empty or has non-positive values")]
    BadLambdaGrid,
    #[error(transparent)]
    Encoder(#[from] EncoderError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ProbeTaskName {
    MR,
    CR,
    SUBJ,
    MPQA,
    SSTb,
    TREC,
    MRPC,
}

impl ProbeTaskName {
    pub const ALL: [ProbeTaskName; 7] = [
        ProbeTaskName::MR,
        ProbeTaskName::CR,
        ProbeTaskName::SUBJ,
        ProbeTaskName::MPQA,
        ProbeTaskName::SSTb,
        ProbeTaskName::TREC,
        ProbeTaskName::MRPC,
    ];

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|t| t.to_string().eq_ignore_ascii_case(s))
    }
}

impl fmt::Display for ProbeTaskName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Arity {
    SingleSentence,
    SentencePair,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProbeTask {
    pub name: ProbeTaskName,
    pub arity: Arity,
    pub num_classes: usize,
}

impl ProbeTask {
    pub fn new(name: ProbeTaskName) -> Self {
        let arity = if name == ProbeTaskName::MRPC {
            Arity::SentencePair
        } else {
            Arity::SingleSentence
        };
        let num_classes = if name == ProbeTaskName::TREC { 6 } else { 2 };
        ProbeTask { name, arity, num_classes }
    }
}

/// One labeled probe example; `s2` is present only for pair tasks.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProbeSample {
    pub label: usize,
    pub s1: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub s2: Option<String>,
}

/// `u` for single-sentence tasks; `[u, v, |u-v|, u*v]` for pair tasks.
pub fn featurize(task: &ProbeTask, u: &EmbeddingVector, v: Option<&EmbeddingVector>) -> Result<Vec<f64>, ProbeError> {
    match (task.arity, v) {
        (Arity::SingleSentence, None) => Ok(u.values.clone()),
        (Arity::SentencePair, Some(v)) => {
            if u.dim() != v.dim() {
                return Err(ProbeError::DimMismatch(u.dim(), v.dim()));
            }
            let (a, b) = (&u.values, &v.values);
            let mut f = Vec::with_capacity(4 * a.len());
            f.extend_from_slice(a);
            f.extend_from_slice(b);
            f.extend(a.iter().zip(b).map(|(x, y)| (x - y).abs()));
            f.extend(a.iter().zip(b).map(|(x, y)| x * y));
            Ok(f)
        }
        (Arity::SingleSentence, Some(_)) => Err(ProbeError::ArityMismatch { task: task.name, expected: 1 }),
        (Arity::SentencePair, None) => Err(ProbeError::ArityMismatch { task: task.name, expected: 2 }),
    }
}

/// Stratified fold assignment. Each class is shuffled on its own and its
/// `i`-th member goes to fold `i % k`.
pub fn stratified_folds(labels: &[usize], k: usize, seed: u64) -> Vec<usize> {
    let mut by_class: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (i, &l) in labels.iter().enumerate() {
        by_class.entry(l).or_default().push(i);
    }
    let mut rng = seed::rng(seed);
    let mut folds = vec![0; labels.len()];
    for members in by_class.values_mut() {
        members.shuffle(&mut rng);
        for (i, &idx) in members.iter().enumerate() {
            folds[idx] = i % k;
        }
    }
    folds
}

fn select_rows(x: ArrayView2<f64>, y: &[usize], rows: &[usize]) -> (Array2<f64>, Vec<usize>) {
    (x.select(Axis(0), rows), rows.iter().map(|&i| y[i]).collect())
}

/// Picks λ on fold 0 of a stratified inner split of the training data.
/// Ties go to the earlier grid value.
fn select_lambda(
    x: ArrayView2<f64>,
    y: &[usize],
    num_classes: usize,
    lambdas: &[f64],
    seed: u64,
) -> Result<f64, ProbeError> {
    let inner = stratified_folds(y, DEFAULT_FOLDS, seed);
    let val: Vec<usize> = (0..y.len()).filter(|&i| inner[i] == 0).collect();
    let fit: Vec<usize> = (0..y.len()).filter(|&i| inner[i] != 0).collect();
    let (xf, yf) = select_rows(x, y, &fit);
    let (xv, yv) = select_rows(x, y, &val);
    let mut best = (f64::NEG_INFINITY, lambdas[0]);
    for &lambda in lambdas {
        let acc = train_logreg(xf.view(), &yf, num_classes, lambda)?.accuracy(xv.view(), &yv);
        if acc > best.0 {
            best = (acc, lambda);
        }
    }
    Ok(best.1)
}

/// Fold-level outcome of a cross-validation run.
#[derive(Clone, Debug, PartialEq)]
pub struct CvOutcome {
    pub folds: Vec<usize>,
    pub fold_accuracies: Vec<f64>,
    pub fold_lambdas: Vec<f64>,
}

impl CvOutcome {
    pub fn mean_accuracy(&self) -> f64 {
        stats::mean(&self.fold_accuracies).unwrap_or(0.0)
    }

    /// Most frequent per-fold λ; ties go to the earlier grid value.
    pub fn lambda_mode(&self, lambdas: &[f64]) -> f64 {
        let mut best = (0, lambdas[0]);
        for &l in lambdas {
            let c = self.fold_lambdas.iter().filter(|&&f| f == l).count();
            if c > best.0 {
                best = (c, l);
            }
        }
        best.1
    }
}

/// Stratified `k`-fold cross-validation on precomputed features. Folds train
/// in parallel; results are ordered by fold index.
pub fn cross_validate_features(
    x: ArrayView2<f64>,
    y: &[usize],
    num_classes: usize,
    lambdas: &[f64],
    k: usize,
    seed: u64,
) -> Result<CvOutcome, ProbeError> {
    if lambdas.is_empty() || lambdas.iter().any(|&l| !(l > 0.0 && l.is_finite())) {
        return Err(ProbeError::BadLambdaGrid);
    }
    if x.nrows() != y.len() {
        return Err(ProbeError::ShapeMismatch {
            rows: x.nrows(),
            labels: y.len(),
        });
    }
    let mut counts = vec![0usize; num_classes];
    for &l in y {
        if l >= num_classes {
            return Err(ProbeError::LabelOutOfRange { label: l, num_classes });
        }
        counts[l] += 1;
    }
    if let Some((class, &have)) = counts.iter().enumerate().find(|(_, &c)| c < k) {
        return Err(ProbeError::InsufficientSamples { class, have, need: k });
    }
    let folds = stratified_folds(y, k, seed::substream(seed, "outer"));
    let run_fold = |f: usize| -> Result<(f64, f64), ProbeError> {
        let train: Vec<usize> = (0..y.len()).filter(|&i| folds[i] != f).collect();
        let test: Vec<usize> = (0..y.len()).filter(|&i| folds[i] == f).collect();
        let (xt, yt) = select_rows(x, y, &train);
        let (xs, ys) = select_rows(x, y, &test);
        let lambda = select_lambda(xt.view(), &yt, num_classes, lambdas, seed::substream(seed, &format!("inner-{f}")))?;
        let model = train_logreg(xt.view(), &yt, num_classes, lambda)?;
        Ok((model.accuracy(xs.view(), &ys), lambda))
    };
    let results: Vec<Result<(f64, f64), ProbeError>> = thread::scope(|scope| {
        let handles: Vec<_> = (0..k).map(|f| scope.spawn(move || run_fold(f))).collect();
        handles.into_iter().map(|h| h.join().expect("fold thread panicked")).collect()
    });
    let mut fold_accuracies = Vec::with_capacity(k);
    let mut fold_lambdas = Vec::with_capacity(k);
    for r in results {
        let (acc, lambda) = r?;
        fold_accuracies.push(acc);
        fold_lambdas.push(lambda);
    }
    Ok(CvOutcome {
        folds,
        fold_accuracies,
        fold_lambdas,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassifierResult {
    pub task: ProbeTask,
    pub encoder_id: String,
    pub num_samples: usize,
    pub fold_accuracies: Vec<f64>,
    pub mean_accuracy: f64,
    pub fold_lambdas: Vec<f64>,
    pub lambda_selected: f64,
    pub seed: u64,
}

/// Encodes the samples through `gateway` and cross-validates a logistic
/// regression probe on the resulting features.
pub fn cross_validate(
    task: &ProbeTask,
    samples: &[ProbeSample],
    gateway: &Gateway,
    lambdas: &[f64],
    seed: u64,
) -> Result<ClassifierResult, ProbeError> {
    let mut texts: Vec<String> = Vec::new();
    let mut slot: HashMap<&str, usize> = HashMap::new();
    for s in samples {
        for t in std::iter::once(&s.s1).chain(&s.s2) {
            slot.entry(t).or_insert_with(|| {
                texts.push(t.clone());
                texts.len() - 1
            });
        }
    }
    let vectors = if texts.is_empty() {
        Vec::new()
    } else {
        gateway.encode_batch(&texts)?
    };
    let mut rows = Vec::with_capacity(samples.len());
    for s in samples {
        let u = &vectors[slot[s.s1.as_str()]];
        let v = s.s2.as_deref().map(|t| &vectors[slot[t]]);
        rows.push(featurize(task, u, v)?);
    }
    let dim = rows.first().map_or(0, Vec::len);
    let x = Array2::from_shape_vec((rows.len(), dim), rows.concat()).expect("rows share one width");
    let y: Vec<usize> = samples.iter().map(|s| s.label).collect();
    let cv = cross_validate_features(x.view(), &y, task.num_classes, lambdas, DEFAULT_FOLDS, seed)?;
    Ok(ClassifierResult {
        task: *task,
        encoder_id: gateway.encoder_id().to_string(),
        num_samples: samples.len(),
        mean_accuracy: cv.mean_accuracy(),
        lambda_selected: cv.lambda_mode(lambdas),
        fold_accuracies: cv.fold_accuracies,
        fold_lambdas: cv.fold_lambdas,
        seed,
    })
}
