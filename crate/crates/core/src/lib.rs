//! Evaluation harness for black-box sentence encoders.
//!
//! The crate checks encoders against four perturbation criteria
//! (paraphrasing, synonym replacement, antonym replacement, jumbling) and a
//! cross-validated logistic-regression probe over frozen embeddings.
//!
//! Modules map onto the pipeline stages:
//!
//! - [`lexdb`] parses WordNet-format databases and answers synonym/antonym queries.
//! - [`textperturb`] tokenizes sentences and builds seeded perturbations.
//! - [`encoder`] talks to encoder backends, caches vectors, and computes cosine.
//! - [`criteria`] aggregates similarities into criterion reports and histograms.
//! - [`probe`] runs the 10-fold logistic-regression probe.
//! - [`corpus`] loads and samples the paraphrase and probe datasets.
//! - [`report`] renders CSV tables and SVG figures.
//! - [`run`] drives a full experiment grid from a config file.

pub mod corpus;
pub mod criteria;
pub mod encoder;
pub mod lexdb;
pub mod probe;
pub mod report;
pub mod run;
pub mod seed;
pub mod stats;
pub mod textperturb;

pub use criteria::{CriterionReport, Label, MarginHistogram, SentencePair, Verdict, VerdictConfig};
pub use encoder::{BackendKind, BackendSpec, EmbeddingVector, Gateway};
pub use lexdb::{LexicalDatabase, PartOfSpeech};
pub use textperturb::{PerturbationKind, PerturbationRecord, Sentence, StopWords};
