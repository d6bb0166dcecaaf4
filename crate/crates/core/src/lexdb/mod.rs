//! WordNet 3.x plain-text database reader with synonym and antonym queries.
//!
//! A database directory holds `index.{noun,verb,adj,adv}` and
//! `data.{noun,verb,adj,adv}`, plus optional `{pos}.exc` exception lists.
//! Everything is loaded eagerly into ordered maps; the result is immutable and
//! can be shared freely between threads.

mod morphy;
mod parse;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use morphy::{morph_rules, Inflection, Lemmatized, MorphRule};

pub const ANTONYM: &str = "!";

#[derive(Debug, Error)]
pub enum LexError {
    #[error("{file}:{line_no}: malformed line ({reason})")]
    MalformedLine {
        file: PathBuf,
        line_no: usize,
        reason: String,
    },
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("synset {from_offset:08} ({from_pos}) points to missing synset {to_offset:08} ({to_pos})")]
    DanglingPointer {
        from_offset: u64,
        from_pos: PartOfSpeech,
        to_offset: u64,
        to_pos: PartOfSpeech,
    },
    #[error("index entry {lemma} ({pos}) lists missing synset {offset:08}")]
    DanglingIndex {
        lemma: String,
        pos: PartOfSpeech,
        offset: u64,
    },
    #[error("synset {offset:08} ({pos}): pointer word index {index} exceeds word count {count}")]
    WordIndexOutOfRange {
        offset: u64,
        pos: PartOfSpeech,
        index: u8,
        count: usize,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PartOfSpeech {
    Noun,
    Verb,
    Adjective,
    Adverb,
}

impl PartOfSpeech {
    pub const ALL: [PartOfSpeech; 4] = [
        PartOfSpeech::Noun,
        PartOfSpeech::Verb,
        PartOfSpeech::Adjective,
        PartOfSpeech::Adverb,
    ];

    /// Suffix used in database file names (`index.adj`, `data.verb`, ...).
    pub fn file_suffix(self) -> &'static str {
        match self {
            PartOfSpeech::Noun => "noun",
            PartOfSpeech::Verb => "verb",
            PartOfSpeech::Adjective => "adj",
            PartOfSpeech::Adverb => "adv",
        }
    }

    pub fn code(self) -> char {
        match self {
            PartOfSpeech::Noun => 'n',
            PartOfSpeech::Verb => 'v',
            PartOfSpeech::Adjective => 'a',
            PartOfSpeech::Adverb => 'r',
        }
    }
}

impl fmt::Display for PartOfSpeech {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.file_suffix())
    }
}

/// `ss_type` field of a data line. Satellites are adjectives for lookup
/// purposes but keep their own code so files can be written back verbatim.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SynsetType {
    Noun,
    Verb,
    Adjective,
    AdjectiveSatellite,
    Adverb,
}

impl SynsetType {
    pub fn from_code(code: &str) -> Option<Self> {
        Some(match code {
            "n" => SynsetType::Noun,
            "v" => SynsetType::Verb,
            "a" => SynsetType::Adjective,
            "s" => SynsetType::AdjectiveSatellite,
            "r" => SynsetType::Adverb,
            _ => return None,
        })
    }

    pub fn code(self) -> &'static str {
        match self {
            SynsetType::Noun => "n",
            SynsetType::Verb => "v",
            SynsetType::Adjective => "a",
            SynsetType::AdjectiveSatellite => "s",
            SynsetType::Adverb => "r",
        }
    }

    pub fn pos(self) -> PartOfSpeech {
        match self {
            SynsetType::Noun => PartOfSpeech::Noun,
            SynsetType::Verb => PartOfSpeech::Verb,
            SynsetType::Adjective | SynsetType::AdjectiveSatellite => PartOfSpeech::Adjective,
            SynsetType::Adverb => PartOfSpeech::Adverb,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SynsetWord {
    /// Word as written in the data file (case kept, `_` for spaces).
    pub lemma: String,
    pub lex_id: u8,
    /// Adjective syntactic marker such as `p`, `a`, or `ip`.
    pub marker: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pointer {
    pub symbol: String,
    pub target_offset: u64,
    pub target_type: SynsetType,
    /// 1-based word index in the source synset; 0 means the whole synset.
    pub source_word: u8,
    /// 1-based word index in the target synset; 0 means the whole synset.
    pub target_word: u8,
}

impl Pointer {
    pub fn target_pos(&self) -> PartOfSpeech {
        self.target_type.pos()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerbFrame {
    pub frame: u8,
    pub word: u8,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Synset {
    pub offset: u64,
    pub lex_filenum: u8,
    pub ss_type: SynsetType,
    pub words: Vec<SynsetWord>,
    pub pointers: Vec<Pointer>,
    pub frames: Vec<VerbFrame>,
    pub gloss: String,
}

impl Synset {
    pub fn pos(&self) -> PartOfSpeech {
        self.ss_type.pos()
    }

    pub fn lemmas(&self) -> impl Iterator<Item = &str> {
        self.words.iter().map(|w| w.lemma.as_str())
    }

    /// 1-based positions of `lemma` (compared case-insensitively).
    fn word_positions(&self, lemma: &str) -> Vec<u8> {
        self.words
            .iter()
            .enumerate()
            .filter(|(_, w)| w.lemma.to_lowercase() == lemma)
            .map(|(i, _)| (i + 1) as u8)
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndexEntry {
    pub lemma: String,
    pub pos: PartOfSpeech,
    pub pointer_symbols: Vec<String>,
    pub tagsense_cnt: u32,
    pub offsets: Vec<u64>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LexicalDatabase {
    index: BTreeMap<(String, PartOfSpeech), IndexEntry>,
    synsets: BTreeMap<(u64, PartOfSpeech), Synset>,
    exceptions: BTreeMap<(PartOfSpeech, String), Vec<String>>,
}

fn normalize_key(word: &str) -> String {
    word.trim().to_lowercase().replace(' ', "_")
}

fn is_multiword(lemma: &str) -> bool {
    lemma.contains('_')
}

impl LexicalDatabase {
    /// Loads a database directory. Pointers are not checked here; call
    /// [`LexicalDatabase::validate`] for that.
    pub fn load(dir: impl AsRef<Path>) -> Result<Self, LexError> {
        parse::load_dir(dir.as_ref())
    }

    /// Writes the database back out in the on-disk field layout.
    pub fn write_to_dir(&self, dir: impl AsRef<Path>) -> Result<(), LexError> {
        parse::write_dir(self, dir.as_ref())
    }

    pub fn is_empty(&self) -> bool {
        self.synsets.is_empty() && self.index.is_empty()
    }

    pub fn synset_count(&self) -> usize {
        self.synsets.len()
    }

    pub fn index_entries(&self) -> impl Iterator<Item = &IndexEntry> {
        self.index.values()
    }

    pub fn synsets(&self) -> impl Iterator<Item = &Synset> {
        self.synsets.values()
    }

    pub fn synset(&self, offset: u64, pos: PartOfSpeech) -> Option<&Synset> {
        self.synsets.get(&(offset, pos))
    }

    pub fn index_entry(&self, lemma: &str, pos: PartOfSpeech) -> Option<&IndexEntry> {
        self.index.get(&(normalize_key(lemma), pos))
    }

    pub fn contains(&self, lemma: &str, pos: PartOfSpeech) -> bool {
        self.index.contains_key(&(normalize_key(lemma), pos))
    }

    pub(crate) fn exception_bases(&self, pos: PartOfSpeech, surface: &str) -> &[String] {
        self.exceptions
            .get(&(pos, surface.to_string()))
            .map(Vec::as_slice)
            .unwrap_or(&[])
    }

    /// Checks that every index offset and pointer target resolves, and that
    /// pointer word indices are within range.
    pub fn validate(&self) -> Result<(), LexError> {
        for entry in self.index.values() {
            for &offset in &entry.offsets {
                if !self.synsets.contains_key(&(offset, entry.pos)) {
                    return Err(LexError::DanglingIndex {
                        lemma: entry.lemma.clone(),
                        pos: entry.pos,
                        offset,
                    });
                }
            }
        }
        for synset in self.synsets.values() {
            for ptr in &synset.pointers {
                let Some(target) = self.synsets.get(&(ptr.target_offset, ptr.target_pos())) else {
                    return Err(LexError::DanglingPointer {
                        from_offset: synset.offset,
                        from_pos: synset.pos(),
                        to_offset: ptr.target_offset,
                        to_pos: ptr.target_pos(),
                    });
                };
                for (index, count) in [
                    (ptr.source_word, synset.words.len()),
                    (ptr.target_word, target.words.len()),
                ] {
                    if index as usize > count {
                        return Err(LexError::WordIndexOutOfRange {
                            offset: synset.offset,
                            pos: synset.pos(),
                            index,
                            count,
                        });
                    }
                }
            }
        }
        Ok(())
    }

    /// Maps an inflected surface form to an index lemma using morphy rules.
    pub fn lemmatize(&self, surface: &str, pos: PartOfSpeech) -> Option<String> {
        self.lemmatize_detailed(surface, pos).map(|l| l.lemma)
    }

    /// Like [`lemmatize`](Self::lemmatize) but also reports which rule matched,
    /// so callers can re-inflect a replacement word.
    pub fn lemmatize_detailed(&self, surface: &str, pos: PartOfSpeech) -> Option<Lemmatized> {
        morphy::lemmatize(self, &normalize_key(surface), pos)
    }

    fn synsets_of(&self, lemma: &str, pos: PartOfSpeech) -> impl Iterator<Item = &Synset> {
        self.index
            .get(&(lemma.to_string(), pos))
            .into_iter()
            .flat_map(|e| e.offsets.iter())
            .filter_map(move |&o| self.synsets.get(&(o, pos)))
    }

    /// Single-word co-members of every synset containing the lemmatized query.
    pub fn synonyms(&self, word: &str, pos: PartOfSpeech) -> BTreeSet<String> {
        let Some(lemma) = self.lemmatize(word, pos) else {
            return BTreeSet::new();
        };
        self.synsets_of(&lemma, pos)
            .flat_map(|s| s.lemmas())
            .map(str::to_lowercase)
            .filter(|l| *l != lemma && !is_multiword(l))
            .collect()
    }

    /// Words reached through antonym pointers from synsets containing the query.
    ///
    /// Lexical pointers (nonzero word indices) only apply when the query is the
    /// indexed source word, and only yield the indexed target word.
    pub fn antonyms(&self, word: &str, pos: PartOfSpeech) -> BTreeSet<String> {
        let Some(lemma) = self.lemmatize(word, pos) else {
            return BTreeSet::new();
        };
        let mut out = BTreeSet::new();
        for synset in self.synsets_of(&lemma, pos) {
            let positions = synset.word_positions(&lemma);
            for ptr in synset.pointers.iter().filter(|p| p.symbol == ANTONYM) {
                if ptr.source_word != 0 && !positions.contains(&ptr.source_word) {
                    continue;
                }
                let Some(target) = self.synsets.get(&(ptr.target_offset, ptr.target_pos())) else {
                    continue;
                };
                let picked: Vec<&str> = if ptr.target_word == 0 {
                    target.lemmas().collect()
                } else {
                    target
                        .words
                        .get(ptr.target_word as usize - 1)
                        .map(|w| w.lemma.as_str())
                        .into_iter()
                        .collect()
                };
                out.extend(
                    picked
                        .into_iter()
                        .map(str::to_lowercase)
                        .filter(|l| *l != lemma && !is_multiword(l)),
                );
            }
        }
        out
    }
}
