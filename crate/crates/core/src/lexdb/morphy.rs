use super::{LexicalDatabase, PartOfSpeech};

/// One suffix-detachment rule: strip `suffix`, append `ending`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MorphRule {
    pub suffix: &'static str,
    pub ending: &'static str,
}

const fn rule(suffix: &'static str, ending: &'static str) -> MorphRule {
    MorphRule { suffix, ending }
}

const NOUN_RULES: &[MorphRule] = &[
    rule("s", ""),
    rule("ses", "s"),
    rule("xes", "x"),
    rule("zes", "z"),
    rule("ches", "ch"),
    rule("shes", "sh"),
    rule("men", "man"),
    rule("ies", "y"),
];

const VERB_RULES: &[MorphRule] = &[
    rule("s", ""),
    rule("ies", "y"),
    rule("es", "e"),
    rule("es", ""),
    rule("ed", "e"),
    rule("ed", ""),
    rule("ing", "e"),
    rule("ing", ""),
];

const ADJ_RULES: &[MorphRule] = &[rule("er", ""), rule("est", ""), rule("er", "e"), rule("est", "e")];

/// Detachment table for a part of speech, in application order.
pub fn morph_rules(pos: PartOfSpeech) -> &'static [MorphRule] {
    match pos {
        PartOfSpeech::Noun => NOUN_RULES,
        PartOfSpeech::Verb => VERB_RULES,
        PartOfSpeech::Adjective => ADJ_RULES,
        PartOfSpeech::Adverb => &[],
    }
}

/// How a surface form was reduced to its lemma.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Inflection {
    /// The surface is itself an index lemma.
    Base,
    /// Matched through an exception list; the suffix is unknown.
    Exception,
    /// Matched by a detachment rule, optionally after undoubling a final
    /// consonant (`running` -> `runn` -> `run`).
    Suffix { rule: MorphRule, undoubled: bool },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lemmatized {
    pub lemma: String,
    pub inflection: Inflection,
}

fn is_consonant(c: char) -> bool {
    c.is_ascii_alphabetic() && !matches!(c, 'a' | 'e' | 'i' | 'o' | 'u')
}

pub(super) fn lemmatize(db: &LexicalDatabase, surface: &str, pos: PartOfSpeech) -> Option<Lemmatized> {
    if surface.is_empty() {
        return None;
    }
    if db.contains(surface, pos) {
        return Some(Lemmatized {
            lemma: surface.to_string(),
            inflection: Inflection::Base,
        });
    }
    if let Some(base) = db
        .exception_bases(pos, surface)
        .iter()
        .find(|b| db.contains(b, pos))
    {
        return Some(Lemmatized {
            lemma: base.clone(),
            inflection: Inflection::Exception,
        });
    }
    let rules = morph_rules(pos);
    for &rule in rules {
        if let Some(stem) = strip(surface, rule.suffix) {
            let candidate = format!("{stem}{}", rule.ending);
            if db.contains(&candidate, pos) {
                return Some(Lemmatized {
                    lemma: candidate,
                    inflection: Inflection::Suffix { rule, undoubled: false },
                });
            }
        }
    }
    for &rule in rules
        .iter()
        .filter(|r| r.ending.is_empty() && matches!(r.suffix, "ed" | "ing" | "er" | "est"))
    {
        let Some(stem) = strip(surface, rule.suffix) else {
            continue;
        };
        let chars: Vec<char> = stem.chars().collect();
        let n = chars.len();
        if n >= 3 && chars[n - 1] == chars[n - 2] && is_consonant(chars[n - 1]) {
            let candidate: String = chars[..n - 1].iter().collect();
            if db.contains(&candidate, pos) {
                return Some(Lemmatized {
                    lemma: candidate,
                    inflection: Inflection::Suffix { rule, undoubled: true },
                });
            }
        }
    }
    None
}

fn strip<'a>(surface: &'a str, suffix: &str) -> Option<&'a str> {
    surface
        .strip_suffix(suffix)
        .filter(|stem| !stem.is_empty())
}
