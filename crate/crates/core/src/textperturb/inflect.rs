use crate::lexdb::{Inflection, LexicalDatabase, PartOfSpeech};

fn is_vowel(c: char) -> bool {
    matches!(c, 'a' | 'e' | 'i' | 'o' | 'u')
}

/// Consonant-vowel-consonant ending, final letter not w/x/y.
fn ends_cvc(word: &str) -> bool {
    let c: Vec<char> = word.chars().collect();
    let n = c.len();
    n >= 3
        && !is_vowel(c[n - 1])
        && !matches!(c[n - 1], 'w' | 'x' | 'y')
        && is_vowel(c[n - 2])
        && !is_vowel(c[n - 3])
}

fn attach(word: &str, suffix: &str, double: bool) -> String {
    let ends_consonant_y =
        word.ends_with('y') && word.chars().rev().nth(1).is_some_and(|c| !is_vowel(c));
    match suffix {
        "s" | "es" | "ies" => {
            if ["s", "x", "z", "ch", "sh"].iter().any(|e| word.ends_with(e)) {
                format!("{word}es")
            } else if ends_consonant_y {
                format!("{}ies", &word[..word.len() - 1])
            } else {
                format!("{word}s")
            }
        }
        "ed" | "er" | "est" | "ing" => {
            if let Some(stem) = word.strip_suffix('e') {
                if suffix == "ing" && stem.ends_with('e') {
                    format!("{word}ing")
                } else {
                    format!("{stem}{suffix}")
                }
            } else if ends_consonant_y && suffix != "ing" {
                format!("{}i{suffix}", &word[..word.len() - 1])
            } else if double && ends_cvc(word) {
                let last = word.chars().last().unwrap();
                format!("{word}{last}{suffix}")
            } else {
                format!("{word}{suffix}")
            }
        }
        _ => format!("{word}{suffix}"),
    }
}

/// Inflects `replacement` (an index lemma) the way the original surface was
/// inflected. The matched rule is mirrored when the replacement carries the
/// rule's ending; otherwise the suffix is attached with e-dropping, y->i, and
/// consonant doubling. Results that do not lemmatize back to `replacement`
/// fall back to the bare lemma.
pub fn reinflect(
    db: &LexicalDatabase,
    replacement: &str,
    pos: PartOfSpeech,
    inflection: Inflection,
) -> String {
    let Inflection::Suffix { rule, undoubled } = inflection else {
        return replacement.to_string();
    };
    let candidate = if !rule.ending.is_empty() && replacement.ends_with(rule.ending) {
        format!("{}{}", &replacement[..replacement.len() - rule.ending.len()], rule.suffix)
    } else {
        attach(replacement, rule.suffix, undoubled)
    };
    if db.lemmatize(&candidate, pos).as_deref() == Some(replacement) {
        candidate
    } else {
        replacement.to_string()
    }
}

/// Gives `replacement` the capitalization pattern of `original`
/// (all caps, initial cap, or unchanged).
pub fn apply_casing(original: &str, replacement: &str) -> String {
    let letters: Vec<char> = original.chars().filter(|c| c.is_alphabetic()).collect();
    if letters.len() > 1 && letters.iter().all(|c| c.is_uppercase()) {
        return replacement.to_uppercase();
    }
    if original.chars().next().is_some_and(char::is_uppercase) {
        let mut chars = replacement.chars();
        return match chars.next() {
            Some(first) => first.to_uppercase().chain(chars).collect(),
            None => String::new(),
        };
    }
    replacement.to_string()
}
