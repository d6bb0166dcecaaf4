use std::sync::LazyLock;

use proptest::prelude::*;

use super::*;

const LEVIN: &str = "Levin's attorney, Bo Hitchcock, declined to comment last Friday";

static DB: LazyLock<LexicalDatabase> = LazyLock::new(|| {
    LexicalDatabase::load(concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/wordnet")).unwrap()
});

fn stop() -> StopWords {
    StopWords::english()
}

fn toks(words: &[&str]) -> Vec<String> {
    words.iter().map(|w| w.to_string()).collect()
}

/// First seed in 0..10_000 whose record satisfies `pred`.
fn find_seed(
    mut make: impl FnMut(u64) -> Result<PerturbationRecord, PerturbError>,
    pred: impl Fn(&PerturbationRecord) -> bool,
) -> PerturbationRecord {
    (0..10_000)
        .filter_map(|seed| make(seed).ok())
        .find(|r| pred(r))
        .expect("no seed produced the requested record")
}

#[test]
fn tokenizes_levin_sentence() {
    assert_eq!(
        tokenize(LEVIN),
        toks(&["Levin's", "attorney", ",", "Bo", "Hitchcock", ",", "declined", "to", "comment", "last", "Friday"])
    );
}

#[test]
fn tokenize_edge_cases() {
    assert!(tokenize("").is_empty());
    assert_eq!(detokenize(&[]), "");
    assert_eq!(tokenize("a.b"), toks(&["a.b"]));
    assert_eq!(tokenize("(well-known) ..."), toks(&["(", "well-known", ")", ".", ".", "."]));
    assert_eq!(tokenize("  spaced \t out  "), toks(&["spaced", "out"]));
}

#[test]
fn detokenize_attaches_punctuation() {
    assert_eq!(detokenize(&toks(&["Hello", ",", "world", "(", "x", ")", "."])), "Hello, world (x).");
}

#[test]
fn sentence_render_matches_source() {
    let s = Sentence::new("t1", LEVIN);
    assert_eq!(s.render(), LEVIN);
    assert_eq!(s.tokens().len(), 11);
}

#[test]
fn sentence_serializes_as_id_and_text() {
    let s = Sentence::new("t1", "Hi there.");
    let json = serde_json::to_string(&s).unwrap();
    assert_eq!(json, r#"{"id":"t1","text":"Hi there."}"#);
    let back: Sentence = serde_json::from_str(&json).unwrap();
    assert_eq!(back, s);
}

#[test]
fn candidates_on_levin_sentence() {
    let s = Sentence::new("t1", LEVIN);
    assert_eq!(content_candidates(&s, &DB, &stop()), vec![6, 8, 9]);
}

#[test]
fn stop_words_are_never_candidates() {
    let s = Sentence::new("t2", "It is what it was, and so on.");
    assert!(content_candidates(&s, &DB, &stop()).is_empty());
}

#[test]
fn candidate_matching_ignores_case() {
    let s = Sentence::new("t3", "The DECLINED xyzzy");
    assert_eq!(content_candidates(&s, &DB, &stop()), vec![1]);
    let rec = synonym_replace(&s, 1, &DB, &stop(), 0).unwrap();
    assert_eq!(rec.perturbed.text, "The REFUSED xyzzy");
}

#[test]
fn synonym_replacement_on_levin_sentence() {
    let s = Sentence::new("t1", LEVIN);
    let rec = find_seed(
        |seed| synonym_replace(&s, 1, &DB, &stop(), seed),
        |r| r.trace[0].pos == 6,
    );
    assert_eq!(rec.perturbed.text, "Levin's attorney, Bo Hitchcock, refused to comment last Friday");
    assert_eq!(
        rec.trace,
        vec![TraceEntry {
            pos: 6,
            before: "declined".into(),
            after: "refused".into()
        }]
    );
}

#[test]
fn too_few_candidates_is_an_error() {
    let s = Sentence::new("t4", "They declined to comment");
    assert_eq!(
        synonym_replace(&s, 3, &DB, &stop(), 1),
        Err(PerturbError::InsufficientCandidates { available: 2 })
    );
    assert_eq!(synonym_replace(&s, 0, &DB, &stop(), 1), Err(PerturbError::InvalidCount(0)));
}

#[test]
fn synonym_replacement_is_deterministic() {
    let s = Sentence::new("t1", LEVIN);
    let a = synonym_replace(&s, 2, &DB, &stop(), 42).unwrap();
    let b = synonym_replace(&s, 2, &DB, &stop(), 42).unwrap();
    assert_eq!(a, b);
    assert_eq!(a.to_json_line(), b.to_json_line());
}

#[test]
fn antonym_replacement_on_levin_sentence() {
    let s = Sentence::new("t1", LEVIN);
    let rec = find_seed(|seed| antonym_replace(&s, &DB, &stop(), seed), |r| r.trace[0].pos == 6);
    assert_eq!(rec.perturbed.text, "Levin's attorney, Bo Hitchcock, accepted to comment last Friday");
    assert_eq!(rec.trace.len(), 1);
}

#[test]
fn antonym_requires_a_candidate() {
    let s = Sentence::new("t5", "They commented on the xyzzy");
    assert_eq!(antonym_replace(&s, &DB, &stop(), 3), Err(PerturbError::NoAntonymCandidate));
}

#[test]
fn jumble_on_levin_sentence() {
    let s = Sentence::new("t1", LEVIN);
    let rec = find_seed(
        |seed| jumble(&s, 1, seed),
        |r| r.trace.iter().map(|t| t.pos).collect::<Vec<_>>() == [2, 7],
    );
    assert_eq!(rec.perturbed.text, "Levin's attorney to Bo Hitchcock, declined, comment last Friday");
}

#[test]
fn jumble_rejects_uniform_sentences() {
    let s = Sentence::new("t6", "aa aa aa");
    assert_eq!(jumble(&s, 1, 0), Err(PerturbError::UnjumblableSentence { n: 1 }));
    let s = Sentence::new("t7", "a b");
    assert_eq!(jumble(&s, 2, 0), Err(PerturbError::UnjumblableSentence { n: 2 }));
    // Four tokens but only one distinct partner for the three a's.
    let s = Sentence::new("t8", "a a a b");
    assert_eq!(jumble(&s, 2, 0), Err(PerturbError::UnjumblableSentence { n: 2 }));
    assert_eq!(jumble(&s, 0, 0), Err(PerturbError::InvalidCount(0)));
    assert!(jumble(&s, 1, 0).is_ok());
}

#[test]
fn casing_follows_original() {
    assert_eq!(apply_casing("DECLINED", "refused"), "REFUSED");
    assert_eq!(apply_casing("Declined", "refused"), "Refused");
    assert_eq!(apply_casing("declined", "refused"), "refused");
    assert_eq!(apply_casing("A", "big"), "Big");
}

#[test]
fn reinflection_mirrors_matched_rule() {
    let verb = PartOfSpeech::Verb;
    let running = DB.lemmatize_detailed("running", verb).unwrap();
    assert_eq!(reinflect(&DB, "jog", verb, running.inflection), "jogging");
    assert_eq!(reinflect(&DB, "sprint", verb, running.inflection), "sprinting");
    let declined = DB.lemmatize_detailed("declined", verb).unwrap();
    assert_eq!(reinflect(&DB, "refuse", verb, declined.inflection), "refused");
    assert_eq!(reinflect(&DB, "accept", verb, declined.inflection), "accepted");
    let studies = DB.lemmatize_detailed("studies", verb).unwrap();
    assert_eq!(reinflect(&DB, "learn", verb, studies.inflection), "learns");
    // Irregular forms have no suffix to mirror.
    let ran = DB.lemmatize_detailed("ran", verb).unwrap();
    assert_eq!(reinflect(&DB, "sprint", verb, ran.inflection), "sprint");
}

#[test]
fn bundled_stop_words() {
    let sw = stop();
    assert_eq!(sw.len(), 179);
    assert!(sw.contains("The"));
    assert!(!sw.contains("declined"));
    assert_eq!(sw.hash().len(), 64);
    assert_eq!(sw.hash(), StopWords::english().hash());
}

fn token_strategy() -> impl Strategy<Value = String> {
    prop::sample::select(vec!["a", "b", "c", "dog", ",", ".", "cat", "x-y", "it's"]).prop_map(String::from)
}

proptest! {
    #[test]
    fn render_is_whitespace_normalization(text in "[ a-zA-Z,.;'()\t-]{0,40}") {
        let s = Sentence::new("p", text.clone());
        prop_assert_eq!(s.render(), normalize_whitespace(&text));
        let again = Sentence::new("p", s.render());
        prop_assert_eq!(again.tokens(), s.tokens());
    }

    #[test]
    fn jumble_preserves_multiset(words in prop::collection::vec(token_strategy(), 2..14), n in 1usize..4, seed: u64) {
        let s = Sentence::new("p", words.join(" "));
        if let Ok(rec) = jumble(&s, n, seed) {
            let mut a = rec.original.tokens().to_vec();
            let mut b = rec.perturbed.tokens().to_vec();
            let diff: Vec<usize> = (0..a.len()).filter(|&i| a[i] != b[i]).collect();
            let traced: Vec<usize> = rec.trace.iter().map(|t| t.pos).collect();
            prop_assert_eq!(diff, traced);
            prop_assert_eq!(rec.trace.len(), 2 * n);
            a.sort();
            b.sort();
            prop_assert_eq!(a, b);
        }
    }
}
