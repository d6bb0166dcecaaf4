use std::sync::LazyLock;

use num::bigint::BigInt;
use num::rational::BigRational;
use num::ToPrimitive;
use proptest::prelude::*;
use rand::Rng;

use super::*;
use crate::encoder::BackendSpec;

static DB: LazyLock<LexicalDatabase> = LazyLock::new(|| {
    LexicalDatabase::load(concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/wordnet")).unwrap()
});

fn mock(dim: usize) -> Gateway {
    Gateway::uncached(BackendSpec::mock("mock", dim, 11)).unwrap()
}

fn meta() -> ReportMeta {
    ReportMeta::for_dataset("fixture")
}

fn pair(id: &str, a: &str, b: &str, label: Label) -> SentencePair {
    SentencePair::new(id, Sentence::new(format!("{id}/1"), a), Sentence::new(format!("{id}/2"), b), label).unwrap()
}

const SENTENCES: &[&str] = &[
    "Levin's attorney, Bo Hitchcock, declined to comment last Friday",
    "The manager asked to repair the honest house last year.",
    "The teacher often wanted the busy and cold door.",
    "My friend opened to finish the small plan last month.",
    "A neighbor, a slow and dark person, remembered the movie on week.",
    "The old man watched the question on Friday.",
];

fn sentences() -> Vec<Sentence> {
    SENTENCES
        .iter()
        .enumerate()
        .map(|(i, t)| Sentence::new(format!("s{i}"), *t))
        .collect()
}

#[test]
fn histogram_counts_strictly_greater() {
    let h = MarginHistogram::from_margins(&[-0.2, 0.05, 0.15], &[-0.3, 0.0, 0.1]);
    assert_eq!(h.cumulative_counts, [3, 2, 1]);
    assert_eq!(h.total, 3);
    let h = MarginHistogram::from_margins(&[0.1, 0.1], &[0.0, 0.1]);
    assert_eq!(h.cumulative_counts, [2, 0]);
    let h = MarginHistogram::from_margins(&[], &[0.0]);
    assert_eq!(h.cumulative_counts, [0]);
    assert_eq!(h.fractions(), [0.0]);
}

#[test]
fn default_grid_has_thirteen_points() {
    let g = default_epsilon_grid();
    assert_eq!(g.len(), 13);
    assert_eq!(g[0], -0.3);
    assert_eq!(g[6], 0.0);
    assert_eq!(g[8], 0.1);
    assert_eq!(g[12], 0.3);
    assert!(is_ascending(&g));
    assert!(!is_ascending(&[0.0, 0.0]));
}

#[test]
fn pass_fraction_lookup() {
    let h = MarginHistogram::from_margins(&[0.0, 0.2, 0.3, 0.5], &default_epsilon_grid());
    assert_eq!(h.pass_fraction_at(0.10), Some(0.75));
    assert_eq!(h.pass_fraction_at(0.07), Some(0.75));
    assert_eq!(h.pass_fraction_at(0.31), None);
}

fn brute_force(margins: &[f64], grid: &[f64]) -> Vec<usize> {
    grid.iter().map(|&e| margins.iter().filter(|&&m| m > e).count()).collect()
}

proptest! {
    #[test]
    fn histogram_matches_recount(margins in prop::collection::vec(-1.0f64..1.0, 0..60)) {
        let grid = default_epsilon_grid();
        let h = MarginHistogram::from_margins(&margins, &grid);
        prop_assert_eq!(&h.cumulative_counts, &brute_force(&margins, &grid));
        prop_assert!(h.is_monotone());
    }
}

fn exact_mean(values: &[f64]) -> f64 {
    let total = values
        .iter()
        .map(|&v| BigRational::from_float(v).unwrap())
        .fold(BigRational::from_integer(BigInt::from(0)), |a, b| a + b);
    (total / BigRational::from_integer(BigInt::from(values.len()))).to_f64().unwrap()
}

#[test]
fn compensated_mean_matches_exact_rational() {
    let mut rng = seed::rng(5);
    let values: Vec<f64> = (0..100_000)
        .map(|_| rng.gen_range(-1.0..1.0) * 10f64.powi(rng.gen_range(-6..6)))
        .collect();
    let got = stats::mean(&values).unwrap();
    assert!((got - exact_mean(&values)).abs() <= 1e-12);
}

#[test]
fn diff_is_shift_invariant() {
    let mut rng = seed::rng(8);
    let pos: Vec<f64> = (0..500).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let neg: Vec<f64> = (0..300).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let (p, n, d) = c1_aggregate(&pos, &neg).unwrap();
    assert_eq!(d, p - n);
    for c in [-0.5, 0.125, 0.3] {
        let sp: Vec<f64> = pos.iter().map(|x| x + c).collect();
        let sn: Vec<f64> = neg.iter().map(|x| x + c).collect();
        let (_, _, dc) = c1_aggregate(&sp, &sn).unwrap();
        assert!((dc - d).abs() < 1e-12);
    }
}

#[test]
fn c1_under_mock_encoder() {
    let pairs = vec![
        pair("p1", "the cat sat on the mat", "the mat sat on the cat", Label::Paraphrase),
        pair("p2", "green ideas sleep", "sleep green ideas", Label::Paraphrase),
        pair("n1", "quick brown fox", "seven purple elephants", Label::NonParaphrase),
        pair("n2", "rain falls softly", "markets closed higher today", Label::NonParaphrase),
    ];
    let r = eval_c1(&pairs, &mock(4096), Criterion::C1, &meta()).unwrap();
    assert!((r.pos_mean.unwrap() - 1.0).abs() < 1e-9);
    assert!(r.diff.unwrap() >= 0.9);
    assert_eq!(r.diff.unwrap(), r.pos_mean.unwrap() - r.neg_mean.unwrap());
    assert_eq!((r.pos_count, r.neg_count), (Some(2), Some(2)));
    assert_eq!(r.verdict, Verdict::Pass);
}

#[test]
fn c1_requires_both_labels() {
    let pairs = vec![pair("p1", "a b", "b a", Label::Paraphrase)];
    assert!(matches!(
        eval_c1(&pairs, &mock(64), Criterion::C1, &meta()),
        Err(CriteriaError::EmptyClass(Label::NonParaphrase))
    ));
}

#[test]
fn pair_sides_must_differ() {
    let s = Sentence::new("x", "a");
    assert!(SentencePair::new("p", s.clone(), s, Label::Paraphrase).is_err());
}

fn corpora() -> Vec<(String, Vec<Sentence>)> {
    let make = |name: &str, n: usize| {
        (
            name.to_string(),
            (0..n).map(|i| Sentence::new(format!("{name}-{i}"), format!("{name} sentence {i}"))).collect(),
        )
    };
    vec![make("qqp", 60), make("mrpc", 50)]
}

#[test]
fn cross_topic_negatives() {
    let c = corpora();
    let one = make_cross_topic_negatives(&c, 1, 3).unwrap();
    assert_eq!(one.len(), 1);
    assert!(one[0].s1.id.starts_with("qqp-") && one[0].s2.id.starts_with("mrpc-"));
    assert_eq!(one[0].label, Label::NonParaphrase);

    let a = make_cross_topic_negatives(&c, 2400, 7).unwrap();
    let b = make_cross_topic_negatives(&c, 2400, 7).unwrap();
    assert_eq!(a, b);
    let distinct: HashSet<(&str, &str)> = a.iter().map(|p| (p.s1.id.as_str(), p.s2.id.as_str())).collect();
    assert_eq!(distinct.len(), 2400);

    assert!(matches!(
        make_cross_topic_negatives(&c[..1], 1, 0),
        Err(CriteriaError::InsufficientCorpora)
    ));
    assert!(matches!(
        make_cross_topic_negatives(&c, 3001, 0),
        Err(CriteriaError::InsufficientSentences { have: 3000, .. })
    ));
}

#[test]
fn c2_means_sit_strictly_inside_unit_interval() {
    let r = eval_c2(&sentences(), &mock(4096), &DB, &StopWords::english(), &[1, 2, 3], 4, &meta()).unwrap();
    let means = r.per_n_means.as_ref().unwrap();
    for (&n, &m) in means {
        assert!(m > 0.0 && m < 1.0, "n={n} mean={m}");
    }
    // Replacing more words moves the sentence further away.
    assert!(means[&1] > means[&3]);
    let counts = r.per_n_counts.as_ref().unwrap();
    let skipped = r.per_n_skipped.as_ref().unwrap();
    for n in [1, 2, 3] {
        assert_eq!(counts[&n] + skipped[&n], SENTENCES.len());
    }
}

#[test]
fn c2_with_no_n_values_is_vacuous() {
    let r = eval_c2(&sentences(), &mock(64), &DB, &StopWords::english(), &[], 4, &meta()).unwrap();
    assert!(r.per_n_means.as_ref().unwrap().is_empty());
    assert_eq!(r.verdict, Verdict::AdvisoryOnly);
    assert!(matches!(
        eval_c2(&sentences(), &mock(64), &DB, &StopWords::english(), &[6], 4, &meta()),
        Err(CriteriaError::InvalidN(6))
    ));
}

fn self_paraphrases() -> Vec<SentencePair> {
    sentences()
        .iter()
        .enumerate()
        .map(|(i, s)| pair(&format!("q{i}"), &s.text, &s.text, Label::Paraphrase))
        .collect()
}

#[test]
fn margins_are_nonnegative_when_paraphrase_is_identical() {
    let g = mock(4096);
    let stop = StopWords::english();
    let (m, skipped) = margins(&self_paraphrases(), &g, MarginKind::Antonym, &DB, &stop, 1).unwrap();
    assert_eq!(m.len() + skipped, SENTENCES.len());
    assert!(m.iter().all(|&x| x > 0.0), "{m:?}");
    // Jumbling keeps the token multiset, which the mock encoder cannot see.
    let (m, _) = margins(&self_paraphrases(), &g, MarginKind::Jumble { n: 3 }, &DB, &stop, 1).unwrap();
    assert!(m.iter().all(|&x| x == 0.0), "{m:?}");
}

#[test]
fn margin_report_shape() {
    let grid = default_epsilon_grid();
    let r = eval_margin(
        &self_paraphrases(),
        &mock(4096),
        MarginKind::Jumble { n: 3 },
        &DB,
        &StopWords::english(),
        1,
        &grid,
        &meta(),
    )
    .unwrap();
    assert_eq!(r.criterion, Criterion::C4);
    assert_eq!(r.n, Some(3));
    let h = r.histogram.as_ref().unwrap();
    assert_eq!(h.total, SENTENCES.len());
    // All margins are exactly zero: counted at ε < 0, not at ε ≥ 0.
    assert_eq!(h.cumulative_counts[5], SENTENCES.len());
    assert_eq!(h.cumulative_counts[6], 0);
    assert_eq!(r.verdict, Verdict::Fail);
}

#[test]
fn margin_errors() {
    let g = mock(64);
    let stop = StopWords::english();
    let grid = default_epsilon_grid();
    let flat = vec![pair("z", "aa aa aa", "aa aa", Label::Paraphrase)];
    assert!(matches!(
        eval_margin(&flat, &g, MarginKind::Jumble { n: 1 }, &DB, &stop, 0, &grid, &meta()),
        Err(CriteriaError::AllSkipped)
    ));
    let neg = vec![pair("z", "a b", "b a", Label::NonParaphrase)];
    assert!(matches!(
        eval_margin(&neg, &g, MarginKind::Jumble { n: 1 }, &DB, &stop, 0, &grid, &meta()),
        Err(CriteriaError::NotParaphrase(_))
    ));
    assert!(matches!(
        eval_margin(&neg, &g, MarginKind::Antonym, &DB, &stop, 0, &[0.1, 0.0], &meta()),
        Err(CriteriaError::InvalidGrid)
    ));
}

fn report(criterion: Criterion) -> CriterionReport {
    CriterionReport::new(criterion, "e", &meta())
}

#[test]
fn verdict_thresholds() {
    let t = VerdictConfig::default();
    let mut r = report(Criterion::C1);
    assert_eq!(verdict(&r, &t), Verdict::AdvisoryOnly);
    r.diff = Some(0.31);
    assert_eq!(verdict(&r, &t), Verdict::Pass);
    r.diff = Some(0.02);
    assert_eq!(verdict(&r, &t), Verdict::Fail);

    let mut r = report(Criterion::C3);
    r.histogram = Some(MarginHistogram::from_margins(&[0.0, 0.05, 0.2, 0.4], &default_epsilon_grid()));
    assert_eq!(r.pass_fraction_at(0.10), Some(0.5));
    assert_eq!(verdict(&r, &t), Verdict::Pass);

    let mut r = report(Criterion::C2);
    r.per_n_means = Some(BTreeMap::from([(1, 0.85), (2, 0.5)]));
    assert_eq!(verdict(&r, &t), Verdict::Pass);
    r.per_n_means = Some(BTreeMap::from([(1, 0.849)]));
    assert_eq!(verdict(&r, &t), Verdict::Fail);
}

#[test]
fn report_json_fields() {
    let r = eval_c1(
        &[pair("p", "a b", "b a", Label::Paraphrase), pair("n", "a b", "c d", Label::NonParaphrase)],
        &mock(64),
        Criterion::C1,
        &meta(),
    )
    .unwrap();
    let v = serde_json::to_value(&r).unwrap();
    for key in [
        "criterion", "encoder_id", "dataset_id", "pos_mean", "neg_mean", "diff", "skipped", "verdict",
        "thresholds", "config_hash", "stopword_hash", "seed", "advisory",
    ] {
        assert!(v.get(key).is_some(), "{key}");
    }
    assert!(v.get("histogram").is_none());
    assert_eq!(v["criterion"], "c1");
    assert_eq!(v["advisory"], true);
    let back: CriterionReport = serde_json::from_value(v).unwrap();
    assert_eq!(back, r);
}
