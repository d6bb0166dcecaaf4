use std::fs;
use std::path::{Path, PathBuf};

use semprobe::run::{self, report_from_dir, verify_manifest, RunConfig, RunError, MANIFEST};

const FIXTURES: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures");

/// Second paraphrase corpus in MRPC layout, built from the back half of the
/// bundled PAWS-style file so cross-topic negatives have somewhere to draw from.
fn write_mrpc(dir: &Path) -> PathBuf {
    let paws = fs::read_to_string(format!("{FIXTURES}/corpus/pairs_paws.tsv")).unwrap();
    let mut out = String::from("Quality\t#1 ID\t#2 ID\t#1 String\t#2 String\n");
    for line in paws.lines().skip(701).take(300) {
        let f: Vec<&str> = line.split('\t').collect();
        out.push_str(&format!("{}\t{}\t{}\t{}\t{}\n", f[3], f[0], f[0], f[1], f[2]));
    }
    let path = dir.join("mrpc.tsv");
    fs::write(&path, out).unwrap();
    path
}

fn config(dir: &Path, criteria: &str) -> RunConfig {
    let mrpc = write_mrpc(dir);
    let text = format!(
        r#"{{
          "datasets": [
            {{"id": "paws_wiki", "path": "{f}/corpus/pairs_paws.tsv", "format": "paws_tsv",
              "sample": {{"pairs_per_label": 150, "singles": 120}}}},
            {{"id": "mrpc", "path": "{m}", "format": "mrpc_tsv"}},
            {{"id": "mr", "path": "{f}/probe/mr_fixture.tsv", "format": "probe_single"}}
          ],
          "encoders": [
            {{"encoder_id": "mock-a", "kind": {{"type": "mock", "dim": 256, "seed": 1}}}},
            {{"encoder_id": "mock-b", "kind": {{"type": "mock", "dim": 128, "seed": 2}}, "batch_size": 7}}
          ],
          "criteria": {criteria},
          "lambdas": [0.01, 1.0],
          "wordnet_dir": "{f}/wordnet",
          "master_seed": 11,
          "output_dir": "{o}",
          "cache_path": "{c}"
        }}"#,
        f = FIXTURES,
        m = mrpc.display(),
        o = dir.join("out").display(),
        c = dir.join("cache/embeddings.jsonl").display(),
    );
    RunConfig::from_json(&text, &[]).unwrap()
}

fn tree(dir: &Path) -> Vec<(String, Vec<u8>)> {
    run::list_artifacts(dir)
        .unwrap()
        .into_iter()
        .map(|a| (a.path.clone(), fs::read(dir.join(&a.path)).unwrap()))
        .chain(std::iter::once((MANIFEST.to_string(), fs::read(dir.join(MANIFEST)).unwrap())))
        .collect()
}

const ALL: &str = r#"["c1", "c1_alt", "c2", "c3", "c4", "probe"]"#;

#[test]
fn full_grid_writes_expected_tree() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = config(tmp.path(), ALL);
    let summary = run::run(&cfg).unwrap();
    let out = &cfg.output_dir;
    let files: Vec<String> = run::list_artifacts(out).unwrap().into_iter().map(|a| a.path).collect();
    for enc in ["mock-a", "mock-b"] {
        for ds in ["paws_wiki", "mrpc"] {
            for c in ["c1", "c1_alt", "c2", "c3"] {
                assert!(files.contains(&format!("reports/{c}__{enc}__{ds}.json")), "{c} {enc} {ds}");
            }
            assert!(files.contains(&format!("reports/c4__{enc}__{ds}__n3.json")));
            assert!(files.contains(&format!("figures/c3__{enc}__{ds}.svg")));
            assert!(files.contains(&format!("figures/c4__{enc}__{ds}__n3.svg")));
        }
        assert!(files.contains(&format!("reports/probe__{enc}__MR.json")));
    }
    for t in ["table_c1.csv", "table_c1_alt.csv", "table_c2.csv", "table_probe.csv"] {
        assert!(files.contains(&t.to_string()), "{t}");
    }
    assert_eq!(summary.reports.len(), 2 * 2 * 5);
    assert_eq!(summary.probes.len(), 2);
    assert!(verify_manifest(out).unwrap().is_empty());

    let manifest = run::read_manifest(out).unwrap();
    assert_eq!(manifest.config_hash, cfg.config_hash());
    assert_eq!(manifest.datasets[0].used, 300);
    assert!(summary.reports.iter().all(|r| r.config_hash == cfg.config_hash()));
    let c1 = fs::read_to_string(out.join("table_c1.csv")).unwrap();
    assert!(c1.starts_with("dataset,metric,mock-a,mock-b\n"), "{c1}");
    assert!(cfg.cache_path.as_ref().unwrap().is_file());
}

#[test]
fn warm_cache_reruns_are_byte_identical() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = config(tmp.path(), ALL);
    run::run(&cfg).unwrap();
    let first = tree(&cfg.output_dir);
    run::run(&cfg).unwrap();
    assert_eq!(first, tree(&cfg.output_dir));
    // Cold cache too: mock vectors do not depend on cache state.
    fs::remove_file(cfg.cache_path.as_ref().unwrap()).unwrap();
    run::run(&cfg).unwrap();
    assert_eq!(first, tree(&cfg.output_dir));
}

#[test]
fn report_command_reproduces_tables_and_figures() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = config(tmp.path(), ALL);
    run::run(&cfg).unwrap();
    let before = tree(&cfg.output_dir);
    for f in ["table_c1.csv", "table_c2.csv", "table_probe.csv"] {
        fs::remove_file(cfg.output_dir.join(f)).unwrap();
    }
    fs::remove_dir_all(cfg.output_dir.join("figures")).unwrap();
    report_from_dir(&cfg.output_dir).unwrap();
    assert_eq!(before, tree(&cfg.output_dir));
}

#[test]
fn single_criterion_run_has_minimal_tree() {
    let tmp = tempfile::tempdir().unwrap();
    let mut cfg = config(tmp.path(), r#"["c1"]"#);
    cfg.datasets.truncate(1);
    cfg.encoders.truncate(1);
    run::run(&cfg).unwrap();
    let files: Vec<String> = run::list_artifacts(&cfg.output_dir).unwrap().into_iter().map(|a| a.path).collect();
    assert_eq!(files, ["reports/c1__mock-a__paws_wiki.json", "table_c1.csv"]);
    assert!(cfg.output_dir.join(MANIFEST).is_file());
}

#[test]
fn tampering_is_detected() {
    let tmp = tempfile::tempdir().unwrap();
    let mut cfg = config(tmp.path(), r#"["c1"]"#);
    cfg.encoders.truncate(1);
    run::run(&cfg).unwrap();
    fs::write(cfg.output_dir.join("table_c1.csv"), "x").unwrap();
    fs::write(cfg.output_dir.join("extra.txt"), "y").unwrap();
    assert_eq!(
        verify_manifest(&cfg.output_dir).unwrap(),
        ["changed table_c1.csv", "unlisted extra.txt"]
    );
}

#[test]
fn foreign_output_dir_is_left_alone() {
    let tmp = tempfile::tempdir().unwrap();
    let mut cfg = config(tmp.path(), r#"["c1"]"#);
    cfg.encoders.truncate(1);
    fs::create_dir_all(&cfg.output_dir).unwrap();
    fs::write(cfg.output_dir.join("notes.txt"), "mine").unwrap();
    let err = run::run(&cfg).unwrap_err();
    assert_eq!(err.exit_code(), 2);
    assert_eq!(fs::read_to_string(cfg.output_dir.join("notes.txt")).unwrap(), "mine");
}

#[test]
fn error_classes_map_to_exit_codes() {
    let tmp = tempfile::tempdir().unwrap();

    let mut cfg = config(tmp.path(), r#"["c1"]"#);
    cfg.datasets[0].path = tmp.path().join("missing.tsv");
    let err = run::run(&cfg).unwrap_err();
    assert!(matches!(err, RunError::Data(_)), "{err}");
    assert_eq!(err.exit_code(), 3);

    let mut cfg = config(tmp.path(), r#"["c1"]"#);
    cfg.encoders[1].kind = semprobe::BackendKind::Subprocess {
        command: vec!["/nonexistent/encoder-binary".into()],
    };
    let err = run::run(&cfg).unwrap_err();
    assert_eq!(err.exit_code(), 4, "{err}");
    // A failed run leaves no output or staging directory behind.
    let left: Vec<_> = fs::read_dir(tmp.path()).unwrap().map(|e| e.unwrap().file_name()).collect();
    assert!(left.iter().all(|n| n != "out" && !n.to_string_lossy().contains("staging")), "{left:?}");

    let cfg = config(tmp.path(), r#"["c1_alt"]"#);
    let mut one = cfg.clone();
    one.datasets.remove(1);
    assert_eq!(run::run(&one).unwrap_err().exit_code(), 2);
}

#[test]
fn load_resolves_relative_paths_and_overrides() {
    let tmp = tempfile::tempdir().unwrap();
    fs::create_dir_all(tmp.path().join("data")).unwrap();
    fs::copy(format!("{FIXTURES}/corpus/pairs_paws.tsv"), tmp.path().join("data/paws.tsv")).unwrap();
    let path = tmp.path().join("exp.json");
    fs::write(
        &path,
        r#"{"datasets": [{"id": "paws_wiki", "path": "data/paws.tsv", "format": "paws_tsv"}],
            "encoders": [{"encoder_id": "m", "kind": {"type": "mock", "dim": 64, "seed": 3}}],
            "criteria": ["c1"], "output_dir": "results"}"#,
    )
    .unwrap();
    let cfg = RunConfig::load(&path, &[("datasets.0.sample.pairs_per_label".into(), "50".into())]).unwrap();
    assert_eq!(cfg.datasets[0].sample.pairs_per_label, Some(50));
    let summary = run::run(&cfg).unwrap();
    assert_eq!(summary.output_dir, tmp.path().join("results"));
    assert_eq!(summary.reports[0].pos_count, Some(50));
}

#[test]
fn tables_only_cite_existing_reports() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = config(tmp.path(), ALL);
    run::run(&cfg).unwrap();
    assert!(run::closure_problems(&cfg.output_dir).unwrap().is_empty());
    fs::remove_file(cfg.output_dir.join("reports/c2__mock-b__mrpc.json")).unwrap();
    fs::remove_file(cfg.output_dir.join("reports/probe__mock-a__MR.json")).unwrap();
    assert_eq!(
        run::closure_problems(&cfg.output_dir).unwrap(),
        [
            "table_c2.csv cites missing reports/c2__mock-b__mrpc.json",
            "table_probe.csv cites missing reports/probe__mock-a__MR.json"
        ]
    );
}

#[test]
fn bundled_configs_parse_and_validate() {
    let root = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs");
    for name in ["fixture_mock.json", "full_grid.json"] {
        let cfg = RunConfig::load(&root.join(name), &[]).unwrap();
        cfg.validate().unwrap();
    }
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("out").display().to_string();
    let cache = tmp.path().join("cache.jsonl").display().to_string();
    let cfg = RunConfig::load(
        &root.join("fixture_mock.json"),
        &[("output_dir".into(), out), ("cache_path".into(), cache)],
    )
    .unwrap();
    let summary = run::run(&cfg).unwrap();
    assert_eq!(summary.reports.len(), 2 * 4);
    assert!(verify_manifest(&cfg.output_dir).unwrap().is_empty());
}
