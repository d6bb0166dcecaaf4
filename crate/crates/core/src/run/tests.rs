use serde_json::json;

use super::*;

const MINIMAL: &str = r#"{
  "datasets": [{"id": "mrpc", "path": "data/mrpc.tsv", "format": "mrpc_tsv"}],
  "encoders": [{"encoder_id": "m", "kind": {"type": "mock", "dim": 16, "seed": 1}}],
  "criteria": ["c1"],
  "output_dir": "out"
}"#;

#[test]
fn overrides_reach_nested_fields() {
    let mut doc = json!({"a": {"b": [1, 2]}, "s": "x"});
    apply_override(&mut doc, "a.b.1", "7").unwrap();
    apply_override(&mut doc, "s", "plain words").unwrap();
    apply_override(&mut doc, "new.key", "true").unwrap();
    assert_eq!(doc, json!({"a": {"b": [1, 7]}, "s": "plain words", "new": {"key": true}}));
    assert!(apply_override(&mut doc, "a.b.9", "1").is_err());
    assert!(apply_override(&mut doc, "s.inner", "1").is_err());
}

#[test]
fn defaults_and_paths() {
    let mut cfg = RunConfig::from_json(MINIMAL, &[]).unwrap();
    assert_eq!(cfg.n_values, vec![1, 2, 3]);
    assert_eq!(cfg.jumble_n, 3);
    assert_eq!(cfg.epsilon_grid.len(), 13);
    cfg.resolve_paths(Path::new("/base"));
    assert_eq!(cfg.datasets[0].path, Path::new("/base/data/mrpc.tsv"));
    assert_eq!(cfg.output_dir, Path::new("/base/out"));
    cfg.validate().unwrap();
}

#[test]
fn unknown_fields_are_config_errors() {
    let text = MINIMAL.replace("\"criteria\"", "\"criterion\"");
    let err = RunConfig::from_json(&text, &[]).unwrap_err();
    assert_eq!(err.exit_code(), 2);
}

#[test]
fn config_hash_ignores_output_location() {
    let a = RunConfig::from_json(MINIMAL, &[]).unwrap();
    let b = RunConfig::from_json(MINIMAL, &[("output_dir".into(), "elsewhere".into())]).unwrap();
    let c = RunConfig::from_json(MINIMAL, &[("master_seed".into(), "5".into())]).unwrap();
    assert_eq!(a.config_hash(), b.config_hash());
    assert_ne!(a.config_hash(), c.config_hash());
    assert_eq!(a.config_hash().len(), 64);
}

#[test]
fn validation_rejects_bad_grids() {
    let cases = [
        ("criteria", "[]"),
        ("encoders", "[]"),
        ("n_values", "[0]"),
        ("n_values", "[6]"),
        ("epsilon_grid", "[0.1, 0.0]"),
        ("criteria", r#"["c1_alt"]"#),
        ("criteria", r#"["c2"]"#),
        ("criteria", r#"["probe"]"#),
        ("lambdas", "[]"),
    ];
    for (k, v) in cases {
        let cfg = RunConfig::from_json(MINIMAL, &[(k.into(), v.into())]).unwrap();
        assert!(matches!(cfg.validate(), Err(RunError::Config(_))), "{k}={v}");
    }
    let dup = r#"[{"encoder_id": "m", "kind": {"type": "mock", "dim": 16, "seed": 1}},
                  {"encoder_id": "m", "kind": {"type": "mock", "dim": 16, "seed": 2}}]"#;
    let cfg = RunConfig::from_json(MINIMAL, &[("encoders".into(), dup.into())]).unwrap();
    assert!(cfg.validate().is_err());
}

#[test]
fn file_names_are_sanitized() {
    let meta = ReportMeta::for_dataset("mrpc");
    let mut r = CriterionReport::new(Criterion::C4, "org/model v2", &meta);
    r.n = Some(3);
    assert_eq!(report_file_name(&r), "c4__org_model_v2__mrpc__n3.json");
}
