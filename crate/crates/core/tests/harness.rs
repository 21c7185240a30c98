use std::io::Write;

use genlab_core::adversaries::AdversarySpec;
use genlab_core::generators::GeneratorSpec;
use genlab_core::harness::{run_transcript, Mode};
use genlab_core::{CollectionSpec, RunConfig};

const CONFIG: &str = r#"
target = 2
horizon = 4
seed = 7

[collection]
name = "cofinite1"

[generator]
name = "greedy"

[adversary]
name = "fair"
"#;

#[test]
fn config_file_and_golden_lines() {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(CONFIG.as_bytes()).unwrap();
    let cfg = RunConfig::load(f.path()).unwrap();
    assert_eq!(cfg.mode, Mode::Plain);
    let report = run_transcript(&cfg).unwrap();
    let jsonl = report.to_jsonl();
    let lines: Vec<&str> = jsonl.lines().collect();
    assert_eq!(lines.len(), 5);
    // Target Z \ {0}; at round 1 greedy only knows L_1 = Z and emits 0.
    assert_eq!(lines[0], r#"{"t":1,"x":-1,"z":0,"valid":false}"#);
    assert!(lines[4].starts_with(r#"{"summary":{"t_star":"#));
}

#[test]
fn exhaustive_mode_records_supports() {
    let cfg = RunConfig {
        collection: CollectionSpec::named("tails"),
        target: 1,
        generator: GeneratorSpec::named("exhaustive-critical"),
        adversary: AdversarySpec::named("fair"),
        horizon: 3,
        mode: Mode::Exhaustive,
        seed: 0,
    };
    let r = run_transcript(&cfg).unwrap();
    assert!(r.transcript.rounds.iter().all(|r| r.snapshot.is_some()));
    let first = r.to_jsonl().lines().next().unwrap().to_string();
    assert!(first.ends_with(r#""valid":true,"snapshot":"Z"}"#), "{first}");
}

#[test]
fn permuted_runs_replay_byte_for_byte() {
    let mut cfg = RunConfig::from_toml(CONFIG).unwrap();
    cfg.adversary.schedule = Some("permuted".into());
    cfg.horizon = 50;
    let a = run_transcript(&cfg).unwrap().to_jsonl();
    let b = run_transcript(&cfg).unwrap().to_jsonl();
    assert_eq!(a, b);
    cfg.seed = 8;
    assert_ne!(a, run_transcript(&cfg).unwrap().to_jsonl());
}

#[test]
fn bad_configs_are_rejected() {
    assert!(RunConfig::from_toml(&CONFIG.replace("greedy", "oracle")).is_ok());
    let cfg = RunConfig::from_toml(&CONFIG.replace("greedy", "oracle")).unwrap();
    assert!(run_transcript(&cfg).is_err());
    assert!(RunConfig::from_toml(&CONFIG.replace("target = 2", "target = 0")).is_err());
    assert!(RunConfig::from_toml(&CONFIG.replace("seed = 7", "seed = 7\nextra = 1")).is_err());
}
