use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn golden() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/golden")
}

fn timealign(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_timealign"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

/// Golden bundle copied somewhere it can be modified.
fn scratch_bundle() -> tempfile::TempDir {
    let dir = tempfile::tempdir().unwrap();
    for f in ["bundle.json", "vad.bin", "chunk0.bin", "chunk1.bin", "ref.ctm"] {
        std::fs::copy(golden().join(f), dir.path().join(f)).unwrap();
    }
    dir
}

#[test]
fn every_format_matches_golden() {
    let dir = tempfile::tempdir().unwrap();
    let bundle = golden().join("bundle.json");
    for format in ["srt", "vtt", "json", "tsv"] {
        let out = dir.path().join(format!("out.{format}"));
        let o = timealign(&["run", "--bundle", path(&bundle), "--format", format, "-o", path(&out)]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        assert_eq!(
            std::fs::read_to_string(&out).unwrap(),
            std::fs::read_to_string(golden().join(format!("expected.{format}"))).unwrap(),
            "{format}"
        );
    }
}

#[test]
fn parallel_jobs_do_not_change_output() {
    let dir = tempfile::tempdir().unwrap();
    let bundle = golden().join("bundle.json");
    let out = dir.path().join("out.json");
    let o = timealign(&["run", "--bundle", path(&bundle), "--format", "json", "--jobs", "4", "-o", path(&out)]);
    assert!(o.status.success());
    assert_eq!(
        std::fs::read(&out).unwrap(),
        std::fs::read(golden().join("expected.json")).unwrap()
    );
}

#[test]
fn show_config_prints_defaults() {
    let o = timealign(&["--show-config"]);
    assert!(o.status.success());
    assert_eq!(
        String::from_utf8(o.stdout).unwrap(),
        "onset 0.767\noffset 0.377\nmin-on 0.136\nmin-off 0.067\nmax-chunk 30.0\n\
         merge-threshold 30.0\nbatch-size 32\ncollar 0.2\n"
    );
    let o = timealign(&["--onset", "0.8", "--show-config"]);
    assert!(String::from_utf8(o.stdout).unwrap().starts_with("onset 0.8\n"));
}

#[test]
fn merge_threshold_above_window_is_a_config_error() {
    let bundle = golden().join("bundle.json");
    let o = timealign(&["--merge-threshold", "31", "segment", "--bundle", path(&bundle)]);
    assert_eq!(o.status.code(), Some(2));
    let o = timealign(&["--onset", "0.2", "--offset", "0.5", "segment", "--bundle", path(&bundle)]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn segment_prints_chunk_spans() {
    let o = timealign(&["segment", "--bundle", path(&golden().join("bundle.json"))]);
    assert!(o.status.success());
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["recording_id"], "synthetic");
    let spans: Vec<Vec<f64>> = v["chunks"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| serde_json::from_value(c["span"].clone()).unwrap())
        .collect();
    assert_eq!(spans, vec![vec![0.5, 1.5], vec![40.0, 41.0]]);
}

#[test]
fn run_with_eval_reports_metrics() {
    let dir = tempfile::tempdir().unwrap();
    let o = timealign(&[
        "run",
        "--bundle",
        path(&golden().join("bundle.json")),
        "-o",
        path(&dir.path().join("out.srt")),
        "--eval",
        path(&golden().join("ref.ctm")),
    ]);
    assert!(o.status.success());
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["wer"]["wer"], 0.0);
    // "bye" 40.2-40.45 matches "Bye." only after normalization, which the
    // segmentation metric does not apply.
    assert_eq!(v["segmentation"]["matches"], 2);
    assert!((v["segmentation"]["precision"].as_f64().unwrap() - 2.0 / 3.0).abs() < 1e-12);
}

#[test]
fn eval_subcommand_reads_json_hypothesis() {
    let hyp = golden().join("expected.json");
    let reference = golden().join("ref.ctm");
    let o = timealign(&["eval", "--hyp", path(&hyp), "--ref", path(&reference)]);
    assert!(o.status.success());
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["wer"]["wer"], 0.0);
    assert_eq!(v["five_gram_duplicates"], 0);
    assert!(!o.stderr.is_empty(), "table goes to stderr");

    let o = timealign(&["eval", "--hyp", path(&hyp), "--ref", path(&reference), "--no-normalize"]);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(v["wer"]["wer"].as_f64().unwrap() > 0.0);
}

#[test]
fn missing_transcript_fails_unless_skipped() {
    let dir = scratch_bundle();
    let manifest = dir.path().join("bundle.json");
    let mut v: Value = serde_json::from_str(&std::fs::read_to_string(&manifest).unwrap()).unwrap();
    v["chunks"][1]["transcript"] = Value::Null;
    std::fs::write(&manifest, serde_json::to_string(&v).unwrap()).unwrap();

    let out = dir.path().join("out.json");
    let o = timealign(&["run", "--bundle", path(&manifest), "--format", "json", "-o", path(&out)]);
    assert_eq!(o.status.code(), Some(4), "{}", String::from_utf8_lossy(&o.stderr));

    let o = timealign(&["run", "--bundle", path(&manifest), "--format", "json", "--skip-failed", "-o", path(&out)]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let segs = timealign::io::read_json_output(&out).unwrap();
    assert_eq!(segs.len(), 2);
    assert_eq!(segs[0].words.len(), 2);
    assert!(segs[1].words.is_empty());
}

#[test]
fn corrupt_score_file_is_an_input_error() {
    let dir = scratch_bundle();
    let vad = dir.path().join("vad.bin");
    let bytes = std::fs::read(&vad).unwrap();
    std::fs::write(&vad, &bytes[..bytes.len() - 3]).unwrap();
    let o = timealign(&["segment", "--bundle", path(&dir.path().join("bundle.json"))]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("vad.bin"));
}
