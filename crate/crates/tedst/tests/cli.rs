//! End-to-end checks of the compiled binary: output pins, file formats,
//! exit codes, and byte-for-byte determinism.

use std::path::PathBuf;
use std::process::{Command, Output};

fn data(name: &str) -> String {
    let path: PathBuf = [env!("CARGO_MANIFEST_DIR"), "tests", "data", name]
        .iter()
        .collect();
    path.to_str().unwrap().to_string()
}

fn tedst(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tedst"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_of(output: &Output) -> String {
    assert!(
        output.status.success(),
        "exit {:?}, stderr: {}",
        output.status.code(),
        String::from_utf8_lossy(&output.stderr)
    );
    String::from_utf8(output.stdout.clone()).unwrap()
}

#[test]
fn distance_reports_cost_script_and_alignment() {
    let out = tedst(&[
        "distance",
        "--t1",
        &data("fig_t1.br"),
        "--t2",
        &data("fig_t2.br"),
    ]);
    let text = stdout_of(&out);
    assert!(text.contains("cost: 6"), "{text}");
    assert!(text.contains("ops: dddmmiiimm"), "{text}");
    assert!(text.contains("S1: e f b g c _ _ _ d a"), "{text}");
    assert!(text.contains("S2: _ _ _ g c y z x d a"), "{text}");
}

#[test]
fn grouped_distance_reports_marker_and_grouped_cost() {
    let out = tedst(&[
        "distance",
        "--t1",
        &data("fig_t1.br"),
        "--t2",
        &data("fig_t2.br"),
        "--grouped",
        "--costs",
        "illustration",
    ]);
    let text = stdout_of(&out);
    assert!(text.contains("cost: 3"), "{text}");
    assert!(text.contains("ops: ++d+m++imm"), "{text}");
}

#[test]
fn entailment_costs_price_the_modifier_pair() {
    let base = [
        "distance",
        "--t1",
        &data("mod_full.br"),
        "--t2",
        &data("mod_bare.br"),
        "--costs",
        "entailment",
        "--stopwords",
        &data("stopwords_the.txt"),
    ];
    let text = stdout_of(&tedst(&base));
    assert!(text.contains("cost: 19"), "{text}");

    let mut grouped = base.to_vec();
    grouped.push("--grouped");
    let text = stdout_of(&tedst(&grouped));
    assert!(text.contains("cost: 0"), "{text}");
}

#[test]
fn distance_reads_conll_trees() {
    let out = tedst(&[
        "distance",
        "--t1",
        &data("sentence.conll"),
        "--t2",
        &data("sentence.conll"),
        "--format",
        "conll",
    ]);
    let text = stdout_of(&out);
    assert!(text.contains("cost: 0"), "{text}");
    assert!(text.contains("ops: mm"), "{text}");
}

#[test]
fn entail_emits_rows_and_metrics() {
    let out = tedst(&[
        "entail",
        "--pairs",
        &data("pairs_small.conll"),
        "--method",
        "zs-ted",
        "--low",
        "1",
        "--costs",
        "unit",
    ]);
    let text = stdout_of(&out);
    assert!(
        text.contains("id\tmethod\tscore\tdecision\tgold\tmarker"),
        "{text}"
    );
    assert!(text.contains("p1\tzs_ted\t0\tyes\tyes\tmm"), "{text}");
    assert!(text.contains("p2\tzs_ted\t2\tno\tno\txx"), "{text}");
    assert!(text.contains("accuracy\t1.0000"), "{text}");
}

#[test]
fn entail_records_output_is_json_lines() {
    let out = tedst(&[
        "entail",
        "--pairs",
        &data("pairs_small.conll"),
        "--method",
        "ted-st",
        "--low",
        "1",
        "--costs",
        "unit",
        "--output",
        "records",
    ]);
    let text = stdout_of(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 3); // two pairs + metrics
    for line in &lines {
        serde_json::from_str::<serde_json::Value>(line).expect("valid JSON line");
    }
    let first: serde_json::Value = serde_json::from_str(lines[0]).unwrap();
    assert_eq!(first["id"], "p1");
    assert_eq!(first["decision"], "yes");
}

#[test]
fn three_way_entail_reports_unknowns() {
    let out = tedst(&[
        "entail",
        "--pairs",
        &data("pairs_small.conll"),
        "--method",
        "zs-ted",
        "--low",
        "1",
        "--high",
        "5",
        "--costs",
        "unit",
    ]);
    let text = stdout_of(&out);
    // p2 scores 2, between the thresholds.
    assert!(text.contains("p2\tzs_ted\t2\tunknown\tno\txx"), "{text}");
    assert!(text.contains("gold_no_pred_unknown\t1"), "{text}");
}

#[test]
fn tune_prints_thresholds() {
    let out = tedst(&[
        "tune",
        "--pairs",
        &data("pairs_small.conll"),
        "--method",
        "zs-ted",
        "--objective",
        "accuracy",
        "--costs",
        "unit",
    ]);
    let text = stdout_of(&out);
    assert!(text.contains("low: 1"), "{text}");
    assert!(text.contains("polarity: distance"), "{text}");
    assert!(text.contains("objective_value: 1.0000"), "{text}");
}

#[test]
fn oracle_agrees_with_distance() {
    let out = tedst(&[
        "oracle",
        "--t1",
        &data("fig_t1.br"),
        "--t2",
        &data("fig_t2.br"),
    ]);
    assert_eq!(stdout_of(&out), "cost: 6\n");
}

#[test]
fn oracle_rejects_oversized_trees() {
    let dir = tempfile::tempdir().unwrap();
    let big = dir.path().join("big.br");
    std::fs::write(&big, "a(b,c,d,e,f,g,h,i,j,k,l,m,n,o,p,q)").unwrap();
    let out = tedst(&[
        "oracle",
        "--t1",
        big.to_str().unwrap(),
        "--t2",
        &data("fig_t1.br"),
    ]);
    assert_eq!(out.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("bound"), "{stderr}");
}

#[test]
fn usage_errors_exit_1() {
    let out = tedst(&["distance", "--no-such-flag"]);
    assert_eq!(out.status.code(), Some(1));

    let out = tedst(&["entail", "--pairs", &data("pairs_small.conll")]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn data_errors_exit_2() {
    let out = tedst(&[
        "distance",
        "--t1",
        "/no/such/file.br",
        "--t2",
        &data("fig_t1.br"),
    ]);
    assert_eq!(out.status.code(), Some(2));

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.br");
    std::fs::write(&bad, "a(b").unwrap();
    let out = tedst(&[
        "distance",
        "--t1",
        bad.to_str().unwrap(),
        "--t2",
        &data("fig_t1.br"),
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(
        String::from_utf8_lossy(&out.stderr).contains("error"),
        "stderr tagged"
    );
}

#[test]
fn help_exits_0() {
    let out = tedst(&["--help"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn identical_invocations_are_byte_identical() {
    let args = [
        "entail",
        "--pairs",
        &data("pairs_small.conll"),
        "--method",
        "ted-st",
        "--low",
        "1",
        "--costs",
        "unit",
    ];
    let first = tedst(&args);
    let second = tedst(&args);
    assert_eq!(first.stdout, second.stdout);
    assert_eq!(first.status.code(), second.status.code());
}

#[test]
fn lexicon_and_overrides_flow_through() {
    let dir = tempfile::tempdir().unwrap();
    let t1 = dir.path().join("t1.br");
    let t2 = dir.path().join("t2.br");
    std::fs::write(&t1, "saw(wombat)").unwrap();
    std::fs::write(&t2, "saw(animal)").unwrap();

    // Subsumption makes the exchange free.
    let out = tedst(&[
        "distance",
        "--t1",
        t1.to_str().unwrap(),
        "--t2",
        t2.to_str().unwrap(),
        "--costs",
        "entailment",
        "--lexicon",
        &data("relations.tsv"),
    ]);
    let text = stdout_of(&out);
    assert!(text.contains("cost: 0"), "{text}");
    assert!(text.contains("ops: xm"), "{text}");

    // Without the lexicon the same exchange costs the default 50; an
    // override can reprice it.
    let overrides = dir.path().join("costs.cfg");
    std::fs::write(&overrides, "default_exchange = 8\n").unwrap();
    let out = tedst(&[
        "distance",
        "--t1",
        t1.to_str().unwrap(),
        "--t2",
        t2.to_str().unwrap(),
        "--costs",
        "entailment",
        "--overrides",
        overrides.to_str().unwrap(),
    ]);
    let text = stdout_of(&out);
    assert!(text.contains("cost: 8"), "{text}");
}
