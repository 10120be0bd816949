use std::fs;
use std::path::Path;
use std::process::Command;

const WORDS: &[&str] = &[
    "the", "ship", "rolled", "and", "she", "watched", "grey", "water", "of", "harbour", "a",
    "letter", "waited", "on", "table", "it", "was", "late",
];

/// Deterministic prose with varying sentence lengths.
fn book(sentences: usize, salt: usize) -> String {
    let mut out = String::new();
    let mut state = salt as u64 * 2_654_435_761 + 1;
    let mut next = |m: u64| {
        state = state.wrapping_mul(6_364_136_223_846_793_005).wrapping_add(1_442_695_040_888_963_407);
        (state >> 33) % m
    };
    for i in 0..sentences {
        let len = 3 + next(12) + (i / 40 % 5) as u64;
        let words: Vec<&str> = (0..len).map(|_| WORDS[next(WORDS.len() as u64) as usize]).collect();
        out.push_str(&words.join(" "));
        out.push_str(". ");
    }
    out
}

fn sentlen() -> Command {
    Command::new(env!("CARGO_BIN_EXE_sentlen"))
}

fn corpus(dir: &Path) {
    fs::write(dir.join("first.txt"), book(300, 1)).unwrap();
    fs::write(dir.join("second.txt"), book(450, 2)).unwrap();
}

#[test]
fn analyze_writes_reports() {
    let input = tempfile::tempdir().unwrap();
    let out = tempfile::tempdir().unwrap();
    corpus(input.path());
    let status = sentlen()
        .args(["analyze", input.path().to_str().unwrap(), "--out", out.path().to_str().unwrap()])
        .args(["--jobs", "2", "--seed", "7", "--export-series"])
        .output()
        .unwrap();
    assert!(status.status.success(), "{}", String::from_utf8_lossy(&status.stderr));
    let stderr = String::from_utf8_lossy(&status.stderr);
    assert!(stderr.contains("2 books analyzed"), "{stderr}");
    for rel in [
        "books/first.csv",
        "books/second.csv",
        "summary.csv",
        "skipped.csv",
        "plots/fig1a_sentence_counts.csv",
        "plots/fig2c_pearson_cdf.csv",
        "plots/fig4b_hurst.csv",
        "plots/table2_ks_acceptance.csv",
        "series/first_words.csv",
        "dfa/second_chars.csv",
    ] {
        assert!(out.path().join(rel).is_file(), "missing {rel}");
    }
    let summary = fs::read_to_string(out.path().join("summary.csv")).unwrap();
    assert!(summary.contains("\nseed,7\n"));
    assert!(summary.contains("\ncomparison_count,30\n"));
}

#[test]
fn json_format_and_options() {
    let input = tempfile::tempdir().unwrap();
    let out = tempfile::tempdir().unwrap();
    corpus(input.path());
    let stops = input.path().join("stops.list");
    fs::write(&stops, "the\na\nof\n").unwrap();
    let status = sentlen()
        .args(["analyze", input.path().to_str().unwrap(), "--out", out.path().to_str().unwrap()])
        .args(["--format", "json", "--stopwords", stops.to_str().unwrap()])
        .args(["--dfa-degree", "2", "--dfa-min", "10", "--dfa-max-frac", "0.2", "--dfa-points", "8"])
        .args(["--p-threshold", "0.05", "--min-sentences", "350"])
        .status()
        .unwrap();
    assert!(status.success());
    let summary: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out.path().join("summary.json")).unwrap()).unwrap();
    assert_eq!(summary["book_count"], 1);
    assert_eq!(summary["skipped_count"], 1);
    assert_eq!(summary["p_threshold"], 0.05);
    let report: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out.path().join("books/second.json")).unwrap()).unwrap();
    let windows = report["dfa_windows"].as_array().unwrap();
    assert_eq!(windows.first().unwrap(), 10);
    assert_eq!(windows.last().unwrap(), 90);
    let skipped = fs::read_to_string(out.path().join("skipped.csv")).unwrap();
    assert!(skipped.contains("first,\"300 sentences"), "{skipped}");
}

#[test]
fn fatal_errors_exit_nonzero() {
    let out = tempfile::tempdir().unwrap();
    let empty = tempfile::tempdir().unwrap();
    let run = |args: &[&str]| sentlen().args(args).output().unwrap();

    let r = run(&["analyze", empty.path().to_str().unwrap(), "--out", out.path().to_str().unwrap()]);
    assert!(!r.status.success());
    assert!(String::from_utf8_lossy(&r.stderr).contains("no .txt books"));

    corpus(empty.path());
    let r = run(&[
        "analyze",
        empty.path().to_str().unwrap(),
        "--out",
        out.path().to_str().unwrap(),
        "--lemmas",
        "/nonexistent/lemmas.tsv",
    ]);
    assert!(!r.status.success());
    assert!(String::from_utf8_lossy(&r.stderr).contains("/nonexistent/lemmas.tsv"));

    let r = run(&["analyze", empty.path().to_str().unwrap(), "--out", out.path().to_str().unwrap(), "--p-threshold", "2"]);
    assert!(!r.status.success());

    let r = run(&["analyze", empty.path().to_str().unwrap(), "--out", out.path().to_str().unwrap(), "--format", "xml"]);
    assert!(!r.status.success());
}
