mod common;

use std::fs;

use common::{bin, fixture, fixture_str, stdout};
use cricket_rules::synth::{generate, roster_text, SynthConfig};
use cricket_rules_core::{ConfrontationMatrix, Corpus};
use serde_json::Value;

fn corpus() -> String {
    fixture_str("synthetic.tsv")
}

#[test]
fn ingest_reports_rejects_with_line_numbers() {
    let o = bin(&["ingest", "--raw", "--match-id", "t1", "--date", "2018-01-04", &fixture_str("raw_commentary.txt")]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.starts_with("3 accepted, 1 rejected\n"), "{out}");
    assert!(out.contains("line 4:"), "{out}");
}

#[test]
fn ingest_valid_and_empty_inputs() {
    let dir = tempfile::tempdir().unwrap();
    let raw = dir.path().join("raw.txt");
    let text = fs::read_to_string(fixture("raw_commentary.txt")).unwrap();
    fs::write(&raw, text.lines().take(3).collect::<Vec<_>>().join("\n")).unwrap();
    let out_path = dir.path().join("corpus.tsv");
    let o = bin(&[
        "ingest", "--raw", "--match-id", "t1", "--date", "2018-01-04", raw.to_str().unwrap(), "-o",
        out_path.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "3 accepted, 0 rejected\n");

    // The written corpus ingests again unchanged.
    let o = bin(&["ingest", out_path.to_str().unwrap()]);
    assert_eq!(stdout(&o), "3 accepted, 0 rejected\n");

    let empty = dir.path().join("empty.txt");
    fs::write(&empty, "").unwrap();
    let o = bin(&["ingest", empty.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(5));
    assert!(String::from_utf8_lossy(&o.stderr).contains("no valid records"));
}

#[test]
fn analyze_matches_golden_files() {
    for (args, golden) in [
        (vec!["--player", "Smith"], "analyze_smith_golden.json"),
        (vec!["--player", "Rabada", "--type", "bowl"], "analyze_rabada_bowling_golden.json"),
    ] {
        let c = corpus();
        let mut full = vec!["analyze", "--corpus", &c];
        full.extend(args);
        let o = bin(&full);
        assert_eq!(o.status.code(), Some(0));
        assert_eq!(stdout(&o), fs::read_to_string(fixture(golden)).unwrap(), "{golden}");
    }
}

#[test]
fn validate_matches_golden_file() {
    let o = bin(&["validate", "--corpus", &corpus(), "--player", "Smith"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), fs::read_to_string(fixture("validate_smith_golden.json")).unwrap());
}

#[test]
fn error_exit_codes() {
    let c = corpus();
    let code = |args: &[&str]| bin(args).status.code();
    assert_eq!(code(&["analyze", "--corpus", &c, "--player", "Nobody"]), Some(10));
    // Anderson only bowls in the fixture.
    assert_eq!(code(&["analyze", "--corpus", &c, "--player", "Anderson"]), Some(6));
    assert_eq!(code(&["analyze", "--corpus", &c, "--player", "Smith", "--from", "2020-01-01"]), Some(6));
    assert_eq!(
        code(&["analyze", "--corpus", &c, "--player", "Smith", "--from", "2018-01-01", "--to", "2017-01-01"]),
        Some(4)
    );
    assert_eq!(code(&["analyze", "--corpus", &c, "--player", "Rabada", "--type", "bowl", "--opponents", "fast"]), Some(4));
    assert_eq!(code(&["analyze", "--corpus", &c, "--player", "Smith", "--opponents", "fast"]), Some(6));
    assert_eq!(code(&["analyze", "--corpus", "/nonexistent/corpus.tsv", "--player", "Smith"]), Some(3));
    assert_eq!(code(&["validate", "--corpus", &c, "--player", "Smith", "--cutoff", "2030-01-01"]), Some(9));
    assert_eq!(code(&["analyze", "--corpus", &c]), Some(2));
}

#[test]
fn rank_zero_and_all_zero_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let raw = dir.path().join("raw.txt");
    fs::write(&raw, "1.1, Lyon to Smith, 1 run, drives a short ball\n1.2, Lyon to Smith, no run, lovely cricket\n").unwrap();
    let corpus = dir.path().join("c.tsv");
    bin(&["ingest", "--raw", "--match-id", "x", "--date", "2018-01-01", raw.to_str().unwrap(), "-o", corpus.to_str().unwrap()]);
    let o = bin(&["analyze", "--corpus", corpus.to_str().unwrap(), "--player", "Smith"]);
    assert_eq!(o.status.code(), Some(8), "{}", String::from_utf8_lossy(&o.stderr));

    fs::write(&raw, "1.1, Lyon to Smith, 1 run, lovely cricket\n").unwrap();
    bin(&["ingest", "--raw", "--match-id", "x", "--date", "2018-01-01", raw.to_str().unwrap(), "-o", corpus.to_str().unwrap()]);
    let o = bin(&["analyze", "--corpus", corpus.to_str().unwrap(), "--player", "Smith"]);
    assert_eq!(o.status.code(), Some(7));
}

#[test]
fn fast_opponents_use_eight_columns() {
    let o = bin(&[
        "analyze", "--corpus", &corpus(), "--roster", &fixture_str("roster.tsv"), "--player", "Smith", "--opponents", "fast",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let cols: Vec<&str> = v["cm"]["columns"].as_array().unwrap().iter().map(|c| c.as_str().unwrap()).collect();
    assert_eq!(cols, ["good", "short", "full", "off", "leg", "middle", "move-in", "move-out"]);
    assert_eq!(v["provenance"]["filter"]["opponents"], "fast");
    assert!(v["biplots"]["response"]["points"].as_array().unwrap().len() <= 3 + 8);
}

#[test]
fn compare_rules_against_expert_file() {
    let c = corpus();
    let o = bin(&["validate", "--corpus", &c, "--player", "Smith", "--compare-rules", &fixture_str("expert_rules.tsv")]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["reference_pairs"], 4);
    assert_eq!(v["commonality_pct"]["overall"], 100.0);

    // A rule file holding exactly the mined top-k pairs scores 100.
    let analysis: Value = serde_json::from_str(&fs::read_to_string(fixture("analyze_smith_golden.json")).unwrap()).unwrap();
    let mut file = String::new();
    for kind in ["strength", "weakness"] {
        let rule = &analysis["rules"][kind];
        for f in rule["top"].as_array().unwrap() {
            file.push_str(&format!("{}\t{}\n", rule["anchor"].as_str().unwrap(), f.as_str().unwrap()));
        }
    }
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("mined.tsv");
    fs::write(&path, file).unwrap();
    let o = bin(&["validate", "--corpus", &c, "--player", "Smith", "--compare-rules", path.to_str().unwrap()]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["commonality_pct"]["overall"], 100.0);
    assert_eq!(v["missing"].as_array().unwrap().len(), 0);
}

#[test]
fn lexicon_lint_reports_problems() {
    let o = bin(&["lexicon", "lint"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("ok: "));

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.tsv");
    fs::write(&bad, "bat\tattacked\tpunch\nbat\tattacked\tpunch\nbowl\tbouncer\tbouncer\nbowl\tshort\tShort Ball\n").unwrap();
    let o = bin(&["lexicon", "lint", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(11));
    let out = stdout(&o);
    assert!(out.contains("line 2:") && out.contains("line 3:") && out.contains("line 4:"), "{out}");
}

#[test]
fn svg_biplots_written() {
    let dir = tempfile::tempdir().unwrap();
    let o = bin(&["analyze", "--corpus", &corpus(), "--player", "Smith", "--svg", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    for c in ["response", "outcome", "footwork", "shot-area"] {
        let svg = fs::read_to_string(dir.path().join(format!("{c}.svg"))).unwrap();
        assert!(svg.starts_with("<svg") && svg.trim_end().ends_with("</svg>"));
    }
    let footwork = fs::read_to_string(dir.path().join("footwork.svg")).unwrap();
    assert_eq!(footwork.matches("<circle").count(), 2);
}

#[test]
fn matrix_and_ca_exports() {
    let c = corpus();
    let o = bin(&["cm", "--corpus", &c, "--player", "Smith"]);
    assert_eq!(o.status.code(), Some(0));
    let cm = ConfrontationMatrix::from_text(&stdout(&o)).unwrap();
    let analysis: Value = serde_json::from_str(&fs::read_to_string(fixture("analyze_smith_golden.json")).unwrap()).unwrap();
    let counts: Vec<u64> = analysis["cm"]["counts"]
        .as_array()
        .unwrap()
        .iter()
        .flat_map(|r| r.as_array().unwrap().iter().map(|x| x.as_u64().unwrap()))
        .collect();
    assert_eq!(cm.table.counts(), &counts[..]);
    assert_eq!(cm.provenance.corpus_digest.as_deref(), analysis["provenance"]["corpus_digest"].as_str());

    let o = bin(&["ca", "--corpus", &c, "--player", "Smith"]);
    let text = stdout(&o);
    assert!(text.contains("singular_values"));
    assert!(text.contains("attacked"));
}

#[test]
fn synth_regenerates_fixture() {
    let records = generate(&SynthConfig::two_epoch(2019, 250));
    let text = Corpus::new(records).unwrap().to_text();
    assert_eq!(text, fs::read_to_string(fixture("synthetic.tsv")).unwrap());
    assert_eq!(roster_text(), fs::read_to_string(fixture("roster.tsv")).unwrap());
}
