//! Behavioral integration tests for the CLI surface: exit-code contract,
//! format contracts, and the near-noiseless redaction oracle.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;

use hyperdp::embeddings::{load_embeddings, Geometry, Vocabulary};

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_hyperdp")
}

fn tmp_dir(name: &str) -> PathBuf {
    let dir = Path::new(env!("CARGO_TARGET_TMPDIR")).join(name);
    fs::create_dir_all(&dir).unwrap();
    dir
}

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

fn run(args: &[&str], stdin: &str) -> Run {
    use std::io::Write;
    let mut child = Command::new(bin())
        .args(args)
        .stdin(std::process::Stdio::piped())
        .stdout(std::process::Stdio::piped())
        .stderr(std::process::Stdio::piped())
        .spawn()
        .unwrap();
    child
        .stdin
        .as_mut()
        .unwrap()
        .write_all(stdin.as_bytes())
        .unwrap();
    let out = child.wait_with_output().unwrap();
    Run {
        code: out.status.code().unwrap_or(-1),
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
    }
}

fn gen_fixture(dir: &Path) -> String {
    let path = dir.join("fixture.txt");
    let r = run(
        &[
            "gen-fixture",
            "--seed",
            "7",
            "--output",
            path.to_str().unwrap(),
        ],
        "",
    );
    assert_eq!(r.code, 0, "{}", r.stderr);
    path.to_str().unwrap().to_string()
}

#[test]
fn redact_with_enormous_epsilon_is_identity() {
    let dir = tmp_dir("redact-identity");
    let fixture = gen_fixture(&dir);
    let input = "n.0.0.0 n.1.2.1 n.2.0.0\nn.1 n.2.2.2\n";
    let r = run(
        &[
            "redact",
            "--embeddings",
            &fixture,
            "--epsilon",
            "1000000",
            "--seed",
            "1",
        ],
        input,
    );
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert_eq!(r.stdout, input);
}

#[test]
fn redact_empty_input_gives_empty_output() {
    let dir = tmp_dir("redact-empty");
    let fixture = gen_fixture(&dir);
    let r = run(
        &[
            "redact",
            "--embeddings",
            &fixture,
            "--epsilon",
            "1",
            "--seed",
            "1",
        ],
        "",
    );
    assert_eq!(r.code, 0);
    assert_eq!(r.stdout, "");
}

#[test]
fn redact_reports_statuses_in_sidecar() {
    let dir = tmp_dir("redact-sidecar");
    let fixture = gen_fixture(&dir);
    let sidecar = dir.join("status.tsv");
    let r = run(
        &[
            "redact",
            "--embeddings",
            &fixture,
            "--epsilon",
            "0.125",
            "--seed",
            "4",
            "--status-sidecar",
            sidecar.to_str().unwrap(),
        ],
        "the n.0.0.0 zebra\n",
    );
    assert_eq!(r.code, 0, "{}", r.stderr);
    let sidecar = fs::read_to_string(&sidecar).unwrap();
    assert!(sidecar.contains("# epsilon\t0.125"));
    assert!(sidecar.contains("unchanged-by-policy")); // "the"
    assert!(sidecar.contains("unchanged-unknown-word")); // "zebra"
    let rows: Vec<&str> = sidecar
        .lines()
        .filter(|l| !l.starts_with('#') && !l.starts_with("line\t"))
        .collect();
    assert_eq!(rows.len(), 3);
}

#[test]
fn malformed_embedding_file_exits_1_naming_the_line() {
    let dir = tmp_dir("bad-embeddings");
    let path = dir.join("bad.txt");
    fs::write(&path, "ok 0.1 0.1\nbad 1.2 0.0\n").unwrap();
    let r = run(
        &[
            "redact",
            "--embeddings",
            path.to_str().unwrap(),
            "--epsilon",
            "1",
        ],
        "hello\n",
    );
    assert_eq!(r.code, 1);
    assert!(r.stderr.contains("line 2"), "stderr: {}", r.stderr);

    // Same file loads under --clamp.
    let r = run(
        &[
            "redact",
            "--embeddings",
            path.to_str().unwrap(),
            "--epsilon",
            "1",
            "--clamp",
        ],
        "ok\n",
    );
    assert_eq!(r.code, 0, "{}", r.stderr);
}

#[test]
fn missing_required_flag_exits_2() {
    let r = run(&["redact"], "");
    assert_eq!(r.code, 2);
    let r = run(&["stats", "--epsilon", "1"], "");
    assert_eq!(r.code, 2);
}

#[test]
fn invalid_policy_exits_2() {
    let dir = tmp_dir("bad-policy");
    let fixture = gen_fixture(&dir);
    let r = run(
        &[
            "redact",
            "--embeddings",
            &fixture,
            "--epsilon",
            "1",
            "--policy",
            "sometimes",
        ],
        "x\n",
    );
    assert_eq!(r.code, 2, "{}", r.stderr);
}

#[test]
fn slot_policy_limits_eligibility() {
    let dir = tmp_dir("slots");
    let fixture = gen_fixture(&dir);
    let r = run(
        &[
            "redact",
            "--embeddings",
            &fixture,
            "--epsilon",
            "1000000",
            "--seed",
            "2",
            "--policy",
            "slots:1",
        ],
        "n.0.0.0 n.1.1.1 n.2.2.2\n",
    );
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert_eq!(r.stdout, "n.0.0.0 n.1.1.1 n.2.2.2\n");
}

#[test]
fn sample_vectors_stay_inside_ball_and_concentrate_with_epsilon() {
    let dir = tmp_dir("sample");
    let mean_norm = |eps: &str| -> f64 {
        let out = dir.join(format!("s{eps}.json"));
        let r = run(
            &[
                "sample",
                "--dim",
                "2",
                "--epsilon",
                eps,
                "--count",
                "5000",
                "--seed",
                "12",
                "--proposal",
                "direct-ball",
                "--output",
                out.to_str().unwrap(),
            ],
            "",
        );
        assert_eq!(r.code, 0, "{}", r.stderr);
        let v: serde_json::Value =
            serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap();
        let samples = v["samples"].as_array().unwrap();
        assert_eq!(samples.len(), 5000);
        let norms: Vec<f64> = samples
            .iter()
            .map(|s| {
                s.as_array()
                    .unwrap()
                    .iter()
                    .map(|c| c.as_f64().unwrap().powi(2))
                    .sum::<f64>()
                    .sqrt()
            })
            .collect();
        assert!(norms.iter().all(|&n| n < 1.0));
        assert!(v["meta"]["acceptance_rate"].as_f64().unwrap() > 0.0);
        norms.iter().sum::<f64>() / norms.len() as f64
    };
    let wide = mean_norm("0.125");
    let tight = mean_norm("8");
    assert!(
        tight < wide,
        "norms did not concentrate: eps=8 {tight} vs eps=0.125 {wide}"
    );
}

#[test]
fn stats_tsv_row_count_matches_sample() {
    let dir = tmp_dir("stats-rows");
    let fixture = gen_fixture(&dir);
    let r = run(
        &[
            "stats",
            "--embeddings",
            &fixture,
            "--epsilon",
            "1",
            "--runs",
            "50",
            "--seed",
            "2",
            "--sample-size",
            "5",
        ],
        "",
    );
    assert_eq!(r.code, 0, "{}", r.stderr);
    let rows = r
        .stdout
        .lines()
        .filter(|l| !l.starts_with('#') && !l.starts_with("word\t"))
        .count();
    assert_eq!(rows, 5);
    assert!(r.stdout.contains("# embedding_checksum\tfnv1a:"));
}

#[test]
fn stats_json_round_trips_through_schema() {
    let dir = tmp_dir("stats-json");
    let fixture = gen_fixture(&dir);
    let r = run(
        &[
            "stats",
            "--embeddings",
            &fixture,
            "--epsilon",
            "1000000",
            "--runs",
            "50",
            "--seed",
            "2",
            "--sample-size",
            "4",
            "--format",
            "json",
        ],
        "",
    );
    assert_eq!(r.code, 0, "{}", r.stderr);
    let parsed: hyperdp::stats::StatsReport = serde_json::from_str(&r.stdout).unwrap();
    assert_eq!(parsed.stats.records.len(), 4);
    assert_eq!(parsed.stats.runs, 50);
    assert!(parsed
        .meta
        .embedding_checksum
        .unwrap()
        .starts_with("fnv1a:"));
    // Near-noiseless: every sampled word returns itself, h_inf collapses to 0.
    for rec in &parsed.stats.records {
        assert_eq!(rec.n_w, 50);
        assert_eq!(rec.h_inf, Some(0.0));
    }
}

#[test]
fn calibrate_json_round_trips_through_schema() {
    let dir = tmp_dir("calibrate-schema");
    let fixture = gen_fixture(&dir);
    let out = dir.join("report.json");
    let r = run(
        &[
            "calibrate",
            "--embeddings",
            &fixture,
            "--euclidean-embeddings",
            &fixture,
            "--epsilon",
            "0.125",
            "--grid",
            "2,8,32,128",
            "--runs",
            "200",
            "--seed",
            "5",
            "--output",
            out.to_str().unwrap(),
        ],
        "",
    );
    assert_eq!(r.code, 0, "{}", r.stderr);
    let text = fs::read_to_string(&out).unwrap();
    // The typed schema accepts the file (the format contract).
    #[derive(serde::Deserialize)]
    struct CalibrateFile {
        meta: hyperdp::stats::ReportMeta,
        euclidean_checksum: String,
        report: hyperdp::stats::CalibrationReport,
    }
    let parsed: CalibrateFile = serde_json::from_str(&text).unwrap();
    assert_eq!(parsed.meta.seed, 5);
    assert!(parsed.euclidean_checksum.starts_with("fnv1a:"));
    assert_eq!(parsed.report.runs, 200);
    assert!(Path::new(&fixture).exists());
    // Direction on the fixture: hyperbolic expected stays below Euclidean.
    assert!(parsed.report.hyperbolic.expected_n_w < parsed.report.euclidean.expected_n_w);
}

#[test]
fn check_dp_exit_codes_cover_pass_fail_and_support() {
    let dir = tmp_dir("check-dp-codes");
    let fixture = gen_fixture(&dir);

    // Identical words: bound 0, identical distributions up to noise -> PASS.
    let r = run(
        &[
            "check-dp",
            "--embeddings",
            &fixture,
            "n.2.1.0",
            "n.2.1.0",
            "--epsilon",
            "2",
            "--runs",
            "5000",
            "--seed",
            "3",
        ],
        "",
    );
    assert_eq!(r.code, 0, "stderr: {}", r.stderr);
    assert!(r.stderr.contains("PASS"));

    // A verified-passing designated pair under the density-exact walker.
    let r = run(
        &[
            "check-dp",
            "--embeddings",
            &fixture,
            "n.2.1.0",
            "n.2.1.1",
            "--epsilon",
            "2",
            "--runs",
            "20000",
            "--seed",
            "3",
            "--proposal",
            "direct-ball",
        ],
        "",
    );
    assert_eq!(r.code, 0, "stderr: {}", r.stderr);

    // A near-coincident pair leaves the bound below the Monte-Carlo spread
    // of the literal walker: FAIL (3).
    let r = run(
        &[
            "check-dp",
            "--embeddings",
            &fixture,
            "n.0.0.1",
            "n.2.2.1",
            "--epsilon",
            "2",
            "--runs",
            "20000",
            "--seed",
            "3",
        ],
        "",
    );
    assert_eq!(r.code, 3, "stderr: {}", r.stderr);
    assert!(r.stderr.contains("FAIL"));

    // No shared outputs at enormous epsilon: insufficient support (4).
    let r = run(
        &[
            "check-dp",
            "--embeddings",
            &fixture,
            "n.0.0.0",
            "n.2.2.2",
            "--epsilon",
            "1000000",
            "--runs",
            "1000",
            "--seed",
            "3",
        ],
        "",
    );
    assert_eq!(r.code, 4, "stderr: {}", r.stderr);
    assert!(r.stderr.contains("INSUFFICIENT SUPPORT"));
}

#[test]
fn generated_fixture_loads_cleanly_without_clamping() {
    let dir = tmp_dir("fixture-loads");
    let fixture = gen_fixture(&dir);
    let vocab: Vocabulary<f64> =
        load_embeddings(Path::new(&fixture), Geometry::Hyperbolic, false).unwrap();
    assert_eq!(vocab.len(), 40);
    assert_eq!(vocab.dim(), 2);
    // Header line plus one line per word.
    assert_eq!(fs::read_to_string(&fixture).unwrap().lines().count(), 41);
    // Regenerating with the same seed yields the identical file.
    let again = dir.join("again.txt");
    let r = run(
        &[
            "gen-fixture",
            "--seed",
            "7",
            "--output",
            again.to_str().unwrap(),
        ],
        "",
    );
    assert_eq!(r.code, 0);
    assert_eq!(fs::read(&fixture).unwrap(), fs::read(&again).unwrap());
}
