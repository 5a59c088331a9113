//! Criterion 7: every subcommand, invoked twice with identical flags and
//! seed, produces byte-identical primary output files.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_hyperdp")
}

fn tmp_dir(name: &str) -> PathBuf {
    let dir = Path::new(env!("CARGO_TARGET_TMPDIR")).join(name);
    fs::create_dir_all(&dir).unwrap();
    dir
}

fn run_ok(args: &[&str], stdin: Option<&str>) -> std::process::Output {
    run_with_status(args, stdin, &[0])
}

fn run_with_status(args: &[&str], stdin: Option<&str>, allowed: &[i32]) -> std::process::Output {
    use std::io::Write;
    let mut cmd = Command::new(bin());
    cmd.args(args);
    cmd.stdin(std::process::Stdio::piped());
    cmd.stdout(std::process::Stdio::piped());
    cmd.stderr(std::process::Stdio::piped());
    let mut child = cmd.spawn().unwrap();
    child
        .stdin
        .as_mut()
        .unwrap()
        .write_all(stdin.unwrap_or("").as_bytes())
        .unwrap();
    let output = child.wait_with_output().unwrap();
    let code = output.status.code().unwrap_or(-1);
    assert!(
        allowed.contains(&code),
        "exit {code} not in {allowed:?} for {args:?}: {}",
        String::from_utf8_lossy(&output.stderr)
    );
    output
}

fn fixture_path(dir: &Path) -> String {
    let path = dir.join("fixture.txt");
    run_ok(
        &[
            "gen-fixture",
            "--depth",
            "3",
            "--branching",
            "3",
            "--dim",
            "2",
            "--seed",
            "7",
            "--output",
            path.to_str().unwrap(),
        ],
        None,
    );
    path.to_str().unwrap().to_string()
}

/// Run one invocation twice writing to two paths; assert byte equality.
fn assert_twice_identical(label: &str, dir: &Path, build_args: impl Fn(&str) -> Vec<String>) {
    let out_a = dir.join(format!("{label}-a.out"));
    let out_b = dir.join(format!("{label}-b.out"));
    for out in [&out_a, &out_b] {
        let args = build_args(out.to_str().unwrap());
        let args_ref: Vec<&str> = args.iter().map(String::as_str).collect();
        // check-dp legitimately exits 0/3/4 depending on the verdict; byte
        // determinism is what this suite asserts.
        run_with_status(&args_ref, None, &[0, 3, 4]);
    }
    let a = fs::read(&out_a).unwrap();
    let b = fs::read(&out_b).unwrap();
    assert!(!a.is_empty(), "{label}: empty output");
    assert_eq!(
        a, b,
        "{label}: outputs differ between identical invocations"
    );
    println!(
        "ACCEPTANCE C7 [{label}]: byte-identical ({} bytes)",
        a.len()
    );
}

#[test]
fn acceptance_7_every_subcommand_is_byte_deterministic() {
    let dir = tmp_dir("determinism");
    let fixture = fixture_path(&dir);

    // gen-fixture itself.
    assert_twice_identical("gen-fixture", &dir, |out| {
        vec![
            "gen-fixture".into(),
            "--depth".into(),
            "2".into(),
            "--branching".into(),
            "3".into(),
            "--dim".into(),
            "2".into(),
            "--seed".into(),
            "11".into(),
            "--output".into(),
            out.into(),
        ]
    });

    let input = dir.join("queries.txt");
    fs::write(&input, "n.0.0.0 visits n.1.2.1\nthe n.2.0.0 is here\n").unwrap();
    assert_twice_identical("redact", &dir, |out| {
        vec![
            "redact".into(),
            "--embeddings".into(),
            fixture.clone(),
            "--epsilon".into(),
            "0.5".into(),
            "--seed".into(),
            "42".into(),
            "--input".into(),
            input.to_str().unwrap().into(),
            "--output".into(),
            out.into(),
            "--status-sidecar".into(),
            format!("{out}.sidecar"),
        ]
    });
    // Sidecars must match too.
    let sa = fs::read(dir.join("redact-a.out.sidecar")).unwrap();
    let sb = fs::read(dir.join("redact-b.out.sidecar")).unwrap();
    assert_eq!(sa, sb, "redact sidecars differ");

    assert_twice_identical("sample", &dir, |out| {
        vec![
            "sample".into(),
            "--dim".into(),
            "2".into(),
            "--epsilon".into(),
            "2".into(),
            "--count".into(),
            "50".into(),
            "--seed".into(),
            "9".into(),
            "--format".into(),
            "json".into(),
            "--output".into(),
            out.into(),
        ]
    });

    for format in ["tsv", "json"] {
        assert_twice_identical(&format!("stats-{format}"), &dir, |out| {
            vec![
                "stats".into(),
                "--embeddings".into(),
                fixture.clone(),
                "--epsilon".into(),
                "1".into(),
                "--runs".into(),
                "100".into(),
                "--seed".into(),
                "3".into(),
                "--sample-size".into(),
                "8".into(),
                "--format".into(),
                format.into(),
                "--output".into(),
                out.into(),
            ]
        });
    }

    assert_twice_identical("calibrate", &dir, |out| {
        vec![
            "calibrate".into(),
            "--embeddings".into(),
            fixture.clone(),
            "--euclidean-embeddings".into(),
            fixture.clone(),
            "--epsilon".into(),
            "1".into(),
            "--grid".into(),
            "4,16,64".into(),
            "--runs".into(),
            "100".into(),
            "--seed".into(),
            "5".into(),
            "--output".into(),
            out.into(),
        ]
    });

    assert_twice_identical("check-dp", &dir, |out| {
        vec![
            "check-dp".into(),
            "--embeddings".into(),
            fixture.clone(),
            "n.2.1.0".into(),
            "n.2.1.1".into(),
            "--epsilon".into(),
            "2".into(),
            "--runs".into(),
            "2000".into(),
            "--seed".into(),
            "6".into(),
            "--proposal".into(),
            "direct-ball".into(),
            "--output".into(),
            out.into(),
        ]
    });

    println!("ACCEPTANCE C7 PASS: all subcommands byte-deterministic");
}
