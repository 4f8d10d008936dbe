use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::{Command, Output, Stdio};

use sbc_core::transforms::bwt_naive;

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/data")
        .join(name)
}

fn run_env(args: &[&str], stdin: &[u8], env: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_sbc"));
    cmd.args(args)
        .env_remove("SBC_TRACE")
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped());
    for (k, v) in env {
        cmd.env(k, v);
    }
    let mut child = cmd.spawn().expect("spawn sbc");
    child
        .stdin
        .take()
        .unwrap()
        .write_all(stdin)
        .expect("write stdin");
    child.wait_with_output().expect("wait for sbc")
}

fn run(args: &[&str], stdin: &[u8]) -> Output {
    run_env(args, stdin, &[])
}

fn stderr_json(out: &Output) -> serde_json::Value {
    let text = String::from_utf8(out.stderr.clone()).unwrap();
    let line = text.lines().last().expect("a JSON line on stderr");
    serde_json::from_str(line).expect("valid JSON")
}

#[test]
fn roundtrip_every_decodable_pipeline() {
    let text = std::fs::read(data("mississippi.txt")).unwrap();
    let inputs: [&[u8]; 3] = [&text, b"", b"aaaaaaaaaaaaaaaaaaaaaaaab"];
    for pipeline in ["bwt-mtf-rle-ac", "bwt-dc-ac", "block-kth", "kth-order"] {
        for input in inputs {
            let packed = run(&["compress", "--pipeline", pipeline], input);
            assert!(packed.status.success(), "{pipeline}");
            assert_eq!(&packed.stdout[..4], b"SBC1");
            let back = run(&["decompress"], &packed.stdout);
            assert!(back.status.success(), "{pipeline}");
            assert_eq!(back.stdout, input, "{pipeline}");
        }
    }
}

#[test]
fn roundtrip_through_files() {
    let dir = tempfile::tempdir().unwrap();
    let packed = dir.path().join("m.sbc");
    let restored = dir.path().join("m.out");
    let input = data("mississippi.txt");
    let c = run(
        &[
            "compress",
            "--pipeline",
            "block-kth",
            "--unknown-n",
            "-i",
            input.to_str().unwrap(),
            "-o",
            packed.to_str().unwrap(),
        ],
        b"",
    );
    assert!(c.status.success());
    assert!(c.stdout.is_empty());
    let d = run(
        &[
            "decompress",
            "-i",
            packed.to_str().unwrap(),
            "-o",
            restored.to_str().unwrap(),
        ],
        b"",
    );
    assert!(d.status.success());
    assert_eq!(
        std::fs::read(restored).unwrap(),
        std::fs::read(input).unwrap()
    );
}

#[test]
fn compress_json_report() {
    let out = run(
        &[
            "compress",
            "--json",
            "--pipeline",
            "st-dc-ac",
            "--k",
            "auto",
        ],
        b"abracadabra abracadabra",
    );
    assert!(out.status.success());
    let report = stderr_json(&out);
    assert_eq!(report["command"], "compress");
    assert_eq!(report["pipeline"], "st-dc-ac");
    assert_eq!(report["model"], "streamsort");
    assert_eq!(report["n"], 23);
    assert_eq!(report["size_bits"], 8 * out.stdout.len() as u64);
    let sizes = report["st_sizes_bits"].as_array().unwrap();
    let k = report["k"].as_u64().unwrap() as usize;
    let min = sizes.iter().map(|s| s.as_u64().unwrap()).min().unwrap();
    assert_eq!(sizes[k].as_u64().unwrap(), min);
    assert!(report["ledger"]["sort_passes"].as_u64().unwrap() >= 1);
}

#[test]
fn entropy_of_mississippi() {
    let text = std::fs::read(data("mississippi.txt")).unwrap();
    let out = run(&["entropy", "--json"], &text);
    assert!(out.status.success());
    let line: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(line["n"], 11);
    assert_eq!(line["sigma"], 4);
    assert!((line["h"][0].as_f64().unwrap() - 1.8230).abs() < 1e-3);
    assert_eq!(line["h"].as_array().unwrap().len(), 5);
    let report = stderr_json(&out);
    assert!((report["reports"][0]["report"]["h"][0].as_f64().unwrap() - 1.8230).abs() < 1e-3);
}

#[test]
fn entropy_one_line_per_file() {
    let path = data("mississippi.txt");
    let p = path.to_str().unwrap();
    let out = run(&["entropy", "--max-k", "1", p, p], b"");
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 2);
}

#[test]
fn simulate_rw_bwt_trace() {
    let text = std::fs::read(data("mississippi.txt")).unwrap();
    let out = run(&["simulate", "--algo", "rw-bwt", "--trace"], &text);
    assert!(out.status.success());
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert_eq!(stdout.lines().last(), Some("ms#spipissii"));
    assert!(stdout.contains("# initial: triples"));
    assert!(
        stdout.lines().any(|l| l.split('\t').count() == 5),
        "quintuple rows"
    );
    let stderr = String::from_utf8(out.stderr).unwrap();
    assert!(stderr.lines().all(|l| l.starts_with("pass=")));

    let plain = run(&["simulate", "--algo", "rw-bwt"], &text);
    assert_eq!(plain.stdout, b"ms#spipissii\n");
    assert!(plain.stderr.is_empty());
}

#[test]
fn trace_environment_alias() {
    let text = std::fs::read(data("mississippi.txt")).unwrap();
    let out = run_env(&["compress"], &text, &[("SBC_TRACE", "1")]);
    assert!(out.status.success());
    assert!(String::from_utf8(out.stderr)
        .unwrap()
        .starts_with("pass=1 "));
}

#[test]
fn simulate_other_algorithms() {
    let out = run(&["simulate", "--algo", "rw-unbwt"], b"ms#spipissii");
    assert_eq!(out.stdout, b"mississippi\n");
    let out = run(&["simulate", "--algo", "rw-sa"], b"banana");
    assert_eq!(out.stdout, b"6 5 3 1 0 4 2\n");
    let out = run(&["simulate", "--algo", "sort-chars"], b"mississippi");
    assert_eq!(out.stdout, b"iiiimppssss\n");
    let out = run(&["simulate", "--algo", "sort-numbers"], b"13 2 7 0\n");
    assert_eq!(out.stdout, b"0 2 7 13\n");
    let out = run(&["simulate", "--algo", "sort-numbers"], b"1 2 3");
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["simulate", "--algo", "rw-unbwt"], b"ms#spip#ssii");
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn transforms_on_raw_bytes() {
    let out = run(&["transform", "--op", "bwt"], b"banana");
    let t = bwt_naive(b"banana").render(0xFF);
    assert_eq!(out.stdout, t);
    let back = run(&["transform", "--op", "unbwt"], &out.stdout);
    assert_eq!(back.stdout, b"banana");
    let st = run(&["transform", "--op", "st", "--k", "0"], b"banana");
    assert_eq!(st.stdout, b"banana\xff");
    let mtf = run(&["transform", "--op", "mtf"], b"aab");
    assert_eq!(mtf.stdout, [97, 0, 98]);
    let dc = run(&["transform", "--op", "dc"], b"ab");
    assert!(dc.status.success() && !dc.stdout.is_empty());
    let bad = run(&["transform", "--op", "bwt"], b"a\xffb");
    assert_eq!(bad.status.code(), Some(2));
    assert!(bad.stdout.is_empty());
}

#[test]
fn adversary_strings_and_experiment() {
    let out = run(&["adversary", "--sigma", "2", "--k", "2"], b"");
    assert_eq!(out.stdout, b"aabb");
    let out = run(
        &["adversary", "--sigma", "3", "--k", "2", "--power", "2"],
        b"",
    );
    assert_eq!(out.stdout, b"aabacbbccaabacbbcc");
    let out = run(&["adversary", "--experiment", "--n", "4096"], b"");
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["k"], 8);
    assert_eq!(report["block_len"], 23);
    assert_eq!(report["blocks"], 179);
    assert_eq!(
        run(&["adversary", "--experiment", "--sigma", "2"], b"")
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        run(&["adversary", "--sigma", "1", "--k", "2"], b"")
            .status
            .code(),
        Some(1)
    );
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["--help"], b"").status.code(), Some(0));
    assert_eq!(
        run(&["compress", "--model", "tape"], b"").status.code(),
        Some(1)
    );
    assert_eq!(
        run(
            &["compress", "--pipeline", "st-dc-ac", "--model", "standard"],
            b"ab"
        )
        .status
        .code(),
        Some(1)
    );
    assert_eq!(
        run(
            &["compress", "--pipeline", "block-kth", "--c", "0.1"],
            b"ab"
        )
        .status
        .code(),
        Some(1)
    );
    assert_eq!(run(&["decompress"], b"SBC1").status.code(), Some(2));
    let st = run(&["compress", "--pipeline", "st-dc-ac"], b"abab");
    assert_eq!(run(&["decompress"], &st.stdout).status.code(), Some(2));
    assert_eq!(
        run(&["compress", "--sigma", "2"], b"abc").status.code(),
        Some(2)
    );
    assert_eq!(
        run(&["compress", "--memory-budget-bits", "100"], b"abc")
            .status
            .code(),
        Some(3)
    );
    assert_eq!(
        run(&["entropy", "/nonexistent/file"], b"").status.code(),
        Some(1)
    );
}

#[test]
fn failed_runs_leave_no_output_file() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("out.sbc");
    let out = run(
        &[
            "compress",
            "--memory-budget-bits",
            "100",
            "-o",
            target.to_str().unwrap(),
        ],
        b"abc",
    );
    assert_eq!(out.status.code(), Some(3));
    assert!(!target.exists());
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 0);
}

fn csv_rows(bytes: &[u8]) -> Vec<Vec<String>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .from_reader(bytes);
    reader
        .records()
        .map(|r| r.unwrap().iter().map(str::to_string).collect())
        .collect()
}

#[test]
fn bench_empty_corpus() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["bench", "--corpus", dir.path().to_str().unwrap()], b"");
    assert!(out.status.success());
    let rows = csv_rows(&out.stdout);
    assert_eq!(rows.len(), 1);
    assert_eq!(rows[0].len(), 18);
    assert_eq!(rows[0][0], "file");
    assert_eq!(rows[0][17], "wall_time_ms");
}

#[test]
fn bench_rows_are_sorted_and_complete() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("b.txt"), b"mississippi").unwrap();
    std::fs::write(dir.path().join("a.txt"), b"abracadabra").unwrap();
    let out = run(
        &[
            "bench",
            "--corpus",
            dir.path().to_str().unwrap(),
            "--pipeline",
            "bwt-dc-ac,block-kth",
            "--c",
            "0.4,0.6",
            "--epsilon",
            "0.2",
        ],
        b"",
    );
    assert!(out.status.success());
    let rows = csv_rows(&out.stdout);
    assert_eq!(rows.len(), 1 + 2 * 3);
    assert!(rows.iter().all(|r| r.len() == 18));
    let keys: Vec<(&str, &str, &str)> = rows[1..]
        .iter()
        .map(|r| (r[0].as_str(), r[1].as_str(), r[3].as_str()))
        .collect();
    assert_eq!(
        keys,
        [
            ("a.txt", "bwt-dc-ac", ""),
            ("a.txt", "block-kth", "0.4"),
            ("a.txt", "block-kth", "0.6"),
            ("b.txt", "bwt-dc-ac", ""),
            ("b.txt", "block-kth", "0.4"),
            ("b.txt", "block-kth", "0.6"),
        ]
    );
    let again = run(
        &[
            "bench",
            "--corpus",
            dir.path().to_str().unwrap(),
            "--pipeline",
            "bwt-dc-ac,block-kth",
            "--c",
            "0.4,0.6",
            "--epsilon",
            "0.2",
        ],
        b"",
    );
    let strip = |rows: Vec<Vec<String>>| {
        rows.into_iter()
            .map(|mut r| {
                r.pop();
                r
            })
            .collect::<Vec<_>>()
    };
    assert_eq!(strip(csv_rows(&again.stdout)), strip(rows));
}

#[cfg(unix)]
#[test]
fn bench_skips_unreadable_files() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("ok.txt"), b"hello").unwrap();
    std::os::unix::fs::symlink(dir.path().join("missing"), dir.path().join("dangling")).unwrap();
    let out = run(
        &[
            "bench",
            "--corpus",
            dir.path().to_str().unwrap(),
            "--pipeline",
            "kth-order",
        ],
        b"",
    );
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8(out.stderr).unwrap().contains("skipping"));
    let rows = csv_rows(&out.stdout);
    assert_eq!(rows.len(), 2);
    assert_eq!(rows[1][0], "ok.txt");
}

#[test]
fn bench_reproduces_the_separation_experiment() {
    let dir = tempfile::tempdir().unwrap();
    let s = run(
        &["adversary", "--sigma", "2", "--k", "8", "--power", "16"],
        b"",
    );
    std::fs::write(dir.path().join("db.txt"), &s.stdout).unwrap();
    let exp = run(
        &[
            "adversary",
            "--experiment",
            "--n",
            "4096",
            "--c",
            "0.5",
            "--epsilon",
            "0.25",
        ],
        b"",
    );
    let report: serde_json::Value = serde_json::from_slice(&exp.stdout).unwrap();
    let out = run(
        &[
            "bench",
            "--corpus",
            dir.path().to_str().unwrap(),
            "--pipeline",
            "block-kth,bwt-dc-ac",
        ],
        b"",
    );
    let rows = csv_rows(&out.stdout);
    assert_eq!(rows[1][1], "block-kth");
    assert_eq!(rows[1][13], report["size_block_bits"].to_string());
    assert_eq!(rows[2][1], "bwt-dc-ac");
    assert_eq!(rows[2][13], report["size_full_bits"].to_string());
}
