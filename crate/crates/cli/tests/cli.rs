//! End-to-end tests of the `kpath` binary: exit codes, report formats,
//! and file round-trips.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn kpath(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kpath"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 stdout")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("no signal")
}

/// Fresh scratch directory per test so parallel tests never collide.
fn scratch(name: &str) -> PathBuf {
    let dir = Path::new(env!("CARGO_TARGET_TMPDIR")).join(name);
    let _ = fs::remove_dir_all(&dir);
    fs::create_dir_all(&dir).expect("scratch dir");
    dir
}

fn write_instance(dir: &Path, name: &str, text: &str) -> PathBuf {
    let path = dir.join(name);
    fs::write(&path, text).expect("write instance");
    path
}

const P3: &str = "p kpath 3 2 1\ne 0 1 1\ne 1 2 1\n";

#[test]
fn solve_reports_the_chromatic_number() {
    let dir = scratch("solve_p3");
    let p3 = write_instance(&dir, "p3.kpath", P3);
    let out = kpath(&["solve", p3.to_str().unwrap(), "--k", "1"]);
    assert_eq!(
        code(&out),
        0,
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert!(
        stdout(&out).contains("k=1: chi = 2"),
        "got: {}",
        stdout(&out)
    );
}

#[test]
fn a_path_with_k_edges_is_monochromatic() {
    let dir = scratch("solve_path_k");
    let path = write_instance(
        &dir,
        "p4.kpath",
        "p kpath 4 3 3\ne 0 1 1\ne 1 2 1\ne 2 3 1\n",
    );
    let out = kpath(&["solve", path.to_str().unwrap(), "--k", "3"]);
    assert_eq!(code(&out), 0);
    assert!(
        stdout(&out).contains("k=3: chi = 1"),
        "got: {}",
        stdout(&out)
    );
}

#[test]
fn decide_exit_codes_follow_the_answer() {
    let dir = scratch("decide");
    let p3 = write_instance(&dir, "p3.kpath", P3);
    let single = write_instance(&dir, "k1.kpath", "p kpath 1 0 1\n");
    assert_eq!(
        code(&kpath(&[
            "decide",
            p3.to_str().unwrap(),
            "--colors",
            "1",
            "--k",
            "1"
        ])),
        1
    );
    assert_eq!(
        code(&kpath(&[
            "decide",
            p3.to_str().unwrap(),
            "--colors",
            "2",
            "--k",
            "1"
        ])),
        0
    );
    assert_eq!(
        code(&kpath(&[
            "decide",
            single.to_str().unwrap(),
            "--colors",
            "1"
        ])),
        0
    );
}

#[test]
fn verify_accepts_valid_rejects_tampered_and_flags_missing() {
    let dir = scratch("verify");
    let p3 = write_instance(&dir, "p3.kpath", P3);
    let valid = write_instance(&dir, "valid.cert", "0 0\n1 0\n2 1\n");
    let out = kpath(&[
        "verify",
        p3.to_str().unwrap(),
        valid.to_str().unwrap(),
        "--k",
        "1",
    ]);
    assert_eq!(
        code(&out),
        0,
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );

    // One flipped color merges all three vertices into a 2-edge path.
    let tampered = write_instance(&dir, "tampered.cert", "0 0\n1 0\n2 0\n");
    let out = kpath(&[
        "verify",
        p3.to_str().unwrap(),
        tampered.to_str().unwrap(),
        "--k",
        "1",
    ]);
    assert_eq!(code(&out), 1);
    assert!(stdout(&out).contains("invalid"));

    let missing = write_instance(&dir, "missing.cert", "0 0\n1 1\n");
    let out = kpath(&[
        "verify",
        p3.to_str().unwrap(),
        missing.to_str().unwrap(),
        "--k",
        "1",
    ]);
    assert_eq!(code(&out), 2);

    let duplicate = write_instance(&dir, "dup.cert", "0 0\n1 1\n2 0\n1 1\n");
    let out = kpath(&[
        "verify",
        p3.to_str().unwrap(),
        duplicate.to_str().unwrap(),
        "--k",
        "1",
    ]);
    assert_eq!(code(&out), 2);
}

#[test]
fn malformed_instances_exit_2() {
    let dir = scratch("malformed");
    let bad = write_instance(&dir, "bad.kpath", "p kpath 2 1\ne 0 1 1\n");
    assert_eq!(code(&kpath(&["solve", bad.to_str().unwrap()])), 2);
    let absent = dir.join("no-such-file.kpath");
    assert_eq!(code(&kpath(&["solve", absent.to_str().unwrap()])), 2);
}

#[test]
fn json_report_carries_schema_stats_and_verified_certificate() {
    let dir = scratch("json");
    let p3 = write_instance(&dir, "p3.kpath", P3);
    let out = kpath(&[
        "solve",
        p3.to_str().unwrap(),
        "--k",
        "1",
        "--certificate",
        "--json",
    ]);
    assert_eq!(code(&out), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).expect("valid json");
    assert_eq!(v["schema"], 1);
    assert_eq!(v["stats"]["n"], 3);
    assert_eq!(v["stats"]["width"], 1);
    let result = &v["results"][0];
    assert_eq!(result["k"], 1);
    assert_eq!(result["chromatic"], 2);
    assert_eq!(result["colorable"], true);
    assert_eq!(result["verified"], true);
    assert_eq!(
        result["coloring"].as_array().expect("coloring array").len(),
        3
    );
    assert!(result["times"]["total_ms"].as_f64().expect("time") >= 0.0);

    // Without --certificate the verification field must be absent.
    let out = kpath(&["solve", p3.to_str().unwrap(), "--k", "1", "--json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).expect("valid json");
    assert!(v["results"][0].get("verified").is_none());
    assert!(v["results"][0].get("coloring").is_none());
}

#[test]
fn gen_is_deterministic_per_seed() {
    let dir = scratch("gen");
    let a = dir.join("a.kpath");
    let b = dir.join("b.kpath");
    let c = dir.join("c.kpath");
    for (path, seed) in [(&a, "9"), (&b, "9"), (&c, "10")] {
        let out = kpath(&[
            "gen",
            "--n",
            "40",
            "--seed",
            seed,
            "--out",
            path.to_str().unwrap(),
        ]);
        assert_eq!(
            code(&out),
            0,
            "stderr: {}",
            String::from_utf8_lossy(&out.stderr)
        );
    }
    let read = |p: &Path| fs::read_to_string(p).expect("generated file");
    assert_eq!(read(&a), read(&b));
    assert_eq!(
        read(&a.with_extension("kpath.layout")),
        read(&b.with_extension("kpath.layout"))
    );
    assert_ne!(read(&a), read(&c));
}

#[test]
fn generated_layout_parses_back() {
    let dir = scratch("gen_roundtrip");
    let inst = dir.join("g.kpath");
    kpath(&[
        "gen",
        "--n",
        "25",
        "--seed",
        "1",
        "--k",
        "2",
        "--out",
        inst.to_str().unwrap(),
    ]);
    let out = kpath(&["stats", inst.to_str().unwrap(), "--json"]);
    assert_eq!(code(&out), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).expect("valid json");
    assert_eq!(v["stats"]["n"], 25);
    assert_eq!(v["k"], 2);
    let layout = fs::read_to_string(dir.join("g.kpath.layout")).expect("sidecar");
    assert_eq!(layout.lines().count(), 25);
}

#[test]
fn bench_emits_one_sorted_row_per_instance() {
    let dir = scratch("bench");
    write_instance(&dir, "zeta.kpath", P3);
    write_instance(&dir, "alpha.kpath", "p kpath 1 0 1\n");
    write_instance(&dir, "mid.kpath", "p kpath 2 1 1\ne 0 1 0\n");
    write_instance(&dir, "ignored.txt", "not an instance");
    let csv_path = dir.join("report.csv");
    let out = kpath(&[
        "--jobs",
        "2",
        "bench",
        dir.to_str().unwrap(),
        "--repeat",
        "2",
        "--out",
        csv_path.to_str().unwrap(),
    ]);
    assert_eq!(
        code(&out),
        0,
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    let csv = fs::read_to_string(&csv_path).expect("csv written");
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "name,n,m,f,omega,delta,width,chi1,t1,chi2,t2");
    assert_eq!(lines.len(), 4);
    let names: Vec<&str> = lines[1..]
        .iter()
        .map(|l| l.split(',').next().unwrap())
        .collect();
    assert_eq!(names, ["alpha", "mid", "zeta"]);
    // The conflict-only edge forces two colors at every k.
    assert!(
        lines[2].starts_with("mid,2,1,0,2,1,1,2,"),
        "got: {}",
        lines[2]
    );
}

#[test]
fn split_and_unsplit_agree() {
    let dir = scratch("split");
    // Two triangles joined by a conflict-only bridge.
    let text = "p kpath 6 7 1\ne 0 1 1\ne 0 2 1\ne 1 2 1\ne 2 3 0\ne 3 4 1\ne 3 5 1\ne 4 5 1\n";
    let inst = write_instance(&dir, "bridged.kpath", text);
    let chi = |extra: &[&str]| {
        let mut args = vec!["solve", inst.to_str().unwrap(), "--k", "1", "--json"];
        args.extend_from_slice(extra);
        let out = kpath(&args);
        assert_eq!(code(&out), 0);
        let v: serde_json::Value = serde_json::from_str(&stdout(&out)).expect("valid json");
        v["results"][0]["chromatic"].as_u64().expect("chi")
    };
    assert_eq!(chi(&[]), chi(&["--no-split"]));
}

#[test]
fn cert_out_round_trips_through_verify() {
    let dir = scratch("cert_out");
    let inst = dir.join("g.kpath");
    kpath(&[
        "gen",
        "--n",
        "30",
        "--seed",
        "5",
        "--k",
        "1",
        "--out",
        inst.to_str().unwrap(),
    ]);
    let cert = dir.join("g.cert");
    let out = kpath(&[
        "solve",
        inst.to_str().unwrap(),
        "--k",
        "1",
        "--cert-out",
        cert.to_str().unwrap(),
    ]);
    assert_eq!(
        code(&out),
        0,
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    let out = kpath(&[
        "verify",
        inst.to_str().unwrap(),
        cert.to_str().unwrap(),
        "--k",
        "1",
    ]);
    assert_eq!(code(&out), 0, "stdout: {}", stdout(&out));
}

#[test]
fn unknown_strategy_is_an_input_error() {
    let dir = scratch("strategy");
    let p3 = write_instance(&dir, "p3.kpath", P3);
    let out = kpath(&["solve", p3.to_str().unwrap(), "--strategy", "fastest"]);
    assert_eq!(code(&out), 2);
}
