use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use sha2::{Digest, Sha256};

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_cfspectra"));
    c.env_remove("CFSPECTRA_CACHE_DIR");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).arg("--no-cache").output().unwrap()
}

fn json_of(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn without_timestamp(bytes: &[u8]) -> String {
    String::from_utf8_lossy(bytes)
        .lines()
        .filter(|l| !l.contains("\"timestamp\"") && !l.starts_with("# timestamp"))
        .collect::<Vec<_>>()
        .join("\n")
}

fn ints(v: &Value) -> Vec<i64> {
    v.as_array().unwrap().iter().map(|x| x.as_i64().unwrap()).collect()
}

#[test]
fn cube_root_of_two_word() {
    let v = json_of(&run(&["expand", "--poly", "-2,0,0,1", "--depth", "10"]));
    let r = &v["results"];
    assert_eq!(r["a0"], 1);
    assert_eq!(ints(&r["quotients"]), [3, 1, 5, 1, 1, 4, 1, 1, 8, 1]);
    assert_eq!(r["text"], "[1;3,1,5,1,1,4,1,1,8,1]");
    assert_eq!(v["status"], "ok");
    assert_eq!(v["config"]["depth"], 10);
    assert_eq!(v["provenance"]["input"]["degree"], 3);
}

#[test]
fn sqrt_seven_period() {
    let v = json_of(&run(&["period", "--poly", "-7,0,1"]));
    assert_eq!(ints(&v["results"]["preperiod"]), [2]);
    assert_eq!(ints(&v["results"]["period"]), [1, 1, 1, 4]);
}

#[test]
fn sqrt_two_identities_all_pass() {
    let v = json_of(&run(&["verify", "--poly", "-2,0,1", "--depth", "50"]));
    assert_eq!(v["results"]["all_pass"], true);
    assert_eq!(v["results"]["failures"], 0);
}

#[test]
fn convergents_match_recurrence() {
    let v = json_of(&run(&["convergents", "--poly", "-2,0,1", "--depth", "8"]));
    let rows = v["results"].as_array().unwrap();
    assert_eq!(rows.len(), 9);
    let (mut p, mut q) = ((1i64, 0i64), (0i64, 1i64));
    for row in rows {
        let a = row["a"].as_i64().unwrap();
        p = (a * p.0 + p.1, p.0);
        q = (a * q.0 + q.1, q.0);
        assert_eq!((row["p"].as_i64().unwrap(), row["q"].as_i64().unwrap()), (p.0, q.0));
    }
    assert_eq!((p.0, q.0), (1393, 985));
}

#[test]
fn root_selection_by_index() {
    let lo = json_of(&run(&["expand", "--poly", "-2,0,1", "--root", "0", "--depth", "3"]));
    assert_eq!(lo["results"]["a0"], -2);
    assert_eq!(ints(&lo["results"]["quotients"]), [1, 1, 2]);
    let out = run(&["expand", "--poly", "-2,0,1", "--root", "2"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("out of range"));
}

#[test]
fn fibonacci_word_complexity() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("fib.txt");
    let (mut a, mut b) = (vec![1u8], vec![1u8, 2]);
    while b.len() < 500 {
        let next = [b.clone(), a].concat();
        a = b;
        b = next;
    }
    let body: String = std::iter::once("0".to_string()).chain(b[..500].iter().map(|c| c.to_string())).collect::<Vec<_>>().join("\n");
    std::fs::write(&path, body).unwrap();
    let v = json_of(&run(&["complexity", "--word", path.to_str().unwrap(), "--depth", "500", "--max-n", "15"]));
    for row in v["results"]["complexity"].as_array().unwrap() {
        assert_eq!(row["p"].as_u64().unwrap(), row["n"].as_u64().unwrap() + 1);
    }
}

#[test]
fn input_errors_exit_one_with_line_numbers() {
    let dir = tempfile::tempdir().unwrap();
    let word = dir.path().join("w.txt");
    std::fs::write(&word, "# header\n1\n2\n0\n").unwrap();
    let out = run(&["expand", "--word", word.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("line 4"), "{}", stderr(&out));

    let json_word = dir.path().join("w.json");
    std::fs::write(&json_word, "{\n  \"a0\": 1,\n  \"quotients\": [1, 2,\n}\n").unwrap();
    let out = run(&["expand", "--word", json_word.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("line 4"), "{}", stderr(&out));

    let out = run(&["expand", "--poly", "1,2,x"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("coefficient 3"), "{}", stderr(&out));

    assert_eq!(run(&["expand", "--poly", "5"]).status.code(), Some(1));
    assert_eq!(run(&["expand"]).status.code(), Some(1));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(run(&["expand", "--poly", "-2,0,1", "--depth", "0"]).status.code(), Some(1));
    assert_eq!(run(&["orbit", "scan", "--poly", "-2,0,1", "--epsilon", "-1"]).status.code(), Some(1));
    assert_eq!(bin().arg("--help").output().unwrap().status.code(), Some(0));
}

#[test]
fn config_file_precedence_and_validation() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("job.cfg");
    std::fs::write(&cfg, "# sample\npoly = -2,0,0,1\ndepth = 5\n").unwrap();
    let c = cfg.to_str().unwrap();
    let v = json_of(&run(&["expand", "--config", c]));
    assert_eq!(v["results"]["quotients"].as_array().unwrap().len(), 5);
    let v = json_of(&run(&["expand", "--config", c, "--depth", "7"]));
    assert_eq!(v["results"]["quotients"].as_array().unwrap().len(), 7);
    assert_eq!(v["config"]["poly"], "-2,0,0,1");
    let v = json_of(&run(&["expand", "--poly", "-2,0,0,1"]));
    assert_eq!(v["config"]["depth"], 200);
    assert_eq!(v["config"]["bits"], 256);

    std::fs::write(&cfg, "poly = -2,0,1\n\ncolour = blue\n").unwrap();
    let out = run(&["expand", "--config", c]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains(":3: unknown key 'colour'"), "{}", stderr(&out));

    std::fs::write(&cfg, "depth = 4\ndepth = 5\n").unwrap();
    let out = run(&["expand", "--config", c, "--poly", "-2,0,1"]);
    assert!(stderr(&out).contains(":2: duplicate key"), "{}", stderr(&out));

    std::fs::write(&cfg, "height = 0\n").unwrap();
    assert_eq!(run(&["orbit", "scan", "--config", c, "--poly", "-2,0,1"]).status.code(), Some(1));
}

#[test]
fn reports_are_deterministic_and_digests_check_out() {
    let args = ["detect", "repetition", "--poly", "-3,0,0,1", "--depth", "120"];
    let (a, b) = (run(&args), run(&args));
    assert!(a.status.success());
    assert_eq!(without_timestamp(&a.stdout), without_timestamp(&b.stdout));

    let mut v: serde_json::Map<String, Value> = serde_json::from_slice(&a.stdout).unwrap();
    let digest = v.remove("digest").unwrap();
    v.remove("timestamp");
    let recomputed = hex::encode(Sha256::digest(serde_json::to_string(&v).unwrap().as_bytes()));
    assert_eq!(digest, recomputed.as_str());
}

#[test]
fn cache_hits_are_transparent() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["convergents", "--poly", "-2,0,0,1", "--depth", "150"];
    let cached = || bin().args(args).env("CFSPECTRA_CACHE_DIR", dir.path()).output().unwrap();
    let first = cached();
    let entries = std::fs::read_dir(dir.path()).unwrap().count();
    assert_eq!(entries, 1);
    let second = cached();
    let plain = run(&args);
    assert!(first.status.success() && second.status.success());
    assert_eq!(without_timestamp(&first.stdout), without_timestamp(&plain.stdout));
    assert_eq!(without_timestamp(&second.stdout), without_timestamp(&plain.stdout));

    // A corrupted entry is re-proved, found wrong and ignored.
    let entry = std::fs::read_dir(dir.path()).unwrap().next().unwrap().unwrap().path();
    let mut v: Value = serde_json::from_str(&std::fs::read_to_string(&entry).unwrap()).unwrap();
    v["quotients"][100] = Value::from(2);
    std::fs::write(&entry, v.to_string()).unwrap();
    assert_eq!(without_timestamp(&cached().stdout), without_timestamp(&plain.stdout));
}

fn csv_records(text: &str) -> (Vec<String>, Vec<Vec<String>>) {
    let body: String = text.lines().filter(|l| !l.starts_with('#')).map(|l| format!("{l}\n")).collect();
    let mut r = csv::Reader::from_reader(body.as_bytes());
    let header = r.headers().unwrap().iter().map(String::from).collect();
    let rows = r.records().map(|x| x.unwrap().iter().map(String::from).collect()).collect();
    (header, rows)
}

#[test]
fn csv_reports_one_row_per_item() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("w.csv");
    let o = out.to_str().unwrap();
    let status = run(&["detect", "repetition", "--poly", "-2,0,0,1", "--depth", "80", "--format", "csv", "-o", o]);
    assert!(status.status.success());
    assert!(status.stdout.is_empty());
    let text = std::fs::read_to_string(&out).unwrap();
    assert!(text.starts_with("# tool: cfspectra\n"));
    let (header, rows) = csv_records(&text);
    assert_eq!(header, ["k", "l", "m", "ratio", "mirror"]);

    let v = json_of(&run(&["detect", "repetition", "--poly", "-2,0,0,1", "--depth", "80"]));
    let ws = v["results"]["witnesses"].as_array().unwrap();
    assert_eq!(rows.len(), ws.len());
    for (row, w) in rows.iter().zip(ws) {
        assert_eq!(row[0], w["k"].to_string());
        assert_eq!(row[2], w["m"].to_string());
    }
    // The digest covers the resolved config, so only the format of the line is shared.
    let digest_line = text.lines().find(|l| l.starts_with("# digest: ")).unwrap();
    assert_eq!(digest_line.len(), 10 + 64);
}

#[test]
fn word_files_reproduce_polynomial_expansions() {
    let v = json_of(&run(&["expand", "--poly", "-2,0,0,1", "--depth", "40"]));
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("w.json");
    let word = serde_json::json!({ "a0": v["results"]["a0"], "quotients": v["results"]["quotients"] });
    std::fs::write(&path, word.to_string()).unwrap();
    let w = json_of(&run(&["convergents", "--word", path.to_str().unwrap(), "--depth", "40"]));
    let p = json_of(&run(&["convergents", "--poly", "-2,0,0,1", "--depth", "40"]));
    assert_eq!(w["results"], p["results"]);
    assert_eq!(w["provenance"]["input"]["convergents_digest"], p["provenance"]["input"]["convergents_digest"]);
}

#[test]
fn harness_checks_witnesses() {
    let v = json_of(&run(&[
        "harness", "--poly", "-2,0,0,1", "--poly2", "-3,0,0,1", "--depth", "60", "--delta", "1/10",
    ]));
    let ws = v["results"]["witnesses"].as_array().unwrap();
    assert!(!ws.is_empty());
    for w in ws {
        assert_eq!(w["premise"], true);
        assert_eq!(w["transport"], true);
        assert_eq!(w["l1"]["verdict"], "holds");
        assert!(w["growth"]["holds"].is_boolean());
    }
    assert!(v["results"]["derived_delta"].is_array());

    let v = json_of(&run(&[
        "harness", "transport", "--poly", "-2,0,0,1", "--poly2", "-3,0,0,1", "--depth", "40", "--mirror",
    ]));
    for w in v["results"]["witnesses"].as_array().unwrap() {
        assert_eq!(w["mirror"], true);
        assert_eq!(w["transport"], true);
        assert!(w.get("l1").is_none());
    }

    let out = run(&["harness", "--poly", "-2,0,0,1", "--poly2", "-3,0,0,1", "--depth", "20", "--witness", "15,15,10"]);
    assert_eq!(out.status.code(), Some(1));
}

fn write(dir: &Path, name: &str, body: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn job_files_run_in_parallel_and_keep_order() {
    let dir = tempfile::tempdir().unwrap();
    let harness = write(
        dir.path(),
        "h.json",
        r#"[
            {"alpha": [-2, 0, 0, 1], "alpha_prime": [-3, 0, 0, 1], "depth": 60, "witnesses": [[0, 1, 2], [4, 2, 3]]},
            {"alpha": "-2,0,1", "alpha_prime": "-3,0,1", "depth": 40, "auto": {"L": "3", "minB": 2, "mirror": false}}
        ]"#,
    );
    let v = json_of(&run(&["harness", "--job", &harness, "--workers", "2"]));
    let jobs = v["results"].as_array().unwrap();
    assert_eq!(jobs.len(), 2);
    assert_eq!(jobs[0]["job"], 0);
    let first = jobs[0]["results"]["witnesses"].as_array().unwrap();
    assert_eq!(first.len(), 2);
    assert_eq!((first[1]["k"].as_u64(), first[1]["m"].as_u64()), (Some(4), Some(3)));
    for w in jobs[1]["results"]["witnesses"].as_array().unwrap() {
        assert!(w["m"].as_u64().unwrap() >= 2);
    }
    let one = json_of(&run(&["harness", "--job", &harness, "--workers", "1"]));
    assert_eq!(one["results"], v["results"]);

    let orbit = write(
        dir.path(),
        "o.json",
        r#"{"xi": {"a0": 2, "quotients": [1, 1, 1], "terminated": true}, "alpha": [0, 1], "height": 10, "mode": "classic", "epsilon": "1/10"}"#,
    );
    let v = json_of(&run(&["orbit", "scan", "--job", &orbit]));
    let r = &v["results"][0]["results"];
    let hits = r["xi_in_orbit"].as_array().unwrap();
    assert!(!hits.is_empty());
    for m in hits {
        // the image of 0 is b/d
        assert_eq!(3 * m[0][1].as_i64().unwrap(), 8 * m[1][1].as_i64().unwrap(), "{m}");
    }

    // Unterminated, the same word only pins xi to a cylinder containing 8/3:
    // coincidence with the orbit point cannot be certified either way.
    let open = write(dir.path(), "open.json", r#"{"xi": {"a0": 2, "quotients": [1, 1, 1]}, "alpha": [0, 1], "height": 10}"#);
    let out = run(&["orbit", "scan", "--job", &open]);
    assert_eq!(out.status.code(), Some(2));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["status"], "undecided");
    assert!(!v["results"][0]["results"]["undecided"].as_array().unwrap().is_empty());

    let bad = write(dir.path(), "bad.json", r#"{"xi": [-2, 0, 1], "alpha": "inf", "heigth": 5}"#);
    let out = run(&["orbit", "scan", "--job", &bad]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("unknown orbit job key 'heigth'"), "{}", stderr(&out));
}

#[test]
fn orbit_scan_at_infinity_is_rational_approximation() {
    let v = json_of(&run(&["orbit", "scan", "--poly", "-2,0,1", "--height", "200"]));
    let recs = v["results"]["records"].as_array().unwrap();
    assert!(!recs.is_empty());
    for r in recs {
        let m = &r["matrix"];
        let (a, c) = (m[0][0].as_i64().unwrap(), m[1][0].as_i64().unwrap());
        // best approximants a/c of sqrt 2 satisfy |a^2 - 2c^2| = 1
        assert_eq!((a * a - 2 * c * c).abs(), 1, "{m}");
    }
    let sep = json_of(&run(&["orbit", "separation", "--poly", "-2,0,1", "--poly2", "-3,0,1"]));
    assert_eq!(sep["results"]["holds"], true);
    let gap = json_of(&run(&["orbit", "gap", "--poly", "-2,0,0,1", "--k", "2", "--epsilon", "1/2", "--depth", "60"]));
    assert!(gap["results"]["indices"].is_array());
}
