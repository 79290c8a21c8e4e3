use std::io::Write;
use std::path::Path;
use std::process::{Command, Output, Stdio};

fn run(args: &[&str], stdin: &str, cache: &Path) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_parikill"))
        .args(args)
        .env("PARIKILL_CACHE_DIR", cache)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(stdin.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn family(name: &str, cache: &Path) -> String {
    let o = run(&["family", name], "", cache);
    assert!(o.status.success());
    stdout(&o)
}

#[test]
fn sort_pipeline() {
    let dir = tempfile::tempdir().unwrap();
    let sort = family("sort", dir.path());
    assert_eq!(sort.trim(), "bf:v1 n=4 tt=d18b");
    let o = run(&["measure", "--which", "pc_min"], &sort, dir.path());
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "2\n");

    let squared = run(&["power", "--k", "2"], &sort, dir.path());
    assert!(squared.status.success());
    let o = run(&["spectrum", "--summary"], &stdout(&squared), dir.path());
    assert!(stdout(&o).lines().any(|l| l == "sparsity 64"));
}

#[test]
fn malformed_input_exits_2_with_position() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.bf");
    std::fs::write(&bad, "bf:v1 n=4 tt=d18b\nbf:v1 n=3 tt=zz\n").unwrap();
    let o = run(&["measure", "--in", bad.to_str().unwrap()], "", dir.path());
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("line 2, column"), "{err}");
    assert_eq!(run(&["frobnicate"], "", dir.path()).status.code(), Some(2));
}

#[test]
fn budget_refusal_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let sort = family("sort", dir.path());
    let o = run(&["measure", "--which", "pc_min", "--budget-systems", "0", "--no-cache"], &sort, dir.path());
    assert_eq!(o.status.code(), Some(3));
    assert!(stdout(&o).contains("max_systems reached"));
    let o = run(&["scan", "--n", "5", "--exhaustive"], "", dir.path());
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn json_reports_and_cache() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("cache");
    let maj = family("maj3", &cache);
    let out = dir.path().join("r.json");
    let args = ["measure", "--which", "pc_min,pdt", "--witnesses", "--json", out.to_str().unwrap()];
    assert!(run(&args, &maj, &cache).status.success());
    let first = std::fs::read_to_string(&out).unwrap();
    let v: serde_json::Value = serde_json::from_str(&first).unwrap();
    assert_eq!(v[0]["report_version"], 1);
    assert_eq!(v[0]["pc_min"]["value"], 2);
    assert!(v[0]["witnesses"]["pdt"].is_object() || v[0]["witnesses"]["pdt"].is_string());

    // second run is served from the cache and identical
    assert!(run(&args, &maj, &cache).status.success());
    assert_eq!(std::fs::read_to_string(&out).unwrap(), first);
    let list = run(&["cache", "list"], "", &cache);
    assert_eq!(stdout(&list).lines().count(), 1);
    let verify = run(&["cache", "verify"], "", &cache);
    assert!(verify.status.success());
    assert!(stdout(&verify).contains("mismatches 0"));
    assert!(stdout(&run(&["cache", "clear"], "", &cache)).contains("removed 1"));

    let fresh = dir.path().join("fresh");
    let mut no_cache = args.to_vec();
    no_cache.push("--no-cache");
    assert!(run(&no_cache, &maj, &fresh).status.success());
    assert!(!fresh.exists() || std::fs::read_dir(&fresh).unwrap().next().is_none());
}

#[test]
fn compose_and_families() {
    let dir = tempfile::tempdir().unwrap();
    let and = dir.path().join("and.bf");
    std::fs::write(&and, family("and2", dir.path())).unwrap();
    let o = run(&["compose", "--outer", and.to_str().unwrap(), "--inner", and.to_str().unwrap()], "", dir.path());
    assert_eq!(stdout(&o).trim(), "bf:v1 n=4 tt=8000");
    let o = run(&["family", "parity", "--alpha", "110", "--b", "1"], "", dir.path());
    assert_eq!(stdout(&o).trim(), "bf:v1 n=3 tt=99");
    let o = run(&["family", "constant", "--b", "1", "--n", "2"], "", dir.path());
    assert_eq!(stdout(&o).trim(), "bf:v1 n=2 tt=f");
    assert_eq!(run(&["family", "parity"], "", dir.path()).status.code(), Some(2));
}

#[test]
fn verify_paper_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("report.json");
    let o = run(
        &["verify-paper", "--only", "hi_fourier_expansion,sort_measures", "--json", out.to_str().unwrap()],
        "",
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 2);
    assert!(v.as_array().unwrap().iter().all(|c| c["status"] == "pass" && c.get("runtime_ms").is_none()));

    let o = run(&["verify-paper", "--only", "sort_fourier_expansion"], "", dir.path());
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).starts_with("FAIL"));
    let o = run(&["verify-paper", "--only", "sort_measures", "--budget-systems", "0"], "", dir.path());
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("BUDGET"));
    assert_eq!(run(&["verify-paper", "--only", "nope"], "", dir.path()).status.code(), Some(2));
}

#[test]
fn scan_store() {
    let dir = tempfile::tempdir().unwrap();
    let store = dir.path().join("runs");
    let o = run(
        &["scan", "--n", "2", "--exhaustive", "--json", "--store", store.to_str().unwrap()],
        "",
        dir.path(),
    );
    assert!(o.status.success());
    assert_eq!(stdout(&o).lines().count(), 8);
    let saved = std::fs::read_to_string(store.join("arity-2.jsonl")).unwrap();
    assert!(saved.lines().count() >= 1);
    for line in saved.lines() {
        let v: serde_json::Value = serde_json::from_str(line).unwrap();
        assert_eq!(v["pdt"]["value"], 2);
    }
    let a = run(&["scan", "--n", "5", "--random", "6", "--seed", "3", "--json"], "", dir.path());
    let b = run(&["scan", "--n", "5", "--random", "6", "--seed", "3", "--json"], "", dir.path());
    let strip = |o: &Output| -> Vec<serde_json::Value> {
        stdout(o)
            .lines()
            .map(|l| {
                let mut v: serde_json::Value = serde_json::from_str(l).unwrap();
                v.as_object_mut().unwrap().remove("timestamp");
                v
            })
            .collect()
    };
    assert_eq!(strip(&a), strip(&b));
}

#[test]
fn threads_flag() {
    let dir = tempfile::tempdir().unwrap();
    let hi = family("hemi_icosahedron", dir.path());
    let one = run(&["--threads", "1", "measure", "--json", "--no-cache", "--witnesses"], &hi, dir.path());
    let four = run(&["measure", "--threads", "4", "--json", "--no-cache", "--witnesses"], &hi, dir.path());
    assert!(one.status.success());
    assert_eq!(one.stdout, four.stdout);
}
