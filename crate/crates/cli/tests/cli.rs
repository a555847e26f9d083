use std::process::{Command, Output};

fn hivecount(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hivecount"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).trim().to_string()
}

#[test]
fn count_small_triples() {
    let out = hivecount(&["count", "--lambda", "2,1", "--mu", "2,1", "--nu", "3,2,1"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "2");

    let out = hivecount(&["count", "--lambda", "0", "--mu", "0", "--nu", "0"]);
    assert_eq!(stdout(&out), "1");

    // |nu| != |lambda| + |mu|
    let out = hivecount(&["count", "--lambda", "2,1", "--mu", "2,1", "--nu", "3,2"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "0");
}

#[test]
fn both_methods_agree() {
    let out = hivecount(&[
        "count", "--lambda", "3,2,1", "--mu", "2,1", "--nu", "4,3,2", "--method", "both",
    ]);
    assert!(out.status.success(), "{out:?}");
    assert_eq!(stdout(&out), "2");
}

#[test]
fn exit_codes() {
    let bad = hivecount(&["count", "--lambda", "1,2", "--mu", "1", "--nu", "2,1"]);
    assert_eq!(bad.status.code(), Some(2));

    let capped = hivecount(&[
        "count", "--lambda", "3,2,1,0", "--mu", "3,2,1,0", "--nu", "4,4,2,2", "--method", "naive", "--cap", "1",
    ]);
    assert_eq!(capped.status.code(), Some(4));
}

#[test]
fn json_errors_carry_the_exit_code() {
    let out = hivecount(&["--json", "count", "--lambda", "1,2", "--mu", "1", "--nu", "2,1"]);
    assert_eq!(out.status.code(), Some(2));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["exit_code"], 2);
}

#[test]
fn json_envelope() {
    let out = hivecount(&["--json", "nonzero", "--lambda", "2,1", "--mu", "2,1", "--nu", "3,2,1"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["command"], "nonzero");
    assert_eq!(v["rank"], 3);
    assert_eq!(v["result"]["nonzero"], true);
    assert!(v["timings"]["total_ms"].is_number());
}

#[test]
fn export_round_trip() {
    let dir = std::env::temp_dir().join(format!("hivecount-export-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    for homogenized in [false, true] {
        let path = dir.join(format!("p{homogenized}.lat"));
        let path = path.to_str().unwrap();
        let mut args = vec!["export", "--lambda", "3,2,1", "--mu", "2,1", "--nu", "4,3,2", "--output", path];
        if homogenized {
            args.push("--homogenized");
        }
        assert!(hivecount(&args).status.success());
        let out = hivecount(&["count", "--polytope", path]);
        assert_eq!(stdout(&out), "2", "homogenized={homogenized}");
    }
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn kostka_paths() {
    for via in ["direct", "hive"] {
        let out = hivecount(&["kostka", "--lambda", "2,1", "--mu", "1,1,1", "--via", via]);
        assert_eq!(stdout(&out), "2");
        let out = hivecount(&["kostka", "--lambda", "3,2", "--mu", "1,2,2", "--via", via]);
        assert_eq!(stdout(&out), "2");
    }
}

#[test]
fn klimyk_decomposition() {
    let out = hivecount(&["klimyk", "--lambda", "1,0", "--mu", "1,0"]);
    assert_eq!(stdout(&out), "1,1 1\n2,0 1");
}

#[test]
fn triangulate_small_sides() {
    for rank in ["2", "3"] {
        let out = hivecount(&["triangulate", "--rank", rank]);
        assert!(out.status.success());
        let text = stdout(&out);
        assert!(text.lines().last().unwrap().starts_with("PASS unimodular"), "{text}");
    }
}
