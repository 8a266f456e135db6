use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn quadirr(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_quadirr"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn tiny_scan() {
    let out = quadirr(&["scan", "--disc-min", "5", "--disc-max", "6", "--p-max", "4", "--index", "chi"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "D,p,r\n5,3,0\n");
}

#[test]
fn usage_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let log = dir.path().join("h.jsonl");
    let bad_c = quadirr(&["search", "--pmin", "100000", "--c", "1", "--disc-max", "10000", "--log", path_str(&log)]);
    assert_eq!(bad_c.status.code(), Some(2));
    let p_too_small = quadirr(&["search", "--pmin", "1000", "--c", "2", "--disc-max", "10000", "--log", path_str(&log)]);
    assert_eq!(p_too_small.status.code(), Some(2));
    assert_eq!(quadirr(&["field", "--d", "5", "--p", "5"]).status.code(), Some(2));
    assert_eq!(quadirr(&["scan", "--disc-max", "10"]).status.code(), Some(2));
    assert!(!log.exists());
}

#[test]
fn exhaustion_exits_3_and_io_failure_exits_4() {
    let dir = tempfile::tempdir().unwrap();
    let log = dir.path().join("h.jsonl");
    let out = quadirr(&[
        "search", "--pmin", "1000000", "--c", "1.00001", "--m-start", "1", "--disc-min", "5",
        "--disc-max", "8", "--m-max", "1", "--log", path_str(&log),
    ]);
    assert_eq!(out.status.code(), Some(3));
    let out = quadirr(&[
        "search", "--pmin", "100000", "--c", "2", "--disc-max", "10000", "--log",
        path_str(&dir.path().join("missing").join("h.jsonl")),
    ]);
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn first_hit_search_logs_the_hit() {
    let dir = tempfile::tempdir().unwrap();
    let log = dir.path().join("h.jsonl");
    let args = [
        "search", "--pmin", "100000", "--c", "2", "--m-start", "2", "--disc-min", "5", "--disc-max",
        "10000", "--log", path_str(&log),
    ];
    let out = quadirr(&args);
    assert!(out.status.success());
    let text = fs::read_to_string(&log).unwrap();
    assert_eq!(text.lines().count(), 1);
    assert!(text.contains(r#""D":184,"m":2,"p":164999"#), "{text}");
    // a rerun finds the logged hit and appends nothing
    assert!(quadirr(&args).status.success());
    assert_eq!(fs::read_to_string(&log).unwrap(), text);
}

fn search_args<'a>(log: &'a str, extra: &[&'a str]) -> Vec<&'a str> {
    let mut v = vec![
        "search", "--pmin", "10000", "--c", "2", "--m-start", "2", "--disc-min", "5", "--disc-max",
        "300", "--m-max", "3", "--all", "--batch", "16", "--log", log,
    ];
    v.extend_from_slice(extra);
    v
}

#[test]
fn resumed_all_hits_log_matches_uninterrupted() {
    let dir = tempfile::tempdir().unwrap();
    let full = dir.path().join("full.jsonl");
    assert!(quadirr(&search_args(path_str(&full), &["--threads", "1"])).status.success());
    let reference = fs::read_to_string(&full).unwrap();
    assert!(reference.lines().count() > 3, "{reference}");

    for (i, stops) in [[7u64, 40, 1000], [1, 55, 13], [64, 64, 64]].iter().enumerate() {
        let log = dir.path().join(format!("part{i}.jsonl"));
        let state = dir.path().join(format!("part{i}.state.json"));
        for cells in stops {
            let n = cells.to_string();
            let out = quadirr(&search_args(
                path_str(&log),
                &["--resume", path_str(&state), "--max-cells", &n],
            ));
            assert!(out.status.success());
        }
        // finish
        let out = quadirr(&search_args(path_str(&log), &["--resume", path_str(&state)]));
        assert!(out.status.success());
        assert_eq!(fs::read_to_string(&log).unwrap(), reference, "interrupt points {stops:?}");
    }
}

#[test]
fn resumed_first_hit_matches_uninterrupted() {
    let dir = tempfile::tempdir().unwrap();
    let base = |log: &Path| {
        vec![
            "search".to_string(), "--pmin".into(), "100000".into(), "--c".into(), "2".into(),
            "--m-start".into(), "2".into(), "--disc-min".into(), "5".into(), "--disc-max".into(),
            "10000".into(), "--log".into(), log.to_str().unwrap().to_string(),
        ]
    };
    let run = |args: Vec<String>| {
        let refs: Vec<&str> = args.iter().map(String::as_str).collect();
        quadirr(&refs)
    };
    let full = dir.path().join("full.jsonl");
    assert!(run(base(&full)).status.success());

    let log = dir.path().join("part.jsonl");
    let state = dir.path().join("state.json");
    // stop once every D <= 100 at m = 2 has been tried
    let below_100 = stdout(&quadirr(&["disc", "--disc-min", "5", "--disc-max", "101"])).lines().count();
    let mut first = base(&log);
    first.extend(["--resume".into(), path_str(&state).into(), "--max-cells".into(), below_100.to_string()]);
    assert!(run(first).status.success());
    assert!(!log.exists() || fs::read_to_string(&log).unwrap().is_empty());
    let saved = fs::read_to_string(&state).unwrap();
    assert!(saved.contains(r#""next_m":2,"next_D":101"#), "{saved}");

    let mut rest = base(&log);
    rest.extend(["--resume".into(), path_str(&state).into()]);
    assert!(run(rest).status.success());
    assert_eq!(fs::read_to_string(&log).unwrap(), fs::read_to_string(&full).unwrap());
}

#[test]
fn resume_refuses_other_parameters() {
    let dir = tempfile::tempdir().unwrap();
    let log = dir.path().join("h.jsonl");
    let state = dir.path().join("s.json");
    let args = search_args(path_str(&log), &["--resume", path_str(&state), "--max-cells", "5"]);
    assert!(quadirr(&args).status.success());
    let out = quadirr(&[
        "search", "--pmin", "20000", "--c", "2", "--disc-max", "300", "--m-max", "3", "--log",
        path_str(&log), "--resume", path_str(&state),
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn values_and_reports() {
    let v = |args: &[&str]| stdout(&quadirr(args)).trim().to_string();
    assert_eq!(v(&["value", "--kind", "zetad", "--d", "5", "--m", "1"]), "1/30");
    assert_eq!(v(&["value", "--kind", "lchi", "--d", "8", "--m", "2"]), "11");
    assert_eq!(v(&["value", "--kind", "zeta", "--m", "16", "--mod", "37"]), "0");
    assert_eq!(v(&["stats", "--significance", "1.02"]), "0.796413");
    let report = v(&["stats", "--counts", "422,186,51,7,2", "--hist-out", "/dev/null"]);
    assert!(report.starts_with(r#"{"chi2":2.09822,"df":3,"significance":0.552273,"#), "{report}");
    let field = v(&["field", "--d", "5", "--p", "7"]);
    assert!(field.contains(r#""log2_disc":42.0051"#), "{field}");
    let est = v(&["estimate", "--pmin", "100000", "--c", "2"]);
    assert_eq!(est, "hit_probability=0.173718");
}

#[test]
fn scan_summary_round_trip_is_byte_stable() {
    let dir = tempfile::tempdir().unwrap();
    let rows = dir.path().join("rows.csv");
    let by_prime = dir.path().join("by_prime.json");
    let out = quadirr(&[
        "scan", "--disc-min", "5", "--disc-max", "5000", "--p-max", "100", "--index", "chi", "--summary",
        "--group-by", "prime", "--out", path_str(&rows), "--hist-out", "/dev/null", "--report-out",
        path_str(&by_prime),
    ]);
    assert!(out.status.success());
    let reports: serde_json::Value = serde_json::from_str(&fs::read_to_string(&by_prime).unwrap()).unwrap();
    let p67 = reports
        .as_array()
        .unwrap()
        .iter()
        .find(|r| r["group"] == "p=67")
        .expect("p=67 report");
    assert!((p67["significance"].as_f64().unwrap() - 0.986).abs() < 0.002, "{p67}");

    let summarize = |tag: &str| {
        let hist = dir.path().join(format!("hist{tag}.csv"));
        let rep = dir.path().join(format!("rep{tag}.json"));
        let out = quadirr(&[
            "stats", "--in", path_str(&rows), "--hist-out", path_str(&hist), "--report-out", path_str(&rep),
        ]);
        assert!(out.status.success());
        (fs::read(&hist).unwrap(), fs::read(&rep).unwrap())
    };
    let a = summarize("a");
    let b = summarize("b");
    assert_eq!(a, b);
    let pooled: serde_json::Value = serde_json::from_slice(&a.1).unwrap();
    let total: u64 = pooled["bins"].as_array().unwrap().iter().map(|b| b["obs"].as_u64().unwrap()).sum();
    assert_eq!(total, 36384);
}
