use serde_json::Value;

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("redei").chain(args.iter().copied());
    let code = redei::cli::run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn json(s: &str) -> Value {
    serde_json::from_str(s).unwrap()
}

#[test]
fn symbol_values_and_exit_codes() {
    let (code, out, _) = run(&["redei", "2", "2", "-23"]);
    assert_eq!(code, 0);
    assert_eq!(json(&out)["value"], -1);
    let (code, out, _) = run(&["redei", "2", "2", "-1"]);
    assert_eq!(code, 2);
    assert_eq!(json(&out)["error"], "NotDefined");
    assert_eq!(run(&["report", "4"]).0, 64);
    assert_eq!(run(&["scan", "--from", "10", "--to", "5"]).0, 64);
    assert_eq!(run(&["scan", "--from", "5", "--to", "10", "--class", "7"]).0, 64);
    assert_eq!(run(&["bogus"]).0, 64);
}

#[test]
fn report_text_and_json() {
    let (code, out, _) = run(&["report", "23"]);
    assert_eq!(code, 0);
    let v = json(&out);
    assert_eq!(v["rank_upper"], 0);
    assert_eq!(v["sha2_dim"], 2);
    let (code, out, _) = run(&["report", "23", "--text"]);
    assert_eq!(code, 0);
    assert!(out.contains("rank J_p(Q) = 0"), "{out}");
}

#[test]
fn scan_is_ordered_and_filtered() {
    let (code, out, _) = run(&["scan", "--from", "5", "--to", "250", "--class", "23mod48", "--jobs", "4"]);
    assert_eq!(code, 0);
    let ps: Vec<u64> = out.lines().map(|l| json(l)["params"]["p"].as_u64().unwrap()).collect();
    assert_eq!(ps, vec![23, 71, 167]);
}

#[test]
fn warm_cache_matches_cold() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cache.jsonl");
    let path = path.to_str().unwrap();
    let args = ["scan", "--from", "5", "--to", "60", "--jobs", "3", "--cache", path];
    let (c1, cold, _) = run(&args);
    let lines_after_cold = std::fs::read_to_string(path).unwrap().lines().count();
    let (c2, warm, _) = run(&args);
    assert_eq!((c1, c2), (0, 0));
    assert_eq!(cold, warm);
    assert_eq!(std::fs::read_to_string(path).unwrap().lines().count(), lines_after_cold);
    let (_, single, _) = run(&["report", "47", "--cache", path]);
    let from_scan = cold.lines().find(|l| json(l)["params"]["p"] == 47).unwrap();
    assert_eq!(json(&single), json(from_scan)["result"]);
    assert_eq!(json(from_scan)["schema_version"], 1);
}

#[test]
fn points_for_241() {
    let (code, out, _) = run(&["points", "241"]);
    assert_eq!(code, 0);
    let v = json(&out);
    assert_eq!(v["complete"], true);
    assert_eq!(v["points"].as_array().unwrap().len(), 6);
}
