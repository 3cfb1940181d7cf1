use std::path::PathBuf;
use std::process::{Command, Output};

fn corpus(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("corpus").join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_horco-check")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn path(name: &str) -> String {
    corpus(name).to_string_lossy().into_owned()
}

#[test]
fn exit_codes_follow_orientation() {
    let pa = path("process_algebra.trs");
    assert_eq!(run(&["check", &pa]).status.code(), Some(0));
    assert_eq!(run(&["check", &pa, "--criterion", "horpo"]).status.code(), Some(1));
    let o = run(&["check", &pa, "--criterion", "rpo"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("first-order"));
    assert_eq!(run(&["check", "/nonexistent.trs"]).status.code(), Some(2));
    assert_eq!(run(&["check", &pa, "--depth", "0"]).status.code(), Some(2));
    assert_eq!(run(&["check", &pa, "--criterion", "kbo"]).status.code(), Some(2));
}

#[test]
fn json_reports_are_stable_and_revalidate() {
    let md = path("minus_div.trs");
    let a = run(&["check", &md, "--criterion", "rco", "--format", "json"]);
    let b = run(&["check", &md, "--criterion", "rco", "--format", "json"]);
    assert_eq!(a.status.code(), Some(1));
    assert_eq!(a.stdout, b.stdout);
    let v: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["summary"], serde_json::json!({"oriented": 3, "total": 4}));
    assert!(v["rules"][3]["derivation"].is_null());
    assert!(v["rules"][3]["reason"].is_string());

    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    let report = dir.join("minus_div_report.json");
    std::fs::write(&report, &a.stdout).unwrap();
    let o = run(&["validate", &md, &report.to_string_lossy()]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert_eq!(stdout(&o).matches("valid").count(), 3);

    let node = dir.join("minus_div_node.json");
    std::fs::write(&node, serde_json::to_vec(&v["rules"][1]["derivation"]).unwrap()).unwrap();
    assert_eq!(run(&["validate", &md, &node.to_string_lossy()]).status.code(), Some(0));

    let forged = dir.join("minus_div_forged.json");
    std::fs::write(&forged, stdout(&a).replacen("\"arg\"", "\"prec\"", 1)).unwrap();
    let o = run(&["validate", &md, &forged.to_string_lossy()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("INVALID"));
}

#[test]
fn compare_and_chain() {
    let md = path("minus_div.trs");
    let o = run(&["compare", &md, "minus (s x) (s y)", "minus x y", "--criterion", "rpo"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("yes"));
    let o = run(&["compare", &md, "0", "s 0", "--criterion", "rco"]);
    assert_eq!(o.status.code(), Some(1));
    let o = run(&["compare", &md, "minus (s x) y", "x", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["greater"], true);
    assert!(v["chain"].as_array().is_some_and(|c| !c.is_empty()));
    assert_eq!(run(&["compare", &md, "minus (", "x"]).status.code(), Some(2));
    assert_eq!(run(&["compare", &md, "x", "s x", "--criterion", "rco"]).status.code(), Some(2));
}

#[test]
fn precedence_search_from_the_command_line() {
    let o = run(&["check", &path("lapply_unannotated.trs"), "--search-precedence"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("searched precedence: lapply > fcons"), "{text}");
    assert!(text.contains("lapply:lex-rl"));
}

#[test]
fn oracle_dumps_the_fixpoint() {
    let o = run(&["oracle", &path("minus_div.trs"), "--universe-size", "3"]);
    assert_eq!(o.status.code(), Some(0));
    let lines: Vec<String> = stdout(&o).lines().map(str::to_owned).collect();
    assert_eq!(lines, ["s x > x", "s y > y", "s 0 > 0"]);
    assert_eq!(run(&["oracle", &path("process_algebra.trs")]).status.code(), Some(2));
}
