use std::path::PathBuf;
use std::process::{Command, Output};

fn lepage(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lepage")).args(args).output().unwrap()
}

fn fixture_file(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "fixtures", name].iter().collect();
    p.to_str().unwrap().to_string()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("lepage-bin-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn fixtures_list_names_every_problem() {
    let o = lepage(&["fixtures", "list"]);
    assert_eq!(o.status.code(), Some(0));
    let text = String::from_utf8(o.stdout).unwrap();
    assert_eq!(text.lines().count(), 12);
    assert!(text.lines().any(|l| l.starts_with("sundermeyer-2b") && l.contains("alpha=0") && l.contains("beta=0")));
}

#[test]
fn exit_codes_follow_the_verdict() {
    assert_eq!(lepage(&["fixtures", "run", "sundermeyer-1a"]).status.code(), Some(0));
    assert_eq!(lepage(&["fixtures", "run", "inconsistent"]).status.code(), Some(1));
    assert_eq!(lepage(&["analyze", &fixture_file("inconsistent.prob")]).status.code(), Some(1));
    // the worst verdict wins
    assert_eq!(lepage(&["fixtures", "run", "affine", "inconsistent"]).status.code(), Some(1));
}

#[test]
fn usage_errors_exit_64() {
    assert_eq!(lepage(&["analyze"]).status.code(), Some(64));
    assert_eq!(lepage(&["frobnicate"]).status.code(), Some(64));
    assert_eq!(lepage(&["fixtures", "run", "no-such-fixture"]).status.code(), Some(64));
    assert_eq!(lepage(&["analyze", "--param", "alpha", &fixture_file("sundermeyer.prob")]).status.code(), Some(64));
    assert_eq!(lepage(&["--help"]).status.code(), Some(0));
}

#[test]
fn bad_input_exits_65() {
    let p = scratch("broken.prob");
    std::fs::write(&p, "name = broken\n[chart]\nindependent = x\nfield = u\n[forms]\ngenerator = d(u) - w*d(x)\n").unwrap();
    let o = lepage(&["analyze", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(65));
    assert!(String::from_utf8(o.stderr).unwrap().contains("line 6"));
    assert_eq!(lepage(&["analyze", scratch("missing.prob").to_str().unwrap()]).status.code(), Some(65));
}

#[test]
fn structured_output_is_json() {
    let o = lepage(&["fixtures", "run", "saunders", "--format", "structured"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["verdict"], "involutive");
    assert_eq!(v["steps"].as_array().unwrap().last().unwrap()["characters"], serde_json::json!([4, 0]));
    // timing goes to stderr only
    assert!(String::from_utf8(o.stderr).unwrap().contains("saunders: involutive in"));
}

#[test]
fn out_flag_writes_the_report() {
    let p = scratch("report.txt");
    let o = lepage(&["fixtures", "run", "affine", "--out", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let direct = lepage(&["fixtures", "run", "affine"]).stdout;
    assert_eq!(std::fs::read(&p).unwrap(), direct);
}

#[test]
fn params_on_the_command_line_match_the_fixture() {
    let file = fixture_file("sundermeyer.prob");
    let cli = lepage(&["analyze", &file, "--param", "alpha=0", "--param", "beta=1", "--format", "structured"]);
    let fx = lepage(&["fixtures", "run", "sundermeyer-2a", "--format", "structured"]);
    assert_eq!(cli.status.code(), Some(0));
    assert_eq!(cli.stdout, fx.stdout);
}

#[test]
fn parallel_runs_keep_input_order() {
    let names = ["maxwell", "sundermeyer-1a", "saunders", "affine"];
    let mut serial = vec!["fixtures", "run"];
    serial.extend(names);
    let mut parallel = serial.clone();
    parallel.extend(["--jobs", "4"]);
    let a = lepage(&serial);
    let b = lepage(&parallel);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let one_by_one: Vec<u8> = names.iter().flat_map(|n| lepage(&["fixtures", "run", n]).stdout).collect();
    assert_eq!(a.stdout, one_by_one);
}
