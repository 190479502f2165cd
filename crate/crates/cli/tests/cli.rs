use std::process::{Command, Output};

fn nambu(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nambu")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn failing_check_exits_one_with_witness() {
    let o = nambu(&["nambu-check", "r6_nondecomposable"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("witness alpha"));
}

#[test]
fn errors_exit_two() {
    assert_eq!(nambu(&["validate", "no_such_model"]).status.code(), Some(2));
    assert_eq!(nambu(&["frobnicate"]).status.code(), Some(2));

    let dir = std::env::temp_dir().join(format!("nambu-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("bad.toml");
    std::fs::write(&bad, "name = \"x\"\n[algebroid]\nkind = \"tangent\"\nrank = 2\n").unwrap();
    let o = nambu(&["--json", "validate", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(v["error"].as_str().unwrap().starts_with("line 3"));
}

#[test]
fn emitted_examples_load_from_disk() {
    let dir = std::env::temp_dir().join(format!("nambu-emit-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("copy.toml");
    let o = nambu(&["examples", "--emit", "pointalg4"]);
    assert!(o.status.success());
    std::fs::write(&path, &o.stdout).unwrap();
    let o = nambu(&["modular", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("X1^X2"));
}

#[test]
fn listing_names_every_builtin() {
    let out = stdout(&nambu(&["examples", "--list"]));
    for e in nambu_core::library::EXAMPLES {
        assert!(out.contains(e.name), "{}", e.name);
    }
}

#[test]
fn json_reports_have_stable_shape() {
    let o = nambu(&["--json", "elw-compare", "r3_expvol"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["model"], "r3_expvol");
    assert!(v["reports"].as_array().unwrap().iter().all(|r| r.get("elapsed_ms").map_or(true, |t| t.is_null())));
    assert!(o.stdout.windows(3).any(|w| w == b"\"3\""));
}
