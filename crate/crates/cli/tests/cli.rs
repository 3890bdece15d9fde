use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_metacover")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn alexander_outputs() {
    let o = run(&["alexander", "4_1"]);
    assert_eq!((o.status.code(), stdout(&o).trim()), (Some(0), "t^2 - 3*t + 1"));
    let o = run(&["alexander", "3_1", "--mod", "3"]);
    assert_eq!(stdout(&o).trim(), "((t + 1)^2, 3)");
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(run(&["alexander", "nosuch"]).status.code(), Some(2));
    assert_eq!(run(&["rep", "3_1", "--mod", "9"]).status.code(), Some(2));
    assert_eq!(run(&["minimal", "3_1", "--cap", "11"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn minimal_lines() {
    assert_eq!(stdout(&run(&["minimal", "7_4"])).trim(), "7_4, 3: Yes, ((t + 1)^2, 3)");
    assert_eq!(stdout(&run(&["minimal", "6_2"])).trim(), "6_2, 5: No, ((t^2 + t + 1)^2, 5)");
    assert_eq!(stdout(&run(&["minimal", "unknot"])).trim(), "unknot: none ≤ 8");
}

#[test]
fn table_cells_and_stability() {
    let args = ["table", "--knots", "3_1,5_2,6_1", "--primes", "2,3", "--workers", "3"];
    let a = run(&args);
    assert_eq!(a.status.code(), Some(0));
    let text = stdout(&a);
    assert!(text.contains("3_1\t[0^4]\t[0^3]\n\t[0, 2^2]\t[0, 3]"), "{text}");
    assert!(text.contains("5_2\t∅"), "{text}");
    assert!(text.contains("6_1\t∅\t[0^3, 3]\n\t∅\t[0, 9]"), "{text}");
    assert_eq!(stdout(&run(&args)), text);
}

#[test]
fn table_diff_against_stored_values() {
    let golden = concat!(env!("CARGO_MANIFEST_DIR"), "/../core/data/golden.json");
    let o = run(&["table", "--knots", "3_1,4_1", "--primes", "2,3,5", "--diff", golden]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let o = run(&["table", "--knots", "5_2", "--primes", "3", "--diff", golden]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn knot_table_override() {
    let dir = std::env::temp_dir().join(format!("metacover-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("knots.json");
    std::fs::write(&path, "not json").unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_metacover"))
        .args(["alexander", "3_1"])
        .env("METACOVER_KNOT_TABLE", &path)
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn json_and_selftest() {
    let o = run(&["--format", "json", "bounds", "4_1"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["knot"], "4_1");
    assert_eq!(run(&["selftest"]).status.code(), Some(0));
}
